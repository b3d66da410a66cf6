//! Run settings shared by the exhaustive searches, and the data-parallel
//! helpers behind them.
//!
//! With the `parallel` feature (default) `Execution::Parallel` fans work out
//! over rayon's pool; without it every call runs sequentially. Results are
//! collected in input order either way, so output never depends on the
//! schedule.

use crate::payoff::DEFAULT_TOL;

/// Default bound on the number of pure profiles an exhaustive search visits.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `Parallel` only when the crate was built with rayon.
    pub fn effective(self) -> Execution {
        if cfg!(feature = "parallel") {
            self
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    /// Absolute tolerance for float payoff comparisons. Exact payoffs ignore it.
    pub tol: f64,
    /// Maximum number of pure profiles (or joint deviations) to enumerate.
    pub budget: usize,
    pub execution: Execution,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
            execution: Execution::default(),
        }
    }
}

impl Config {
    pub fn sequential() -> Self {
        Config {
            execution: Execution::Sequential,
            ..Config::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Indices in `0..n` satisfying `pred`, ascending.
pub(crate) fn filter_range<F>(exec: Execution, n: usize, pred: F) -> Vec<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().filter(|&i| pred(i)).collect()
        }
        _ => (0..n).filter(|&i| pred(i)).collect(),
    }
}

/// `f` over `items`, results in input order.
pub(crate) fn map_slice<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// `f` over `0..n`, results in index order.
pub(crate) fn map_range<U, F>(exec: Execution, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match exec.effective() {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}
