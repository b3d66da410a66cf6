use std::fmt::{Debug, Display};

use crate::rational::Rational;

/// Default absolute tolerance for float payoff comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Scalar type of a payoff tensor.
///
/// Exact types ignore the tolerance argument; `f64` compares with it.
pub trait Payoff: Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;

    /// `self > other` by more than `tol`.
    fn exceeds(&self, other: &Self, tol: f64) -> bool;

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        !self.exceeds(other, tol) && !other.exceeds(self, tol)
    }

    fn is_exact() -> bool;
}

impl Payoff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn exceeds(&self, other: &Self, _tol: f64) -> bool {
        self > other
    }

    fn is_exact() -> bool {
        true
    }
}

impl Payoff for f64 {
    fn zero() -> Self {
        0.0
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn exceeds(&self, other: &Self, tol: f64) -> bool {
        *self > *other + tol
    }

    fn is_exact() -> bool {
        false
    }
}

/// Largest element under `PartialOrd`; `None` for an empty iterator.
pub(crate) fn max_of<S: Payoff>(values: impl IntoIterator<Item = S>) -> Option<S> {
    values.into_iter().fold(None, |best, v| match best {
        Some(b) if b >= v => Some(b),
        _ => Some(v),
    })
}
