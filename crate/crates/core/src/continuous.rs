//! Games with one scalar strategy per player on a closed interval, payoffs
//! given as [`Expr`] formulas, and the uniform-grid bridge to finite games.

use crate::error::{Error, Result};
use crate::exec::{self, Config};
use crate::expr::{parse_expr, Bindings, Expr};
use crate::game::{FiniteGame, PureProfile};

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousGame {
    intervals: Vec<(f64, f64)>,
    payoffs: Vec<Expr>,
    params: Vec<f64>,
}

impl ContinuousGame {
    /// `payoffs[i]` may reference `x1..xN` and `b1..b{params.len()}`.
    pub fn new(intervals: Vec<(f64, f64)>, payoffs: Vec<Expr>, params: Vec<f64>) -> Result<Self> {
        let n = intervals.len();
        if n == 0 {
            return Err(Error::invalid("a continuous game needs at least one player"));
        }
        if payoffs.len() != n {
            return Err(Error::invalid(format!(
                "{} payoff formulas for {n} players",
                payoffs.len()
            )));
        }
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::invalid(format!(
                    "player {} has invalid strategy interval [{lo}, {hi}]",
                    i + 1
                )));
            }
        }
        for (i, e) in payoffs.iter().enumerate() {
            let (xs, bs) = e.max_indices();
            if xs as usize > n {
                return Err(Error::invalid(format!(
                    "payoff of player {} references x{xs} in a {n}-player game",
                    i + 1
                )));
            }
            if bs as usize > params.len() {
                return Err(Error::invalid(format!(
                    "payoff of player {} references b{bs} but only {} parameters are bound",
                    i + 1,
                    params.len()
                )));
            }
        }
        Ok(ContinuousGame {
            intervals,
            payoffs,
            params,
        })
    }

    /// Parses one formula per player.
    pub fn parse(intervals: Vec<(f64, f64)>, formulas: &[&str], params: Vec<f64>) -> Result<Self> {
        let payoffs = formulas.iter().map(|f| parse_expr(f)).collect::<Result<Vec<_>>>()?;
        ContinuousGame::new(intervals, payoffs, params)
    }

    pub fn num_players(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn formulas(&self) -> &[Expr] {
        &self.payoffs
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Same formulas, new parameter values.
    pub fn with_params(&self, params: Vec<f64>) -> Result<Self> {
        ContinuousGame::new(self.intervals.clone(), self.payoffs.clone(), params)
    }

    pub fn payoff(&self, player: usize, x: &[f64]) -> Result<f64> {
        if x.len() != self.num_players() {
            return Err(Error::invalid(format!(
                "strategy vector has {} entries for a {}-player game",
                x.len(),
                self.num_players()
            )));
        }
        let formula = self
            .payoffs
            .get(player)
            .ok_or_else(|| Error::invalid(format!("player {} out of range", player + 1)))?;
        formula.eval(&Bindings::new(x, &self.params))
    }

    /// Grid node `t` of player `i`: `lo + t (hi − lo) / m`.
    pub fn grid(&self, player: usize, m: usize) -> Vec<f64> {
        let (lo, hi) = self.intervals[player];
        (0..=m).map(|t| lo + t as f64 * (hi - lo) / m as f64).collect()
    }

    pub fn discretize(&self, m: usize) -> Result<Discretized> {
        self.discretize_with(m, &Config::default())
    }

    /// Tabulates payoffs on the `(m+1)^N` grid.
    pub fn discretize_with(&self, m: usize, cfg: &Config) -> Result<Discretized> {
        if m == 0 {
            return Err(Error::invalid("grid resolution must be at least 1"));
        }
        let n = self.num_players();
        let needed = ((m + 1) as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if needed > cfg.budget as u128 {
            return Err(Error::limit("grid profiles", needed, cfg.budget as u128));
        }
        let grids: Vec<Vec<f64>> = (0..n).map(|i| self.grid(i, m)).collect();
        let counts = vec![m + 1; n];
        let shape = FiniteGame::new(counts.clone(), vec![vec![0.0; needed as usize]; n])?;
        let rows = exec::map_range(cfg.execution, needed as usize, |flat| {
            let x = shape.profile_at(flat);
            let point: Vec<f64> = x.0.iter().enumerate().map(|(i, &t)| grids[i][t]).collect();
            (0..n).map(|i| self.payoff(i, &point)).collect::<Result<Vec<f64>>>()
        });
        let mut tensors = vec![Vec::with_capacity(needed as usize); n];
        for row in rows {
            for (tensor, value) in tensors.iter_mut().zip(row?) {
                tensor.push(value);
            }
        }
        Ok(Discretized {
            game: FiniteGame::new(counts, tensors)?,
            grids,
        })
    }
}

/// A continuous game tabulated on a grid, with the node coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Discretized {
    pub game: FiniteGame<f64>,
    pub grids: Vec<Vec<f64>>,
}

impl Discretized {
    /// Strategy values of a grid profile.
    pub fn point(&self, x: &PureProfile) -> Vec<f64> {
        x.0.iter().enumerate().map(|(i, &t)| self.grids[i][t]).collect()
    }

    /// Grid profile at the given strategy values, if every value is a node.
    pub fn profile_of(&self, values: &[f64]) -> Option<PureProfile> {
        if values.len() != self.grids.len() {
            return None;
        }
        values
            .iter()
            .zip(&self.grids)
            .map(|(v, grid)| grid.iter().position(|g| (g - v).abs() <= 1e-12 * (1.0 + v.abs())))
            .collect::<Option<Vec<_>>>()
            .map(PureProfile::new)
    }

    pub fn step(&self, player: usize) -> f64 {
        let grid = &self.grids[player];
        if grid.len() < 2 {
            0.0
        } else {
            grid[1] - grid[0]
        }
    }
}

/// Best response `Φ(other) = intercept + slope · other` of a duopolist.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearResponse {
    pub intercept: f64,
    pub slope: f64,
}

impl LinearResponse {
    pub fn at(&self, other: f64) -> f64 {
        self.intercept + self.slope * other
    }
}

/// Closed-form analysis of the duopoly with price `a − s (x1 + x2)`, costs
/// `5 x1` and `x2² / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CournotReport {
    pub price_intercept: f64,
    pub price_slope: f64,
    pub best_response_1: LinearResponse,
    pub best_response_2: LinearResponse,
    pub equilibrium: [f64; 2],
    pub price: f64,
    pub profits: [f64; 2],
    /// `∂θ1/∂x2` and `∂θ2/∂x1` at the equilibrium.
    pub cross_partials: [f64; 2],
    /// Joint deviation `(Φ1(0), 0)` that beats firm 1's equilibrium profit.
    pub bilateral_counterexample: [f64; 2],
    pub counterexample_profit: f64,
}

/// Firm 1's constant marginal cost.
pub const COURNOT_COST_1: f64 = 5.0;

pub fn cournot_profit(a: f64, s: f64, x: [f64; 2]) -> [f64; 2] {
    let price = a - s * (x[0] + x[1]);
    [x[0] * price - COURNOT_COST_1 * x[0], x[1] * price - 0.5 * x[1] * x[1]]
}

pub fn cournot_analysis(price_intercept: f64, price_slope: f64) -> Result<CournotReport> {
    let (a, s) = (price_intercept, price_slope);
    if !(a.is_finite() && s.is_finite()) || s <= 0.0 {
        return Err(Error::Degenerate(format!(
            "price slope must be positive and finite, got intercept {a}, slope {s}"
        )));
    }
    // First-order conditions:
    //   a − 5 − 2s x1 − s x2 = 0
    //   a − s x1 − (2s + 1) x2 = 0
    let det = 2.0 * s * (2.0 * s + 1.0) - s * s;
    if det.abs() < 1e-12 {
        return Err(Error::Degenerate("best-response system is singular".into()));
    }
    let br1 = LinearResponse {
        intercept: (a - COURNOT_COST_1) / (2.0 * s),
        slope: -0.5,
    };
    let br2 = LinearResponse {
        intercept: a / (2.0 * s + 1.0),
        slope: -s / (2.0 * s + 1.0),
    };
    let x1 = ((a - COURNOT_COST_1) * (2.0 * s + 1.0) - s * a) / det;
    let x2 = (2.0 * s * a - s * (a - COURNOT_COST_1)) / det;
    if x1 < 0.0 || x2 < 0.0 {
        return Err(Error::Degenerate(format!(
            "interior equilibrium ({x1}, {x2}) leaves the nonnegative quadrant"
        )));
    }
    let equilibrium = [x1, x2];
    let deviation = [br1.at(0.0), 0.0];
    Ok(CournotReport {
        price_intercept: a,
        price_slope: s,
        best_response_1: br1,
        best_response_2: br2,
        equilibrium,
        price: a - s * (x1 + x2),
        profits: cournot_profit(a, s, equilibrium),
        cross_partials: [-s * x1, -s * x2],
        bilateral_counterexample: deviation,
        counterexample_profit: cournot_profit(a, s, deviation)[0],
    })
}

/// Payoff formulas of the duopoly; `b1` is the price intercept, `b2` the slope.
pub const COURNOT_FORMULAS: [&str; 2] = ["x1*(b1 - b2*(x1 + x2)) - 5*x1", "x2*(b1 - b2*(x1 + x2)) - 0.5*x2^2"];

/// The duopoly on `[0, upper]²`. With the default upper bound 200 every best
/// response (at most `(a − 5)/(2s)`) stays inside for intercepts up to 205.
pub fn cournot_game(price_intercept: f64, price_slope: f64, upper: f64) -> Result<ContinuousGame> {
    ContinuousGame::parse(
        vec![(0.0, upper); 2],
        &COURNOT_FORMULAS,
        vec![price_intercept, price_slope],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::Analyzer;

    #[test]
    fn cournot_closed_form_defaults() {
        let r = cournot_analysis(100.0, 0.5).unwrap();
        assert_eq!(
            r.best_response_1,
            LinearResponse {
                intercept: 95.0,
                slope: -0.5
            }
        );
        assert_eq!(
            r.best_response_2,
            LinearResponse {
                intercept: 50.0,
                slope: -0.25
            }
        );
        assert!((r.equilibrium[0] - 80.0).abs() < 1e-9);
        assert!((r.equilibrium[1] - 30.0).abs() < 1e-9);
        assert!((r.price - 45.0).abs() < 1e-9);
        assert!((r.profits[0] - 3200.0).abs() < 1e-9);
        assert!((r.profits[1] - 900.0).abs() < 1e-9);
        assert_eq!(r.bilateral_counterexample, [95.0, 0.0]);
        assert!((r.counterexample_profit - 4512.5).abs() < 1e-9);
        assert!((r.cross_partials[0] + 40.0).abs() < 1e-9);
        assert!((r.cross_partials[1] + 15.0).abs() < 1e-9);
    }

    #[test]
    fn cournot_degenerate_parameters() {
        assert!(matches!(cournot_analysis(100.0, 0.0), Err(Error::Degenerate(_))));
        assert!(matches!(cournot_analysis(100.0, -1.0), Err(Error::Degenerate(_))));
        assert!(matches!(cournot_analysis(2.0, 0.5), Err(Error::Degenerate(_))));
    }

    #[test]
    fn best_responses_are_fixed_point() {
        for a in [50.0, 80.0, 100.0, 150.0] {
            let r = cournot_analysis(a, 0.5).unwrap();
            let [x1, x2] = r.equilibrium;
            assert!((r.best_response_1.at(x2) - x1).abs() < 1e-9);
            assert!((r.best_response_2.at(x1) - x2).abs() < 1e-9);
        }
    }

    #[test]
    fn constructor_validation() {
        let e = parse_expr("x3").unwrap();
        assert!(ContinuousGame::new(vec![(0.0, 1.0); 2], vec![e.clone(), e], vec![]).is_err());
        let e = parse_expr("b2 * x1").unwrap();
        assert!(ContinuousGame::new(vec![(0.0, 1.0)], vec![e.clone()], vec![1.0]).is_err());
        assert!(ContinuousGame::new(vec![(0.0, 1.0)], vec![e.clone()], vec![1.0, 2.0]).is_ok());
        assert!(ContinuousGame::new(vec![(1.0, 0.0)], vec![e.clone()], vec![1.0, 2.0]).is_err());
        assert!(ContinuousGame::new(vec![], vec![], vec![]).is_err());
    }

    #[test]
    fn endpoint_grid_has_two_nodes_per_player() {
        let g = ContinuousGame::parse(vec![(0.0, 1.0); 3], &["x1", "x2", "x3"], vec![]).unwrap();
        let d = g.discretize(1).unwrap();
        assert_eq!(d.game.num_profiles(), 8);
        assert_eq!(d.grids[0], vec![0.0, 1.0]);
        assert!(g.discretize(0).is_err());
    }

    #[test]
    fn discretize_respects_budget() {
        let g = ContinuousGame::parse(vec![(0.0, 1.0); 3], &["x1", "x2", "x3"], vec![]).unwrap();
        let err = g.discretize_with(200, &Config::default()).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn cournot_grid_equilibrium() {
        let g = cournot_game(100.0, 0.5, 200.0).unwrap();
        let d = g.discretize(400).unwrap();
        assert_eq!(d.step(0), 0.5);
        let ne = Analyzer::new(&d.game).enumerate_k_lateral(1).unwrap();
        let points: Vec<Vec<f64>> = ne.iter().map(|x| d.point(x)).collect();
        assert_eq!(points, vec![vec![80.0, 30.0]]);
        assert!(Analyzer::new(&d.game).enumerate_k_lateral(2).unwrap().is_empty());
    }

    #[test]
    fn cournot_first_order_conditions_by_finite_differences() {
        let g = cournot_game(100.0, 0.5, 200.0).unwrap();
        let r = cournot_analysis(100.0, 0.5).unwrap();
        let h = 1e-5;
        let partial = |player: usize, var: usize| {
            let mut up = r.equilibrium.to_vec();
            let mut down = r.equilibrium.to_vec();
            up[var] += h;
            down[var] -= h;
            (g.payoff(player, &up).unwrap() - g.payoff(player, &down).unwrap()) / (2.0 * h)
        };
        // Own partials vanish up to rounding: eps * |θ| / h with |θ| <= 3200.
        let noise = f64::EPSILON * 3200.0 / h;
        assert!(partial(0, 0).abs() <= noise, "{}", partial(0, 0));
        assert!(partial(1, 1).abs() <= noise, "{}", partial(1, 1));
        assert!((partial(0, 1) - r.cross_partials[0]).abs() <= 1e-4);
        assert!((partial(1, 0) - r.cross_partials[1]).abs() <= 1e-4);
    }
}
