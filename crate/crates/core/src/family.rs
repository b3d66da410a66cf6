//! Games indexed by a finite grid of parameter points.
//!
//! Every fiber of a family has the same number of players and the same
//! strategy counts. Continuous fibers are discretized at a fixed resolution
//! before any equilibrium computation.

use std::fmt;

use crate::continuous::{cournot_game, ContinuousGame, Discretized};
use crate::equilibrium::Analyzer;
use crate::error::{Error, Result};
use crate::exec::{self, Config};
use crate::game::{FiniteGame, PureProfile};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterPoint {
    pub coords: Vec<f64>,
    pub label: Option<String>,
}

impl ParameterPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        ParameterPoint { coords, label: None }
    }

    pub fn labeled(coords: Vec<f64>, label: impl Into<String>) -> Self {
        ParameterPoint {
            coords,
            label: Some(label.into()),
        }
    }
}

impl fmt::Display for ParameterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            return f.write_str(label);
        }
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// What a family's generator produces at one point.
#[derive(Clone, Debug)]
pub enum FiberGame {
    Finite(FiniteGame<Rational>),
    Continuous(ContinuousGame),
}

/// A fiber ready for enumeration.
#[derive(Clone, Debug)]
pub enum Fiber {
    Finite(FiniteGame<Rational>),
    Continuous(Discretized),
}

impl Fiber {
    pub fn strategy_counts(&self) -> &[usize] {
        match self {
            Fiber::Finite(g) => g.strategy_counts(),
            Fiber::Continuous(d) => d.game.strategy_counts(),
        }
    }

    pub fn num_players(&self) -> usize {
        self.strategy_counts().len()
    }

    pub fn enumerate_k_lateral(&self, k: usize, cfg: &Config) -> Result<Vec<PureProfile>> {
        match self {
            Fiber::Finite(g) => Analyzer::with_config(g, *cfg).enumerate_k_lateral(k),
            Fiber::Continuous(d) => Analyzer::with_config(&d.game, *cfg).enumerate_k_lateral(k),
        }
    }

    pub fn is_k_lateral(&self, k: usize, x: &PureProfile, cfg: &Config) -> Result<bool> {
        match self {
            Fiber::Finite(g) => Analyzer::with_config(g, *cfg).is_k_lateral(k, x),
            Fiber::Continuous(d) => Analyzer::with_config(&d.game, *cfg).is_k_lateral(k, x),
        }
    }

    /// Some profile lying in every `Φ̄_I` at itself, for `|I| = k`.
    pub fn find_fixed_point(&self, k: usize, cfg: &Config) -> Result<Option<PureProfile>> {
        fn first<S: crate::payoff::Payoff>(g: &FiniteGame<S>, k: usize, cfg: &Config) -> Result<Option<PureProfile>> {
            let an = Analyzer::with_config(g, *cfg);
            an.check_k(k)?;
            if g.num_profiles() > cfg.budget {
                return Err(Error::limit(
                    "pure profiles",
                    g.num_profiles() as u128,
                    cfg.budget as u128,
                ));
            }
            for x in g.profiles() {
                if an.check_simultaneous_fixed_point(k, &x)? {
                    return Ok(Some(x));
                }
            }
            Ok(None)
        }
        match self {
            Fiber::Finite(g) => first(g, k, cfg),
            Fiber::Continuous(d) => first(&d.game, k, cfg),
        }
    }

    /// Strategy values of a profile: grid coordinates for continuous fibers,
    /// one-based indices otherwise.
    pub fn values(&self, x: &PureProfile) -> Vec<f64> {
        match self {
            Fiber::Finite(_) => x.0.iter().map(|&c| (c + 1) as f64).collect(),
            Fiber::Continuous(d) => d.point(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Finite,
    Continuous { m: usize },
}

type Generator = Box<dyn Fn(&ParameterPoint) -> Result<FiberGame> + Send + Sync>;

pub struct GameFamily {
    points: Vec<ParameterPoint>,
    kind: FamilyKind,
    generator: Generator,
}

impl fmt::Debug for GameFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameFamily")
            .field("points", &self.points)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

/// Result of scanning one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberScan {
    pub index: usize,
    pub point: ParameterPoint,
    /// `NE_k` of the fiber, lexicographic.
    pub equilibria: Vec<PureProfile>,
    pub witness: Option<PureProfile>,
    /// Strategy values of the witness.
    pub witness_values: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub k: usize,
    pub fibers: Vec<FiberScan>,
}

impl ScanResult {
    /// Indices of grid points whose fiber has a `k`-lateral equilibrium.
    pub fn nonempty_points(&self) -> Vec<usize> {
        self.fibers
            .iter()
            .filter(|f| !f.equilibria.is_empty())
            .map(|f| f.index)
            .collect()
    }

    pub fn any_nonempty(&self) -> bool {
        self.fibers.iter().any(|f| !f.equilibria.is_empty())
    }
}

fn name_fiber(err: Error, index: usize, point: &ParameterPoint) -> Error {
    let at = format!("fiber {} at {point}", index + 1);
    match err {
        Error::ResourceLimit {
            what,
            needed,
            bound,
            hint,
        } => Error::ResourceLimit {
            what: format!("{what} in {at}"),
            needed,
            bound,
            hint,
        },
        Error::InvalidArgument(msg) => Error::InvalidArgument(format!("{at}: {msg}")),
        Error::Eval(msg) => Error::Eval(format!("{at}: {msg}")),
        other => other,
    }
}

impl GameFamily {
    pub fn new<F>(points: Vec<ParameterPoint>, kind: FamilyKind, generator: F) -> Result<Self>
    where
        F: Fn(&ParameterPoint) -> Result<FiberGame> + Send + Sync + 'static,
    {
        if points.is_empty() {
            return Err(Error::invalid("a family needs at least one parameter point"));
        }
        let dim = points[0].coords.len();
        if let Some(i) = points.iter().position(|p| p.coords.len() != dim) {
            return Err(Error::invalid(format!(
                "parameter point {} has {} coordinates, expected {dim}",
                i + 1,
                points[i].coords.len()
            )));
        }
        if let FamilyKind::Continuous { m: 0 } = kind {
            return Err(Error::invalid("grid resolution must be at least 1"));
        }
        Ok(GameFamily {
            points,
            kind,
            generator: Box::new(generator),
        })
    }

    /// A family over an explicit list of finite games, one per point.
    pub fn from_games(points: Vec<ParameterPoint>, games: Vec<FiniteGame<Rational>>) -> Result<Self> {
        if points.len() != games.len() {
            return Err(Error::invalid(format!(
                "{} points but {} games",
                points.len(),
                games.len()
            )));
        }
        let table: Vec<(ParameterPoint, FiniteGame<Rational>)> = points.iter().cloned().zip(games).collect();
        GameFamily::new(points, FamilyKind::Finite, move |b| {
            table
                .iter()
                .find(|(p, _)| p == b)
                .map(|(_, g)| FiberGame::Finite(g.clone()))
                .ok_or_else(|| Error::invalid(format!("unknown parameter point {b}")))
        })
    }

    pub fn points(&self) -> &[ParameterPoint] {
        &self.points
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn fiber(&self, b: &ParameterPoint) -> Result<Fiber> {
        self.fiber_with(b, &Config::default())
    }

    pub fn fiber_with(&self, b: &ParameterPoint, cfg: &Config) -> Result<Fiber> {
        let index = self
            .points
            .iter()
            .position(|p| p == b)
            .ok_or_else(|| Error::invalid(format!("{b} is not a grid point of this family")))?;
        self.fiber_at(index, cfg)
    }

    pub fn fiber_at(&self, index: usize, cfg: &Config) -> Result<Fiber> {
        let point = self
            .points
            .get(index)
            .ok_or_else(|| Error::invalid(format!("no grid point {}", index + 1)))?;
        let built = (self.generator)(point).and_then(|game| match (game, self.kind) {
            (FiberGame::Finite(g), FamilyKind::Finite) => Ok(Fiber::Finite(g)),
            (FiberGame::Continuous(c), FamilyKind::Continuous { m }) => {
                c.discretize_with(m, cfg).map(Fiber::Continuous)
            }
            _ => Err(Error::invalid("generator produced a fiber of the wrong kind")),
        });
        built.map_err(|e| name_fiber(e, index, point))
    }

    fn fibers(&self, cfg: &Config) -> Result<Vec<Fiber>> {
        let indices: Vec<usize> = (0..self.points.len()).collect();
        let fibers = exec::map_slice(cfg.execution, &indices, |&i| self.fiber_at(i, cfg))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let shape = fibers[0].strategy_counts().to_vec();
        for (i, fiber) in fibers.iter().enumerate() {
            if fiber.strategy_counts() != shape.as_slice() {
                return Err(Error::invalid(format!(
                    "fiber {} at {} has strategy counts {:?}, fiber 1 has {:?}",
                    i + 1,
                    self.points[i],
                    fiber.strategy_counts(),
                    shape
                )));
            }
        }
        Ok(fibers)
    }

    /// `NE_k` of every fiber, in grid order.
    pub fn scan(&self, k: usize, cfg: &Config) -> Result<ScanResult> {
        let fibers = self.fibers(cfg)?;
        let n = fibers[0].num_players();
        if k == 0 || k > n {
            return Err(Error::invalid(format!("coalition size {k} is outside 1..={n}")));
        }
        let indices: Vec<usize> = (0..fibers.len()).collect();
        let rows = exec::map_slice(cfg.execution, &indices, |&i| {
            let fiber = &fibers[i];
            let equilibria = fiber
                .enumerate_k_lateral(k, cfg)
                .map_err(|e| name_fiber(e, i, &self.points[i]))?;
            let witness = equilibria.first().cloned();
            Ok(FiberScan {
                index: i,
                point: self.points[i].clone(),
                witness_values: witness.as_ref().map(|x| fiber.values(x)),
                witness,
                equilibria,
            })
        });
        Ok(ScanResult {
            k,
            fibers: rows.into_iter().collect::<Result<_>>()?,
        })
    }

    /// Whether some fiber has a profile that is a simultaneous fixed point of
    /// all modified best-reply maps of size-`k` coalitions.
    pub fn fiberwise_fixed_point_check(&self, k: usize, cfg: &Config) -> Result<bool> {
        for (i, fiber) in self.fibers(cfg)?.iter().enumerate() {
            let found = fiber
                .find_fixed_point(k, cfg)
                .map_err(|e| name_fiber(e, i, &self.points[i]))?;
            if found.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// The duopoly with price `b − s·(x1 + x2)` over a list of intercepts `b`,
/// each fiber on `[0, 200]²` with `m` grid steps per axis.
pub fn cournot_family(intercepts: &[f64], price_slope: f64, m: usize) -> Result<GameFamily> {
    let points = intercepts.iter().map(|&a| ParameterPoint::new(vec![a])).collect();
    GameFamily::new(points, FamilyKind::Continuous { m }, move |b| {
        cournot_game(b.coords[0], price_slope, 200.0).map(FiberGame::Continuous)
    })
}

/// Entrywise interpolation `(1 − t)·G0 + t·G1` over the given `t` values.
pub fn segment_family(g0: &FiniteGame<Rational>, g1: &FiniteGame<Rational>, ts: &[f64]) -> Result<GameFamily> {
    if g0.strategy_counts() != g1.strategy_counts() {
        return Err(Error::invalid("segment endpoints have different strategy counts"));
    }
    if let Some(t) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::invalid(format!("segment parameter {t} is outside [0, 1]")));
    }
    for &t in ts {
        Rational::from_f64_decimal(t)?;
    }
    let (g0, g1) = (g0.clone(), g1.clone());
    let points = ts.iter().map(|&t| ParameterPoint::new(vec![t])).collect();
    GameFamily::new(points, FamilyKind::Finite, move |b| {
        let t = Rational::from_f64_decimal(b.coords[0])?;
        Ok(FiberGame::Finite(interpolate(&g0, &g1, &t)?))
    })
}

fn interpolate(g0: &FiniteGame<Rational>, g1: &FiniteGame<Rational>, t: &Rational) -> Result<FiniteGame<Rational>> {
    let s = &Rational::one() - t;
    let tensors = g0
        .tensors()
        .iter()
        .zip(g1.tensors())
        .map(|(a, b)| a.iter().zip(b).map(|(p, q)| &(&s * p) + &(t * q)).collect())
        .collect();
    FiniteGame::new(g0.strategy_counts().to_vec(), tensors)
}

/// `0, 1/steps, …, 1`.
pub fn unit_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}
