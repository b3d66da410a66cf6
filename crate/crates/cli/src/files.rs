//! TOML game and family files.

use std::fs;
use std::path::{Path, PathBuf};

use klateral::family::{FamilyKind, FiberGame};
use klateral::{parse_expr, ContinuousGame, FiniteGame, GameFamily, ParameterPoint, Rational};
use serde::Deserialize;

use crate::CliError;

/// A payoff entry: integer, decimal, or a string holding either.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Number::Int(v) => Ok(Rational::from(*v)),
            Number::Float(v) => Rational::from_f64_decimal(*v).map_err(|e| e.to_string()),
            Number::Text(s) => s.trim().parse::<Rational>().map_err(|e| format!("{s:?}: {e}")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    pub strategy_counts: Vec<usize>,
    /// One flattened tensor per player, last player's index varying fastest.
    pub payoffs: Vec<Vec<Number>>,
    #[serde(default)]
    pub labels: Option<Vec<Vec<String>>>,
}

impl GameFile {
    pub fn into_game(self) -> Result<FiniteGame<Rational>, CliError> {
        if self.players != self.strategy_counts.len() {
            return Err(CliError::Invalid(format!(
                "players = {} but strategy_counts has {} entries",
                self.players,
                self.strategy_counts.len()
            )));
        }
        let mut tensors = Vec::with_capacity(self.payoffs.len());
        for (i, row) in self.payoffs.iter().enumerate() {
            let tensor = row
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v.to_rational()
                        .map_err(|e| CliError::Invalid(format!("payoffs[{i}][{j}]: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            tensors.push(tensor);
        }
        let violations = klateral::game::validate(&self.strategy_counts, &tensors);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(CliError::Invalid(lines.join("; ")));
        }
        let game = FiniteGame::new(self.strategy_counts, tensors)?;
        match self.labels {
            Some(labels) => Ok(game.with_labels(labels)?),
            None => Ok(game),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn parse_toml<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

pub fn load_game(path: &Path) -> Result<FiniteGame<Rational>, CliError> {
    let file: GameFile = parse_toml(path, &read(path)?)?;
    file.into_game().map_err(|e| e.context(&path.display().to_string()))
}

/// A game given inline or as a path relative to the family file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GameRef {
    Path(PathBuf),
    Inline(GameFile),
}

impl GameRef {
    fn resolve(self, base: &Path, what: &str) -> Result<FiniteGame<Rational>, CliError> {
        match self {
            GameRef::Path(p) => load_game(&base.join(p)),
            GameRef::Inline(g) => g.into_game().map_err(|e| e.context(what)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberEntry {
    pub coords: Vec<f64>,
    #[serde(default)]
    pub label: Option<String>,
    pub game: GameRef,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPoint {
    /// Values of `b1, b2, …`.
    pub params: Vec<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyFile {
    /// One finite game per parameter point.
    Finite { fibers: Vec<FiberEntry> },
    /// `(1 − t)·start + t·end` for each listed `t`.
    Segment { start: GameRef, end: GameRef, t: Vec<f64> },
    /// Interval game whose payoff formulas use the parameters `b1..bM`.
    Continuous {
        m: usize,
        intervals: Vec<[f64; 2]>,
        payoffs: Vec<String>,
        grid: Vec<GridPoint>,
    },
}

pub fn load_family(path: &Path) -> Result<GameFamily, CliError> {
    let file: FamilyFile = parse_toml(path, &read(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let ctx = path.display().to_string();
    build_family(file, base).map_err(|e| e.context(&ctx))
}

pub fn build_family(file: FamilyFile, base: &Path) -> Result<GameFamily, CliError> {
    match file {
        FamilyFile::Finite { fibers } => {
            if fibers.is_empty() {
                return Err(CliError::Invalid("the parameter grid is empty".into()));
            }
            let mut points = Vec::new();
            let mut games = Vec::new();
            for (i, entry) in fibers.into_iter().enumerate() {
                games.push(entry.game.resolve(base, &format!("fibers[{i}]"))?);
                points.push(ParameterPoint {
                    coords: entry.coords,
                    label: entry.label,
                });
            }
            Ok(GameFamily::from_games(points, games)?)
        }
        FamilyFile::Segment { start, end, t } => {
            if t.is_empty() {
                return Err(CliError::Invalid("the parameter grid is empty".into()));
            }
            let g0 = start.resolve(base, "start")?;
            let g1 = end.resolve(base, "end")?;
            Ok(klateral::segment_family(&g0, &g1, &t)?)
        }
        FamilyFile::Continuous {
            m,
            intervals,
            payoffs,
            grid,
        } => {
            if grid.is_empty() {
                return Err(CliError::Invalid("the parameter grid is empty".into()));
            }
            let exprs = payoffs
                .iter()
                .enumerate()
                .map(|(i, f)| parse_expr(f).map_err(|e| CliError::from(e).context(&format!("payoffs[{i}]"))))
                .collect::<Result<Vec<_>, _>>()?;
            let intervals: Vec<(f64, f64)> = intervals.iter().map(|[lo, hi]| (*lo, *hi)).collect();
            let template = ContinuousGame::new(intervals, exprs, grid[0].params.clone())?;
            let points: Vec<ParameterPoint> = grid
                .into_iter()
                .map(|g| ParameterPoint {
                    coords: g.params,
                    label: g.label,
                })
                .collect();
            // Every point must bind the parameters the formulas use.
            for (i, p) in points.iter().enumerate() {
                template
                    .with_params(p.coords.clone())
                    .map_err(|e| CliError::from(e).context(&format!("grid[{i}]")))?;
            }
            Ok(GameFamily::new(points, FamilyKind::Continuous { m }, move |b| {
                template.with_params(b.coords.clone()).map(FiberGame::Continuous)
            })?)
        }
    }
}
