//! Serializable command reports and their plain-text rendering.
//!
//! Profiles, players and strategies are one-based here. Exact values are
//! strings in canonical rational form (`"3"`, `"-1/2"`).

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub profile: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// `V_k` at the profile.
    pub v_k: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub k: usize,
    pub equilibria: Vec<ProfileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    /// Profile and `k` pairs checked.
    pub checks: usize,
    pub disagreements: usize,
    /// Kind of clique cover used by the grouped criterion.
    pub cover: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub players: usize,
    pub strategy_counts: Vec<usize>,
    pub max_k: usize,
    pub levels: Vec<Level>,
    pub cross_check: CrossCheck,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiReport {
    pub n: usize,
    pub k: usize,
    pub mode: String,
    /// ξ(n,k) in exact mode, an upper bound in greedy mode.
    pub value: usize,
    pub lower_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    pub classes: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub point: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub coords: Vec<f64>,
    pub equilibria: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    /// Strategy values of the witness (grid coordinates for interval games).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub k: usize,
    pub kind: String,
    pub rows: Vec<ScanRow>,
    pub nonempty_points: Vec<usize>,
    pub fixed_point_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LateralityRow {
    pub n: usize,
    pub profile: Vec<usize>,
    pub leader: usize,
    /// Largest `k` for which the profile is k-lateral (0 if none).
    pub laterality: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCount {
    pub n: usize,
    pub k: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedBlock {
    pub player: String,
    pub strategies: Vec<String>,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Demo {
    Date {
        levels: Vec<Level>,
        v2_at_cc: String,
    },
    Majority {
        profiles: Vec<LateralityRow>,
        level_sizes: Vec<LevelCount>,
    },
    Inspection {
        w: String,
        g: String,
        h: String,
        v: String,
        pure_equilibria: usize,
        equilibrium: Vec<MixedBlock>,
        mixed_v1: f64,
        indifference_gaps: Vec<f64>,
    },
    Cournot {
        price_intercept: f64,
        price_slope: f64,
        best_response_1: [f64; 2],
        best_response_2: [f64; 2],
        equilibrium: [f64; 2],
        price: f64,
        profits: [f64; 2],
        cross_partials: [f64; 2],
        deviation: [f64; 2],
        deviation_profit: f64,
        grid_m: usize,
        grid_equilibria: Vec<[f64; 2]>,
    },
    Witness3 {
        seed: u64,
        tensors: Vec<Vec<String>>,
        min_corner: String,
        max_slack: String,
        verified: bool,
        enumerated: bool,
        mixed_v2: f64,
        segment: Vec<f64>,
    },
}

/// Top-level JSON object; `command` names the subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Analyze(AnalyzeReport),
    Xi(XiReport),
    Scan(ScanReport),
    Demo { demo: Demo },
}

fn tuple(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn reals(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `c + s·var` as `"c - |s| var"` or `"c + s var"`.
fn affine([c, s]: &[f64; 2], var: &str) -> String {
    if *s < 0.0 {
        format!("{c} - {} {var}", -s)
    } else {
        format!("{c} + {s} {var}")
    }
}

fn set(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn levels(out: &mut String, levels: &[Level]) -> fmt::Result {
    for level in levels {
        if level.equilibria.is_empty() {
            writeln!(out, "NE_{}: none", level.k)?;
            continue;
        }
        writeln!(out, "NE_{}: {} profile(s)", level.k, level.equilibria.len())?;
        for e in &level.equilibria {
            write!(out, "  {}", tuple(&e.profile))?;
            if let Some(labels) = &e.labels {
                write!(out, " = ({})", labels.join(","))?;
            }
            writeln!(out, "  V_{} = {}", level.k, e.v_k)?;
        }
    }
    Ok(())
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.render(&mut out).expect("writing to a String");
        out
    }

    fn render(&self, out: &mut String) -> fmt::Result {
        match self {
            Report::Analyze(r) => {
                writeln!(out, "players: {}  strategies: {:?}", r.players, r.strategy_counts)?;
                levels(out, &r.levels)?;
                match &r.cross_check.skipped {
                    Some(why) => writeln!(out, "criteria cross-check skipped: {why}")?,
                    None => writeln!(
                        out,
                        "criteria cross-check ({} cover): {} checks, {} disagreements",
                        r.cross_check.cover, r.cross_check.checks, r.cross_check.disagreements
                    )?,
                }
                if let Some(note) = &r.note {
                    writeln!(out, "note: {note}")?;
                }
            }
            Report::Xi(r) => {
                let rel = if r.mode == "exact" { "=" } else { "<=" };
                writeln!(out, "xi({},{}) {rel} {}", r.n, r.k, r.value)?;
                writeln!(out, "lower bound: {}", r.lower_bound)?;
                if let Some(c) = &r.certificate {
                    writeln!(out, "certificate: {c}")?;
                }
                for (i, class) in r.classes.iter().enumerate() {
                    let sets: Vec<String> = class.iter().map(|s| set(s)).collect();
                    writeln!(out, "  class {}: {}", i + 1, sets.join(" "))?;
                }
            }
            Report::Scan(r) => {
                writeln!(out, "{} family, k = {}", r.kind, r.k)?;
                writeln!(out, "point  parameter  NE_{}  witness", r.k)?;
                for row in &r.rows {
                    let name = row.label.clone().unwrap_or_else(|| reals(&row.coords));
                    let witness = match (&row.witness_values, &row.witness) {
                        (Some(v), _) if r.kind == "continuous" => reals(v),
                        (_, Some(w)) => tuple(w),
                        _ => "-".into(),
                    };
                    writeln!(out, "{:>5}  {name}  {}  {witness}", row.point, row.equilibria)?;
                }
                writeln!(
                    out,
                    "nonempty at {} of {} points; fixed-point check: {}",
                    r.nonempty_points.len(),
                    r.rows.len(),
                    r.fixed_point_check
                )?;
            }
            Report::Demo { demo } => demo.render(out)?,
        }
        Ok(())
    }
}

impl Demo {
    fn render(&self, out: &mut String) -> fmt::Result {
        match self {
            Demo::Date { levels: l, v2_at_cc } => {
                writeln!(out, "date dilemma")?;
                levels(out, l)?;
                writeln!(out, "V_2(C,C) = {v2_at_cc}")?;
            }
            Demo::Majority { profiles, level_sizes } => {
                writeln!(out, "majority voting")?;
                writeln!(out, "  n  profile          leader  laterality")?;
                for p in profiles {
                    writeln!(
                        out,
                        "{:>3}  {:<15}  {:>6}  {:>10}",
                        p.n,
                        tuple(&p.profile),
                        p.leader,
                        p.laterality
                    )?;
                }
                for c in level_sizes {
                    writeln!(out, "  n = {}: |NE_{}| = {}", c.n, c.k, c.count)?;
                }
            }
            Demo::Inspection {
                w,
                g,
                h,
                v,
                pure_equilibria,
                equilibrium,
                mixed_v1,
                indifference_gaps,
            } => {
                writeln!(out, "inspection game (w={w}, g={g}, h={h}, v={v})")?;
                writeln!(out, "pure equilibria: {pure_equilibria} (no pure equilibria)")?;
                for b in equilibrium {
                    let parts: Vec<String> = b
                        .strategies
                        .iter()
                        .zip(&b.probabilities)
                        .map(|(s, p)| format!("{s} {p}"))
                        .collect();
                    writeln!(out, "  {}: {}", b.player, parts.join(", "))?;
                }
                writeln!(out, "mixed V_1 = {mixed_v1:e}")?;
                writeln!(out, "indifference gaps: {}", reals(indifference_gaps))?;
            }
            Demo::Cournot {
                price_intercept,
                price_slope,
                best_response_1,
                best_response_2,
                equilibrium,
                price,
                profits,
                cross_partials,
                deviation,
                deviation_profit,
                grid_m,
                grid_equilibria,
            } => {
                writeln!(out, "Cournot duopoly, price {price_intercept} - {price_slope}(x1 + x2)")?;
                writeln!(
                    out,
                    "best responses: x1 = {}, x2 = {}",
                    affine(best_response_1, "x2"),
                    affine(best_response_2, "x1")
                )?;
                writeln!(out, "equilibrium: {}", reals(equilibrium))?;
                writeln!(out, "price: {price}")?;
                writeln!(out, "profits: {}", reals(profits))?;
                writeln!(out, "cross partials: {}", reals(cross_partials))?;
                writeln!(
                    out,
                    "joint deviation {} gives firm 1 {deviation_profit}",
                    reals(deviation)
                )?;
                let grid: Vec<String> = grid_equilibria.iter().map(|p| reals(p)).collect();
                writeln!(out, "grid m = {grid_m}: 1-lateral equilibria {}", grid.join(" "))?;
            }
            Demo::Witness3 {
                seed,
                tensors,
                min_corner,
                max_slack,
                verified,
                enumerated,
                mixed_v2,
                segment,
            } => {
                writeln!(out, "2-lateral witness at (2,2,2), seed {seed}")?;
                for (name, t) in ["X_A", "X_B", "X_C"].iter().zip(tensors) {
                    writeln!(out, "  {name} = [{}]", t.join(", "))?;
                }
                writeln!(out, "corner minimum: {min_corner}, largest slack: {max_slack}")?;
                writeln!(
                    out,
                    "inequalities hold: {verified}; enumeration confirms: {enumerated}; mixed V_2 = {mixed_v2:e}"
                )?;
                writeln!(
                    out,
                    "witness game N=3, m=4: (a,1,1) in NE_2 \\ NE_3 for a in {}",
                    reals(segment)
                )?;
            }
        }
        Ok(())
    }
}
