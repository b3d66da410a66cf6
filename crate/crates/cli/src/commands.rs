use std::path::Path;

use klateral::family::FamilyKind;
use klateral::gallery::{self, elected_leader};
use klateral::kneser::{self, Certificate};
use klateral::mixed::{self, find_2lateral_witness, MixedProfile};
use klateral::{Analyzer, Config, FiniteGame, KneserCover, PureProfile, Rational};

use crate::files;
use crate::report::*;
use crate::CliError;

fn one_based(x: &PureProfile) -> Vec<usize> {
    x.0.iter().map(|c| c + 1).collect()
}

fn entry(
    game: &FiniteGame<Rational>,
    an: &Analyzer<'_, Rational>,
    k: usize,
    x: &PureProfile,
) -> Result<ProfileEntry, CliError> {
    Ok(ProfileEntry {
        profile: one_based(x),
        labels: game
            .labels()
            .map(|names| x.0.iter().enumerate().map(|(i, &c)| names[i][c].clone()).collect()),
        v_k: an.v_k(k, x)?.to_string(),
    })
}

fn levels(game: &FiniteGame<Rational>, cfg: &Config, max_k: usize) -> Result<Vec<Level>, CliError> {
    let an = Analyzer::with_config(game, *cfg);
    let f = an.filtration_up_to(max_k)?;
    f.levels
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let k = i + 1;
            Ok(Level {
                k,
                equilibria: level
                    .iter()
                    .map(|x| entry(game, &an, k, x))
                    .collect::<Result<_, CliError>>()?,
            })
        })
        .collect()
}

fn cover_for(n: usize, k: usize) -> Result<KneserCover, CliError> {
    if n <= kneser::DEFAULT_EXACT_MAX_N {
        Ok(kneser::exact_cover(n, k)?)
    } else {
        Ok(kneser::greedy_cover(n, k)?)
    }
}

/// Runs every equilibrium criterion on every profile and counts profiles
/// where they disagree.
fn cross_check(game: &FiniteGame<Rational>, cfg: &Config, max_k: usize) -> Result<CrossCheck, CliError> {
    let n = game.num_players();
    let checks = game.num_profiles().saturating_mul(max_k);
    let mut report = CrossCheck {
        checks: 0,
        disagreements: 0,
        cover: if n <= kneser::DEFAULT_EXACT_MAX_N {
            "exact"
        } else {
            "greedy"
        }
        .into(),
        skipped: None,
    };
    if checks > cfg.budget {
        report.skipped = Some(format!("{checks} checks exceed the budget of {}", cfg.budget));
        return Ok(report);
    }
    let an = Analyzer::with_config(game, *cfg);
    for k in 1..=max_k {
        let cover = match cover_for(n, k) {
            Ok(c) => c,
            Err(CliError::Limit(why)) => {
                report.skipped = Some(why);
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        for x in game.profiles() {
            let answers = [
                an.is_k_lateral(k, &x)?,
                an.v_k(k, &x)?.is_zero(),
                an.check_fg_criterion(k, &x)?,
                an.check_simultaneous_fixed_point(k, &x)?,
                an.check_grouped_criterion(k, &x, &cover)?,
            ];
            report.checks += 1;
            if answers.iter().any(|&a| a != answers[0]) {
                report.disagreements += 1;
            }
        }
    }
    Ok(report)
}

pub fn analyze(path: &Path, max_k: Option<usize>, cfg: &Config) -> Result<Report, CliError> {
    let game = files::load_game(path)?;
    let n = game.num_players();
    let max_k = max_k.unwrap_or(n);
    if max_k == 0 || max_k > n {
        return Err(CliError::Invalid(format!("--max-k must be in 1..={n}, got {max_k}")));
    }
    let levels = levels(&game, cfg, max_k)?;
    let note = levels[0]
        .equilibria
        .is_empty()
        .then(|| "no pure equilibria".to_string());
    Ok(Report::Analyze(AnalyzeReport {
        players: n,
        strategy_counts: game.strategy_counts().to_vec(),
        max_k,
        cross_check: cross_check(&game, cfg, max_k)?,
        levels,
        note,
    }))
}

pub fn xi(n: usize, k: usize, exact: bool) -> Result<Report, CliError> {
    let lower_bound = kneser::lower_bound(n, k)?;
    let (cover, certificate) = if exact {
        let e = kneser::exact_cover_certified(n, k).map_err(|e| match CliError::from(e) {
            CliError::Limit(m) => CliError::Limit(format!("{m}; rerun with --mode greedy")),
            other => other,
        })?;
        let cert = match e.certificate {
            Certificate::MeetsLowerBound => "meets the counting lower bound".to_string(),
            Certificate::Exhausted { nodes } => format!("branch and bound exhausted after {nodes} nodes"),
        };
        (e.cover, Some(cert))
    } else {
        (kneser::greedy_cover(n, k)?, None)
    };
    Ok(Report::Xi(XiReport {
        n,
        k,
        mode: if exact { "exact" } else { "greedy" }.into(),
        value: cover.len(),
        lower_bound,
        certificate,
        classes: cover
            .classes()
            .iter()
            .map(|class| {
                class
                    .iter()
                    .map(|c| c.members().iter().map(|p| p + 1).collect())
                    .collect()
            })
            .collect(),
    }))
}

pub fn scan(path: &Path, k: usize, cfg: &Config) -> Result<Report, CliError> {
    let family = files::load_family(path)?;
    let result = family.scan(k, cfg)?;
    let fixed_point_check = family.fiberwise_fixed_point_check(k, cfg)?;
    Ok(Report::Scan(ScanReport {
        k,
        kind: match family.kind() {
            FamilyKind::Finite => "finite",
            FamilyKind::Continuous { .. } => "continuous",
        }
        .into(),
        nonempty_points: result.nonempty_points().iter().map(|i| i + 1).collect(),
        rows: result
            .fibers
            .iter()
            .map(|f| ScanRow {
                point: f.index + 1,
                label: f.point.label.clone(),
                coords: f.point.coords.clone(),
                equilibria: f.equilibria.len(),
                witness: f.witness.as_ref().map(one_based),
                witness_values: f.witness_values.clone(),
            })
            .collect(),
        fixed_point_check,
    }))
}

pub const DEMOS: [&str; 5] = ["date", "majority", "inspection", "cournot", "witness3"];

pub fn demo(name: &str, seed: u64, cfg: &Config) -> Result<Report, CliError> {
    let demo = match name {
        "date" => demo_date(cfg)?,
        "majority" => demo_majority(cfg)?,
        "inspection" => demo_inspection(cfg)?,
        "cournot" => demo_cournot(cfg)?,
        "witness3" => demo_witness(seed, cfg)?,
        other => {
            return Err(CliError::Invalid(format!(
                "unknown demo {other:?}; choose one of {}",
                DEMOS.join(", ")
            )))
        }
    };
    Ok(Report::Demo { demo })
}

fn demo_date(cfg: &Config) -> Result<Demo, CliError> {
    let g = gallery::date_dilemma();
    let v2 = Analyzer::with_config(&g, *cfg).v_k(2, &PureProfile::new(vec![0, 0]))?;
    Ok(Demo::Date {
        levels: levels(&g, cfg, 2)?,
        v2_at_cc: v2.to_string(),
    })
}

fn demo_majority(cfg: &Config) -> Result<Demo, CliError> {
    let mut profiles = Vec::new();
    let mut level_sizes = Vec::new();
    for n in 1..=2 {
        let g = gallery::majority_voting(n)?;
        let players = 2 * n + 1;
        let an = Analyzer::with_config(&g, *cfg);
        let unanimous = vec![0; players];
        let mut shown = vec![unanimous];
        // everyone votes 1 except the last n - 1 voters, who back candidate n + 2
        if n >= 2 {
            shown.push((0..players).map(|i| if i < n + 2 { 0 } else { n + 1 }).collect());
        }
        // the first n + 1 voters back candidate 2, the rest candidate 1
        shown.push((0..players).map(|i| if i <= n { 1 } else { 0 }).collect());
        for choices in shown {
            let x = PureProfile::new(choices);
            let mut laterality = 0;
            for k in 1..=players {
                if !an.is_k_lateral(k, &x)? {
                    break;
                }
                laterality = k;
            }
            profiles.push(LateralityRow {
                n,
                leader: elected_leader(x.choices()) + 1,
                profile: one_based(&x),
                laterality,
            });
        }
        for (i, level) in an.filtration()?.levels.iter().enumerate() {
            level_sizes.push(LevelCount {
                n,
                k: i + 1,
                count: level.len(),
            });
        }
    }
    Ok(Demo::Majority { profiles, level_sizes })
}

fn demo_inspection(cfg: &Config) -> Result<Demo, CliError> {
    let (w, g, h, v) = (10, 2, 1, 20);
    let game = gallery::inspection_game(w.into(), g.into(), h.into(), v.into())?;
    let pure = Analyzer::with_config(&game, *cfg).enumerate_k_lateral(1)?;
    let eq = mixed::inspection_equilibrium(w as f64, g as f64, h as f64)?;
    let mut gaps = Vec::new();
    for player in 0..2 {
        let payoff = |j: usize| -> Result<f64, CliError> {
            let mut block = vec![0.0; 2];
            block[j] = 1.0;
            Ok(mixed::mixed_payoff(&game, player, &eq.with_block(player, block)?)?)
        };
        gaps.push((payoff(0)? - payoff(1)?).abs());
    }
    let labels = game.labels().expect("gallery games are labeled");
    Ok(Demo::Inspection {
        w: w.to_string(),
        g: g.to_string(),
        h: h.to_string(),
        v: v.to_string(),
        pure_equilibria: pure.len(),
        equilibrium: ["employee", "boss"]
            .iter()
            .enumerate()
            .map(|(i, name)| MixedBlock {
                player: name.to_string(),
                strategies: labels[i].clone(),
                probabilities: eq.block(i).to_vec(),
            })
            .collect(),
        mixed_v1: mixed::mixed_v_k(&game, 1, &eq)?,
        indifference_gaps: gaps,
    })
}

pub const COURNOT_GRID_M: usize = 400;

fn demo_cournot(cfg: &Config) -> Result<Demo, CliError> {
    let (a, s) = (100.0, 0.5);
    let r = klateral::cournot_analysis(a, s)?;
    let grid = klateral::cournot_game(a, s, 200.0)?.discretize_with(COURNOT_GRID_M, cfg)?;
    let ne = Analyzer::with_config(&grid.game, *cfg).enumerate_k_lateral(1)?;
    Ok(Demo::Cournot {
        price_intercept: a,
        price_slope: s,
        best_response_1: [r.best_response_1.intercept, r.best_response_1.slope],
        best_response_2: [r.best_response_2.intercept, r.best_response_2.slope],
        equilibrium: r.equilibrium,
        price: r.price,
        profits: r.profits,
        cross_partials: r.cross_partials,
        deviation: r.bilateral_counterexample,
        deviation_profit: r.counterexample_profit,
        grid_m: COURNOT_GRID_M,
        grid_equilibria: ne
            .iter()
            .map(|x| {
                let p = grid.point(x);
                [p[0], p[1]]
            })
            .collect(),
    })
}

fn demo_witness(seed: u64, cfg: &Config) -> Result<Demo, CliError> {
    let t = find_2lateral_witness(seed);
    let game = t.game();
    let target = PureProfile::new(vec![1, 1, 1]);
    let enumerated = Analyzer::with_config(&game, *cfg)
        .enumerate_k_lateral(2)?
        .contains(&target);
    let mixed_v2 = mixed::mixed_v_k(&game, 2, &MixedProfile::pure(game.strategy_counts(), &target))?;
    let corners = t.corner_values();
    let d = gallery::witness_game_with(3, 4, cfg)?;
    let an = Analyzer::with_config(&d.game, *cfg);
    let mut segment = Vec::new();
    for a in 0..d.grids[0].len() {
        let x = PureProfile::new(vec![a, 4, 4]);
        if an.is_k_lateral(2, &x)? && !an.is_k_lateral(3, &x)? {
            segment.push(d.grids[0][a]);
        }
    }
    Ok(Demo::Witness3 {
        seed,
        tensors: t
            .tensors
            .iter()
            .map(|x| x.iter().map(|v| v.to_string()).collect())
            .collect(),
        min_corner: corners.iter().min().expect("24 corners").to_string(),
        max_slack: t.max_slack().to_string(),
        verified: t.verify(),
        enumerated,
        mixed_v2,
        segment,
    })
}
