//! Coalition deviations: k-lateral marginal values, best-reply sets, the
//! k-lateral equilibrium test and the equivalent fixed-point criteria.
//!
//! A profile `x` is a k-lateral equilibrium when no coalition `I` of size `k`
//! has a joint deviation `y_I` that raises the payoff of *any* of its members:
//! `θ_i(y_I, x_{-I}) <= θ_i(x)` for all `I`, all `i ∈ I` and all `y_I`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::{self, Config};
use crate::game::{Coalition, FiniteGame, PartialProfile, PureProfile};
use crate::kneser::KneserCover;
use crate::payoff::{max_of, Payoff};

/// `φ_I(x)`: for each member, the best payoff any joint deviation of `I`
/// achieves against `x_{-I}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalVector<S> {
    pub coalition: Coalition,
    /// One value per member, in member order.
    pub values: Vec<S>,
}

impl<S> MarginalVector<S> {
    pub fn get(&self, player: usize) -> Option<&S> {
        let slot = self.coalition.members().iter().position(|&p| p == player)?;
        self.values.get(slot)
    }
}

/// A profitable joint deviation: `player ∈ coalition` gains `gain > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Deviation<S> {
    pub coalition: Coalition,
    pub choice: PartialProfile,
    pub player: usize,
    pub gain: S,
}

/// `NE_1 ⊇ NE_2 ⊇ … ⊇ NE_K`, stored with `levels[k - 1] = NE_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub levels: Vec<Vec<PureProfile>>,
}

impl Filtration {
    pub fn level(&self, k: usize) -> Option<&[PureProfile]> {
        k.checked_sub(1).and_then(|i| self.levels.get(i)).map(Vec::as_slice)
    }

    /// Largest `k` with `x ∈ NE_k`, or 0 if `x` is not even a Nash equilibrium.
    pub fn laterality(&self, x: &PureProfile) -> usize {
        self.levels
            .iter()
            .take_while(|level| level.binary_search(x).is_ok())
            .count()
    }

    pub fn is_nested(&self) -> bool {
        self.levels.windows(2).all(|w| {
            let outer: BTreeSet<_> = w[0].iter().collect();
            w[1].iter().all(|x| outer.contains(x))
        })
    }
}

/// Joint-choice offsets for every coalition of one size.
pub(crate) struct CoalitionTable {
    pub coalition: Coalition,
    pub offsets: Vec<usize>,
}

/// Equilibrium queries against one game under one [`Config`].
#[derive(Clone, Copy, Debug)]
pub struct Analyzer<'g, S> {
    game: &'g FiniteGame<S>,
    cfg: Config,
}

impl<'g, S: Payoff> Analyzer<'g, S> {
    pub fn new(game: &'g FiniteGame<S>) -> Self {
        Analyzer {
            game,
            cfg: Config::default(),
        }
    }

    pub fn with_config(game: &'g FiniteGame<S>, cfg: Config) -> Self {
        Analyzer { game, cfg }
    }

    pub fn game(&self) -> &'g FiniteGame<S> {
        self.game
    }

    pub fn config(&self) -> &Config {
        &self.cfg
    }

    pub(crate) fn tol(&self) -> f64 {
        self.cfg.tol
    }

    pub fn check_k(&self, k: usize) -> Result<()> {
        let n = self.game.num_players();
        if (1..=n).contains(&k) {
            Ok(())
        } else {
            Err(Error::invalid(format!("coalition size {k} out of range 1..={n}")))
        }
    }

    fn check_enumerable(&self, what: &str, count: usize) -> Result<()> {
        if count > self.cfg.budget {
            Err(Error::limit(what, count as u128, self.cfg.budget as u128))
        } else {
            Ok(())
        }
    }

    pub(crate) fn coalition_tables(&self, k: usize) -> Result<Vec<CoalitionTable>> {
        self.check_k(k)?;
        Coalition::all(self.game.num_players(), k)
            .map(|coalition| {
                self.check_enumerable(
                    &format!("joint deviations of coalition {coalition}"),
                    self.game.joint_choices(&coalition),
                )?;
                let offsets = self.game.deviation_offsets(&coalition);
                Ok(CoalitionTable { coalition, offsets })
            })
            .collect()
    }

    fn validate_inputs(&self, coalition: &Coalition, x: &PureProfile) -> Result<()> {
        self.game.check_profile(x)?;
        self.game.check_coalition(coalition)
    }

    /// `φ_I(x)`: exact maxima over all `|E_I|` joint deviations.
    pub fn marginal_values(&self, coalition: &Coalition, x: &PureProfile) -> Result<MarginalVector<S>> {
        self.validate_inputs(coalition, x)?;
        let offsets = self.game.deviation_offsets(coalition);
        let base = self.game.base_without(self.game.index_of(x), x, coalition);
        Ok(self.marginal_from(coalition, &offsets, base))
    }

    fn marginal_from(&self, coalition: &Coalition, offsets: &[usize], base: usize) -> MarginalVector<S> {
        let values = coalition
            .members()
            .iter()
            .map(|&i| {
                max_of(offsets.iter().map(|&o| self.game.payoff_flat(i, base + o).clone()))
                    .expect("a coalition has at least one joint choice")
            })
            .collect();
        MarginalVector {
            coalition: coalition.clone(),
            values,
        }
    }

    /// `Φ_I(x)`: the joint deviations attaining every member's marginal value
    /// at once. Often empty when members' interests conflict.
    pub fn best_reply_set(&self, coalition: &Coalition, x: &PureProfile) -> Result<Vec<PartialProfile>> {
        self.validate_inputs(coalition, x)?;
        let offsets = self.game.deviation_offsets(coalition);
        let base = self.game.base_without(self.game.index_of(x), x, coalition);
        let phi = self.marginal_from(coalition, &offsets, base);
        let tol = self.tol();
        Ok(offsets
            .iter()
            .enumerate()
            .filter(|(_, &o)| {
                coalition
                    .members()
                    .iter()
                    .zip(&phi.values)
                    .all(|(&i, best)| !best.exceeds(self.game.payoff_flat(i, base + o), tol))
            })
            .map(|(c, _)| self.game.joint_choice(coalition, c))
            .collect())
    }

    /// First profitable deviation found, scanning coalitions and joint
    /// choices in lexicographic order.
    pub fn find_deviation(&self, k: usize, x: &PureProfile) -> Result<Option<Deviation<S>>> {
        self.game.check_profile(x)?;
        let tables = self.coalition_tables(k)?;
        Ok(self.deviation_with(&tables, x, self.game.index_of(x)))
    }

    pub(crate) fn deviation_with(
        &self,
        tables: &[CoalitionTable],
        x: &PureProfile,
        flat: usize,
    ) -> Option<Deviation<S>> {
        let tol = self.tol();
        for table in tables {
            let members = table.coalition.members();
            let base = self.game.base_without(flat, x, &table.coalition);
            for (c, &o) in table.offsets.iter().enumerate() {
                for &i in members {
                    let current = self.game.payoff_flat(i, flat);
                    let deviated = self.game.payoff_flat(i, base + o);
                    if deviated.exceeds(current, tol) {
                        return Some(Deviation {
                            coalition: table.coalition.clone(),
                            choice: self.game.joint_choice(&table.coalition, c),
                            player: i,
                            gain: deviated.sub(current),
                        });
                    }
                }
            }
        }
        None
    }

    /// Whether `x` is a k-lateral Nash equilibrium (`k = 1`: Nash).
    pub fn is_k_lateral(&self, k: usize, x: &PureProfile) -> Result<bool> {
        Ok(self.find_deviation(k, x)?.is_none())
    }

    /// `NE_k` in lexicographic order.
    pub fn enumerate_k_lateral(&self, k: usize) -> Result<Vec<PureProfile>> {
        self.check_enumerable("pure profiles", self.game.num_profiles())?;
        let tables = self.coalition_tables(k)?;
        let hits = exec::filter_range(self.cfg.execution, self.game.num_profiles(), |flat| {
            let x = self.game.profile_at(flat);
            self.deviation_with(&tables, &x, flat).is_none()
        });
        Ok(hits.into_iter().map(|flat| self.game.profile_at(flat)).collect())
    }

    /// `NE_1, …, NE_N`.
    pub fn filtration(&self) -> Result<Filtration> {
        self.filtration_up_to(self.game.num_players())
    }

    /// `NE_1, …, NE_max_k`. Each level only re-tests the previous one.
    pub fn filtration_up_to(&self, max_k: usize) -> Result<Filtration> {
        self.check_k(max_k)?;
        let mut levels = vec![self.enumerate_k_lateral(1)?];
        for k in 2..=max_k {
            let tables = self.coalition_tables(k)?;
            let prev = levels.last().expect("level 1 present");
            let keep = exec::map_slice(self.cfg.execution, prev, |x| {
                self.deviation_with(&tables, x, self.game.index_of(x)).is_none()
            });
            let next = prev
                .iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(x, _)| x.clone())
                .collect();
            levels.push(next);
        }
        let out = Filtration { levels };
        assert!(out.is_nested(), "equilibrium filtration must be descending");
        Ok(out)
    }

    /// Coincidence form: `x_I ∈ Φ_I(x)` for every coalition `I` of size `k`.
    pub fn check_fg_criterion(&self, k: usize, x: &PureProfile) -> Result<bool> {
        self.game.check_profile(x)?;
        self.check_k(k)?;
        for coalition in Coalition::all(self.game.num_players(), k) {
            let replies = self.best_reply_set(&coalition, x)?;
            if !replies.contains(&x.restrict(&coalition)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in the modified correspondence `Φ̄_I(x)`: the coalition's
    /// block of `candidate`, played against `x_{-I}`, attains `φ_I(x)` for
    /// every member. The other coordinates of `candidate` are free.
    pub fn modified_best_reply_contains(
        &self,
        coalition: &Coalition,
        x: &PureProfile,
        candidate: &PureProfile,
    ) -> Result<bool> {
        self.game.check_profile(candidate)?;
        let phi = self.marginal_values(coalition, x)?;
        let probe = self.game.compose(x, &candidate.restrict(coalition))?;
        let tol = self.tol();
        Ok(coalition.members().iter().zip(&phi.values).all(|(&i, best)| {
            let value = self.game.payoff(i, &probe).expect("validated profile");
            !best.exceeds(value, tol)
        }))
    }

    /// `x ∈ Φ̄_I(x)` for every coalition `I` of size `k`.
    pub fn check_simultaneous_fixed_point(&self, k: usize, x: &PureProfile) -> Result<bool> {
        self.check_k(k)?;
        for coalition in Coalition::all(self.game.num_players(), k) {
            if !self.modified_best_reply_contains(&coalition, x, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Grouped form: for every class `P` of a Kneser cover, `x` lies in
    /// `Φ̄_P(x) = ⋂_{I ∈ P} Φ̄_I(x)`. Because a class holds pairwise disjoint
    /// coalitions, `Φ̄_P(x)` is the set of profiles whose every `I`-block is in
    /// `Φ_I(x)`.
    pub fn check_grouped_criterion(&self, k: usize, x: &PureProfile, cover: &KneserCover) -> Result<bool> {
        self.game.check_profile(x)?;
        self.check_k(k)?;
        let n = self.game.num_players();
        if cover.n() != n || cover.k() != k {
            return Err(Error::invalid(format!(
                "cover is for K({},{}), game needs K({n},{k})",
                cover.n(),
                cover.k()
            )));
        }
        cover.validate()?;
        for class in cover.classes() {
            for coalition in class {
                let replies = self.best_reply_set(coalition, x)?;
                if !replies.contains(&x.restrict(coalition)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
