//! Finite games in normal form: payoff tensors, pure profiles, coalitions and
//! the `(y_I, x_{-I})` composition of a profile with a coalition's deviation.
//!
//! Players and strategies are indexed from zero in the API. Reports and
//! `Display` impls print them one-based.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::payoff::Payoff;

/// One pure strategy per player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureProfile(pub Vec<usize>);

impl PureProfile {
    pub fn new(choices: Vec<usize>) -> Self {
        PureProfile(choices)
    }

    /// Builds a profile from one-based strategy labels, as written in the docs.
    pub fn one_based(choices: &[usize]) -> Self {
        PureProfile(choices.iter().map(|c| c.saturating_sub(1)).collect())
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The coalition's block `x_I`.
    pub fn restrict(&self, coalition: &Coalition) -> PartialProfile {
        PartialProfile {
            coalition: coalition.clone(),
            choices: coalition.members().iter().map(|&p| self.0[p]).collect(),
        }
    }
}

impl fmt::Display for PureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c + 1).join(","))
    }
}

/// A nonempty, strictly increasing set of player indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(Vec<usize>);

impl Coalition {
    /// Sorts `members`; rejects duplicates, indices `>= num_players` and the
    /// empty coalition.
    pub fn new(num_players: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.is_empty() {
            return Err(Error::invalid("coalition must have at least one member"));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("coalition {members:?} repeats a player")));
        }
        if let Some(&p) = members.iter().find(|&&p| p >= num_players) {
            return Err(Error::invalid(format!(
                "player {} out of range for a {num_players}-player game",
                p + 1
            )));
        }
        Ok(Coalition(members))
    }

    /// All `k`-subsets of `0..n` in lexicographic order.
    pub fn all(n: usize, k: usize) -> impl Iterator<Item = Coalition> {
        (0..n).combinations(k).map(Coalition)
    }

    pub fn grand(n: usize) -> Self {
        Coalition((0..n).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, player: usize) -> bool {
        self.0.binary_search(&player).is_ok()
    }

    pub fn is_disjoint(&self, other: &Coalition) -> bool {
        self.0.iter().all(|p| !other.contains(*p))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().map(|p| p + 1).join(","))
    }
}

/// A joint choice `y_I` of the members of a coalition, in member order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialProfile {
    pub coalition: Coalition,
    pub choices: Vec<usize>,
}

impl fmt::Display for PartialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.choices.iter().map(|c| c + 1).join(","))
    }
}

/// A violated well-formedness rule of a game description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub player: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.player {
            Some(p) => write!(f, "player {}: {}", p + 1, self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Checks a raw game description; an empty result means it is well formed.
pub fn validate<S>(strategy_counts: &[usize], payoffs: &[Vec<S>]) -> Vec<Violation> {
    let mut out = validate_counts(strategy_counts);
    if payoffs.len() != strategy_counts.len() {
        out.push(Violation {
            player: None,
            message: format!("{} payoff tensors for {} players", payoffs.len(), strategy_counts.len()),
        });
    }
    let expected = strategy_counts.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    match expected {
        None => out.push(Violation {
            player: None,
            message: "number of pure profiles overflows".into(),
        }),
        Some(expected) => {
            for (p, tensor) in payoffs.iter().enumerate() {
                if tensor.len() != expected {
                    out.push(Violation {
                        player: Some(p),
                        message: format!("payoff tensor has {} entries, expected {expected}", tensor.len()),
                    });
                }
            }
        }
    }
    out
}

fn validate_counts(strategy_counts: &[usize]) -> Vec<Violation> {
    let mut out = Vec::new();
    if strategy_counts.is_empty() {
        out.push(Violation {
            player: None,
            message: "a game needs at least one player".into(),
        });
    }
    for (p, &d) in strategy_counts.iter().enumerate() {
        if d == 0 {
            out.push(Violation {
                player: Some(p),
                message: "has no strategies; a game with an empty strategy set is the empty game and is rejected"
                    .into(),
            });
        }
    }
    out
}

/// A finite game with one payoff tensor per player.
///
/// Tensors are row-major with the last player's strategy varying fastest, so
/// flat indices enumerate profiles in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGame<S> {
    counts: Vec<usize>,
    strides: Vec<usize>,
    payoffs: Vec<Vec<S>>,
    labels: Option<Vec<Vec<String>>>,
}

impl<S: Payoff> FiniteGame<S> {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<Vec<S>>) -> Result<Self> {
        let violations = validate(&strategy_counts, &payoffs);
        if !violations.is_empty() {
            return Err(Error::invalid(violations.iter().join("; ")));
        }
        let mut strides = vec![1; strategy_counts.len()];
        for p in (0..strategy_counts.len().saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * strategy_counts[p + 1];
        }
        Ok(FiniteGame {
            counts: strategy_counts,
            strides,
            payoffs,
            labels: None,
        })
    }

    /// Builds the tensors by evaluating `f(player, profile)` on every profile.
    pub fn from_fn(strategy_counts: Vec<usize>, mut f: impl FnMut(usize, &PureProfile) -> S) -> Result<Self> {
        let n = strategy_counts.len();
        let violations = validate_counts(&strategy_counts);
        if !violations.is_empty() {
            return Err(Error::invalid(violations.iter().join("; ")));
        }
        let total: usize = strategy_counts.iter().product();
        let mut payoffs: Vec<Vec<S>> = (0..n).map(|_| Vec::with_capacity(total)).collect();
        let mut profile = PureProfile(vec![0; n]);
        for _ in 0..total {
            for (p, tensor) in payoffs.iter_mut().enumerate() {
                tensor.push(f(p, &profile));
            }
            advance(&mut profile.0, &strategy_counts);
        }
        FiniteGame::new(strategy_counts, payoffs)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.counts.len() || labels.iter().zip(&self.counts).any(|(l, &d)| l.len() != d) {
            return Err(Error::invalid("strategy labels do not match strategy counts"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn num_players(&self) -> usize {
        self.counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn num_profiles(&self) -> usize {
        self.payoffs[0].len()
    }

    pub fn tensor(&self, player: usize) -> &[S] {
        &self.payoffs[player]
    }

    pub fn tensors(&self) -> &[Vec<S>] {
        &self.payoffs
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(&self.counts, &self.payoffs)
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player < self.num_players() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "player {} out of range 1..={}",
                player + 1,
                self.num_players()
            )))
        }
    }

    pub fn check_profile(&self, x: &PureProfile) -> Result<()> {
        if x.len() != self.num_players() {
            return Err(Error::invalid(format!(
                "profile {x} has {} entries for a {}-player game",
                x.len(),
                self.num_players()
            )));
        }
        for (p, (&c, &d)) in x.0.iter().zip(&self.counts).enumerate() {
            if c >= d {
                return Err(Error::invalid(format!(
                    "strategy {} of player {} out of range 1..={d}",
                    c + 1,
                    p + 1
                )));
            }
        }
        Ok(())
    }

    pub fn check_coalition(&self, coalition: &Coalition) -> Result<()> {
        match coalition.members().last() {
            Some(&p) if p < self.num_players() => Ok(()),
            _ => Err(Error::invalid(format!(
                "coalition {coalition} is not a coalition of a {}-player game",
                self.num_players()
            ))),
        }
    }

    pub fn index_of(&self, x: &PureProfile) -> usize {
        x.0.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn profile_at(&self, mut flat: usize) -> PureProfile {
        let mut out = vec![0; self.counts.len()];
        for p in (0..self.counts.len()).rev() {
            out[p] = flat % self.counts[p];
            flat /= self.counts[p];
        }
        PureProfile(out)
    }

    /// All profiles in lexicographic (= flat index) order.
    pub fn profiles(&self) -> impl Iterator<Item = PureProfile> + '_ {
        (0..self.num_profiles()).map(|i| self.profile_at(i))
    }

    /// `θ_player(x)`.
    pub fn payoff(&self, player: usize, x: &PureProfile) -> Result<&S> {
        self.check_player(player)?;
        self.check_profile(x)?;
        Ok(&self.payoffs[player][self.index_of(x)])
    }

    pub(crate) fn payoff_flat(&self, player: usize, flat: usize) -> &S {
        &self.payoffs[player][flat]
    }

    /// `(y_I, x_{-I})`: the members of `y`'s coalition play `y`, everyone
    /// else keeps their choice in `x`.
    pub fn compose(&self, x: &PureProfile, y: &PartialProfile) -> Result<PureProfile> {
        self.check_profile(x)?;
        self.check_coalition(&y.coalition)?;
        if y.choices.len() != y.coalition.len() {
            return Err(Error::invalid(format!(
                "partial profile has {} choices for coalition {}",
                y.choices.len(),
                y.coalition
            )));
        }
        let mut out = x.clone();
        for (&p, &c) in y.coalition.members().iter().zip(&y.choices) {
            if c >= self.counts[p] {
                return Err(Error::invalid(format!(
                    "strategy {} of player {} out of range 1..={}",
                    c + 1,
                    p + 1,
                    self.counts[p]
                )));
            }
            out.0[p] = c;
        }
        Ok(out)
    }

    /// Number of joint choices `|E_I|` of a coalition.
    pub fn joint_choices(&self, coalition: &Coalition) -> usize {
        coalition.members().iter().map(|&p| self.counts[p]).product()
    }

    /// Flat-index offsets of every joint choice of `coalition`, in
    /// lexicographic order of the choice, relative to all members playing 0.
    pub(crate) fn deviation_offsets(&self, coalition: &Coalition) -> Vec<usize> {
        let mut offsets = vec![0usize];
        for &p in coalition.members() {
            let stride = self.strides[p];
            offsets = offsets
                .iter()
                .flat_map(|&o| (0..self.counts[p]).map(move |c| o + c * stride))
                .collect();
        }
        offsets
    }

    /// Flat index of `x` with the coalition's coordinates zeroed.
    pub(crate) fn base_without(&self, flat: usize, x: &PureProfile, coalition: &Coalition) -> usize {
        flat - coalition
            .members()
            .iter()
            .map(|&p| x.0[p] * self.strides[p])
            .sum::<usize>()
    }

    /// Decodes the `c`-th joint choice of `coalition` (lexicographic order).
    pub(crate) fn joint_choice(&self, coalition: &Coalition, mut c: usize) -> PartialProfile {
        let members = coalition.members();
        let mut choices = vec![0; members.len()];
        for (slot, &p) in members.iter().enumerate().rev() {
            choices[slot] = c % self.counts[p];
            c /= self.counts[p];
        }
        PartialProfile {
            coalition: coalition.clone(),
            choices,
        }
    }

    /// Applies `f` to every payoff entry.
    pub fn map_payoffs<T: Payoff>(&self, mut f: impl FnMut(&S) -> T) -> FiniteGame<T> {
        FiniteGame {
            counts: self.counts.clone(),
            strides: self.strides.clone(),
            payoffs: self.payoffs.iter().map(|t| t.iter().map(&mut f).collect()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Replaces one player's tensor by `f` applied entrywise.
    pub fn map_player(&self, player: usize, f: impl FnMut(&S) -> S) -> FiniteGame<S> {
        let mut out = self.clone();
        out.payoffs[player] = self.payoffs[player].iter().map(f).collect();
        out
    }

    pub fn to_f64(&self) -> FiniteGame<f64> {
        self.map_payoffs(|v| v.to_f64())
    }
}

/// Increments a mixed-radix counter, last digit fastest. Wraps to zero.
pub(crate) fn advance(digits: &mut [usize], radices: &[usize]) {
    for p in (0..digits.len()).rev() {
        digits[p] += 1;
        if digits[p] < radices[p] {
            return;
        }
        digits[p] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::date_dilemma;
    use crate::rational::Rational;
    use proptest::prelude::*;

    #[test]
    fn payoff_lookup_date_dilemma() {
        let g = date_dilemma();
        // strategy 0 = C (camping), 1 = A (amusement park)
        assert_eq!(g.payoff(0, &PureProfile::new(vec![1, 1])).unwrap(), &Rational::from(5));
        assert_eq!(g.payoff(0, &PureProfile::new(vec![0, 0])).unwrap(), &Rational::from(3));
        assert_eq!(g.payoff(1, &PureProfile::new(vec![0, 1])).unwrap(), &Rational::from(0));
    }

    #[test]
    fn single_entry_game() {
        let g = FiniteGame::new(vec![1, 1, 1], vec![vec![Rational::new(7, 2)]; 3]).unwrap();
        assert_eq!(
            g.payoff(2, &PureProfile::new(vec![0, 0, 0])).unwrap(),
            &Rational::new(7, 2)
        );
    }

    #[test]
    fn payoff_rejects_out_of_range() {
        let g = date_dilemma();
        assert!(matches!(
            g.payoff(2, &PureProfile::new(vec![0, 0])),
            Err(Error::InvalidArgument(_))
        ));
        assert!(g.payoff(0, &PureProfile::new(vec![0, 2])).is_err());
        assert!(g.payoff(0, &PureProfile::new(vec![0])).is_err());
    }

    #[test]
    fn row_major_layout() {
        let g = FiniteGame::from_fn(vec![2, 3, 2], |_, x| {
            Rational::from((x.0[0] * 100 + x.0[1] * 10 + x.0[2]) as i64)
        })
        .unwrap();
        let t = g.tensor(0);
        assert_eq!(t[0], Rational::from(0));
        assert_eq!(t[1], Rational::from(1));
        assert_eq!(t[2], Rational::from(10));
        assert_eq!(t[6], Rational::from(100));
        assert_eq!(g.profile_at(7), PureProfile::new(vec![1, 0, 1]));
    }

    #[test]
    fn compose_examples() {
        let g = FiniteGame::from_fn(vec![3, 9, 3], |_, _| Rational::zero()).unwrap();
        let x = PureProfile::one_based(&[1, 2, 3]);
        let y = PartialProfile {
            coalition: Coalition::new(3, vec![1]).unwrap(),
            choices: vec![8],
        };
        assert_eq!(g.compose(&x, &y).unwrap(), PureProfile::one_based(&[1, 9, 3]));

        let dd = date_dilemma();
        let y = PartialProfile {
            coalition: Coalition::grand(2),
            choices: vec![1, 1],
        };
        assert_eq!(
            dd.compose(&PureProfile::new(vec![0, 0]), &y).unwrap(),
            PureProfile::new(vec![1, 1])
        );

        let x = PureProfile::new(vec![1, 1]);
        let y = PartialProfile {
            coalition: Coalition::new(2, vec![0]).unwrap(),
            choices: vec![1],
        };
        assert_eq!(dd.compose(&x, &y).unwrap(), x);
    }

    #[test]
    fn compose_rejects_shape_mismatch() {
        let g = date_dilemma();
        let x = PureProfile::new(vec![0, 0]);
        let bad_choice = PartialProfile {
            coalition: Coalition::new(2, vec![0]).unwrap(),
            choices: vec![2],
        };
        assert!(g.compose(&x, &bad_choice).is_err());
        let bad_coalition = PartialProfile {
            coalition: Coalition::new(3, vec![2]).unwrap(),
            choices: vec![0],
        };
        assert!(g.compose(&x, &bad_coalition).is_err());
        assert!(g.compose(&PureProfile::new(vec![0, 0, 0]), &bad_choice).is_err());
    }

    #[test]
    fn validate_reports_violations() {
        let ok: Vec<Vec<Rational>> = vec![vec![Rational::zero(); 4]; 2];
        assert!(validate(&[2, 2], &ok).is_empty());

        let short = vec![vec![Rational::zero(); 4], vec![Rational::zero(); 3]];
        let v = validate(&[2, 2], &short);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].player, Some(1));

        let empty: Vec<Vec<Rational>> = vec![vec![], vec![]];
        let v = validate(&[2, 0], &empty);
        assert!(v
            .iter()
            .any(|v| v.player == Some(1) && v.message.contains("empty game")));
        assert!(FiniteGame::new(vec![2, 0], empty).is_err());
    }

    #[test]
    fn coalition_is_canonical() {
        let a = Coalition::new(4, vec![3, 0, 2]).unwrap();
        assert_eq!(a.members(), &[0, 2, 3]);
        assert_eq!(a, Coalition::new(4, vec![2, 3, 0]).unwrap());
        assert!(Coalition::new(4, vec![1, 1]).is_err());
        assert!(Coalition::new(4, vec![4]).is_err());
        assert!(Coalition::new(4, vec![]).is_err());
        assert_eq!(a.to_string(), "{1,3,4}");
        assert_eq!(Coalition::all(4, 2).count(), 6);
    }

    fn shape_and_profile() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
        prop::collection::vec(1usize..4, 1..5).prop_flat_map(|counts| {
            let n = counts.len();
            let profile: Vec<_> = counts.iter().map(|&d| 0..d).collect();
            let members = prop::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n);
            (Just(counts), profile, members)
        })
    }

    proptest! {
        #[test]
        fn restrict_then_compose_is_identity((counts, x, members) in shape_and_profile()) {
            let g = FiniteGame::from_fn(counts.clone(), |_, _| Rational::zero()).unwrap();
            let x = PureProfile::new(x);
            let coalition = Coalition::new(counts.len(), members).unwrap();
            prop_assert_eq!(g.compose(&x, &x.restrict(&coalition)).unwrap(), x);
        }

        #[test]
        fn compose_ignores_member_order((counts, x, members) in shape_and_profile()) {
            let g = FiniteGame::from_fn(counts.clone(), |_, _| Rational::zero()).unwrap();
            let x = PureProfile::new(x);
            let forward = Coalition::new(counts.len(), members.clone()).unwrap();
            let mut rev = members.clone();
            rev.reverse();
            let backward = Coalition::new(counts.len(), rev).unwrap();
            let choices: Vec<usize> = forward.members().iter().map(|&p| counts[p] - 1).collect();
            let a = g.compose(&x, &PartialProfile { coalition: forward, choices: choices.clone() }).unwrap();
            let b = g.compose(&x, &PartialProfile { coalition: backward, choices }).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn flat_index_round_trip((counts, x, _m) in shape_and_profile()) {
            let g = FiniteGame::from_fn(counts, |_, _| Rational::zero()).unwrap();
            let x = PureProfile::new(x);
            prop_assert_eq!(g.profile_at(g.index_of(&x)), x);
        }
    }
}
