//! Small named games used throughout the tests and the CLI demos.

use crate::continuous::{ContinuousGame, Discretized};
use crate::error::{Error, Result};
use crate::exec::{Config, DEFAULT_BUDGET};
use crate::game::FiniteGame;
use crate::mixed::TensorTriple;
use crate::rational::Rational;

fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| Rational::from(v)).collect()
}

fn labels(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

/// Two players choosing `C` (index 0) or `A` (index 1); both get 3 at
/// `(C,C)`, 5 at `(A,A)` and nothing when they miss each other.
pub fn date_dilemma() -> FiniteGame<Rational> {
    FiniteGame::new(vec![2, 2], vec![ints(&[3, 0, 0, 5]), ints(&[3, 0, 0, 5])])
        .and_then(|g| g.with_labels(labels(&[&["C", "A"], &["C", "A"]])))
        .expect("fixed shape")
}

pub fn matching_pennies() -> FiniteGame<Rational> {
    FiniteGame::new(vec![2, 2], vec![ints(&[1, -1, -1, 1]), ints(&[-1, 1, 1, -1])])
        .and_then(|g| g.with_labels(labels(&[&["H", "T"], &["H", "T"]])))
        .expect("fixed shape")
}

/// Winner of a vote: most votes, ties to the smallest label.
pub fn elected_leader(votes: &[usize]) -> usize {
    let mut tally = vec![0usize; votes.len()];
    for &v in votes {
        tally[v] += 1;
    }
    let top = tally.iter().copied().max().unwrap_or(0);
    tally.iter().position(|&c| c == top).unwrap_or(0)
}

/// `2n + 1` voters electing one of themselves; each gets 1 if elected and 0
/// otherwise.
pub fn majority_voting(n: usize) -> Result<FiniteGame<Rational>> {
    majority_voting_with_budget(n, DEFAULT_BUDGET)
}

pub fn majority_voting_with_budget(n: usize, budget: usize) -> Result<FiniteGame<Rational>> {
    if n == 0 {
        return Err(Error::invalid("majority voting needs n >= 1"));
    }
    let players = 2 * n + 1;
    let profiles = (players as u128).checked_pow(players as u32).unwrap_or(u128::MAX);
    if profiles > budget as u128 {
        return Err(Error::limit("voting profiles", profiles, budget as u128));
    }
    let names: Vec<String> = (1..=players).map(|j| j.to_string()).collect();
    FiniteGame::from_fn(vec![players; players], |i, x| {
        if elected_leader(x.choices()) == i {
            Rational::one()
        } else {
            Rational::zero()
        }
    })?
    .with_labels(vec![names; players])
}

/// Employee (not work, work) against boss (inspect, don't inspect).
///
/// `w` is the wage, `g` the employee's cost of working, `h` the cost of an
/// inspection and `v` the value of the work to the boss.
pub fn inspection_game(w: Rational, g: Rational, h: Rational, v: Rational) -> Result<FiniteGame<Rational>> {
    let zero = Rational::zero();
    if !(zero < g && g < w && zero < h && h < w) {
        return Err(Error::invalid(format!(
            "inspection game needs 0 < g < w and 0 < h < w, got w={w}, g={g}, h={h}"
        )));
    }
    let employee = vec![zero.clone(), w.clone(), &w - &g, &w - &g];
    let boss = vec![-h.clone(), -w.clone(), &(&v - &w) - &h, &v - &w];
    FiniteGame::new(vec![2, 2], vec![employee, boss])?
        .with_labels(labels(&[&["not work", "work"], &["inspect", "don't inspect"]]))
}

/// Suspect `A` (player 1) against witnesses `B_1..B_{n-1}` on `[0,1]`.
/// Each witness's payoff is its own strategy; `A` earns `a` only while
/// `a + max b < 1`.
pub fn witness_continuous(n: usize) -> Result<ContinuousGame> {
    if n < 2 {
        return Err(Error::invalid("the witness game needs at least 2 players"));
    }
    let rest: Vec<String> = (2..=n).map(|j| format!("x{j}")).collect();
    let mut formulas = vec![format!("ite(x1 + max({}) < 1, x1, 0)", rest.join(", "))];
    formulas.extend(rest);
    let refs: Vec<&str> = formulas.iter().map(String::as_str).collect();
    ContinuousGame::parse(vec![(0.0, 1.0); n], &refs, Vec::new())
}

pub fn witness_game(n: usize, m: usize) -> Result<Discretized> {
    witness_game_with(n, m, &Config::default())
}

pub fn witness_game_with(n: usize, m: usize, cfg: &Config) -> Result<Discretized> {
    witness_continuous(n)?.discretize_with(m, cfg)
}

/// Three players with two strategies each; everyone gets 1 at `(2,2,2)` and
/// 0 elsewhere.
pub fn delta_witness_game() -> FiniteGame<Rational> {
    TensorTriple::delta().game()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::Analyzer;
    use crate::game::PureProfile;

    fn p1(v: &[usize]) -> PureProfile {
        PureProfile::one_based(v)
    }

    #[test]
    fn gallery_games_validate() {
        assert!(date_dilemma().validate().is_empty());
        assert!(matching_pennies().validate().is_empty());
        assert!(majority_voting(1).unwrap().validate().is_empty());
        assert!(inspection_game(10.into(), 2.into(), 1.into(), 20.into())
            .unwrap()
            .validate()
            .is_empty());
        assert!(delta_witness_game().validate().is_empty());
        assert!(witness_game(3, 4).unwrap().game.validate().is_empty());
    }

    #[test]
    fn date_dilemma_equilibria() {
        let g = date_dilemma();
        assert_eq!(g.payoff(0, &p1(&[1, 1])).unwrap(), &Rational::from(3));
        let f = Analyzer::new(&g).filtration().unwrap();
        assert_eq!(f.level(1).unwrap(), &[p1(&[1, 1]), p1(&[2, 2])]);
        assert_eq!(f.level(2).unwrap(), &[p1(&[2, 2])]);
    }

    #[test]
    fn election_rule() {
        assert_eq!(elected_leader(&[0, 0, 0, 0, 3]), 0);
        assert_eq!(elected_leader(&[1, 2, 0]), 0);
        assert_eq!(elected_leader(&[2, 1, 1, 2, 4]), 1);
    }

    #[test]
    fn majority_voting_laterality() {
        let g = majority_voting(1).unwrap();
        let an = Analyzer::new(&g);
        assert!(an.is_k_lateral(1, &p1(&[1, 1, 1])).unwrap());
        assert!(!an.is_k_lateral(2, &p1(&[1, 1, 1])).unwrap());
        assert!(an.enumerate_k_lateral(2).unwrap().is_empty());

        let g = majority_voting(2).unwrap();
        let an = Analyzer::new(&g);
        let unanimous = p1(&[1; 5]);
        assert!(an.is_k_lateral(2, &unanimous).unwrap());
        assert!(!an.is_k_lateral(3, &unanimous).unwrap());
        let x = p1(&[1, 1, 1, 1, 4]);
        assert_eq!(elected_leader(x.choices()), 0);
        assert!(an.is_k_lateral(1, &x).unwrap());
        assert!(!an.is_k_lateral(2, &x).unwrap());
        // player 1 wins by voting for themself instead of candidate 2
        assert!(!an.is_k_lateral(1, &p1(&[2, 2, 2, 1, 1])).unwrap());
        assert!(majority_voting_with_budget(3, 1000).unwrap_err().is_resource_limit());
        assert!(majority_voting(0).is_err());
    }

    #[test]
    fn inspection_matrices() {
        let g = inspection_game(10.into(), 2.into(), 1.into(), 20.into()).unwrap();
        assert_eq!(g.tensor(0), &ints(&[0, 10, 8, 8])[..]);
        assert_eq!(g.tensor(1), &ints(&[-1, -10, 9, 10])[..]);
        assert!(Analyzer::new(&g).enumerate_k_lateral(1).unwrap().is_empty());
        assert!(inspection_game(10.into(), 10.into(), 1.into(), 20.into()).is_err());
        assert!(inspection_game(10.into(), 2.into(), 0.into(), 20.into()).is_err());
    }

    #[test]
    fn witness_game_values() {
        let c = witness_continuous(3).unwrap();
        assert_eq!(c.payoff(0, &[0.25, 0.5, 0.0]).unwrap(), 0.25);
        assert_eq!(c.payoff(0, &[0.5, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(c.payoff(2, &[0.5, 1.0, 0.75]).unwrap(), 0.75);
        for a in [0.0, 0.3, 0.9, 1.0] {
            assert_eq!(c.payoff(0, &[a, 0.2, 1.0]).unwrap(), 0.0);
        }
        assert_eq!(witness_continuous(2).unwrap().payoff(0, &[0.5, 0.25]).unwrap(), 0.5);
        assert!(witness_continuous(1).is_err());
    }

    #[test]
    fn witness_segment_is_two_lateral_not_three() {
        let d = witness_game(3, 4).unwrap();
        let an = Analyzer::new(&d.game);
        for a in 0..=4 {
            let x = PureProfile::new(vec![a, 4, 4]);
            assert!(an.is_k_lateral(2, &x).unwrap(), "a = {a}");
            assert!(!an.is_k_lateral(3, &x).unwrap(), "a = {a}");
        }
        let x = d.profile_of(&[0.5, 1.0, 1.0]).unwrap();
        let y = d.profile_of(&[0.5, 0.25, 0.25]).unwrap();
        assert_eq!(d.game.payoff(0, &y).unwrap() - d.game.payoff(0, &x).unwrap(), 0.5);
    }
}
