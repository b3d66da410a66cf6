//! Nikaido–Isoda functions and their marginals.
//!
//! * classical: `Ψ_c(x,y) = Σ_i θ_i(y_i, x_{-i}) − θ_i(x)`
//! * k-lateral: `Ψ_k(x,y) = max_{|I|=k} max_{i∈I} θ_i(y_I, x_{-I}) − θ_i(x)`
//!   (`k = 1` is the modified, max-form function)
//!
//! `V(x) = max_y Ψ(x,y)` is nonnegative because `Ψ(x,x) = 0`, and vanishes
//! exactly at the equilibria. `R(x)` is the set of maximizers, and `x` is an
//! equilibrium iff `x ∈ R(x)`.

use std::collections::BTreeSet;

use crate::equilibrium::Analyzer;
use crate::error::{Error, Result};
use crate::game::{Coalition, PureProfile};
use crate::payoff::{max_of, Payoff};

impl<S: Payoff> Analyzer<'_, S> {
    fn check_pair(&self, x: &PureProfile, y: &PureProfile) -> Result<()> {
        self.game().check_profile(x)?;
        self.game().check_profile(y)
    }

    fn check_all_profiles(&self) -> Result<()> {
        let count = self.game().num_profiles();
        if count > self.config().budget {
            return Err(Error::limit(
                "pure profiles",
                count as u128,
                self.config().budget as u128,
            ));
        }
        Ok(())
    }

    /// `Ψ_c(x, y)`.
    pub fn psi_classical(&self, x: &PureProfile, y: &PureProfile) -> Result<S> {
        self.check_pair(x, y)?;
        let g = self.game();
        let mut total = S::zero();
        for i in 0..g.num_players() {
            let mut probe = x.clone();
            probe.0[i] = y.0[i];
            total = total.add(&g.payoff(i, &probe)?.sub(g.payoff(i, x)?));
        }
        Ok(total)
    }

    /// `Ψ_k(x, y)`.
    pub fn psi_k(&self, k: usize, x: &PureProfile, y: &PureProfile) -> Result<S> {
        self.check_pair(x, y)?;
        self.check_k(k)?;
        let g = self.game();
        let mut gains = Vec::new();
        for coalition in Coalition::all(g.num_players(), k) {
            let probe = g.compose(x, &y.restrict(&coalition))?;
            for &i in coalition.members() {
                gains.push(g.payoff(i, &probe)?.sub(g.payoff(i, x)?));
            }
        }
        Ok(max_of(gains).expect("at least one coalition"))
    }

    /// `V_k(x) = max_y Ψ_k(x, y)`.
    ///
    /// `Ψ_k` reads `y` only through the blocks `y_I`, so the maximum over all
    /// of `E` equals the maximum over coalitions, members and joint choices.
    pub fn v_k(&self, k: usize, x: &PureProfile) -> Result<S> {
        self.game().check_profile(x)?;
        let tables = self.coalition_tables(k)?;
        let g = self.game();
        let flat = g.index_of(x);
        let mut best = S::zero();
        for table in &tables {
            let base = g.base_without(flat, x, &table.coalition);
            for &i in table.coalition.members() {
                let current = g.payoff_flat(i, flat);
                for &o in &table.offsets {
                    let gain = g.payoff_flat(i, base + o).sub(current);
                    if gain > best {
                        best = gain;
                    }
                }
            }
        }
        Ok(best)
    }

    /// `V_c(x) = max_y Ψ_c(x, y)`, by enumeration of `E`.
    pub fn v_classical(&self, x: &PureProfile) -> Result<S> {
        self.check_all_profiles()?;
        let values: Result<Vec<S>> = self.game().profiles().map(|y| self.psi_classical(x, &y)).collect();
        Ok(max_of(values?).expect("games have at least one profile"))
    }

    /// `y ∈ R_k(x)`, i.e. `Ψ_k(x, y) = V_k(x)`.
    pub fn r_k_contains(&self, k: usize, x: &PureProfile, y: &PureProfile) -> Result<bool> {
        let value = self.psi_k(k, x, y)?;
        Ok(value.approx_eq(&self.v_k(k, x)?, self.tol()))
    }

    /// `R_k(x)` by enumeration of `E`.
    pub fn r_k(&self, k: usize, x: &PureProfile) -> Result<Vec<PureProfile>> {
        self.check_all_profiles()?;
        let v = self.v_k(k, x)?;
        let mut out = Vec::new();
        for y in self.game().profiles() {
            if self.psi_k(k, x, &y)?.approx_eq(&v, self.tol()) {
                out.push(y);
            }
        }
        Ok(out)
    }

    /// `R_c(x) = argmax_y Ψ_c(x, y)`, by enumeration of `E`.
    pub fn r_classical(&self, x: &PureProfile) -> Result<Vec<PureProfile>> {
        self.check_all_profiles()?;
        let scored: Vec<(PureProfile, S)> = self
            .game()
            .profiles()
            .map(|y| self.psi_classical(x, &y).map(|v| (y, v)))
            .collect::<Result<_>>()?;
        let best = max_of(scored.iter().map(|(_, v)| v.clone())).expect("nonempty");
        Ok(scored
            .into_iter()
            .filter(|(_, v)| v.approx_eq(&best, self.tol()))
            .map(|(y, _)| y)
            .collect())
    }

    /// `Φ(x) = Φ_1(x) × … × Φ_N(x)` from the single-player best-reply sets.
    pub fn best_reply_product(&self, x: &PureProfile) -> Result<Vec<PureProfile>> {
        let g = self.game();
        let mut product = vec![PureProfile::new(Vec::new())];
        for i in 0..g.num_players() {
            let replies = self.best_reply_set(&Coalition::new(g.num_players(), vec![i])?, x)?;
            product = product
                .iter()
                .flat_map(|prefix| {
                    replies.iter().map(move |r| {
                        let mut next = prefix.clone();
                        next.0.push(r.choices[0]);
                        next
                    })
                })
                .collect();
        }
        Ok(product)
    }

    /// Whether `R_c(x)` and `Φ(x)` coincide as sets.
    pub fn check_classical_equivalence(&self, x: &PureProfile) -> Result<bool> {
        let r: BTreeSet<_> = self.r_classical(x)?.into_iter().collect();
        let phi: BTreeSet<_> = self.best_reply_product(x)?.into_iter().collect();
        Ok(r == phi)
    }
}

#[cfg(test)]
mod tests {
    use crate::equilibrium::Analyzer;
    use crate::gallery::{date_dilemma, matching_pennies};
    use crate::game::{FiniteGame, PureProfile};
    use crate::random::random_game;
    use crate::rational::Rational;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const C: usize = 0;
    const A: usize = 1;

    fn p(v: &[usize]) -> PureProfile {
        PureProfile::new(v.to_vec())
    }

    #[test]
    fn psi_classical_examples() {
        let g = date_dilemma();
        let an = Analyzer::new(&g);
        assert_eq!(an.psi_classical(&p(&[C, C]), &p(&[A, A])).unwrap(), Rational::from(-6));
        assert_eq!(an.psi_classical(&p(&[C, A]), &p(&[A, A])).unwrap(), Rational::from(5));
        for x in g.profiles() {
            assert!(an.psi_classical(&x, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn psi_k_examples() {
        let g = date_dilemma();
        let an = Analyzer::new(&g);
        assert_eq!(an.psi_k(2, &p(&[C, C]), &p(&[A, A])).unwrap(), Rational::from(2));
        for x in g.profiles() {
            for k in 1..=2 {
                assert!(an.psi_k(k, &x, &x).unwrap().is_zero());
            }
        }
        // k = 1 is the max form of the classical function
        for x in g.profiles() {
            for y in g.profiles() {
                let max_form = (0..2)
                    .map(|i| {
                        let mut probe = x.clone();
                        probe.0[i] = y.0[i];
                        g.payoff(i, &probe).unwrap() - g.payoff(i, &x).unwrap()
                    })
                    .max()
                    .unwrap();
                assert_eq!(an.psi_k(1, &x, &y).unwrap(), max_form);
            }
        }
    }

    #[test]
    fn v_k_examples() {
        let g = date_dilemma();
        let an = Analyzer::new(&g);
        assert!(an.v_k(2, &p(&[A, A])).unwrap().is_zero());
        assert_eq!(an.v_k(2, &p(&[C, C])).unwrap(), Rational::from(2));
        assert_eq!(an.v_k(1, &p(&[C, C])).unwrap(), Rational::zero());
    }

    #[test]
    fn r_k_examples() {
        let g = date_dilemma();
        let an = Analyzer::new(&g);
        assert!(an.r_k_contains(2, &p(&[A, A]), &p(&[A, A])).unwrap());
        assert!(!an.r_k_contains(2, &p(&[C, C]), &p(&[C, C])).unwrap());
        for x in g.profiles() {
            assert!(!an.r_k(2, &x).unwrap().is_empty());
        }
    }

    #[test]
    fn classical_equivalence_examples() {
        let g = date_dilemma();
        let an = Analyzer::new(&g);
        assert!(an.check_classical_equivalence(&p(&[C, C])).unwrap());
        let mp = matching_pennies();
        let an = Analyzer::new(&mp);
        for x in mp.profiles() {
            assert!(an.check_classical_equivalence(&x).unwrap());
        }
        let solo = FiniteGame::new(
            vec![3],
            vec![vec![Rational::from(2), Rational::from(2), Rational::from(1)]],
        )
        .unwrap();
        let an = Analyzer::new(&solo);
        for x in solo.profiles() {
            assert_eq!(an.r_classical(&x).unwrap(), vec![p(&[0]), p(&[1])]);
            assert_eq!(an.best_reply_product(&x).unwrap(), vec![p(&[0]), p(&[1])]);
        }
    }

    fn game_strategy() -> impl Strategy<Value = FiniteGame<Rational>> {
        (prop::collection::vec(2usize..=3, 2..=3), any::<u64>())
            .prop_map(|(counts, seed)| random_game(&mut ChaCha8Rng::seed_from_u64(seed), &counts, 3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn v_k_matches_brute_force_over_all_profiles(g in game_strategy()) {
            let an = Analyzer::new(&g);
            for x in g.profiles() {
                for k in 1..=g.num_players() {
                    let brute = g.profiles().map(|y| an.psi_k(k, &x, &y).unwrap()).max().unwrap();
                    prop_assert_eq!(an.v_k(k, &x).unwrap(), brute);
                }
            }
        }

        #[test]
        fn v_k_nonnegative_monotone_and_zero_at_equilibria(g in game_strategy()) {
            let an = Analyzer::new(&g);
            for x in g.profiles() {
                let values: Vec<Rational> = (1..=g.num_players()).map(|k| an.v_k(k, &x).unwrap()).collect();
                prop_assert!(values.iter().all(|v| !v.is_negative()));
                prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
                for (k, v) in values.iter().enumerate() {
                    prop_assert_eq!(v.is_zero(), an.is_k_lateral(k + 1, &x).unwrap());
                    prop_assert_eq!(an.r_k_contains(k + 1, &x, &x).unwrap(), v.is_zero());
                }
                prop_assert_eq!(an.v_classical(&x).unwrap().is_zero(), values[0].is_zero());
            }
        }

        #[test]
        fn float_payoffs_agree_with_exact(g in game_strategy()) {
            let gf = g.to_f64();
            let exact = Analyzer::new(&g);
            let float = Analyzer::new(&gf);
            for x in g.profiles() {
                for k in 1..=g.num_players() {
                    prop_assert!((exact.v_k(k, &x).unwrap().to_f64() - float.v_k(k, &x).unwrap()).abs() < 1e-9);
                    prop_assert_eq!(exact.is_k_lateral(k, &x).unwrap(), float.is_k_lateral(k, &x).unwrap());
                }
            }
        }
    }
}
