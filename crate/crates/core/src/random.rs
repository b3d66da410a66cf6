//! Seeded generators for random games, used by tests, benches and the
//! cross-validation suites.

use rand::Rng;

use crate::game::FiniteGame;
use crate::rational::Rational;

/// Entries `p/q` with `|p| <= range` and `q ∈ {1, 2}`. Small ranges produce
/// ties, which exercise the non-strict comparisons.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Rational {
    Rational::new(rng.random_range(-range..=range), rng.random_range(1..=2))
}

pub fn random_game<R: Rng + ?Sized>(rng: &mut R, strategy_counts: &[usize], range: i64) -> FiniteGame<Rational> {
    FiniteGame::from_fn(strategy_counts.to_vec(), |_, _| random_rational(rng, range))
        .expect("random shapes are nonempty")
}
