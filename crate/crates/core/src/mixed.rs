//! Mixed extension of a finite game: independent randomization by every
//! player, payoffs extended multilinearly from the pure tensors.
//!
//! `θ_i(y_I, π_{-I})` is multilinear in the blocks of `y_I`, so its maximum
//! over the product of the coalition's simplices sits at a vertex. Checking
//! k-laterality of a mixed profile therefore only needs pure joint
//! deviations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::Analyzer;
use crate::error::{Error, Result};
use crate::game::{advance, Coalition, FiniteGame, PureProfile};
use crate::payoff::{Payoff, DEFAULT_TOL};
use crate::rational::Rational;

/// Tolerance on each probability vector's sum.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// One probability vector per player.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedProfile {
    blocks: Vec<Vec<f64>>,
}

impl MixedProfile {
    pub fn new(blocks: Vec<Vec<f64>>) -> Result<Self> {
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::invalid(format!("player {} has an empty mixed strategy", i + 1)));
            }
            if let Some(p) = block.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
                return Err(Error::invalid(format!(
                    "player {}: probability {p} is negative or not finite",
                    i + 1
                )));
            }
            let sum: f64 = block.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::invalid(format!("player {}: probabilities sum to {sum}", i + 1)));
            }
        }
        Ok(MixedProfile { blocks })
    }

    /// The vertex of the product of simplices at a pure profile.
    pub fn pure(counts: &[usize], x: &PureProfile) -> Self {
        let blocks = counts
            .iter()
            .zip(&x.0)
            .map(|(&d, &c)| (0..d).map(|j| if j == c { 1.0 } else { 0.0 }).collect())
            .collect();
        MixedProfile { blocks }
    }

    pub fn uniform(counts: &[usize]) -> Self {
        MixedProfile {
            blocks: counts.iter().map(|&d| vec![1.0 / d as f64; d]).collect(),
        }
    }

    pub fn block(&self, player: usize) -> &[f64] {
        &self.blocks[player]
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    pub fn with_block(&self, player: usize, block: Vec<f64>) -> Result<Self> {
        let mut blocks = self.blocks.clone();
        blocks[player] = block;
        MixedProfile::new(blocks)
    }

    fn check_shape<S>(&self, game: &FiniteGame<S>) -> Result<()>
    where
        S: Payoff,
    {
        let shape_ok = self.blocks.len() == game.num_players()
            && self
                .blocks
                .iter()
                .zip(game.strategy_counts())
                .all(|(b, &d)| b.len() == d);
        if shape_ok {
            Ok(())
        } else {
            Err(Error::invalid(
                "mixed profile does not match the game's strategy counts",
            ))
        }
    }
}

/// Expected payoff of `player` under independent mixing.
pub fn mixed_payoff<S: Payoff>(game: &FiniteGame<S>, player: usize, mixed: &MixedProfile) -> Result<f64> {
    game.check_player(player)?;
    mixed.check_shape(game)?;
    let counts = game.strategy_counts();
    let mut digits = vec![0; counts.len()];
    let mut total = 0.0;
    for value in game.tensor(player) {
        let weight: f64 = digits.iter().enumerate().map(|(m, &j)| mixed.blocks[m][j]).product();
        if weight != 0.0 {
            total += weight * value.to_f64();
        }
        advance(&mut digits, counts);
    }
    Ok(total)
}

/// For each joint choice of `coalition` (lexicographic), member `player`'s
/// payoff when the coalition plays it and everyone else mixes.
fn deviation_payoffs<S: Payoff>(
    game: &FiniteGame<S>,
    coalition: &Coalition,
    player: usize,
    mixed: &MixedProfile,
) -> Vec<f64> {
    let counts = game.strategy_counts();
    let members = coalition.members();
    let mut out = vec![0.0; game.joint_choices(coalition)];
    let mut digits = vec![0; counts.len()];
    for value in game.tensor(player) {
        let weight: f64 = digits
            .iter()
            .enumerate()
            .filter(|(m, _)| !coalition.contains(*m))
            .map(|(m, &j)| mixed.blocks[m][j])
            .product();
        if weight != 0.0 {
            let slot = members.iter().fold(0, |acc, &m| acc * counts[m] + digits[m]);
            out[slot] += weight * value.to_f64();
        }
        advance(&mut digits, counts);
    }
    out
}

/// `max_{|I|=k} max_{i∈I} max_{pure y_I} θ_i(y_I, π_{-I}) − θ_i(π)`.
pub fn mixed_v_k<S: Payoff>(game: &FiniteGame<S>, k: usize, mixed: &MixedProfile) -> Result<f64> {
    let analyzer = Analyzer::new(game);
    analyzer.check_k(k)?;
    mixed.check_shape(game)?;
    let current: Vec<f64> = (0..game.num_players())
        .map(|i| mixed_payoff(game, i, mixed))
        .collect::<Result<_>>()?;
    let mut best = f64::NEG_INFINITY;
    for coalition in Coalition::all(game.num_players(), k) {
        for &i in coalition.members() {
            for value in deviation_payoffs(game, &coalition, i, mixed) {
                best = best.max(value - current[i]);
            }
        }
    }
    Ok(best)
}

pub fn is_k_lateral_mixed<S: Payoff>(game: &FiniteGame<S>, k: usize, mixed: &MixedProfile, tol: f64) -> Result<bool> {
    if tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    Ok(mixed_v_k(game, k, mixed)? <= tol)
}

/// Checks on random pairs of best replies of `player` (against the others'
/// mixing) that their midpoints are best replies too.
///
/// The payoff is linear in the player's own block, so the best replies are
/// the face of the simplex spanned by the optimal pure strategies. Pairs are
/// drawn from that face with a fixed seed; midpoints are evaluated with the
/// full multilinear payoff.
pub fn argmax_convexity_probe<S: Payoff>(
    game: &FiniteGame<S>,
    player: usize,
    mixed: &MixedProfile,
    samples: usize,
) -> Result<bool> {
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    game.check_player(player)?;
    mixed.check_shape(game)?;
    let solo = Coalition::new(game.num_players(), vec![player])?;
    let pure = deviation_payoffs(game, &solo, player, mixed);
    let optimum = pure.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let face: Vec<usize> = (0..pure.len()).filter(|&j| pure[j] >= optimum - DEFAULT_TOL).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(samples as u64 ^ 0x5eed);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut block = vec![0.0; pure.len()];
        let weights: Vec<f64> = face.iter().map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        for (&j, w) in face.iter().zip(&weights) {
            block[j] = w / total;
        }
        block
    };
    for _ in 0..samples {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        for reply in [&a, &b] {
            if mixed_payoff(game, player, &mixed.with_block(player, reply.clone())?)? < optimum - DEFAULT_TOL {
                return Ok(false);
            }
        }
        let mid: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 0.5 * (p + q)).collect();
        let value = mixed_payoff(game, player, &mixed.with_block(player, mid)?)?;
        if value < optimum - DEFAULT_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The totally mixed equilibrium of the inspection game, with strategies
/// ordered (not work, work) for the employee and (inspect, don't inspect)
/// for the boss.
///
/// The employee must be indifferent, which fixes the inspection rate at
/// `g/w`; the boss must be indifferent, which fixes the shirking rate at
/// `h/w`. Neither depends on the value `v` of the work.
pub fn inspection_equilibrium(w: f64, g: f64, h: f64) -> Result<MixedProfile> {
    if !(0.0 < g && g < w && 0.0 < h && h < w) {
        return Err(Error::invalid(format!(
            "inspection game needs 0 < g < w and 0 < h < w, got w={w}, g={g}, h={h}"
        )));
    }
    MixedProfile::new(vec![vec![h / w, 1.0 - h / w], vec![g / w, 1.0 - g / w]])
}

/// Payoff tensors `X_A, X_B, X_C` of a three-player game with two strategies
/// each; entry `[i][j][k]` is stored at `4i + 2j + k` (zero-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorTriple {
    pub tensors: [[Rational; 8]; 3],
}

impl TensorTriple {
    pub fn zeros() -> Self {
        TensorTriple {
            tensors: std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero())),
        }
    }

    /// All three players get 1 at `(2,2,2)` and 0 elsewhere.
    pub fn delta() -> Self {
        let mut t = TensorTriple::zeros();
        for tensor in &mut t.tensors {
            tensor[7] = Rational::one();
        }
        t
    }

    /// Entry `X_player(i, j, k)` with one-based strategy labels.
    pub fn get(&self, player: usize, i: usize, j: usize, k: usize) -> &Rational {
        &self.tensors[player][4 * (i - 1) + 2 * (j - 1) + (k - 1)]
    }

    pub fn set(&mut self, player: usize, (i, j, k): (usize, usize, usize), value: Rational) {
        self.tensors[player][4 * (i - 1) + 2 * (j - 1) + (k - 1)] = value;
    }

    pub fn game(&self) -> FiniteGame<Rational> {
        FiniteGame::new(vec![2, 2, 2], self.tensors.iter().map(|t| t.to_vec()).collect()).expect("2x2x2 tensors")
    }

    /// Left-hand sides of the six two-coalition inequalities at the pure
    /// profile `(2,2,2)`, one per (coalition, member) pair, evaluated at a
    /// corner `(u1, v1) ∈ {0,1}²` of the deviators' mixing.
    pub fn corner_values(&self) -> Vec<Rational> {
        const A: usize = 0;
        const B: usize = 1;
        const C: usize = 2;
        // (member, position of the fixed outsider in (i,j,k))
        let rows = [(A, 2), (B, 2), (A, 1), (C, 1), (B, 0), (C, 0)];
        let mut out = Vec::new();
        for (member, outsider) in rows {
            let entry = |first: usize, second: usize| {
                let mut idx = [0usize; 3];
                let mut free = (0..3).filter(|&p| p != outsider);
                idx[outsider] = 2;
                idx[free.next().unwrap()] = first;
                idx[free.next().unwrap()] = second;
                self.get(member, idx[0], idx[1], idx[2]).clone()
            };
            for (u1, v1) in [(0i64, 0i64), (0, 1), (1, 0), (1, 1)] {
                let (u1, v1) = (Rational::from(u1), Rational::from(v1));
                let (u2, v2) = (&Rational::one() - &u1, &Rational::one() - &v1);
                let lhs = -(&entry(1, 1) * &(&u1 * &v1)) - &entry(1, 2) * &(&u1 * &v2) - &entry(2, 1) * &(&u2 * &v1)
                    + &entry(2, 2) * &(&Rational::one() - &(&u2 * &v2));
                out.push(lhs);
            }
        }
        out
    }

    /// Whether all six inequalities hold for every mixing of the deviating
    /// pair. Each left-hand side is bilinear in `(u1, v1)` on `[0,1]²`, so its
    /// minimum is at one of the four corners, which are checked exactly.
    pub fn verify(&self) -> bool {
        self.corner_values().iter().all(|v| !v.is_negative())
    }

    /// Largest corner value; positive when some inequality holds strictly.
    pub fn max_slack(&self) -> Rational {
        self.corner_values().into_iter().max().expect("24 corners")
    }
}

pub fn verify_ineq02(t: &TensorTriple) -> bool {
    t.verify()
}

/// A triple for which `(2,2,2)` is a 2-lateral equilibrium, drawn at random
/// from `seed`.
///
/// Entries are small random rationals; each player's `(2,2,2)` entry is then
/// lifted one above every entry its inequalities compare it to. The result
/// is re-verified through the corner check, pure enumeration and the mixed
/// deviation gain; the delta triple is returned if any check fails.
pub fn find_2lateral_witness(seed: u64) -> TensorTriple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = TensorTriple::zeros();
    for tensor in &mut t.tensors {
        for entry in tensor.iter_mut() {
            *entry = Rational::new(rng.random_range(-20..=20), rng.random_range(1..=4));
        }
    }
    for player in 0..3 {
        // Entries where at least one coalition partner of `player` keeps 2
        // fixed while the other coordinates move: every entry with the
        // player's own coordinate or a partner's free.
        let rival_max = (0..7)
            .map(|idx| t.tensors[player][idx].clone())
            .max()
            .expect("7 entries");
        t.tensors[player][7] = &rival_max + &Rational::one();
    }
    if witness_holds(&t) {
        t
    } else {
        TensorTriple::delta()
    }
}

fn witness_holds(t: &TensorTriple) -> bool {
    let game = t.game();
    let target = PureProfile::new(vec![1, 1, 1]);
    let enumerated = Analyzer::new(&game)
        .enumerate_k_lateral(2)
        .map(|ne| ne.contains(&target))
        .unwrap_or(false);
    let mixed = MixedProfile::pure(game.strategy_counts(), &target);
    let gain = mixed_v_k(&game, 2, &mixed).unwrap_or(f64::INFINITY);
    t.verify() && t.max_slack() > Rational::zero() && enumerated && gain <= DEFAULT_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{date_dilemma, inspection_game};
    use crate::random::random_game;
    use proptest::prelude::*;
    use rand::Rng;

    fn inspection() -> FiniteGame<Rational> {
        inspection_game(10.into(), 2.into(), 1.into(), 20.into()).unwrap()
    }

    #[test]
    fn mixed_profile_validation() {
        assert!(MixedProfile::new(vec![vec![0.5, 0.5]]).is_ok());
        assert!(MixedProfile::new(vec![vec![0.5, 0.6]]).is_err());
        assert!(MixedProfile::new(vec![vec![1.5, -0.5]]).is_err());
        assert!(MixedProfile::new(vec![vec![]]).is_err());
        assert!(mixed_payoff(&date_dilemma(), 0, &MixedProfile::uniform(&[2, 2, 2])).is_err());
    }

    #[test]
    fn uniform_mixing_averages_entries() {
        let g = date_dilemma();
        assert_eq!(mixed_payoff(&g, 0, &MixedProfile::uniform(&[2, 2])).unwrap(), 2.0);
    }

    #[test]
    fn vertices_reproduce_tensor_entries() {
        let g = date_dilemma();
        for x in g.profiles() {
            let m = MixedProfile::pure(&[2, 2], &x);
            for i in 0..2 {
                assert_eq!(mixed_payoff(&g, i, &m).unwrap(), g.payoff(i, &x).unwrap().to_f64());
            }
        }
    }

    #[test]
    fn inspection_equilibrium_makes_both_indifferent() {
        let g = inspection();
        let eq = inspection_equilibrium(10.0, 2.0, 1.0).unwrap();
        assert_eq!(eq.blocks(), &[vec![0.1, 0.9], vec![0.2, 0.8]]);
        for player in 0..2 {
            let values: Vec<f64> = (0..2)
                .map(|j| {
                    let mut block = vec![0.0; 2];
                    block[j] = 1.0;
                    mixed_payoff(&g, player, &eq.with_block(player, block).unwrap()).unwrap()
                })
                .collect();
            assert!((values[0] - values[1]).abs() <= 1e-9, "player {player}: {values:?}");
        }
        assert!(mixed_v_k(&g, 1, &eq).unwrap().abs() <= 1e-9);
        assert!(is_k_lateral_mixed(&g, 1, &eq, 1e-9).unwrap());
        assert!(!is_k_lateral_mixed(&g, 2, &eq, 1e-9).unwrap());
    }

    #[test]
    fn swapped_inspection_rates_are_not_an_equilibrium() {
        // Shirking at rate g/w and inspecting at rate h/w leaves the employee
        // strictly preferring to shirk when g != h.
        let g = inspection();
        let swapped = MixedProfile::new(vec![vec![0.2, 0.8], vec![0.1, 0.9]]).unwrap();
        let shirk = mixed_payoff(&g, 0, &swapped.with_block(0, vec![1.0, 0.0]).unwrap()).unwrap();
        let work = mixed_payoff(&g, 0, &swapped.with_block(0, vec![0.0, 1.0]).unwrap()).unwrap();
        assert!((shirk - 9.0).abs() < 1e-12 && (work - 8.0).abs() < 1e-12);
        assert!(mixed_v_k(&g, 1, &swapped).unwrap() > 0.5);
    }

    #[test]
    fn inspection_equilibrium_ignores_value_of_work() {
        let a = inspection_equilibrium(10.0, 2.0, 1.0).unwrap();
        let low = inspection_game(10.into(), 2.into(), 1.into(), 5.into()).unwrap();
        assert!(is_k_lateral_mixed(&low, 1, &a, 1e-9).unwrap());
        assert!(inspection_equilibrium(10.0, 0.0, 1.0).is_err());
        assert!(inspection_equilibrium(10.0, 2.0, 10.0).is_err());
    }

    #[test]
    fn mixed_v_k_at_pure_profiles() {
        let g = date_dilemma();
        let aa = MixedProfile::pure(&[2, 2], &PureProfile::new(vec![1, 1]));
        assert_eq!(mixed_v_k(&g, 2, &aa).unwrap(), 0.0);
        assert!(is_k_lateral_mixed(&g, 1, &aa, 1e-9).is_ok());
        assert!(is_k_lateral_mixed(&g, 1, &aa, 0.0).is_err());
    }

    #[test]
    fn ineq02_examples() {
        assert!(verify_ineq02(&TensorTriple::delta()));
        assert!(verify_ineq02(&TensorTriple::zeros()));
        let mut t = TensorTriple::zeros();
        t.set(0, (1, 1, 2), Rational::from(5));
        assert!(!verify_ineq02(&t));
        assert_eq!(t.corner_values().into_iter().min().unwrap(), Rational::from(-5));
    }

    #[test]
    fn delta_witness_is_two_lateral() {
        let g = TensorTriple::delta().game();
        let x = MixedProfile::pure(&[2, 2, 2], &PureProfile::new(vec![1, 1, 1]));
        assert!(is_k_lateral_mixed(&g, 2, &x, 1e-9).unwrap());
    }

    #[test]
    fn witnesses_are_valid_and_distinct() {
        let a = find_2lateral_witness(0);
        let b = find_2lateral_witness(1);
        assert!(a.verify() && b.verify());
        assert_ne!(a, b);
        assert_ne!(a, TensorTriple::delta());
        assert!(a.max_slack() > Rational::zero());
        let ne = Analyzer::new(&a.game()).enumerate_k_lateral(2).unwrap();
        assert!(ne.contains(&PureProfile::new(vec![1, 1, 1])));
    }

    #[test]
    fn argmax_probe_examples() {
        let g = inspection();
        let eq = inspection_equilibrium(10.0, 2.0, 1.0).unwrap();
        assert!(argmax_convexity_probe(&g, 0, &eq, 50).unwrap());
        assert!(argmax_convexity_probe(&g, 1, &eq, 50).unwrap());
        let flat = FiniteGame::from_fn(vec![3, 2], |_, _| Rational::from(4)).unwrap();
        assert!(argmax_convexity_probe(&flat, 0, &MixedProfile::uniform(&[3, 2]), 20).unwrap());
        assert!(argmax_convexity_probe(&flat, 0, &MixedProfile::uniform(&[3, 2]), 0).is_err());
    }

    fn game_and_mix() -> impl Strategy<Value = (FiniteGame<Rational>, MixedProfile, u64)> {
        (prop::collection::vec(2usize..=3, 2..=3), any::<u64>()).prop_map(|(counts, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_game(&mut rng, &counts, 4);
            let blocks = counts
                .iter()
                .map(|&d| {
                    let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 0.01).collect();
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(|v| v / s).collect()
                })
                .collect();
            let m = MixedProfile::new(blocks).unwrap();
            (g, m, seed)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn payoff_is_affine_in_each_block((g, m, seed) in game_and_mix()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            let player = rng.random_range(0..g.num_players());
            let other = MixedProfile::uniform(g.strategy_counts());
            let lambda: f64 = rng.random();
            let blend: Vec<f64> = m.block(player).iter().zip(other.block(player)).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
            let at_blend = m.with_block(player, blend).unwrap();
            let at_other = m.with_block(player, other.block(player).to_vec()).unwrap();
            for i in 0..g.num_players() {
                let lhs = mixed_payoff(&g, i, &at_blend).unwrap();
                let rhs = lambda * mixed_payoff(&g, i, &m).unwrap() + (1.0 - lambda) * mixed_payoff(&g, i, &at_other).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            }
        }

        #[test]
        fn mixed_gain_is_monotone_and_nonnegative((g, m, _seed) in game_and_mix()) {
            let values: Vec<f64> = (1..=g.num_players()).map(|k| mixed_v_k(&g, k, &m).unwrap()).collect();
            prop_assert!(values.iter().all(|&v| v >= -1e-9));
            prop_assert!(values.windows(2).all(|w| w[0] <= w[1] + 1e-9));
        }

        #[test]
        fn pure_vertex_gain_matches_exact((g, _m, seed) in game_and_mix()) {
            let x = g.profile_at(seed as usize % g.num_profiles());
            let vertex = MixedProfile::pure(g.strategy_counts(), &x);
            let an = Analyzer::new(&g);
            for k in 1..=g.num_players() {
                let exact = an.v_k(k, &x).unwrap().to_f64();
                prop_assert!((mixed_v_k(&g, k, &vertex).unwrap() - exact).abs() <= 1e-9);
            }
        }

        #[test]
        fn best_reply_faces_are_convex((g, m, _seed) in game_and_mix()) {
            for i in 0..g.num_players() {
                prop_assert!(argmax_convexity_probe(&g, i, &m, 8).unwrap());
            }
        }
    }
}
