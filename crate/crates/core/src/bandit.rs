//! Finite-action stochastic bandit agents with a uniform sample/update
//! interface: ε-greedy, Softmax, UCB, and Thompson sampling with normal
//! posteriors.
//!
//! All four algorithms share one nonstationarity mechanism: an exponential
//! discount γ applied to per-arm counts and reward sums on every update, so
//! stale observations fade at the same rate regardless of algorithm. γ = 1
//! recovers the plain arithmetic running mean.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bandit algorithm selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    EpsilonGreedy,
    Softmax,
    Ucb,
    Thompson,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::EpsilonGreedy,
        Algorithm::Softmax,
        Algorithm::Ucb,
        Algorithm::Thompson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::EpsilonGreedy => "epsilon-greedy",
            Algorithm::Softmax => "softmax",
            Algorithm::Ucb => "ucb",
            Algorithm::Thompson => "thompson",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = BanditError;

    fn from_str(s: &str) -> Result<Self, BanditError> {
        match s {
            "epsilon-greedy" | "egreedy" => Ok(Algorithm::EpsilonGreedy),
            "softmax" => Ok(Algorithm::Softmax),
            "ucb" => Ok(Algorithm::Ucb),
            "thompson" | "ts" => Ok(Algorithm::Thompson),
            other => Err(BanditError::UnknownAlgorithm(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BanditError {
    #[error("unknown algorithm '{0}' (expected epsilon-greedy, softmax, ucb, or thompson)")]
    UnknownAlgorithm(String),
    #[error("agent needs at least one arm")]
    NoArms,
    #[error("arm {arm} out of range for {arms}-arm agent")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("reward must be finite, got {0}")]
    NonFiniteReward(f64),
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparam(&'static str),
}

/// Shared hyperparameter set θ for all agents in one scheduler.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub algorithm: Algorithm,
    /// Initial exploration probability ε₀ (ε-greedy).
    pub epsilon: f64,
    /// Multiplicative ε decay applied per update.
    pub epsilon_decay: f64,
    /// Softmax temperature.
    pub temperature: f64,
    /// UCB exploration constant c.
    pub ucb_c: f64,
    /// Thompson prior mean over normalized rewards.
    pub ts_prior_mean: f64,
    /// Thompson prior variance.
    pub ts_prior_var: f64,
    /// Thompson known observation variance.
    pub ts_obs_var: f64,
    /// Exponential discount γ on counts and reward sums, in (0, 1].
    pub discount: f64,
    /// Reward normalization constant in bits/s; raw rewards are divided by
    /// this before reaching any agent.
    pub reward_norm_bps: f64,
}

impl Hyperparams {
    /// Tuned defaults per algorithm: the random-search winners over the
    /// randomized tuning scenarios (`csr-sim tune --budget 24 --seed 11`),
    /// rounded to three significant digits.
    pub fn tuned(algorithm: Algorithm) -> Self {
        let base = Self {
            algorithm,
            epsilon: 0.2,
            epsilon_decay: 0.992,
            temperature: 0.333,
            ucb_c: 0.176,
            ts_prior_mean: 1.0,
            ts_prior_var: 1.6,
            ts_obs_var: 0.123,
            discount: 0.953,
            reward_norm_bps: 144.42e6,
        };
        match algorithm {
            Algorithm::EpsilonGreedy => Self {
                discount: 0.951,
                ..base
            },
            Algorithm::Softmax => Self {
                discount: 0.982,
                ..base
            },
            Algorithm::Ucb => base,
            Algorithm::Thompson => base,
        }
    }

    pub fn validate(&self) -> Result<(), BanditError> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(BanditError::InvalidHyperparam("epsilon must be in [0, 1]"));
        }
        if !(self.epsilon_decay > 0.0 && self.epsilon_decay <= 1.0) {
            return Err(BanditError::InvalidHyperparam(
                "epsilon_decay must be in (0, 1]",
            ));
        }
        if !(self.temperature > 0.0) {
            return Err(BanditError::InvalidHyperparam("temperature must be > 0"));
        }
        if !(self.ucb_c >= 0.0) {
            return Err(BanditError::InvalidHyperparam("ucb_c must be >= 0"));
        }
        if !(self.ts_prior_var > 0.0) {
            return Err(BanditError::InvalidHyperparam("ts_prior_var must be > 0"));
        }
        if !(self.ts_obs_var > 0.0) {
            return Err(BanditError::InvalidHyperparam("ts_obs_var must be > 0"));
        }
        if !(self.discount > 0.0 && self.discount <= 1.0) {
            return Err(BanditError::InvalidHyperparam("discount must be in (0, 1]"));
        }
        if !(self.reward_norm_bps > 0.0) {
            return Err(BanditError::InvalidHyperparam(
                "reward_norm_bps must be > 0",
            ));
        }
        Ok(())
    }
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self::tuned(Algorithm::Ucb)
    }
}

/// Scale a raw bits/s reward into the agents' O(1) working range.
pub fn normalize_reward(raw_bps: f64, theta: &Hyperparams) -> f64 {
    raw_bps / theta.reward_norm_bps
}

/// One bandit agent over a fixed finite arm set.
///
/// Keeps discounted sufficient statistics per arm: `n_i` (discounted pull
/// count) and `w_i` (discounted reward sum), so `Q_i = w_i / n_i`. Thompson
/// sampling derives its normal posterior from the same statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct BanditAgent {
    theta: Hyperparams,
    /// Current exploration probability (decays per update).
    epsilon: f64,
    reward_sum: Vec<f64>,
    count: Vec<f64>,
    /// Total updates applied (undiscounted).
    updates: u64,
}

impl BanditAgent {
    pub fn new(n_arms: usize, theta: &Hyperparams) -> Result<Self, BanditError> {
        if n_arms == 0 {
            return Err(BanditError::NoArms);
        }
        theta.validate()?;
        Ok(Self {
            theta: *theta,
            epsilon: theta.epsilon,
            reward_sum: vec![0.0; n_arms],
            count: vec![0.0; n_arms],
            updates: 0,
        })
    }

    pub fn n_arms(&self) -> usize {
        self.count.len()
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Discounted value estimate for `arm`; zero while unplayed.
    pub fn q_value(&self, arm: usize) -> f64 {
        if self.count[arm] > 0.0 {
            self.reward_sum[arm] / self.count[arm]
        } else {
            0.0
        }
    }

    /// Discounted pull count for `arm`.
    pub fn count(&self, arm: usize) -> f64 {
        self.count[arm]
    }

    /// Selects an arm according to the configured algorithm. The agent
    /// state is untouched; `rng` drives exploration and tie-breaking.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        match self.theta.algorithm {
            Algorithm::EpsilonGreedy => self.sample_epsilon_greedy(rng),
            Algorithm::Softmax => self.sample_softmax(rng),
            Algorithm::Ucb => self.sample_ucb(rng),
            Algorithm::Thompson => self.sample_thompson(rng),
        }
    }

    /// Applies the discount to every arm, then folds `reward` into `arm`.
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<(), BanditError> {
        if arm >= self.n_arms() {
            return Err(BanditError::ArmOutOfRange {
                arm,
                arms: self.n_arms(),
            });
        }
        if !reward.is_finite() {
            return Err(BanditError::NonFiniteReward(reward));
        }
        let gamma = self.theta.discount;
        if gamma < 1.0 {
            for n in &mut self.count {
                *n *= gamma;
            }
            for w in &mut self.reward_sum {
                *w *= gamma;
            }
        }
        self.count[arm] += 1.0;
        self.reward_sum[arm] += reward;
        self.updates += 1;
        self.epsilon *= self.theta.epsilon_decay;
        Ok(())
    }

    fn sample_epsilon_greedy<R: Rng>(&self, rng: &mut R) -> usize {
        if rng.random::<f64>() < self.epsilon {
            rng.random_range(0..self.n_arms())
        } else {
            let q: Vec<f64> = (0..self.n_arms()).map(|i| self.q_value(i)).collect();
            argmax_tie_break(&q, rng)
        }
    }

    /// Softmax selection distribution over arms. Weights are max-shifted,
    /// so the distribution is invariant under adding a constant to all Q
    /// values and never overflows.
    fn softmax_probabilities(&self) -> Vec<f64> {
        let q: Vec<f64> = (0..self.n_arms()).map(|i| self.q_value(i)).collect();
        let max_q = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = q
            .iter()
            .map(|qi| ((qi - max_q) / self.theta.temperature).exp())
            .collect();
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / total).collect()
    }

    fn sample_softmax<R: Rng>(&self, rng: &mut R) -> usize {
        let probs = self.softmax_probabilities();
        let mut target = rng.random::<f64>();
        for (i, p) in probs.iter().enumerate() {
            target -= p;
            if target < 0.0 {
                return i;
            }
        }
        self.n_arms() - 1
    }

    fn sample_ucb<R: Rng>(&self, rng: &mut R) -> usize {
        let unplayed: Vec<usize> = (0..self.n_arms())
            .filter(|&i| self.count[i] == 0.0)
            .collect();
        match unplayed.len() {
            0 => {}
            1 => return unplayed[0],
            n => return unplayed[rng.random_range(0..n)],
        }
        let total: f64 = self.count.iter().sum();
        let log_total = total.ln().max(0.0);
        let indices: Vec<f64> = (0..self.n_arms())
            .map(|i| self.q_value(i) + self.theta.ucb_c * (log_total / self.count[i]).sqrt())
            .collect();
        argmax_tie_break(&indices, rng)
    }

    fn sample_thompson<R: Rng>(&self, rng: &mut R) -> usize {
        let prior_precision = 1.0 / self.theta.ts_prior_var;
        let obs_precision = 1.0 / self.theta.ts_obs_var;
        let draws: Vec<f64> = (0..self.n_arms())
            .map(|i| {
                let precision = prior_precision + self.count[i] * obs_precision;
                let mean = (self.theta.ts_prior_mean * prior_precision
                    + self.reward_sum[i] * obs_precision)
                    / precision;
                let std = (1.0 / precision).sqrt();
                Normal::new(mean, std).expect("valid posterior").sample(rng)
            })
            .collect();
        argmax_tie_break(&draws, rng)
    }
}

/// Index of the maximum value; exact ties are broken uniformly at random
/// from the tied set. The rng is only consumed when a tie exists.
fn argmax_tie_break<R: Rng>(values: &[f64], rng: &mut R) -> usize {
    debug_assert!(!values.is_empty());
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .map(|(i, _)| i)
        .collect();
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.random_range(0..tied.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, StreamId};
    use proptest::prelude::*;

    fn theta(algorithm: Algorithm) -> Hyperparams {
        Hyperparams {
            algorithm,
            discount: 1.0,
            epsilon_decay: 1.0,
            reward_norm_bps: 1.0,
            ..Hyperparams::tuned(algorithm)
        }
    }

    #[test]
    fn zero_arms_rejected() {
        assert_eq!(
            BanditAgent::new(0, &theta(Algorithm::Ucb)).unwrap_err(),
            BanditError::NoArms
        );
    }

    #[test]
    fn single_arm_always_selected() {
        let mut rng = substream(1, StreamId::Agent);
        for algo in Algorithm::ALL {
            let agent = BanditAgent::new(1, &theta(algo)).unwrap();
            for _ in 0..32 {
                assert_eq!(agent.sample(&mut rng), 0);
            }
        }
    }

    #[test]
    fn fresh_agent_state() {
        let agent = BanditAgent::new(8, &theta(Algorithm::Ucb)).unwrap();
        assert_eq!(agent.n_arms(), 8);
        assert_eq!(agent.updates(), 0);
        for arm in 0..8 {
            assert_eq!(agent.count(arm), 0.0);
        }
    }

    #[test]
    fn ucb_initial_sweep_visits_each_arm_once() {
        let mut rng = substream(2, StreamId::Agent);
        let mut agent = BanditAgent::new(3, &theta(Algorithm::Ucb)).unwrap();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..3 {
            let arm = agent.sample(&mut rng);
            assert!(seen.insert(arm), "arm {arm} sampled twice during the sweep");
            agent.update(arm, 0.5).unwrap();
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn ucb_index_selects_higher_mean_under_equal_counts() {
        // Q = [1.0, 0.5], n = [5, 5], t = 10, c = 1:
        // indices 1.679 vs 1.179, so arm 0 must win.
        let params = Hyperparams {
            ucb_c: 1.0,
            ..theta(Algorithm::Ucb)
        };
        let mut agent = BanditAgent::new(2, &params).unwrap();
        for _ in 0..5 {
            agent.update(0, 1.0).unwrap();
            agent.update(1, 0.5).unwrap();
        }
        let expected_index_0 = 1.0 + (10f64.ln() / 5.0).sqrt();
        let expected_index_1 = 0.5 + (10f64.ln() / 5.0).sqrt();
        assert!((expected_index_0 - 1.679).abs() < 1e-3);
        assert!((expected_index_1 - 1.179).abs() < 1e-3);
        let mut rng = substream(3, StreamId::Agent);
        for _ in 0..16 {
            assert_eq!(agent.sample(&mut rng), 0);
        }
    }

    #[test]
    fn greedy_argmax_with_zero_epsilon() {
        let params = Hyperparams {
            epsilon: 0.0,
            ..theta(Algorithm::EpsilonGreedy)
        };
        let mut agent = BanditAgent::new(2, &params).unwrap();
        agent.update(0, 0.2).unwrap();
        agent.update(1, 0.9).unwrap();
        let mut rng = substream(4, StreamId::Agent);
        for _ in 0..64 {
            assert_eq!(agent.sample(&mut rng), 1);
        }
    }

    #[test]
    fn softmax_uniform_over_equal_values() {
        let mut agent = BanditAgent::new(4, &theta(Algorithm::Softmax)).unwrap();
        for arm in 0..4 {
            agent.update(arm, 0.7).unwrap();
        }
        let mut rng = substream(5, StreamId::Agent);
        let draws = 10_000;
        let mut counts = [0u32; 4];
        for _ in 0..draws {
            counts[agent.sample(&mut rng)] += 1;
        }
        let expected = draws as f64 / 4.0;
        let sigma = (draws as f64 * 0.25 * 0.75).sqrt();
        for (arm, count) in counts.iter().enumerate() {
            assert!(
                (*count as f64 - expected).abs() < 3.0 * sigma,
                "arm {arm}: {count} draws, expected {expected} +- {}",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn update_running_mean() {
        let mut agent = BanditAgent::new(2, &theta(Algorithm::EpsilonGreedy)).unwrap();
        agent.update(0, 2.0).unwrap();
        assert_eq!(agent.q_value(0), 2.0);
        assert_eq!(agent.count(0), 1.0);

        let mut agent = BanditAgent::new(2, &theta(Algorithm::EpsilonGreedy)).unwrap();
        agent.update(0, 1.0).unwrap();
        agent.update(0, 3.0).unwrap();
        assert_eq!(agent.q_value(0), 2.0);
        assert_eq!(agent.count(0), 2.0);
    }

    #[test]
    fn update_discounted_mean() {
        let params = Hyperparams {
            discount: 0.9,
            ..theta(Algorithm::EpsilonGreedy)
        };
        let mut agent = BanditAgent::new(1, &params).unwrap();
        agent.update(0, 1.0).unwrap();
        agent.update(0, 3.0).unwrap();
        // (0.9 * 1.0 + 3.0) / (0.9 + 1.0)
        assert!((agent.q_value(0) - 2.052_631_578_947_368_6).abs() < 1e-12);
    }

    #[test]
    fn update_rejects_bad_input() {
        let mut agent = BanditAgent::new(2, &theta(Algorithm::Ucb)).unwrap();
        assert!(matches!(
            agent.update(2, 1.0),
            Err(BanditError::ArmOutOfRange { arm: 2, arms: 2 })
        ));
        assert!(matches!(
            agent.update(0, f64::NAN),
            Err(BanditError::NonFiniteReward(_))
        ));
    }

    #[test]
    fn normalize_reward_examples() {
        let params = Hyperparams {
            reward_norm_bps: 144.42e6,
            ..theta(Algorithm::Ucb)
        };
        assert_eq!(normalize_reward(144.42e6, &params), 1.0);
        assert_eq!(normalize_reward(0.0, &params), 0.0);
        assert_eq!(normalize_reward(288.84e6, &params), 2.0);
    }

    #[test]
    fn thompson_symmetric_under_identical_histories() {
        let mut agent = BanditAgent::new(2, &theta(Algorithm::Thompson)).unwrap();
        for _ in 0..10 {
            agent.update(0, 0.8).unwrap();
            agent.update(1, 0.8).unwrap();
        }
        let mut rng = substream(6, StreamId::Agent);
        let draws = 10_000;
        let picks_0 = (0..draws).filter(|_| agent.sample(&mut rng) == 0).count();
        let freq = picks_0 as f64 / draws as f64;
        let sigma = (0.25f64 / draws as f64).sqrt();
        assert!(
            (freq - 0.5).abs() < 3.0 * sigma,
            "arm 0 frequency {freq} outside 0.5 +- {}",
            3.0 * sigma
        );
    }

    #[test]
    fn epsilon_decays_multiplicatively() {
        let params = Hyperparams {
            epsilon: 0.8,
            epsilon_decay: 0.5,
            ..theta(Algorithm::EpsilonGreedy)
        };
        let mut agent = BanditAgent::new(2, &params).unwrap();
        agent.update(0, 1.0).unwrap();
        agent.update(0, 1.0).unwrap();
        assert!((agent.epsilon - 0.2).abs() < 1e-15);
    }

    #[test]
    fn tie_breaks_uniform_over_tied_set() {
        // Three arms tied at the maximum, one below.
        let values = [1.0, 0.3, 1.0, 1.0];
        let mut rng = substream(7, StreamId::Agent);
        let draws = 10_000;
        let mut counts = [0u32; 4];
        for _ in 0..draws {
            counts[argmax_tie_break(&values, &mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        let expected = draws as f64 / 3.0;
        let sigma = (draws as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for arm in [0, 2, 3] {
            assert!(
                (counts[arm] as f64 - expected).abs() < 3.0 * sigma,
                "arm {arm}: {} draws",
                counts[arm]
            );
        }
    }

    proptest! {
        #[test]
        fn sample_always_in_range(
            n_arms in 1usize..12,
            seed in any::<u64>(),
            algo_idx in 0usize..4,
            rewards in proptest::collection::vec((0usize..12, 0.0f64..4.0), 0..40),
        ) {
            let mut agent = BanditAgent::new(n_arms, &theta(Algorithm::ALL[algo_idx])).unwrap();
            let mut rng = substream(seed, StreamId::Agent);
            for (arm, reward) in rewards {
                let _ = agent.update(arm % n_arms, reward);
                prop_assert!(agent.sample(&mut rng) < n_arms);
            }
        }

        #[test]
        fn ucb_sweeps_before_repeating(n_arms in 2usize..10, seed in any::<u64>()) {
            let mut agent = BanditAgent::new(n_arms, &theta(Algorithm::Ucb)).unwrap();
            let mut rng = substream(seed, StreamId::Agent);
            let mut seen = std::collections::HashSet::new();
            for _ in 0..n_arms {
                let arm = agent.sample(&mut rng);
                prop_assert!(seen.insert(arm));
                agent.update(arm, 1.0).unwrap();
            }
        }

        #[test]
        fn greedy_invariant_under_positive_scaling(
            rewards in proptest::collection::vec((0usize..3, 0.1f64..4.0), 1..30),
            scale in 0.1f64..10.0,
            seed in any::<u64>(),
        ) {
            let params = Hyperparams { epsilon: 0.0, ..theta(Algorithm::EpsilonGreedy) };
            let mut plain = BanditAgent::new(3, &params).unwrap();
            let mut scaled = BanditAgent::new(3, &params).unwrap();
            for (arm, reward) in &rewards {
                plain.update(*arm, *reward).unwrap();
                scaled.update(*arm, *reward * scale).unwrap();
            }
            // Skip near-ties, where a one-ulp rounding difference could
            // legitimately flip the argmax.
            let q: Vec<f64> = (0..3).map(|i| plain.q_value(i)).collect();
            let mut sorted = q.clone();
            sorted.sort_by(f64::total_cmp);
            prop_assume!(sorted[2] - sorted[1] > 1e-9 * sorted[2].abs().max(1.0));
            let mut rng_a = substream(seed, StreamId::Agent);
            let mut rng_b = substream(seed, StreamId::Agent);
            prop_assert_eq!(plain.sample(&mut rng_a), scaled.sample(&mut rng_b));
        }

        #[test]
        fn softmax_distribution_shift_invariant_and_normalized(
            rewards in proptest::collection::vec((0usize..3, 0.0f64..2.0), 1..30),
            shift in -5.0f64..5.0,
        ) {
            let params = theta(Algorithm::Softmax);
            let mut plain = BanditAgent::new(3, &params).unwrap();
            let mut shifted = BanditAgent::new(3, &params).unwrap();
            // Every arm plays at least once so the constant shift reaches
            // all Q values, not just the played ones.
            for arm in 0..3 {
                plain.update(arm, 1.0).unwrap();
                shifted.update(arm, 1.0 + shift).unwrap();
            }
            for (arm, reward) in &rewards {
                plain.update(*arm, *reward).unwrap();
                shifted.update(*arm, *reward + shift).unwrap();
            }
            let p = plain.softmax_probabilities();
            let q = shifted.softmax_probabilities();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (a, b) in p.iter().zip(q.iter()) {
                prop_assert!((a - b).abs() < 1e-9, "probs {a} vs {b}");
            }
        }

        #[test]
        fn unit_discount_equals_arithmetic_mean(
            rewards in proptest::collection::vec(0.0f64..5.0, 1..60),
        ) {
            let mut agent = BanditAgent::new(1, &theta(Algorithm::Ucb)).unwrap();
            for r in &rewards {
                agent.update(0, *r).unwrap();
            }
            let mean: f64 = rewards.iter().sum::<f64>() / rewards.len() as f64;
            prop_assert!((agent.q_value(0) - mean).abs() < 1e-12);
        }
    }
}
