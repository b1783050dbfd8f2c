//! Hyperparameter random search.
//!
//! Candidates are drawn from per-parameter ranges and scored by the mean
//! effective rate over a batch of randomized scenarios with fixed
//! evaluation seeds, so every candidate faces exactly the same environments
//! and the search itself is reproducible.

use super::config::{ResolvedConfig, ScenarioSource, SchedulerKind};
use super::runner::run_one;
use super::ExperimentError;
use crate::bandit::{Algorithm, Hyperparams};
use crate::channel::{ChannelParams, McsTable};
use crate::scenario::RandomScenarioSpec;
use crate::txop::TxopConfig;
use rand::Rng;

/// Sampling range for one hyperparameter. Log-scale ranges sample the
/// exponent uniformly, which suits multiplicative parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuneRange {
    pub lo: f64,
    pub hi: f64,
    pub log_scale: bool,
}

impl TuneRange {
    pub fn uniform(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            log_scale: false,
        }
    }

    pub fn log(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            log_scale: true,
        }
    }

    pub fn point(value: f64) -> Self {
        Self {
            lo: value,
            hi: value,
            log_scale: false,
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        if self.log_scale {
            let (a, b) = (self.lo.ln(), self.hi.ln());
            rng.random_range(a..b).exp()
        } else {
            rng.random_range(self.lo..self.hi)
        }
    }
}

/// Search space and evaluation protocol for one algorithm.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub algorithm: Algorithm,
    pub epsilon: TuneRange,
    pub epsilon_decay: TuneRange,
    pub temperature: TuneRange,
    pub ucb_c: TuneRange,
    pub ts_prior_var: TuneRange,
    pub ts_obs_var: TuneRange,
    pub discount: TuneRange,
    /// Scenario generator the candidates are scored on.
    pub scenario: RandomScenarioSpec,
    /// Fixed evaluation seeds; identical for every candidate.
    pub eval_seeds: Vec<u64>,
    pub scheduler: SchedulerKind,
}

impl SearchSpec {
    pub fn default_for(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            epsilon: TuneRange::uniform(0.05, 1.0),
            epsilon_decay: TuneRange::uniform(0.98, 1.0),
            temperature: TuneRange::log(0.01, 0.5),
            // Rewards are normalized to O(1); exploration constants much
            // past ~0.3 keep re-sampling clearly dominated arms for
            // hundreds of TXOPs, which is outside the useful regime for
            // the small arm counts the hierarchy produces.
            ucb_c: TuneRange::log(0.05, 0.35),
            ts_prior_var: TuneRange::log(0.25, 4.0),
            ts_obs_var: TuneRange::log(0.01, 1.0),
            discount: TuneRange::uniform(0.95, 1.0),
            scenario: RandomScenarioSpec::default(),
            eval_seeds: (0..4).collect(),
            scheduler: SchedulerKind::Hierarchical,
        }
    }
}

/// Physical environment the tuner evaluates in.
#[derive(Clone, Debug, Default)]
pub struct TuneEnv {
    pub channel: ChannelParams,
    pub table: McsTable,
    pub txop: TxopConfig,
}

impl TuneEnv {
    pub fn from_config(cfg: &ResolvedConfig) -> Self {
        Self {
            channel: cfg.channel,
            table: cfg.table.clone(),
            txop: cfg.txop,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TuneEvaluation {
    pub theta: Hyperparams,
    pub score_bps: f64,
}

#[derive(Clone, Debug)]
pub struct TuneOutcome {
    pub algorithm: Algorithm,
    /// All evaluated candidates, in sample order.
    pub evaluations: Vec<TuneEvaluation>,
    /// Index of the best candidate.
    pub best: usize,
}

impl TuneOutcome {
    pub fn best_theta(&self) -> &Hyperparams {
        &self.evaluations[self.best].theta
    }

    pub fn best_score_bps(&self) -> f64 {
        self.evaluations[self.best].score_bps
    }
}

fn sample_candidate<R: Rng>(spec: &SearchSpec, env: &TuneEnv, rng: &mut R) -> Hyperparams {
    let mut theta = Hyperparams::tuned(spec.algorithm);
    theta.discount = spec.discount.sample(rng);
    match spec.algorithm {
        Algorithm::EpsilonGreedy => {
            theta.epsilon = spec.epsilon.sample(rng);
            theta.epsilon_decay = spec.epsilon_decay.sample(rng);
        }
        Algorithm::Softmax => theta.temperature = spec.temperature.sample(rng),
        Algorithm::Ucb => theta.ucb_c = spec.ucb_c.sample(rng),
        Algorithm::Thompson => {
            theta.ts_prior_var = spec.ts_prior_var.sample(rng);
            theta.ts_obs_var = spec.ts_obs_var.sample(rng);
        }
    }
    let single_link = {
        let entry = env.table.entry(env.txop.mcs_key()).expect("validated key");
        crate::txop::n_ampdu(entry.rate_bps, &env.txop) as f64 * env.txop.subframe_bits()
            / env.txop.duration_s
    };
    theta.reward_norm_bps = single_link;
    theta
}

fn evaluate(spec: &SearchSpec, env: &TuneEnv, theta: Hyperparams) -> Result<f64, ExperimentError> {
    let cfg = ResolvedConfig {
        scenario: ScenarioSource::Random(spec.scenario.clone()),
        scheduler: spec.scheduler,
        theta,
        channel: env.channel,
        table: env.table.clone(),
        txop: env.txop,
        txops: spec.scenario.total_txops,
        seeds: spec.eval_seeds.clone(),
        ci_level: 0.99,
        smoothing_window: 1,
        label: String::new(),
    };
    let mut total = 0.0;
    for seed in &spec.eval_seeds {
        total += run_one(&cfg, *seed)?.mean_rate_bps();
    }
    Ok(total / spec.eval_seeds.len().max(1) as f64)
}

/// Random search: draws `budget` candidates, scores each on the fixed
/// evaluation runs, and returns every evaluation plus the argmax.
pub fn tune<R: Rng>(
    spec: &SearchSpec,
    budget: usize,
    env: &TuneEnv,
    rng: &mut R,
) -> Result<TuneOutcome, ExperimentError> {
    if budget == 0 {
        return Err(ExperimentError::Aggregation(
            "tuning budget must be >= 1".into(),
        ));
    }
    if spec.eval_seeds.is_empty() {
        return Err(ExperimentError::Aggregation(
            "need at least one eval seed".into(),
        ));
    }
    let mut evaluations = Vec::with_capacity(budget);
    for _ in 0..budget {
        let theta = sample_candidate(spec, env, rng);
        let score_bps = evaluate(spec, env, theta)?;
        evaluations.push(TuneEvaluation { theta, score_bps });
    }
    let best = evaluations
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.score_bps.total_cmp(&b.score_bps))
        .map(|(i, _)| i)
        .expect("budget >= 1");
    Ok(TuneOutcome {
        algorithm: spec.algorithm,
        evaluations,
        best,
    })
}
