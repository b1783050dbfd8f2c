//! Multi-seed experiment execution.
//!
//! Each seed is an independent run: its master seed derives the named
//! sub-streams for scenario randomness, the sharing-pair draw, agent
//! sampling, channel noise, and reception draws, so adding a consumer never
//! perturbs the others and every run is reproducible in isolation. Runs
//! execute in parallel with no shared mutable state; the returned traces
//! are ordered by the configured seed list.

use super::config::{ResolvedConfig, ScenarioSource, SchedulerKind};
use super::ExperimentError;
use crate::network::{StationId, Topology, TransmissionSet};
use crate::rng::{substream, StreamId};
use crate::scenario::{random_scenario, square_scenario, MobilityEvent, ScenarioScript};
use crate::scheduler::{draw_p0, single_tx, static_strategy, FlatScheduler, HierarchicalScheduler};
use crate::txop::simulate_txop;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Per-run record: the effective-rate time series plus per-station
/// participation counts.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub seed: u64,
    pub rates_bps: Vec<f64>,
    /// How many TXOPs each station took part in over the whole run.
    pub participation: BTreeMap<StationId, u64>,
    pub label: String,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.rates_bps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates_bps.is_empty()
    }

    pub fn mean_rate_bps(&self) -> f64 {
        self.rates_bps.iter().sum::<f64>() / self.rates_bps.len().max(1) as f64
    }
}

enum Policy {
    Hierarchical(HierarchicalScheduler),
    Flat(FlatScheduler),
    Single,
    Static { k: usize, set: TransmissionSet },
}

impl Policy {
    fn build(cfg: &ResolvedConfig, topo: &Topology) -> Result<Self, ExperimentError> {
        Ok(match cfg.scheduler {
            SchedulerKind::Hierarchical => {
                Policy::Hierarchical(HierarchicalScheduler::new(topo, cfg.theta)?)
            }
            SchedulerKind::Flat => Policy::Flat(FlatScheduler::new(topo, cfg.theta)?),
            SchedulerKind::Single => Policy::Single,
            SchedulerKind::StaticK(k) => Policy::Static {
                k,
                set: static_strategy(topo, k)?,
            },
        })
    }

    fn on_topology_change(&mut self, topo: &Topology) -> Result<(), ExperimentError> {
        if let Policy::Static { k, set } = self {
            *set = static_strategy(topo, *k)?;
        }
        Ok(())
    }
}

/// Runs every configured seed and returns the traces in seed-list order.
pub fn run_experiment(cfg: &ResolvedConfig) -> Result<Vec<RunTrace>, ExperimentError> {
    cfg.seeds
        .par_iter()
        .map(|seed| run_one(cfg, *seed))
        .collect()
}

/// Runs a single seed.
pub fn run_one(cfg: &ResolvedConfig, seed: u64) -> Result<RunTrace, ExperimentError> {
    let mut scenario_rng = substream(seed, StreamId::Scenario);
    let script: ScenarioScript = match &cfg.scenario {
        ScenarioSource::Square {
            d,
            station_offset,
            post_move_offset,
            walls,
        } => {
            let initial = square_scenario(*d, *station_offset, walls.clone())?;
            let mut events = Vec::new();
            if let Some(offset) = post_move_offset {
                events.push(MobilityEvent {
                    at_txop: cfg.txops / 2,
                    topology: square_scenario(*d, *offset, walls.clone())?,
                });
            }
            let script = ScenarioScript {
                initial,
                events,
                total_txops: cfg.txops,
            };
            script.validate()?;
            script
        }
        ScenarioSource::Random(spec) => random_scenario(spec, &mut scenario_rng)?,
        ScenarioSource::Scripted(script) => script.clone(),
    };

    let mut topo = script.initial.clone();
    let mut policy = Policy::build(cfg, &topo)?;
    let mut p0_rng = substream(seed, StreamId::SharingDraw);
    let mut agent_rng = substream(seed, StreamId::Agent);
    let mut noise_rng = substream(seed, StreamId::Noise);
    let mut reception_rng = substream(seed, StreamId::Reception);

    let mut rates_bps = Vec::with_capacity(script.total_txops);
    let mut participation: BTreeMap<StationId, u64> =
        topo.stations().iter().map(|(id, _, _)| (*id, 0)).collect();

    let mut events = script.events.iter().peekable();
    for t in 0..script.total_txops {
        if let Some(event) = events.peek() {
            if event.at_txop == t {
                // Agents deliberately persist across the event; adapting to
                // the moved nodes is part of what a run measures.
                topo = event.topology.clone();
                policy.on_topology_change(&topo)?;
                events.next();
            }
        }
        let p0 = draw_p0(&topo, &mut p0_rng);
        let result = match &mut policy {
            Policy::Hierarchical(sched) => {
                let (set, ctx) = sched.select(p0, &mut agent_rng)?;
                let result = simulate_txop(
                    &set,
                    &topo,
                    &cfg.channel,
                    &cfg.table,
                    &cfg.txop,
                    &mut noise_rng,
                    &mut reception_rng,
                );
                sched.update(&ctx, result.effective_rate_bps)?;
                result
            }
            Policy::Flat(sched) => {
                let (set, ctx) = sched.select(p0, &mut agent_rng)?;
                let result = simulate_txop(
                    &set,
                    &topo,
                    &cfg.channel,
                    &cfg.table,
                    &cfg.txop,
                    &mut noise_rng,
                    &mut reception_rng,
                );
                sched.update(&ctx, result.effective_rate_bps)?;
                result
            }
            Policy::Single => {
                let set = single_tx(p0);
                simulate_txop(
                    &set,
                    &topo,
                    &cfg.channel,
                    &cfg.table,
                    &cfg.txop,
                    &mut noise_rng,
                    &mut reception_rng,
                )
            }
            Policy::Static { set, .. } => simulate_txop(
                set,
                &topo,
                &cfg.channel,
                &cfg.table,
                &cfg.txop,
                &mut noise_rng,
                &mut reception_rng,
            ),
        };
        for link in &result.links {
            *participation.entry(link.pair.station).or_insert(0) += 1;
        }
        rates_bps.push(result.effective_rate_bps);
    }

    Ok(RunTrace {
        seed,
        rates_bps,
        participation,
        label: cfg.label.clone(),
    })
}
