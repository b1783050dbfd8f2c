//! Experiment configuration: the TOML file schema and its resolution into
//! validated runtime parameters.
//!
//! Every key is optional; an empty file (or empty override sections) yields
//! the shipped defaults, which reproduce the reference setup: 5 GHz, MCS 11
//! over 20 MHz / 1 SS / 800 ns GI, τ = 5.484 ms, 16.0206 dBm transmit power,
//! -93.97 dBm noise floor, 1500 B sub-frames, full-buffer downlink.

use crate::bandit::{Algorithm, Hyperparams};
use crate::channel::{ChannelParams, McsTable};
use crate::network::{ApId, Position, StationId, Topology, Wall};
use crate::scenario::{MobilityEvent, RandomScenarioSpec, ScenarioScript};
use crate::txop::{n_ampdu, TxopConfig};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Top-level config file.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub run: RunSection,
    pub scenario: ScenarioSection,
    pub scheduler: SchedulerSection,
    pub agent: AgentSection,
    pub channel: ChannelSection,
    pub txop: TxopSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// TXOPs per run (ignored for scripted scenarios, which carry their own).
    pub txops: usize,
    /// Number of seeds, `base_seed..base_seed + seeds`.
    pub seeds: u64,
    pub base_seed: u64,
    /// Explicit seed list; overrides `seeds`/`base_seed` when present.
    pub seed_list: Option<Vec<u64>>,
    /// Confidence level of the aggregated per-TXOP intervals.
    pub ci_level: f64,
    /// Trailing moving-average window applied to aggregate output series.
    pub smoothing_window: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            txops: 2000,
            seeds: 40,
            base_seed: 0,
            seed_list: None,
            ci_level: 0.99,
            smoothing_window: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Square,
    Random,
    Scripted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub kind: ScenarioKind,
    /// Square side in meters.
    pub d: f64,
    /// Initial AP-to-station offset in meters.
    pub station_offset: f64,
    /// Offset the stations relocate to halfway through the run.
    pub post_move_offset: Option<f64>,
    /// Explicit wall segments as [x1, y1, x2, y2] rows.
    pub walls: Vec<[f64; 4]>,
    /// Adds the asymmetric half-median wall layout on top of `walls`.
    pub default_walls: bool,
    pub random: RandomSection,
    /// Hand-written scenario script (kind = "scripted").
    pub script: Option<ScriptSpec>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        Self {
            kind: ScenarioKind::Square,
            d: 10.0,
            station_offset: 2.0,
            post_move_offset: None,
            walls: Vec::new(),
            default_walls: false,
            random: RandomSection::default(),
            script: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomSection {
    pub ap_count: [u32; 2],
    pub stations_per_ap: [u32; 2],
    pub area_side_m: f64,
    pub sigma_range_m: [f64; 2],
    pub reposition_events: u32,
}

impl Default for RandomSection {
    fn default() -> Self {
        let spec = RandomScenarioSpec::default();
        Self {
            ap_count: [spec.ap_count.0, spec.ap_count.1],
            stations_per_ap: [spec.stations_per_ap.0, spec.stations_per_ap.1],
            area_side_m: spec.area_side_m,
            sigma_range_m: [spec.sigma_range_m.0, spec.sigma_range_m.1],
            reposition_events: spec.reposition_events,
        }
    }
}

/// Serialized form of a topology: the on-disk scenario format.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub aps: Vec<ApSpec>,
    pub stations: Vec<StationSpec>,
    #[serde(default)]
    pub walls: Vec<[f64; 4]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApSpec {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationSpec {
    pub id: u32,
    pub ap: u32,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptSpec {
    pub txops: usize,
    pub initial: TopologySpec,
    #[serde(default)]
    pub events: Vec<EventSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSpec {
    pub at_txop: usize,
    pub topology: TopologySpec,
}

fn wall_rows(rows: &[[f64; 4]]) -> Vec<Wall> {
    rows.iter()
        .map(|[x1, y1, x2, y2]| Wall::new(Position::new(*x1, *y1), Position::new(*x2, *y2)))
        .collect()
}

impl TopologySpec {
    pub fn to_topology(&self) -> Result<Topology, ConfigError> {
        let aps = self
            .aps
            .iter()
            .map(|a| (ApId(a.id), Position::new(a.x, a.y)))
            .collect();
        let stations = self
            .stations
            .iter()
            .map(|s| (StationId(s.id), Position::new(s.x, s.y), ApId(s.ap)))
            .collect();
        let topo = Topology::new(aps, stations, wall_rows(&self.walls));
        let violations = topo.validate();
        if violations.is_empty() {
            Ok(topo)
        } else {
            Err(ConfigError::Invalid(
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    pub fn from_topology(topo: &Topology) -> Self {
        Self {
            aps: topo
                .aps()
                .iter()
                .map(|(id, p)| ApSpec {
                    id: id.0,
                    x: p.x,
                    y: p.y,
                })
                .collect(),
            stations: topo
                .stations()
                .iter()
                .map(|(id, p, ap)| StationSpec {
                    id: id.0,
                    ap: ap.0,
                    x: p.x,
                    y: p.y,
                })
                .collect(),
            walls: topo
                .walls()
                .iter()
                .map(|w| [w.a.x, w.a.y, w.b.x, w.b.y])
                .collect(),
        }
    }
}

impl ScriptSpec {
    pub fn to_script(&self) -> Result<ScenarioScript, ConfigError> {
        let script = ScenarioScript {
            initial: self.initial.to_topology()?,
            events: self
                .events
                .iter()
                .map(|e| {
                    Ok(MobilityEvent {
                        at_txop: e.at_txop,
                        topology: e.topology.to_topology()?,
                    })
                })
                .collect::<Result<_, ConfigError>>()?,
            total_txops: self.txops,
        };
        script
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(script)
    }

    pub fn from_script(script: &ScenarioScript) -> Self {
        Self {
            txops: script.total_txops,
            initial: TopologySpec::from_topology(&script.initial),
            events: script
                .events
                .iter()
                .map(|e| EventSpec {
                    at_txop: e.at_txop,
                    topology: TopologySpec::from_topology(&e.topology),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulerKindSection {
    Hierarchical,
    Flat,
    Single,
    #[serde(alias = "static")]
    StaticK,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchedulerSection {
    pub kind: SchedulerKindSection,
    /// Concurrent-transmitter count for kind = "static-k".
    pub static_k: usize,
}

impl Default for SchedulerSection {
    fn default() -> Self {
        Self {
            kind: SchedulerKindSection::Hierarchical,
            static_k: 2,
        }
    }
}

/// Hyperparameter overrides; unset fields fall back to the tuned
/// per-algorithm defaults. `reward_norm_bps` additionally defaults to the
/// single-link maximum effective rate of the configured PHY.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentSection {
    pub algorithm: Algorithm,
    pub epsilon: Option<f64>,
    pub epsilon_decay: Option<f64>,
    pub temperature: Option<f64>,
    pub ucb_c: Option<f64>,
    pub ts_prior_mean: Option<f64>,
    pub ts_prior_var: Option<f64>,
    pub ts_obs_var: Option<f64>,
    pub discount: Option<f64>,
    pub reward_norm_bps: Option<f64>,
}

impl Default for AgentSection {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Ucb,
            epsilon: None,
            epsilon_decay: None,
            temperature: None,
            ucb_c: None,
            ts_prior_mean: None,
            ts_prior_var: None,
            ts_obs_var: None,
            discount: None,
            reward_norm_bps: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub carrier_freq_ghz: f64,
    pub breakpoint_m: f64,
    pub tx_power_dbm: f64,
    pub noise_floor_dbm: f64,
    pub sinr_noise_std_db: f64,
    pub wall_penalty_db: f64,
    /// Path to an MCS table file; the built-in 20 MHz table when unset.
    pub mcs_table: Option<PathBuf>,
}

impl Default for ChannelSection {
    fn default() -> Self {
        let p = ChannelParams::default();
        Self {
            carrier_freq_ghz: p.carrier_freq_ghz,
            breakpoint_m: p.breakpoint_m,
            tx_power_dbm: p.tx_power_dbm,
            noise_floor_dbm: p.noise_floor_dbm,
            sinr_noise_std_db: p.sinr_noise_std_db,
            wall_penalty_db: p.wall_penalty_db,
            mcs_table: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TxopSection {
    pub duration_s: f64,
    pub subframe_bytes: u32,
    pub mcs: u8,
    pub width_mhz: u16,
    pub streams: u8,
    pub guard_interval_ns: u16,
}

impl Default for TxopSection {
    fn default() -> Self {
        let t = TxopConfig::default();
        Self {
            duration_s: t.duration_s,
            subframe_bytes: t.subframe_bytes,
            mcs: t.mcs,
            width_mhz: t.width_mhz,
            streams: t.streams,
            guard_interval_ns: t.guard_ns,
        }
    }
}

/// Where each run's scenario script comes from.
#[derive(Clone, Debug)]
pub enum ScenarioSource {
    /// The square scenario, identical for every seed.
    Square {
        d: f64,
        station_offset: f64,
        post_move_offset: Option<f64>,
        walls: Vec<Wall>,
    },
    /// A fresh randomized scenario per seed.
    Random(RandomScenarioSpec),
    /// A fixed hand-written script.
    Scripted(ScenarioScript),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchedulerKind {
    Hierarchical,
    Flat,
    Single,
    StaticK(usize),
}

impl SchedulerKind {
    pub fn label(&self) -> String {
        match self {
            SchedulerKind::Hierarchical => "hierarchical".into(),
            SchedulerKind::Flat => "flat".into(),
            SchedulerKind::Single => "single".into(),
            SchedulerKind::StaticK(k) => format!("static-{k}"),
        }
    }

    /// Whether the policy has agents (and therefore an algorithm label).
    pub fn is_learning(&self) -> bool {
        matches!(self, SchedulerKind::Hierarchical | SchedulerKind::Flat)
    }
}

/// Validated runtime parameters, ready for the runner.
#[derive(Clone, Debug)]
pub struct ResolvedConfig {
    pub scenario: ScenarioSource,
    pub scheduler: SchedulerKind,
    pub theta: Hyperparams,
    pub channel: ChannelParams,
    pub table: McsTable,
    pub txop: TxopConfig,
    pub txops: usize,
    pub seeds: Vec<u64>,
    pub ci_level: f64,
    pub smoothing_window: usize,
    /// Human-readable run label carried into traces and summaries.
    pub label: String,
}

impl ResolvedConfig {
    /// The effective rate of one perfectly received single-link TXOP; the
    /// default reward normalization constant.
    pub fn single_link_max_rate_bps(&self) -> f64 {
        let entry = self
            .table
            .entry(self.txop.mcs_key())
            .expect("validated key");
        n_ampdu(entry.rate_bps, &self.txop) as f64 * self.txop.subframe_bits()
            / self.txop.duration_s
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Validates everything and resolves defaults. Fails with a descriptive
    /// error before any run starts.
    pub fn resolve(&self) -> Result<ResolvedConfig, ConfigError> {
        let invalid = |msg: String| ConfigError::Invalid(msg);

        let channel = ChannelParams {
            carrier_freq_ghz: self.channel.carrier_freq_ghz,
            breakpoint_m: self.channel.breakpoint_m,
            tx_power_dbm: self.channel.tx_power_dbm,
            noise_floor_dbm: self.channel.noise_floor_dbm,
            sinr_noise_std_db: self.channel.sinr_noise_std_db,
            wall_penalty_db: self.channel.wall_penalty_db,
        };
        channel.validate().map_err(|e| invalid(e.to_string()))?;

        let table = match &self.channel.mcs_table {
            Some(path) => McsTable::from_file(path).map_err(|e| invalid(e.to_string()))?,
            None => McsTable::builtin_he20(),
        };

        let txop = TxopConfig {
            duration_s: self.txop.duration_s,
            subframe_bytes: self.txop.subframe_bytes,
            mcs: self.txop.mcs,
            width_mhz: self.txop.width_mhz,
            streams: self.txop.streams,
            guard_ns: self.txop.guard_interval_ns,
        };
        txop.validate().map_err(|e| invalid(e.to_string()))?;
        table
            .entry(txop.mcs_key())
            .map_err(|e| invalid(e.to_string()))?;

        let seeds: Vec<u64> = match &self.run.seed_list {
            Some(list) if !list.is_empty() => list.clone(),
            Some(_) => return Err(invalid("seed_list must not be empty".into())),
            None if self.run.seeds == 0 => return Err(invalid("need at least one seed".into())),
            None => {
                let end = self
                    .run
                    .base_seed
                    .checked_add(self.run.seeds)
                    .ok_or_else(|| invalid("base_seed + seeds overflows".into()))?;
                (self.run.base_seed..end).collect()
            }
        };
        if !(self.run.ci_level > 0.0 && self.run.ci_level < 1.0) {
            return Err(invalid(format!(
                "ci_level must be in (0, 1), got {}",
                self.run.ci_level
            )));
        }

        let (scenario, txops, scenario_label) = self.resolve_scenario()?;

        let scheduler = match self.scheduler.kind {
            SchedulerKindSection::Hierarchical => SchedulerKind::Hierarchical,
            SchedulerKindSection::Flat => SchedulerKind::Flat,
            SchedulerKindSection::Single => SchedulerKind::Single,
            SchedulerKindSection::StaticK => SchedulerKind::StaticK(self.scheduler.static_k),
        };
        if let SchedulerKind::StaticK(k) = scheduler {
            if k == 0 {
                return Err(invalid("static_k must be >= 1".into()));
            }
        }

        let tuned = Hyperparams::tuned(self.agent.algorithm);
        let mut theta = Hyperparams {
            algorithm: self.agent.algorithm,
            epsilon: self.agent.epsilon.unwrap_or(tuned.epsilon),
            epsilon_decay: self.agent.epsilon_decay.unwrap_or(tuned.epsilon_decay),
            temperature: self.agent.temperature.unwrap_or(tuned.temperature),
            ucb_c: self.agent.ucb_c.unwrap_or(tuned.ucb_c),
            ts_prior_mean: self.agent.ts_prior_mean.unwrap_or(tuned.ts_prior_mean),
            ts_prior_var: self.agent.ts_prior_var.unwrap_or(tuned.ts_prior_var),
            ts_obs_var: self.agent.ts_obs_var.unwrap_or(tuned.ts_obs_var),
            discount: self.agent.discount.unwrap_or(tuned.discount),
            reward_norm_bps: self.agent.reward_norm_bps.unwrap_or(0.0),
        };

        let mut resolved = ResolvedConfig {
            scenario,
            scheduler,
            theta,
            channel,
            table,
            txop,
            txops,
            seeds,
            ci_level: self.run.ci_level,
            smoothing_window: self.run.smoothing_window.max(1),
            label: String::new(),
        };
        if resolved.theta.reward_norm_bps <= 0.0 {
            theta.reward_norm_bps = resolved.single_link_max_rate_bps();
            resolved.theta = theta;
        }
        resolved
            .theta
            .validate()
            .map_err(|e| invalid(e.to_string()))?;

        resolved.label = if scheduler.is_learning() {
            format!(
                "{}-{} {}",
                scheduler.label(),
                resolved.theta.algorithm.name(),
                scenario_label
            )
        } else {
            format!("{} {}", scheduler.label(), scenario_label)
        };
        Ok(resolved)
    }

    fn resolve_scenario(&self) -> Result<(ScenarioSource, usize, String), ConfigError> {
        let s = &self.scenario;
        match s.kind {
            ScenarioKind::Square => {
                if !(s.d > 0.0) {
                    return Err(ConfigError::Invalid("scenario.d must be > 0".into()));
                }
                if !(s.station_offset > 0.0) {
                    return Err(ConfigError::Invalid(
                        "scenario.station_offset must be > 0".into(),
                    ));
                }
                if self.run.txops == 0 {
                    return Err(ConfigError::Invalid("run.txops must be > 0".into()));
                }
                let mut walls = wall_rows(&s.walls);
                if s.default_walls {
                    walls.extend(crate::scenario::default_square_walls(s.d));
                }
                let label = match s.post_move_offset {
                    Some(offset) => format!("square d={} move-to={offset}", s.d),
                    None => format!("square d={}", s.d),
                };
                Ok((
                    ScenarioSource::Square {
                        d: s.d,
                        station_offset: s.station_offset,
                        post_move_offset: s.post_move_offset,
                        walls,
                    },
                    self.run.txops,
                    label,
                ))
            }
            ScenarioKind::Random => {
                let r = &s.random;
                let spec = RandomScenarioSpec {
                    ap_count: (r.ap_count[0], r.ap_count[1]),
                    stations_per_ap: (r.stations_per_ap[0], r.stations_per_ap[1]),
                    area_side_m: r.area_side_m,
                    sigma_range_m: (r.sigma_range_m[0], r.sigma_range_m[1]),
                    reposition_events: r.reposition_events,
                    total_txops: self.run.txops,
                };
                spec.validate()
                    .map_err(|e| ConfigError::Invalid(e.to_string()))?;
                let label = format!(
                    "random aps={}-{} area={}",
                    spec.ap_count.0, spec.ap_count.1, spec.area_side_m
                );
                Ok((ScenarioSource::Random(spec), self.run.txops, label))
            }
            ScenarioKind::Scripted => {
                let spec = s.script.as_ref().ok_or_else(|| {
                    ConfigError::Invalid(
                        "scenario.kind = \"scripted\" needs a [scenario.script] section".into(),
                    )
                })?;
                let script = spec.to_script()?;
                let txops = script.total_txops;
                Ok((
                    ScenarioSource::Scripted(script),
                    txops,
                    "scripted".to_string(),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_resolves_to_reference_defaults() {
        let cfg = ExperimentConfig::from_toml_str("").unwrap();
        let resolved = cfg.resolve().unwrap();
        assert_eq!(resolved.channel.tx_power_dbm, 16.0206);
        assert_eq!(resolved.channel.noise_floor_dbm, -93.97);
        assert_eq!(resolved.channel.carrier_freq_ghz, 5.0);
        assert_eq!(resolved.txop.duration_s, 5.484e-3);
        assert_eq!(resolved.txop.subframe_bytes, 1500);
        assert_eq!(resolved.txop.mcs, 11);
        assert_eq!(resolved.seeds.len(), 40);
        assert_eq!(resolved.txops, 2000);
        assert_eq!(resolved.ci_level, 0.99);
        // Auto reward normalization: the single-link maximum.
        assert!((resolved.theta.reward_norm_bps - 144_420_131.291_028_44).abs() < 1e-3);
    }

    #[test]
    fn empty_sections_keep_defaults() {
        let cfg = ExperimentConfig::from_toml_str(
            "[run]\n[scenario]\n[scheduler]\n[agent]\n[channel]\n[txop]\n",
        )
        .unwrap();
        let resolved = cfg.resolve().unwrap();
        assert_eq!(resolved.channel.breakpoint_m, 10.0);
        assert_eq!(resolved.scheduler, SchedulerKind::Hierarchical);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ExperimentConfig::from_toml_str("[run]\nfoo = 1\n").unwrap_err();
        assert!(err.to_string().contains("foo"));
    }

    #[test]
    fn seed_list_overrides_count() {
        let cfg =
            ExperimentConfig::from_toml_str("[run]\nseed_list = [5, 9]\nseeds = 40\n").unwrap();
        assert_eq!(cfg.resolve().unwrap().seeds, vec![5, 9]);
    }

    #[test]
    fn invalid_values_fail_before_running() {
        for (toml, needle) in [
            ("[run]\ntxops = 0\n", "txops"),
            ("[run]\nseeds = 0\n", "seed"),
            ("[run]\nci_level = 1.5\n", "ci_level"),
            ("[scenario]\nd = -3.0\n", "d must be"),
            (
                "[scheduler]\nkind = \"static-k\"\nstatic_k = 0\n",
                "static_k",
            ),
            ("[agent]\ndiscount = 0.0\n", "discount"),
            ("[channel]\nbreakpoint_m = 0.0\n", "breakpoint"),
            ("[txop]\nmcs = 13\n", "MCS"),
        ] {
            let cfg = ExperimentConfig::from_toml_str(toml).unwrap();
            let err = cfg.resolve().unwrap_err();
            assert!(
                err.to_string().contains(needle),
                "expected '{needle}' in '{err}' for {toml:?}"
            );
        }
    }

    #[test]
    fn agent_overrides_apply() {
        let cfg = ExperimentConfig::from_toml_str(
            "[agent]\nalgorithm = \"softmax\"\ntemperature = 0.42\ndiscount = 0.9\n",
        )
        .unwrap();
        let resolved = cfg.resolve().unwrap();
        assert_eq!(resolved.theta.algorithm, Algorithm::Softmax);
        assert_eq!(resolved.theta.temperature, 0.42);
        assert_eq!(resolved.theta.discount, 0.9);
    }

    #[test]
    fn scripted_scenario_roundtrip() {
        let toml = r#"
[scenario]
kind = "scripted"

[scenario.script]
txops = 100

[scenario.script.initial]
aps = [{ id = 0, x = 0.0, y = 0.0 }, { id = 1, x = 10.0, y = 0.0 }]
stations = [
  { id = 0, ap = 0, x = 1.0, y = 1.0 },
  { id = 1, ap = 1, x = 11.0, y = 1.0 },
]
walls = [[5.0, -1.0, 5.0, 1.0]]

[[scenario.script.events]]
at_txop = 50

[scenario.script.events.topology]
aps = [{ id = 0, x = 0.0, y = 0.0 }, { id = 1, x = 10.0, y = 0.0 }]
stations = [
  { id = 0, ap = 0, x = 2.0, y = 2.0 },
  { id = 1, ap = 1, x = 12.0, y = 2.0 },
]
"#;
        let cfg = ExperimentConfig::from_toml_str(toml).unwrap();
        let resolved = cfg.resolve().unwrap();
        let ScenarioSource::Scripted(script) = &resolved.scenario else {
            panic!("expected scripted scenario");
        };
        assert_eq!(script.total_txops, 100);
        assert_eq!(script.events.len(), 1);
        assert_eq!(script.initial.walls().len(), 1);
        assert_eq!(resolved.txops, 100);

        // Serialize the script back out and re-parse it.
        let spec = ScriptSpec::from_script(script);
        let script2 = spec.to_script().unwrap();
        assert_eq!(*script, script2);
    }

    #[test]
    fn scripted_scenario_rejects_structure_change() {
        let toml = r#"
[scenario]
kind = "scripted"

[scenario.script]
txops = 100

[scenario.script.initial]
aps = [{ id = 0, x = 0.0, y = 0.0 }]
stations = [{ id = 0, ap = 0, x = 1.0, y = 1.0 }]

[[scenario.script.events]]
at_txop = 50

[scenario.script.events.topology]
aps = [{ id = 0, x = 0.0, y = 0.0 }]
stations = [{ id = 1, ap = 0, x = 2.0, y = 2.0 }]
"#;
        let cfg = ExperimentConfig::from_toml_str(toml).unwrap();
        assert!(cfg.resolve().is_err());
    }
}
