//! Machine-readable result files.
//!
//! All outputs are CSV with fixed schemas. Floats are written with Rust's
//! shortest round-trip formatting, so reading a file back yields the exact
//! in-memory values and identical runs produce byte-identical files.
//!
//! - `trace_<seed>.csv`: `txop,sim_time_s,rate_bps`
//! - `aggregate.csv`: `txop,sim_time_s,mean_rate,ci_lo,ci_hi` (one leading
//!   `#` metadata line records runs, CI level, smoothing, and τ)
//! - `summary.csv`: `label,mean_rate_mbps,reference_mbps`
//! - `fairness.csv`: `station,share,ideal_single_tx_share`
//! - `tuning_report.csv`: one row per evaluated candidate, best row flagged

use super::runner::RunTrace;
use super::stats::{Aggregate, FairnessReport};
use super::tuner::{SearchSpec, TuneOutcome, TuneRange};
use super::ExperimentError;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Published three-scenario comparison averages, reported next to our own
/// measurements in `summary.csv` for the matching policy labels.
pub fn reference_mean_mbps(label: &str) -> Option<f64> {
    match label {
        "hierarchical-epsilon-greedy" => Some(251.8),
        "hierarchical-softmax" => Some(235.6),
        "hierarchical-ucb" => Some(268.0),
        "hierarchical-thompson" => Some(238.8),
        "flat-best" => Some(204.5),
        _ => None,
    }
}

/// One `summary.csv` row.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub label: String,
    pub mean_rate_bps: f64,
}

pub fn write_trace(dir: &Path, trace: &RunTrace, tau_s: f64) -> Result<PathBuf, ExperimentError> {
    let path = dir.join(format!("trace_{}.csv", trace.seed));
    let mut out = String::from("txop,sim_time_s,rate_bps\n");
    for (t, rate) in trace.rates_bps.iter().enumerate() {
        writeln!(out, "{},{},{}", t, t as f64 * tau_s, rate).expect("string write");
    }
    fs::write(&path, out)?;
    Ok(path)
}

/// Reads one trace file back; participation counts are not part of the
/// trace schema, so the result carries rates only.
pub fn read_trace(path: &Path) -> Result<RunTrace, ExperimentError> {
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    let seed: u64 = name
        .strip_prefix("trace_")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            ExperimentError::Parse(format!("not a trace file name: {}", path.display()))
        })?;
    let text = fs::read_to_string(path)?;
    let mut rates = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            continue;
        }
        let rate = line.rsplit(',').next().ok_or_else(|| {
            ExperimentError::Parse(format!("{}:{}: empty row", path.display(), i + 1))
        })?;
        rates.push(
            rate.parse::<f64>().map_err(|e| {
                ExperimentError::Parse(format!("{}:{}: {}", path.display(), i + 1, e))
            })?,
        );
    }
    Ok(RunTrace {
        seed,
        rates_bps: rates,
        participation: BTreeMap::new(),
        label: String::new(),
    })
}

/// Reads every `trace_*.csv` in `dir`, ordered by seed.
pub fn read_traces(dir: &Path) -> Result<Vec<RunTrace>, ExperimentError> {
    let mut traces = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|s| s.to_str()) else {
            continue;
        };
        if name.starts_with("trace_") && name.ends_with(".csv") {
            traces.push(read_trace(&path)?);
        }
    }
    traces.sort_by_key(|t| t.seed);
    if traces.is_empty() {
        return Err(ExperimentError::Parse(format!(
            "no trace_*.csv files in {}",
            dir.display()
        )));
    }
    Ok(traces)
}

pub fn write_aggregate(
    path: &Path,
    aggregate: &Aggregate,
    tau_s: f64,
) -> Result<(), ExperimentError> {
    let mut out = format!(
        "# runs={} ci_level={} smoothing_window={} tau_s={}\n",
        aggregate.n_runs, aggregate.ci_level, aggregate.smoothing_window, tau_s
    );
    out.push_str("txop,sim_time_s,mean_rate,ci_lo,ci_hi\n");
    for (t, (mean, hw)) in aggregate
        .mean_rate_bps
        .iter()
        .zip(&aggregate.ci_half_width_bps)
        .enumerate()
    {
        writeln!(
            out,
            "{},{},{},{},{}",
            t,
            t as f64 * tau_s,
            mean,
            mean - hw,
            mean + hw
        )
        .expect("string write");
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<(), ExperimentError> {
    let mut out = String::from("label,mean_rate_mbps,reference_mbps\n");
    for row in rows {
        let reference = reference_mean_mbps(&row.label)
            .map(|v| v.to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{}",
            row.label,
            row.mean_rate_bps / 1e6,
            reference
        )
        .expect("string write");
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_fairness(path: &Path, report: &FairnessReport) -> Result<(), ExperimentError> {
    let mut out = String::from("station,share,ideal_single_tx_share\n");
    for (station, share) in &report.shares {
        writeln!(
            out,
            "{},{},{}",
            station.0, share, report.ideal_single_tx_share
        )
        .expect("string write");
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_tuning_report(
    path: &Path,
    spec: &SearchSpec,
    outcome: &TuneOutcome,
) -> Result<(), ExperimentError> {
    fn range(r: &TuneRange) -> String {
        let scale = if r.log_scale { " log" } else { "" };
        format!("[{}, {}{scale}]", r.lo, r.hi)
    }
    let mut out = format!(
        "# ranges: epsilon={} epsilon_decay={} temperature={} ucb_c={} \
         ts_prior_var={} ts_obs_var={} discount={}\n",
        range(&spec.epsilon),
        range(&spec.epsilon_decay),
        range(&spec.temperature),
        range(&spec.ucb_c),
        range(&spec.ts_prior_var),
        range(&spec.ts_obs_var),
        range(&spec.discount),
    );
    out.push_str(
        "algorithm,score_mbps,epsilon,epsilon_decay,temperature,ucb_c,\
         ts_prior_mean,ts_prior_var,ts_obs_var,discount,best\n",
    );
    for (i, eval) in outcome.evaluations.iter().enumerate() {
        let t = &eval.theta;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            outcome.algorithm.name(),
            eval.score_bps / 1e6,
            t.epsilon,
            t.epsilon_decay,
            t.temperature,
            t.ucb_c,
            t.ts_prior_mean,
            t.ts_prior_var,
            t.ts_obs_var,
            t.discount,
            if i == outcome.best { 1 } else { 0 }
        )
        .expect("string write");
    }
    fs::write(path, out)?;
    Ok(())
}
