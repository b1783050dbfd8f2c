//! Cross-seed aggregation: per-TXOP means with Student-t confidence
//! intervals, optional trailing-window smoothing, and the fairness report.

use super::runner::RunTrace;
use super::ExperimentError;
use crate::network::StationId;
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::collections::BTreeMap;

/// Aggregated time series over a set of runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    /// Per-TXOP mean rate over seeds (smoothed when `smoothing_window` > 1).
    pub mean_rate_bps: Vec<f64>,
    /// Per-TXOP CI half-width at `ci_level` (same smoothing).
    pub ci_half_width_bps: Vec<f64>,
    /// Mean of the unsmoothed per-TXOP means.
    pub overall_mean_bps: f64,
    pub n_runs: usize,
    pub ci_level: f64,
    pub smoothing_window: usize,
}

/// Sums after sorting, so the result is identical for any permutation of
/// the inputs (seed order must not leak into aggregate output).
fn stable_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

/// Per-TXOP mean and Student-t CI half-width across runs.
pub fn aggregate(
    traces: &[RunTrace],
    ci_level: f64,
    smoothing_window: usize,
) -> Result<Aggregate, ExperimentError> {
    if traces.len() < 2 {
        return Err(ExperimentError::Aggregation(format!(
            "need at least 2 traces, got {}",
            traces.len()
        )));
    }
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(ExperimentError::Aggregation(format!(
            "ci_level must be in (0, 1), got {ci_level}"
        )));
    }
    let len = traces[0].len();
    for trace in traces {
        if trace.len() != len {
            return Err(ExperimentError::Aggregation(format!(
                "trace lengths differ: {} vs {}",
                trace.len(),
                len
            )));
        }
    }
    let n = traces.len();
    let t_quantile = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid t distribution")
        .inverse_cdf(0.5 + ci_level / 2.0);

    let mut mean = Vec::with_capacity(len);
    let mut half_width = Vec::with_capacity(len);
    let mut values = vec![0.0; n];
    let mut deviations = vec![0.0; n];
    for t in 0..len {
        for (i, trace) in traces.iter().enumerate() {
            values[i] = trace.rates_bps[t];
        }
        let m = stable_sum(&mut values) / n as f64;
        for (i, v) in values.iter().enumerate() {
            deviations[i] = (v - m) * (v - m);
        }
        let variance = stable_sum(&mut deviations) / (n - 1) as f64;
        mean.push(m);
        half_width.push(t_quantile * (variance / n as f64).sqrt());
    }

    let overall_mean_bps = mean.iter().sum::<f64>() / len.max(1) as f64;
    let window = smoothing_window.max(1);
    Ok(Aggregate {
        mean_rate_bps: trailing_mean(&mean, window),
        ci_half_width_bps: trailing_mean(&half_width, window),
        overall_mean_bps,
        n_runs: n,
        ci_level,
        smoothing_window: window,
    })
}

/// Trailing moving average: element `t` averages the last `window` values
/// up to and including `t`.
fn trailing_mean(series: &[f64], window: usize) -> Vec<f64> {
    if window <= 1 {
        return series.to_vec();
    }
    let mut out = Vec::with_capacity(series.len());
    let mut running = 0.0;
    for t in 0..series.len() {
        running += series[t];
        if t >= window {
            running -= series[t - window];
        }
        out.push(running / window.min(t + 1) as f64);
    }
    out
}

/// Per-station participation shares against the ideal-fairness reference of
/// a single-transmission scheme (every station 1 / total stations).
#[derive(Clone, Debug, PartialEq)]
pub struct FairnessReport {
    /// Mean per-TXOP participation share per station, averaged over runs.
    pub shares: BTreeMap<StationId, f64>,
    pub ideal_single_tx_share: f64,
    pub n_runs: usize,
}

pub fn fairness_report(traces: &[RunTrace]) -> Result<FairnessReport, ExperimentError> {
    if traces.is_empty() {
        return Err(ExperimentError::Aggregation("no traces".into()));
    }
    let stations: Vec<StationId> = traces[0].participation.keys().copied().collect();
    let mut shares = BTreeMap::new();
    for station in &stations {
        let mut per_run: Vec<f64> = traces
            .iter()
            .map(|trace| {
                let count = trace.participation.get(station).copied().ok_or_else(|| {
                    ExperimentError::Aggregation(format!("station {station} missing from a trace"))
                })?;
                Ok(count as f64 / trace.len().max(1) as f64)
            })
            .collect::<Result<_, ExperimentError>>()?;
        shares.insert(*station, stable_sum(&mut per_run) / traces.len() as f64);
    }
    Ok(FairnessReport {
        shares,
        ideal_single_tx_share: 1.0 / stations.len().max(1) as f64,
        n_runs: traces.len(),
    })
}
