//! Single-TXOP simulation: A-MPDU sizing, per-link SINR and success
//! probability, binomial reception draw, and the effective-data-rate metric.
//!
//! Acknowledgments and coordination signaling consume no airtime, and every
//! scheduled link always has a full buffer of sub-frames to send.

use crate::channel::{self, ChannelParams, McsKey, McsTable};
use crate::network::{Pair, Topology, TransmissionSet};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Fixed per-TXOP transmission parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TxopConfig {
    /// TXOP duration τ in seconds.
    pub duration_s: f64,
    /// A-MPDU sub-frame size in bytes.
    pub subframe_bytes: u32,
    pub mcs: u8,
    pub width_mhz: u16,
    pub streams: u8,
    pub guard_ns: u16,
}

impl Default for TxopConfig {
    fn default() -> Self {
        Self {
            duration_s: 5.484e-3,
            subframe_bytes: 1500,
            mcs: 11,
            width_mhz: 20,
            streams: 1,
            guard_ns: 800,
        }
    }
}

impl TxopConfig {
    pub fn mcs_key(&self) -> McsKey {
        McsKey {
            mcs: self.mcs,
            width_mhz: self.width_mhz,
            streams: self.streams,
            guard_ns: self.guard_ns,
        }
    }

    pub fn subframe_bits(&self) -> f64 {
        f64::from(self.subframe_bytes) * 8.0
    }

    pub fn validate(&self) -> Result<(), &'static str> {
        if !(self.duration_s > 0.0) {
            return Err("duration_s must be > 0");
        }
        if self.subframe_bytes == 0 {
            return Err("subframe_bytes must be > 0");
        }
        Ok(())
    }
}

/// Maximum number of A-MPDU sub-frames that fit in one TXOP at `rate_bps`:
/// ceil(rate x τ / sub-frame bits), and at least one.
pub fn n_ampdu(rate_bps: f64, cfg: &TxopConfig) -> u64 {
    debug_assert!(rate_bps > 0.0);
    let quotient = rate_bps * cfg.duration_s / cfg.subframe_bits();
    // Relative epsilon guards against float dust pushing an exactly
    // integral quotient over the next ceiling.
    let n = (quotient * (1.0 - 1e-12)).ceil() as u64;
    n.max(1)
}

/// Outcome of one link within a TXOP.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkOutcome {
    pub pair: Pair,
    pub sinr_db: f64,
    pub success_prob: f64,
    pub subframes_sent: u64,
    pub subframes_received: u64,
}

/// Outcome of one TXOP across all concurrent links.
#[derive(Clone, Debug, PartialEq)]
pub struct TxopResult {
    pub links: Vec<LinkOutcome>,
    /// Received bits divided by τ, summed across concurrent links.
    pub effective_rate_bps: f64,
}

/// Simulates one TXOP for the transmission set `active`.
///
/// Per pair, in canonical AP order: draw the SINR perturbation from
/// `noise_rng`, evaluate SINR against all other pairs, map to a success
/// probability, and draw the received sub-frame count from `reception_rng`
/// as Binomial(n_ampdu, p) by inversion. Given identical streams and inputs
/// the result is bit-identical across runs.
///
/// Panics if `active` is not valid for `topo` or the MCS key is absent from
/// `table`; both are validated up front by the experiment runner.
pub fn simulate_txop<Rn: Rng, Rr: Rng>(
    active: &TransmissionSet,
    topo: &Topology,
    ch: &ChannelParams,
    table: &McsTable,
    cfg: &TxopConfig,
    noise_rng: &mut Rn,
    reception_rng: &mut Rr,
) -> TxopResult {
    let draws = draw_noise(active.len(), ch, noise_rng);
    simulate_with_noise(active, topo, ch, table, cfg, &draws, reception_rng)
}

/// [`simulate_txop`] fed from a single random stream: the per-pair noise
/// draws come first, then the reception draws.
pub fn simulate_txop_single<R: Rng>(
    active: &TransmissionSet,
    topo: &Topology,
    ch: &ChannelParams,
    table: &McsTable,
    cfg: &TxopConfig,
    rng: &mut R,
) -> TxopResult {
    let draws = draw_noise(active.len(), ch, rng);
    simulate_with_noise(active, topo, ch, table, cfg, &draws, rng)
}

fn draw_noise<R: Rng>(n: usize, ch: &ChannelParams, rng: &mut R) -> Vec<f64> {
    let noise = Normal::new(0.0, ch.sinr_noise_std_db).expect("valid noise std");
    (0..n).map(|_| noise.sample(rng)).collect()
}

fn simulate_with_noise<R: Rng>(
    active: &TransmissionSet,
    topo: &Topology,
    ch: &ChannelParams,
    table: &McsTable,
    cfg: &TxopConfig,
    noise_draws: &[f64],
    reception_rng: &mut R,
) -> TxopResult {
    let entry = table
        .entry(cfg.mcs_key())
        .expect("MCS key present in table");
    let sent = n_ampdu(entry.rate_bps, cfg);

    let mut links = Vec::with_capacity(active.len());
    let mut received_bits = 0.0;
    for (pair, draw) in active.pairs().iter().zip(noise_draws) {
        let sinr_db = channel::sinr(pair, active, topo, ch, *draw);
        let p = channel::logistic_success(sinr_db, entry.midpoint_db, entry.steepness_per_db);
        let received = binomial_inversion(sent, p, reception_rng);
        received_bits += received as f64 * cfg.subframe_bits();
        links.push(LinkOutcome {
            pair: *pair,
            sinr_db,
            success_prob: p,
            subframes_sent: sent,
            subframes_received: received,
        });
    }
    TxopResult {
        links,
        effective_rate_bps: received_bits / cfg.duration_s,
    }
}

/// Draws Binomial(n, p) by CDF inversion, consuming exactly one uniform.
///
/// For p > 1/2 the complement distribution is walked instead so the running
/// point mass never underflows at the low end.
pub fn binomial_inversion<R: Rng>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    let u: f64 = rng.random();
    if p > 0.5 {
        n - cdf_walk(n, 1.0 - p, 1.0 - u)
    } else {
        cdf_walk(n, p, u)
    }
}

/// Smallest k with CDF(k) >= u, walking the pmf recurrence upward.
fn cdf_walk(n: u64, p: f64, u: f64) -> u64 {
    let q = 1.0 - p;
    let pmf = q.powf(n as f64);
    if pmf == 0.0 {
        // (1-p)^n underflowed (huge n); walk in log space instead.
        return cdf_walk_log(n, p, u);
    }
    let ratio = p / q;
    let mut pmf = pmf;
    let mut cdf = pmf;
    let mut k = 0u64;
    while u > cdf && k < n {
        pmf *= (n - k) as f64 / (k + 1) as f64 * ratio;
        k += 1;
        cdf += pmf;
    }
    k
}

fn cdf_walk_log(n: u64, p: f64, u: f64) -> u64 {
    let log_ratio = p.ln() - (1.0 - p).ln();
    let mut log_pmf = n as f64 * (1.0 - p).ln();
    let mut cdf = log_pmf.exp();
    let mut k = 0u64;
    while u > cdf && k < n {
        log_pmf += ((n - k) as f64 / (k + 1) as f64).ln() + log_ratio;
        k += 1;
        cdf += log_pmf.exp();
    }
    k
}
