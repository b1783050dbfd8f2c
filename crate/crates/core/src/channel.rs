//! Radio propagation and link-quality model.
//!
//! Path loss follows the TGax enterprise model: free-space-like attenuation
//! up to a breakpoint distance, a steeper slope beyond it, and a fixed
//! per-wall penalty. SINR aggregates interference power in mW across all
//! concurrent transmitters and applies a Gaussian dB perturbation supplied
//! by the caller, which keeps every operation here a pure function.

use crate::network::{self, Pair, Topology, TransmissionSet, Wall};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Physical-layer constants for one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Carrier frequency in GHz.
    pub carrier_freq_ghz: f64,
    /// Breakpoint distance in meters; beyond it the loss slope steepens.
    pub breakpoint_m: f64,
    /// Transmission power in dBm.
    pub tx_power_dbm: f64,
    /// Ambient noise floor in dBm (converted to mW where summed).
    pub noise_floor_dbm: f64,
    /// Standard deviation of the per-link Gaussian SINR perturbation, in dB.
    pub sinr_noise_std_db: f64,
    /// Attenuation per traversed wall, in dB.
    pub wall_penalty_db: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_freq_ghz: 5.0,
            breakpoint_m: 10.0,
            tx_power_dbm: 16.0206,
            noise_floor_dbm: -93.97,
            sinr_noise_std_db: 2.0,
            wall_penalty_db: 7.0,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.breakpoint_m > 0.0) {
            return Err(ChannelError::InvalidParam("breakpoint_m must be > 0"));
        }
        if !(self.carrier_freq_ghz > 0.0) {
            return Err(ChannelError::InvalidParam("carrier_freq_ghz must be > 0"));
        }
        if !(self.sinr_noise_std_db >= 0.0) {
            return Err(ChannelError::InvalidParam("sinr_noise_std_db must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ChannelError {
    #[error("invalid channel parameter: {0}")]
    InvalidParam(&'static str),
    #[error(
        "MCS not in table: mcs={mcs} width={width_mhz} MHz streams={streams} gi={guard_ns} ns"
    )]
    UnknownMcs {
        mcs: u8,
        width_mhz: u16,
        streams: u8,
        guard_ns: u16,
    },
    #[error("MCS table parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("MCS table i/o error: {0}")]
    Io(String),
}

/// Path loss in dB over `dist_m` meters crossing `n_walls` walls.
///
/// The effective distance is clamped to at least 1 m.
pub fn path_loss(dist_m: f64, n_walls: usize, p: &ChannelParams) -> f64 {
    let delta = dist_m.max(1.0);
    let clamped = delta.min(p.breakpoint_m);
    let mut loss = 40.05 + 20.0 * (clamped * p.carrier_freq_ghz / 2.4).log10();
    if delta > p.breakpoint_m {
        loss += 35.0 * (delta / p.breakpoint_m).log10();
    }
    loss + p.wall_penalty_db * n_walls as f64
}

/// Received power in dBm after `path_loss_db` of attenuation.
pub fn rx_power(tx_dbm: f64, path_loss_db: f64) -> f64 {
    tx_dbm - path_loss_db
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

fn rx_dbm_over_path(
    tx: network::Position,
    rx: network::Position,
    walls: &[Wall],
    p: &ChannelParams,
) -> f64 {
    let pl = path_loss(
        network::distance(tx, rx),
        network::wall_count(tx, rx, walls),
        p,
    );
    rx_power(p.tx_power_dbm, pl)
}

/// SINR in dB at `link`'s station while every pair in `active` transmits.
///
/// `noise_draw_db` is a caller-supplied sample of the Gaussian perturbation
/// (zero for the deterministic value). Interference powers are summed in mW
/// after per-path attenuation, walls included.
///
/// Panics if `link` references nodes absent from `topo`; callers validate
/// the transmission set against the topology first.
pub fn sinr(
    link: &Pair,
    active: &TransmissionSet,
    topo: &Topology,
    p: &ChannelParams,
    noise_draw_db: f64,
) -> f64 {
    let rx_pos = topo
        .station_position(link.station)
        .expect("link station not in topology");
    let tx_pos = topo.ap_position(link.ap).expect("link AP not in topology");
    let signal_dbm = rx_dbm_over_path(tx_pos, rx_pos, topo.walls(), p);

    let mut denom_mw = dbm_to_mw(p.noise_floor_dbm);
    for q in active.pairs() {
        if q.ap == link.ap {
            continue;
        }
        let itx = topo
            .ap_position(q.ap)
            .expect("interferer AP not in topology");
        denom_mw += dbm_to_mw(rx_dbm_over_path(itx, rx_pos, topo.walls(), p));
    }
    signal_dbm - mw_to_dbm(denom_mw) + noise_draw_db
}

/// Probability of successful sub-frame reception at `sinr_db` for a logistic
/// curve with the given midpoint and steepness.
pub fn logistic_success(sinr_db: f64, midpoint_db: f64, steepness_per_db: f64) -> f64 {
    1.0 / (1.0 + (-steepness_per_db * (sinr_db - midpoint_db)).exp())
}

/// Lookup key for one MCS table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct McsKey {
    pub mcs: u8,
    pub width_mhz: u16,
    pub streams: u8,
    pub guard_ns: u16,
}

/// PHY data rate plus success-curve parameters for one MCS row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McsEntry {
    pub rate_bps: f64,
    pub midpoint_db: f64,
    pub steepness_per_db: f64,
}

/// Table of PHY rates and success curves, keyed by
/// (MCS index, channel width, spatial streams, guard interval).
#[derive(Clone, Debug, PartialEq)]
pub struct McsTable {
    rows: BTreeMap<McsKey, McsEntry>,
}

const BUILTIN_HE20: &str = include_str!("../data/mcs_he20.txt");

impl McsTable {
    /// The shipped default: 802.11ax 20 MHz / 1 SS / 800 ns GI, MCS 0-11.
    pub fn builtin_he20() -> Self {
        Self::parse(BUILTIN_HE20).expect("builtin MCS table must parse")
    }

    /// Parses the plain-text tabular format: one row per MCS with columns
    /// `mcs width_mhz streams gi_ns rate_bps midpoint_db steepness_per_db`,
    /// `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, ChannelError> {
        let mut rows = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(ChannelError::Parse {
                    line: line_no,
                    reason: format!("expected 7 columns, found {}", fields.len()),
                });
            }
            fn column<T: std::str::FromStr>(
                fields: &[&str],
                line: usize,
                i: usize,
                name: &str,
            ) -> Result<T, ChannelError>
            where
                T::Err: std::fmt::Display,
            {
                fields[i].parse::<T>().map_err(|e| ChannelError::Parse {
                    line,
                    reason: format!("bad {name}: {e}"),
                })
            }
            let key = McsKey {
                mcs: column(&fields, line_no, 0, "mcs")?,
                width_mhz: column(&fields, line_no, 1, "width_mhz")?,
                streams: column(&fields, line_no, 2, "streams")?,
                guard_ns: column(&fields, line_no, 3, "gi_ns")?,
            };
            let entry = McsEntry {
                rate_bps: column(&fields, line_no, 4, "rate_bps")?,
                midpoint_db: column(&fields, line_no, 5, "midpoint_db")?,
                steepness_per_db: column(&fields, line_no, 6, "steepness_per_db")?,
            };
            if !(entry.rate_bps > 0.0) {
                return Err(ChannelError::Parse {
                    line: line_no,
                    reason: "rate_bps must be > 0".into(),
                });
            }
            if rows.insert(key, entry).is_some() {
                return Err(ChannelError::Parse {
                    line: line_no,
                    reason: format!("duplicate row for mcs {}", key.mcs),
                });
            }
        }
        let table = Self { rows };
        table.check_monotone()?;
        Ok(table)
    }

    pub fn from_file(path: &Path) -> Result<Self, ChannelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ChannelError::Io(e.to_string()))?;
        Self::parse(&text)
    }

    /// Data rates and curve midpoints must both be strictly increasing in
    /// MCS index for each fixed (width, streams, GI) group.
    fn check_monotone(&self) -> Result<(), ChannelError> {
        type Group<'a> = Vec<(u8, &'a McsEntry)>;
        let mut by_group: BTreeMap<(u16, u8, u16), Group> = BTreeMap::new();
        for (key, entry) in &self.rows {
            by_group
                .entry((key.width_mhz, key.streams, key.guard_ns))
                .or_default()
                .push((key.mcs, entry));
        }
        for ((width, streams, gi), mut group) in by_group {
            group.sort_by_key(|(mcs, _)| *mcs);
            for pair in group.windows(2) {
                let (m0, e0) = pair[0];
                let (m1, e1) = pair[1];
                if e1.rate_bps <= e0.rate_bps {
                    return Err(ChannelError::Parse {
                        line: 0,
                        reason: format!(
                            "rate not strictly increasing from mcs {m0} to {m1} \
                             ({width} MHz / {streams} SS / {gi} ns)"
                        ),
                    });
                }
                if e1.midpoint_db <= e0.midpoint_db {
                    return Err(ChannelError::Parse {
                        line: 0,
                        reason: format!(
                            "midpoint not strictly increasing from mcs {m0} to {m1} \
                             ({width} MHz / {streams} SS / {gi} ns)"
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn entry(&self, key: McsKey) -> Result<&McsEntry, ChannelError> {
        self.rows.get(&key).ok_or(ChannelError::UnknownMcs {
            mcs: key.mcs,
            width_mhz: key.width_mhz,
            streams: key.streams,
            guard_ns: key.guard_ns,
        })
    }

    /// Exact PHY rate lookup in bits/s.
    pub fn data_rate(
        &self,
        mcs: u8,
        width_mhz: u16,
        streams: u8,
        guard_ns: u16,
    ) -> Result<f64, ChannelError> {
        self.entry(McsKey {
            mcs,
            width_mhz,
            streams,
            guard_ns,
        })
        .map(|e| e.rate_bps)
    }

    /// Success probability at `sinr_db` using the curve of the first table
    /// row carrying `mcs` (curve parameters are per-MCS).
    pub fn success_probability(&self, sinr_db: f64, mcs: u8) -> Result<f64, ChannelError> {
        self.rows
            .iter()
            .find(|(key, _)| key.mcs == mcs)
            .map(|(_, e)| logistic_success(sinr_db, e.midpoint_db, e.steepness_per_db))
            .ok_or(ChannelError::UnknownMcs {
                mcs,
                width_mhz: 0,
                streams: 0,
                guard_ns: 0,
            })
    }

    pub fn rows(&self) -> impl Iterator<Item = (&McsKey, &McsEntry)> {
        self.rows.iter()
    }
}

impl Default for McsTable {
    fn default() -> Self {
        Self::builtin_he20()
    }
}
