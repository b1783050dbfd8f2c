//! Non-learning baselines: single transmission, the deterministic static
//! strategy for square scenarios, and the Monte-Carlo oracle sweep over
//! concurrent-transmitter counts.

use super::SchedulerError;
use crate::channel::{ChannelParams, McsTable};
use crate::network::{self, ApId, Pair, Position, StationId, Topology, TransmissionSet};
use crate::txop::{simulate_txop_single, TxopConfig};
use rand::Rng;

/// Exactly one concurrent transmission per TXOP: the sharing pair alone.
pub fn single_tx(p0: Pair) -> TransmissionSet {
    TransmissionSet::single(p0)
}

/// Square-scenario geometry resolved from a topology: the four corner APs
/// ordered by the fixed selection convention.
struct SquareLayout {
    center: Position,
    /// AP nearest the origin, its diagonal partner, then the remaining two
    /// by ascending id.
    order: [ApId; 4],
}

fn resolve_square(topo: &Topology) -> Result<SquareLayout, SchedulerError> {
    let aps = topo.aps();
    if aps.len() != 4 {
        return Err(SchedulerError::NotSquare(format!(
            "expected 4 APs, found {}",
            aps.len()
        )));
    }
    let center = Position::new(
        aps.iter().map(|(_, p)| p.x).sum::<f64>() / 4.0,
        aps.iter().map(|(_, p)| p.y).sum::<f64>() / 4.0,
    );
    let radius = network::distance(aps[0].1, center);
    for (id, p) in aps {
        let r = network::distance(*p, center);
        if (r - radius).abs() > 1e-6 * radius.max(1.0) {
            return Err(SchedulerError::NotSquare(format!(
                "{id} is not equidistant from the AP centroid"
            )));
        }
    }
    let mut dists: Vec<f64> = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            dists.push(network::distance(aps[i].1, aps[j].1));
        }
    }
    dists.sort_by(f64::total_cmp);
    let side = dists[0];
    let tol = 1e-6 * side.max(1.0);
    let sides_equal = dists[..4].iter().all(|d| (d - side).abs() < tol);
    let diag = side * 2f64.sqrt();
    let diags_equal = dists[4..].iter().all(|d| (d - diag).abs() < tol);
    if !(side > 0.0 && sides_equal && diags_equal) {
        return Err(SchedulerError::NotSquare(
            "AP pairwise distances do not form a square".into(),
        ));
    }

    // Nearest the origin first (ties by id thanks to canonical AP order),
    // then its diagonal partner, then the remaining two by ascending id.
    let origin = Position::new(0.0, 0.0);
    let first = aps
        .iter()
        .min_by(|(_, a), (_, b)| {
            network::distance(*a, origin).total_cmp(&network::distance(*b, origin))
        })
        .map(|(id, _)| *id)
        .expect("4 APs");
    let first_pos = topo.ap_position(first).expect("AP present");
    let partner = aps
        .iter()
        .max_by(|(_, a), (_, b)| {
            network::distance(first_pos, *a).total_cmp(&network::distance(first_pos, *b))
        })
        .map(|(id, _)| *id)
        .expect("4 APs");
    let mut rest: Vec<ApId> = aps
        .iter()
        .map(|(id, _)| *id)
        .filter(|id| *id != first && *id != partner)
        .collect();
    rest.sort();
    Ok(SquareLayout {
        center,
        order: [first, partner, rest[0], rest[1]],
    })
}

fn outermost_station(topo: &Topology, ap: ApId, center: Position) -> StationId {
    topo.stations_of(ap)
        .max_by(|(_, a), (_, b)| {
            network::distance(*a, center).total_cmp(&network::distance(*b, center))
        })
        .map(|(id, _)| id)
        .expect("AP has stations")
}

/// The deterministic best-case strategy for square scenarios: `k` APs
/// chosen diagonal-first, each transmitting to its station farthest from
/// the square's center.
///
/// The fixed AP order is: the AP nearest the origin, its diagonal partner,
/// then the remaining two by ascending id (the off-diagonal pair is
/// symmetric, so the id order stands in for the distance-maximizing
/// choice).
pub fn static_strategy(topo: &Topology, k: usize) -> Result<TransmissionSet, SchedulerError> {
    let layout = resolve_square(topo)?;
    if k == 0 || k > layout.order.len() {
        return Err(SchedulerError::InvalidK {
            k,
            n_aps: layout.order.len(),
        });
    }
    let pairs = layout.order[..k]
        .iter()
        .map(|ap| Pair::new(*ap, outermost_station(topo, *ap, layout.center)));
    Ok(TransmissionSet::new(pairs).expect("distinct APs"))
}

/// Monte-Carlo sweep over concurrent-transmitter counts for the static
/// strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSweep {
    /// Mean effective rate of `static_strategy(k)` at index `k - 1`.
    pub mean_rates_bps: Vec<f64>,
    /// Argmax of the curve (ties go to the smaller k).
    pub best_k: usize,
}

/// Estimates the mean effective rate of each static strategy over
/// `n_samples` TXOPs (at least one) and returns the best
/// concurrent-transmitter count.
pub fn oracle_best<R: Rng>(
    topo: &Topology,
    ch: &ChannelParams,
    table: &McsTable,
    cfg: &TxopConfig,
    n_samples: usize,
    rng: &mut R,
) -> Result<OracleSweep, SchedulerError> {
    let n_samples = n_samples.max(1);
    let n_aps = topo.n_aps();
    let mut mean_rates_bps = Vec::with_capacity(n_aps);
    for k in 1..=n_aps {
        let set = static_strategy(topo, k)?;
        let mut total = 0.0;
        for _ in 0..n_samples {
            total += simulate_txop_single(&set, topo, ch, table, cfg, rng).effective_rate_bps;
        }
        mean_rates_bps.push(total / n_samples as f64);
    }
    let best_k = mean_rates_bps
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i + 1)
        .expect("nonempty sweep");
    Ok(OracleSweep {
        mean_rates_bps,
        best_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::McsTable;
    use crate::network::StationId;
    use crate::rng::{substream, StreamId};
    use crate::scenario::square_scenario;

    #[test]
    fn single_tx_is_just_p0() {
        let p0 = Pair::new(ApId(2), StationId(9));
        let set = single_tx(p0);
        assert_eq!(set.pairs(), &[p0]);
    }

    #[test]
    fn static_k1_nearest_origin_outermost_station() {
        let topo = square_scenario(10.0, 2.0, vec![]).unwrap();
        let set = static_strategy(&topo, 1).unwrap();
        assert_eq!(set.len(), 1);
        let pair = set.pairs()[0];
        assert_eq!(pair.ap, ApId(0));
        // AP0's outermost (south-west) station sits at (-h, -h).
        let pos = topo.station_position(pair.station).unwrap();
        assert!(pos.x < 0.0 && pos.y < 0.0);
    }

    #[test]
    fn static_k2_uses_the_diagonal() {
        let topo = square_scenario(20.0, 2.0, vec![]).unwrap();
        let set = static_strategy(&topo, 2).unwrap();
        let aps: Vec<ApId> = set.pairs().iter().map(|p| p.ap).collect();
        // (0,0) and (20,20) are the diagonal through the origin corner.
        assert_eq!(aps, vec![ApId(0), ApId(3)]);
    }

    #[test]
    fn static_k4_all_aps_outward_corners() {
        let d = 10.0;
        let topo = square_scenario(d, 2.0, vec![]).unwrap();
        let set = static_strategy(&topo, 4).unwrap();
        assert_eq!(set.len(), 4);
        let center = Position::new(d / 2.0, d / 2.0);
        for pair in set.pairs() {
            let sta = topo.station_position(pair.station).unwrap();
            let ap = topo.ap_position(pair.ap).unwrap();
            // Outermost means strictly farther from the center than its AP.
            assert!(network::distance(sta, center) > network::distance(ap, center));
        }
    }

    #[test]
    fn static_rejects_non_square() {
        let topo = Topology::new(
            vec![
                (ApId(0), Position::new(0.0, 0.0)),
                (ApId(1), Position::new(7.0, 0.0)),
                (ApId(2), Position::new(0.0, 5.0)),
                (ApId(3), Position::new(7.0, 5.0)),
            ],
            (0..4)
                .map(|i| (StationId(i), Position::new(i as f64, 1.0), ApId(i)))
                .collect(),
            vec![],
        );
        assert!(matches!(
            static_strategy(&topo, 2),
            Err(SchedulerError::NotSquare(_))
        ));
    }

    #[test]
    fn static_rejects_bad_k() {
        let topo = square_scenario(10.0, 2.0, vec![]).unwrap();
        assert!(matches!(
            static_strategy(&topo, 0),
            Err(SchedulerError::InvalidK { .. })
        ));
        assert!(matches!(
            static_strategy(&topo, 5),
            Err(SchedulerError::InvalidK { .. })
        ));
    }

    /// Saturated success curve: every link always (or never) succeeds.
    fn forced_table(success: bool) -> McsTable {
        let midpoint = if success { -1e6 } else { 1e6 };
        McsTable::parse(&format!("11 20 1 800 143382352.94117647 {midpoint} 0.5")).unwrap()
    }

    #[test]
    fn oracle_prefers_full_set_when_success_is_certain() {
        let topo = square_scenario(10.0, 2.0, vec![]).unwrap();
        let ch = ChannelParams {
            sinr_noise_std_db: 0.0,
            ..ChannelParams::default()
        };
        let cfg = TxopConfig::default();
        let mut rng = substream(1, StreamId::Reception);
        let sweep = oracle_best(&topo, &ch, &forced_table(true), &cfg, 64, &mut rng).unwrap();
        assert_eq!(sweep.best_k, 4);
        for k in 1..4 {
            assert!(sweep.mean_rates_bps[k] > sweep.mean_rates_bps[k - 1]);
        }
    }

    #[test]
    fn oracle_prefers_single_when_concurrency_always_fails() {
        // A curve whose midpoint splits the single-link SINR from every
        // multi-link SINR: alone succeeds, concurrent fails.
        let topo = square_scenario(5.0, 2.0, vec![]).unwrap();
        let table = McsTable::parse("11 20 1 800 143382352.94117647 35.0 5.0").unwrap();
        let ch = ChannelParams {
            sinr_noise_std_db: 0.0,
            ..ChannelParams::default()
        };
        let cfg = TxopConfig::default();
        let mut rng = substream(2, StreamId::Reception);
        let sweep = oracle_best(&topo, &ch, &table, &cfg, 64, &mut rng).unwrap();
        assert_eq!(sweep.best_k, 1);
    }

    #[test]
    fn oracle_default_curve_picks_single_at_d10() {
        let topo = square_scenario(10.0, 2.0, crate::scenario::default_square_walls(10.0)).unwrap();
        let ch = ChannelParams::default();
        let cfg = TxopConfig::default();
        let mut rng = substream(3, StreamId::Reception);
        let sweep =
            oracle_best(&topo, &ch, &McsTable::builtin_he20(), &cfg, 2000, &mut rng).unwrap();
        assert_eq!(sweep.best_k, 1);
    }
}
