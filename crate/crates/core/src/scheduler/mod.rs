//! C-SR group selection policies.
//!
//! The hierarchical scheduler is the centerpiece: for each TXOP a uniformly
//! drawn sharing pair keys a first-level agent that picks which other APs
//! join the TXOP, then one second-level agent per joining AP picks its
//! recipient station. The flat scheduler collapses both levels into a single
//! agent whose arms enumerate every complete companion-pair set, and the
//! single/static baselines need no learning at all.
//!
//! Schedulers key their agents by node ids and association structure, never
//! by positions, so a mobility event (a new topology with the same ids)
//! leaves all learned state meaningful.

mod baselines;
mod flat;
mod hierarchical;

pub use baselines::{oracle_best, single_tx, static_strategy, OracleSweep};
pub use flat::{FlatContext, FlatScheduler};
pub use hierarchical::{DecisionContext, HierarchicalScheduler};

use crate::bandit::BanditError;
use crate::network::{ApId, Pair, StationId, Topology};
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SchedulerError {
    #[error("pair {ap}->{station} is not part of the network structure", ap = .0.ap, station = .0.station)]
    InvalidPair(Pair),
    #[error("decision context is stale or missing: expected the context of the immediately preceding select call")]
    StaleContext,
    #[error("topology is not a 4-AP square scenario: {0}")]
    NotSquare(String),
    #[error("static strategy needs 1 <= k <= {n_aps}, got {k}")]
    InvalidK { k: usize, n_aps: usize },
    #[error(transparent)]
    Bandit(#[from] BanditError),
    #[error("network structure changed mid-run; mobility must preserve ids and associations")]
    StructureMismatch,
}

/// Association structure of a topology: AP ids in canonical order and each
/// AP's station list. Positions are deliberately absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkStructure {
    aps: Vec<ApId>,
    stations: BTreeMap<ApId, Vec<StationId>>,
}

impl NetworkStructure {
    pub fn of(topo: &Topology) -> Self {
        let aps: Vec<ApId> = topo.aps().iter().map(|(id, _)| *id).collect();
        let mut stations = BTreeMap::new();
        for ap in &aps {
            stations.insert(*ap, topo.stations_of(*ap).map(|(id, _)| id).collect());
        }
        Self { aps, stations }
    }

    pub fn n_aps(&self) -> usize {
        self.aps.len()
    }

    pub fn aps(&self) -> &[ApId] {
        &self.aps
    }

    pub fn ap_index(&self, ap: ApId) -> Option<usize> {
        self.aps.binary_search(&ap).ok()
    }

    pub fn stations_of(&self, ap: ApId) -> &[StationId] {
        self.stations.get(&ap).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total_stations(&self) -> usize {
        self.stations.values().map(Vec::len).sum()
    }

    pub fn contains_pair(&self, pair: Pair) -> bool {
        self.stations_of(pair.ap).contains(&pair.station)
    }
}

/// A subset of the topology's APs, encoded as a bitmask over the canonical
/// AP ordering. Bit `i` covers the i-th AP id in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApSet(u64);

impl ApSet {
    pub const EMPTY: ApSet = ApSet(0);

    pub fn from_aps(structure: &NetworkStructure, aps: impl IntoIterator<Item = ApId>) -> Self {
        let mut mask = 0u64;
        for ap in aps {
            let idx = structure.ap_index(ap).expect("AP in structure");
            mask |= 1 << idx;
        }
        ApSet(mask)
    }

    pub fn contains(&self, structure: &NetworkStructure, ap: ApId) -> bool {
        structure
            .ap_index(ap)
            .map(|idx| self.0 & (1 << idx) != 0)
            .unwrap_or(false)
    }

    pub fn insert(&mut self, structure: &NetworkStructure, ap: ApId) {
        let idx = structure.ap_index(ap).expect("AP in structure");
        self.0 |= 1 << idx;
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Member AP ids in canonical order.
    pub fn iter<'a>(&'a self, structure: &'a NetworkStructure) -> impl Iterator<Item = ApId> + 'a {
        structure
            .aps
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.0 & (1 << i) != 0)
            .map(|(_, ap)| *ap)
    }

    pub fn bits(&self) -> u64 {
        self.0
    }
}

/// Key of one second-level agent: the AP choosing its recipient, within the
/// full set of concurrently transmitting APs (sharing AP included).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SecondLevelKey {
    pub ap: ApId,
    pub group: ApSet,
}

impl SecondLevelKey {
    /// `ap` must be a member of `group`.
    pub fn new(structure: &NetworkStructure, ap: ApId, group: ApSet) -> Self {
        debug_assert!(group.contains(structure, ap));
        Self { ap, group }
    }
}

/// First-level agents are keyed by the sharing pair itself.
pub type FirstLevelKey = Pair;

/// Decodes a first-level arm (a bitmask over the APs other than `sharing`)
/// into companion AP ids in canonical order.
pub(crate) fn decode_companion_arm(
    structure: &NetworkStructure,
    sharing: ApId,
    arm: usize,
) -> Vec<ApId> {
    let mut companions = Vec::new();
    let mut bit = 0;
    for ap in structure.aps() {
        if *ap == sharing {
            continue;
        }
        if arm & (1 << bit) != 0 {
            companions.push(*ap);
        }
        bit += 1;
    }
    companions
}

/// Uniformly draws the sharing pair: first the AP over the full AP set, then
/// one of that AP's stations.
pub fn draw_p0<R: Rng>(topo: &Topology, rng: &mut R) -> Pair {
    let aps = topo.aps();
    debug_assert!(!aps.is_empty());
    let (ap, _) = aps[rng.random_range(0..aps.len())];
    let stations: Vec<StationId> = topo.stations_of(ap).map(|(id, _)| id).collect();
    debug_assert!(!stations.is_empty());
    let station = stations[rng.random_range(0..stations.len())];
    Pair::new(ap, station)
}
