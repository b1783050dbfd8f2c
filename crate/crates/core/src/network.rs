//! Geometric and structural representation of the multi-AP network.
//!
//! A [`Topology`] holds AP and station positions, the association map, and
//! wall segments. Topologies are immutable after construction; mobility is
//! modeled by swapping in a new topology, which keeps the channel layer
//! stateless and lets read-only references be shared across parallel runs.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A point in the 2-D simulation plane, in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Euclidean distance between two positions, in meters.
pub fn distance(a: Position, b: Position) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// A wall segment attenuating any signal path that crosses it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wall {
    pub a: Position,
    pub b: Position,
}

impl Wall {
    pub fn new(a: Position, b: Position) -> Self {
        Self { a, b }
    }
}

/// Opaque AP identifier, unique within a topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ApId(pub u32);

/// Opaque station identifier, unique within a topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StationId(pub u32);

impl fmt::Display for ApId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ap{}", self.0)
    }
}

impl fmt::Display for StationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sta{}", self.0)
    }
}

/// One downlink AP → station link.
///
/// The station must be associated with the AP in the governing topology;
/// this is checked wherever a pair meets a topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub ap: ApId,
    pub station: StationId,
}

impl Pair {
    pub fn new(ap: ApId, station: StationId) -> Self {
        Self { ap, station }
    }
}

/// Structural violations reported by [`Topology::validate`].
#[derive(Clone, Debug, PartialEq, Error)]
pub enum Violation {
    #[error("dangling association: {station} references missing {ap}")]
    DanglingAssociation { station: StationId, ap: ApId },
    #[error("{ap} has no associated stations")]
    ApWithoutStations { ap: ApId },
    #[error("duplicate AP id {ap}")]
    DuplicateAp { ap: ApId },
    #[error("duplicate station id {station}")]
    DuplicateStation { station: StationId },
    #[error("non-finite position on {node}")]
    NonFinitePosition { node: String },
    #[error("degenerate wall segment at ({x}, {y})")]
    DegenerateWall { x: f64, y: f64 },
}

/// Immutable physical scene: APs, stations, associations, and walls.
///
/// Node lists are kept sorted by id so that all iteration orders (and hence
/// all derived random draws) are canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    aps: Vec<(ApId, Position)>,
    stations: Vec<(StationId, Position, ApId)>,
    walls: Vec<Wall>,
}

impl Topology {
    /// Builds a topology, canonicalizing node order by id. Structural
    /// invariants are reported by [`Topology::validate`], not enforced here,
    /// so that callers can collect every violation at once.
    pub fn new(
        mut aps: Vec<(ApId, Position)>,
        mut stations: Vec<(StationId, Position, ApId)>,
        walls: Vec<Wall>,
    ) -> Self {
        aps.sort_by_key(|(id, _)| *id);
        stations.sort_by_key(|(id, _, _)| *id);
        Self {
            aps,
            stations,
            walls,
        }
    }

    /// Checks all structural invariants and returns every violation found.
    /// An empty list means the topology is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for w in self.aps.windows(2) {
            if w[0].0 == w[1].0 {
                violations.push(Violation::DuplicateAp { ap: w[0].0 });
            }
        }
        for w in self.stations.windows(2) {
            if w[0].0 == w[1].0 {
                violations.push(Violation::DuplicateStation { station: w[0].0 });
            }
        }
        for (id, pos) in &self.aps {
            if !pos.is_finite() {
                violations.push(Violation::NonFinitePosition {
                    node: id.to_string(),
                });
            }
        }
        for (id, pos, ap) in &self.stations {
            if !pos.is_finite() {
                violations.push(Violation::NonFinitePosition {
                    node: id.to_string(),
                });
            }
            if self.ap_position(*ap).is_none() {
                violations.push(Violation::DanglingAssociation {
                    station: *id,
                    ap: *ap,
                });
            }
        }
        for (ap, _) in &self.aps {
            if !self.stations.iter().any(|(_, _, owner)| owner == ap) {
                violations.push(Violation::ApWithoutStations { ap: *ap });
            }
        }
        for wall in &self.walls {
            if wall.a == wall.b {
                violations.push(Violation::DegenerateWall {
                    x: wall.a.x,
                    y: wall.a.y,
                });
            }
        }
        violations
    }

    /// APs in canonical (ascending id) order.
    pub fn aps(&self) -> &[(ApId, Position)] {
        &self.aps
    }

    /// Stations in canonical (ascending id) order.
    pub fn stations(&self) -> &[(StationId, Position, ApId)] {
        &self.stations
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn n_aps(&self) -> usize {
        self.aps.len()
    }

    pub fn n_stations(&self) -> usize {
        self.stations.len()
    }

    pub fn ap_position(&self, ap: ApId) -> Option<Position> {
        self.aps.iter().find(|(id, _)| *id == ap).map(|(_, p)| *p)
    }

    pub fn station_position(&self, station: StationId) -> Option<Position> {
        self.stations
            .iter()
            .find(|(id, _, _)| *id == station)
            .map(|(_, p, _)| *p)
    }

    /// Stations associated with `ap`, in canonical order.
    pub fn stations_of(&self, ap: ApId) -> impl Iterator<Item = (StationId, Position)> + '_ {
        self.stations
            .iter()
            .filter(move |(_, _, owner)| *owner == ap)
            .map(|(id, p, _)| (*id, *p))
    }

    /// True if `pair.station` is associated with `pair.ap` here.
    pub fn contains_pair(&self, pair: Pair) -> bool {
        self.stations
            .iter()
            .any(|(id, _, owner)| *id == pair.station && *owner == pair.ap)
    }

    /// True if `other` has the same ids and associations (positions may
    /// differ). Mobility events must preserve structure so that learned
    /// agent state keeps meaning.
    pub fn same_structure(&self, other: &Topology) -> bool {
        self.aps.len() == other.aps.len()
            && self.stations.len() == other.stations.len()
            && self
                .aps
                .iter()
                .zip(other.aps.iter())
                .all(|((a, _), (b, _))| a == b)
            && self
                .stations
                .iter()
                .zip(other.stations.iter())
                .all(|((a, _, ap_a), (b, _, ap_b))| a == b && ap_a == ap_b)
    }
}

/// Errors on transmission-set construction.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum TransmissionSetError {
    #[error("transmission set must be nonempty")]
    Empty,
    #[error("{ap} scheduled twice in one TXOP")]
    DuplicateAp { ap: ApId },
}

/// The set of AP → station pairs transmitting concurrently in one TXOP.
///
/// Construction enforces that the set is nonempty and that each AP appears
/// at most once; pairs are kept sorted by AP id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransmissionSet {
    pairs: Vec<Pair>,
}

impl TransmissionSet {
    pub fn new(pairs: impl IntoIterator<Item = Pair>) -> Result<Self, TransmissionSetError> {
        let mut pairs: Vec<Pair> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(TransmissionSetError::Empty);
        }
        pairs.sort_by_key(|p| p.ap);
        for w in pairs.windows(2) {
            if w[0].ap == w[1].ap {
                return Err(TransmissionSetError::DuplicateAp { ap: w[0].ap });
            }
        }
        Ok(Self { pairs })
    }

    pub fn single(pair: Pair) -> Self {
        Self { pairs: vec![pair] }
    }

    /// Pairs in canonical (ascending AP id) order.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pair: Pair) -> bool {
        self.pairs.contains(&pair)
    }

    /// True if every pair is a valid association in `topo`.
    pub fn valid_for(&self, topo: &Topology) -> bool {
        self.pairs.iter().all(|p| topo.contains_pair(*p))
    }
}

/// Number of wall segments strictly crossed by the open segment `tx`–`rx`.
///
/// Grazing a wall endpoint or running collinear along a wall counts as NOT
/// traversed: the count stays stable under floating-point jitter and walls
/// meeting at a junction are never double-counted. A degenerate `tx == rx`
/// path crosses nothing.
pub fn wall_count(tx: Position, rx: Position, walls: &[Wall]) -> usize {
    walls
        .iter()
        .filter(|w| strictly_intersects(tx, rx, w.a, w.b))
        .count()
}

fn cross(o: Position, a: Position, b: Position) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Proper segment intersection: each segment's endpoints lie strictly on
/// opposite sides of the other segment's supporting line.
fn strictly_intersects(p1: Position, q1: Position, p2: Position, q2: Position) -> bool {
    let d1 = cross(p1, q1, p2);
    let d2 = cross(p1, q1, q2);
    let d3 = cross(p2, q2, p1);
    let d4 = cross(p2, q2, q1);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}
