//! Planar geometry for geographic forwarding: fixed-point positions, greedy
//! neighbor choice, Gabriel-graph planarization and right-hand-rule traversal.
//!
//! All predicates (orientation, in-circle, distance comparison) run on exact
//! integer arithmetic over the fixed-point grid, so degenerate inputs resolve
//! deterministically.

use std::collections::BTreeSet;
use thiserror::Error;

/// Node identifier used across the routing stack and the simulator.
pub type NodeId = u32;

/// A point in the plane, stored as signed fixed-point meters at 0.01 m
/// resolution (centimeters). Serializes into 64 bits on the wire: x then y,
/// big-endian two's complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position {
    /// East coordinate in centimeters.
    pub x: i32,
    /// North coordinate in centimeters.
    pub y: i32,
}

impl Position {
    pub const ZERO: Position = Position { x: 0, y: 0 };

    /// Builds a position from centimeter coordinates.
    pub const fn new(x_cm: i32, y_cm: i32) -> Self {
        Position { x: x_cm, y: y_cm }
    }

    /// Builds a position from meters, rounding to the 0.01 m grid.
    pub fn from_meters(x_m: f64, y_m: f64) -> Self {
        Position {
            x: (x_m * 100.0).round() as i32,
            y: (y_m * 100.0).round() as i32,
        }
    }

    pub fn x_meters(&self) -> f64 {
        f64::from(self.x) / 100.0
    }

    pub fn y_meters(&self) -> f64 {
        f64::from(self.y) / 100.0
    }

    pub fn is_zero(&self) -> bool {
        *self == Position::ZERO
    }

    /// 64-bit wire encoding: x then y, big-endian, two's complement.
    pub fn encode64(&self) -> [u8; 8] {
        let mut out = [0u8; 8];
        out[..4].copy_from_slice(&self.x.to_be_bytes());
        out[4..].copy_from_slice(&self.y.to_be_bytes());
        out
    }

    /// Inverse of [`Position::encode64`].
    pub fn decode64(bytes: [u8; 8]) -> Self {
        Position {
            x: i32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]),
            y: i32::from_be_bytes([bytes[4], bytes[5], bytes[6], bytes[7]]),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeoError {
    #[error("duplicate position {pos:?} shared by nodes {a} and {b}")]
    DuplicatePosition { a: NodeId, b: NodeId, pos: Position },
}

/// Exact squared distance in square centimeters; the comparison key behind
/// every forwarding decision.
pub fn dist2(a: Position, b: Position) -> i128 {
    let dx = i128::from(a.x) - i128::from(b.x);
    let dy = i128::from(a.y) - i128::from(b.y);
    dx * dx + dy * dy
}

/// Euclidean distance in meters. Symmetric, zero iff the points coincide.
pub fn distance(a: Position, b: Position) -> f64 {
    (dist2(a, b) as f64).sqrt() / 100.0
}

/// Radio range in centimeters, quantized like positions.
pub fn range_cm(range_m: f64) -> i128 {
    (range_m * 100.0).round() as i128
}

/// True iff `b` is within radio range of `a` (unit-disk model).
pub fn within_range(a: Position, b: Position, range_m: f64) -> bool {
    let r = range_cm(range_m);
    dist2(a, b) <= r * r
}

/// Cross product of (b - a) x (c - a); sign gives the turn direction.
fn cross(a: Position, b: Position, c: Position) -> i128 {
    let abx = i128::from(b.x) - i128::from(a.x);
    let aby = i128::from(b.y) - i128::from(a.y);
    let acx = i128::from(c.x) - i128::from(a.x);
    let acy = i128::from(c.y) - i128::from(a.y);
    abx * acy - aby * acx
}

fn dot(a: Position, b: Position, c: Position) -> i128 {
    let abx = i128::from(b.x) - i128::from(a.x);
    let aby = i128::from(b.y) - i128::from(a.y);
    let acx = i128::from(c.x) - i128::from(a.x);
    let acy = i128::from(c.y) - i128::from(a.y);
    abx * acx + aby * acy
}

/// Greedy forwarding choice: the neighbor strictly closer to `dest` than
/// `self_pos` and minimal in distance to `dest`. Returns `None` at a local
/// maximum. Ties break toward the smallest node id.
pub fn greedy_next(
    self_pos: Position,
    dest: Position,
    neighbors: &[(NodeId, Position)],
) -> Option<NodeId> {
    let own = dist2(self_pos, dest);
    neighbors
        .iter()
        .filter(|(_, pos)| dist2(*pos, dest) < own)
        .min_by_key(|(id, pos)| (dist2(*pos, dest), *id))
        .map(|(id, _)| *id)
}

/// A planarized connectivity graph: nodes with positions plus an undirected
/// edge set stored as ordered id pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarGraph {
    pub nodes: Vec<(NodeId, Position)>,
    pub edges: BTreeSet<(NodeId, NodeId)>,
}

impl PlanarGraph {
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Neighbors of `id` in the planar graph, with their positions.
    pub fn neighbors_of(&self, id: NodeId) -> Vec<(NodeId, Position)> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                let other = if a == id {
                    b
                } else if b == id {
                    a
                } else {
                    return None;
                };
                self.nodes
                    .iter()
                    .find(|(n, _)| *n == other)
                    .map(|&(n, p)| (n, p))
            })
            .collect()
    }
}

/// True iff `w` lies strictly inside the circle with diameter `uv`
/// (the Gabriel-edge witness test); exact on the fixed-point grid.
fn inside_diameter_circle(u: Position, v: Position, w: Position) -> bool {
    dist2(u, w) + dist2(w, v) < dist2(u, v)
}

/// Gabriel-graph planarization of the unit-disk graph over `nodes` with the
/// given radio range. An edge (u, v) within range survives iff no third node
/// lies strictly inside the circle with diameter uv.
pub fn gabriel_planarize(
    nodes: &[(NodeId, Position)],
    range_m: f64,
) -> Result<PlanarGraph, GeoError> {
    // Degenerate geometry is rejected up front.
    let mut seen = std::collections::BTreeMap::new();
    for &(id, pos) in nodes {
        if let Some(&prev) = seen.get(&(pos.x, pos.y)) {
            return Err(GeoError::DuplicatePosition { a: prev, b: id, pos });
        }
        seen.insert((pos.x, pos.y), id);
    }

    let mut edges = BTreeSet::new();
    for (i, &(u, up)) in nodes.iter().enumerate() {
        for &(v, vp) in nodes.iter().skip(i + 1) {
            if !within_range(up, vp, range_m) {
                continue;
            }
            let blocked = nodes
                .iter()
                .any(|&(w, wp)| w != u && w != v && inside_diameter_circle(up, vp, wp));
            if !blocked {
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    Ok(PlanarGraph {
        nodes: nodes.to_vec(),
        edges,
    })
}

/// Distributed Gabriel filter over a node's own neighbor set: keeps neighbor
/// v iff no other known neighbor sits strictly inside the circle with
/// diameter (self, v). For unit-disk inputs with complete neighbor tables
/// this equals the edges of the global Gabriel graph at `self_pos`, because
/// any witness inside that circle is within range of both endpoints.
pub fn gabriel_neighbors(
    self_pos: Position,
    neighbors: &[(NodeId, Position)],
) -> Vec<(NodeId, Position)> {
    neighbors
        .iter()
        .filter(|&&(v, vp)| {
            !neighbors
                .iter()
                .any(|&(w, wp)| w != v && inside_diameter_circle(self_pos, vp, wp))
        })
        .copied()
        .collect()
}

/// Angular position of the vector `self_pos -> to`, measured counterclockwise
/// from the reference ray `self_pos -> prev`, as an exactly comparable key.
///
/// Sector 0 covers (0, pi), 1 is exactly pi, 2 is (pi, 2*pi) and 3 is the
/// reference direction itself (a full turn: last candidate under the
/// right-hand rule). Within a half-plane sector the secondary comparison
/// orders by the pairwise cross product.
fn ccw_sector(prev: Position, self_pos: Position, to: Position) -> u8 {
    let c = cross(self_pos, prev, to);
    if c > 0 {
        0
    } else if c == 0 {
        if dot(self_pos, prev, to) > 0 {
            3 // same direction as the reference ray
        } else {
            1 // opposite direction
        }
    } else {
        2
    }
}

/// Right-hand-rule choice: the first neighbor counterclockwise from the ray
/// `self_pos -> prev`. For the first perimeter hop, `prev` is the packet
/// destination. Returns `None` only for an empty neighbor list.
pub fn right_hand_next(
    prev: Position,
    self_pos: Position,
    planar_neighbors: &[(NodeId, Position)],
) -> Option<NodeId> {
    planar_neighbors
        .iter()
        .min_by(|&&(aid, ap), &&(bid, bp)| {
            let sa = ccw_sector(prev, self_pos, ap);
            let sb = ccw_sector(prev, self_pos, bp);
            sa.cmp(&sb)
                .then_with(|| {
                    if sa == sb && (sa == 0 || sa == 2) {
                        // Same open half-plane: smaller CCW angle first.
                        cross(self_pos, ap, bp).cmp(&0).reverse()
                    } else {
                        std::cmp::Ordering::Equal
                    }
                })
                .then_with(|| dist2(self_pos, ap).cmp(&dist2(self_pos, bp)))
                .then_with(|| aid.cmp(&bid))
        })
        .map(|&(id, _)| id)
}

fn on_segment(a: Position, b: Position, p: Position) -> bool {
    cross(a, b, p) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test with exact orientation predicates.
/// Shared endpoints and collinear overlap count as intersections.
pub fn segments_intersect(a1: Position, a2: Position, b1: Position, b2: Position) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);

    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)) {
        return true;
    }
    (d1 == 0 && on_segment(b1, b2, a1))
        || (d2 == 0 && on_segment(b1, b2, a2))
        || (d3 == 0 && on_segment(a1, a2, b1))
        || (d4 == 0 && on_segment(a1, a2, b2))
}

/// Strict crossing used by the perimeter face-change rule: the segments
/// intersect at a single point interior to both (endpoint touches and
/// collinear overlaps do not count).
pub fn segments_cross_properly(a1: Position, a2: Position, b1: Position, b2: Position) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))
}
