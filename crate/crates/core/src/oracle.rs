//! Independent reference checkers used to validate routing results: plain
//! breadth-first search over the unit-disk graph and related helpers. None
//! of this code shares logic with the forwarding implementation.

use crate::geo::{distance, NodeId, Position};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// All unit-disk edges for the given radio range.
pub fn unit_disk_edges(nodes: &[(NodeId, Position)], range_m: f64) -> BTreeSet<(NodeId, NodeId)> {
    let mut edges = BTreeSet::new();
    for (i, &(u, up)) in nodes.iter().enumerate() {
        for &(v, vp) in nodes.iter().skip(i + 1) {
            if distance(up, vp) <= range_m + 1e-9 {
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    edges
}

/// BFS reachability: true iff `from` can reach `to` over unit-disk hops.
pub fn bfs_connected(
    nodes: &[(NodeId, Position)],
    range_m: f64,
    from: NodeId,
    to: NodeId,
) -> bool {
    if from == to {
        return true;
    }
    let edges = unit_disk_edges(nodes, range_m);
    let mut adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(a, b) in &edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in adj.get(&u).into_iter().flatten() {
            if v == to {
                return true;
            }
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    false
}

/// True iff the whole unit-disk graph is one component.
pub fn fully_connected(nodes: &[(NodeId, Position)], range_m: f64) -> bool {
    nodes
        .first()
        .map(|&(first, _)| {
            nodes
                .iter()
                .all(|&(id, _)| bfs_connected(nodes, range_m, first, id))
        })
        .unwrap_or(true)
}

/// Nodes that disconnect some pair when removed (cut vertices), found by
/// brute force: remove each node in turn and compare component counts.
pub fn cut_vertices(nodes: &[(NodeId, Position)], range_m: f64) -> Vec<NodeId> {
    let mut cuts = Vec::new();
    for &(candidate, _) in nodes {
        let rest: Vec<(NodeId, Position)> = nodes
            .iter()
            .copied()
            .filter(|(id, _)| *id != candidate)
            .collect();
        if rest.len() >= 2 && fully_connected(nodes, range_m) && !fully_connected(&rest, range_m) {
            cuts.push(candidate);
        }
    }
    cuts
}
