//! The secured forwarding decision: verify the incoming signature with the
//! upstream neighbor's pairwise key, choose the greedy or perimeter next
//! hop, and re-sign with the chosen downstream neighbor's key.
//!
//! Greedy mode forwards to the neighbor closest to the destination as long
//! as that makes strict progress. At a local maximum the packet enters
//! perimeter mode: it records the entry point Lp and walks planarized faces
//! with the right-hand rule, switching faces where the walk would cross the
//! Lp-to-destination segment, until some node closer to the destination
//! than Lp resumes greedy forwarding. The first edge of the current face
//! rides in the packet; traversing it a second time in the same direction
//! means the destination is unreachable and the packet is dropped.

use crate::auth;
use crate::geo::{
    dist2, gabriel_neighbors, greedy_next, right_hand_next, segments_cross_properly,
    within_range, NodeId, Position,
};
use crate::neighbors::NeighborTable;
use crate::wire::{Command, GpsrPacket};

/// Why a packet was discarded instead of forwarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropReason {
    /// Signature verification failed (or no key exists for the upstream hop).
    AuthFailure,
    /// Perimeter traversal exhausted: the destination is unreachable, or the
    /// next hop has no established key yet.
    NoRoute,
    /// The node has no neighbors at all.
    NoNeighbors,
    /// The simulator's hop budget ran out.
    TtlExpired,
}

impl DropReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            DropReason::AuthFailure => "auth-failure",
            DropReason::NoRoute => "no-route",
            DropReason::NoNeighbors => "no-neighbors",
            DropReason::TtlExpired => "ttl-expired",
        }
    }
}

/// Outcome of one forwarding decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForwardAction {
    /// The packet reached its destination here.
    Deliver,
    /// Send `packet` (command updated, re-signed as needed) to `next_hop`.
    Forward {
        next_hop: NodeId,
        packet: GpsrPacket,
    },
    Drop(DropReason),
}

/// Immutable node state a forwarding decision runs against.
pub struct ForwardContext<'a> {
    pub self_id: NodeId,
    pub self_pos: Position,
    pub table: &'a NeighborTable,
    /// The node the packet arrived from; `None` when we originate it.
    pub upstream: Option<NodeId>,
    pub security_on: bool,
    pub radio_range: f64,
}

/// Decides what to do with a data packet (greedy or perimeter command).
pub fn forward_decision(ctx: &ForwardContext, pkt: &GpsrPacket) -> ForwardAction {
    debug_assert!(pkt.command.is_data(), "beacons are not forwarded");

    // Hop-by-hop verification with the upstream neighbor's key.
    if ctx.security_on {
        if let Some(upstream) = ctx.upstream {
            let Some(key) = ctx.table.key_for(upstream) else {
                return ForwardAction::Drop(DropReason::AuthFailure);
            };
            if !auth::verify_packet(&key, pkt) {
                return ForwardAction::Drop(DropReason::AuthFailure);
            }
        }
    }

    let neighbors = ctx.table.positions();
    let greedy = greedy_next(ctx.self_pos, pkt.dest_pos, &neighbors);

    // Delivered when no neighbor is closer to the destination point and the
    // point itself is within radio range: packets are addressed to
    // positions, and the locally closest node in reach is the recipient.
    if greedy.is_none() && within_range(ctx.self_pos, pkt.dest_pos, ctx.radio_range) {
        return ForwardAction::Deliver;
    }

    match pkt.command {
        Command::GreedyData => match greedy {
            Some(hop) => {
                let mut out = pkt.clone();
                out.command = Command::GreedyData;
                finish(ctx, out, hop)
            }
            None => {
                // Local maximum: recover around the void.
                let planar = gabriel_neighbors(ctx.self_pos, &neighbors);
                match enter_perimeter(pkt, ctx.self_pos, &planar) {
                    Ok((out, hop)) => finish(ctx, out, hop),
                    Err(reason) => ForwardAction::Drop(reason),
                }
            }
        },
        Command::PerimeterData => {
            if let Some(resumed) = maybe_resume_greedy(pkt, ctx.self_pos) {
                if let Some(hop) = greedy {
                    return finish(ctx, resumed, hop);
                }
                // Closer than Lp yet still a local maximum: begin a fresh
                // perimeter walk from here.
                let planar = gabriel_neighbors(ctx.self_pos, &neighbors);
                return match enter_perimeter(&resumed, ctx.self_pos, &planar) {
                    Ok((out, hop)) => finish(ctx, out, hop),
                    Err(reason) => ForwardAction::Drop(reason),
                };
            }
            let planar = gabriel_neighbors(ctx.self_pos, &neighbors);
            match continue_perimeter(ctx, pkt, &planar) {
                Ok((out, hop)) => finish(ctx, out, hop),
                Err(reason) => ForwardAction::Drop(reason),
            }
        }
        _ => unreachable!("beacon commands are handled by the neighbors module"),
    }
}

/// Re-signs the outgoing packet with the next hop's pairwise key when
/// security is on; without a key for that hop the packet cannot travel.
fn finish(ctx: &ForwardContext, packet: GpsrPacket, next_hop: NodeId) -> ForwardAction {
    if !ctx.security_on {
        return ForwardAction::Forward { next_hop, packet };
    }
    let Some(key) = ctx.table.key_for(next_hop) else {
        return ForwardAction::Drop(DropReason::NoRoute);
    };
    let packet = auth::sign_packet(&key, &packet).expect("valid packet stays encodable");
    ForwardAction::Forward { next_hop, packet }
}

/// Switches a packet to perimeter mode at a local maximum: Lp becomes this
/// node's position, the first hop follows the right-hand rule relative to
/// the destination ray, and e0 records that first edge.
pub fn enter_perimeter(
    pkt: &GpsrPacket,
    self_pos: Position,
    planar_neighbors: &[(NodeId, Position)],
) -> Result<(GpsrPacket, NodeId), DropReason> {
    let first = right_hand_next(pkt.dest_pos, self_pos, planar_neighbors)
        .ok_or(DropReason::NoNeighbors)?;
    let first_pos = position_of(planar_neighbors, first);
    let mut out = pkt.clone();
    out.command = Command::PerimeterData;
    out.perimeter_pos = self_pos;
    out.edge = (self_pos, first_pos);
    Ok((out, first))
}

/// Resumes greedy forwarding once this node is strictly closer to the
/// destination than the point where perimeter mode began.
pub fn maybe_resume_greedy(pkt: &GpsrPacket, self_pos: Position) -> Option<GpsrPacket> {
    debug_assert_eq!(pkt.command, Command::PerimeterData);
    if dist2(self_pos, pkt.dest_pos) < dist2(pkt.perimeter_pos, pkt.dest_pos) {
        let mut out = pkt.clone();
        out.command = Command::GreedyData;
        out.perimeter_pos = Position::ZERO;
        out.edge = (Position::ZERO, Position::ZERO);
        Some(out)
    } else {
        None
    }
}

/// One step of the face walk at a relay that stays in perimeter mode.
fn continue_perimeter(
    ctx: &ForwardContext,
    pkt: &GpsrPacket,
    planar_neighbors: &[(NodeId, Position)],
) -> Result<(GpsrPacket, NodeId), DropReason> {
    if planar_neighbors.is_empty() {
        return Err(DropReason::NoNeighbors);
    }
    // The walk continues counterclockwise from the edge we arrived on. If
    // the upstream node is unknown (stale table), restart the walk as if
    // entering here.
    let prev_pos = ctx
        .upstream
        .and_then(|u| ctx.table.get(u))
        .map(|e| e.pos)
        .unwrap_or(pkt.dest_pos);

    let mut hop =
        right_hand_next(prev_pos, ctx.self_pos, planar_neighbors).ok_or(DropReason::NoNeighbors)?;
    let mut face_changed = false;
    // Pivot past every candidate edge that would cross the Lp->destination
    // segment: each crossing moves the walk to the adjacent face.
    for _ in 0..planar_neighbors.len() {
        let hop_pos = position_of(planar_neighbors, hop);
        if !segments_cross_properly(ctx.self_pos, hop_pos, pkt.perimeter_pos, pkt.dest_pos) {
            break;
        }
        face_changed = true;
        hop = right_hand_next(hop_pos, ctx.self_pos, planar_neighbors)
            .ok_or(DropReason::NoNeighbors)?;
    }

    let hop_pos = position_of(planar_neighbors, hop);
    if !face_changed && (ctx.self_pos, hop_pos) == pkt.edge {
        // About to retraverse the first edge of this face in the same
        // direction: the walk has gone all the way around.
        return Err(DropReason::NoRoute);
    }

    let mut out = pkt.clone();
    if face_changed {
        out.edge = (ctx.self_pos, hop_pos);
    }
    Ok((out, hop))
}

fn position_of(neighbors: &[(NodeId, Position)], id: NodeId) -> Position {
    neighbors
        .iter()
        .find(|(n, _)| *n == id)
        .map(|(_, p)| *p)
        .expect("id chosen from this slice")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::SigningKey;
    use crate::neighbors::NeighborTable;
    use crate::wire::GpsrPacket;

    fn table_of(entries: &[(NodeId, Position, Option<SigningKey>)]) -> NeighborTable {
        let mut table = NeighborTable::new(1.0, 4.5);
        for &(id, pos, key) in entries {
            table.insert(crate::neighbors::NeighborEntry {
                id,
                pos,
                last_heard: 0.0,
                key,
                peer_public: None,
            });
        }
        table
    }

    fn p(x: f64, y: f64) -> Position {
        Position::from_meters(x, y)
    }

    fn greedy_packet(dest: Position) -> GpsrPacket {
        let mut pkt = GpsrPacket::new(Command::GreedyData);
        pkt.source_pos = p(0.0, 0.0);
        pkt.dest_pos = dest;
        pkt.data = b"payload".to_vec();
        pkt
    }

    #[test]
    fn forwards_greedy_to_closest_neighbor() {
        let table = table_of(&[
            (1, p(40.0, 0.0), None),
            (2, p(30.0, 30.0), None),
        ]);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos: p(0.0, 0.0),
            table: &table,
            upstream: None,
            security_on: false,
            radio_range: 50.0,
        };
        let pkt = greedy_packet(p(100.0, 0.0));
        match forward_decision(&ctx, &pkt) {
            ForwardAction::Forward { next_hop, packet } => {
                assert_eq!(next_hop, 1);
                assert_eq!(packet.command, Command::GreedyData);
                assert!(packet.perimeter_pos.is_zero());
            }
            other => panic!("expected forward, got {other:?}"),
        }
    }

    #[test]
    fn delivers_at_locally_closest_node_within_range() {
        // Destination position is 5 m away; all neighbors are farther from
        // it than self.
        let table = table_of(&[(1, p(-40.0, 0.0), None)]);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos: p(0.0, 0.0),
            table: &table,
            upstream: None,
            security_on: false,
            radio_range: 50.0,
        };
        let pkt = greedy_packet(p(5.0, 0.0));
        assert_eq!(forward_decision(&ctx, &pkt), ForwardAction::Deliver);
    }

    #[test]
    fn local_maximum_enters_perimeter_with_lp_set() {
        // Dest far east; the only neighbors are west: local maximum.
        let table = table_of(&[(1, p(-30.0, 10.0), None), (2, p(-30.0, -10.0), None)]);
        let self_pos = p(0.0, 0.0);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos,
            table: &table,
            upstream: None,
            security_on: false,
            radio_range: 50.0,
        };
        let pkt = greedy_packet(p(500.0, 0.0));
        match forward_decision(&ctx, &pkt) {
            ForwardAction::Forward { next_hop, packet } => {
                assert_eq!(packet.command, Command::PerimeterData);
                assert_eq!(packet.perimeter_pos, self_pos, "Lp is the entry point");
                assert_eq!(packet.edge.0, self_pos, "e0 starts at the entry point");
                // Right-hand rule from the destination ray picks the
                // counterclockwise-first neighbor, which is the northern one.
                assert_eq!(next_hop, 1);
                assert_eq!(packet.edge.1, p(-30.0, 10.0));
            }
            other => panic!("expected perimeter entry, got {other:?}"),
        }
    }

    #[test]
    fn perimeter_without_neighbors_drops() {
        let table = table_of(&[]);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos: p(0.0, 0.0),
            table: &table,
            upstream: None,
            security_on: false,
            radio_range: 50.0,
        };
        let pkt = greedy_packet(p(500.0, 0.0));
        assert_eq!(
            forward_decision(&ctx, &pkt),
            ForwardAction::Drop(DropReason::NoNeighbors)
        );
    }

    #[test]
    fn resume_rule_is_strict() {
        let mut pkt = GpsrPacket::new(Command::PerimeterData);
        pkt.dest_pos = p(100.0, 0.0);
        pkt.perimeter_pos = p(0.0, 0.0);
        pkt.edge = (p(0.0, 0.0), p(10.0, 10.0));

        // Same distance as Lp: stay in perimeter mode.
        assert!(maybe_resume_greedy(&pkt, p(0.0, 0.0)).is_none());
        // Strictly closer: resume, wiping the perimeter state.
        let resumed = maybe_resume_greedy(&pkt, p(50.0, 0.0)).expect("closer than Lp");
        assert_eq!(resumed.command, Command::GreedyData);
        assert!(resumed.perimeter_pos.is_zero());
        assert!(resumed.edge.0.is_zero() && resumed.edge.1.is_zero());
        // The destination itself trivially resumes.
        assert!(maybe_resume_greedy(&pkt, p(100.0, 0.0)).is_some());
    }

    #[test]
    fn security_verifies_upstream_and_resigns_downstream() {
        let up_key = SigningKey(*b"upstream-key-16b");
        let down_key = SigningKey(*b"downstrm-key-16b");
        let table = table_of(&[
            (1, p(-30.0, 0.0), Some(up_key)),
            (2, p(40.0, 0.0), Some(down_key)),
        ]);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos: p(0.0, 0.0),
            table: &table,
            upstream: Some(1),
            security_on: true,
            radio_range: 50.0,
        };
        let pkt = greedy_packet(p(100.0, 0.0));
        let signed = crate::auth::sign_packet(&up_key, &pkt).unwrap();

        match forward_decision(&ctx, &signed) {
            ForwardAction::Forward { next_hop, packet } => {
                assert_eq!(next_hop, 2);
                assert!(
                    crate::auth::verify_packet(&down_key, &packet),
                    "outgoing packet must carry the downstream key's tag"
                );
                assert!(!crate::auth::verify_packet(&up_key, &packet));
            }
            other => panic!("expected forward, got {other:?}"),
        }

        // A single flipped data bit fails verification.
        let mut tampered = signed.clone();
        tampered.data[3] ^= 0x01;
        assert_eq!(
            forward_decision(&ctx, &tampered),
            ForwardAction::Drop(DropReason::AuthFailure)
        );

        // Wrong upstream key fails too.
        let wrong = crate::auth::sign_packet(&down_key, &pkt).unwrap();
        assert_eq!(
            forward_decision(&ctx, &wrong),
            ForwardAction::Drop(DropReason::AuthFailure)
        );
    }

    #[test]
    fn missing_downstream_key_drops_no_route() {
        let up_key = SigningKey(*b"upstream-key-16b");
        let table = table_of(&[
            (1, p(-30.0, 0.0), Some(up_key)),
            (2, p(40.0, 0.0), None), // discovered but keyless
        ]);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos: p(0.0, 0.0),
            table: &table,
            upstream: Some(1),
            security_on: true,
            radio_range: 50.0,
        };
        let signed = crate::auth::sign_packet(&up_key, &greedy_packet(p(100.0, 0.0))).unwrap();
        assert_eq!(
            forward_decision(&ctx, &signed),
            ForwardAction::Drop(DropReason::NoRoute)
        );
    }

    #[test]
    fn missing_upstream_key_drops_auth_failure() {
        let table = table_of(&[(1, p(-30.0, 0.0), None), (2, p(40.0, 0.0), None)]);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos: p(0.0, 0.0),
            table: &table,
            upstream: Some(1),
            security_on: true,
            radio_range: 50.0,
        };
        assert_eq!(
            forward_decision(&ctx, &greedy_packet(p(100.0, 0.0))),
            ForwardAction::Drop(DropReason::AuthFailure)
        );
    }

    #[test]
    fn void_fixture_walks_the_rim_and_resumes_greedy() {
        // Seven nodes around a void; radio range 80 m. Greedy fails at node
        // 1, the walk follows the north rim 1->2->3->4, node 4 is closer to
        // the destination than the entry point and resumes greedy, then
        // 4->5->6 delivers.
        let fixture: Vec<(NodeId, Position)> = vec![
            (0, p(0.0, 0.0)),
            (1, p(70.0, 0.0)),
            (2, p(60.0, 70.0)),
            (3, p(130.0, 90.0)),
            (4, p(200.0, 70.0)),
            (5, p(240.0, 30.0)),
            (6, p(300.0, 0.0)),
        ];
        let range = 80.0;
        let graph = crate::geo::gabriel_planarize(&fixture, range).unwrap();
        let pos_of = |id: NodeId| fixture.iter().find(|(n, _)| *n == id).unwrap().1;
        let table_for = |id: NodeId| {
            let mut table = NeighborTable::new(1.0, 4.5);
            for &(other, opos) in &fixture {
                if other != id && crate::geo::within_range(pos_of(id), opos, range) {
                    table.insert(crate::neighbors::NeighborEntry {
                        id: other,
                        pos: opos,
                        last_heard: 0.0,
                        key: None,
                        peer_public: None,
                    });
                }
            }
            table
        };
        assert!(graph.has_edge(0, 1) && graph.has_edge(1, 2) && graph.has_edge(5, 6));

        let mut pkt = greedy_packet(pos_of(6));
        pkt.source_pos = pos_of(0);
        let mut at: NodeId = 0;
        let mut upstream = None;
        let mut visited = vec![0];
        for _ in 0..20 {
            let table = table_for(at);
            let ctx = ForwardContext {
                self_id: at,
                self_pos: pos_of(at),
                table: &table,
                upstream,
                security_on: false,
                radio_range: range,
            };
            match forward_decision(&ctx, &pkt) {
                ForwardAction::Forward { next_hop, packet } => {
                    upstream = Some(at);
                    at = next_hop;
                    visited.push(next_hop);
                    pkt = packet;
                }
                ForwardAction::Deliver => {
                    visited.push(u32::MAX); // sentinel for delivery
                    break;
                }
                ForwardAction::Drop(r) => panic!("unexpected drop: {r:?} at {at}"),
            }
            // The packet entered perimeter mode at node 1.
            if visited.len() == 3 {
                assert_eq!(pkt.command, Command::PerimeterData);
                assert_eq!(pkt.perimeter_pos, pos_of(1), "Lp is the entry node");
                assert_eq!(pkt.edge.0, pos_of(1), "e0 starts at the entry node");
            }
        }
        assert_eq!(visited, vec![0, 1, 2, 3, 4, 5, 6, u32::MAX]);
    }

    #[test]
    fn retraversing_e0_in_same_direction_drops_no_route() {
        // Two isolated nodes: the packet circles their single edge.
        let self_pos = p(0.0, 0.0);
        let other = p(10.0, 0.0);
        let table = table_of(&[(1, other, None)]);
        let ctx = ForwardContext {
            self_id: 0,
            self_pos,
            table: &table,
            upstream: Some(1),
            security_on: false,
            radio_range: 50.0,
        };
        let mut pkt = GpsrPacket::new(Command::PerimeterData);
        pkt.dest_pos = p(500.0, 0.0); // unreachable
        pkt.perimeter_pos = self_pos;
        pkt.edge = (self_pos, other);
        assert_eq!(
            forward_decision(&ctx, &pkt),
            ForwardAction::Drop(DropReason::NoRoute)
        );
    }
}
