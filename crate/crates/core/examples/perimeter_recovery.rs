//! Watch a packet route around a void: greedy fails at the rim, perimeter
//! mode walks the planarized face with the right-hand rule, and greedy
//! resumes on the far side.
//!
//! ```bash
//! cargo run -p sgpsr --example perimeter_recovery
//! ```

use sgpsr::geo::{gabriel_planarize, NodeId, Position};
use sgpsr::neighbors::{NeighborEntry, NeighborTable};
use sgpsr::routing::{forward_decision, ForwardAction, ForwardContext};
use sgpsr::wire::{Command, GpsrPacket};

fn main() {
    // Seven nodes around a void; the destination is east, the only path
    // arcs over the north rim.
    let nodes: Vec<(NodeId, Position)> = vec![
        (0, Position::from_meters(0.0, 0.0)),
        (1, Position::from_meters(70.0, 0.0)),
        (2, Position::from_meters(60.0, 70.0)),
        (3, Position::from_meters(130.0, 90.0)),
        (4, Position::from_meters(200.0, 70.0)),
        (5, Position::from_meters(240.0, 30.0)),
        (6, Position::from_meters(300.0, 0.0)),
    ];
    let range = 80.0;
    let pos_of = |id: NodeId| nodes.iter().find(|(n, _)| *n == id).unwrap().1;

    let planar = gabriel_planarize(&nodes, range).unwrap();
    println!("planarized edges: {:?}", planar.edges);

    let table_for = |id: NodeId| {
        let mut table = NeighborTable::new(1.0, 4.5);
        for &(other, opos) in &nodes {
            if other != id && sgpsr::geo::within_range(pos_of(id), opos, range) {
                table.insert(NeighborEntry {
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

    let mut pkt = GpsrPacket::new(Command::GreedyData);
    pkt.source_pos = pos_of(0);
    pkt.dest_pos = pos_of(6);
    pkt.data = b"around the void".to_vec();

    let mut at: NodeId = 0;
    let mut upstream = None;
    loop {
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
                let mode = match packet.command {
                    Command::PerimeterData => format!(
                        "perimeter (Lp = ({:.0}, {:.0}))",
                        packet.perimeter_pos.x_meters(),
                        packet.perimeter_pos.y_meters()
                    ),
                    _ => "greedy".into(),
                };
                println!("node {at} -> node {next_hop}  [{mode}]");
                upstream = Some(at);
                at = next_hop;
                pkt = packet;
            }
            ForwardAction::Deliver => {
                println!("node {at}: delivered");
                break;
            }
            ForwardAction::Drop(reason) => {
                println!("node {at}: dropped ({reason:?})");
                break;
            }
        }
    }
}
