//! Gabriel-graph planarization: start from a unit-disk graph, drop every
//! edge whose diameter circle contains a witness, and verify by brute
//! force that nothing crosses.
//!
//! ```bash
//! cargo run -p sgpsr --example planarization
//! ```

use rand::{Rng, SeedableRng};
use sgpsr::geo::{gabriel_planarize, segments_intersect, NodeId, Position};
use sgpsr::oracle::unit_disk_edges;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let nodes: Vec<(NodeId, Position)> = (0..30)
        .map(|id| {
            (
                id,
                Position::from_meters(rng.gen_range(0.0..200.0), rng.gen_range(0.0..200.0)),
            )
        })
        .collect();
    let range = 70.0;

    let udg = unit_disk_edges(&nodes, range);
    let gg = gabriel_planarize(&nodes, range).expect("distinct positions");
    println!(
        "unit-disk graph: {} edges; Gabriel subgraph: {} edges",
        udg.len(),
        gg.edges.len()
    );

    let pos_of = |id: NodeId| nodes.iter().find(|(n, _)| *n == id).unwrap().1;
    let edges: Vec<_> = gg.edges.iter().copied().collect();
    let mut crossings = 0;
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in edges.iter().skip(i + 1) {
            if a != c && a != d && b != c && b != d
                && segments_intersect(pos_of(a), pos_of(b), pos_of(c), pos_of(d))
            {
                crossings += 1;
            }
        }
    }
    println!("crossing pairs in the planarized graph: {crossings}");
    assert_eq!(crossings, 0);

    println!("every Gabriel edge is a unit-disk edge: {}", gg.edges.iter().all(|e| udg.contains(e)));
}
