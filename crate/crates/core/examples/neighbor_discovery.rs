//! Beacon-driven discovery between three nodes, by hand: broadcast a
//! request, answer with responses, and end with every pair sharing a key.
//!
//! ```bash
//! cargo run -p sgpsr --example neighbor_discovery
//! ```

use rand::SeedableRng;
use sgpsr::crypto::{dh_generate, DhParams};
use sgpsr::geo::Position;
use sgpsr::neighbors::{handle_beacon, make_beacon_request, NeighborTable};

fn main() {
    let params = DhParams::named("test256").unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);

    let positions = [
        Position::from_meters(0.0, 0.0),
        Position::from_meters(80.0, 0.0),
        Position::from_meters(40.0, 60.0),
    ];
    let keypairs: Vec<_> = (0..3).map(|_| dh_generate(&params, &mut rng)).collect();
    let mut tables: Vec<_> = (0..3).map(|_| NeighborTable::new(1.0, 4.5)).collect();

    // Each node broadcasts one discovery beacon; every hearer answers with
    // a response addressed back to the requester.
    for sender in 0..3usize {
        let request = make_beacon_request(positions[sender], Some(&keypairs[sender])).unwrap();
        println!(
            "node {sender} broadcasts a beacon request ({} bytes)",
            request.packet_length()
        );
        for hearer in 0..3usize {
            if hearer == sender {
                continue;
            }
            let response = handle_beacon(
                &mut tables[hearer],
                Some((&params, &keypairs[hearer])),
                &request,
                sender as u32,
                positions[hearer],
                0.0,
            );
            if let Some(response) = response {
                // The response is broadcast too; everyone hears it, only
                // the requester completes an exchange with it.
                for third in 0..3usize {
                    if third == hearer {
                        continue;
                    }
                    handle_beacon(
                        &mut tables[third],
                        Some((&params, &keypairs[third])),
                        &response,
                        hearer as u32,
                        positions[third],
                        0.0,
                    );
                }
            }
        }
    }

    for (id, table) in tables.iter().enumerate() {
        println!("node {id} neighbor table:");
        for entry in table.iter() {
            println!(
                "  neighbor {} at ({:.1}, {:.1}) key = {}",
                entry.id,
                entry.pos.x_meters(),
                entry.pos.y_meters(),
                entry.key.map(|k| k.to_hex()).unwrap_or_else(|| "-".into())
            );
        }
    }

    // Pairwise keys agree in both directions: 3 nodes, 3 distinct keys.
    for u in 0..3u32 {
        for v in (u + 1)..3u32 {
            let k_uv = tables[u as usize].key_for(v).unwrap();
            let k_vu = tables[v as usize].key_for(u).unwrap();
            assert_eq!(k_uv, k_vu);
        }
    }
    println!("all 3 pairs agree: n(n-1)/2 = 3 keys established");
}
