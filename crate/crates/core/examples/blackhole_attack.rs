//! A black hole on the only bridge between two clusters. Security on or
//! off, the affected flow dies: the signature scheme protects integrity,
//! not availability.
//!
//! ```bash
//! cargo run -p sgpsr --example blackhole_attack
//! ```

use sgpsr::adversary::AttackProfile;
use sgpsr::sim::{run, Scenario, TrafficFlow};

fn bridge_scenario(security_on: bool, drop_fraction: f64) -> Scenario {
    let mut sc = Scenario {
        seed: 9,
        node_count: 6,
        area_width: 500.0,
        area_height: 200.0,
        radio_range: 160.0,
        duration: 6.0,
        security_on,
        ..Scenario::default()
    };
    // Two clusters joined only through node 3.
    for (id, x, y) in [
        (0u32, 100.0, 100.0),
        (1, 60.0, 40.0),
        (2, 140.0, 160.0),
        (3, 250.0, 100.0),
        (4, 400.0, 100.0),
        (5, 440.0, 40.0),
    ] {
        sc.placements.insert(id, (x, y));
    }
    sc.traffic.push(TrafficFlow {
        source: 0,
        dest: 5,
        start: 2.0,
        count: 10,
        interval: 0.2,
        payload: 48,
    });
    if drop_fraction > 0.0 {
        sc.adversaries.push((3, AttackProfile::BlackHole { drop_fraction }));
    }
    sc
}

fn main() {
    for (label, security, fraction) in [
        ("honest bridge, security on ", true, 0.0),
        ("black hole,    security on ", true, 1.0),
        ("black hole,    security off", false, 1.0),
        ("half-hearted,  security on ", true, 0.5),
    ] {
        let m = run(&bridge_scenario(security, fraction)).unwrap();
        println!(
            "{label}: delivered {}/{}  blackhole drops {}",
            m.delivered, m.generated, m.drop_blackhole
        );
    }
    println!();
    println!("the cut-vertex black hole zeroes the flow with or without signatures");
}
