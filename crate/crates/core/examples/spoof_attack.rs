//! Position spoofing: an off-path node advertises a location pulled toward
//! the destination and captures the greedy traffic that used to flow over
//! the honest relay. Beacons are unsigned (no key exists before first
//! contact), so the signature scheme cannot prevent this.
//!
//! ```bash
//! cargo run -p sgpsr --example spoof_attack
//! ```

use sgpsr::adversary::AttackProfile;
use sgpsr::sim::{run, Scenario, TrafficFlow};

fn corridor(offset_m: f64) -> Scenario {
    let mut sc = Scenario {
        seed: 12,
        node_count: 5,
        area_width: 600.0,
        area_height: 500.0,
        radio_range: 280.0,
        duration: 6.0,
        security_on: true,
        ..Scenario::default()
    };
    for (id, x, y) in [
        (0u32, 50.0, 300.0),
        (1, 200.0, 380.0),
        (2, 350.0, 380.0),
        (3, 500.0, 300.0),
        (4, 200.0, 100.0), // the spoofer, south of the corridor
    ] {
        sc.placements.insert(id, (x, y));
    }
    sc.spoof_bait = Some((500.0, 300.0)); // advertise toward the destination
    sc.traffic.push(TrafficFlow {
        source: 0,
        dest: 3,
        start: 2.0,
        count: 10,
        interval: 0.2,
        payload: 48,
    });
    sc.adversaries.push((4, AttackProfile::SpoofPosition { offset_m }));
    sc
}

fn main() {
    for offset in [0.0, 150.0] {
        let m = run(&corridor(offset)).unwrap();
        println!(
            "spoof offset {offset:>5.1} m: delivered={}/{}  packets through adversary={}  mean_hops={:.1}",
            m.delivered, m.generated, m.adversary_relayed, m.mean_hops
        );
    }
    println!();
    println!("the spoofed advertisement diverts the flow through the adversary");
}
