//! Beacon flooding as denial of service: one node beacons at a multiple of
//! the honest rate and the shared channel's busy fraction climbs with it.
//!
//! ```bash
//! cargo run -p sgpsr --example flood_attack
//! ```

use sgpsr::adversary::AttackProfile;
use sgpsr::sim::{run, Scenario, TrafficFlow};

fn flooded(multiplier: f64) -> Scenario {
    let mut sc = Scenario {
        seed: 3,
        node_count: 8,
        area_width: 400.0,
        area_height: 400.0,
        radio_range: 250.0,
        duration: 6.0,
        security_on: true,
        ..Scenario::default()
    };
    sc.traffic.push(TrafficFlow {
        source: 0,
        dest: 7,
        start: 2.0,
        count: 10,
        interval: 0.2,
        payload: 32,
    });
    if multiplier > 1.0 {
        sc.adversaries
            .push((4, AttackProfile::FloodBeacons { multiplier }));
    }
    sc
}

fn main() {
    println!("multiplier  beacons_sent  channel_busy_fraction");
    for multiplier in [1.0, 2.0, 5.0, 10.0, 20.0] {
        let m = run(&flooded(multiplier)).unwrap();
        println!(
            "{multiplier:>10.0}  {:>12}  {:>21.6}",
            m.beacons_sent, m.channel_busy_fraction
        );
    }
    println!();
    println!("busy fraction grows monotonically with the flood multiplier");
}
