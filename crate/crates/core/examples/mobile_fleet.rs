//! Random-waypoint mobility: a moving fleet keeps discovering, keying and
//! routing as the topology churns.
//!
//! ```bash
//! cargo run -p sgpsr --example mobile_fleet
//! ```

use sgpsr::sim::{run, Mobility, Scenario, TrafficFlow};

fn main() {
    let mut sc = Scenario {
        seed: 21,
        node_count: 20,
        area_width: 600.0,
        area_height: 600.0,
        radio_range: 220.0,
        duration: 12.0,
        security_on: true,
        mobility: Mobility::RandomWaypoint {
            speed_min: 2.0,
            speed_max: 12.0,
            pause: 1.0,
        },
        ..Scenario::default()
    };
    sc.traffic.push(TrafficFlow {
        source: 0,
        dest: 19,
        start: 3.0,
        count: 20,
        interval: 0.4,
        payload: 64,
    });

    let m = run(&sc).expect("valid scenario");
    println!(
        "mobile fleet: delivered {}/{} ({:.0}%), mean hops {:.2}",
        m.delivered,
        m.generated,
        m.delivery_ratio() * 100.0,
        m.mean_hops
    );
    println!(
        "keys at horizon: {}   drops: no-route={} link-lost={} ttl={}",
        m.keys_established, m.drop_no_route, m.drop_link_lost, m.drop_ttl
    );
}
