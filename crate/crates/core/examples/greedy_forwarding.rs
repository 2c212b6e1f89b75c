//! The greedy rule on a small neighborhood: pick the neighbor closest to
//! the destination, insist on strict progress, stop at local maxima.
//!
//! ```bash
//! cargo run -p sgpsr --example greedy_forwarding
//! ```

use sgpsr::geo::{distance, greedy_next, Position};

fn main() {
    let here = Position::from_meters(0.0, 0.0);
    let dest = Position::from_meters(10.0, 0.0);
    let neighbors = vec![
        (1u32, Position::from_meters(4.0, 0.0)),
        (2, Position::from_meters(3.0, 3.0)),
        (3, Position::from_meters(-5.0, 0.0)),
    ];

    println!("self at (0,0), destination at (10,0)");
    for (id, pos) in &neighbors {
        println!(
            "  neighbor {id} at ({:>4.1}, {:>4.1})  distance to dest {:.2} m",
            pos.x_meters(),
            pos.y_meters(),
            distance(*pos, dest)
        );
    }
    let chosen = greedy_next(here, dest, &neighbors);
    println!("greedy choice: {chosen:?} (6.00 m beats sqrt(58) = 7.62 m)");

    // A local maximum: every neighbor is farther from the destination.
    let stuck = vec![
        (1u32, Position::from_meters(-5.0, 0.0)),
        (2, Position::from_meters(0.0, 12.0)),
    ];
    println!(
        "with only backward neighbors greedy yields {:?} -> perimeter mode takes over",
        greedy_next(here, dest, &stuck)
    );
}
