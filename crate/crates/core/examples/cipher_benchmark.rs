//! The cipher timing comparison: AES-128 vs Blowfish, encrypt and decrypt,
//! at 128/256/512-byte messages, with key setup timed separately. Uses a
//! reduced iteration count so it finishes quickly; the `sgpsr bench`
//! subcommand runs the full grid.
//!
//! ```bash
//! cargo run --release -p sgpsr --example cipher_benchmark
//! ```

use sgpsr::bench::{emit_csv, emit_table, run_bench};

fn main() {
    let report = run_bench(&[128, 256, 512], 2_000).expect("legal sizes");
    print!("{}", emit_table(&report));
    println!();
    println!("CSV form (without key-setup rows):");
    print!("{}", emit_csv(&report, false));
}
