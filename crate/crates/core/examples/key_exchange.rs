//! The Diffie-Hellman agreement both on the tiny demo group (P = 23,
//! W = 5, the classic worked numbers) and on the 2048-bit group, ending in
//! the 128-bit packet-signing key.
//!
//! ```bash
//! cargo run -p sgpsr --example key_exchange
//! ```

use num_bigint::BigUint;
use rand::SeedableRng;
use sgpsr::crypto::{derive_key, dh_generate, dh_shared, keypair_from_secret, DhParams};

fn main() {
    // Small enough to follow by hand.
    let demo = DhParams::named("demo23").unwrap();
    let alice = keypair_from_secret(&demo, BigUint::from(6u8)).unwrap();
    let bob = keypair_from_secret(&demo, BigUint::from(15u8)).unwrap();
    println!("demo group: P = 23, W = 5");
    println!("  alice: secret 6  -> public {}", alice.public);
    println!("  bob:   secret 15 -> public {}", bob.public);

    let s_alice = dh_shared(&demo, &alice, &bob.public).unwrap();
    let s_bob = dh_shared(&demo, &bob, &alice.public).unwrap();
    assert_eq!(s_alice, s_bob);
    println!("  both sides compute S = {}", s_alice.0);
    println!("  derived signing key: {}", derive_key(&s_alice).to_hex());

    // The real thing.
    let group = DhParams::named("modp2048").unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let a = dh_generate(&group, &mut rng);
    let b = dh_generate(&group, &mut rng);
    let s_a = dh_shared(&group, &a, &b.public).unwrap();
    let s_b = dh_shared(&group, &b, &a.public).unwrap();
    assert_eq!(s_a, s_b);
    println!("2048-bit group: agreement holds; S has {} bits", s_a.0.bits());
    println!("  derived signing key: {}", derive_key(&s_a).to_hex());
}
