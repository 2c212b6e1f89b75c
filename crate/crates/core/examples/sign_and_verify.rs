//! The signature envelope: MD5 over the packet body, AES-encrypted into
//! the auth field; then watch a single flipped bit break verification.
//!
//! ```bash
//! cargo run -p sgpsr --example sign_and_verify
//! ```

use sgpsr::auth::{sign_packet, verify_packet};
use sgpsr::crypto::SigningKey;
use sgpsr::geo::Position;
use sgpsr::wire::{Command, GpsrPacket};

fn main() {
    let key = SigningKey(*b"sixteen byte key");
    let mut pkt = GpsrPacket::new(Command::GreedyData);
    pkt.source_pos = Position::from_meters(10.0, 20.0);
    pkt.dest_pos = Position::from_meters(500.0, 40.0);
    pkt.data = b"speed advisory: 30 km/h ahead".to_vec();

    let signed = sign_packet(&key, &pkt).expect("valid packet");
    println!("tag = {}", hex::encode(signed.auth));
    println!("verify with the right key: {}", verify_packet(&key, &signed));

    let other = SigningKey(*b"a different key!");
    println!("verify with a wrong key:  {}", verify_packet(&other, &signed));

    let mut tampered = signed.clone();
    tampered.data[0] ^= 0x01;
    println!("verify after one bit flip: {}", verify_packet(&key, &tampered));

    // Re-signing is idempotent: the tag covers everything except itself.
    let again = sign_packet(&key, &signed).expect("valid packet");
    assert_eq!(again.auth, signed.auth);
    println!("re-signing changes nothing: ok");
}
