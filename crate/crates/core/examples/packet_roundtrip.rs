//! Encode a packet to its wire bytes and decode it back.
//!
//! ```bash
//! cargo run -p sgpsr --example packet_roundtrip
//! ```

use sgpsr::geo::Position;
use sgpsr::wire::{decode, encode, signed_region, Command, GpsrPacket};

fn main() {
    let mut pkt = GpsrPacket::new(Command::GreedyData);
    pkt.source_pos = Position::from_meters(100.0, 200.0);
    pkt.dest_pos = Position::from_meters(300.0, 50.25);
    pkt.port = 7;
    pkt.data = b"hello".to_vec();

    let bytes = encode(&pkt).expect("valid packet");
    println!("encoded {} bytes (48-byte header + {} data + 16 auth):", bytes.len(), pkt.data.len());
    for chunk in bytes.chunks(16) {
        println!("  {}", hex::encode(chunk));
    }
    println!("byte 0 = 0x{:02x} (version 1, command 0011 greedy)", bytes[0]);
    println!(
        "signed region covers the first {} bytes; the trailing 16 hold the tag",
        signed_region(&bytes).unwrap().len()
    );

    let back = decode(&bytes).expect("own encoding decodes");
    assert_eq!(back, pkt);
    println!("decode(encode(pkt)) == pkt: ok");

    // Decoding rejects malformed inputs with a named reason.
    let mut bad = bytes.clone();
    bad[0] = 0x15; // unknown command nibble
    println!("tampered command nibble -> {}", decode(&bad).unwrap_err());
}
