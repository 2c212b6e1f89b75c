//! Neighbor discovery and pairwise key establishment.
//!
//! Nodes broadcast beacon requests carrying their position and their
//! Diffie-Hellman public value; every hearer records the sender, derives the
//! pairwise signing key, and answers with a beacon response addressed (via
//! the destination-position field) to the requester, who completes the
//! exchange. A fleet of n mutually reachable nodes ends up with n(n-1)/2
//! distinct symmetric keys.
//!
//! Each node keeps one long-lived key pair, so repeated exchanges between
//! the same two nodes always converge to the same key and refreshing a
//! neighbor costs no modular exponentiation.
//!
//! Beacons themselves are unsigned: no key exists before the first exchange,
//! and requests are broadcast to many receivers that hold different pairwise
//! keys. The simulator measures what this concession costs under position
//! spoofing.

use crate::crypto::{derive_key, dh_shared, DhKeyPair, DhParams, SigningKey};
use crate::geo::{NodeId, Position};
use crate::wire::{Command, GpsrPacket, MAX_DATA_LEN};
use num_bigint::BigUint;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NeighborError {
    #[error("DH public encoding is {len} bytes; beacons carry at most {MAX_DATA_LEN}")]
    GroupTooLarge { len: usize },
}

/// A discovered neighbor.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborEntry {
    pub id: NodeId,
    pub pos: Position,
    /// Simulation time (seconds) at which the neighbor was last heard.
    pub last_heard: f64,
    /// Established pairwise signing key, once the exchange completed.
    pub key: Option<SigningKey>,
    /// The peer public value the key was derived from; lets a re-beacon
    /// with an unchanged public skip the exponentiation.
    pub peer_public: Option<BigUint>,
}

/// Per-node neighbor state.
#[derive(Debug, Clone)]
pub struct NeighborTable {
    entries: BTreeMap<NodeId, NeighborEntry>,
    pub beacon_interval: f64,
    pub timeout: f64,
}

impl NeighborTable {
    /// Conventional defaults: beacon every second, expire after three
    /// missed beacons plus slack.
    pub fn new(beacon_interval: f64, timeout: f64) -> Self {
        NeighborTable {
            entries: BTreeMap::new(),
            beacon_interval,
            timeout,
        }
    }

    pub fn get(&self, id: NodeId) -> Option<&NeighborEntry> {
        self.entries.get(&id)
    }

    pub fn key_for(&self, id: NodeId) -> Option<SigningKey> {
        self.entries.get(&id).and_then(|e| e.key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NeighborEntry> {
        self.entries.values()
    }

    /// Neighbor ids and positions, for the forwarding decision.
    pub fn positions(&self) -> Vec<(NodeId, Position)> {
        self.entries.values().map(|e| (e.id, e.pos)).collect()
    }

    /// Inserts or replaces an entry wholesale. Discovery normally populates
    /// the table through [`handle_beacon`]; this is for tests and tools
    /// that assemble known states directly.
    pub fn insert(&mut self, entry: NeighborEntry) {
        self.entries.insert(entry.id, entry);
    }

    fn upsert(&mut self, id: NodeId, pos: Position, now: f64) -> &mut NeighborEntry {
        let entry = self.entries.entry(id).or_insert(NeighborEntry {
            id,
            pos,
            last_heard: now,
            key: None,
            peer_public: None,
        });
        entry.pos = pos;
        entry.last_heard = now;
        entry
    }
}

/// Beacon data field layout: 2-byte big-endian length, then the DH public
/// value as a minimal big-endian integer.
pub fn encode_dh_payload(public: &BigUint) -> Result<Vec<u8>, NeighborError> {
    use num_traits::Zero;
    let value = if public.is_zero() {
        Vec::new()
    } else {
        public.to_bytes_be()
    };
    let total = value.len() + 2;
    if total > MAX_DATA_LEN {
        return Err(NeighborError::GroupTooLarge { len: total });
    }
    let mut out = Vec::with_capacity(total);
    out.extend_from_slice(&(value.len() as u16).to_be_bytes());
    out.extend_from_slice(&value);
    Ok(out)
}

/// Inverse of [`encode_dh_payload`]; `None` on malformed input.
pub fn decode_dh_payload(data: &[u8]) -> Option<BigUint> {
    if data.len() < 2 {
        return None;
    }
    let len = usize::from(u16::from_be_bytes([data[0], data[1]]));
    if data.len() != 2 + len {
        return None;
    }
    Some(BigUint::from_bytes_be(&data[2..]))
}

/// Builds the broadcast discovery beacon: command 0001, own position as the
/// source, own DH public in the data field, auth all-zero (no key exists
/// before the exchange). With key agreement disabled (`own` = None) the
/// data field stays empty and the beacon only announces the position.
pub fn make_beacon_request(
    self_pos: Position,
    own: Option<&DhKeyPair>,
) -> Result<GpsrPacket, NeighborError> {
    let mut pkt = GpsrPacket::new(Command::BeaconRequest);
    pkt.source_pos = self_pos;
    if let Some(own) = own {
        pkt.data = encode_dh_payload(&own.public)?;
    }
    Ok(pkt)
}

/// Builds the reply beacon: command 0010, addressed to the requester by
/// setting the destination position to the requester's advertised position.
pub fn make_beacon_response(
    self_pos: Position,
    requester_pos: Position,
    own: Option<&DhKeyPair>,
) -> Result<GpsrPacket, NeighborError> {
    let mut pkt = GpsrPacket::new(Command::BeaconResponse);
    pkt.source_pos = self_pos;
    pkt.dest_pos = requester_pos;
    if let Some(own) = own {
        pkt.data = encode_dh_payload(&own.public)?;
    }
    Ok(pkt)
}

/// Processes an incoming beacon from node `from`.
///
/// Either kind records the sender's position. When key agreement is active
/// (`dh` present), a request additionally establishes (or refreshes) the
/// pairwise key, and a response addressed to us completes the exchange.
/// Requests draw a response; malformed or out-of-range DH payloads leave
/// the entry keyless and draw no response.
pub fn handle_beacon(
    table: &mut NeighborTable,
    dh: Option<(&DhParams, &DhKeyPair)>,
    pkt: &GpsrPacket,
    from: NodeId,
    self_pos: Position,
    now: f64,
) -> Option<GpsrPacket> {
    debug_assert!(pkt.command.is_beacon(), "routed a data packet to beaconing");

    let sender_pos = pkt.source_pos;
    table.upsert(from, sender_pos, now);

    // Responses are broadcast at the radio layer but addressed through the
    // destination-position field; everyone else only records the sender.
    if pkt.command == Command::BeaconResponse && pkt.dest_pos != self_pos {
        return None;
    }

    let own = match dh {
        Some((params, own)) => {
            let peer_public = decode_dh_payload(&pkt.data)?;
            let entry = table.entries.get_mut(&from).expect("upserted above");
            let cached = entry.peer_public.as_ref() == Some(&peer_public) && entry.key.is_some();
            if !cached {
                match dh_shared(params, own, &peer_public) {
                    Ok(secret) => {
                        entry.key = Some(derive_key(&secret));
                        entry.peer_public = Some(peer_public);
                    }
                    Err(_) => {
                        // Degenerate public value: keep the neighbor, refuse
                        // the key, stay silent so the peer cannot hold a
                        // one-sided key either.
                        entry.key = None;
                        entry.peer_public = None;
                        return None;
                    }
                }
            }
            Some(own)
        }
        None => None,
    };

    match pkt.command {
        Command::BeaconRequest => make_beacon_response(self_pos, sender_pos, own).ok(),
        _ => None,
    }
}

/// Removes entries not heard from within the timeout. Keys of expired
/// entries are discarded with them and re-derived on re-contact.
pub fn expire_neighbors(table: &mut NeighborTable, now: f64) {
    let timeout = table.timeout;
    table.entries.retain(|_, e| now - e.last_heard <= timeout);
}
