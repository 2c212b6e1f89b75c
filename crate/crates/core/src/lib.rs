//! Secured greedy perimeter stateless routing.
//!
//! A self-contained implementation of a geographic routing protocol for
//! vehicular ad hoc networks in which every data packet carries a symmetric
//! signature: the MD5 digest of the packet body, AES-encrypted under a
//! pairwise key agreed via Diffie-Hellman during neighbor discovery. The
//! crate bundles:
//!
//! - [`geo`] — fixed-point planar geometry: greedy next-hop choice,
//!   Gabriel-graph planarization, right-hand-rule traversal;
//! - [`wire`] — the bit-exact packet codec;
//! - [`crypto`] — Diffie-Hellman, MD5, AES-128 and Blowfish built from
//!   their public specifications, with vendored test vectors;
//! - [`auth`] — signature creation and verification;
//! - [`neighbors`] — beaconing, neighbor tables and pairwise key
//!   establishment;
//! - [`routing`] — the secured forwarding decision (greedy plus perimeter
//!   recovery with per-hop re-signing);
//! - [`adversary`] — pluggable attacker behaviors: black hole, in-flight
//!   tampering, position spoofing, beacon flooding;
//! - [`sim`] — a deterministic discrete-event simulator with metric
//!   collection;
//! - [`bench`] — wall-clock comparison of AES and Blowfish;
//! - [`oracle`] — independent reference checkers (BFS connectivity,
//!   brute-force planarity) used by tests and experiments.
//!
//! The `examples/` directory demonstrates each capability end to end; the
//! `sgpsr` binary exposes the simulator, benchmark and packet tools on the
//! command line.

pub mod adversary;
pub mod auth;
pub mod bench;
pub mod cli;
pub mod crypto;
pub mod geo;
pub mod neighbors;
pub mod oracle;
pub mod routing;
pub mod sim;
pub mod wire;

pub use geo::{NodeId, Position};
pub use wire::{Command, GpsrPacket};
