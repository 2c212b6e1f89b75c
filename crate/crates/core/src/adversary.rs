//! Attacker behaviors pluggable into simulated nodes.
//!
//! Four profiles cover the attack taxonomy against geographic routing:
//! silently discarding relayed traffic (black hole), modifying payloads in
//! flight, advertising a false position to attract greedy traffic, and
//! flooding the channel with beacons.

use crate::geo::Position;
use crate::wire::GpsrPacket;
use rand::Rng;

/// What an adversarial relay does with a data packet passing through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelayAction {
    Drop,
    ForwardModified(GpsrPacket),
    ForwardUnchanged,
}

/// An attack profile attached to one simulated node.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackProfile {
    /// Discard each relayed data packet with probability `drop_fraction`.
    BlackHole { drop_fraction: f64 },
    /// Flip `bits` random bits of the data field before relaying. With
    /// `target_auth` the flips land in the auth field instead, which any
    /// verifier catches; the data-field variant is the interesting case.
    Tamper { bits: u32, target_auth: bool },
    /// Advertise a position displaced `offset_m` meters toward the bait
    /// point instead of the true position.
    SpoofPosition { offset_m: f64 },
    /// Send beacons `multiplier` times as often as honest nodes.
    FloodBeacons { multiplier: f64 },
}

impl AttackProfile {
    pub fn kind(&self) -> &'static str {
        match self {
            AttackProfile::BlackHole { .. } => "black_hole",
            AttackProfile::Tamper { .. } => "tamper",
            AttackProfile::SpoofPosition { .. } => "spoof_position",
            AttackProfile::FloodBeacons { .. } => "flood_beacons",
        }
    }

    /// Bounds check for scenario validation.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            AttackProfile::BlackHole { drop_fraction } => {
                if !(0.0..=1.0).contains(drop_fraction) {
                    return Err(format!(
                        "black_hole drop_fraction {drop_fraction} outside [0, 1]"
                    ));
                }
            }
            AttackProfile::FloodBeacons { multiplier } => {
                if *multiplier < 1.0 {
                    return Err(format!("flood_beacons multiplier {multiplier} below 1"));
                }
            }
            AttackProfile::SpoofPosition { offset_m } => {
                if *offset_m < 0.0 {
                    return Err(format!("spoof_position offset {offset_m} negative"));
                }
            }
            AttackProfile::Tamper { .. } => {}
        }
        Ok(())
    }
}

/// Applies the profile to a data packet this node was asked to relay.
pub fn apply_on_relay(
    profile: &AttackProfile,
    pkt: &GpsrPacket,
    rng: &mut impl Rng,
) -> RelayAction {
    match profile {
        AttackProfile::BlackHole { drop_fraction } => {
            if rng.gen::<f64>() < *drop_fraction {
                RelayAction::Drop
            } else {
                RelayAction::ForwardUnchanged
            }
        }
        AttackProfile::Tamper { bits, target_auth } => {
            if *bits == 0 || (!target_auth && pkt.data.is_empty()) {
                return RelayAction::ForwardUnchanged;
            }
            let mut out = pkt.clone();
            for _ in 0..*bits {
                if *target_auth {
                    let bit = rng.gen_range(0..out.auth.len() * 8);
                    out.auth[bit / 8] ^= 1 << (bit % 8);
                } else {
                    let bit = rng.gen_range(0..out.data.len() * 8);
                    out.data[bit / 8] ^= 1 << (bit % 8);
                }
            }
            RelayAction::ForwardModified(out)
        }
        _ => RelayAction::ForwardUnchanged,
    }
}

/// The position an adversarial node advertises in its beacons. Spoofing
/// moves the advertised point `offset_m` meters from the true position
/// toward the bait (clamped at the bait itself); every other profile
/// advertises honestly.
pub fn apply_on_beacon(
    profile: &AttackProfile,
    true_pos: Position,
    bait: Option<Position>,
) -> Position {
    match (profile, bait) {
        (AttackProfile::SpoofPosition { offset_m }, Some(target)) => {
            let dx = target.x_meters() - true_pos.x_meters();
            let dy = target.y_meters() - true_pos.y_meters();
            let dist = (dx * dx + dy * dy).sqrt();
            if dist <= *offset_m || dist == 0.0 {
                return target;
            }
            let scale = offset_m / dist;
            Position::from_meters(
                true_pos.x_meters() + dx * scale,
                true_pos.y_meters() + dy * scale,
            )
        }
        _ => true_pos,
    }
}

/// The beacon interval an attacker actually uses: flooding divides the
/// honest interval by the configured multiplier.
pub fn flood_schedule(profile: &AttackProfile, base_interval: f64) -> f64 {
    match profile {
        AttackProfile::FloodBeacons { multiplier } => base_interval / multiplier,
        _ => base_interval,
    }
}
