//! Diffie-Hellman key agreement over a prime-order group (P, W).
//!
//! Each side raises the generator to a private exponent, exchanges the
//! result, and raises the peer's value to the same private exponent; both
//! arrive at the shared secret S.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::RngCore;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DhError {
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("group modulus failed the primality check")]
    NotPrime,
    #[error("generator must satisfy 1 < W < P")]
    BadGenerator,
    #[error("secret exponent must lie in [2, P-2]")]
    SecretOutOfRange,
    #[error("peer public value rejected: must lie in (1, P-1)")]
    HandshakeRejected,
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
}

/// The public group: prime modulus P and generator W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhParams {
    p: BigUint,
    w: BigUint,
}

/// One side's key material: the private exponent and W^secret mod P.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhKeyPair {
    pub secret: BigUint,
    pub public: BigUint,
}

/// The agreed secret S, identical on both sides of a completed exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedSecret(pub BigUint);

impl SharedSecret {
    /// Minimal big-endian byte encoding; empty for S = 0.
    pub fn to_bytes_be(&self) -> Vec<u8> {
        if self.0.is_zero() {
            Vec::new()
        } else {
            self.0.to_bytes_be()
        }
    }
}

/// A well-known 2048-bit safe-prime group with generator 2 (the default).
pub const MODP_2048_HEX: &str = concat!(
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74",
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437",
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED",
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05",
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB",
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B",
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718",
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF",
);

/// A well-known 1536-bit safe-prime group with generator 2. Its 192-byte
/// public values are the largest that fit the 250-byte beacon data field,
/// so this is the biggest standard group usable for in-band discovery.
pub const MODP_1536_HEX: &str = concat!(
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74",
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437",
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED",
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05",
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB",
    "9ED529077096966D670C354E4ABC9804F1746C08CA237327FFFFFFFFFFFFFFFF",
);

/// A 256-bit safe prime with generator 5; fast enough for large simulated
/// fleets while keeping derived keys collision-free.
pub const TEST_256_HEX: &str =
    "FB4ED5819E14FD476B4FF6FD4503078BB0958E9B087BAE1C3A2E8C3903BCD66F";

impl DhParams {
    /// Validates and builds a group. P must pass a probabilistic primality
    /// check and W must satisfy 1 < W < P.
    pub fn new(p: BigUint, w: BigUint) -> Result<Self, DhError> {
        if p < BigUint::from(2u8) {
            return Err(DhError::BadModulus);
        }
        if !is_probable_prime(&p, 32) {
            return Err(DhError::NotPrime);
        }
        if w <= BigUint::one() || w >= p {
            return Err(DhError::BadGenerator);
        }
        Ok(DhParams { p, w })
    }

    /// Parses hex-encoded P and W.
    pub fn from_hex(p_hex: &str, w_hex: &str) -> Result<Self, DhError> {
        let p = BigUint::parse_bytes(p_hex.trim().as_bytes(), 16).ok_or(DhError::BadModulus)?;
        let w = BigUint::parse_bytes(w_hex.trim().as_bytes(), 16).ok_or(DhError::BadGenerator)?;
        DhParams::new(p, w)
    }

    /// Looks up a named group: `modp2048`, `modp1536`, `test256` or
    /// `demo23`. The built-in moduli skip the runtime primality check; the
    /// test suite pins their safe-primality instead.
    pub fn named(name: &str) -> Result<Self, DhError> {
        let (p_hex, w) = match name {
            "modp2048" => (MODP_2048_HEX, 2u8),
            "modp1536" => (MODP_1536_HEX, 2),
            "test256" => (TEST_256_HEX, 5),
            "demo23" => ("17", 5),
            other => return Err(DhError::UnknownGroup(other.to_string())),
        };
        Ok(DhParams {
            p: BigUint::parse_bytes(p_hex.as_bytes(), 16).expect("vetted constant"),
            w: BigUint::from(w),
        })
    }

    /// Runs the full probabilistic validation on this group.
    pub fn validate(&self) -> Result<(), DhError> {
        DhParams::new(self.p.clone(), self.w.clone()).map(|_| ())
    }

    pub fn prime(&self) -> &BigUint {
        &self.p
    }

    pub fn generator(&self) -> &BigUint {
        &self.w
    }

    /// Longest possible minimal big-endian encoding of a group element.
    pub fn element_len(&self) -> usize {
        (self.p.bits() as usize).div_ceil(8)
    }
}

/// base^exp mod modulus by square-and-multiply over the exponent bits.
pub fn mod_exp(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> Result<BigUint, DhError> {
    if *modulus < BigUint::from(2u8) {
        return Err(DhError::BadModulus);
    }
    let mut result = BigUint::one();
    let mut acc = base % modulus;
    for i in 0..exp.bits() {
        if exp.bit(i) {
            result = &result * &acc % modulus;
        }
        acc = &acc * &acc % modulus;
    }
    Ok(result)
}

/// Draws a secret uniformly from [2, P-2] and derives the public value.
pub fn dh_generate(params: &DhParams, rng: &mut impl RngCore) -> DhKeyPair {
    let low = BigUint::from(2u8);
    let high = &params.p - 1u8; // exclusive bound: secret < P-1
    let secret = rng.gen_biguint_range(&low, &high);
    keypair_from_secret(params, secret).expect("secret drawn in range")
}

/// Builds a key pair from a caller-chosen secret (tests, CLI).
pub fn keypair_from_secret(params: &DhParams, secret: BigUint) -> Result<DhKeyPair, DhError> {
    if secret < BigUint::from(2u8) || secret > &params.p - 2u8 {
        return Err(DhError::SecretOutOfRange);
    }
    let public = mod_exp(&params.w, &secret, &params.p)?;
    Ok(DhKeyPair { secret, public })
}

/// Completes the exchange: S = peer_public^own.secret mod P. Rejects the
/// trivial-subgroup publics 0, 1 and P-1.
pub fn dh_shared(
    params: &DhParams,
    own: &DhKeyPair,
    peer_public: &BigUint,
) -> Result<SharedSecret, DhError> {
    let p_minus_1 = &params.p - 1u8;
    if *peer_public <= BigUint::one() || *peer_public >= p_minus_1 {
        return Err(DhError::HandshakeRejected);
    }
    Ok(SharedSecret(mod_exp(peer_public, &own.secret, &params.p)?))
}

/// Miller-Rabin with a deterministic witness schedule.
fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let two = BigUint::from(2u8);
    if *n < two {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let sp = BigUint::from(small);
        if *n == sp {
            return true;
        }
        if (n % sp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u8;
    let trailing = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> trailing;

    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6d72_7462); // fixed witness stream
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = mod_exp(&a, &d, n).expect("n >= 2");
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        let mut witness = true;
        for _ in 1..trailing {
            x = &x * &x % n;
            if x == n_minus_1 {
                witness = false;
                break;
            }
        }
        if witness {
            return false;
        }
    }
    true
}
