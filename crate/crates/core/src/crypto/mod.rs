//! Cryptographic primitives for the signed routing protocol: Diffie-Hellman
//! key agreement, the MD5 digest, the AES-128 block cipher used for packet
//! signatures, and Blowfish for the timing comparison.

pub mod aes;
pub mod blowfish;
pub mod dh;
pub mod md5;

pub use aes::Aes128;
pub use blowfish::{blowfish_decrypt, blowfish_encrypt, Blowfish, BlowfishError};
pub use dh::{
    dh_generate, dh_shared, keypair_from_secret, mod_exp, DhError, DhKeyPair, DhParams,
    SharedSecret,
};
pub use md5::md5_digest;

/// A 128-bit pairwise signing key, used directly as the AES key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SigningKey(pub [u8; 16]);

impl SigningKey {
    pub fn from_hex(s: &str) -> Option<SigningKey> {
        let bytes = hex::decode(s.trim()).ok()?;
        Some(SigningKey(bytes.try_into().ok()?))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

/// Derives the 128-bit signing key from a shared secret: the digest of the
/// minimal big-endian encoding of S (empty input for S = 0).
pub fn derive_key(secret: &SharedSecret) -> SigningKey {
    SigningKey(md5_digest(&secret.to_bytes_be()))
}

/// Encrypts a single 16-byte block under the signing key.
pub fn aes128_encrypt_block(key: &SigningKey, block: &[u8; 16]) -> [u8; 16] {
    Aes128::new(&key.0).encrypt_block(block)
}

/// Decrypts a single 16-byte block under the signing key.
pub fn aes128_decrypt_block(key: &SigningKey, block: &[u8; 16]) -> [u8; 16] {
    Aes128::new(&key.0).decrypt_block(block)
}
