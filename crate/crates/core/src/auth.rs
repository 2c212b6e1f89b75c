//! The symmetric signature envelope: digest the packet body with MD5, then
//! encrypt the digest into the 16-byte authentication field under the
//! pairwise AES key. Verification decrypts the field and compares digests.

use crate::crypto::{aes128_decrypt_block, aes128_encrypt_block, md5_digest, SigningKey};
use crate::wire::{self, EncodeError, GpsrPacket};

/// Computes the authentication tag for a packet under `key`: the AES
/// encryption of the MD5 digest of the signed region (header plus data,
/// auth excluded).
pub fn compute_tag(key: &SigningKey, pkt: &GpsrPacket) -> Result<[u8; 16], EncodeError> {
    let bytes = wire::encode(pkt)?;
    let region = wire::signed_region(&bytes).expect("encode emits well-formed packets");
    let digest = md5_digest(region);
    Ok(aes128_encrypt_block(key, &digest))
}

/// Returns the packet with its auth field replaced by the tag under `key`.
/// Whatever was in the auth field before is ignored: the tag covers only
/// the signed region.
pub fn sign_packet(key: &SigningKey, pkt: &GpsrPacket) -> Result<GpsrPacket, EncodeError> {
    let mut signed = pkt.clone();
    signed.auth = compute_tag(key, pkt)?;
    Ok(signed)
}

/// True iff decrypting the auth field under `key` yields the digest of the
/// packet's signed region. Never errors on mismatch; an unencodable packet
/// verifies as false.
pub fn verify_packet(key: &SigningKey, pkt: &GpsrPacket) -> bool {
    let Ok(bytes) = wire::encode(pkt) else {
        return false;
    };
    let region = wire::signed_region(&bytes).expect("encode emits well-formed packets");
    let expected = md5_digest(region);
    let recovered = aes128_decrypt_block(key, &pkt.auth);
    recovered == expected
}
