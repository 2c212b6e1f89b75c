//! Blowfish in ECB mode, used only by the cipher-timing benchmark.
//!
//! 64-bit blocks, 16 Feistel rounds, keys of 4 to 56 bytes.

use thiserror::Error;

mod tables {
    include!("blowfish_tables.rs");
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlowfishError {
    #[error("key is {len} bytes; legal range is 4..=56")]
    BadKeyLength { len: usize },
    #[error("data length {len} is not a multiple of the 8-byte block")]
    UnalignedData { len: usize },
}

pub struct Blowfish {
    p: [u32; 18],
    s: [[u32; 256]; 4],
}

impl Blowfish {
    pub fn new(key: &[u8]) -> Result<Self, BlowfishError> {
        if !(4..=56).contains(&key.len()) {
            return Err(BlowfishError::BadKeyLength { len: key.len() });
        }
        let mut bf = Blowfish {
            p: tables::P_INIT,
            s: tables::S_INIT,
        };
        // XOR the cyclically repeated key into the P-array.
        let mut j = 0;
        for p in bf.p.iter_mut() {
            let mut word = 0u32;
            for _ in 0..4 {
                word = (word << 8) | u32::from(key[j]);
                j = (j + 1) % key.len();
            }
            *p ^= word;
        }
        // Replace all subkeys with successive encryptions of zero.
        let (mut l, mut r) = (0u32, 0u32);
        for i in (0..18).step_by(2) {
            (l, r) = bf.encrypt_words(l, r);
            bf.p[i] = l;
            bf.p[i + 1] = r;
        }
        for b in 0..4 {
            for i in (0..256).step_by(2) {
                (l, r) = bf.encrypt_words(l, r);
                bf.s[b][i] = l;
                bf.s[b][i + 1] = r;
            }
        }
        Ok(bf)
    }

    fn f(&self, x: u32) -> u32 {
        let a = (x >> 24) as usize;
        let b = (x >> 16) as usize & 0xff;
        let c = (x >> 8) as usize & 0xff;
        let d = x as usize & 0xff;
        (self.s[0][a]
            .wrapping_add(self.s[1][b])
            ^ self.s[2][c])
            .wrapping_add(self.s[3][d])
    }

    fn encrypt_words(&self, mut l: u32, mut r: u32) -> (u32, u32) {
        for i in 0..16 {
            l ^= self.p[i];
            r ^= self.f(l);
            std::mem::swap(&mut l, &mut r);
        }
        std::mem::swap(&mut l, &mut r);
        r ^= self.p[16];
        l ^= self.p[17];
        (l, r)
    }

    fn decrypt_words(&self, mut l: u32, mut r: u32) -> (u32, u32) {
        for i in (2..18).rev() {
            l ^= self.p[i];
            r ^= self.f(l);
            std::mem::swap(&mut l, &mut r);
        }
        std::mem::swap(&mut l, &mut r);
        r ^= self.p[1];
        l ^= self.p[0];
        (l, r)
    }

    pub fn encrypt_block(&self, block: &[u8; 8]) -> [u8; 8] {
        let l = u32::from_be_bytes(block[..4].try_into().unwrap());
        let r = u32::from_be_bytes(block[4..].try_into().unwrap());
        let (l, r) = self.encrypt_words(l, r);
        let mut out = [0u8; 8];
        out[..4].copy_from_slice(&l.to_be_bytes());
        out[4..].copy_from_slice(&r.to_be_bytes());
        out
    }

    pub fn decrypt_block(&self, block: &[u8; 8]) -> [u8; 8] {
        let l = u32::from_be_bytes(block[..4].try_into().unwrap());
        let r = u32::from_be_bytes(block[4..].try_into().unwrap());
        let (l, r) = self.decrypt_words(l, r);
        let mut out = [0u8; 8];
        out[..4].copy_from_slice(&l.to_be_bytes());
        out[4..].copy_from_slice(&r.to_be_bytes());
        out
    }
}

/// ECB encryption of a whole buffer; `data` must be block-aligned.
pub fn blowfish_encrypt(key: &[u8], data: &[u8]) -> Result<Vec<u8>, BlowfishError> {
    let bf = Blowfish::new(key)?;
    ecb(data_aligned(data)?, |b| bf.encrypt_block(b))
}

/// ECB decryption of a whole buffer; `data` must be block-aligned.
pub fn blowfish_decrypt(key: &[u8], data: &[u8]) -> Result<Vec<u8>, BlowfishError> {
    let bf = Blowfish::new(key)?;
    ecb(data_aligned(data)?, |b| bf.decrypt_block(b))
}

fn data_aligned(data: &[u8]) -> Result<&[u8], BlowfishError> {
    if !data.len().is_multiple_of(8) {
        return Err(BlowfishError::UnalignedData { len: data.len() });
    }
    Ok(data)
}

fn ecb(data: &[u8], f: impl Fn(&[u8; 8]) -> [u8; 8]) -> Result<Vec<u8>, BlowfishError> {
    let mut out = Vec::with_capacity(data.len());
    for chunk in data.chunks_exact(8) {
        out.extend_from_slice(&f(chunk.try_into().unwrap()));
    }
    Ok(out)
}
