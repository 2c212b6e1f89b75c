//! AES-128 single-block cipher: 16-byte blocks, 10 rounds.
//!
//! The S-box is generated once from the GF(2^8) inverse plus the affine
//! transform rather than hard-coded; the published test vectors pin it.

use std::sync::OnceLock;

fn xtime(b: u8) -> u8 {
    (b << 1) ^ (((b as i8 >> 7) as u8) & 0x1b)
}

/// GF(2^8) multiplication modulo x^8 + x^4 + x^3 + x + 1.
fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    acc
}

fn sboxes() -> &'static ([u8; 256], [u8; 256]) {
    static BOXES: OnceLock<([u8; 256], [u8; 256])> = OnceLock::new();
    BOXES.get_or_init(|| {
        let mut sbox = [0u8; 256];
        let mut inv = [0u8; 256];
        // Walk the multiplicative group with generator 3: p runs over
        // products of 3, q over inverses (products of 1/3 = 0xf6).
        let mut p: u8 = 1;
        let mut q: u8 = 1;
        loop {
            p = gf_mul(p, 3);
            q = gf_mul(q, 0xf6);
            let x = q ^ q.rotate_left(1) ^ q.rotate_left(2) ^ q.rotate_left(3) ^ q.rotate_left(4);
            sbox[p as usize] = x ^ 0x63;
            if p == 1 {
                break;
            }
        }
        sbox[0] = 0x63;
        for (i, &s) in sbox.iter().enumerate() {
            inv[s as usize] = i as u8;
        }
        (sbox, inv)
    })
}

const ROUNDS: usize = 10;

/// Expanded AES-128 key schedule: 11 round keys of 16 bytes.
#[derive(Clone)]
pub struct Aes128 {
    round_keys: [[u8; 16]; ROUNDS + 1],
}

impl Aes128 {
    pub fn new(key: &[u8; 16]) -> Self {
        let (sbox, _) = sboxes();
        let mut w = [[0u8; 4]; 4 * (ROUNDS + 1)];
        for i in 0..4 {
            w[i].copy_from_slice(&key[4 * i..4 * i + 4]);
        }
        let mut rcon: u8 = 1;
        for i in 4..w.len() {
            let mut temp = w[i - 1];
            if i % 4 == 0 {
                temp.rotate_left(1);
                for b in temp.iter_mut() {
                    *b = sbox[*b as usize];
                }
                temp[0] ^= rcon;
                rcon = xtime(rcon);
            }
            for j in 0..4 {
                w[i][j] = w[i - 4][j] ^ temp[j];
            }
        }
        let mut round_keys = [[0u8; 16]; ROUNDS + 1];
        for (r, rk) in round_keys.iter_mut().enumerate() {
            for c in 0..4 {
                rk[4 * c..4 * c + 4].copy_from_slice(&w[4 * r + c]);
            }
        }
        Aes128 { round_keys }
    }

    fn add_round_key(&self, state: &mut [u8; 16], round: usize) {
        for (b, k) in state.iter_mut().zip(self.round_keys[round].iter()) {
            *b ^= k;
        }
    }

    /// Encrypts one 16-byte block.
    pub fn encrypt_block(&self, block: &[u8; 16]) -> [u8; 16] {
        let (sbox, _) = sboxes();
        let mut state = *block;
        self.add_round_key(&mut state, 0);
        for round in 1..=ROUNDS {
            for b in state.iter_mut() {
                *b = sbox[*b as usize];
            }
            shift_rows(&mut state);
            if round != ROUNDS {
                mix_columns(&mut state);
            }
            self.add_round_key(&mut state, round);
        }
        state
    }

    /// Decrypts one 16-byte block; exact inverse of [`Aes128::encrypt_block`].
    pub fn decrypt_block(&self, block: &[u8; 16]) -> [u8; 16] {
        let (_, inv_sbox) = sboxes();
        let mut state = *block;
        self.add_round_key(&mut state, ROUNDS);
        for round in (0..ROUNDS).rev() {
            inv_shift_rows(&mut state);
            for b in state.iter_mut() {
                *b = inv_sbox[*b as usize];
            }
            self.add_round_key(&mut state, round);
            if round != 0 {
                inv_mix_columns(&mut state);
            }
        }
        state
    }
}

// State layout: state[r + 4c] is row r, column c (column-major, as in the
// standard's byte ordering).

fn shift_rows(state: &mut [u8; 16]) {
    for r in 1..4 {
        let row = [state[r], state[r + 4], state[r + 8], state[r + 12]];
        for c in 0..4 {
            state[r + 4 * c] = row[(c + r) % 4];
        }
    }
}

fn inv_shift_rows(state: &mut [u8; 16]) {
    for r in 1..4 {
        let row = [state[r], state[r + 4], state[r + 8], state[r + 12]];
        for c in 0..4 {
            state[r + 4 * c] = row[(c + 4 - r) % 4];
        }
    }
}

fn mix_columns(state: &mut [u8; 16]) {
    for c in 0..4 {
        let col = [state[4 * c], state[4 * c + 1], state[4 * c + 2], state[4 * c + 3]];
        state[4 * c] = gf_mul(col[0], 2) ^ gf_mul(col[1], 3) ^ col[2] ^ col[3];
        state[4 * c + 1] = col[0] ^ gf_mul(col[1], 2) ^ gf_mul(col[2], 3) ^ col[3];
        state[4 * c + 2] = col[0] ^ col[1] ^ gf_mul(col[2], 2) ^ gf_mul(col[3], 3);
        state[4 * c + 3] = gf_mul(col[0], 3) ^ col[1] ^ col[2] ^ gf_mul(col[3], 2);
    }
}

fn inv_mix_columns(state: &mut [u8; 16]) {
    for c in 0..4 {
        let col = [state[4 * c], state[4 * c + 1], state[4 * c + 2], state[4 * c + 3]];
        state[4 * c] = gf_mul(col[0], 14) ^ gf_mul(col[1], 11) ^ gf_mul(col[2], 13) ^ gf_mul(col[3], 9);
        state[4 * c + 1] = gf_mul(col[0], 9) ^ gf_mul(col[1], 14) ^ gf_mul(col[2], 11) ^ gf_mul(col[3], 13);
        state[4 * c + 2] = gf_mul(col[0], 13) ^ gf_mul(col[1], 9) ^ gf_mul(col[2], 14) ^ gf_mul(col[3], 11);
        state[4 * c + 3] = gf_mul(col[0], 11) ^ gf_mul(col[1], 13) ^ gf_mul(col[2], 9) ^ gf_mul(col[3], 14);
    }
}
