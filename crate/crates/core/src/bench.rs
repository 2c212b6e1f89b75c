//! Wall-clock comparison of the two ciphers over whole messages: encrypt
//! and decrypt timings for AES-128 and Blowfish at several message sizes,
//! with key setup timed separately.
//!
//! The timed code paths are exactly the crypto-module implementations the
//! protocol uses; there are no benchmark-only fast paths. Published timings
//! from the original evaluation of this experiment ride along in the text
//! report purely for side-by-side reference: they came from a different
//! machine and runtime and are not reproduction targets.

use crate::crypto::{Aes128, Blowfish};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Encrypt,
    Decrypt,
    KeySetup,
}

impl Operation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Operation::Encrypt => "encrypt",
            Operation::Decrypt => "decrypt",
            Operation::KeySetup => "key_setup",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Aes128,
    Blowfish,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Aes128 => "aes128",
            Algorithm::Blowfish => "blowfish",
        }
    }
}

/// One timed cell of the comparison grid.
#[derive(Debug, Clone)]
pub struct BenchResult {
    pub algorithm: Algorithm,
    pub operation: Operation,
    /// Message size in bytes; 0 for key-setup rows.
    pub message_size: usize,
    pub iterations: u32,
    pub median_ns: u64,
    pub min_ns: u64,
    pub max_ns: u64,
}

/// The full report: the grid plus any environment warnings.
#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub results: Vec<BenchResult>,
    pub warnings: Vec<String>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("sizes list is empty")]
    NoSizes,
    #[error("message size {0} is not a positive multiple of 8")]
    BadSize(usize),
    #[error("iterations must be at least 1")]
    NoIterations,
}

/// Previously reported execution times (nanoseconds) for this experiment,
/// by (algorithm, operation, size). Reference only: absolute values are
/// machine- and runtime-bound.
pub const REFERENCE_NS: [(Algorithm, Operation, usize, u64); 12] = [
    (Algorithm::Aes128, Operation::Encrypt, 128, 6_383_481),
    (Algorithm::Aes128, Operation::Encrypt, 256, 7_166_724),
    (Algorithm::Aes128, Operation::Encrypt, 512, 8_684_963),
    (Algorithm::Aes128, Operation::Decrypt, 128, 2_032_531),
    (Algorithm::Aes128, Operation::Decrypt, 256, 2_975_913),
    (Algorithm::Aes128, Operation::Decrypt, 512, 5_500_665),
    (Algorithm::Blowfish, Operation::Encrypt, 128, 16_396_774),
    (Algorithm::Blowfish, Operation::Encrypt, 256, 18_365_661),
    (Algorithm::Blowfish, Operation::Encrypt, 512, 15_570_931),
    (Algorithm::Blowfish, Operation::Decrypt, 128, 954_160),
    (Algorithm::Blowfish, Operation::Decrypt, 256, 1_023_451),
    (Algorithm::Blowfish, Operation::Decrypt, 512, 1_124_051),
];

fn reference_for(algorithm: Algorithm, operation: Operation, size: usize) -> Option<u64> {
    REFERENCE_NS
        .iter()
        .find(|(a, o, s, _)| *a == algorithm && *o == operation && *s == size)
        .map(|(_, _, _, ns)| *ns)
}

fn median_min_max(mut samples: Vec<u64>) -> (u64, u64, u64) {
    samples.sort_unstable();
    let median = samples[samples.len() / 2];
    (median, samples[0], *samples.last().unwrap())
}

fn sample_loop(iterations: u32, mut f: impl FnMut()) -> Vec<u64> {
    // Warm-up pass.
    for _ in 0..(iterations / 10).clamp(1, 1000) {
        f();
    }
    let mut samples = Vec::with_capacity(iterations as usize);
    for _ in 0..iterations {
        let t0 = Instant::now();
        f();
        samples.push(t0.elapsed().as_nanos() as u64);
    }
    samples
}

/// Smallest nonzero step the monotonic clock can resolve, estimated by
/// spinning until it advances.
fn clock_resolution_ns() -> u64 {
    let mut best = u64::MAX;
    for _ in 0..32 {
        let t0 = Instant::now();
        let mut delta = 0u64;
        while delta == 0 {
            delta = t0.elapsed().as_nanos() as u64;
        }
        best = best.min(delta);
    }
    best
}

/// Runs every grid cell (per-size encrypt/decrypt for both ciphers, then
/// one key-setup cell per cipher) and hands the raw nanosecond samples to
/// `emit`. Shared measurement core of [`run_bench`] and
/// [`run_bench_paired`].
fn grid_walk(
    sizes: &[usize],
    iterations: u32,
    setup_iterations: u32,
    mut emit: impl FnMut(Algorithm, Operation, usize, Vec<u64>),
) -> Result<Vec<String>, BenchError> {
    if sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    if iterations == 0 {
        return Err(BenchError::NoIterations);
    }
    for &s in sizes {
        if s == 0 || s % 8 != 0 {
            return Err(BenchError::BadSize(s));
        }
    }

    let mut warnings = Vec::new();
    let resolution = clock_resolution_ns();
    if resolution > 1_000 {
        warnings.push(format!(
            "monotonic clock resolution is {resolution} ns (coarser than 1 us); \
             per-iteration timings may be quantized"
        ));
    }

    let aes_key = [0x42u8; 16];
    let bf_key = [0x42u8; 16];

    for &size in sizes {
        let message: Vec<u8> = (0..size).map(|i| (i * 31 + 7) as u8).collect();

        // AES-128, ECB over the padded message.
        let aes = Aes128::new(&aes_key);
        let padded_len = size.div_ceil(16) * 16;
        let mut padded = message.clone();
        padded.resize(padded_len, 0);

        let samples = sample_loop(iterations, || {
            let mut out = Vec::with_capacity(padded_len);
            for chunk in padded.chunks_exact(16) {
                out.extend_from_slice(&aes.encrypt_block(chunk.try_into().unwrap()));
            }
            std::hint::black_box(out);
        });
        emit(Algorithm::Aes128, Operation::Encrypt, size, samples);

        let mut aes_ct = Vec::with_capacity(padded_len);
        for chunk in padded.chunks_exact(16) {
            aes_ct.extend_from_slice(&aes.encrypt_block(chunk.try_into().unwrap()));
        }
        let samples = sample_loop(iterations, || {
            let mut out = Vec::with_capacity(padded_len);
            for chunk in aes_ct.chunks_exact(16) {
                out.extend_from_slice(&aes.decrypt_block(chunk.try_into().unwrap()));
            }
            std::hint::black_box(out);
        });
        emit(Algorithm::Aes128, Operation::Decrypt, size, samples);

        // Blowfish ECB; sizes are already block-aligned.
        let bf = Blowfish::new(&bf_key).expect("16-byte key is legal");
        let samples = sample_loop(iterations, || {
            let mut out = Vec::with_capacity(size);
            for chunk in message.chunks_exact(8) {
                out.extend_from_slice(&bf.encrypt_block(chunk.try_into().unwrap()));
            }
            std::hint::black_box(out);
        });
        emit(Algorithm::Blowfish, Operation::Encrypt, size, samples);

        let mut bf_ct = Vec::with_capacity(size);
        for chunk in message.chunks_exact(8) {
            bf_ct.extend_from_slice(&bf.encrypt_block(chunk.try_into().unwrap()));
        }
        let samples = sample_loop(iterations, || {
            let mut out = Vec::with_capacity(size);
            for chunk in bf_ct.chunks_exact(8) {
                out.extend_from_slice(&bf.decrypt_block(chunk.try_into().unwrap()));
            }
            std::hint::black_box(out);
        });
        emit(Algorithm::Blowfish, Operation::Decrypt, size, samples);
    }

    // Key setup, timed apart from per-message work: Blowfish regenerates
    // its entire subkey state per key, which is the classic explanation of
    // its slow-encrypt/fast-decrypt pattern on short-lived keys.
    let samples = sample_loop(setup_iterations, || {
        std::hint::black_box(Aes128::new(&aes_key));
    });
    emit(Algorithm::Aes128, Operation::KeySetup, 0, samples);
    let samples = sample_loop(setup_iterations, || {
        std::hint::black_box(Blowfish::new(&bf_key).expect("legal key"));
    });
    emit(Algorithm::Blowfish, Operation::KeySetup, 0, samples);

    Ok(warnings)
}

/// Times encryption/decryption of messages of each size with both ciphers,
/// plus one key-setup row per cipher. Message sizes must be positive
/// multiples of 8 (the Blowfish block); AES pads to its 16-byte block
/// internally.
pub fn run_bench(sizes: &[usize], iterations: u32) -> Result<BenchReport, BenchError> {
    let mut report = BenchReport::default();
    let setup_iterations = iterations.min(2_000);
    report.warnings = grid_walk(
        sizes,
        iterations,
        setup_iterations,
        |algorithm, operation, message_size, samples| {
            let count = samples.len() as u32;
            let (median, min, max) = median_min_max(samples);
            report.results.push(BenchResult {
                algorithm,
                operation,
                message_size,
                iterations: count,
                median_ns: median,
                min_ns: min,
                max_ns: max,
            });
        },
    )?;
    Ok(report)
}

/// Two complete measurement runs of `iterations` samples per cell whose
/// executions interleave in time, for run-to-run stability checks. On
/// shared hardware, sequential runs compare two different machine moods;
/// interleaved runs compare the measurement process itself.
pub fn run_bench_paired(
    sizes: &[usize],
    iterations: u32,
) -> Result<(BenchReport, BenchReport), BenchError> {
    let mut first = BenchReport::default();
    let mut second = BenchReport::default();
    let setup_iterations = iterations.min(2_000);
    let warnings = grid_walk(
        sizes,
        iterations.checked_mul(2).ok_or(BenchError::NoIterations)?,
        setup_iterations * 2,
        |algorithm, operation, message_size, samples| {
            // Alternate samples between the two runs.
            let mut a = Vec::with_capacity(samples.len() / 2);
            let mut b = Vec::with_capacity(samples.len() / 2);
            for (i, sample) in samples.into_iter().enumerate() {
                if i % 2 == 0 {
                    a.push(sample);
                } else {
                    b.push(sample);
                }
            }
            for (report, samples) in [(&mut first, a), (&mut second, b)] {
                let count = samples.len() as u32;
                let (median, min, max) = median_min_max(samples);
                report.results.push(BenchResult {
                    algorithm,
                    operation,
                    message_size,
                    iterations: count,
                    median_ns: median,
                    min_ns: min,
                    max_ns: max,
                });
            }
        },
    )?;
    first.warnings = warnings.clone();
    second.warnings = warnings;
    Ok((first, second))
}

/// Comparison-grid rows only (no key-setup), the documented CSV shape.
pub fn grid_rows(report: &BenchReport) -> Vec<&BenchResult> {
    report
        .results
        .iter()
        .filter(|r| r.operation != Operation::KeySetup)
        .collect()
}

/// Renders the CSV: exactly `algorithm,operation,size,iterations,median_ns,
/// min_ns,max_ns`, one row per grid cell. Key-setup rows are appended only
/// when `include_setup` is set.
pub fn emit_csv(report: &BenchReport, include_setup: bool) -> String {
    let mut out = String::from("algorithm,operation,size,iterations,median_ns,min_ns,max_ns\n");
    for r in &report.results {
        if r.operation == Operation::KeySetup && !include_setup {
            continue;
        }
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.algorithm.as_str(),
            r.operation.as_str(),
            r.message_size,
            r.iterations,
            r.median_ns,
            r.min_ns,
            r.max_ns
        ));
    }
    out
}

/// Renders the human-readable table, measured timings next to the published
/// reference figures.
pub fn emit_table(report: &BenchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:<10} {:>6} {:>12} {:>12} {:>12} {:>14}\n",
        "algorithm", "operation", "size", "median_ns", "min_ns", "max_ns", "reference_ns"
    ));
    for r in &report.results {
        let reference = reference_for(r.algorithm, r.operation, r.message_size)
            .map(|ns| ns.to_string())
            .unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(
            "{:<10} {:<10} {:>6} {:>12} {:>12} {:>12} {:>14}\n",
            r.algorithm.as_str(),
            r.operation.as_str(),
            r.message_size,
            r.median_ns,
            r.min_ns,
            r.max_ns,
            reference
        ));
    }
    for warning in &report.warnings {
        out.push_str(&format!("warning: {warning}\n"));
    }
    out.push_str(
        "reference_ns column: figures reported for this experiment on 2012-era \
         hardware and runtime; shown for comparison, not as targets.\n",
    );
    out
}
