//! Seeded end-to-end Monte Carlo BER sweeps.
//!
//! One [`ExperimentSpec`] describes a single curve: a code, a modulation, an
//! Eb/N0 grid and a channel template. [`run_sweep`] produces one
//! [`BerRecord`] per grid point by pushing blocks of random information bits
//! through encode -> modulate -> fade+noise -> equalize -> demodulate ->
//! decode and comparing decoded information bits against what was sent.
//!
//! # Determinism
//!
//! Work is scheduled in fixed-size batches of blocks. Batch b of grid point
//! p draws every random quantity from seeds derived as
//! `(master seed, point index, batch index)`, and batches are aggregated in
//! index order wave by wave, so the resulting counts are a pure function of
//! the [`ExperimentSpec`] no matter how many rayon workers execute the
//! batches. The stop rule is evaluated between waves: a point ends once it
//! has accumulated `min_bit_errors` (checked after each wave) or generated
//! `max_info_bits` information bits (enforced through the batch budget).
//!
//! Fading is continuous within a batch and independent across batches, so a
//! batch is also the unit of fading ensemble sampling. At slow Doppler
//! (fd*Ts around 1e-4) a whole batch sits inside roughly one fade coherence
//! time, which preserves the fades-hit-whole-blocks regime while the
//! ensemble over batches restores the Rayleigh marginal.

use rayon::prelude::*;

use crate::bch::BchCode;
use crate::channel::{apply_channel, derive_seed, equalize, ChannelConfig, FadingMode};
use crate::gf::GfElem;
use crate::modem::{demodulate, ebn0_to_noise_sigma, modulate, ModScheme};
use crate::rs::RsCode;
use crate::{Error, Result};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Code family and parameters for one experiment curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSelect {
    Rs { m: u32, n: usize, k: usize },
    Bch { m: u32, t: usize },
}

/// Stopping rule for each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    /// Keep simulating until at least this many information-bit errors.
    pub min_bit_errors: u64,
    /// ... unless this many information bits have been generated first
    /// (rounded up to whole batches).
    pub max_info_bits: u64,
}

impl Default for StopRule {
    fn default() -> StopRule {
        StopRule { min_bit_errors: 200, max_info_bits: 10_000_000 }
    }
}

/// One Monte Carlo curve: code x modulation over an Eb/N0 grid.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub code: CodeSelect,
    pub modulation: ModScheme,
    /// Eb/N0 grid in dB; swept in ascending order.
    pub ebn0_points: Vec<f64>,
    pub doppler_fdts: f64,
    pub fading_mode: FadingMode,
    /// Master seed; every random draw in the sweep derives from it.
    pub seed: u64,
    pub stop: StopRule,
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub ebn0_db: f64,
    /// Code label, e.g. "RS(15,11)".
    pub code: String,
    /// Modulation label, e.g. "BPSK".
    pub modulation: String,
    pub info_bits_sent: u64,
    pub bit_errors: u64,
    /// bit_errors / info_bits_sent.
    pub ber: f64,
    /// Master seed the sweep ran under.
    pub seed: u64,
}

/// Blocks per batch; a batch is the atomic deterministic work unit and the
/// fading-continuity unit, so small batches mean more independent fade
/// realizations per wave. Kept a multiple of four so any n-bit block length
/// aligns with 4-bit QAM symbols.
const BLOCKS_PER_BATCH: u64 = 16;
/// Batches launched per scheduling wave.
const BATCHES_PER_WAVE: u64 = 256;

/// Stream salt for message-bit generation (channel streams use 1 and 2).
const DATA_STREAM: u64 = 3;

enum Codec {
    Rs(RsCode),
    Bch(BchCode),
}

impl Codec {
    fn build(select: &CodeSelect) -> Result<Codec> {
        match *select {
            CodeSelect::Rs { m, n, k } => Ok(Codec::Rs(RsCode::new(m, n, k)?)),
            CodeSelect::Bch { m, t } => Ok(Codec::Bch(BchCode::new(m, t)?)),
        }
    }

    fn label(&self) -> String {
        match self {
            Codec::Rs(c) => format!("RS({},{})", c.n(), c.k()),
            Codec::Bch(c) => format!("BCH({},{})", c.n(), c.k()),
        }
    }

    fn info_bits_per_block(&self) -> u64 {
        match self {
            Codec::Rs(c) => (c.k() as u32 * c.field().m()) as u64,
            Codec::Bch(c) => c.k() as u64,
        }
    }

    fn coded_bits_per_block(&self) -> u64 {
        match self {
            Codec::Rs(c) => (c.n() as u32 * c.field().m()) as u64,
            Codec::Bch(c) => c.n() as u64,
        }
    }
}

/// Message payload of one block, kept for post-decode comparison.
enum TxBlock {
    Rs(Vec<GfElem>),
    Bch(Vec<u8>),
}

/// Serializes field symbols to bits, MSB first within each symbol.
fn symbols_to_bits(symbols: &[GfElem], m: u32, out: &mut Vec<u8>) {
    for s in symbols {
        for i in (0..m).rev() {
            out.push(((s.value() >> i) & 1) as u8);
        }
    }
}

/// Packs bits back into field symbols, MSB first within each symbol.
fn bits_to_symbols(bits: &[u8], m: u32) -> Vec<GfElem> {
    bits.chunks_exact(m as usize)
        .map(|chunk| GfElem(chunk.iter().fold(0u16, |acc, &b| (acc << 1) | b as u16)))
        .collect()
}

struct BatchResult {
    info_bits: u64,
    bit_errors: u64,
}

/// Runs `num_blocks` blocks end to end under one derived seed.
fn run_batch(
    codec: &Codec,
    spec: &ExperimentSpec,
    sigma: f64,
    ebn0_db: f64,
    batch_seed: u64,
    num_blocks: u64,
) -> Result<BatchResult> {
    let mut data_rng = ChaCha8Rng::seed_from_u64(derive_seed(batch_seed, DATA_STREAM));

    // Draw all messages, encode, and concatenate the coded bits so the whole
    // batch passes through the channel as one continuous symbol stream.
    let coded_bits = (num_blocks * codec.coded_bits_per_block()) as usize;
    let mut tx_blocks = Vec::with_capacity(num_blocks as usize);
    let mut tx_bits = Vec::with_capacity(coded_bits);
    for _ in 0..num_blocks {
        match codec {
            Codec::Rs(code) => {
                let order = code.field().order() as u16;
                let msg: Vec<GfElem> =
                    (0..code.k()).map(|_| GfElem(data_rng.gen_range(0..order))).collect();
                let codeword = code.encode(&msg)?;
                symbols_to_bits(&codeword, code.field().m(), &mut tx_bits);
                tx_blocks.push(TxBlock::Rs(msg));
            }
            Codec::Bch(code) => {
                let msg: Vec<u8> = (0..code.k()).map(|_| data_rng.gen_range(0..2u8)).collect();
                let codeword = code.encode(&msg)?;
                tx_bits.extend_from_slice(&codeword);
                tx_blocks.push(TxBlock::Bch(msg));
            }
        }
    }

    let symbols = modulate(spec.modulation, &tx_bits)?;
    let channel_config = ChannelConfig {
        ebn0_db,
        doppler_fdts: spec.doppler_fdts,
        fading_mode: spec.fading_mode,
        seed: batch_seed,
    };
    let faded = apply_channel(&channel_config, &symbols, sigma)?;
    let rx_bits = demodulate(spec.modulation, &equalize(&faded).symbols);

    // Split back into blocks, decode, count information-bit differences.
    let block_bits = codec.coded_bits_per_block() as usize;
    let mut bit_errors = 0u64;
    for (tx, rx_block) in tx_blocks.iter().zip(rx_bits.chunks_exact(block_bits)) {
        match (codec, tx) {
            (Codec::Rs(code), TxBlock::Rs(msg)) => {
                let received = bits_to_symbols(rx_block, code.field().m());
                let outcome = code.decode(&received)?;
                bit_errors += msg
                    .iter()
                    .zip(&outcome.message)
                    .map(|(&a, &b)| (a.value() ^ b.value()).count_ones() as u64)
                    .sum::<u64>();
            }
            (Codec::Bch(code), TxBlock::Bch(msg)) => {
                let outcome = code.decode(rx_block)?;
                bit_errors +=
                    msg.iter().zip(&outcome.message).filter(|(&a, &b)| a != b).count() as u64;
            }
            _ => unreachable!("codec and block kind always match"),
        }
    }

    Ok(BatchResult { info_bits: num_blocks * codec.info_bits_per_block(), bit_errors })
}

fn validate(spec: &ExperimentSpec) -> Result<()> {
    if spec.ebn0_points.is_empty() {
        return Err(Error::InvalidExperiment("ebn0_points must be nonempty".into()));
    }
    if spec.ebn0_points.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidExperiment("ebn0_points must be finite".into()));
    }
    if spec.stop.max_info_bits == 0 {
        return Err(Error::InvalidExperiment("max_info_bits must be positive".into()));
    }
    if spec.fading_mode == FadingMode::Correlated
        && (spec.doppler_fdts.is_nan() || spec.doppler_fdts <= 0.0)
    {
        return Err(Error::InvalidExperiment(format!(
            "correlated fading requires doppler_fdts > 0, got {}",
            spec.doppler_fdts
        )));
    }
    Ok(())
}

/// Simulates one Eb/N0 grid point.
///
/// `point_index` seeds the derivation chain; [`run_sweep`] passes the index
/// of the point in the ascending grid.
fn run_point_indexed(spec: &ExperimentSpec, ebn0_db: f64, point_index: u64) -> Result<BerRecord> {
    let codec = Codec::build(&spec.code)?;
    let k_bits = codec.info_bits_per_block();
    let rate = k_bits as f64 / codec.coded_bits_per_block() as f64;
    let sigma = ebn0_to_noise_sigma(ebn0_db, spec.modulation, rate)?;

    let max_blocks = spec.stop.max_info_bits.div_ceil(k_bits);
    let max_batches = max_blocks.div_ceil(BLOCKS_PER_BATCH).max(1);
    let point_seed = derive_seed(spec.seed, point_index);

    let mut info_bits_sent = 0u64;
    let mut bit_errors = 0u64;
    let mut next_batch = 0u64;
    while next_batch < max_batches {
        let wave_end = (next_batch + BATCHES_PER_WAVE).min(max_batches);
        let results: Vec<Result<BatchResult>> = (next_batch..wave_end)
            .into_par_iter()
            .map(|batch_index| {
                run_batch(
                    &codec,
                    spec,
                    sigma,
                    ebn0_db,
                    derive_seed(point_seed, batch_index),
                    BLOCKS_PER_BATCH,
                )
            })
            .collect();
        for result in results {
            let batch = result?;
            info_bits_sent += batch.info_bits;
            bit_errors += batch.bit_errors;
        }
        next_batch = wave_end;
        if bit_errors >= spec.stop.min_bit_errors {
            break;
        }
    }

    Ok(BerRecord {
        ebn0_db,
        code: codec.label(),
        modulation: spec.modulation.label().to_string(),
        info_bits_sent,
        bit_errors,
        ber: bit_errors as f64 / info_bits_sent as f64,
        seed: spec.seed,
    })
}

/// Simulates a single Eb/N0 point (a one-point sweep).
pub fn run_point(spec: &ExperimentSpec, ebn0_db: f64) -> Result<BerRecord> {
    validate(spec)?;
    let mut points = spec.ebn0_points.clone();
    points.sort_by(f64::total_cmp);
    let point_index = points
        .iter()
        .position(|&e| e == ebn0_db)
        .ok_or_else(|| Error::InvalidExperiment(format!("{ebn0_db} dB is not a grid point")))?;
    run_point_indexed(spec, ebn0_db, point_index as u64)
}

/// Runs every grid point in ascending Eb/N0 order.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<BerRecord>> {
    validate(spec)?;
    let mut points = spec.ebn0_points.clone();
    points.sort_by(f64::total_cmp);
    points.iter().enumerate().map(|(i, &ebn0)| run_point_indexed(spec, ebn0, i as u64)).collect()
}

/// 95% Wilson score interval on the error proportion of a record.
pub fn confidence_interval(record: &BerRecord) -> (f64, f64) {
    assert!(record.info_bits_sent > 0, "confidence interval needs at least one bit");
    let z = 1.959963984540054_f64;
    let n = record.info_bits_sent as f64;
    let p = record.ber;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
