//! Forward error correction over GF(2^m) and a link-level BER simulator.
//!
//! The crate has two halves:
//!
//! * Block codecs: [`gf`] provides GF(2^m) arithmetic and polynomials,
//!   [`rs`] a systematic Reed-Solomon encoder/decoder and [`bch`] a binary
//!   narrow-sense BCH encoder/decoder built on the same field machinery.
//! * Link simulation: [`modem`] maps bits to BPSK/16-QAM symbols, [`channel`]
//!   applies Rayleigh flat fading plus AWGN, and [`ber`] drives seeded
//!   end-to-end Monte Carlo sweeps over Eb/N0.
//!
//! Everything downstream of a seed is deterministic: a sweep re-run with the
//! same configuration produces bit-identical counts regardless of how many
//! worker threads execute it.

pub mod bch;
pub mod ber;
pub mod channel;
pub mod gf;
pub mod modem;
pub mod rs;

pub use bch::{BchCode, BchDecodeOutcome};
pub use ber::{BerRecord, CodeSelect, ExperimentSpec, StopRule};
pub use channel::{ChannelConfig, FadedSample, FadingMode};
pub use gf::{Field, GfElem, Poly};
pub use modem::ModScheme;
pub use rs::{RsCode, RsDecodeOutcome};

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Field construction rejected the reduction polynomial.
    #[error("polynomial {poly:#x} is not primitive over GF(2) for m = {m}")]
    NotPrimitive { m: u32, poly: u32 },
    /// Field construction parameter out of range.
    #[error("invalid field parameter: {0}")]
    InvalidField(String),
    /// Multiplicative inverse or division requested for zero.
    #[error("division by zero in GF(2^m)")]
    DivisionByZero,
    /// Division by the zero polynomial.
    #[error("division by zero polynomial")]
    ZeroPolyDivisor,
    /// Code parameters violate a construction constraint.
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    /// Input block has the wrong number of symbols or bits.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// Bit vector length is not a multiple of bits-per-symbol.
    #[error("bit count {bits} is not divisible by {bits_per_symbol} bits per symbol")]
    BitsNotDivisible { bits: usize, bits_per_symbol: usize },
    /// Code rate outside (0, 1].
    #[error("code rate must be in (0, 1], got {0}")]
    InvalidRate(f64),
    /// Channel configuration rejected.
    #[error("invalid channel configuration: {0}")]
    InvalidChannel(String),
    /// Experiment configuration rejected.
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Outcome classification shared by both block decoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// Received word was already a codeword.
    Clean,
    /// Errors were located and corrected; the re-syndrome check passed.
    Corrected,
    /// More errors than the code can correct were detected. The outcome still
    /// carries the best-effort message (the received systematic part).
    Failure,
}
