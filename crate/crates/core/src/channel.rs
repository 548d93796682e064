//! Rayleigh flat fading plus AWGN.
//!
//! Each transmitted symbol x is turned into `y = h * x + n` with one complex
//! gain h per symbol and circular Gaussian noise n. The gain is recorded next
//! to the received sample ([`FadedSample`]), which makes the perfect-CSI
//! assumption explicit: [`equalize`] divides it back out before hard
//! demodulation.
//!
//! Two fading generators are provided:
//!
//! * `Correlated`: Gaussian-weighted sum of sinusoids with [`NUM_OSCILLATORS`]
//!   tones. Each tone gets a complex Gaussian amplitude, a Doppler frequency
//!   `fd*cos(theta)` with random angle of arrival and a random phase. The I/Q
//!   components are then exactly Gaussian at every instant (so |h| is exactly
//!   Rayleigh) and the autocorrelation follows the Clarke/Jakes shape set by
//!   the normalized Doppler fd*Ts.
//! * `Independent`: i.i.d. circular Gaussian gain per symbol, the
//!   configuration the closed-form Rayleigh BER references assume.
//!
//! Both are normalized to E[|h|^2] = 1. Everything is driven by the config
//! seed, so a given [`ChannelConfig`] always reproduces the same sample path.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::{Error, Result};

/// How the per-symbol channel gain evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingMode {
    /// Time-correlated Jakes-style fading with maximum Doppler fd*Ts.
    Correlated,
    /// Independent gain per symbol (no memory).
    Independent,
}

impl FadingMode {
    pub fn label(self) -> &'static str {
        match self {
            FadingMode::Correlated => "correlated",
            FadingMode::Independent => "independent",
        }
    }
}

/// One simulated operating point of the channel.
#[derive(Debug, Clone)]
pub struct ChannelConfig {
    /// Energy per information bit over noise density, in dB.
    pub ebn0_db: f64,
    /// Normalized maximum Doppler shift fd*Ts (cycles per symbol).
    pub doppler_fdts: f64,
    pub fading_mode: FadingMode,
    /// Fully determines the gain and noise sample paths.
    pub seed: u64,
}

impl ChannelConfig {
    fn validate(&self) -> Result<()> {
        if self.fading_mode == FadingMode::Correlated
            && (self.doppler_fdts.is_nan() || self.doppler_fdts <= 0.0)
        {
            return Err(Error::InvalidChannel(format!(
                "correlated fading requires doppler_fdts > 0, got {}",
                self.doppler_fdts
            )));
        }
        Ok(())
    }
}

/// Received sample plus the gain that produced it (perfect CSI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadedSample {
    pub received: Complex<f64>,
    pub gain: Complex<f64>,
}

/// Output of [`equalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Equalized {
    pub symbols: Vec<Complex<f64>>,
    /// Symbols whose gain was exactly zero; passed through unequalized.
    pub zero_gain_skips: usize,
}

/// Oscillator count for the sum-of-sinusoids generator.
pub const NUM_OSCILLATORS: usize = 32;

/// Streaming fading gain generator.
///
/// In correlated mode the oscillator bank is drawn once from `rng` at
/// construction and then advances with no further randomness; in independent
/// mode every gain is drawn from the rng passed to [`Fader::next_gain`].
#[derive(Debug, Clone)]
pub struct Fader {
    mode: FadingMode,
    // per-oscillator complex amplitude, current phasor and per-step rotation
    amplitudes: Vec<Complex<f64>>,
    phasors: Vec<Complex<f64>>,
    rotations: Vec<Complex<f64>>,
    scale: f64,
    steps_since_renorm: u32,
}

impl Fader {
    pub fn new(mode: FadingMode, doppler_fdts: f64, rng: &mut ChaCha8Rng) -> Result<Fader> {
        match mode {
            FadingMode::Independent => Ok(Fader {
                mode,
                amplitudes: Vec::new(),
                phasors: Vec::new(),
                rotations: Vec::new(),
                scale: 0.0,
                steps_since_renorm: 0,
            }),
            FadingMode::Correlated => {
                if doppler_fdts.is_nan() || doppler_fdts <= 0.0 {
                    return Err(Error::InvalidChannel(format!(
                        "correlated fading requires doppler_fdts > 0, got {doppler_fdts}"
                    )));
                }
                let normal = Normal::new(0.0, 1.0).expect("unit normal");
                let angle = Uniform::new(-std::f64::consts::PI, std::f64::consts::PI);
                let phase = Uniform::new(0.0, 2.0 * std::f64::consts::PI);
                let mut amplitudes = Vec::with_capacity(NUM_OSCILLATORS);
                let mut phasors = Vec::with_capacity(NUM_OSCILLATORS);
                let mut rotations = Vec::with_capacity(NUM_OSCILLATORS);
                for _ in 0..NUM_OSCILLATORS {
                    amplitudes.push(Complex::new(normal.sample(rng), normal.sample(rng)));
                    let freq = doppler_fdts * angle.sample(rng).cos();
                    phasors.push(Complex::from_polar(1.0, phase.sample(rng)));
                    rotations.push(Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * freq));
                }
                // E[|amplitude|^2] = 2 per oscillator, so 1/sqrt(2N) gives
                // E[|h|^2] = 1.
                let scale = (2.0 * NUM_OSCILLATORS as f64).sqrt().recip();
                Ok(Fader { mode, amplitudes, phasors, rotations, scale, steps_since_renorm: 0 })
            }
        }
    }

    /// Produces the gain for the next symbol.
    pub fn next_gain(&mut self, rng: &mut ChaCha8Rng) -> Complex<f64> {
        match self.mode {
            FadingMode::Independent => {
                let normal = Normal::new(0.0, (0.5_f64).sqrt()).expect("normal");
                Complex::new(normal.sample(rng), normal.sample(rng))
            }
            FadingMode::Correlated => {
                let mut h = Complex::new(0.0, 0.0);
                for ((a, p), r) in
                    self.amplitudes.iter().zip(self.phasors.iter_mut()).zip(&self.rotations)
                {
                    h += a * *p;
                    *p *= r;
                }
                self.steps_since_renorm += 1;
                // Phasors drift off the unit circle by ~1 ulp per rotation;
                // pull them back periodically.
                if self.steps_since_renorm >= 65_536 {
                    for p in &mut self.phasors {
                        *p /= p.norm();
                    }
                    self.steps_since_renorm = 0;
                }
                h * self.scale
            }
        }
    }
}

/// Splits one seed into decorrelated stream seeds (splitmix64 step).
pub(crate) fn derive_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Salt for the gain stream rng.
const GAIN_STREAM: u64 = 1;
/// Salt for the noise stream rng.
const NOISE_STREAM: u64 = 2;

/// Generates `count` fading gains for the configured process.
pub fn fading_process(config: &ChannelConfig, count: usize) -> Result<Vec<Complex<f64>>> {
    config.validate()?;
    if count == 0 {
        return Err(Error::InvalidChannel("fading_process requires count >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, GAIN_STREAM));
    let mut fader = Fader::new(config.fading_mode, config.doppler_fdts, &mut rng)?;
    Ok((0..count).map(|_| fader.next_gain(&mut rng)).collect())
}

/// Applies fading and additive noise: `y_i = h_i * x_i + n_i` with the gains
/// drawn exactly as [`fading_process`] would for the same config.
pub fn apply_channel(
    config: &ChannelConfig,
    symbols: &[Complex<f64>],
    sigma: f64,
) -> Result<Vec<FadedSample>> {
    config.validate()?;
    if sigma < 0.0 {
        return Err(Error::InvalidChannel(format!("noise sigma must be >= 0, got {sigma}")));
    }
    let mut gain_rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, GAIN_STREAM));
    let mut noise_rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, NOISE_STREAM));
    let mut fader = Fader::new(config.fading_mode, config.doppler_fdts, &mut gain_rng)?;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    Ok(symbols
        .iter()
        .map(|&x| {
            let gain = fader.next_gain(&mut gain_rng);
            let noise =
                Complex::new(normal.sample(&mut noise_rng), normal.sample(&mut noise_rng)) * sigma;
            FadedSample { received: gain * x + noise, gain }
        })
        .collect())
}

/// Coherent zero-forcing equalization with perfect CSI: `y_i / h_i`.
///
/// A gain of exactly zero (a probability-zero event, guarded anyway) passes
/// the sample through untouched and is counted in `zero_gain_skips`.
pub fn equalize(faded: &[FadedSample]) -> Equalized {
    let mut zero_gain_skips = 0usize;
    let symbols = faded
        .iter()
        .map(|s| {
            if s.gain.norm_sqr() == 0.0 {
                zero_gain_skips += 1;
                s.received
            } else {
                s.received / s.gain
            }
        })
        .collect();
    Equalized { symbols, zero_gain_skips }
}
