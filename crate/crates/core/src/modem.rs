//! Bit-to-symbol mapping for BPSK and Gray-coded 16-QAM.
//!
//! Both constellations are normalized to unit average symbol energy, so
//! Eb/N0 bookkeeping reduces to [`ebn0_to_noise_sigma`]. Demodulation is a
//! hard decision to the nearest constellation point; ties break toward the
//! lexicographically smallest bit label.

use num_complex::Complex;

use crate::{Error, Result};

/// Modulation scheme. `Bpsk` maps one bit per symbol onto the real axis;
/// `Qam16` maps four bits per symbol onto the Gray-labeled {±1, ±3}/√10 grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModScheme {
    Bpsk,
    Qam16,
}

/// 2-bit Gray code per axis, pair value -> amplitude level:
/// 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3. Adjacent levels differ in one bit.
const GRAY_LEVELS: [f64; 4] = [-3.0, -1.0, 3.0, 1.0];

/// 1/sqrt(10): scales the {±1, ±3} grid to unit average energy.
fn qam16_scale() -> f64 {
    10.0_f64.sqrt().recip()
}

impl ModScheme {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            ModScheme::Bpsk => 1,
            ModScheme::Qam16 => 4,
        }
    }

    /// Column label used in result records and CSV output.
    pub fn label(self) -> &'static str {
        match self {
            ModScheme::Bpsk => "BPSK",
            ModScheme::Qam16 => "QAM16",
        }
    }

    /// Constellation point for a bit label (0..2^bits_per_symbol), with the
    /// label read MSB-first from the bit stream.
    pub fn point(self, label: u16) -> Complex<f64> {
        match self {
            ModScheme::Bpsk => {
                debug_assert!(label < 2);
                Complex::new(1.0 - 2.0 * label as f64, 0.0)
            }
            ModScheme::Qam16 => {
                debug_assert!(label < 16);
                let scale = qam16_scale();
                let i = GRAY_LEVELS[(label >> 2) as usize] * scale;
                let q = GRAY_LEVELS[(label & 0b11) as usize] * scale;
                Complex::new(i, q)
            }
        }
    }

    /// Number of constellation points.
    pub fn constellation_size(self) -> u16 {
        1 << self.bits_per_symbol()
    }
}

/// Maps bits (values 0/1) to channel symbols. The bit count must be an exact
/// multiple of bits-per-symbol; nothing is ever silently padded.
pub fn modulate(scheme: ModScheme, bits: &[u8]) -> Result<Vec<Complex<f64>>> {
    let bps = scheme.bits_per_symbol();
    if !bits.len().is_multiple_of(bps) {
        return Err(Error::BitsNotDivisible { bits: bits.len(), bits_per_symbol: bps });
    }
    debug_assert!(bits.iter().all(|&b| b <= 1));
    Ok(bits
        .chunks_exact(bps)
        .map(|group| {
            let label = group.iter().fold(0u16, |acc, &b| (acc << 1) | b as u16);
            scheme.point(label)
        })
        .collect())
}

/// Hard-decision demodulation: nearest constellation point by Euclidean
/// distance, scanning labels in ascending order so ties resolve to the
/// lexicographically smallest bit label.
pub fn demodulate(scheme: ModScheme, samples: &[Complex<f64>]) -> Vec<u8> {
    let bps = scheme.bits_per_symbol();
    let mut bits = Vec::with_capacity(samples.len() * bps);
    for &y in samples {
        let mut best_label = 0u16;
        let mut best_dist = f64::INFINITY;
        for label in 0..scheme.constellation_size() {
            let d = (y - scheme.point(label)).norm_sqr();
            if d < best_dist {
                best_dist = d;
                best_label = label;
            }
        }
        for i in (0..bps).rev() {
            bits.push(((best_label >> i) & 1) as u8);
        }
    }
    bits
}

/// Per-component noise standard deviation for a target Eb/N0.
///
/// With unit symbol energy, `Es/N0 = (Eb/N0) * bits_per_symbol * code_rate`
/// (Eb is energy per information bit), `N0 = 1 / (Es/N0)` and each noise
/// component has variance N0/2.
pub fn ebn0_to_noise_sigma(ebn0_db: f64, scheme: ModScheme, code_rate: f64) -> Result<f64> {
    if !(code_rate > 0.0 && code_rate <= 1.0) {
        return Err(Error::InvalidRate(code_rate));
    }
    let ebn0 = 10.0_f64.powf(ebn0_db / 10.0);
    let esn0 = ebn0 * scheme.bits_per_symbol() as f64 * code_rate;
    Ok((1.0 / (2.0 * esn0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bpsk_sign_convention() {
        assert_eq!(modulate(ModScheme::Bpsk, &[0]).unwrap(), vec![Complex::new(1.0, 0.0)]);
        assert_eq!(modulate(ModScheme::Bpsk, &[1]).unwrap(), vec![Complex::new(-1.0, 0.0)]);
    }

    #[test]
    fn constellations_have_unit_average_energy() {
        for scheme in [ModScheme::Bpsk, ModScheme::Qam16] {
            let size = scheme.constellation_size();
            let mean: f64 =
                (0..size).map(|l| scheme.point(l).norm_sqr()).sum::<f64>() / size as f64;
            assert!((mean - 1.0).abs() < 1e-12, "{scheme:?} mean energy {mean}");
        }
    }

    #[test]
    fn qam16_is_gray_coded() {
        // Geometric neighbors (one grid step apart) differ in exactly one
        // label bit.
        let scheme = ModScheme::Qam16;
        let step = 2.0 * qam16_scale();
        for a in 0..16u16 {
            for b in 0..16u16 {
                let d = (scheme.point(a) - scheme.point(b)).norm();
                if (d - step).abs() < 1e-9 {
                    assert_eq!((a ^ b).count_ones(), 1, "labels {a:#06b} / {b:#06b}");
                }
            }
        }
    }

    #[test]
    fn modulate_rejects_ragged_input() {
        let err = modulate(ModScheme::Qam16, &[1, 0, 1]).unwrap_err();
        assert_eq!(err, Error::BitsNotDivisible { bits: 3, bits_per_symbol: 4 });
        assert!(modulate(ModScheme::Qam16, &[]).unwrap().is_empty());
    }

    #[test]
    fn noise_free_roundtrip_exhaustive() {
        // Every 4-bit group for QAM16, both bits for BPSK.
        for v in 0..16u8 {
            let bits = [(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1];
            let symbols = modulate(ModScheme::Qam16, &bits).unwrap();
            assert_eq!(demodulate(ModScheme::Qam16, &symbols), bits.to_vec());
        }
        let bits = [0u8, 1, 1, 0, 1];
        let symbols = modulate(ModScheme::Bpsk, &bits).unwrap();
        assert_eq!(demodulate(ModScheme::Bpsk, &symbols), bits.to_vec());
    }

    #[test]
    fn noise_free_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for scheme in [ModScheme::Bpsk, ModScheme::Qam16] {
            for _ in 0..100 {
                let bits: Vec<u8> =
                    (0..scheme.bits_per_symbol() * 32).map(|_| rng.gen_range(0..2u8)).collect();
                let symbols = modulate(scheme, &bits).unwrap();
                assert_eq!(demodulate(scheme, &symbols), bits);
            }
        }
    }

    #[test]
    fn bpsk_decision_ignores_imaginary_part() {
        let out = demodulate(ModScheme::Bpsk, &[Complex::new(0.1, 5.0)]);
        assert_eq!(out, vec![0]);
        let out = demodulate(ModScheme::Bpsk, &[Complex::new(-0.1, -5.0)]);
        assert_eq!(out, vec![1]);
    }

    #[test]
    fn tie_breaks_toward_smallest_label() {
        // Exactly between +1 and -1: both BPSK points are equidistant.
        let out = demodulate(ModScheme::Bpsk, &[Complex::new(0.0, 0.0)]);
        assert_eq!(out, vec![0]);
        // Origin is equidistant from the four inner QAM points; the smallest
        // label among them is 0b0101 (-1, -1).
        let out = demodulate(ModScheme::Qam16, &[Complex::new(0.0, 0.0)]);
        assert_eq!(out, vec![0, 1, 0, 1]);
    }

    #[test]
    fn noise_sigma_reference_points() {
        let s = ebn0_to_noise_sigma(0.0, ModScheme::Bpsk, 1.0).unwrap();
        assert!((s - 0.5_f64.sqrt()).abs() < 1e-15);
        let s = ebn0_to_noise_sigma(10.0, ModScheme::Bpsk, 1.0).unwrap();
        assert!((s - (1.0_f64 / 20.0).sqrt()).abs() < 1e-15);
        // Es/N0 = 4 * 11/15 at 0 dB for coded QAM16.
        let s = ebn0_to_noise_sigma(0.0, ModScheme::Qam16, 11.0 / 15.0).unwrap();
        let esn0: f64 = 44.0 / 15.0;
        assert!((s - (1.0 / (2.0 * esn0)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn noise_sigma_rejects_bad_rate() {
        assert!(ebn0_to_noise_sigma(0.0, ModScheme::Bpsk, 0.0).is_err());
        assert!(ebn0_to_noise_sigma(0.0, ModScheme::Bpsk, -0.5).is_err());
        assert!(ebn0_to_noise_sigma(0.0, ModScheme::Bpsk, 1.5).is_err());
    }
}
