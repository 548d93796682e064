//! Binary narrow-sense BCH codec.
//!
//! A BCH(m, t) code has block length `n = 2^m - 1` and generator
//! `g(x) = lcm(m_1(x), m_3(x), ..., m_{2t-1}(x))`: the least common multiple
//! of the minimal polynomials of `alpha, alpha^2, ..., alpha^{2t}`. Only odd
//! exponents contribute because `m_{2i} = m_i` in characteristic 2, and
//! distinct conjugacy classes have coprime minimal polynomials, so the LCM is
//! the product over distinct classes. The message length `k = n - deg(g)`
//! follows.
//!
//! Decoding is the classic three-step pipeline: syndromes `S_j = R(alpha^j)`
//! evaluated in GF(2^m), the error-locator polynomial from the binary
//! (odd-syndrome) Berlekamp-Massey iteration, then a Chien search whose roots
//! are the errant bit positions. Error magnitudes are always 1, so located
//! bits are simply flipped; no Forney step is needed.

use crate::gf::{Field, GfElem, Poly};
use crate::{DecodeStatus, Error, Result};

/// A validated binary BCH code, immutable after construction.
#[derive(Debug, Clone)]
pub struct BchCode {
    field: Field,
    n: usize,
    k: usize,
    t: usize,
    generator: Poly,
}

/// Result of [`BchCode::decode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchDecodeOutcome {
    /// Recovered message bits, or the received systematic bits on failure.
    pub message: Vec<u8>,
    /// Number of bit flips applied (0 unless status is Corrected).
    pub corrected_bits: usize,
    pub status: DecodeStatus,
}

impl BchCode {
    /// Builds the narrow-sense BCH code over GF(2^m) correcting t bit errors,
    /// using the default primitive polynomial for the field.
    pub fn new(m: u32, t: usize) -> Result<BchCode> {
        BchCode::with_field(Field::with_default_poly(m)?, t)
    }

    /// Builds the code over a caller-supplied field.
    pub fn with_field(field: Field, t: usize) -> Result<BchCode> {
        let m = field.m();
        if m < 3 {
            return Err(Error::InvalidCode(format!("BCH requires m >= 3, got {m}")));
        }
        if t == 0 || t >= 1 << (m - 1) {
            return Err(Error::InvalidCode(format!(
                "t must satisfy 0 < t < 2^(m-1) = {}, got {t}",
                1 << (m - 1)
            )));
        }
        let n = field.nonzero_count();

        // LCM over minimal polynomials of alpha^1 .. alpha^{2t-1}, odd
        // exponents only; dedupe conjugacy classes so each factor enters once.
        let mut covered: Vec<bool> = vec![false; n];
        let mut generator = Poly::one();
        for e in (1..2 * t as u32).step_by(2) {
            if covered[e as usize] {
                continue;
            }
            for c in field.conjugacy_class(e) {
                covered[c as usize] = true;
            }
            generator = field.poly_mul(&generator, &field.minimal_poly(e));
        }
        debug_assert!(generator.coeffs().iter().all(|c| c.value() <= 1));

        let deg = generator.degree().expect("generator is nonzero");
        if deg >= n {
            return Err(Error::InvalidCode(format!(
                "generator degree {deg} leaves no message bits at n = {n}"
            )));
        }
        let k = n - deg;
        debug_assert!(deg <= m as usize * t);

        Ok(BchCode { field, n, k, t, generator })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Designed bit error correction capability.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Generator polynomial over GF(2).
    pub fn generator(&self) -> &Poly {
        &self.generator
    }

    /// Encodes k message bits into an n-bit systematic codeword.
    ///
    /// Bit layout, low degree first: positions `0..n-k` hold the remainder of
    /// `msg(x) * x^{n-k}` divided by g(x), positions `n-k..n` hold the message.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: msg.len() });
        }
        debug_assert!(msg.iter().all(|&b| b <= 1));
        let parity_len = self.n - self.k;
        let mut rem = vec![0u8; parity_len];
        for &bit in msg.iter().rev() {
            let feedback = bit ^ rem[parity_len - 1];
            for j in (1..parity_len).rev() {
                rem[j] = rem[j - 1]
                    ^ if feedback == 1 { self.generator.coeff(j).value() as u8 } else { 0 };
            }
            rem[0] = if feedback == 1 { self.generator.coeff(0).value() as u8 } else { 0 };
        }
        let mut codeword = rem;
        codeword.extend_from_slice(msg);
        Ok(codeword)
    }

    /// Syndromes `S_j = R(alpha^j)` for `j = 1..=2t`.
    pub fn syndromes(&self, received: &[u8]) -> Result<Vec<GfElem>> {
        if received.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: received.len() });
        }
        Ok((1..=2 * self.t as i64).map(|j| self.eval_bits(received, j)).collect())
    }

    /// Hard-decision decode: syndromes, binary Berlekamp-Massey, Chien
    /// search, bit flips, re-syndrome verification.
    pub fn decode(&self, received: &[u8]) -> Result<BchDecodeOutcome> {
        let syndromes = self.syndromes(received)?;
        if syndromes.iter().all(|s| s.is_zero()) {
            return Ok(BchDecodeOutcome {
                message: received[self.n - self.k..].to_vec(),
                corrected_bits: 0,
                status: DecodeStatus::Clean,
            });
        }
        // Binary words always satisfy S_{2j} = S_j^2 (Frobenius); a violation
        // here would mean corrupted field tables, not channel errors.
        debug_assert!((1..=self.t).all(|j| {
            syndromes[2 * j - 1] == self.field.mul(syndromes[j - 1], syndromes[j - 1])
        }));

        let Some(word) = self.try_correct(received, &syndromes) else {
            return Ok(self.failure_outcome(received));
        };
        let (word, flips) = word;

        let clean = (1..=2 * self.t as i64).all(|j| self.eval_bits(&word, j).is_zero());
        if !clean {
            return Ok(self.failure_outcome(received));
        }

        Ok(BchDecodeOutcome {
            message: word[self.n - self.k..].to_vec(),
            corrected_bits: flips,
            status: DecodeStatus::Corrected,
        })
    }

    fn failure_outcome(&self, received: &[u8]) -> BchDecodeOutcome {
        BchDecodeOutcome {
            message: received[self.n - self.k..].to_vec(),
            corrected_bits: 0,
            status: DecodeStatus::Failure,
        }
    }

    fn try_correct(&self, received: &[u8], syndromes: &[GfElem]) -> Option<(Vec<u8>, usize)> {
        let locator = self.binary_berlekamp_massey(syndromes);
        let num_errors = locator.degree().unwrap_or(0);
        if num_errors == 0 || num_errors > self.t {
            return None;
        }
        let positions: Vec<usize> = (0..self.n)
            .filter(|&p| {
                self.field.poly_eval(&locator, self.field.alpha_pow(-(p as i64))).is_zero()
            })
            .collect();
        if positions.len() != num_errors {
            return None;
        }
        let mut word = received.to_vec();
        for &p in &positions {
            word[p] ^= 1;
        }
        Some((word, num_errors))
    }

    /// Berlekamp-Massey specialized for binary codes: only the odd-index
    /// syndromes drive the iteration (t steps instead of 2t), exploiting
    /// S_{2j} = S_j^2.
    ///
    /// `syndromes[j]` holds S_{j+1}; the returned locator has sigma(0) = 1
    /// and its roots are the inverse error locations.
    fn binary_berlekamp_massey(&self, syndromes: &[GfElem]) -> Poly {
        let f = &self.field;
        // One table row per completed step: (sigma, discrepancy, two_mu - l).
        struct Row {
            sigma: Poly,
            discrepancy: GfElem,
            two_mu: i32,
            degree: i32,
        }
        let mut rows = vec![
            Row { sigma: Poly::one(), discrepancy: GfElem::ONE, two_mu: -1, degree: 0 },
            Row { sigma: Poly::one(), discrepancy: syndromes[0], two_mu: 0, degree: 0 },
        ];

        for step in 0..self.t {
            let cur = rows.last().expect("table never empty");
            let sigma_next = if cur.discrepancy.is_zero() {
                cur.sigma.clone()
            } else {
                // Correction row: nonzero discrepancy maximizing 2*mu - l.
                let pick = rows[..rows.len() - 1]
                    .iter()
                    .filter(|r| !r.discrepancy.is_zero())
                    .max_by_key(|r| r.two_mu - r.degree)
                    .expect("row -1/2 always qualifies");
                let scale = f.div(cur.discrepancy, pick.discrepancy).expect("nonzero");
                let shift = (cur.two_mu - pick.two_mu) as usize;
                let correction =
                    f.poly_mul(&f.poly_scale(&pick.sigma, scale), &Poly::monomial(shift));
                f.poly_add(&cur.sigma, &correction)
            };

            if step + 1 == self.t {
                return sigma_next;
            }

            // Discrepancy for the next odd syndrome S_{2(step+1)+1}.
            let degree = sigma_next.degree().unwrap_or(0);
            let s_index = 2 * (step + 1); // zero-based index of S_{2 step + 3}
            let mut d = syndromes[s_index];
            for i in 1..=degree.min(s_index) {
                d = f.add(d, f.mul(sigma_next.coeff(i), syndromes[s_index - i]));
            }
            rows.push(Row {
                sigma: sigma_next,
                discrepancy: d,
                two_mu: 2 * (step as i32 + 1),
                degree: degree as i32,
            });
        }
        unreachable!("loop returns at step t - 1");
    }

    /// Evaluates the received bit vector as a polynomial at alpha^power.
    fn eval_bits(&self, bits: &[u8], power: i64) -> GfElem {
        let mut acc = GfElem::ZERO;
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                acc = self.field.add(acc, self.field.alpha_pow(power * i as i64));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits_of(value: u32, len: usize) -> Vec<u8> {
        (0..len).map(|i| ((value >> i) & 1) as u8).collect()
    }

    #[test]
    fn spec_examples_for_generators() {
        let code = BchCode::new(4, 1).unwrap();
        assert_eq!((code.n(), code.k()), (15, 11));
        assert_eq!(code.generator().to_mask(), Some(0b10011));

        let code = BchCode::new(4, 2).unwrap();
        assert_eq!((code.n(), code.k()), (15, 7));
        // (x^4 + x + 1)(x^4 + x^3 + x^2 + x + 1), expanded over GF(2).
        assert_eq!(code.generator().to_mask(), Some(0b1_1101_0001));

        let code = BchCode::new(3, 1).unwrap();
        assert_eq!((code.n(), code.k()), (7, 4));
        assert_eq!(code.generator().to_mask(), Some(0b1011));
    }

    #[test]
    fn generator_is_lcm_with_coprime_factors() {
        // For t = 2 the two minimal polynomials must be coprime, so the
        // product is the LCM; checked by dividing out each factor.
        let code = BchCode::new(4, 2).unwrap();
        let f = code.field();
        let m1 = f.minimal_poly(1);
        let m3 = f.minimal_poly(3);
        let (q, r) = f.poly_divmod(code.generator(), &m1).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, m3);
        let (_, r) = f.poly_divmod(code.generator(), &m3).unwrap();
        assert!(r.is_zero());
        // repeated class m_1 == m_2 is deduped: t = 1 generator has degree m
        assert_eq!(BchCode::new(4, 1).unwrap().generator().degree(), Some(4));
    }

    #[test]
    fn parameter_violations() {
        assert!(BchCode::new(2, 1).is_err());
        assert!(BchCode::new(4, 0).is_err());
        assert!(BchCode::new(4, 8).is_err());
        // t = 7 at m = 4 gives the repetition-like degenerate with k = 1;
        // still constructible, one step below the bound.
        assert!(BchCode::new(4, 7).is_ok());
    }

    #[test]
    fn parity_bound_holds_for_constructible_codes() {
        for (m, t) in [(3u32, 1usize), (4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3), (8, 2)] {
            let code = BchCode::new(m, t).unwrap();
            assert!(code.n() - code.k() <= m as usize * t, "m={m} t={t}");
            assert_eq!(code.n(), (1 << m) - 1);
        }
    }

    #[test]
    fn encode_zero_systematic_and_divisible() {
        let code = BchCode::new(4, 1).unwrap();
        assert_eq!(code.encode(&[0u8; 11]).unwrap(), vec![0u8; 15]);
        // every message: divisibility by g(x) via the polynomial oracle
        for v in 0u32..(1 << 11) {
            let msg = bits_of(v, 11);
            let cw = code.encode(&msg).unwrap();
            assert_eq!(&cw[4..], &msg[..]);
            let cw_poly = Poly::from_coeffs(cw.iter().map(|&b| GfElem(b as u16)).collect());
            let (_, rem) = code.field().poly_divmod(&cw_poly, code.generator()).unwrap();
            assert!(rem.is_zero(), "message {v:#x} not divisible");
        }
    }

    #[test]
    fn encode_is_linear() {
        let code = BchCode::new(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let a: Vec<u8> = (0..7).map(|_| rng.gen_range(0..2u8)).collect();
            let b: Vec<u8> = (0..7).map(|_| rng.gen_range(0..2u8)).collect();
            let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let ca = code.encode(&a).unwrap();
            let cb = code.encode(&b).unwrap();
            let cs = code.encode(&sum).unwrap();
            for i in 0..15 {
                assert_eq!(cs[i], ca[i] ^ cb[i]);
            }
        }
    }

    #[test]
    fn syndrome_soundness_exhaustive() {
        // All syndromes zero iff the word is one of the 2^k codewords.
        let code = BchCode::new(4, 1).unwrap();
        let mut codewords = std::collections::HashSet::new();
        for v in 0u32..(1 << 11) {
            codewords.insert(code.encode(&bits_of(v, 11)).unwrap());
        }
        for w in 0u32..(1 << 15) {
            let word = bits_of(w, 15);
            let zero = code.syndromes(&word).unwrap().iter().all(|s| s.is_zero());
            assert_eq!(zero, codewords.contains(&word), "word {w:#x}");
        }
    }

    #[test]
    fn decode_clean() {
        let code = BchCode::new(4, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let msg: Vec<u8> = (0..11).map(|_| rng.gen_range(0..2u8)).collect();
            let cw = code.encode(&msg).unwrap();
            let out = code.decode(&cw).unwrap();
            assert_eq!(out.status, DecodeStatus::Clean);
            assert_eq!(out.message, msg);
        }
    }

    #[test]
    fn single_bit_errors_correct_sampled() {
        let code = BchCode::new(4, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let msg: Vec<u8> = (0..11).map(|_| rng.gen_range(0..2u8)).collect();
            let mut word = code.encode(&msg).unwrap();
            let p = rng.gen_range(0..15usize);
            word[p] ^= 1;
            let out = code.decode(&word).unwrap();
            assert_eq!(out.status, DecodeStatus::Corrected);
            assert_eq!(out.corrected_bits, 1);
            assert_eq!(out.message, msg);
        }
    }

    #[test]
    fn double_bit_errors_correct_exhaustive_15_7() {
        let code = BchCode::new(4, 2).unwrap();
        for v in 0u32..(1 << 7) {
            let msg = bits_of(v, 7);
            let cw = code.encode(&msg).unwrap();
            for p1 in 0..15usize {
                for p2 in (p1 + 1)..15 {
                    let mut word = cw.clone();
                    word[p1] ^= 1;
                    word[p2] ^= 1;
                    let out = code.decode(&word).unwrap();
                    assert_eq!(out.status, DecodeStatus::Corrected, "msg {v:#x} flips {p1},{p2}");
                    assert_eq!(out.corrected_bits, 2);
                    assert_eq!(out.message, msg, "msg {v:#x} flips {p1},{p2}");
                }
            }
        }
    }

    #[test]
    fn min_weight_15_7_exhaustive() {
        let code = BchCode::new(4, 2).unwrap();
        let mut min_weight = 15;
        for v in 1u32..(1 << 7) {
            let w = code.encode(&bits_of(v, 7)).unwrap().iter().filter(|&&b| b == 1).count();
            min_weight = min_weight.min(w);
        }
        assert!(min_weight >= 5, "t = 2 requires designed distance >= 5, got {min_weight}");
    }

    #[test]
    fn beyond_t_perfect_code_always_miscorrects() {
        // Hamming(15,11) has covering radius 1: every 3-error word sits within
        // distance 1 of some other codeword, so the decoder never reports
        // failure; it lands on a valid codeword different from the original.
        let code = BchCode::new(4, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..500 {
            let msg: Vec<u8> = (0..11).map(|_| rng.gen_range(0..2u8)).collect();
            let mut word = code.encode(&msg).unwrap();
            let mut positions = std::collections::HashSet::new();
            while positions.len() < 3 {
                positions.insert(rng.gen_range(0..15usize));
            }
            for &p in &positions {
                word[p] ^= 1;
            }
            let out = code.decode(&word).unwrap();
            assert_ne!(out.status, DecodeStatus::Failure);
            assert_ne!(out.message, msg);
            let recw = code.encode(&out.message).unwrap();
            assert!(code.syndromes(&recw).unwrap().iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn beyond_t_fails_or_lands_on_codeword() {
        let code = BchCode::new(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let mut failures = 0;
        for _ in 0..500 {
            let msg: Vec<u8> = (0..7).map(|_| rng.gen_range(0..2u8)).collect();
            let mut word = code.encode(&msg).unwrap();
            let mut positions = std::collections::HashSet::new();
            while positions.len() < 3 {
                positions.insert(rng.gen_range(0..15usize));
            }
            for &p in &positions {
                word[p] ^= 1;
            }
            let out = code.decode(&word).unwrap();
            match out.status {
                DecodeStatus::Failure => {
                    failures += 1;
                    assert_eq!(out.message, word[8..].to_vec());
                }
                _ => {
                    let recw = code.encode(&out.message).unwrap();
                    assert!(code.syndromes(&recw).unwrap().iter().all(|s| s.is_zero()));
                }
            }
        }
        assert!(failures > 0, "three errors at t = 2 should sometimes be detected");
    }

    #[test]
    fn wrong_lengths_rejected() {
        let code = BchCode::new(4, 1).unwrap();
        assert!(code.encode(&[0u8; 12]).is_err());
        assert!(code.decode(&[0u8; 14]).is_err());
    }
}
