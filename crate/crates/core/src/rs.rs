//! Systematic Reed-Solomon codec over GF(2^m).
//!
//! RS(n, k) on m-bit symbols with narrow-sense generator
//! `g(x) = (x - alpha)(x - alpha^2)...(x - alpha^{2t})`, `t = (n - k) / 2`.
//! Encoding appends the remainder of `msg(x) * x^{2t}` divided by `g(x)`, so
//! the message symbols appear verbatim in the high-degree positions of the
//! codeword. Decoding is Berlekamp-Massey for the error locator, Chien
//! search for its roots and Forney's formula for the magnitudes, followed by
//! a re-syndrome check. Beyond t errors the decoder either reports
//! [`DecodeStatus::Failure`] or, as with any bounded-distance decoder, may
//! silently settle on a different valid codeword.

use crate::gf::{Field, GfElem, Poly};
use crate::{DecodeStatus, Error, Result};

/// A validated RS(n, k) code over GF(2^m), immutable after construction.
#[derive(Debug, Clone)]
pub struct RsCode {
    field: Field,
    n: usize,
    k: usize,
    t: usize,
    generator: Poly,
}

/// Result of [`RsCode::decode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsDecodeOutcome {
    /// Recovered message, or the received systematic symbols on failure.
    pub message: Vec<GfElem>,
    /// Number of symbol corrections applied (0 unless status is Corrected).
    pub corrected_symbols: usize,
    pub status: DecodeStatus,
}

impl RsCode {
    /// Builds RS(n, k) over GF(2^m) with the default primitive polynomial.
    pub fn new(m: u32, n: usize, k: usize) -> Result<RsCode> {
        RsCode::with_field(Field::with_default_poly(m)?, n, k)
    }

    /// Builds RS(n, k) over a caller-supplied field.
    ///
    /// Parameters must satisfy `0 < k < n < 2^m + 2` with `n - k` even. The
    /// decoder additionally needs every codeword position to map to a
    /// distinct field element for the Chien search, which caps n at 2^m - 1.
    pub fn with_field(field: Field, n: usize, k: usize) -> Result<RsCode> {
        if k == 0 {
            return Err(Error::InvalidCode("0 < k violated: k = 0".into()));
        }
        if k >= n {
            return Err(Error::InvalidCode(format!("k < n violated: k = {k}, n = {n}")));
        }
        if n >= (1 << field.m()) + 2 {
            return Err(Error::InvalidCode(format!(
                "n < 2^m + 2 violated: n = {n}, m = {}",
                field.m()
            )));
        }
        if !(n - k).is_multiple_of(2) {
            return Err(Error::InvalidCode(format!("n - k must be even, got {}", n - k)));
        }
        if n > field.nonzero_count() {
            return Err(Error::InvalidCode(format!(
                "n = {n} exceeds 2^m - 1 = {}; positions would not have unique error locators",
                field.nonzero_count()
            )));
        }
        let t = (n - k) / 2;

        // g(x) = prod_{i=1}^{2t} (x - alpha^i)
        let mut generator = Poly::one();
        for i in 1..=(2 * t) as i64 {
            let factor = Poly::from_coeffs(vec![field.alpha_pow(i), GfElem::ONE]);
            generator = field.poly_mul(&generator, &factor);
        }
        debug_assert_eq!(generator.degree(), Some(2 * t));

        Ok(RsCode { field, n, k, t, generator })
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

    /// Symbol error correction capability, t = (n - k) / 2.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Design distance n - k + 1.
    pub fn d_min(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn generator(&self) -> &Poly {
        &self.generator
    }

    /// Encodes k message symbols into an n-symbol systematic codeword.
    ///
    /// Codeword layout, low degree first: positions `0..2t` hold the parity
    /// `(msg(x) * x^{2t}) mod g(x)`, positions `2t..n` hold the message.
    pub fn encode(&self, msg: &[GfElem]) -> Result<Vec<GfElem>> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: msg.len() });
        }
        let parity_len = 2 * self.t;
        // LFSR form of the division by g(x): process message symbols from
        // the high-degree end, leading coefficient of g is 1.
        let mut rem = vec![GfElem::ZERO; parity_len];
        for &sym in msg.iter().rev() {
            let feedback = self.field.add(sym, rem[parity_len - 1]);
            for j in (1..parity_len).rev() {
                rem[j] =
                    self.field.add(rem[j - 1], self.field.mul(feedback, self.generator.coeff(j)));
            }
            rem[0] = self.field.mul(feedback, self.generator.coeff(0));
        }
        let mut codeword = rem;
        codeword.extend_from_slice(msg);
        Ok(codeword)
    }

    /// Syndromes `S_j = R(alpha^{1+j})` for `j = 0..2t`; all zero iff the
    /// received word is a codeword.
    pub fn syndromes(&self, received: &[GfElem]) -> Result<Vec<GfElem>> {
        if received.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: received.len() });
        }
        Ok((1..=(2 * self.t) as i64)
            .map(|j| self.eval_word(received, self.field.alpha_pow(j)))
            .collect())
    }

    /// Hard-decision bounded-distance decode.
    ///
    /// Corrects up to t symbol errors. When the error pattern is heavier the
    /// decoder reports `Failure` (carrying the received systematic symbols as
    /// best effort) unless the pattern happens to land within distance t of
    /// some other codeword, in which case it miscorrects undetectably.
    pub fn decode(&self, received: &[GfElem]) -> Result<RsDecodeOutcome> {
        let syndromes = self.syndromes(received)?;
        if syndromes.iter().all(|s| s.is_zero()) {
            return Ok(RsDecodeOutcome {
                message: received[2 * self.t..].to_vec(),
                corrected_symbols: 0,
                status: DecodeStatus::Clean,
            });
        }

        let Some(corrected) = self.try_correct(received, &syndromes) else {
            return Ok(self.failure_outcome(received));
        };
        let (word, num_errors) = corrected;

        // Re-syndrome check on the corrected word.
        let clean = (1..=(2 * self.t) as i64)
            .all(|j| self.eval_word(&word, self.field.alpha_pow(j)).is_zero());
        if !clean {
            return Ok(self.failure_outcome(received));
        }

        Ok(RsDecodeOutcome {
            message: word[2 * self.t..].to_vec(),
            corrected_symbols: num_errors,
            status: DecodeStatus::Corrected,
        })
    }

    fn failure_outcome(&self, received: &[GfElem]) -> RsDecodeOutcome {
        RsDecodeOutcome {
            message: received[2 * self.t..].to_vec(),
            corrected_symbols: 0,
            status: DecodeStatus::Failure,
        }
    }

    /// Locator + magnitudes; `None` on any inconsistency (too many errors).
    fn try_correct(
        &self,
        received: &[GfElem],
        syndromes: &[GfElem],
    ) -> Option<(Vec<GfElem>, usize)> {
        let locator = self.berlekamp_massey(syndromes);
        let num_errors = locator.degree().unwrap_or(0);
        if num_errors == 0 || num_errors > self.t {
            return None;
        }

        // Chien search: error at position p iff locator(alpha^{-p}) = 0.
        let positions: Vec<usize> = (0..self.n)
            .filter(|&p| {
                self.field.poly_eval(&locator, self.field.alpha_pow(-(p as i64))).is_zero()
            })
            .collect();
        if positions.len() != num_errors {
            return None;
        }

        // Forney: e_p = Omega(Xp^-1) / Lambda'(Xp^-1) with
        // Omega = S(x) * Lambda(x) mod x^{2t} and first root exponent 1.
        let syndrome_poly = Poly::from_coeffs(syndromes.to_vec());
        let product = self.field.poly_mul(&syndrome_poly, &locator);
        let omega = Poly::from_coeffs(
            product.coeffs()[..(2 * self.t).min(product.coeffs().len())].to_vec(),
        );
        let locator_deriv = self.field.poly_derivative(&locator);

        let mut word = received.to_vec();
        for &p in &positions {
            let x_inv = self.field.alpha_pow(-(p as i64));
            let denom = self.field.poly_eval(&locator_deriv, x_inv);
            if denom.is_zero() {
                return None;
            }
            let num = self.field.poly_eval(&omega, x_inv);
            let magnitude = self.field.div(num, denom).expect("denominator checked nonzero");
            if magnitude.is_zero() {
                return None;
            }
            word[p] = self.field.add(word[p], magnitude);
        }
        Some((word, num_errors))
    }

    /// Berlekamp-Massey over the full syndrome sequence; returns the error
    /// locator polynomial Lambda(x) with Lambda(0) = 1.
    fn berlekamp_massey(&self, syndromes: &[GfElem]) -> Poly {
        let f = &self.field;
        let mut lambda = vec![GfElem::ONE];
        let mut prev = vec![GfElem::ONE];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut prev_discrepancy = GfElem::ONE;

        for n in 0..syndromes.len() {
            let mut d = syndromes[n];
            for i in 1..=l.min(lambda.len() - 1) {
                d = f.add(d, f.mul(lambda[i], syndromes[n - i]));
            }
            if d.is_zero() {
                shift += 1;
                continue;
            }
            let scale = f.div(d, prev_discrepancy).expect("prev discrepancy nonzero");
            let candidate = lambda.clone();
            if lambda.len() < prev.len() + shift {
                lambda.resize(prev.len() + shift, GfElem::ZERO);
            }
            for (i, &b) in prev.iter().enumerate() {
                lambda[i + shift] = f.add(lambda[i + shift], f.mul(scale, b));
            }
            if 2 * l <= n {
                l = n + 1 - l;
                prev = candidate;
                prev_discrepancy = d;
                shift = 1;
            } else {
                shift += 1;
            }
        }
        lambda.truncate(l + 1);
        Poly::from_coeffs(lambda)
    }

    /// Evaluates a received word (as a polynomial) at x without allocating.
    fn eval_word(&self, word: &[GfElem], x: GfElem) -> GfElem {
        let mut acc = GfElem::ZERO;
        for &c in word.iter().rev() {
            acc = self.field.add(self.field.mul(acc, x), c);
        }
        acc
    }
}
