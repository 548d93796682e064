//! GF(2^m) construction, element arithmetic and polynomials.
//!
//! A [`Field`] is built from a primitive polynomial and carries exp/log
//! tables, so multiplication and inversion are table lookups. Elements are
//! [`GfElem`] values in `[0, 2^m)` interpreted as GF(2) coefficient vectors;
//! `alpha` (the root of the primitive polynomial) is the element with value 2.
//!
//! [`Poly`] stores coefficients low degree first (`coeffs[i]` multiplies
//! `x^i`). Polynomials whose coefficients are all 0 or 1 live in the GF(2)
//! subfield, so generator-polynomial arithmetic for binary codes reuses the
//! same routines.

use crate::{Error, Result};

/// Element of GF(2^m), valid only together with the [`Field`] it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GfElem(pub u16);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Default primitive polynomial per order exponent, degree m, x primitive.
const DEFAULT_PRIMITIVE_POLY: [u32; 17] = [
    0, 0, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10001001, 0x11D, 0x211, 0x409, 0x805,
    0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

/// GF(2^m) with precomputed exp/log tables.
///
/// Immutable after construction; all operations take `&self`, so a field can
/// be shared freely across worker threads.
#[derive(Debug, Clone)]
pub struct Field {
    m: u32,
    primitive_poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Field {
    /// Builds GF(2^m) from a degree-m primitive polynomial given as a bit
    /// mask (bit i = coefficient of x^i).
    ///
    /// Fails if `m` is outside `[2, 16]`, the mask does not have degree
    /// exactly m, or alpha = x does not generate all 2^m - 1 nonzero
    /// elements (i.e. the polynomial is not primitive).
    pub fn new(m: u32, primitive_poly: u32) -> Result<Field> {
        if !(2..=16).contains(&m) {
            return Err(Error::InvalidField(format!("m must be in [2, 16], got {m}")));
        }
        if primitive_poly >> m != 1 {
            return Err(Error::InvalidField(format!(
                "polynomial {primitive_poly:#x} does not have degree exactly {m}"
            )));
        }

        let order = 1usize << m;
        let nonzero = order - 1;
        let mut exp = vec![0u16; nonzero];
        let mut log = vec![0u16; order];
        let mut seen = vec![false; order];

        // alpha^i by repeated shift-and-reduce; any repeat before wraparound
        // means alpha fails to generate the multiplicative group.
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            if seen[x as usize] {
                return Err(Error::NotPrimitive { m, poly: primitive_poly });
            }
            seen[x as usize] = true;
            *slot = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive { m, poly: primitive_poly });
        }

        Ok(Field { m, primitive_poly, exp, log })
    }

    /// Builds GF(2^m) with the conventional primitive polynomial for that m
    /// (x^4 + x + 1 for GF(16), x^8 + x^4 + x^3 + x^2 + 1 for GF(256), ...).
    pub fn with_default_poly(m: u32) -> Result<Field> {
        if !(2..=16).contains(&m) {
            return Err(Error::InvalidField(format!("m must be in [2, 16], got {m}")));
        }
        Field::new(m, DEFAULT_PRIMITIVE_POLY[m as usize])
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of elements, 2^m.
    #[inline]
    pub fn order(&self) -> usize {
        1 << self.m
    }

    /// Size of the multiplicative group, 2^m - 1.
    #[inline]
    pub fn nonzero_count(&self) -> usize {
        self.order() - 1
    }

    /// Wraps a raw value, panicking if it does not fit this field.
    #[inline]
    pub fn elem(&self, value: u16) -> GfElem {
        assert!((value as usize) < self.order(), "value {value} out of range for GF(2^{})", self.m);
        GfElem(value)
    }

    /// alpha^i, exponent taken mod 2^m - 1 (negative exponents allowed).
    #[inline]
    pub fn alpha_pow(&self, i: i64) -> GfElem {
        let n = self.nonzero_count() as i64;
        GfElem(self.exp[i.rem_euclid(n) as usize])
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, a: GfElem) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.log[a.0 as usize] as u32)
    }

    /// Addition (= subtraction): bitwise XOR of coefficient vectors.
    #[inline]
    pub fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        debug_assert!((a.0 as usize) < self.order() && (b.0 as usize) < self.order());
        GfElem(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if a.is_zero() || b.is_zero() {
            return GfElem::ZERO;
        }
        let idx = (self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize)
            % self.nonzero_count();
        GfElem(self.exp[idx])
    }

    /// Multiplicative inverse; zero has none.
    #[inline]
    pub fn inv(&self, a: GfElem) -> Result<GfElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.nonzero_count();
        let l = self.log[a.0 as usize] as usize;
        Ok(GfElem(self.exp[(n - l) % n]))
    }

    #[inline]
    pub fn div(&self, a: GfElem, b: GfElem) -> Result<GfElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e by exponent arithmetic in the log domain.
    pub fn pow(&self, a: GfElem, e: u64) -> GfElem {
        if a.is_zero() {
            return if e == 0 { GfElem::ONE } else { GfElem::ZERO };
        }
        let n = self.nonzero_count() as u64;
        let l = self.log[a.0 as usize] as u64;
        GfElem(self.exp[((l * (e % n)) % n) as usize])
    }

    // ---- polynomial arithmetic over this field ----

    pub fn poly_add(&self, a: &Poly, b: &Poly) -> Poly {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = self.add(*c, s);
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![GfElem::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                coeffs[i + j] = self.add(coeffs[i + j], self.mul(ai, bj));
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Scales every coefficient by `s`.
    pub fn poly_scale(&self, a: &Poly, s: GfElem) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&c| self.mul(c, s)).collect())
    }

    /// Long division: returns (quotient, remainder) with
    /// `a = quotient * b + remainder` and `deg(remainder) < deg(b)`.
    pub fn poly_divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let bd = b.degree().ok_or(Error::ZeroPolyDivisor)?;
        let ad = match a.degree() {
            Some(d) if d >= bd => d,
            _ => return Ok((Poly::zero(), a.clone())),
        };
        let lead_inv = self.inv(b.coeffs[bd])?;
        let mut rem = a.coeffs.clone();
        let mut quot = vec![GfElem::ZERO; ad - bd + 1];
        for i in (bd..=ad).rev() {
            let coef = rem[i];
            if coef.is_zero() {
                continue;
            }
            let q = self.mul(coef, lead_inv);
            quot[i - bd] = q;
            for (j, &bk) in b.coeffs.iter().enumerate() {
                rem[i - bd + j] = self.add(rem[i - bd + j], self.mul(q, bk));
            }
        }
        rem.truncate(bd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Evaluation by Horner's rule.
    pub fn poly_eval(&self, p: &Poly, x: GfElem) -> GfElem {
        let mut acc = GfElem::ZERO;
        for &c in p.coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    /// Formal derivative; in characteristic 2 the even-degree terms vanish.
    pub fn poly_derivative(&self, p: &Poly) -> Poly {
        let coeffs = p
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { GfElem::ZERO })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Minimal polynomial of alpha^elem_power over GF(2): the product of
    /// `(x - alpha^c)` over the conjugacy class `{elem_power * 2^j}` of
    /// exponents mod 2^m - 1. All coefficients land in {0, 1}.
    pub fn minimal_poly(&self, elem_power: u32) -> Poly {
        let n = self.nonzero_count() as u64;
        let start = elem_power as u64 % n;
        let mut class = Vec::new();
        let mut c = start;
        loop {
            class.push(c);
            c = (c * 2) % n;
            if c == start {
                break;
            }
        }
        let mut poly = Poly::one();
        for &e in &class {
            let root = self.alpha_pow(e as i64);
            let factor = Poly::from_coeffs(vec![root, GfElem::ONE]);
            poly = self.poly_mul(&poly, &factor);
        }
        debug_assert!(poly.coeffs.iter().all(|c| c.0 <= 1), "conjugate product left GF(2)");
        poly
    }

    /// Conjugacy class of an exponent: `{e, 2e, 4e, ...}` mod 2^m - 1.
    pub fn conjugacy_class(&self, elem_power: u32) -> Vec<u32> {
        let n = self.nonzero_count() as u64;
        let start = elem_power as u64 % n;
        let mut class = Vec::new();
        let mut c = start;
        loop {
            class.push(c as u32);
            c = (c * 2) % n;
            if c == start {
                break;
            }
        }
        class
    }
}

/// Polynomial with coefficients in a [`Field`], low degree first.
///
/// The zero polynomial is the empty coefficient vector and has degree `None`;
/// otherwise the stored leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<GfElem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![GfElem::ONE] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Poly {
        let mut coeffs = vec![GfElem::ZERO; k + 1];
        coeffs[k] = GfElem::ONE;
        Poly { coeffs }
    }

    /// Builds from low-degree-first coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<GfElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds a GF(2) polynomial from a bit mask (bit i = coefficient of x^i).
    pub fn from_mask(mask: u64) -> Poly {
        let coeffs = (0..64).map(|i| GfElem(((mask >> i) & 1) as u16)).collect();
        Poly::from_coeffs(coeffs)
    }

    /// Bit mask form of a GF(2) polynomial; `None` if any coefficient is
    /// outside {0, 1} or the degree exceeds 63.
    pub fn to_mask(&self) -> Option<u64> {
        if self.coeffs.len() > 64 || self.coeffs.iter().any(|c| c.0 > 1) {
            return None;
        }
        Some(self.coeffs.iter().enumerate().fold(0u64, |m, (i, c)| m | ((c.0 as u64) << i)))
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn coeffs(&self) -> &[GfElem] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the stored length).
    #[inline]
    pub fn coeff(&self, i: usize) -> GfElem {
        self.coeffs.get(i).copied().unwrap_or(GfElem::ZERO)
    }
}
