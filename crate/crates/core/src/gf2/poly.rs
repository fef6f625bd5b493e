//! Polynomials over GF(2).

use std::fmt;
use std::ops::{Add, Mul};

/// Binary polynomial, coefficients stored lowest degree first.
///
/// The coefficient vector is kept trimmed: a nonzero polynomial always ends
/// with a `1`, and the zero polynomial has an empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    coeffs: Vec<u8>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    /// The monomial `x^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = 1;
        Self { coeffs }
    }

    /// Builds a polynomial from bits, lowest degree first. Any nonzero entry counts as 1.
    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Self {
        let mut coeffs: Vec<u8> = bits.into_iter().map(|b| (b != 0) as u8).collect();
        trim(&mut coeffs);
        Self { coeffs }
    }

    /// Builds a polynomial from the exponents carrying a 1 (duplicates cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let len = exps.iter().max().map_or(0, |&d| d + 1);
        let mut coeffs = vec![0u8; len];
        for &e in exps {
            coeffs[e] ^= 1;
        }
        trim(&mut coeffs);
        Self { coeffs }
    }

    /// Interprets bit `i` of `word` as the coefficient of `x^i`.
    pub fn from_u64(word: u64) -> Self {
        Self::from_bits((0..64).map(|i| ((word >> i) & 1) as u8))
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> u8 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Coefficients lowest degree first; empty for zero.
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c == 1).count()
    }

    /// Coefficient vector zero-padded (or truncated) to `len`.
    pub fn to_bits(&self, len: usize) -> Vec<u8> {
        let mut out = vec![0u8; len];
        for (o, &c) in out.iter_mut().zip(&self.coeffs) {
            *o = c;
        }
        out
    }

    /// Reciprocal polynomial `x^deg · p(1/x)`.
    pub fn reciprocal(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        trim(&mut coeffs);
        Self { coeffs }
    }

    /// Quotient and remainder of polynomial long division.
    ///
    /// Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Gf2Poly::zero(), Gf2Poly::zero());
        };
        if nd < dd {
            return (Gf2Poly::zero(), self.clone());
        }
        let mut quot = vec![0u8; nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            if rem[shift + dd] == 1 {
                quot[shift] = 1;
                for (k, &c) in divisor.coeffs.iter().enumerate() {
                    rem[shift + k] ^= c;
                }
            }
        }
        trim(&mut rem);
        trim(&mut quot);
        (Gf2Poly { coeffs: quot }, Gf2Poly { coeffs: rem })
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        self.div_rem(divisor).1
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn lcm(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let g = self.gcd(other);
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        &q * other
    }
}

fn trim(v: &mut Vec<u8>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs: Vec<u8> = (0..len).map(|i| self.coeff(i) ^ rhs.coeff(i)).collect();
        trim(&mut coeffs);
        Gf2Poly { coeffs }
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || rhs.is_zero() {
            return Gf2Poly::zero();
        }
        let mut coeffs = vec![0u8; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 1 {
                for (j, &b) in rhs.coeffs.iter().enumerate() {
                    coeffs[i + j] ^= b;
                }
            }
        }
        trim(&mut coeffs);
        Gf2Poly { coeffs }
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = (0..self.coeffs.len())
            .rev()
            .filter(|&i| self.coeffs[i] == 1)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}
