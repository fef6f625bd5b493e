//! Arithmetic in GF(2^m) and minimal polynomials.

use crate::error::{Error, Result};

use super::poly::Gf2Poly;

/// Primitive polynomial used for GF(2^m), as a bit mask (bit i = coefficient of x^i).
pub fn primitive_polynomial(m: u32) -> Result<u32> {
    Ok(match m {
        3 => 0b1011,          // x^3 + x + 1
        4 => 0b1_0011,        // x^4 + x + 1
        5 => 0b10_0101,       // x^5 + x^2 + 1
        6 => 0b100_0011,      // x^6 + x + 1
        7 => 0b1000_1001,     // x^7 + x^3 + 1
        8 => 0b1_0001_1101,   // x^8 + x^4 + x^3 + x^2 + 1
        9 => 0b10_0001_0001,  // x^9 + x^4 + 1
        10 => 0b100_0000_1001, // x^10 + x^3 + 1
        _ => return Err(Error::UnsupportedFieldDegree(m)),
    })
}

/// GF(2^m) with log/antilog tables over the configured primitive polynomial.
#[derive(Debug, Clone)]
pub struct GaloisField {
    m: u32,
    order: usize,
    exp: Vec<u32>,
    log: Vec<usize>,
}

impl GaloisField {
    pub fn new(m: u32) -> Result<Self> {
        let prim = primitive_polynomial(m)?;
        let size = 1usize << m;
        let order = size - 1;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0usize; size];
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x;
            log[x as usize] = i;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= prim;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { m, order, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Multiplicative group order, 2^m − 1.
    pub fn order(&self) -> usize {
        self.order
    }

    /// α^e for any e (reduced modulo the group order).
    pub fn alpha_pow(&self, e: usize) -> u32 {
        self.exp[e % self.order]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] + self.log[b as usize]]
        }
    }

    /// Cyclotomic coset {e, 2e, 4e, ...} modulo 2^m − 1, in generation order.
    pub fn cyclotomic_coset(&self, e: usize) -> Vec<usize> {
        let e = e % self.order;
        let mut coset = vec![e];
        let mut k = (2 * e) % self.order;
        while k != e {
            coset.push(k);
            k = (2 * k) % self.order;
        }
        coset
    }

    /// Minimal polynomial over GF(2) of α^e: the product of (x + α^k) over the coset of e.
    pub fn minimal_polynomial(&self, e: usize) -> Result<Gf2Poly> {
        if e == 0 || e >= self.order {
            return Err(Error::InvalidExponent { m: self.m, exponent: e });
        }
        // Coefficients in GF(2^m), lowest degree first.
        let mut acc: Vec<u32> = vec![1];
        for k in self.cyclotomic_coset(e) {
            let root = self.alpha_pow(k);
            let mut next = vec![0u32; acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i + 1] ^= c;
                next[i] ^= self.mul(c, root);
            }
            acc = next;
        }
        debug_assert!(acc.iter().all(|&c| c <= 1), "minimal polynomial must be binary");
        Ok(Gf2Poly::from_bits(acc.into_iter().map(|c| c as u8)))
    }
}

/// Minimal polynomial of α^e in GF(2^m).
pub fn minimal_polynomial(m: u32, e: usize) -> Result<Gf2Poly> {
    GaloisField::new(m)?.minimal_polynomial(e)
}
