//! Binary cyclic codes: BCH construction, systematic encoding and cyclic shifts.

use crate::error::{Error, Result};

use super::field::GaloisField;
use super::poly::Gf2Poly;

/// A binary cyclic code of length `n` and dimension `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    /// Field extension degree; `n = 2^m − 1` for primitive BCH codes.
    pub m: u32,
    pub designed_t: usize,
    /// Generator polynomial g(x), degree n − k.
    pub generator: Gf2Poly,
    /// Parity polynomial h(x) = (x^n + 1) / g(x), degree k.
    pub parity_poly: Gf2Poly,
}

impl CodeSpec {
    /// Builds a cyclic code from its generator; `g` must divide `x^n + 1`.
    pub fn from_generator(n: usize, m: u32, designed_t: usize, generator: Gf2Poly) -> Result<Self> {
        let xn1 = Gf2Poly::from_exponents(&[0, n]);
        let (parity_poly, r) = xn1.div_rem(&generator);
        if !r.is_zero() {
            return Err(Error::InvalidConfig(format!("g(x) does not divide x^{n} + 1")));
        }
        let deg = generator.degree().unwrap_or(0);
        if deg >= n {
            return Err(Error::DesignDistanceTooLarge { m, t: designed_t });
        }
        Ok(Self { n, k: n - deg, m, designed_t, generator, parity_poly })
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    /// Length-n dual codeword `x^k · h(1/x)`, the first row of the cyclic parity-check matrix.
    pub fn dual_row(&self) -> Vec<u8> {
        self.parity_poly.reciprocal().to_bits(self.n)
    }

    /// Systematic encoding: parity bits (remainder of `x^(n−k)·m(x)` by g) in
    /// positions `0..n−k`, message bits in positions `n−k..n`.
    ///
    /// With the codeword read as the polynomial c(x) = Σ c_i x^i, the message
    /// occupies the high-order coefficients.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        let r = self.redundancy();
        let shifted = Gf2Poly::from_bits((0..r).map(|_| 0).chain(message.iter().copied()));
        let parity = shifted.rem(&self.generator).to_bits(r);
        Ok(parity.into_iter().chain(message.iter().map(|&b| (b != 0) as u8)).collect())
    }

    /// Message bits of a systematically encoded codeword.
    pub fn extract_message<'a>(&self, codeword: &'a [u8]) -> &'a [u8] {
        &codeword[self.redundancy()..]
    }

    /// Canonical string key, e.g. `bch_127_64`.
    pub fn key(&self) -> String {
        format!("bch_{}_{}", self.n, self.k)
    }
}

/// Narrow-sense primitive BCH code of length 2^m − 1 with designed distance 2t + 1.
pub fn bch_code(m: u32, designed_t: usize) -> Result<CodeSpec> {
    let field = GaloisField::new(m)?;
    if designed_t == 0 {
        return Err(Error::InvalidConfig("designed_t must be at least 1".into()));
    }
    let n = field.order();
    if 2 * designed_t >= n {
        return Err(Error::DesignDistanceTooLarge { m, t: designed_t });
    }
    let mut g = Gf2Poly::one();
    for e in 1..=2 * designed_t {
        g = g.lcm(&field.minimal_polynomial(e)?);
    }
    if g.degree().unwrap_or(0) >= n {
        return Err(Error::DesignDistanceTooLarge { m, t: designed_t });
    }
    CodeSpec::from_generator(n, m, designed_t, g)
}

/// Looks up a code by key (`bch_<n>_<k>`), searching the smallest t that hits `k`.
pub fn code_by_key(key: &str) -> Result<CodeSpec> {
    let unknown = || Error::UnknownCode(key.to_string());
    let rest = key.strip_prefix("bch_").ok_or_else(unknown)?;
    let (n, k) = rest.split_once('_').ok_or_else(unknown)?;
    let n: usize = n.parse().map_err(|_| unknown())?;
    let k: usize = k.parse().map_err(|_| unknown())?;
    let m = (3..=10u32).find(|&m| (1usize << m) - 1 == n).ok_or_else(unknown)?;
    for t in 1..n / 2 {
        match bch_code(m, t) {
            Ok(code) if code.k == k => return Ok(code),
            Ok(code) if code.k < k => break,
            Ok(_) => continue,
            Err(_) => break,
        }
    }
    Err(unknown())
}

/// `out[i] = v[(i − s) mod N]`: rotates towards higher indices by `s`.
pub fn cyclic_shift<T: Clone>(v: &[T], s: isize) -> Vec<T> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let s = s.rem_euclid(n as isize) as usize;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&v[n - s..]);
    out.extend_from_slice(&v[..n - s]);
    out
}
