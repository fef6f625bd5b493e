use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::evenly_spaced_offsets;

use super::check::{CheckRule, MinSumCorrection};

/// Decoding algorithm family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Bp,
    Ms,
    Nms,
    Oms,
    QuasiBp,
    QuasiMs,
}

impl Algorithm {
    pub fn is_quasi(self) -> bool {
        matches!(self, Algorithm::QuasiBp | Algorithm::QuasiMs)
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bp => "bp",
            Algorithm::Ms => "ms",
            Algorithm::Nms => "nms",
            Algorithm::Oms => "oms",
            Algorithm::QuasiBp => "quasi_bp",
            Algorithm::QuasiMs => "quasi_ms",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bp" => Algorithm::Bp,
            "ms" => Algorithm::Ms,
            "nms" => Algorithm::Nms,
            "oms" => Algorithm::Oms,
            "quasi_bp" | "quasibp" => Algorithm::QuasiBp,
            "quasi_ms" | "quasims" => Algorithm::QuasiMs,
            other => return Err(Error::InvalidConfig(format!("unknown algorithm `{other}`"))),
        })
    }
}

/// Merging weight used until one is tuned for the code and channel.
pub const DEFAULT_BETA: f64 = 0.15;

/// Default min-sum normalization weight.
pub const DEFAULT_NMS_WEIGHT: f64 = 0.78;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub algorithm: Algorithm,
    pub l_max: usize,
    /// Merging weight (quasi decoders only).
    pub beta: f64,
    pub nms_weight: f64,
    pub oms_offset: f64,
    /// Dilation factor δ₂ (quasi decoders only).
    pub delta2: usize,
    /// Cyclic shift of each dilation block; first entry is 0.
    pub dilation_offsets: Vec<usize>,
    /// Multiplier of each dilation block (empty means all 1). Block `w` maps
    /// bit `i` to position `(scale_w · i + offset_w) mod n`; powers of two are
    /// automorphisms of every binary cyclic code.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dilation_scales: Vec<usize>,
    /// Extra cyclic shift added to every block per iteration: iteration `t`
    /// (counted from 0) dilates with offsets `offset_w + t·stride`. Zero keeps
    /// the dilation set fixed.
    #[serde(default)]
    pub rotation_stride: usize,
    /// Stop as soon as the hard decision satisfies every check. Turning it
    /// off runs all `l_max` iterations, which MI tracing relies on.
    #[serde(default = "yes")]
    pub early_termination: bool,
}

fn yes() -> bool {
    true
}

impl DecoderConfig {
    /// Flooding BP / min-sum family with defaults for the unused knobs.
    pub fn flooding(algorithm: Algorithm, l_max: usize) -> Self {
        Self {
            algorithm,
            l_max,
            beta: 1.0,
            nms_weight: DEFAULT_NMS_WEIGHT,
            oms_offset: 0.0,
            delta2: 1,
            dilation_offsets: vec![0],
            dilation_scales: Vec::new(),
            rotation_stride: 0,
            early_termination: true,
        }
    }

    /// Quasi decoder on an `n`-bit cyclic code with evenly spread dilation
    /// shifts advancing by one position per iteration, and [`DEFAULT_BETA`].
    pub fn quasi(algorithm: Algorithm, l_max: usize, n: usize, delta2: usize) -> Self {
        Self {
            algorithm,
            l_max,
            beta: DEFAULT_BETA,
            nms_weight: DEFAULT_NMS_WEIGHT,
            oms_offset: 0.0,
            delta2,
            dilation_offsets: evenly_spaced_offsets(n, delta2),
            dilation_scales: Vec::new(),
            rotation_stride: 1,
            early_termination: true,
        }
    }

    /// Scale of block `w` (1 when no scales are configured).
    pub fn scale(&self, w: usize) -> usize {
        self.dilation_scales.get(w).copied().unwrap_or(1)
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn check_rule(&self) -> CheckRule {
        match self.algorithm {
            Algorithm::Bp | Algorithm::QuasiBp => CheckRule::SumProduct,
            Algorithm::Ms => CheckRule::MinSum(MinSumCorrection::None),
            Algorithm::Nms | Algorithm::QuasiMs => CheckRule::MinSum(MinSumCorrection::Normalized(self.nms_weight)),
            Algorithm::Oms => CheckRule::MinSum(MinSumCorrection::Offset(self.oms_offset)),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.l_max == 0 {
            return bad("l_max must be at least 1".into());
        }
        if !(self.nms_weight > 0.0 && self.nms_weight <= 1.0) {
            return bad(format!("nms_weight must be in (0,1], got {}", self.nms_weight));
        }
        if !(self.oms_offset >= 0.0) {
            return bad(format!("oms_offset must be >= 0, got {}", self.oms_offset));
        }
        if self.algorithm.is_quasi() {
            if !(self.beta >= 0.0 && self.beta.is_finite()) {
                return bad(format!("beta must be finite and non-negative, got {}", self.beta));
            }
            if self.delta2 == 0 || self.dilation_offsets.len() != self.delta2 {
                return bad(format!("need delta2 >= 1 offsets, got delta2={} with {} offsets", self.delta2, self.dilation_offsets.len()));
            }
            if !self.dilation_scales.is_empty() && self.dilation_scales.len() != self.delta2 {
                return bad(format!("need {} dilation scales, got {}", self.delta2, self.dilation_scales.len()));
            }
            if !self.dilation_offsets[0].is_multiple_of(n) || self.scale(0) % n != 1 % n {
                return bad("first dilation block must be the identity".into());
            }
            if let Some(&a) = self.dilation_scales.iter().find(|&&a| gcd(a % n, n) != 1) {
                return bad(format!("dilation scale {a} is not invertible modulo {n}"));
            }
            let mut seen = std::collections::HashSet::new();
            for (w, &s) in self.dilation_offsets.iter().enumerate() {
                if !seen.insert((self.scale(w) % n, s % n)) {
                    return bad(format!("dilation block {w} (scale {}, offset {s}) repeated modulo {n}", self.scale(w)));
                }
            }
        }
        Ok(())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}
