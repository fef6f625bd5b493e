//! Per-sample mutual information and the three collapse operators.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `log2(1 + e^{−L})`, the per-sample MI deficit, without overflow for large |L|.
#[inline]
pub fn mi_penalty<T: Real>(l: T) -> T {
    let log2e = T::lit(std::f64::consts::LOG2_E);
    if l >= T::zero() {
        (-l).exp().ln_1p() * log2e
    } else {
        (-l + l.exp().ln_1p()) * log2e
    }
}

/// `1 − log2(1 + e^{−L})`: at most 1, zero at L = 0, negative for confident errors.
#[inline]
pub fn mi_of_llr<T: Real>(l: T) -> T {
    T::one() - mi_penalty(l)
}

/// Which message population a sample set was taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageSide {
    VariableToCheck,
    CheckToVariable,
}

/// LLR messages at one iteration, indexed by realization then edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MiSampleSet {
    pub iteration: usize,
    pub side: MessageSide,
    edges: usize,
    llrs: Vec<f64>,
}

impl MiSampleSet {
    /// `per_realization[r]` holds the messages on every edge for realization `r`.
    pub fn new(iteration: usize, side: MessageSide, per_realization: &[Vec<f64>]) -> Result<Self> {
        let edges = per_realization.first().map_or(0, Vec::len);
        if edges == 0 {
            return Err(Error::EmptySampleSet);
        }
        if let Some(bad) = per_realization.iter().find(|r| r.len() != edges) {
            return Err(Error::LengthMismatch { expected: edges, got: bad.len() });
        }
        Ok(Self { iteration, side, edges, llrs: per_realization.concat() })
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn realizations(&self) -> usize {
        self.llrs.len() / self.edges
    }

    pub fn realization(&self, r: usize) -> &[f64] {
        &self.llrs[r * self.edges..(r + 1) * self.edges]
    }

    /// Individual samples I(L_{e,r}) (the S-EXIT cloud), realization-major.
    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        self.llrs.iter().map(|&l| mi_of_llr(l))
    }

    /// One edge-collapsed value per realization.
    pub fn collapse_edges(&self) -> Vec<f64> {
        (0..self.realizations()).map(|r| collapse_edges(self.realization(r)).expect("nonempty")).collect()
    }

    /// One realization-collapsed value per edge.
    pub fn collapse_realizations(&self) -> Vec<f64> {
        (0..self.edges)
            .map(|e| {
                let column: Vec<f64> = (0..self.realizations()).map(|r| self.llrs[r * self.edges + e]).collect();
                collapse_realizations(&column).expect("nonempty")
            })
            .collect()
    }

    pub fn collapse_both(&self) -> f64 {
        collapse_both(&self.llrs).expect("nonempty")
    }
}

fn one_minus_mean_penalty<I: ExactSizeIterator<Item = f64>>(llrs: I) -> Result<f64> {
    let n = llrs.len();
    if n == 0 {
        return Err(Error::EmptySampleSet);
    }
    let sum: f64 = llrs.map(mi_penalty).sum();
    Ok(1.0 - sum / n as f64)
}

/// `1 − (1/|E|) Σ_e log2(1 + e^{−L_e})` over the edges of one realization.
pub fn collapse_edges(llrs: &[f64]) -> Result<f64> {
    one_minus_mean_penalty(llrs.iter().copied())
}

/// `1 − (1/|R|) Σ_r log2(1 + e^{−L_r})` over the realizations of one edge.
pub fn collapse_realizations(llrs: &[f64]) -> Result<f64> {
    one_minus_mean_penalty(llrs.iter().copied())
}

/// Mean over all edges and realizations, given as one flat slice.
pub fn collapse_both(llrs: &[f64]) -> Result<f64> {
    one_minus_mean_penalty(llrs.iter().copied())
}
