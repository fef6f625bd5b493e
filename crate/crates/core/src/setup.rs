//! A code together with the matrices a decoder runs on.

use std::ops::Range;
use std::sync::Arc;

use crate::decoder::{build_decoder, Decoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::gf2::{build_parity_matrix, code_by_key, CodeSpec, ParityMatrix, RedundancyConfig};
use crate::scalar::Real;

/// Everything a simulation needs to know about the code.
#[derive(Clone, Debug)]
pub struct CodeSetup {
    pub name: String,
    pub n: usize,
    pub k: usize,
    /// Positions counted for the bit error rate.
    pub info_positions: Range<usize>,
    /// Matrix the messages travel on.
    pub graph: Arc<ParityMatrix>,
    /// Matrix of the early-termination syndrome.
    pub checker: Arc<ParityMatrix>,
}

impl CodeSetup {
    /// BCH code with a `delta1`-redundant graph and the standard matrix as checker.
    /// Bit errors are counted over the systematic message positions.
    pub fn bch(code: &CodeSpec, delta1: f64) -> Result<Self> {
        let graph = build_parity_matrix(code, &RedundancyConfig::new(code, delta1)?)?;
        let checker = build_parity_matrix(code, &RedundancyConfig::standard(code))?;
        Ok(Self {
            name: code.key(),
            n: code.n,
            k: code.k,
            info_positions: code.n - code.k..code.n,
            graph: Arc::new(graph),
            checker: Arc::new(checker),
        })
    }

    pub fn from_key(key: &str, delta1: f64) -> Result<Self> {
        Self::bch(&code_by_key(key)?, delta1)
    }

    /// An externally supplied matrix, used both for decoding and for the
    /// syndrome. Bit errors are counted over all positions.
    pub fn from_matrix(name: impl Into<String>, h: ParityMatrix) -> Result<Self> {
        let n = h.cols();
        let rank = h.rank();
        if rank >= n {
            return Err(Error::InvalidConfig(format!("matrix of rank {rank} leaves no codewords of length {n}")));
        }
        let h = Arc::new(h);
        Ok(Self { name: name.into(), n, k: n - rank, info_positions: 0..n, graph: h.clone(), checker: h })
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn decoder<T: Real>(&self, config: &DecoderConfig) -> Result<Box<dyn Decoder<T>>> {
        build_decoder(self.graph.clone(), self.checker.clone(), config.clone())
    }
}
