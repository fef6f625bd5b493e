//! Iterative soft decoders over a parity-check matrix.
//!
//! Two families share the same check-node rules ([`check`]):
//!
//! * flooding BP and its min-sum variants ([`bp`]), where every variable
//!   node sends extrinsic sums to its checks;
//! * the quasi decoders ([`quasi`]), which dispatch cyclically shifted copies
//!   of the accumulated LLR vector to a redundant matrix, run the check
//!   update on each copy, and merge the de-shifted check messages back into
//!   the accumulator with a weight β.
//!
//! Both stop early once the hard decision satisfies the syndrome matrix.

use std::io::{self, Write};
use std::sync::Arc;

use crate::error::Result;
use crate::exit::mi::mi_penalty;
use crate::gf2::ParityMatrix;
use crate::scalar::Real;

pub mod bp;
pub mod check;
pub mod config;
pub mod quasi;

pub use bp::BpDecoder;
pub use check::{boxplus_extrinsic, minsum_extrinsic, CheckRule, MinSumCorrection};
pub use config::{Algorithm, DecoderConfig, DEFAULT_BETA, DEFAULT_NMS_WEIGHT};
pub use quasi::{dilate, merge, revert, QuasiBpDecoder};

/// How much of the message history a decode records.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraceMode {
    #[default]
    Off,
    /// Edge-collapsed MI of both message populations per iteration.
    Mi,
    /// MI plus full copies of every message and the LLR vector.
    Full,
}

/// Messages of one iteration, block-major (block `w` occupies `w*E..(w+1)*E`).
#[derive(Clone, Debug, PartialEq)]
pub struct MessageSnapshot<T> {
    pub v2c: Vec<T>,
    pub c2v: Vec<T>,
    pub llr: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace<T> {
    /// 1-based iteration index.
    pub t: usize,
    /// Edge-collapsed MI of the variable-to-check messages.
    pub i_ev: f64,
    /// Edge-collapsed MI of the check-to-variable messages.
    pub i_ec: f64,
    pub snapshot: Option<MessageSnapshot<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeTrace<T> {
    pub blocks: usize,
    pub edges_per_block: usize,
    pub iterations: Vec<IterationTrace<T>>,
}

impl<T: Real> DecodeTrace<T> {
    /// Writes `t,block,edge,variable,v2c,c2v` rows for every recorded snapshot.
    pub fn write_edge_csv<W: Write>(&self, h: &ParityMatrix, mut w: W) -> io::Result<()> {
        writeln!(w, "t,block,edge,variable,v2c,c2v")?;
        let vars = h.edge_vars();
        for it in &self.iterations {
            let Some(snap) = &it.snapshot else { continue };
            for (k, (v, c)) in snap.v2c.iter().zip(&snap.c2v).enumerate() {
                let (block, edge) = (k / self.edges_per_block, k % self.edges_per_block);
                writeln!(w, "{},{},{},{},{},{}", it.t, block, edge, vars[edge], v, c)?;
            }
        }
        Ok(())
    }

    /// Writes `t,variable,llr` rows for every recorded snapshot.
    pub fn write_llr_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,variable,llr")?;
        for it in &self.iterations {
            let Some(snap) = &it.snapshot else { continue };
            for (i, l) in snap.llr.iter().enumerate() {
                writeln!(w, "{},{},{}", it.t, i, l)?;
            }
        }
        Ok(())
    }
}

/// Working state of an iterative decoder.
#[derive(Clone, Debug)]
pub struct DecoderState<T> {
    pub l_ch: Vec<T>,
    /// Accumulated a-posteriori LLRs.
    pub llr: Vec<T>,
    /// Block-major variable-to-check messages.
    pub v2c: Vec<T>,
    /// Block-major check-to-variable messages.
    pub c2v: Vec<T>,
    pub t: usize,
}

impl<T: Real> DecoderState<T> {
    fn new(n: usize, edges: usize) -> Self {
        Self { l_ch: vec![T::zero(); n], llr: vec![T::zero(); n], v2c: vec![T::zero(); edges], c2v: vec![T::zero(); edges], t: 0 }
    }

    fn reset(&mut self, l_ch: &[T]) {
        self.l_ch.copy_from_slice(l_ch);
        self.llr.copy_from_slice(l_ch);
        self.v2c.iter_mut().for_each(|x| *x = T::zero());
        self.c2v.iter_mut().for_each(|x| *x = T::zero());
        self.t = 0;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult<T> {
    pub c_hat: Vec<u8>,
    /// The hard decision satisfies the syndrome matrix.
    pub converged: bool,
    pub iterations_used: usize,
    /// Final a-posteriori LLRs.
    pub llr: Vec<T>,
    pub trace: Option<DecodeTrace<T>>,
}

impl<T> DecodeResult<T> {
    pub fn is_all_zero(&self) -> bool {
        self.c_hat.iter().all(|&b| b == 0)
    }
}

/// A decoder that maps channel LLRs to a hard decision.
pub trait Decoder<T: Real>: Send {
    fn decode_with(&mut self, l_ch: &[T], mode: TraceMode) -> DecodeResult<T>;

    fn decode(&mut self, l_ch: &[T]) -> DecodeResult<T> {
        self.decode_with(l_ch, TraceMode::Off)
    }

    fn config(&self) -> &DecoderConfig;
}

/// `0` for strictly positive LLRs, `1` otherwise (zero maps to 1).
pub fn hard_decision<T: Real>(llr: &[T]) -> Vec<u8> {
    llr.iter().map(|&l| (l <= T::zero()) as u8).collect()
}

/// Packs `hard_decision(llr)` straight into 64-bit words.
pub(crate) fn hard_decision_packed<T: Real>(llr: &[T], words: &mut [u64]) {
    words.iter_mut().for_each(|w| *w = 0);
    for (i, &l) in llr.iter().enumerate() {
        if l <= T::zero() {
            words[i / 64] |= 1 << (i % 64);
        }
    }
}

pub(crate) fn edge_collapsed_mi<T: Real>(messages: &[T]) -> f64 {
    if messages.is_empty() {
        return f64::NAN;
    }
    let sum: f64 = messages.iter().map(|&l| mi_penalty(l.as_f64())).sum();
    1.0 - sum / messages.len() as f64
}

/// Builds the decoder named by `config.algorithm`.
///
/// `graph` carries the message passing; `checker` decides early termination.
pub fn build_decoder<T: Real>(
    graph: Arc<ParityMatrix>,
    checker: Arc<ParityMatrix>,
    config: DecoderConfig,
) -> Result<Box<dyn Decoder<T>>> {
    Ok(if config.algorithm.is_quasi() {
        Box::new(QuasiBpDecoder::new(graph, checker, config)?)
    } else {
        Box::new(BpDecoder::new(graph, checker, config)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_decision_sign_convention() {
        assert_eq!(hard_decision(&[3.0f64, -0.1, 0.0]), vec![0, 1, 1]);
        let mut words = [0u64; 2];
        let llr: Vec<f32> = (0..70).map(|i| if i % 3 == 0 { -1.0 } else { 1.0 }).collect();
        hard_decision_packed(&llr, &mut words);
        for i in 0..70 {
            assert_eq!((words[i / 64] >> (i % 64)) & 1, (i % 3 == 0) as u64);
        }
    }
}
