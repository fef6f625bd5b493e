//! Quasi-BP: dilation over cyclic automorphisms, per-block check updates on a
//! redundant matrix, and weighted merging into an accumulated LLR vector.
//!
//! Per iteration `t`:
//!
//! 1. every block `w` receives `L^(t−1)` cyclically shifted by
//!    `offsets[w] + (t−1)·stride` (optionally after a Frobenius scaling),
//!    dispatched unchanged on each edge (no extrinsic exclusion at the
//!    variable side);
//! 2. each block runs the extrinsic check rule against the redundant matrix;
//! 3. check messages are shifted back and summed per bit:
//!    `L^(t) = L^(t−1) + β Σ_w Σ_{j ∈ 𝒞(i)} m_w,j→i`;
//! 4. the hard decision of `L^(t)` is tested against the syndrome matrix.
//!
//! The channel LLRs enter only through `L^(0)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exit::mi::mi_penalty;
use crate::gf2::{cyclic_shift, ParityMatrix};
use crate::scalar::{clamp_llr, Real};

use super::check::{boxplus_from_terms, phi_term};
use super::{
    edge_collapsed_mi, hard_decision, hard_decision_packed, CheckRule, DecodeResult, DecodeTrace, Decoder,
    DecoderConfig, DecoderState, IterationTrace, MessageSnapshot, TraceMode,
};

/// One cyclically shifted copy of `llr` per offset.
pub fn dilate<T: Clone>(llr: &[T], offsets: &[usize]) -> Vec<Vec<T>> {
    offsets.iter().map(|&s| cyclic_shift(llr, s as isize)).collect()
}

/// Undoes [`dilate`] block by block.
pub fn revert<T: Clone>(blocks: &[Vec<T>], offsets: &[usize]) -> Vec<Vec<T>> {
    blocks.iter().zip(offsets).map(|(b, &s)| cyclic_shift(b, -(s as isize))).collect()
}

/// `L_next[p] = L_prev[p] + β Σ_w Σ_{edges of block w landing on p} c2v`.
///
/// `c2v_blocks[w]` holds the check messages of block `w` in the edge order of `h`.
pub fn merge<T: Real>(h: &ParityMatrix, llr_prev: &[T], c2v_blocks: &[Vec<T>], beta: T, offsets: &[usize]) -> Vec<T> {
    let n = h.cols();
    let mut acc = vec![T::zero(); n];
    for (block, &s) in c2v_blocks.iter().zip(offsets) {
        for (&m, &i) in block.iter().zip(h.edge_vars()) {
            let p = (i + n - s % n) % n;
            acc[p] = acc[p] + m;
        }
    }
    llr_prev.iter().zip(acc).map(|(&l, a)| clamp_llr(l + beta * a)).collect()
}

/// Quasi-BP (tanh check rule) or quasi-MS (normalized min-sum check rule).
#[derive(Clone)]
pub struct QuasiBpDecoder<T> {
    graph: Arc<ParityMatrix>,
    checker: Arc<ParityMatrix>,
    config: DecoderConfig,
    rule: CheckRule,
    beta: T,
    /// Source bit (pre-dilation index) of every block-major edge.
    source: Vec<u32>,
    acc: Vec<T>,
    /// Per-bit check-rule terms, shared by every edge of the bit.
    terms: Vec<T>,
    /// Dilation rotation of the last iteration.
    rotation: usize,
    state: DecoderState<T>,
    packed: Vec<u64>,
}

impl<T: Real> QuasiBpDecoder<T> {
    pub fn new(graph: Arc<ParityMatrix>, checker: Arc<ParityMatrix>, config: DecoderConfig) -> Result<Self> {
        if !config.algorithm.is_quasi() {
            return Err(Error::InvalidConfig(format!("{} is not a quasi algorithm", config.algorithm)));
        }
        let n = graph.cols();
        if checker.cols() != n {
            return Err(Error::LengthMismatch { expected: n, got: checker.cols() });
        }
        config.validate(n)?;
        let edges = graph.num_edges();
        let mut source = Vec::with_capacity(edges * config.delta2);
        for (w, &s) in config.dilation_offsets.iter().enumerate() {
            let a = config.scale(w) % n;
            let inv = (1..=n).find(|&b| a * b % n == 1 % n).unwrap_or(1);
            source.extend(graph.edge_vars().iter().map(|&p| ((p + n - s % n) % n * inv % n) as u32));
        }
        Ok(Self {
            rule: config.check_rule(),
            beta: T::lit(config.beta),
            state: DecoderState::new(n, edges * config.delta2),
            acc: vec![T::zero(); n],
            terms: vec![T::zero(); n],
            rotation: 0,
            packed: vec![0; n.div_ceil(64)],
            source,
            graph,
            checker,
            config,
        })
    }

    pub fn state(&self) -> &DecoderState<T> {
        &self.state
    }

    pub fn set_beta(&mut self, beta: f64) {
        self.config.beta = beta;
        self.beta = T::lit(beta);
    }

    fn iterate(&mut self) -> bool {
        let h = &*self.graph;
        let edges = h.num_edges();
        let s = &mut self.state;

        // the whole dilation set advances by `stride` each iteration
        let n = h.cols();
        let rot = (s.t % n) * (self.config.rotation_stride % n) % n;
        self.rotation = rot;
        let at = |src: u32| -> usize {
            let i = src as usize + n - rot;
            if i >= n { i - n } else { i }
        };
        for (v, &src) in s.v2c.iter_mut().zip(&self.source) {
            *v = s.llr[at(src)];
        }
        if self.rule == CheckRule::SumProduct {
            // every edge of a bit carries the same value, so its φ term is computed once
            for (p, &l) in self.terms.iter_mut().zip(&s.llr) {
                *p = phi_term(l);
            }
            for (c, &src) in s.c2v.iter_mut().zip(&self.source) {
                *c = self.terms[at(src)];
            }
        }
        for w in 0..self.config.delta2 {
            let base = w * edges;
            for j in 0..h.rows() {
                let r = h.row_edges(j);
                let r = base + r.start..base + r.end;
                match self.rule {
                    CheckRule::SumProduct => boxplus_from_terms(&s.v2c[r.clone()], &mut s.c2v[r]),
                    rule => rule.apply(&s.v2c[r.clone()], &mut s.c2v[r]),
                }
            }
        }
        self.acc.iter_mut().for_each(|a| *a = T::zero());
        for (&m, &src) in s.c2v.iter().zip(&self.source) {
            let a = &mut self.acc[at(src)];
            *a = *a + m;
        }
        for (l, &a) in s.llr.iter_mut().zip(&self.acc) {
            *l = clamp_llr(*l + self.beta * a);
        }
        s.t += 1;
        hard_decision_packed(&s.llr, &mut self.packed);
        self.checker.is_codeword_packed(&self.packed)
    }

    /// Edge-collapsed MI of the last dispatched messages, from one penalty
    /// per bit of `llr_prev` (the vector they were copied from).
    fn v2c_mi(&self, llr_prev: &[T]) -> f64 {
        let n = llr_prev.len();
        let penalty: Vec<f64> = llr_prev.iter().map(|&l| mi_penalty(l.as_f64())).collect();
        let sum: f64 = self
            .source
            .iter()
            .map(|&src| {
                let i = src as usize + n - self.rotation;
                penalty[if i >= n { i - n } else { i }]
            })
            .sum();
        1.0 - sum / self.source.len() as f64
    }
}

impl<T: Real> Decoder<T> for QuasiBpDecoder<T> {
    fn decode_with(&mut self, l_ch: &[T], mode: TraceMode) -> DecodeResult<T> {
        assert_eq!(l_ch.len(), self.graph.cols(), "channel frame length");
        self.state.reset(l_ch);
        let mut trace = (mode != TraceMode::Off).then(|| DecodeTrace {
            blocks: self.config.delta2,
            edges_per_block: self.graph.num_edges(),
            iterations: Vec::new(),
        });
        let mut converged = false;
        while self.state.t < self.config.l_max {
            let llr_prev = trace.as_ref().map(|_| self.state.llr.clone());
            converged = self.iterate();
            if let (Some(tr), Some(prev)) = (trace.as_mut(), llr_prev) {
                let s = &self.state;
                tr.iterations.push(IterationTrace {
                    t: s.t,
                    i_ev: self.v2c_mi(&prev),
                    i_ec: edge_collapsed_mi(&s.c2v),
                    snapshot: (mode == TraceMode::Full).then(|| MessageSnapshot {
                        v2c: s.v2c.clone(),
                        c2v: s.c2v.clone(),
                        llr: s.llr.clone(),
                    }),
                });
            }
            if converged && self.config.early_termination {
                break;
            }
        }
        DecodeResult {
            c_hat: hard_decision(&self.state.llr),
            converged,
            iterations_used: self.state.t,
            llr: self.state.llr.clone(),
            trace,
        }
    }

    fn config(&self) -> &DecoderConfig {
        &self.config
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::{Algorithm, DecoderConfig};
    use crate::gf2::{bch_code, build_parity_matrix, evenly_spaced_offsets, CodeSpec, RedundancyConfig};
    use approx::assert_relative_eq;

    fn hamming() -> (CodeSpec, Arc<ParityMatrix>) {
        let c = bch_code(3, 1).unwrap();
        let h = Arc::new(build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap());
        (c, h)
    }

    fn quasi_config(h: &ParityMatrix, delta2: usize, beta: f64, l_max: usize) -> DecoderConfig {
        DecoderConfig::quasi(Algorithm::QuasiBp, l_max, h.cols(), delta2).with_beta(beta)
    }

    #[test]
    fn dilation_identity_and_inverse() {
        let l = vec![1.0, -2.0, 3.0, 4.0, 5.0];
        assert_eq!(dilate(&l, &[0]), vec![l.clone()]);
        let offs = evenly_spaced_offsets(5, 3);
        let back = revert(&dilate(&l, &offs), &offs);
        assert!(back.iter().all(|b| *b == l));
        assert_eq!(back.len(), 3);
    }

    #[test]
    fn merge_edge_cases() {
        let (_, h) = hamming();
        let prev = vec![0.5, -1.0, 2.0, 0.0, 1.0, 1.0, -3.0];
        let zeros = vec![vec![0.0; h.num_edges()]];
        assert_eq!(merge(&h, &prev, &zeros, 0.7, &[0]), prev);
        let ones = vec![vec![1.0; h.num_edges()]; 2];
        assert_eq!(merge(&h, &prev, &ones, 0.0, &[0, 3]), prev);
        // single message m on edge (check 0, variable 2)
        let mut one = vec![0.0; h.num_edges()];
        let e = h.row_edges(0).zip(h.row(0)).find(|&(_, &i)| i == 2).unwrap().0;
        one[e] = -1.5;
        let out = merge(&h, &prev, &[one], 0.4, &[0]);
        assert_relative_eq!(out[2], 2.0 - 0.4 * 1.5, epsilon = 1e-12);
        assert_eq!(out[0], prev[0]);
    }

    #[test]
    fn merge_agrees_with_decoder_internals() {
        let c = bch_code(7, 4).unwrap();
        let h = Arc::new(build_parity_matrix(&c, &RedundancyConfig::new(&c, 1.5).unwrap()).unwrap());
        let cfg = quasi_config(&h, 4, 0.05, 1);
        let offs = cfg.dilation_offsets.clone();
        let mut d = QuasiBpDecoder::<f64>::new(h.clone(), h.clone(), cfg).unwrap();
        let l: Vec<f64> = (0..c.n).map(|i| ((i * 37 % 11) as f64 - 3.0) / 2.0).collect();
        let r = d.decode_with(&l, TraceMode::Full);
        let snap = r.trace.unwrap().iterations[0].snapshot.clone().unwrap();
        let edges = h.num_edges();
        // dispatched messages are the dilated copies of L^(0)
        for (w, block) in dilate(&l, &offs).iter().enumerate() {
            for (e, &i) in h.edge_vars().iter().enumerate() {
                assert_eq!(snap.v2c[w * edges + e], block[i]);
            }
        }
        let blocks: Vec<Vec<f64>> = snap.c2v.chunks(edges).map(|b| b.to_vec()).collect();
        let expect = merge(&h, &l, &blocks, 0.05, &offs);
        for (a, b) in expect.iter().zip(&snap.llr) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn dilation_set_rotates_between_iterations() {
        let c = bch_code(7, 4).unwrap();
        let h = Arc::new(build_parity_matrix(&c, &RedundancyConfig::new(&c, 2.0).unwrap()).unwrap());
        let mut cfg = quasi_config(&h, 3, 0.02, 3);
        cfg.rotation_stride = 5;
        let offs = cfg.dilation_offsets.clone();
        let mut d = QuasiBpDecoder::<f64>::new(h.clone(), h.clone(), cfg).unwrap();
        let l: Vec<f64> = (0..c.n).map(|i| ((i * 29 % 13) as f64 - 6.0) / 5.0).collect();
        let r = d.decode_with(&l, TraceMode::Full);
        let tr = r.trace.unwrap();
        assert_eq!(tr.iterations.len(), 3, "frame must not converge early");
        let edges = h.num_edges();
        for t in 1..3 {
            let prev = &tr.iterations[t - 1].snapshot.as_ref().unwrap().llr;
            let snap = tr.iterations[t].snapshot.as_ref().unwrap();
            let shifted: Vec<usize> = offs.iter().map(|&s| (s + 5 * t) % c.n).collect();
            for (w, block) in dilate(prev, &shifted).iter().enumerate() {
                for (e, &i) in h.edge_vars().iter().enumerate() {
                    assert_eq!(snap.v2c[w * edges + e], block[i]);
                }
            }
            let blocks: Vec<Vec<f64>> = snap.c2v.chunks(edges).map(|b| b.to_vec()).collect();
            let expect = merge(&h, prev, &blocks, 0.02, &shifted);
            for (a, b) in expect.iter().zip(&snap.llr) {
                assert_relative_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn frobenius_blocks_permute_by_doubling() {
        let c = bch_code(3, 1).unwrap();
        let h = Arc::new(build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap());
        let mut cfg = quasi_config(&h, 2, 0.1, 1);
        cfg.dilation_offsets = vec![0, 1];
        cfg.dilation_scales = vec![1, 2];
        let mut d = QuasiBpDecoder::<f64>::new(h.clone(), h.clone(), cfg).unwrap();
        let l: Vec<f64> = (0..7).map(|i| 1.0 + i as f64).collect();
        let snap = d.decode_with(&l, TraceMode::Full).trace.unwrap().iterations[0].snapshot.clone().unwrap();
        let edges = h.num_edges();
        for (e, &p) in h.edge_vars().iter().enumerate() {
            // bit i sits at position 2i + 1 in block 1
            let i = (0..7).find(|&i| (2 * i + 1) % 7 == p).unwrap();
            assert_eq!(snap.v2c[edges + e], l[i]);
        }
    }

    #[test]
    fn zero_beta_freezes_llr() {
        let (_, h) = hamming();
        let mut d = QuasiBpDecoder::<f64>::new(h.clone(), h.clone(), quasi_config(&h, 3, 0.0, 6)).unwrap();
        let l = [1.0, -0.5, 2.0, 0.3, 0.4, 0.1, 0.9];
        let r = d.decode(&l);
        assert_eq!(r.llr, l.to_vec());
        assert!(!r.converged);
        assert_eq!(r.iterations_used, 6);
    }

    #[test]
    fn noiseless_frame_converges_in_one_iteration() {
        let c = bch_code(7, 10).unwrap();
        let h = Arc::new(build_parity_matrix(&c, &RedundancyConfig::new(&c, 2.0).unwrap()).unwrap());
        let base = Arc::new(build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap());
        let cfg = DecoderConfig::quasi(Algorithm::QuasiBp, 20, c.n, 15);
        let mut d = QuasiBpDecoder::<f64>::new(h, base, cfg).unwrap();
        let r = d.decode(&vec![25.0; c.n]);
        assert!(r.converged && r.is_all_zero());
        assert_eq!(r.iterations_used, 1);
    }

    #[test]
    fn corrects_single_flips_on_hamming() {
        let (c, h) = hamming();
        let mut d = QuasiBpDecoder::<f64>::new(h.clone(), h.clone(), quasi_config(&h, 1, 0.5, 10)).unwrap();
        for m in 0..16u8 {
            let cw = c.encode(&(0..4).map(|i| (m >> i) & 1).collect::<Vec<_>>()).unwrap();
            for flip in 0..7 {
                let l: Vec<f64> = cw
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| {
                        let v = if b == 0 { 2.0 } else { -2.0 };
                        if i == flip { -0.5 * v } else { v }
                    })
                    .collect();
                let r = d.decode(&l);
                assert!(r.converged, "m={m} flip={flip}");
                assert_eq!(r.c_hat, cw);
            }
        }
    }

    #[test]
    fn deterministic() {
        let c = bch_code(7, 4).unwrap();
        let h = Arc::new(build_parity_matrix(&c, &RedundancyConfig::new(&c, 2.0).unwrap()).unwrap());
        let cfg = DecoderConfig::quasi(Algorithm::QuasiBp, 10, c.n, 5);
        let mut a = QuasiBpDecoder::<f64>::new(h.clone(), h.clone(), cfg.clone()).unwrap();
        let mut b = QuasiBpDecoder::<f64>::new(h.clone(), h, cfg).unwrap();
        let l: Vec<f64> = (0..c.n).map(|i| ((i * 13 % 7) as f64 - 1.5) * 0.8).collect();
        assert_eq!(a.decode(&l), b.decode(&l));
        assert_eq!(a.decode(&l), a.decode(&l));
    }

    #[test]
    fn tracing_without_early_termination() {
        let c = bch_code(4, 2).unwrap();
        let h = Arc::new(build_parity_matrix(&c, &RedundancyConfig::new(&c, 1.5).unwrap()).unwrap());
        let base = Arc::new(build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap());
        let mut cfg = DecoderConfig::quasi(Algorithm::QuasiBp, 6, c.n, 3).with_beta(0.3);
        cfg.early_termination = false;
        let mut d = QuasiBpDecoder::<f64>::new(h, base, cfg).unwrap();
        let l: Vec<f64> = (0..c.n).map(|i| if i == 4 { -0.7 } else { 1.1 + 0.1 * i as f64 }).collect();
        let r = d.decode_with(&l, TraceMode::Full);
        assert_eq!(r.iterations_used, 6);
        let tr = r.trace.unwrap();
        assert_eq!(tr.iterations.len(), 6);
        for it in &tr.iterations {
            let snap = it.snapshot.as_ref().unwrap();
            // per-bit penalties give the same value as summing over every edge
            assert_relative_eq!(it.i_ev, edge_collapsed_mi(&snap.v2c), epsilon = 1e-12);
            assert_relative_eq!(it.i_ec, edge_collapsed_mi(&snap.c2v), epsilon = 1e-15);
        }
    }
}
