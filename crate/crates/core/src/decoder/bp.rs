//! Flooding-schedule BP and min-sum decoders.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::ParityMatrix;
use crate::scalar::{clamp_llr, Real};

use super::{
    edge_collapsed_mi, hard_decision, hard_decision_packed, CheckRule, DecodeResult, DecodeTrace, Decoder,
    DecoderConfig, DecoderState, IterationTrace, MessageSnapshot, TraceMode,
};

/// Extrinsic variable update: `v2c = l_ch + Σ_{p ∈ 𝒞(i)\j} c2v_p`.
pub fn bp_variable_update<T: Real>(h: &ParityMatrix, l_ch: &[T], c2v: &[T], v2c: &mut [T]) {
    for (i, &ch) in l_ch.iter().enumerate() {
        let edges = h.col_edges(i);
        let total = edges.iter().fold(ch, |acc, &e| acc + c2v[e]);
        for &e in edges {
            v2c[e] = clamp_llr(total - c2v[e]);
        }
    }
}

/// Applies `rule` on every check row.
pub fn check_update<T: Real>(h: &ParityMatrix, rule: CheckRule, v2c: &[T], c2v: &mut [T]) {
    for j in 0..h.rows() {
        let r = h.row_edges(j);
        rule.apply(&v2c[r.clone()], &mut c2v[r]);
    }
}

/// `l_i = l_ch,i + Σ_{p ∈ 𝒞(i)} c2v_p`.
pub fn a_posteriori<T: Real>(h: &ParityMatrix, l_ch: &[T], c2v: &[T], out: &mut [T]) {
    for (i, (&ch, o)) in l_ch.iter().zip(out.iter_mut()).enumerate() {
        *o = clamp_llr(h.col_edges(i).iter().fold(ch, |acc, &e| acc + c2v[e]));
    }
}

/// Canonical flooding decoder (BP, MS, NMS or OMS).
#[derive(Clone)]
pub struct BpDecoder<T> {
    graph: Arc<ParityMatrix>,
    checker: Arc<ParityMatrix>,
    config: DecoderConfig,
    rule: CheckRule,
    state: DecoderState<T>,
    packed: Vec<u64>,
}

impl<T: Real> BpDecoder<T> {
    pub fn new(graph: Arc<ParityMatrix>, checker: Arc<ParityMatrix>, config: DecoderConfig) -> Result<Self> {
        if config.algorithm.is_quasi() {
            return Err(Error::InvalidConfig(format!("{} is not a flooding algorithm", config.algorithm)));
        }
        let n = graph.cols();
        if checker.cols() != n {
            return Err(Error::LengthMismatch { expected: n, got: checker.cols() });
        }
        config.validate(n)?;
        let state = DecoderState::new(n, graph.num_edges());
        Ok(Self { rule: config.check_rule(), packed: vec![0; n.div_ceil(64)], graph, checker, config, state })
    }

    pub fn state(&self) -> &DecoderState<T> {
        &self.state
    }

    /// One flooding iteration; returns true when the hard decision is a codeword.
    fn iterate(&mut self) -> bool {
        let h = &*self.graph;
        let s = &mut self.state;
        bp_variable_update(h, &s.l_ch, &s.c2v, &mut s.v2c);
        check_update(h, self.rule, &s.v2c, &mut s.c2v);
        a_posteriori(h, &s.l_ch, &s.c2v, &mut s.llr);
        s.t += 1;
        hard_decision_packed(&s.llr, &mut self.packed);
        self.checker.is_codeword_packed(&self.packed)
    }
}

impl<T: Real> Decoder<T> for BpDecoder<T> {
    fn decode_with(&mut self, l_ch: &[T], mode: TraceMode) -> DecodeResult<T> {
        assert_eq!(l_ch.len(), self.graph.cols(), "channel frame length");
        self.state.reset(l_ch);
        let mut trace = (mode != TraceMode::Off).then(|| DecodeTrace {
            blocks: 1,
            edges_per_block: self.graph.num_edges(),
            iterations: Vec::new(),
        });
        let mut converged = false;
        while self.state.t < self.config.l_max {
            converged = self.iterate();
            if let Some(tr) = trace.as_mut() {
                let s = &self.state;
                tr.iterations.push(IterationTrace {
                    t: s.t,
                    i_ev: edge_collapsed_mi(&s.v2c),
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
