//! Parity-check matrices with Tanner-graph adjacency, including redundant
//! matrices built from cyclic shifts of a dual codeword.

use crate::error::{Error, Result};

use super::bch::{cyclic_shift, CodeSpec};
use super::matrix::BitMatrix;
use super::search::low_weight_dual_codewords;

/// Binary M×N parity-check matrix with message-passing indices.
///
/// Edges are numbered row-major: the edges of check `j` occupy
/// `row_start[j]..row_start[j + 1]`, in increasing variable order.
#[derive(Clone, Debug)]
pub struct ParityMatrix {
    bits: BitMatrix,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
    row_start: Vec<usize>,
    edge_var: Vec<usize>,
    col_edges: Vec<Vec<usize>>,
}

impl PartialEq for ParityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for ParityMatrix {}

impl ParityMatrix {
    /// Builds from per-row variable index sets over `cols` columns.
    pub fn from_row_adjacency(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut bits = BitMatrix::zeros(rows.len(), cols);
        let mut row_adj = Vec::with_capacity(rows.len());
        for (j, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            row.dedup();
            if let Some(&bad) = row.iter().find(|&&i| i >= cols) {
                return Err(Error::InvalidConfig(format!("row {j} references column {bad} >= {cols}")));
            }
            for &i in &row {
                bits.set(j, i, true);
            }
            row_adj.push(row);
        }
        Ok(Self::index(bits, row_adj))
    }

    /// Builds from dense 0/1 rows.
    pub fn from_dense(rows: &[Vec<u8>], cols: usize) -> Self {
        let bits = BitMatrix::from_rows(rows, cols);
        let row_adj = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i).collect())
            .collect();
        Self::index(bits, row_adj)
    }

    fn index(bits: BitMatrix, row_adj: Vec<Vec<usize>>) -> Self {
        let cols = bits.cols();
        let mut col_adj = vec![Vec::new(); cols];
        let mut col_edges = vec![Vec::new(); cols];
        let mut row_start = Vec::with_capacity(row_adj.len() + 1);
        let mut edge_var = Vec::new();
        row_start.push(0);
        for (j, row) in row_adj.iter().enumerate() {
            for &i in row {
                col_adj[i].push(j);
                col_edges[i].push(edge_var.len());
                edge_var.push(i);
            }
            row_start.push(edge_var.len());
        }
        Self { bits, row_adj, col_adj, row_start, edge_var, col_edges }
    }

    pub fn rows(&self) -> usize {
        self.bits.rows()
    }

    pub fn cols(&self) -> usize {
        self.bits.cols()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Variable indices 𝒱(j) of check `j`.
    pub fn row(&self, j: usize) -> &[usize] {
        &self.row_adj[j]
    }

    /// Check indices 𝒞(i) of variable `i`.
    pub fn col(&self, i: usize) -> &[usize] {
        &self.col_adj[i]
    }

    /// Edge id range of check `j`.
    #[inline]
    pub fn row_edges(&self, j: usize) -> std::ops::Range<usize> {
        self.row_start[j]..self.row_start[j + 1]
    }

    /// Variable endpoint of every edge.
    #[inline]
    pub fn edge_vars(&self) -> &[usize] {
        &self.edge_var
    }

    /// Edge ids incident to variable `i`, in check order.
    #[inline]
    pub fn col_edges(&self, i: usize) -> &[usize] {
        &self.col_edges[i]
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn rank(&self) -> usize {
        self.bits.rank()
    }

    pub fn max_row_degree(&self) -> usize {
        self.row_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_degree(&self) -> usize {
        self.col_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_row_degree(&self) -> f64 {
        if self.rows() == 0 {
            0.0
        } else {
            self.num_edges() as f64 / self.rows() as f64
        }
    }

    /// `H · c^T`; component `j` is the XOR of `c_hat` over 𝒱(j).
    pub fn syndrome(&self, c_hat: &[u8]) -> Result<Vec<u8>> {
        if c_hat.len() != self.cols() {
            return Err(Error::LengthMismatch { expected: self.cols(), got: c_hat.len() });
        }
        Ok(self.bits.mul_vec(c_hat))
    }

    /// True when every check is satisfied by the packed hard decision.
    #[inline]
    pub fn is_codeword_packed(&self, packed: &[u64]) -> bool {
        (0..self.rows()).all(|j| self.bits.row_dot(j, packed) == 0)
    }

    pub fn is_codeword(&self, c_hat: &[u8]) -> bool {
        c_hat.len() == self.cols() && self.is_codeword_packed(&BitMatrix::pack(c_hat))
    }
}

/// Dual codewords the redundant rows are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowGenerator {
    /// Every row is a shift of the reversed parity polynomial.
    ParityPolynomial,
    /// Row `j` is a shift of the `j`-th lightest dual codeword class found by
    /// [`low_weight_dual_codewords`], cycling when fewer classes exist.
    LowWeight { rounds: usize, seed: u64 },
}

impl RowGenerator {
    pub const DEFAULT_LOW_WEIGHT: RowGenerator = RowGenerator::LowWeight { rounds: 400, seed: 1 };
}

/// How many redundant rows to use and which cyclic shifts generate them.
#[derive(Clone, Debug, PartialEq)]
pub struct RedundancyConfig {
    pub delta1: f64,
    pub row_count: usize,
    pub shift_offsets: Vec<usize>,
    pub generator: RowGenerator,
}

impl RedundancyConfig {
    /// `M = round(δ₁·(N−K))` rows (ties to even, so 1.5·63 → 94) with evenly
    /// spread offsets `round(j·N/M)`, drawn from low-weight dual codewords.
    pub fn new(code: &CodeSpec, delta1: f64) -> Result<Self> {
        if !(delta1 >= 1.0) {
            return Err(Error::InvalidConfig(format!("delta1 must be >= 1, got {delta1}")));
        }
        let n = code.n;
        let row_count = (delta1 * code.redundancy() as f64).round_ties_even() as usize;
        if row_count > n {
            return Err(Error::InvalidConfig(format!("delta1={delta1} asks for {row_count} rows > N={n}")));
        }
        let shift_offsets = evenly_spaced_offsets(n, row_count);
        Ok(Self::with_offsets(n, delta1, shift_offsets)?.with_generator(RowGenerator::DEFAULT_LOW_WEIGHT))
    }

    /// The textbook cyclic parity-check matrix: offsets `0..N−K`.
    pub fn standard(code: &CodeSpec) -> Self {
        let r = code.redundancy();
        Self { delta1: 1.0, row_count: r, shift_offsets: (0..r).collect(), generator: RowGenerator::ParityPolynomial }
    }

    pub fn with_generator(mut self, generator: RowGenerator) -> Self {
        self.generator = generator;
        self
    }

    /// Explicit offsets of the parity-polynomial row; they must be distinct modulo `n`.
    pub fn with_offsets(n: usize, delta1: f64, offsets: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n];
        for &s in &offsets {
            let s = s % n;
            if seen[s] {
                return Err(Error::InvalidConfig(format!("shift offset {s} repeated modulo {n}")));
            }
            seen[s] = true;
        }
        Ok(Self { delta1, row_count: offsets.len(), shift_offsets: offsets, generator: RowGenerator::ParityPolynomial })
    }
}

/// `round(j·n/count)` for `j = 0..count`; distinct whenever `count ≤ n`.
pub fn evenly_spaced_offsets(n: usize, count: usize) -> Vec<usize> {
    (0..count).map(|j| ((j * n) as f64 / count as f64).round() as usize % n).collect()
}

/// Builds the (possibly redundant) parity-check matrix; the result must have rank N−K.
pub fn build_parity_matrix(code: &CodeSpec, cfg: &RedundancyConfig) -> Result<ParityMatrix> {
    match cfg.generator {
        RowGenerator::ParityPolynomial => build_from_dual_rows(code, &[code.dual_row()], cfg),
        RowGenerator::LowWeight { rounds, seed } => {
            if cfg.row_count > code.n {
                return Err(Error::InvalidConfig(format!("{} rows exceed N={}", cfg.row_count, code.n)));
            }
            let mut words = low_weight_dual_codewords(code, rounds, cfg.row_count, seed);
            if words.is_empty() {
                words.push(code.dual_row());
            }
            let rows = pick_independent_rows(code, &words, &cfg.shift_offsets);
            finish(code, rows)
        }
    }
}

/// Row `j` is normally `words[j mod C]` shifted by `offsets[j]`. Once the rows
/// left can no longer afford a dependent choice, the next class that raises
/// the rank is taken instead, then the parity-polynomial row.
fn pick_independent_rows(code: &CodeSpec, words: &[Vec<u8>], offsets: &[usize]) -> Vec<Vec<u8>> {
    let need = code.redundancy();
    let mut basis: Vec<(usize, Vec<u8>)> = Vec::new();
    let reduce = |basis: &[(usize, Vec<u8>)], row: &[u8]| -> Vec<u8> {
        let mut v = row.to_vec();
        for (pivot, b) in basis {
            if v[*pivot] == 1 {
                v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
            }
        }
        v
    };
    let fallback = code.dual_row();
    let mut rows = Vec::with_capacity(offsets.len());
    for (j, &s) in offsets.iter().enumerate() {
        let slack = basis.len() + (offsets.len() - j) > need;
        let evaluate = |w: &Vec<u8>| {
            let row = cyclic_shift(w, s as isize);
            let residue = reduce(&basis, &row);
            let pivot = residue.iter().position(|&b| b == 1);
            (row, residue, pivot)
        };
        let preferred = &words[j % words.len()];
        let (row, residue, pivot) = (0..words.len())
            .map(|k| &words[(j + k) % words.len()])
            .chain(std::iter::once(&fallback))
            .map(evaluate)
            .find(|(_, _, pivot)| slack || pivot.is_some())
            .unwrap_or_else(|| evaluate(preferred));
        if let Some(p) = pivot {
            for (_, b) in basis.iter_mut() {
                if b[p] == 1 {
                    b.iter_mut().zip(&residue).for_each(|(x, y)| *x ^= y);
                }
            }
            basis.push((p, residue));
        }
        rows.push(row);
    }
    rows
}

fn finish(code: &CodeSpec, rows: Vec<Vec<u8>>) -> Result<ParityMatrix> {
    let h = ParityMatrix::from_dense(&rows, code.n);
    let rank = h.rank();
    if rank != code.redundancy() {
        return Err(Error::DegenerateOffsets { rank, expected: code.redundancy() });
    }
    Ok(h)
}

/// Rows are shifts of a single dual codeword, one per offset in `cfg`.
pub fn build_from_dual_row(code: &CodeSpec, dual_row: &[u8], cfg: &RedundancyConfig) -> Result<ParityMatrix> {
    build_from_dual_rows(code, std::slice::from_ref(&dual_row.to_vec()), cfg)
}

/// Row `j` is `words[j mod words.len()]` shifted by `cfg.shift_offsets[j]`.
pub fn build_from_dual_rows(code: &CodeSpec, words: &[Vec<u8>], cfg: &RedundancyConfig) -> Result<ParityMatrix> {
    if cfg.row_count > code.n {
        return Err(Error::InvalidConfig(format!("{} rows exceed N={}", cfg.row_count, code.n)));
    }
    if words.is_empty() {
        return Err(Error::InvalidConfig("no generating dual codewords".into()));
    }
    let rows: Vec<Vec<u8>> = cfg
        .shift_offsets
        .iter()
        .enumerate()
        .map(|(j, &s)| cyclic_shift(&words[j % words.len()], s as isize))
        .collect();
    finish(code, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::bch::bch_code;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_matrix_for_7_4() {
        let c = bch_code(3, 1).unwrap();
        let h = build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap();
        assert_eq!((h.rows(), h.cols(), h.rank()), (3, 7, 3));
        // h(x) = x^4 + x^2 + x + 1, reversed: 1 + x^2 + x^3 + x^4
        assert_eq!(h.row(0), &[0, 2, 3, 4]);
    }

    #[test]
    fn adjacency_views_agree() {
        let c = bch_code(7, 10).unwrap();
        let h = build_parity_matrix(&c, &RedundancyConfig::new(&c, 2.0).unwrap()).unwrap();
        for j in 0..h.rows() {
            for (e, &i) in h.row_edges(j).zip(h.row(j)) {
                assert_eq!(h.edge_vars()[e], i);
                assert!(h.col(i).contains(&j));
                assert!(h.col_edges(i).contains(&e));
                assert!(h.bits().get(j, i));
            }
        }
        let total: usize = (0..h.cols()).map(|i| h.col(i).len()).sum();
        assert_eq!(total, h.num_edges());
    }

    #[test]
    fn row_counts_follow_rounding_rule() {
        let c = bch_code(7, 10).unwrap();
        assert_eq!(RedundancyConfig::new(&c, 1.5).unwrap().row_count, 94);
        assert_eq!(RedundancyConfig::new(&c, 2.0).unwrap().row_count, 126);
        let c255 = bch_code(8, 2).unwrap();
        assert_eq!(RedundancyConfig::new(&c255, 2.0).unwrap().row_count, 32);
        assert!(RedundancyConfig::new(&c, 2.1).is_err());
        assert!(RedundancyConfig::new(&c, 0.5).is_err());
    }

    #[test]
    fn repeated_offsets_rejected() {
        assert!(RedundancyConfig::with_offsets(7, 1.0, vec![0, 7]).is_err());
    }

    #[test]
    fn redundant_matrices_keep_rank_and_annihilate_codewords() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (m, t) in [(7, 10), (7, 4), (8, 2)] {
            let c = bch_code(m, t).unwrap();
            for delta1 in [1.0, 1.5, 2.0] {
                let h = build_parity_matrix(&c, &RedundancyConfig::new(&c, delta1).unwrap()).unwrap();
                assert_eq!(h.rank(), c.redundancy());
                for _ in 0..25 {
                    let msg: Vec<u8> = (0..c.k).map(|_| rng.random_range(0..2)).collect();
                    let cw = c.encode(&msg).unwrap();
                    assert!(h.syndrome(&cw).unwrap().iter().all(|&s| s == 0));
                }
            }
        }
    }

    #[test]
    fn low_weight_rows_are_lighter_and_distinct() {
        let c = bch_code(7, 10).unwrap();
        let cfg = RedundancyConfig::new(&c, 2.0).unwrap();
        assert_eq!(cfg.generator, RowGenerator::DEFAULT_LOW_WEIGHT);
        let h = build_parity_matrix(&c, &cfg).unwrap();
        let poly = build_parity_matrix(&c, &cfg.clone().with_generator(RowGenerator::ParityPolynomial)).unwrap();
        assert_eq!(poly.max_row_degree(), 34);
        // minimum distance of the (127,63) dual
        assert_eq!(h.max_row_degree(), 22);
        let mut rows: Vec<Vec<u8>> = (0..h.rows()).map(|j| h.bits().row_bits(j)).collect();
        rows.sort();
        rows.dedup();
        assert_eq!(rows.len(), 126);
        assert_eq!(build_parity_matrix(&c, &cfg).unwrap(), h, "construction is deterministic");
    }

    #[test]
    fn single_class_duals_fall_back_to_shifts() {
        // the (7,3) simplex code has one nonzero weight class
        let c = bch_code(3, 1).unwrap();
        let h = build_parity_matrix(&c, &RedundancyConfig::new(&c, 2.0).unwrap()).unwrap();
        assert_eq!((h.rows(), h.rank(), h.max_row_degree()), (6, 3, 4));
    }

    #[test]
    fn rank_deficient_offsets_are_reported() {
        let c = bch_code(7, 10).unwrap();
        let cfg = RedundancyConfig::with_offsets(c.n, 1.0, vec![0, 1, 2]).unwrap();
        assert!(matches!(build_parity_matrix(&c, &cfg), Err(Error::DegenerateOffsets { rank: 3, .. })));
    }

    #[test]
    fn syndrome_length_checked() {
        let c = bch_code(3, 1).unwrap();
        let h = build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap();
        assert!(h.syndrome(&[0; 6]).is_err());
        assert_eq!(h.syndrome(&[0; 7]).unwrap(), vec![0; 3]);
    }

    #[test]
    fn every_single_bit_flip_is_detected() {
        let c = bch_code(3, 1).unwrap();
        let h = build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap();
        for msg in 0..16u8 {
            let bits: Vec<u8> = (0..4).map(|i| (msg >> i) & 1).collect();
            let cw = c.encode(&bits).unwrap();
            assert!(h.is_codeword(&cw));
            for flip in 0..7 {
                let mut e = cw.clone();
                e[flip] ^= 1;
                assert!(h.syndrome(&e).unwrap().contains(&1), "msg={msg} flip={flip}");
            }
        }
    }

    #[test]
    fn shifted_codewords_stay_codewords() {
        let c = bch_code(3, 1).unwrap();
        let h = build_parity_matrix(&c, &RedundancyConfig::standard(&c)).unwrap();
        for msg in 0..16u8 {
            let bits: Vec<u8> = (0..4).map(|i| (msg >> i) & 1).collect();
            let cw = c.encode(&bits).unwrap();
            for s in 0..7 {
                assert!(h.is_codeword(&cyclic_shift(&cw, s)));
            }
        }
    }
}
