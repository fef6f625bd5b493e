//! Dense bit matrices over GF(2).

/// Row-major GF(2) matrix with rows packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    /// Builds from 0/1 rows; every row must have `cols` entries.
    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {r} has wrong length");
            for (c, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    /// Packs a 0/1 vector into words compatible with [`BitMatrix::row_words`].
    pub fn pack(bits: &[u8]) -> Vec<u64> {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        words
    }

    /// Parity of `row r` AND `v` for a packed vector.
    #[inline]
    pub fn row_dot(&self, r: usize, packed: &[u64]) -> u8 {
        let ones: u32 = self.row_words(r).iter().zip(packed).map(|(a, b)| (a & b).count_ones()).sum();
        (ones & 1) as u8
    }

    /// `H · v^T` for a 0/1 vector of length `cols`.
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        let packed = Self::pack(v);
        (0..self.rows).map(|r| self.row_dot(r, &packed)).collect()
    }

    /// Rank via Gaussian elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let wpr = self.words_per_row;
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..self.rows).find(|&r| m[r * wpr + w] & bit != 0) else {
                continue;
            };
            if p != rank {
                for k in 0..wpr {
                    m.swap(p * wpr + k, rank * wpr + k);
                }
            }
            for r in 0..self.rows {
                if r != rank && m[r * wpr + w] & bit != 0 {
                    for k in 0..wpr {
                        m[r * wpr + k] ^= m[rank * wpr + k];
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hamming_h() -> BitMatrix {
        BitMatrix::from_rows(
            &[
                vec![1, 0, 0, 1, 1, 0, 1],
                vec![0, 1, 0, 1, 0, 1, 1],
                vec![0, 0, 1, 0, 1, 1, 1],
            ],
            7,
        )
    }

    #[test]
    fn hamming_rank_is_three() {
        assert_eq!(hamming_h().rank(), 3);
    }

    #[test]
    fn duplicate_rows_do_not_add_rank() {
        let h = hamming_h();
        let mut rows: Vec<Vec<u8>> = (0..3).map(|r| h.row_bits(r)).collect();
        let sum: Vec<u8> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a ^ b).collect();
        rows.push(sum);
        rows.push(rows[2].clone());
        assert_eq!(BitMatrix::from_rows(&rows, 7).rank(), 3);
    }

    #[test]
    fn wide_matrices_span_word_boundaries() {
        let n = 130;
        let rows: Vec<Vec<u8>> = (0..n).map(|r| (0..n).map(|c| (c == r) as u8).collect()).collect();
        assert_eq!(BitMatrix::from_rows(&rows, n).rank(), n);
        let v: Vec<u8> = (0..n).map(|i| (i % 3 == 0) as u8).collect();
        assert_eq!(BitMatrix::from_rows(&rows, n).mul_vec(&v), v);
    }

    proptest! {
        #[test]
        fn rank_bounded_by_shape(bits in proptest::collection::vec(0u8..2, 5 * 70)) {
            let rows: Vec<Vec<u8>> = bits.chunks(70).map(|c| c.to_vec()).collect();
            let m = BitMatrix::from_rows(&rows, 70);
            prop_assert!(m.rank() <= 5);
        }
    }
}
