//! Randomized search for low-weight codewords of the dual of a cyclic code.
//!
//! Each round reduces the standard parity-check matrix to row echelon form
//! over a random pivot order, then inspects single rows and pairwise sums
//! (Lee-Brickell with p = 2). Candidates are kept up to cyclic rotation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bch::CodeSpec;
use super::poly::Gf2Poly;

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn weight(v: &[u64]) -> usize {
    v.iter().map(|w| w.count_ones() as usize).sum()
}

fn unpack(v: &[u64], n: usize) -> Vec<u8> {
    (0..n).map(|i| (v[i / 64] >> (i % 64) & 1) as u8).collect()
}

/// Lexicographically smallest rotation, used to identify cyclic-shift classes.
fn canonical_rotation(bits: &[u8]) -> Vec<u8> {
    let n = bits.len();
    let at = |s: usize, i: usize| bits[(i + s) % n];
    let best = (1..n).fold(0, |best, s| {
        match (0..n).map(|i| at(s, i).cmp(&at(best, i))).find(|o| o.is_ne()) {
            Some(std::cmp::Ordering::Less) => s,
            _ => best,
        }
    });
    (0..n).map(|i| at(best, i)).collect()
}

/// Whether the cyclic shifts of `bits` span the whole dual code, i.e.
/// `gcd(c(x), x^n + 1)` has degree k.
pub fn spans_dual(code: &CodeSpec, bits: &[u8]) -> bool {
    let c = Gf2Poly::from_bits(bits.iter().copied());
    let xn1 = &Gf2Poly::monomial(code.n) + &Gf2Poly::one();
    c.gcd(&xn1).degree() == Some(code.k)
}

/// Up to `keep` lowest-weight dual codewords found in `rounds` rounds, one per
/// cyclic class, sorted by weight then canonically. Every returned word
/// generates the full dual code under cyclic shifts.
pub fn low_weight_dual_codewords(code: &CodeSpec, rounds: usize, keep: usize, seed: u64) -> Vec<Vec<u8>> {
    let n = code.n;
    let r = code.redundancy();
    let nw = words(n);
    let base_row = code.dual_row();
    let base: Vec<Vec<u64>> = (0..r)
        .map(|s| {
            let mut v = vec![0u64; nw];
            for (i, &b) in base_row.iter().enumerate() {
                if b != 0 {
                    let j = (i + s) % n;
                    v[j / 64] |= 1 << (j % 64);
                }
            }
            v
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut threshold = usize::MAX;
    let mut order: Vec<usize> = (0..n).collect();
    let mut scratch = vec![0u64; nw];

    let offer = |v: &[u64], found: &mut Vec<(usize, Vec<u8>)>, threshold: &mut usize| {
        let w = weight(v);
        if w == 0 || w > *threshold {
            return;
        }
        let bits = unpack(v, n);
        if !spans_dual(code, &bits) {
            return;
        }
        let canon = canonical_rotation(&bits);
        if found.iter().any(|(_, c)| *c == canon) {
            return;
        }
        found.push((w, canon));
        found.sort();
        found.truncate(keep);
        if found.len() == keep {
            *threshold = found[keep - 1].0;
        }
    };

    for _ in 0..rounds {
        order.shuffle(&mut rng);
        let mut rows = base.clone();
        let mut rank = 0;
        for &col in &order {
            if rank == r {
                break;
            }
            let (wi, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..r).find(|&q| rows[q][wi] & bit != 0) else { continue };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (q, row) in rows.iter_mut().enumerate() {
                if q != rank && row[wi] & bit != 0 {
                    row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            rank += 1;
        }
        for a in 0..r {
            offer(&rows[a], &mut found, &mut threshold);
            for b in a + 1..r {
                scratch.iter_mut().zip(rows[a].iter().zip(&rows[b])).for_each(|(s, (x, y))| *s = x ^ y);
                offer(&scratch, &mut found, &mut threshold);
            }
        }
    }
    found.into_iter().map(|(_, bits)| bits).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::bch::bch_code;

    #[test]
    fn hamming_dual_is_the_simplex_code() {
        // every nonzero codeword of the (7,3) simplex code has weight 4
        let c = bch_code(3, 1).unwrap();
        let words = low_weight_dual_codewords(&c, 5, 3, 1);
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].iter().filter(|&&b| b == 1).count(), 4);
    }

    #[test]
    fn results_are_dual_codewords() {
        let c = bch_code(7, 10).unwrap();
        let words = low_weight_dual_codewords(&c, 20, 4, 7);
        assert!(!words.is_empty());
        let msg: Vec<u8> = (0..c.k).map(|i| (i % 3 == 0) as u8).collect();
        let cw = c.encode(&msg).unwrap();
        for w in &words {
            assert!(spans_dual(&c, w));
            let dot = w.iter().zip(&cw).fold(0u8, |acc, (a, b)| acc ^ (a & b));
            assert_eq!(dot, 0);
        }
        let weights: Vec<usize> = words.iter().map(|w| w.iter().filter(|&&b| b == 1).count()).collect();
        assert!(weights.windows(2).all(|p| p[0] <= p[1]));
        assert!(weights[0] <= c.dual_row().iter().filter(|&&b| b == 1).count());
    }
}
