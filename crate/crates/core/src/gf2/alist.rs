//! Reader and writer for the alist sparse-matrix format (1-indexed).
//!
//! Layout:
//!
//! ```text
//! N M
//! max_col_degree max_row_degree
//! <N column degrees>
//! <M row degrees>
//! <N lines: check indices of each column>
//! <M lines: variable indices of each row>
//! ```
//!
//! Zero entries used as padding are skipped on read and never written.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::parity::ParityMatrix;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as numbers, with its 1-based line number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        loop {
            let Some((idx, line)) = self.inner.next() else {
                return Err(Error::AlistParse { line: 0, msg: format!("unexpected end of file while reading {what}") });
            };
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::AlistParse { line: line_no, msg: format!("bad integer `{tok}`") })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((line_no, nums));
        }
    }
}

fn expect_len(line: usize, nums: &[usize], len: usize, what: &str) -> Result<()> {
    if nums.len() != len {
        return Err(Error::AlistParse { line, msg: format!("expected {len} {what}, found {}", nums.len()) });
    }
    Ok(())
}

/// Parses alist text into a parity matrix.
pub fn load_alist(text: &str) -> Result<ParityMatrix> {
    let mut lines = Lines { inner: text.lines().enumerate() };

    let (ln, dims) = lines.next_numbers("dimensions")?;
    expect_len(ln, &dims, 2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);

    let (ln, maxes) = lines.next_numbers("maximum degrees")?;
    expect_len(ln, &maxes, 2, "maximum degrees")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);

    let (ln, col_deg) = lines.next_numbers("column degrees")?;
    expect_len(ln, &col_deg, n, "column degrees")?;
    if col_deg.iter().any(|&d| d > max_col) {
        return Err(Error::AlistParse { line: ln, msg: "column degree exceeds declared maximum".into() });
    }
    let (ln, row_deg) = lines.next_numbers("row degrees")?;
    expect_len(ln, &row_deg, m, "row degrees")?;
    if row_deg.iter().any(|&d| d > max_row) {
        return Err(Error::AlistParse { line: ln, msg: "row degree exceeds declared maximum".into() });
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(Error::AlistParse { line: ln, msg: "row and column degree totals differ".into() });
    }

    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (i, &deg) in col_deg.iter().enumerate() {
        let (ln, nums) = lines.next_numbers("column adjacency")?;
        let entries = one_based(ln, &nums, m)?;
        if entries.len() != deg {
            return Err(Error::AlistParse { line: ln, msg: format!("column {} lists {} checks, degree is {deg}", i + 1, entries.len()) });
        }
        cols.push(entries);
    }
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut row_lines = Vec::with_capacity(m);
    for (j, &deg) in row_deg.iter().enumerate() {
        let (ln, nums) = lines.next_numbers("row adjacency")?;
        let entries = one_based(ln, &nums, n)?;
        if entries.len() != deg {
            return Err(Error::AlistParse { line: ln, msg: format!("row {} lists {} variables, degree is {deg}", j + 1, entries.len()) });
        }
        rows.push(entries);
        row_lines.push(ln);
    }

    let h = ParityMatrix::from_row_adjacency(n, rows).map_err(|e| Error::AlistParse { line: 0, msg: e.to_string() })?;
    for (j, &ln) in row_lines.iter().enumerate() {
        if h.row(j).len() != row_deg[j] {
            return Err(Error::AlistParse { line: ln, msg: format!("row {} repeats a variable", j + 1) });
        }
    }
    for (i, mut listed) in cols.into_iter().enumerate() {
        listed.sort_unstable();
        if listed != h.col(i) {
            return Err(Error::AlistParse {
                line: 0,
                msg: format!("column {} adjacency disagrees with row lists", i + 1),
            });
        }
    }
    Ok(h)
}

fn one_based(line: usize, nums: &[usize], bound: usize) -> Result<Vec<usize>> {
    nums.iter()
        .filter(|&&x| x != 0)
        .map(|&x| {
            if x > bound {
                Err(Error::AlistParse { line, msg: format!("index {x} out of range 1..={bound}") })
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

/// Serialises a parity matrix as alist text without zero padding.
pub fn save_alist(h: &ParityMatrix) -> String {
    let mut out = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "{} {}", h.cols(), h.rows());
    let _ = writeln!(out, "{} {}", h.max_col_degree(), h.max_row_degree());
    let _ = writeln!(out, "{}", join(&mut (0..h.cols()).map(|i| h.col(i).len())));
    let _ = writeln!(out, "{}", join(&mut (0..h.rows()).map(|j| h.row(j).len())));
    for i in 0..h.cols() {
        let _ = writeln!(out, "{}", join(&mut h.col(i).iter().map(|&j| j + 1)));
    }
    for j in 0..h.rows() {
        let _ = writeln!(out, "{}", join(&mut h.row(j).iter().map(|&i| i + 1)));
    }
    out
}
