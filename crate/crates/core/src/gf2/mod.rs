//! Binary cyclic codes, GF(2) linear algebra and parity-check matrices.

pub mod alist;
pub mod bch;
pub mod field;
pub mod matrix;
pub mod parity;
pub mod poly;
pub mod search;

pub use alist::{load_alist, save_alist};
pub use bch::{bch_code, code_by_key, cyclic_shift, CodeSpec};
pub use field::{minimal_polynomial, GaloisField};
pub use matrix::BitMatrix;
pub use parity::{
    build_from_dual_row, build_from_dual_rows, build_parity_matrix, evenly_spaced_offsets, ParityMatrix, RedundancyConfig,
    RowGenerator,
};
pub use poly::Gf2Poly;
pub use search::{low_weight_dual_codewords, spans_dual};
