//! Iterative soft-decision decoding of binary BCH codes.
//!
//! The crate builds redundant parity-check matrices for primitive BCH codes,
//! decodes them with flooding BP / min-sum or with the quasi-BP decoder
//! (automorphism dilation plus weighted merging), measures mutual information
//! along the way, and estimates FER/BER by Monte-Carlo simulation.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the precision for the common cases.

pub mod channel;
pub mod cli;
pub mod decoder;
pub mod error;
pub mod exit;
pub mod gf2;
pub mod montecarlo;
pub mod scalar;
pub mod setup;

pub use error::{Error, Result};
pub use scalar::Real;
pub use setup::CodeSetup;

pub type BpDecoder64 = decoder::BpDecoder<f64>;
pub type BpDecoder32 = decoder::BpDecoder<f32>;
pub type QuasiBpDecoder64 = decoder::QuasiBpDecoder<f64>;
pub type QuasiBpDecoder32 = decoder::QuasiBpDecoder<f32>;
pub type DecodeResult64 = decoder::DecodeResult<f64>;
pub type DecodeResult32 = decoder::DecodeResult<f32>;
pub type LlrFrame64 = channel::LlrFrame<f64>;
pub type LlrFrame32 = channel::LlrFrame<f32>;
