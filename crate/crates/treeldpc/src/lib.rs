//! Tree-based LDPC codes: constructions, structural analysis, pseudocodeword
//! weights, and iterative-decoding simulation.
//!
//! The crate builds four families of LDPC constraint graphs by enumerating a
//! regular tree and closing it with permutation- or Latin-square-based
//! connections, verifies their structural parameters (girth, diameter,
//! dimension, minimum distance, tree bounds), extracts pseudocodewords from
//! finite graph covers, and runs seeded Monte-Carlo decoding simulations over
//! the binary-input AWGN channel and the p-ary symmetric channel.

pub mod channel;
pub mod config;
pub mod construct;
pub mod decode;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod pseudo;
pub mod report;
pub mod sim;
pub mod tanner;

pub use error::{Error, Result};
