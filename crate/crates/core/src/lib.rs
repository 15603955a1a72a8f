//! Numerical kernels for relativistic quantum mechanics built on a pure-jump
//! Lévy process, and for its cubic-cutoff mass-spectrum extension.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is a pure
//! function of its inputs; IO, file formats and the command line live in the
//! `levyqm` crate.
#![no_std]
// negated comparisons reject NaN; quadrature constants are quoted as tabulated
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bessel;
pub mod cubic;
pub mod density;
pub mod error;
pub mod evolution;
pub mod exponents;
pub mod fft;
pub mod grid;
pub mod ks;
pub mod propagator;
pub mod quad;
pub mod sampler;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
