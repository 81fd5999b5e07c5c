//! Noncommutative perspectives of operator monotone functions on real
//! symmetric positive-definite matrices.
//!
//! Functions are carried by their Löwner triple `(a, b, w)`,
//!
//! ```text
//! f(t) = a + b t + ∫_(0,∞) t λ / (t + λ) dw(λ),
//! ```
//!
//! and can be evaluated on matrices either spectrally (eigendecomposition)
//! or through the resolvent integral. The [`identities`] module builds the
//! quadrature right-hand sides of the difference identities for
//! perspectives, geometric means and relative entropy, and compares them
//! against spectrally computed left-hand sides.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` deliberately rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ensemble;
pub mod error;
pub mod identities;
pub mod loewner;
pub mod matrix;
pub mod perspective;
pub mod quadrature;
pub mod random;
pub mod spd;

pub use error::{Error, Result};
pub use loewner::{LoewnerFunction, Measure, OperatorFunction, TransposeView};
pub use matrix::Matrix;
pub use quadrature::{IntegralResult, QuadraturePlan};
pub use spd::{EigenPair, SpdMatrix, SymMatrix};
