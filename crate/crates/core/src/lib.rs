//! Discrete harmonic-analysis operators on ℤ.
//!
//! The crate implements the discrete Hilbert transform, the centered maximal
//! operator, the discrete Riesz potential and the two-singularity fractional
//! series operator `T_{α,β}` on finitely supported sequences; discrete
//! `(p,q,d)`-atoms and Hardy-space quasi-norm enclosures; FFT-based fast paths
//! for the Toeplitz and Hankel kernels; a certified sign computation for the
//! total sum of `U_γ b` with `b = (1, -2, 1)`, which witnesses that
//! `U_γ = T_{(1-γ)/2,(1-γ)/2}` is unbounded from `H^p(ℤ)` into `H^q(ℤ)`; and
//! an experiment harness for the classical inequalities these operators obey.
//!
//! Every quantity that involves an infinite tail is returned as an
//! [`Enclosure`], an interval known to contain the exact value.

// `!(x > 0.0)` rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atoms;
pub mod counterexample;
pub mod enclosure;
pub mod error;
pub mod fastops;
pub mod lab;
pub mod numeric;
pub mod operators;
pub mod report;
pub mod seq;

pub use enclosure::Enclosure;
pub use error::{Error, Result};
pub use operators::{OperatorParams, TaylorTailSpec};
pub use report::ExperimentReport;
pub use seq::Sequence;
