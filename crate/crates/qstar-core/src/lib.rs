//! Finite-dimensional models of normed quasi *-algebras.
//!
//! A pair `(A, A₀)` is modeled on one complex coordinate space carrying a
//! *-algebra structure and a norm. On top of that the crate provides tensor
//! cross-norms, the tensor product pair, representable functionals with their
//! GNS representations, positivity cones, *-semisimplicity and full
//! representability checks, and discretized Lᵖ models.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod check;
pub mod cross;
pub mod error;
pub mod linalg;
pub mod lmi;
pub mod lp;
pub mod norm;
pub mod operator;
pub mod oracle;
pub mod pair;
pub mod represent;
pub mod ser;
pub mod tensor;
pub mod tensor_reps;

pub use algebra::StarAlgebraModel;
pub use cross::{CrossNorm, CrossNormResult, TensorElement};
pub use error::{Error, Result};
pub use norm::NormSpec;
pub use operator::{OperatorMatrix, DEFAULT_SEED};
pub use pair::{QuasiPair, Side};
