//! Invariant features, spectral-norm surrogates, and amplification-initialized
//! CP decomposition for dense 3-way tensors.
//!
//! The pieces fit together like this: [`diagrams`] evaluates colored Brauer
//! diagrams (overlays of three perfect matchings) on a tensor, producing
//! features invariant under per-mode orthogonal transformations. [`norms`]
//! specializes the degree-4 diagrams into two cheap upper bounds on the tensor
//! spectral norm. [`amplify`] takes their gradients, cubic maps that boost
//! dominant rank-1 structure against noise. [`decompose`] uses amplified
//! Quick-Rank-1 deflation to initialize CP alternating least squares, and
//! [`bench`] measures how much that initialization helps on noisy low-rank
//! recovery problems.

pub mod amplify;
pub mod bench;
pub mod decompose;
pub mod diagrams;
pub mod error;
pub mod norms;
pub mod tensor3;

pub use error::{Error, Result};
pub use tensor3::{Matrix, RankOneTriple, Tensor3};
