//! Matrix `p → q` operator norms and the constructive machinery around their
//! inapproximability: norm evaluation engines, a Label Cover to matrix
//! Fourier reduction, ℓ2/ℓp → ℓq embeddings, Kronecker amplification and the
//! Gaussian / Rademacher / p-stable moment toolkit.
//!
//! Dense linear algebra and the norm engines are generic over [`Scalar`]
//! (`f32` or `f64`); the aliases below fix the common `f64` instantiation.
//! Probability routines work in `f64`.

pub mod amplify;
pub mod embeddings;
pub mod error;
pub mod io;
pub mod linalg;
pub mod norm;
pub mod numerics;
pub mod reduction;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, Exponent, ExponentPair, NormKind};
pub use scalar::Scalar;

/// `f64` dense matrix.
pub type Matrix = DenseMatrix<f64>;
/// `f32` dense matrix.
pub type Matrix32 = DenseMatrix<f32>;
