//! Dense matrices, norm conventions, exponent arithmetic and Kronecker
//! products.

pub mod decomp;
pub mod exponent;
pub mod kron;
pub mod matrix;
pub mod norms;

pub use exponent::{dual_exponent, Exponent, ExponentPair, NormKind};
pub use kron::{kron, kron_capped, kron_power, kron_vec, DEFAULT_MAX_ENTRIES};
pub use matrix::DenseMatrix;
pub use norms::{norm_kind_convert, operator_kind_factor, vector_norm};
