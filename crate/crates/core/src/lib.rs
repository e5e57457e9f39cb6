//! Extremal ranks, inertias and Löwner optima of the quadratic Hermitian
//! matrix-valued function `φ(X) = (AXB + C)M(AXB + C)* + D`.

pub mod convexity;
pub mod error;
pub mod exact;
pub mod float;
pub mod identities;
pub mod loewner;
pub mod lstsq;
pub mod matrix;
pub mod oracle;
pub mod qmvf;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use exact::GaussianRational;
pub use matrix::{block, range_included, HermitianMatrix, Inertia, Matrix};
pub use num_complex::Complex64;
pub use scalar::{Mode, Scalar};
