//! Eigenvalue statistics of products of independent induced quaternion
//! Ginibre matrices.
//!
//! The crate covers the finite-N theory (weight function, skew-orthogonal
//! polynomials, prekernel, Pfaffian correlation functions, radial density),
//! the large-N asymptotic and limiting densities, and a Monte Carlo sampler
//! that checks the analytic density against eigenvalues of sampled products.

pub mod correlations;
pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod radial;
pub mod sampler;
pub mod scaled;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

/// Version string recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
