//! Numerical kernels: Hermitian matrices and eigensolvers, theta function,
//! quadrature and the portable random stream.

pub mod eigen;
pub mod hermitian;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use eigen::{hermitian_eig, hermitian_eigenvalues, symmetric_eig, EigenDecomposition};
pub use hermitian::{real_embed, HermitianMatrix, SymmetricMatrix, HERMITIAN_TOL};
pub use quadrature::{integrate_composite, integrate_fn, Integral, Rule};
pub use rng::SplitMix64;
pub use special::theta3;
