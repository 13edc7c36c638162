//! Shared numerical kernels: log-space quadrature, bracketed root finding,
//! dense symmetric eigendecomposition and log-combinatorics.

pub mod eigen;
pub mod quadrature;
pub mod roots;
pub mod special;

pub use eigen::{lowest_eigenpair, lowest_eigenpairs, symmetric_eigen, SymmetricEigen};
pub use quadrature::{expectations, log_integral, Expectations, QuadratureSpec};
pub use roots::{find_root, golden_section_max};
pub use special::{ln_binomial, ln_gamma, ln_two_cosh, log_sum_exp};
