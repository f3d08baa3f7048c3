//! Numerical substrate: dense complex matrices and Lindblad superoperators,
//! steady states by singular-value decomposition, the Dawson/erfi pair and
//! Gauss–Hermite averaging over a Gaussian line.

mod linalg;
mod quadrature;
mod special;

pub use linalg::{
    hamiltonian_superoperator, liouvillian_term, steady_state, transition, ComplexMatrix,
    DensityMatrix, Superoperator, DEGENERACY_THRESHOLD, RESIDUAL_TOLERANCE,
};
pub use quadrature::{
    gauss_hermite_average, gauss_hermite_average_with_estimate, gauss_hermite_average_with_pole,
    try_gauss_hermite_average, GaussHermiteRule, InhomLine, MIN_NODES, POLE_CLEARANCE,
};
pub use special::{dawson, erfi, faddeeva, j_function};
