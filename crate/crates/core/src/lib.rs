//! Steady-state electromagnetically induced transparency in three-level
//! Lambda and four-level N systems, ensemble averaging over a Gaussian
//! inhomogeneous line, and the resulting cross-Kerr phase shift on a
//! coherent probe.
//!
//! All frequencies inside [`lambda3`], [`nsys4`] and [`ensemble`] are angular
//! and measured in units of the spontaneous decay rate Γ. SI quantities only
//! appear in [`qnd::MaterialParams`].
//!
//! Superoperators use column-stacking vectorization throughout: the density
//! matrix element ρ(i, j) lives at index `i + j * d` of `vec(ρ)`.

pub mod ensemble;
pub mod error;
pub mod lambda3;
pub mod nsys4;
pub mod numkernel;
pub mod parallel;
pub mod qnd;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Atomic level labels shared by the Lambda and N systems.
pub mod level {
    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const C: usize = 2;
    pub const D: usize = 3;
}
