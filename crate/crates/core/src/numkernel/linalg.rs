use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul};

use log::warn;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Two singular values below this fraction of the largest mark a degenerate
/// steady state.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Bound on `‖G vec(ρ)‖ / ‖G‖` accepted from [`steady_state`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense rectangular complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        Self(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_slice(rows, cols, &c)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    /// Column-stacked vectorization.
    pub fn vectorize(&self) -> DVector<Complex64> {
        DVector::from_column_slice(self.0.as_slice())
    }

    /// Inverse of [`ComplexMatrix::vectorize`] for a d x d matrix.
    pub fn unvectorize(v: &DVector<Complex64>, d: usize) -> Result<Self> {
        if v.len() != d * d {
            return Err(Error::Dimension(format!(
                "vector of length {} is not a {d}x{d} matrix",
                v.len()
            )));
        }
        Ok(Self(DMatrix::from_column_slice(d, d, v.as_slice())))
    }

    /// Eigenvalues of the Hermitian part `(M + M†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `|i⟩⟨j|` on a `dim`-level system.
pub fn transition(i: usize, j: usize, dim: usize) -> ComplexMatrix {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    ComplexMatrix(m)
}

/// Linear map on column-stacked density matrices of a `dim`-level system.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl Superoperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: DMatrix::zeros(dim * dim, dim * dim),
        }
    }

    /// Level count `d`; the matrix itself is `d² x d²`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix given to a {}-level superoperator",
                rho.rows(),
                rho.cols(),
                self.dim
            )));
        }
        ComplexMatrix::unvectorize(&(&self.matrix * rho.vectorize()), self.dim)
    }

    /// Largest `|Σ_i G[(i,i), col]|` over columns: zero for a generator that
    /// preserves trace.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        (0..d * d)
            .map(|col| {
                (0..d)
                    .map(|i| self.matrix[(i + i * d, col)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

impl Add for Superoperator {
    type Output = Superoperator;
    fn add(mut self, rhs: Superoperator) -> Superoperator {
        self += rhs;
        self
    }
}

impl AddAssign for Superoperator {
    fn add_assign(&mut self, rhs: Superoperator) {
        assert_eq!(self.dim, rhs.dim, "superoperator dimensions differ");
        self.matrix += rhs.matrix;
    }
}

fn require_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows())
}

/// `ρ ↦ -i[H, ρ]`.
pub fn hamiltonian_superoperator(h: &ComplexMatrix) -> Result<Superoperator> {
    let d = require_square(h, "Hamiltonian")?;
    let id = DMatrix::<Complex64>::identity(d, d);
    // vec(AρB) = (Bᵀ ⊗ A) vec(ρ)
    let left = id.kronecker(h.as_matrix());
    let right = h.as_matrix().transpose().kronecker(&id);
    Ok(Superoperator {
        dim: d,
        matrix: (left - right) * (-I),
    })
}

/// `ρ ↦ rate (BρB† − ½{B†B, ρ})`.
pub fn liouvillian_term(channel: &ComplexMatrix, rate: f64) -> Result<Superoperator> {
    let d = require_square(channel, "channel operator")?;
    if rate < 0.0 || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "decay rate must be finite and non-negative, got {rate}"
        )));
    }
    let b = channel.as_matrix();
    let bdb = b.adjoint() * b;
    let id = DMatrix::<Complex64>::identity(d, d);
    let jump = b.conjugate().kronecker(b);
    let anti = id.kronecker(&bdb) + bdb.transpose().kronecker(&id);
    let matrix = (jump - anti * Complex64::new(0.5, 0.0)) * Complex64::new(rate, 0.0);
    Ok(Superoperator { dim: d, matrix })
}

/// Hermitian, unit-trace density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub const HERMITICITY_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const POSITIVITY_TOL: f64 = 1e-9;

    /// Validates against the tolerances above.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        require_square(&m, "density matrix")?;
        let rho = Self(m);
        rho.check()?;
        Ok(rho)
    }

    pub fn ground(dim: usize) -> Self {
        Self(transition(0, 0, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn population(&self, i: usize) -> f64 {
        self.0[(i, i)].re
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.0.as_matrix() - self.0.as_matrix().adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.hermitian_eigenvalues()[0]
    }

    pub fn check(&self) -> Result<()> {
        if !self.0.is_finite() {
            return Err(Error::InvalidParameter("non-finite density matrix".into()));
        }
        let herm = self.hermiticity_error();
        if herm > Self::HERMITICITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "density matrix not Hermitian (defect {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > Self::TRACE_TOL {
            return Err(Error::InvalidParameter(format!("trace {tr} is not 1")));
        }
        let ev = self.min_eigenvalue();
        if ev < -Self::POSITIVITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "negative eigenvalue {ev:e}"
            )));
        }
        Ok(())
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

/// Null vector of the generator, reshaped, Hermitized and trace-normalized.
///
/// The null direction is the right singular vector of the smallest singular
/// value. Fails when two or more singular values fall below
/// [`DEGENERACY_THRESHOLD`] times the largest.
pub fn steady_state(generator: &Superoperator) -> Result<DensityMatrix> {
    let d = generator.dim();
    let g = generator.as_matrix();
    let svd = g.clone().svd(false, true);
    let v_t = svd
        .v_t
        .as_ref()
        .expect("SVD was asked for right singular vectors");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.max();
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[a].total_cmp(&sigma[b]));

    // Right singular vector k is the conjugate of row k of Vᴴ.
    let null_vector = |k: usize| -> DVector<Complex64> { v_t.row(k).transpose().map(|z| z.conj()) };

    let small: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&k| sigma[k] < DEGENERACY_THRESHOLD * sigma_max)
        .collect();
    if small.len() >= 2 {
        let candidates = small
            .iter()
            .map(|&k| ComplexMatrix::unvectorize(&null_vector(k), d))
            .collect::<Result<Vec<_>>>()?;
        return Err(Error::DegenerateSteadyState { candidates });
    }
    if small.is_empty() {
        warn!(
            "generator has no singular value below {:e} relative (smallest {:e}); using nearest null direction",
            DEGENERACY_THRESHOLD,
            sigma[order[0]] / sigma_max
        );
    }

    let raw = ComplexMatrix::unvectorize(&null_vector(order[0]), d)?;
    let m = raw.as_matrix();
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = herm.trace();
    if tr.norm() < f64::EPSILON {
        return Err(Error::DegenerateSteadyState {
            candidates: vec![raw],
        });
    }
    let rho = ComplexMatrix(herm / tr);

    let residual = (g * rho.vectorize()).norm();
    let tolerance = RESIDUAL_TOLERANCE * generator.norm();
    if residual > tolerance {
        return Err(Error::Residual {
            residual,
            tolerance,
        });
    }
    Ok(DensityMatrix(rho))
}
