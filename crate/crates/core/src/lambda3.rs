//! Three-level Λ system: states |a⟩, |b⟩, |c⟩ with field 1 on a–b, field 2 on
//! b–c, and |b⟩ decaying to both ground states.
//!
//! Frequencies are in units of Γ.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::level::{A, B, C};
use crate::numkernel::{
    hamiltonian_superoperator, liouvillian_term, steady_state, transition, ComplexMatrix,
    DensityMatrix, Superoperator,
};
use crate::qnd::MaterialParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaParams {
    /// Field 1 (a–b) Rabi frequency.
    pub omega1: f64,
    /// Field 2 (b–c) Rabi frequency.
    pub omega2: f64,
    /// Mutual one-photon detuning Δ.
    pub delta: f64,
    /// Two-photon detuning δ.
    pub two_photon: f64,
    /// Spontaneous decay rate; 1 in internal units.
    pub gamma_sp: f64,
}

impl LambdaParams {
    pub fn new(omega1: f64, omega2: f64) -> Self {
        Self {
            omega1,
            omega2,
            delta: 0.0,
            two_photon: 0.0,
            gamma_sp: 1.0,
        }
    }

    pub fn with_detunings(self, delta: f64, two_photon: f64) -> Self {
        Self {
            delta,
            two_photon,
            ..self
        }
    }

    /// Rabi frequencies must be positive for the closed-form results; the
    /// exact generator accepts zero.
    pub fn validate(&self) -> Result<()> {
        if !(self.omega1 > 0.0 && self.omega2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Rabi frequencies must be positive, got Ω1={} Ω2={}",
                self.omega1, self.omega2
            )));
        }
        if self.gamma_sp <= 0.0 || self.gamma_sp.is_nan() {
            return Err(Error::InvalidParameter("Γ must be positive".into()));
        }
        if !(self.delta.is_finite() && self.two_photon.is_finite()) {
            return Err(Error::InvalidParameter("detunings must be finite".into()));
        }
        Ok(())
    }

    fn rabi_sum_sq(&self) -> f64 {
        self.omega1 * self.omega1 + self.omega2 * self.omega2
    }
}

/// Rotating-frame Hamiltonian in the |a⟩, |b⟩, |c⟩ basis:
/// `diag(0, Δ, δ)` with Ω1 on a–b and Ω2 on b–c.
pub fn hamiltonian3(p: &LambdaParams) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(
        3,
        3,
        &[
            0.0,
            p.omega1,
            0.0, //
            p.omega1,
            p.delta,
            p.omega2, //
            0.0,
            p.omega2,
            p.two_photon,
        ],
    )
}

/// Decay channels `σ_ab`, `σ_cb`, each at rate Γ.
///
/// This is the branch normalization under which the closed-form series below
/// (imaginary parts of ρ_ac and ρ_cb, absorption, N-system ρ_bb) agree with
/// the exact steady state.
pub(crate) fn lambda_dissipator(dim: usize, gamma: f64) -> Superoperator {
    liouvillian_term(&transition(A, B, dim), gamma).expect("square channel")
        + liouvillian_term(&transition(C, B, dim), gamma).expect("square channel")
}

/// Master-equation generator `-i[H, ·] + Σ L[B_j, ·]`.
pub fn generator3(p: &LambdaParams) -> Superoperator {
    hamiltonian_superoperator(&hamiltonian3(p)).expect("square Hamiltonian")
        + lambda_dissipator(3, p.gamma_sp)
}

/// Exact steady state of [`generator3`].
pub fn steady_state3(p: &LambdaParams) -> Result<DensityMatrix> {
    steady_state(&generator3(p))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeriesOrder {
    First,
    Second,
}

impl TryFrom<u32> for SeriesOrder {
    type Error = Error;
    fn try_from(order: u32) -> Result<Self> {
        match order {
            1 => Ok(SeriesOrder::First),
            2 => Ok(SeriesOrder::Second),
            _ => Err(Error::InvalidParameter(format!(
                "series order must be 1 or 2, got {order}"
            ))),
        }
    }
}

/// Coefficients of δ⁰, δ¹, δ² of one density-matrix element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesCoefficients {
    pub zeroth: Complex64,
    pub first: Complex64,
    /// Only known in closed form for ρ_cb.
    pub second: Option<Complex64>,
}

impl SeriesCoefficients {
    fn linear(zeroth: f64, first: Complex64) -> Self {
        Self {
            zeroth: Complex64::new(zeroth, 0.0),
            first,
            second: None,
        }
    }

    pub fn evaluate(&self, delta: f64) -> Complex64 {
        self.zeroth + self.first * delta + self.second.unwrap_or_default() * (delta * delta)
    }
}

/// Expansion of the steady state about two-photon resonance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesCoherences {
    pub rho_aa: SeriesCoefficients,
    pub rho_ab: SeriesCoefficients,
    pub rho_ac: SeriesCoefficients,
    pub rho_bb: SeriesCoefficients,
    pub rho_cb: SeriesCoefficients,
    pub rho_cc: SeriesCoefficients,
}

pub fn series_coherences(p: &LambdaParams) -> Result<SeriesCoherences> {
    p.validate()?;
    let (o1, o2, dd, g) = (p.omega1, p.omega2, p.delta, p.gamma_sp);
    let s = p.rabi_sum_sq();
    let re = |x: f64| Complex64::new(x, 0.0);
    let pop_slope = 2.0 * o1 * o1 * o2 * o2 * dd / s.powi(3);
    let r = dispersion_rcb(o1, o2)?;
    Ok(SeriesCoherences {
        rho_aa: SeriesCoefficients::linear(o2 * o2 / s, re(-pop_slope)),
        rho_ab: SeriesCoefficients::linear(0.0, re(o1 * o2 * o2 / (s * s))),
        rho_ac: SeriesCoefficients::linear(
            -o1 * o2 / s,
            Complex64::new(dd * (o1 * o1 - o2 * o2), -g * s) * (o1 * o2 / s.powi(3)),
        ),
        rho_bb: SeriesCoefficients::linear(0.0, re(0.0)),
        rho_cb: SeriesCoefficients {
            zeroth: re(0.0),
            first: re(r),
            second: Some(Complex64::new((o1 * o1 - 3.0 * o2 * o2) * dd / (s * s), g / s) * (-r)),
        },
        rho_cc: SeriesCoefficients::linear(o1 * o1 / s, re(pop_slope)),
    })
}

/// ρ_cb expanded to first or second order in δ.
pub fn rho_cb_series(p: &LambdaParams, order: SeriesOrder) -> Result<Complex64> {
    let s = series_coherences(p)?.rho_cb;
    let d = p.two_photon;
    Ok(match order {
        SeriesOrder::First => s.zeroth + s.first * d,
        SeriesOrder::Second => s.evaluate(d),
    })
}

/// First-order probe dispersion `R_cb = ∂Re ρ_cb/∂δ = -Ω1²Ω2/(Ω1²+Ω2²)²`.
pub fn dispersion_rcb(omega1: f64, omega2: f64) -> Result<f64> {
    if !(omega1 > 0.0 && omega2 > 0.0) {
        return Err(Error::Domain(format!(
            "dispersion needs positive Rabi frequencies, got ({omega1}, {omega2})"
        )));
    }
    let s = omega1 * omega1 + omega2 * omega2;
    Ok(-omega1 * omega1 * omega2 / (s * s))
}

/// Curvature of the absorption dip, `Im ρ_cb ≈ a δ²` with
/// `a = Ω1²Ω2Γ/(Ω1²+Ω2²)³`.
pub fn absorption_curvature(omega1: f64, omega2: f64) -> f64 {
    let s = omega1 * omega1 + omega2 * omega2;
    omega1 * omega1 * omega2 / s.powi(3)
}

/// Absorption of a Gaussian pulse of spectral width `f` centred on the
/// transparency window: `Ω1²Ω2Γf²/(Ω1²+Ω2²)³`.
pub fn pulse_absorption(omega1: f64, omega2: f64, bandwidth: f64) -> Result<f64> {
    if bandwidth < 0.0 {
        return Err(Error::Domain(format!("negative bandwidth {bandwidth}")));
    }
    Ok(absorption_curvature(omega1, omega2) * bandwidth * bandwidth)
}

/// Pulse bandwidth that gives absorption `target`.
pub fn bandwidth_for_absorption(omega1: f64, omega2: f64, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Domain(format!(
            "target absorption must lie in (0, 1), got {target}"
        )));
    }
    if !(omega1 > 0.0 && omega2 > 0.0) {
        return Err(Error::Domain("Rabi frequencies must be positive".into()));
    }
    Ok((target / absorption_curvature(omega1, omega2)).sqrt())
}

/// EIT group velocity (m/s) of a probe mode holding `n1` photons, in the
/// large-reduction limit:
///
/// `v_g = c ε0 ε_R ħ / (π ω 𝒩 μ²) · (Ω̃1² n1 + Ω2²)² / Ω2²`, `ω = 2πc/λ`.
///
/// `omega2` and `single_photon_omega1` are in s⁻¹. The bulk index η is not
/// used in this limit.
pub fn group_velocity(
    material: &MaterialParams,
    omega2: f64,
    single_photon_omega1: f64,
    n1: f64,
) -> f64 {
    use crate::qnd::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
    use std::f64::consts::PI;
    let omega_optical = 2.0 * PI * SPEED_OF_LIGHT / material.wavelength;
    let prefactor = SPEED_OF_LIGHT * EPSILON_0 * material.eps_r * HBAR
        / (PI * omega_optical * material.density * material.dipole * material.dipole);
    let drive = single_photon_omega1 * single_photon_omega1 * n1 + omega2 * omega2;
    prefactor * drive * drive / (omega2 * omega2)
}
