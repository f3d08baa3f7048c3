//! Averages over a Gaussian inhomogeneous line.
//!
//! The mutual detuning Δ (for the Λ coherences) or the signal detuning Δ3
//! (for the N coherences, taken to share the |b⟩ linewidth) is distributed as
//! [`InhomLine`]; the two-photon detuning δ is the same for every emitter.
//! Closed forms are written with `J(d) = exp(-d²) erfi(d)` evaluated through
//! Dawson's integral so they stay finite at any detuning.

use std::f64::consts::{PI, SQRT_2};

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lambda3::{dispersion_rcb, steady_state3, LambdaParams};
use crate::level::{B, C};
use crate::nsys4::NParams;
use crate::numkernel::{faddeeva, j_function, try_gauss_hermite_average, POLE_CLEARANCE};

pub use crate::numkernel::InhomLine;

/// Second-order ensemble ρ_cb. The series is linear in Δ, so the average
/// replaces Δ by the line centre Δ0.
pub fn ensemble_rho_cb_second_order(p: &LambdaParams, line: &InhomLine) -> Result<Complex64> {
    p.validate()?;
    line.validate()?;
    let (o1, o2, g) = (p.omega1, p.omega2, p.gamma_sp);
    let s = o1 * o1 + o2 * o2;
    let d = p.two_photon;
    let r = dispersion_rcb(o1, o2)?;
    let bracket = Complex64::new(
        -d + (o1 * o1 - 3.0 * o2 * o2) * line.delta0 * d * d / (s * s),
        g * d * d / s,
    );
    Ok(-r * bracket)
}

/// Ensemble ρ_cb from the exact steady state at each mutual detuning of the
/// line; `p.delta` is ignored.
pub fn ensemble_rho_cb_exact(p: &LambdaParams, line: &InhomLine) -> Result<Complex64> {
    p.validate()?;
    try_gauss_hermite_average(
        |delta| Ok(steady_state3(&p.with_detunings(delta, p.two_photon))?.element(C, B)),
        line,
    )
}

/// Principal-value average `⟨1/Δ⟩ = √(π/2γ²) J(d)`, `d = Δ0/√(2γ²)`.
pub fn reciprocal_detuning_average(line: &InhomLine) -> f64 {
    (PI / 2.0).sqrt() / line.gamma_inh * j_function(line.reduced_detuning())
}

fn warn_near_line(line: &InhomLine) {
    if line.delta0.abs() < POLE_CLEARANCE * line.gamma_inh {
        warn!(
            "mean detuning {} within {POLE_CLEARANCE} linewidths: resonant absorption of the signal not modelled",
            line.delta0
        );
    }
}

/// Ensemble ρ_ab of the N system with Δ3 drawn from `line`:
/// `-√(π/2γ²) Ω1Ω2²Ω3²/(Ω1²+Ω2²)² J(d)`.
pub fn ensemble_coherence_ab(p: &NParams, line: &InhomLine) -> Result<Complex64> {
    p.lambda.validate()?;
    line.validate()?;
    warn_near_line(line);
    let l = &p.lambda;
    let s = p.rabi_sum_sq();
    let amp = l.omega1 * l.omega2 * l.omega2 * p.omega3 * p.omega3 / (s * s);
    Ok(Complex64::new(
        -amp * reciprocal_detuning_average(line),
        0.0,
    ))
}

/// Ensemble ρ_cd in the large-detuning form:
/// `-√(π/2γ²) Ω1²Ω3/(Ω1²+Ω2²) J(d)`.
pub fn ensemble_coherence_cd(p: &NParams, line: &InhomLine) -> Result<Complex64> {
    p.lambda.validate()?;
    line.validate()?;
    warn_near_line(line);
    let l = &p.lambda;
    let s = p.rabi_sum_sq();
    let amp = l.omega1 * l.omega1 * p.omega3 / s;
    Ok(Complex64::new(
        -amp * reciprocal_detuning_average(line),
        0.0,
    ))
}

/// Line average of `2/(2Δ3 + iΓ)`, the complex detuning factor shared by the
/// exact ρ_ab and ρ_cd:
/// `-i √(π/2γ²) conj w((-Δ0 + iΓ/2)/√(2γ²))` with `w` the Faddeeva function.
/// Valid for any line centre, resonance included.
pub fn complex_detuning_average(gamma_sp: f64, line: &InhomLine) -> Result<Complex64> {
    line.validate()?;
    if gamma_sp <= 0.0 || !gamma_sp.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Γ must be positive, got {gamma_sp}"
        )));
    }
    let scale = SQRT_2 * line.gamma_inh;
    let w = faddeeva(Complex64::new(-line.delta0, 0.5 * gamma_sp) / scale)?;
    Ok(Complex64::new(0.0, -(PI / 2.0).sqrt() / line.gamma_inh) * w.conj())
}

/// Ensemble ρ_ab keeping the `(2Δ3 + iΓ)` denominator, averaged numerically.
/// Its imaginary part is the residual absorption on the probe.
pub fn ensemble_coherence_ab_exact(p: &NParams, line: &InhomLine) -> Result<Complex64> {
    p.lambda.validate()?;
    let l = &p.lambda;
    let s = p.rabi_sum_sq();
    let amp = l.omega1 * l.omega2 * l.omega2 * p.omega3 * p.omega3 / (s * s);
    Ok(-amp * complex_detuning_average(l.gamma_sp, line)?)
}

/// `J(d) = exp(-d²) erfi(d)`.
pub fn j_curve(d: f64) -> f64 {
    j_function(d)
}

/// Argmax of `J` by golden-section search (tolerance 1e-6).
pub fn optimal_detuning() -> f64 {
    golden_section_max(j_curve, 0.0, 3.0, 1e-6)
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Reduced detuning `d > d*` on the falling side of the curve where
/// `J(d) = target`.
pub fn detuning_for_j(target: f64) -> Result<f64> {
    let d_star = optimal_detuning();
    let j_max = j_curve(d_star);
    if !(target > 0.0 && target < j_max) {
        return Err(Error::Domain(format!(
            "J target must lie in (0, {j_max:.6}), got {target}"
        )));
    }
    // J(d) ~ 1/(√π d) for large d, which brackets the root.
    let (mut lo, mut hi) = (d_star, 2.0 / (PI.sqrt() * target) + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j_curve(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Two readings of how far an inhomogeneous line at reduced detuning `d`
/// cuts the ensemble coherence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetuningPenalty {
    pub d: f64,
    /// `⟨1/Δ3⟩` over `1/Δ0`: inhomogeneous versus homogeneous at the same
    /// mean detuning, `√π d J(d)`.
    pub vs_homogeneous_same_detuning: f64,
    /// `J(d)/J(d*)`: the cost of sitting at `d` rather than at the optimum.
    pub vs_optimal_detuning: f64,
}

pub fn detuning_penalty(d: f64) -> DetuningPenalty {
    DetuningPenalty {
        d,
        vs_homogeneous_same_detuning: PI.sqrt() * d * j_curve(d),
        vs_optimal_detuning: j_curve(d) / j_curve(optimal_detuning()),
    }
}
