//! Four-level N system: the Λ system plus level |d⟩ coupled off-resonantly to
//! |c⟩ by the signal field.

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lambda3::{lambda_dissipator, LambdaParams};
use crate::level::{C, D};
use crate::numkernel::{
    hamiltonian_superoperator, liouvillian_term, steady_state, transition, ComplexMatrix,
    DensityMatrix, Superoperator,
};

/// Default bound on `(Ω3/Δ3)²` for the perturbative results.
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NParams {
    pub lambda: LambdaParams,
    /// Signal (c–d) Rabi frequency.
    pub omega3: f64,
    /// Signal detuning Δ3.
    pub delta3: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validity {
    /// `(Ω3/Δ3)²`, the off-resonant |d⟩ population scale.
    pub ratio: f64,
    pub epsilon: f64,
}

impl Validity {
    pub fn holds(&self) -> bool {
        self.ratio <= self.epsilon
    }
}

impl NParams {
    pub fn new(omega1: f64, omega2: f64, omega3: f64, delta3: f64) -> Self {
        Self {
            lambda: LambdaParams::new(omega1, omega2),
            omega3,
            delta3,
        }
    }

    pub fn validity(&self, epsilon: f64) -> Validity {
        let ratio = if self.delta3 == 0.0 {
            f64::INFINITY
        } else {
            (self.omega3 / self.delta3).powi(2)
        };
        Validity { ratio, epsilon }
    }

    /// Checks the closed-form preconditions. Breaking the perturbative bound
    /// only logs a warning so sweeps can probe the breakdown.
    fn check_perturbative(&self, epsilon: f64) -> Result<()> {
        self.lambda.validate()?;
        if self.delta3 == 0.0 {
            return Err(Error::Domain(
                "resonant signal (Δ3 = 0) is not treated".into(),
            ));
        }
        let v = self.validity(epsilon);
        if !v.holds() {
            warn!(
                "(Ω3/Δ3)² = {:.3e} exceeds ε = {:.3e}; perturbative results unreliable",
                v.ratio, v.epsilon
            );
        }
        if self.lambda.delta != 0.0 || self.lambda.two_photon != 0.0 {
            warn!("N-system closed forms assume Δ = δ = 0; Λ detunings ignored");
        }
        Ok(())
    }

    pub(crate) fn rabi_sum_sq(&self) -> f64 {
        self.lambda.omega1.powi(2) + self.lambda.omega2.powi(2)
    }
}

/// Hamiltonian in the |a⟩, |b⟩, |c⟩, |d⟩ basis: `diag(0, Δ, δ, Δ3)` with Ω1
/// (a–b), Ω2 (b–c) and Ω3 (c–d).
pub fn hamiltonian4(p: &NParams) -> ComplexMatrix {
    let l = &p.lambda;
    ComplexMatrix::from_real_rows(
        4,
        4,
        &[
            0.0,
            l.omega1,
            0.0,
            0.0, //
            l.omega1,
            l.delta,
            l.omega2,
            0.0, //
            0.0,
            l.omega2,
            l.two_photon,
            p.omega3, //
            0.0,
            0.0,
            p.omega3,
            p.delta3,
        ],
    )
}

/// Λ decay channels plus |d⟩ → |c⟩ at rate Γ.
pub fn generator4(p: &NParams) -> Superoperator {
    let gamma = p.lambda.gamma_sp;
    hamiltonian_superoperator(&hamiltonian4(p)).expect("square Hamiltonian")
        + lambda_dissipator(4, gamma)
        + liouvillian_term(&transition(C, D, 4), gamma).expect("square channel")
}

pub fn steady_state4(p: &NParams) -> Result<DensityMatrix> {
    steady_state(&generator4(p))
}

/// Light shift of |c⟩ seen as an effective two-photon detuning,
/// `δ = -Ω3²/Δ3`.
pub fn light_shift(omega3: f64, delta3: f64) -> Result<f64> {
    if delta3 == 0.0 {
        return Err(Error::Domain("light shift undefined for Δ3 = 0".into()));
    }
    if omega3.abs() > 0.1 * delta3.abs() {
        warn!("light shift used outside |Δ3| ≫ Ω3 (Ω3 = {omega3}, Δ3 = {delta3})");
    }
    Ok(-omega3 * omega3 / delta3)
}

/// ρ_ab from the light-shifted Λ series, `-Ω1Ω2²Ω3²/[(Ω1²+Ω2²)²Δ3]`.
pub fn rho_ab_light_shift(p: &NParams) -> Result<f64> {
    p.check_perturbative(DEFAULT_EPSILON)?;
    let s = p.rabi_sum_sq();
    let l = &p.lambda;
    Ok(-l.omega1 * l.omega2 * l.omega2 * p.omega3 * p.omega3 / (s * s * p.delta3))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbativeCoherences {
    pub rho_ab: Complex64,
    pub rho_cd: Complex64,
    pub rho_cb: Complex64,
}

/// Leading-order coherences in Ω3 at the Λ operating point Δ = δ = 0.
pub fn coherences_perturbative(p: &NParams) -> Result<PerturbativeCoherences> {
    p.check_perturbative(DEFAULT_EPSILON)?;
    let l = &p.lambda;
    let (o1, o2, o3, g) = (l.omega1, l.omega2, p.omega3, l.gamma_sp);
    let s = p.rabi_sum_sq();
    let plus = Complex64::new(2.0 * p.delta3, g);
    let minus = plus.conj();
    Ok(PerturbativeCoherences {
        rho_ab: -2.0 * o1 * o2 * o2 * o3 * o3 / (plus * s * s),
        rho_cd: -2.0 * o1 * o1 * o3 / (plus * s),
        rho_cb: 2.0 * o1 * o1 * o2 * o3 * o3 / (minus * s * s),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbativePopulations {
    pub rho_bb: f64,
    pub rho_dd: f64,
}

/// Excited-state populations to leading order in Ω3.
///
/// With `z = Ω2²/Ω1²`: `ρ_bb = z/(z+1)² · L`, `ρ_dd = 1/(z+1) · L`, where
/// `L = Ω3²/(Δ3² + (Γ/2)²)`.
pub fn populations_perturbative(p: &NParams) -> Result<PerturbativePopulations> {
    p.check_perturbative(DEFAULT_EPSILON)?;
    let l = &p.lambda;
    let s = p.rabi_sum_sq();
    let lorentz = p.omega3 * p.omega3 / (p.delta3 * p.delta3 + 0.25 * l.gamma_sp * l.gamma_sp);
    Ok(PerturbativePopulations {
        rho_bb: l.omega1 * l.omega1 * l.omega2 * l.omega2 / (s * s) * lorentz,
        rho_dd: l.omega1 * l.omega1 / s * lorentz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda3::steady_state3;
    use crate::level::{A, B};
    use approx::assert_relative_eq;

    fn point(o3: f64) -> NParams {
        NParams::new(0.1, 0.1, o3, 5.0)
    }

    #[test]
    fn decoupled_signal_embeds_lambda_state() {
        let p = NParams::new(0.5, 0.2, 0.0, 3.0);
        let four = steady_state4(&p).unwrap();
        let three = steady_state3(&p.lambda).unwrap();
        assert!(four.population(D).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                assert!((four.element(i, j) - three.element(i, j)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn light_shift_values() {
        assert_eq!(light_shift(0.0, 2.0).unwrap(), 0.0);
        assert_relative_eq!(light_shift(0.1, 10.0).unwrap(), -1e-3, max_relative = 1e-15);
        assert_eq!(
            light_shift(0.1, -10.0).unwrap(),
            -light_shift(0.1, 10.0).unwrap()
        );
        assert!(matches!(light_shift(0.1, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn no_signal_no_coherence() {
        let c = coherences_perturbative(&point(0.0)).unwrap();
        assert_eq!(c.rho_ab.norm() + c.rho_cd.norm() + c.rho_cb.norm(), 0.0);
    }

    #[test]
    fn gamma_to_zero_recovers_light_shift_coherence() {
        let mut p = NParams::new(0.4, 0.3, 0.02, 4.0);
        p.lambda.gamma_sp = 1e-9;
        let c = coherences_perturbative(&p).unwrap();
        let ls = rho_ab_light_shift(&p).unwrap();
        assert_relative_eq!(c.rho_ab.re, ls, max_relative = 1e-12);
        assert!(c.rho_ab.im.abs() < 1e-9 * ls.abs());
    }

    #[test]
    fn populations_at_equal_rabi() {
        let p = point(0.02);
        let pops = populations_perturbative(&p).unwrap();
        let l = 0.02f64.powi(2) / (25.0 + 0.25);
        assert_relative_eq!(pops.rho_bb, 0.25 * l, max_relative = 1e-14);
        assert_relative_eq!(pops.rho_dd, 0.5 * l, max_relative = 1e-14);
        let weak = NParams::new(1e-9, 0.1, 0.02, 5.0);
        let pops = populations_perturbative(&weak).unwrap();
        assert!(pops.rho_bb < 1e-15 && pops.rho_dd < 1e-15);
    }

    #[test]
    fn excited_population_matches_exact() {
        let exact = steady_state4(&point(0.05)).unwrap().population(D);
        let approx = populations_perturbative(&point(0.05)).unwrap().rho_dd;
        assert!((exact / approx - 1.0).abs() < 0.05);
        let exact = steady_state4(&point(0.01)).unwrap().population(D);
        let approx = populations_perturbative(&point(0.01)).unwrap().rho_dd;
        assert!((exact / approx - 1.0).abs() < 0.01);
    }

    #[test]
    fn coherence_error_falls_with_signal_squared() {
        let p = |o3| NParams::new(0.1, 0.1, o3, 5.0);
        let rel = |o3: f64| {
            let exact = steady_state4(&p(o3)).unwrap();
            let c = coherences_perturbative(&p(o3)).unwrap();
            (
                (exact.element(A, B) / c.rho_ab - 1.0).norm(),
                (exact.element(C, D) / c.rho_cd - 1.0).norm(),
                (exact.element(C, B) / c.rho_cb - 1.0).norm(),
            )
        };
        let (a1, d1, b1) = rel(0.04);
        let (a2, d2, b2) = rel(0.02);
        for (e1, e2) in [(a1, a2), (d1, d2), (b1, b2)] {
            assert!(e2 < 0.02, "relative error {e2}");
            let r = e1 / e2;
            assert!((3.0..5.0).contains(&r), "error ratio {r} not ~4");
        }
    }

    #[test]
    fn validity_flag() {
        assert!(point(0.1).validity(DEFAULT_EPSILON).holds());
        assert!(!NParams::new(0.1, 0.1, 1.0, 2.0)
            .validity(DEFAULT_EPSILON)
            .holds());
        // a breach is a warning, not an error
        assert!(coherences_perturbative(&NParams::new(0.1, 0.1, 1.0, 2.0)).is_ok());
        assert!(coherences_perturbative(&NParams::new(0.1, 0.1, 1.0, 0.0)).is_err());
    }
}
