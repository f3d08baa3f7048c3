use std::f64::consts::PI;

use num_complex::Complex64;

use crate::ensemble::{complex_detuning_average, InhomLine};
use crate::error::Result;
use crate::qnd::MaterialParams;

/// How the signal-detuning average enters the phase shift.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoherenceMode {
    /// Real `√(π/2γ²) J` factor: a pure phase, no absorption.
    #[default]
    Lossless,
    /// Line average of `2/(2Δ3 + iΓ)` around the material's mean detuning;
    /// the imaginary part damps the probe.
    Exact,
}

/// Single-photon Rabi frequency of the signal, `(λ/4π) √(3 Γ f 𝒩 l)`.
pub fn single_photon_rabi(m: &MaterialParams) -> f64 {
    m.wavelength / (4.0 * PI) * (3.0 * m.gamma_sp * m.bandwidth * m.density * m.length).sqrt()
}

/// Cross-Kerr phase-shift rates for one material, with the detuning average
/// evaluated once.
#[derive(Clone, Copy, Debug)]
pub struct PhaseShiftModel {
    /// `⟨1/Δ3⟩` (lossless) or `⟨2/(2Δ3+iΓ)⟩` (exact).
    detuning_factor: Complex64,
    omega3_tilde: f64,
    omega1_tilde: f64,
    omega2: f64,
}

impl PhaseShiftModel {
    pub fn new(m: &MaterialParams, mode: CoherenceMode) -> Result<Self> {
        m.validate()?;
        let detuning_factor = match mode {
            CoherenceMode::Lossless => Complex64::new(
                (PI / (2.0 * m.gamma_inh * m.gamma_inh)).sqrt() * m.j_scaling,
                0.0,
            ),
            CoherenceMode::Exact => {
                let line = InhomLine::new(m.mean_detuning, m.gamma_inh)?;
                complex_detuning_average(m.gamma_sp, &line)?
            }
        };
        Ok(Self {
            detuning_factor,
            omega3_tilde: single_photon_rabi(m),
            omega1_tilde: m.single_photon_omega1(),
            omega2: m.omega2,
        })
    }

    /// `K_ab = -⟨1/Δ3⟩ Ω̃1²Ω2²Ω̃3² n1 n3 / (Ω̃1² n1 + Ω2²)²`.
    pub fn kab(&self, n1: f64, n3: f64) -> Complex64 {
        let o1sq = self.omega1_tilde * self.omega1_tilde;
        let o2sq = self.omega2 * self.omega2;
        let drive = o1sq * n1 + o2sq;
        let magnitude = o1sq * o2sq * self.omega3_tilde.powi(2) * n1 * n3 / (drive * drive);
        -self.detuning_factor * magnitude
    }

    /// `K_cd = -⟨1/Δ3⟩ Ω̃1²Ω̃3² n1 n3 / (Ω̃1² n1 + Ω2²)`.
    pub fn kcd(&self, n1: f64, n3: f64) -> Complex64 {
        let o1sq = self.omega1_tilde * self.omega1_tilde;
        let drive = o1sq * n1 + self.omega2 * self.omega2;
        let magnitude = o1sq * self.omega3_tilde.powi(2) * n1 * n3 / drive;
        -self.detuning_factor * magnitude
    }

    pub fn detuning_factor(&self) -> Complex64 {
        self.detuning_factor
    }
}

pub fn phase_shift_kab(
    m: &MaterialParams,
    n1: f64,
    n3: f64,
    mode: CoherenceMode,
) -> Result<Complex64> {
    Ok(PhaseShiftModel::new(m, mode)?.kab(n1, n3))
}

pub fn phase_shift_kcd(
    m: &MaterialParams,
    n1: f64,
    n3: f64,
    mode: CoherenceMode,
) -> Result<Complex64> {
    Ok(PhaseShiftModel::new(m, mode)?.kcd(n1, n3))
}

fn lossless_factor(m: &MaterialParams) -> f64 {
    (PI / (2.0 * m.gamma_inh * m.gamma_inh)).sqrt() * m.j_scaling
}

/// Strong-pump limit `Ω2 ≫ Ω̃1√n1`: `-√(π/2γ²) Ω̃1²Ω̃3² n1 n3 J / Ω2²`.
pub fn k_weak(m: &MaterialParams, n1: f64, n3: f64) -> f64 {
    let o1 = m.single_photon_omega1();
    -lossless_factor(m) * o1 * o1 * single_photon_rabi(m).powi(2) * n1 * n3 / (m.omega2 * m.omega2)
}

/// `K_ab` at `Ω̃1² n1 = Ω2²`: `-√(π/2γ²) Ω̃3² n3 J / 4`.
pub fn k_equal_ab(m: &MaterialParams, n3: f64) -> f64 {
    -lossless_factor(m) * single_photon_rabi(m).powi(2) * n3 / 4.0
}

/// `K_cd` at `Ω̃1² n1 = Ω2²`: `-√(π/2γ²) Ω̃3² n3 J / 2`.
pub fn k_equal_cd(m: &MaterialParams, n3: f64) -> f64 {
    -lossless_factor(m) * single_photon_rabi(m).powi(2) * n3 / 2.0
}

/// Cross- and self-phase scalings against `x = κ² n1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TScalings {
    /// `x / (x + 1)²`
    pub t_ab: f64,
    /// `x / (x + 1)`
    pub t_cd: f64,
}

pub fn t_scalings(kappa: f64, n1: f64) -> TScalings {
    let x = kappa * kappa * n1;
    TScalings {
        t_ab: x / ((x + 1.0) * (x + 1.0)),
        t_cd: x / (x + 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn nv_single_photon_rabi() {
        let m = MaterialParams::nv();
        let o3 = single_photon_rabi(&m);
        assert!((o3 - 195e6).abs() < 0.01 * 195e6, "{o3:e}");
        let dense = MaterialParams {
            density: 4.0 * m.density,
            ..m.clone()
        };
        assert_relative_eq!(single_photon_rabi(&dense), 2.0 * o3, max_relative = 1e-14);
        let short = MaterialParams { length: 0.0, ..m };
        assert_eq!(single_photon_rabi(&short), 0.0);
    }

    #[test]
    fn no_signal_no_shift() {
        let m = MaterialParams::nv();
        assert_eq!(
            phase_shift_kab(&m, 100.0, 0.0, CoherenceMode::Lossless)
                .unwrap()
                .norm(),
            0.0
        );
        assert_eq!(
            phase_shift_kab(&m, 100.0, 0.0, CoherenceMode::Exact)
                .unwrap()
                .norm(),
            0.0
        );
    }

    #[test]
    fn weak_probe_limit() {
        let m = MaterialParams::nv();
        // κ² n1 = 1e-4
        let n1 = 1e-4 / (m.kappa * m.kappa);
        let k = phase_shift_kab(&m, n1, 1.0, CoherenceMode::Lossless).unwrap();
        assert!((k.re / k_weak(&m, n1, 1.0) - 1.0).abs() < 0.01);
        assert_eq!(k.im, 0.0);
    }

    #[test]
    fn equal_rabi_point() {
        let m = MaterialParams::nv();
        let n1 = 1.0 / (m.kappa * m.kappa);
        for n3 in [1.0, 2.0] {
            let kab = phase_shift_kab(&m, n1, n3, CoherenceMode::Lossless)
                .unwrap()
                .re;
            let kcd = phase_shift_kcd(&m, n1, n3, CoherenceMode::Lossless)
                .unwrap()
                .re;
            assert_relative_eq!(kab, k_equal_ab(&m, n3), max_relative = 1e-12);
            assert_relative_eq!(kcd, k_equal_cd(&m, n3), max_relative = 1e-12);
            assert_relative_eq!(kcd, 2.0 * kab, max_relative = 1e-12);
        }
    }

    #[test]
    fn exact_mode_adds_damping() {
        let m = MaterialParams::nv();
        let model = PhaseShiftModel::new(&m, CoherenceMode::Exact).unwrap();
        let lossless = PhaseShiftModel::new(&m, CoherenceMode::Lossless).unwrap();
        let k = model.kab(625.0, 1.0);
        let k0 = lossless.kab(625.0, 1.0);
        assert!(k.im > 0.0, "exp(iKt) must decay");
        assert!((k.re / k0.re - 1.0).abs() < 1e-3);
    }

    #[test]
    fn scalings() {
        let t = t_scalings(0.02, 2500.0);
        assert_relative_eq!(t.t_ab, 0.25, max_relative = 1e-12);
        assert!((t_scalings(1.0, 1e9).t_cd - 1.0).abs() < 1e-8);
        assert_eq!(t_scalings(0.3, 0.0).t_ab, 0.0);
        // unique maximum of T_ab at x = 1 on a fine grid
        let (xbest, tbest) = (1..=100_000)
            .map(|k| k as f64 * 1e-4)
            .map(|x| (x, t_scalings(1.0, x).t_ab))
            .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        assert!((xbest - 1.0).abs() < 1e-4);
        assert_eq!(tbest, 0.25);
    }

    proptest! {
        #[test]
        fn kab_over_kcd_ratio(n1 in 0.01f64..1e6, n3 in 1u32..5, kappa in 0.001f64..1.0) {
            let m = MaterialParams { kappa, ..MaterialParams::nv() };
            let model = PhaseShiftModel::new(&m, CoherenceMode::Lossless).unwrap();
            let ratio = model.kab(n1, n3 as f64).re / model.kcd(n1, n3 as f64).re;
            let x = kappa * kappa * n1;
            prop_assert!((ratio * (x + 1.0) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn kab_linear_in_signal(n1 in 0.0f64..1e5) {
            let model = PhaseShiftModel::new(&MaterialParams::nv(), CoherenceMode::Lossless).unwrap();
            prop_assert_eq!(model.kab(n1, 2.0), model.kab(n1, 1.0) * 2.0);
        }

        #[test]
        fn t_cd_dominates(x in 0.0f64..1e6) {
            let t = t_scalings(1.0, x);
            prop_assert!(t.t_cd >= t.t_ab);
        }
    }
}
