use std::f64::consts::SQRT_2;

use crate::ensemble::detuning_for_j;
use crate::error::{Error, Result};

/// Waveguide and emitter constants, SI units (rates in s⁻¹).
#[derive(Clone, Debug, PartialEq)]
pub struct MaterialParams {
    /// Free-space transition wavelength λ (m).
    pub wavelength: f64,
    /// Homogeneous linewidth Γ.
    pub gamma_sp: f64,
    /// Inhomogeneous width γ.
    pub gamma_inh: f64,
    /// Emitter number density 𝒩 (m⁻³).
    pub density: f64,
    /// Interaction length l (m).
    pub length: f64,
    /// Transition dipole μ_ab (C·m).
    pub dipole: f64,
    pub eps_r: f64,
    /// Bulk refractive index η. Unused in the large-reduction group velocity.
    pub bulk_index: f64,
    /// Pulse bandwidth f.
    pub bandwidth: f64,
    /// κ = Ω̃1/Ω2.
    pub kappa: f64,
    /// Classical field Rabi frequency Ω2.
    pub omega2: f64,
    /// J(d) at the working detuning.
    pub j_scaling: f64,
    /// Mean signal detuning Δ0. Only the exact-coherence mode reads it.
    pub mean_detuning: f64,
}

impl MaterialParams {
    /// NV⁻ centres in a 200 nm × 200 nm × 200 µm single-crystal diamond
    /// waveguide.
    pub fn nv() -> Self {
        let gamma_sp = 83e6;
        let gamma_inh = 10e9;
        let j_scaling = 1.0 / 6.0;
        let d = detuning_for_j(j_scaling).expect("1/6 lies below the J maximum");
        Self {
            wavelength: 637e-9,
            gamma_sp,
            gamma_inh,
            density: 4e20,
            length: 200e-6,
            dipole: 1e-30,
            eps_r: 10.0,
            bulk_index: 10f64.sqrt(),
            bandwidth: 740e3,
            kappa: 1.0 / 50.0,
            omega2: gamma_sp / 10.0,
            j_scaling,
            mean_detuning: d * SQRT_2 * gamma_inh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("wavelength", self.wavelength),
            ("gamma_sp", self.gamma_sp),
            ("gamma_inh", self.gamma_inh),
            ("density", self.density),
            ("length", self.length),
            ("dipole", self.dipole),
            ("eps_r", self.eps_r),
            ("bulk_index", self.bulk_index),
            ("bandwidth", self.bandwidth),
            ("kappa", self.kappa),
            ("omega2", self.omega2),
            ("j_scaling", self.j_scaling),
            ("mean_detuning", self.mean_detuning),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "material {name} must be positive, got {v}"
                )));
            }
        }
        if self.kappa > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa must lie in (0, 1], got {}",
                self.kappa
            )));
        }
        Ok(())
    }

    /// Ω̃1 = κ Ω2.
    pub fn single_photon_omega1(&self) -> f64 {
        self.kappa * self.omega2
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::nv()
    }
}

/// Group velocity quoted for the NV waveguide in tabulated form,
/// `2.88e4 (n1/2500 + 1)` m/s. Kept as a labelled reference only: it does not
/// follow from [`crate::lambda3::group_velocity`] with the same constants.
pub fn table_group_velocity_reference(n1: f64) -> f64 {
    2.88e4 * (n1 / 2500.0 + 1.0)
}
