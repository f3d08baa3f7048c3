use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lambda3::group_velocity;
use crate::parallel::Execution;
use crate::qnd::kerr::{CoherenceMode, PhaseShiftModel};
use crate::qnd::MaterialParams;

/// Largest allowed `|c_{n_max}|²` as a fraction of the total weight.
pub const TRUNCATION_TAIL: f64 = 1e-12;

/// Interaction time assigned to each Fock component of the probe.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TimeModel {
    /// `t = l / v_g(⌊|α|²⌋)` for every component: a pure Kerr rotation.
    Fixed,
    /// `t_n = l / v_g(n)`: photon-number dependent group delay.
    #[default]
    PerFock,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvolveOptions {
    pub time_model: TimeModel,
    pub coherence: CoherenceMode,
    /// Fock cutoff; [`default_n_max`] when `None`.
    pub n_max: Option<usize>,
}

/// `⌈|α|² + 8|α| + 20⌉`.
pub fn default_n_max(alpha: Complex64) -> usize {
    let a = alpha.norm();
    (a * a + 8.0 * a + 20.0).ceil() as usize
}

/// Probe state in the Fock basis, `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeState {
    pub alpha: Complex64,
    pub amplitudes: Vec<Complex64>,
}

impl ProbeState {
    /// Coherent state `|α⟩` truncated at `n_max` and renormalized.
    pub fn coherent(alpha: Complex64, n_max: usize) -> Self {
        Self {
            alpha,
            amplitudes: coherent_amplitudes(alpha, n_max),
        }
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩` over the common Fock range.
    pub fn overlap(&self, other: &ProbeState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &ProbeState) -> f64 {
        self.overlap(other).norm_sqr()
    }

    /// `⟨a⟩ = Σ c̄_{n-1} c_n √n`.
    pub fn mean_field(&self) -> Complex64 {
        self.amplitudes
            .windows(2)
            .enumerate()
            .map(|(k, w)| w[0].conj() * w[1] * ((k + 1) as f64).sqrt())
            .sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    fn check_tail(&self) -> Result<()> {
        let total = self.norm_sqr();
        let tail = self.amplitudes[self.n_max()].norm_sqr();
        if tail > TRUNCATION_TAIL * total {
            return Err(Error::Truncation {
                n_max: self.n_max(),
                tail: tail / total,
            });
        }
        Ok(())
    }
}

/// `ln n!` for `n = 0..=n_max`.
pub(crate) fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for n in 1..=n_max {
        acc += (n as f64).ln();
        out.push(acc);
    }
    out
}

fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let r = alpha.norm();
    if r == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    let (ln_r, arg) = (r.ln(), alpha.arg());
    for (n, (c, lf)) in out.iter_mut().zip(ln_factorials(n_max)).enumerate() {
        let n = n as f64;
        let ln_mag = -0.5 * r * r + n * ln_r - 0.5 * lf;
        *c = Complex64::from_polar(ln_mag.exp(), n * arg);
    }
    let norm = out.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut out {
        *c /= norm;
    }
    out
}

/// Coherent state `|α⟩` with each Fock component multiplied by
/// `exp(i φ(n))`. A complex `φ` damps the component.
pub fn evolve_with_phases(
    alpha: Complex64,
    n_max: usize,
    phase: impl Fn(usize) -> Complex64,
) -> Result<ProbeState> {
    let mut state = ProbeState::coherent(alpha, n_max);
    state.check_tail()?;
    for (n, c) in state.amplitudes.iter_mut().enumerate() {
        let phi = phase(n);
        if phi != Complex64::new(0.0, 0.0) {
            *c *= (Complex64::i() * phi).exp();
        }
    }
    state.check_tail()?;
    Ok(state)
}

/// Probe `|α⟩` after the cross-Kerr interaction with `n3` signal photons:
/// `c_n → c_n exp(i K_ab(n, n3) t_n)`.
pub fn evolve_probe(
    m: &MaterialParams,
    alpha: Complex64,
    n3: u32,
    opts: &EvolveOptions,
) -> Result<ProbeState> {
    let n_max = opts.n_max.unwrap_or_else(|| default_n_max(alpha));
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "probe amplitude {alpha} is not finite"
        )));
    }
    if alpha.norm_sqr() >= n_max as f64 {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} below the mean photon number {}",
            alpha.norm_sqr()
        )));
    }
    let model = PhaseShiftModel::new(m, opts.coherence)?;
    let omega1 = m.single_photon_omega1();
    let time = |n: f64| m.length / group_velocity(m, m.omega2, omega1, n);
    let fixed_time = time(alpha.norm_sqr().floor());
    let n3 = f64::from(n3);
    evolve_with_phases(alpha, n_max, |n| {
        let n = n as f64;
        let t = match opts.time_model {
            TimeModel::Fixed => fixed_time,
            TimeModel::PerFock => time(n),
        };
        model.kab(n, n3) * t
    })
}

/// Pairwise comparison of the probe states produced by each signal photon
/// number.
#[derive(Clone, Debug, PartialEq)]
pub struct Distinguishability {
    pub n3: Vec<u32>,
    pub states: Vec<ProbeState>,
    /// `|⟨α′_i|α′_j⟩|²`.
    pub overlaps: Vec<Vec<f64>>,
    /// `arg⟨a⟩` of each output state.
    pub mean_phases: Vec<f64>,
    /// `arg⟨a⟩_j − arg⟨a⟩_i`, wrapped to `(−π, π]`.
    pub phase_separation: Vec<Vec<f64>>,
}

pub fn distinguishability(
    m: &MaterialParams,
    alpha: Complex64,
    n3_list: &[u32],
    opts: &EvolveOptions,
    exec: Execution,
) -> Result<Distinguishability> {
    for (i, a) in n3_list.iter().enumerate() {
        if n3_list[..i].contains(a) {
            return Err(Error::InvalidParameter(format!(
                "signal photon number {a} repeated"
            )));
        }
    }
    let states = exec.try_map(n3_list, |&n3| evolve_probe(m, alpha, n3, opts))?;
    let k = states.len();
    let mean_phases: Vec<f64> = states.iter().map(|s| s.mean_field().arg()).collect();
    let overlaps = (0..k)
        .map(|i| (0..k).map(|j| states[i].fidelity(&states[j])).collect())
        .collect();
    let phase_separation = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| wrap_phase(mean_phases[j] - mean_phases[i]))
                .collect()
        })
        .collect();
    Ok(Distinguishability {
        n3: n3_list.to_vec(),
        states,
        overlaps,
        mean_phases,
        phase_separation,
    })
}

fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}
