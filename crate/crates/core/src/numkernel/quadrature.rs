use std::collections::HashMap;
use std::f64::consts::{PI, SQRT_2};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest node count accepted for ensemble averages.
pub const MIN_NODES: usize = 16;

/// Averages of integrands with a real pole are refused when the line centre
/// sits closer than this many standard deviations to the pole.
pub const POLE_CLEARANCE: f64 = 3.0;

/// Gaussian distribution of a detuning, `P(Δ) ∝ exp(-(Δ-Δ0)²/2γ²)`, together
/// with the number of Gauss–Hermite nodes used to average over it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InhomLine {
    pub delta0: f64,
    pub gamma_inh: f64,
    pub nodes: usize,
}

impl InhomLine {
    pub const DEFAULT_NODES: usize = 64;

    pub fn new(delta0: f64, gamma_inh: f64) -> Result<Self> {
        Self::with_nodes(delta0, gamma_inh, Self::DEFAULT_NODES)
    }

    pub fn with_nodes(delta0: f64, gamma_inh: f64, nodes: usize) -> Result<Self> {
        let line = Self {
            delta0,
            gamma_inh,
            nodes,
        };
        line.validate()?;
        Ok(line)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma_inh <= 0.0 || !self.gamma_inh.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "inhomogeneous width must be positive, got {}",
                self.gamma_inh
            )));
        }
        if !self.delta0.is_finite() {
            return Err(Error::InvalidParameter("line centre must be finite".into()));
        }
        if self.nodes < MIN_NODES {
            return Err(Error::InvalidParameter(format!(
                "at least {MIN_NODES} quadrature nodes required, got {}",
                self.nodes
            )));
        }
        Ok(())
    }

    /// Mean detuning in units of the width, `d = Δ0/√(2γ²)`.
    pub fn reduced_detuning(&self) -> f64 {
        self.delta0 / (SQRT_2 * self.gamma_inh)
    }

    pub fn density(&self, delta: f64) -> f64 {
        let z = (delta - self.delta0) / self.gamma_inh;
        (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * self.gamma_inh)
    }

    /// Detunings at which the observable is sampled.
    pub fn sample_points(&self) -> Vec<f64> {
        let rule = GaussHermiteRule::cached(self.nodes);
        rule.nodes
            .iter()
            .map(|x| self.delta0 + SQRT_2 * self.gamma_inh * x)
            .collect()
    }

    fn doubled(&self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            ..*self
        }
    }
}

/// Nodes and weights for `∫ exp(-x²) f(x) dx ≈ Σ w_k f(x_k)`.
#[derive(Clone, Debug)]
pub struct GaussHermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermiteRule {
    /// Golub–Welsch eigenvalues polished by Newton steps on the orthonormal
    /// Hermite recurrence; weights from `1 / (n p_{n-1}(x)²)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == j || j + 1 == i {
                (0.5 * i.max(j) as f64).sqrt()
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(f64::total_cmp);

        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (pn, pn1) = orthonormal_hermite(n, *x);
                let step = pn / ((2.0 * n as f64).sqrt() * pn1);
                *x -= step;
                if step.abs() < 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, pn1) = orthonormal_hermite(n, *x);
            weights.push(1.0 / (n as f64 * pn1 * pn1));
        }
        Self { nodes, weights }
    }

    /// Shared rule for `n` nodes, built once per process.
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermiteRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussHermiteRule::new(n)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Orthonormal Hermite polynomials `(p_n(x), p_{n-1}(x))` for the weight
/// `exp(-x²)`.
fn orthonormal_hermite(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 0.0;
    let mut p = PI.powf(-0.25);
    for j in 0..n {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * p - (jf / (jf + 1.0)).sqrt() * p_prev;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

fn average_with_rule<F>(observable: &F, line: &InhomLine) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let rule = GaussHermiteRule::cached(line.nodes);
    let scale = SQRT_2 * line.gamma_inh;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let delta = line.delta0 + scale * x;
        let v = observable(delta)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::SingularIntegrand(format!(
                "observable is not finite at detuning {delta}"
            )));
        }
        acc += v * *w;
    }
    Ok(acc / PI.sqrt())
}

/// `∫ P(Δ) f(Δ) dΔ` by Gauss–Hermite quadrature with `line.nodes` nodes.
pub fn gauss_hermite_average<F>(observable: F, line: &InhomLine) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    line.validate()?;
    average_with_rule(&|d| Ok(observable(d)), line)
}

/// As [`gauss_hermite_average`] for an observable that can fail; the first
/// failure is returned.
pub fn try_gauss_hermite_average<F>(observable: F, line: &InhomLine) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    line.validate()?;
    average_with_rule(&observable, line)
}

/// As [`gauss_hermite_average`], also returning `|GH(n) - GH(2n)|` as a
/// convergence estimate. The value is the `n`-node result.
pub fn gauss_hermite_average_with_estimate<F>(
    observable: F,
    line: &InhomLine,
) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    line.validate()?;
    let f = |d| Ok(observable(d));
    let coarse = average_with_rule(&f, line)?;
    let fine = average_with_rule(&f, &line.doubled())?;
    Ok((coarse, (coarse - fine).norm()))
}

/// Average of an observable with a pole at detuning `pole` (e.g. `1/Δ`).
///
/// Refuses with [`Error::SingularIntegrand`] when the line centre lies within
/// [`POLE_CLEARANCE`] widths of the pole; in that regime the principal value
/// must come from a closed form instead.
pub fn gauss_hermite_average_with_pole<F>(
    observable: F,
    line: &InhomLine,
    pole: f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    line.validate()?;
    if (line.delta0 - pole).abs() < POLE_CLEARANCE * line.gamma_inh {
        return Err(Error::SingularIntegrand(format!(
            "line centre {} within {POLE_CLEARANCE} widths of pole at {pole}",
            line.delta0
        )));
    }
    average_with_rule(&|d| Ok(observable(d)), line)
}
