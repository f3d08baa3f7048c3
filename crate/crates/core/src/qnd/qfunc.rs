use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parallel::Execution;
use crate::qnd::probe::{ln_factorials, ProbeState};

/// Fock components below this weight are left out of the Q sum; the error
/// this introduces is below `√(n_max · 1e-34)`.
const SUPPORT_WEIGHT: f64 = 1e-34;

/// Largest grid spacing chosen by [`QWindow::covering`].
const COVERING_SPACING: f64 = 0.5;

/// Rectangular window in the β plane sampled on `resolution × resolution`
/// points, edges included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub resolution: usize,
}

impl QWindow {
    /// Square window centred on the origin that holds every rotation of `α`
    /// with room for the coherent-state tails.
    pub fn covering(alpha: Complex64) -> Self {
        let half = 1.5 * alpha.norm() + 5.0;
        let resolution = (2.0 * half / COVERING_SPACING).ceil() as usize + 1;
        Self {
            re_min: -half,
            re_max: half,
            im_min: -half,
            im_max: half,
            resolution,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.re_max <= self.re_min || self.im_max <= self.im_min {
            return Err(Error::InvalidParameter(format!("empty Q window {self:?}")));
        }
        if self.resolution < 2 {
            return Err(Error::InvalidParameter(
                "Q window needs at least 2 points per axis".into(),
            ));
        }
        Ok(())
    }

    pub fn re_step(&self) -> f64 {
        (self.re_max - self.re_min) / (self.resolution - 1) as f64
    }

    pub fn im_step(&self) -> f64 {
        (self.im_max - self.im_min) / (self.resolution - 1) as f64
    }

    /// β at grid row `row` (imaginary axis) and column `col` (real axis).
    pub fn beta(&self, row: usize, col: usize) -> Complex64 {
        Complex64::new(
            self.re_min + col as f64 * self.re_step(),
            self.im_min + row as f64 * self.im_step(),
        )
    }
}

/// Q values on a [`QWindow`], row-major with rows along the imaginary axis.
#[derive(Clone, Debug, PartialEq)]
pub struct QGrid {
    pub window: QWindow,
    pub values: Vec<f64>,
}

impl QGrid {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.window.resolution + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.window.resolution)
    }

    /// `(1/π) Σ Q Δx Δy`.
    pub fn mass(&self) -> f64 {
        let cell = self.window.re_step() * self.window.im_step();
        self.values.iter().sum::<f64>() * cell / PI
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// β of the largest value.
    pub fn argmax(&self) -> Complex64 {
        let (k, _) = self
            .values
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |a, (k, &v)| if v > a.1 { (k, v) } else { a },
            );
        let r = self.window.resolution;
        self.window.beta(k / r, k % r)
    }
}

/// Husimi function `Q(β) = |⟨β|ψ⟩|²` with
/// `⟨β|n⟩ = exp(−|β|²/2) β̄ⁿ / √n!`.
pub fn q_function(state: &ProbeState, window: &QWindow, exec: Execution) -> Result<QGrid> {
    window.validate()?;
    let support: Vec<usize> = state
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() > SUPPORT_WEIGHT)
        .map(|(n, _)| n)
        .collect();
    let (first, last) = match (support.first(), support.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => {
            let n = window.resolution * window.resolution;
            return Ok(QGrid {
                window: *window,
                values: vec![0.0; n],
            });
        }
    };
    let lf = ln_factorials(last);
    let amps = &state.amplitudes[first..=last];
    let rows = exec.map_range(window.resolution, |row| {
        (0..window.resolution)
            .map(|col| {
                let beta = window.beta(row, col);
                projection(beta, amps, first, &lf).norm_sqr().min(1.0)
            })
            .collect::<Vec<f64>>()
    });
    Ok(QGrid {
        window: *window,
        values: rows.into_iter().flatten().collect(),
    })
}

/// `⟨β|ψ⟩` summed over Fock indices `first..first + amps.len()`.
fn projection(beta: Complex64, amps: &[Complex64], first: usize, lf: &[f64]) -> Complex64 {
    let r = beta.norm();
    if r == 0.0 {
        return if first == 0 {
            amps[0]
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let (ln_r, r2) = (r.ln(), r * r);
    let step = Complex64::from_polar(1.0, -beta.arg());
    let mut rot = Complex64::from_polar(1.0, -(first as f64) * beta.arg());
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in amps.iter().enumerate() {
        let n = first + k;
        let ln_mag = -0.5 * r2 + n as f64 * ln_r - 0.5 * lf[n];
        acc += rot * ln_mag.exp() * c;
        rot *= step;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnd::probe::default_n_max;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherent_peak_is_one() {
        let alpha = c(2.0, 1.0);
        let s = ProbeState::coherent(alpha, default_n_max(alpha));
        let window = QWindow {
            re_min: 0.0,
            re_max: 4.0,
            im_min: -1.0,
            im_max: 3.0,
            resolution: 41,
        };
        let q = q_function(&s, &window, Execution::Sequential).unwrap();
        assert!((q.argmax() - alpha).norm() < 1e-12);
        assert!((q.max() - 1.0).abs() < 1e-12);
        // Q of a coherent state is the Gaussian exp(−|β − α|²).
        for (row, col) in [(0, 0), (10, 30), (40, 7)] {
            let beta = window.beta(row, col);
            assert_relative_eq!(
                q.get(row, col),
                (-(beta - alpha).norm_sqr()).exp(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn vacuum_gaussian() {
        let s = ProbeState::coherent(c(0.0, 0.0), 20);
        let window = QWindow::covering(c(0.0, 0.0));
        let q = q_function(&s, &window, Execution::default()).unwrap();
        let mid = window.resolution / 2;
        assert_eq!(window.beta(mid, mid), c(0.0, 0.0));
        assert_eq!(q.get(mid, mid), 1.0);
        let beta = window.beta(mid + 3, mid - 2);
        assert_relative_eq!(
            q.get(mid + 3, mid - 2),
            (-beta.norm_sqr()).exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn mass_on_covering_window() {
        for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(5.0, -3.0), c(25.0, 0.0)] {
            let s = ProbeState::coherent(alpha, default_n_max(alpha));
            let q = q_function(&s, &QWindow::covering(alpha), Execution::default()).unwrap();
            assert!((q.mass() - 1.0).abs() < 5e-3, "alpha {alpha}: {}", q.mass());
            assert!(q.min() >= 0.0 && q.max() <= 1.0);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let alpha = c(3.0, 2.0);
        let s = ProbeState::coherent(alpha, default_n_max(alpha));
        let w = QWindow::covering(alpha);
        let a = q_function(&s, &w, Execution::Sequential).unwrap();
        let b = q_function(&s, &w, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_window() {
        let s = ProbeState::coherent(c(1.0, 0.0), 30);
        let mut w = QWindow::covering(c(1.0, 0.0));
        w.resolution = 1;
        assert!(q_function(&s, &w, Execution::Sequential).is_err());
        let mut w = QWindow::covering(c(1.0, 0.0));
        w.re_max = w.re_min;
        assert!(q_function(&s, &w, Execution::Sequential).is_err());
    }

    proptest! {
        #[test]
        fn q_is_bounded(re in -4.0f64..4.0, im in -4.0f64..4.0, theta in 0.0f64..1.0) {
            let alpha = c(re, im);
            let n_max = default_n_max(alpha);
            // a squeezed-like phase profile, not a coherent state
            let s = crate::qnd::evolve_with_phases(alpha, n_max, |n| c(theta * (n * n) as f64, 0.0)).unwrap();
            let mut w = QWindow::covering(alpha);
            w.resolution = 25;
            let q = q_function(&s, &w, Execution::Sequential).unwrap();
            prop_assert!(q.min() >= 0.0);
            prop_assert!(q.max() <= 1.0);
        }
    }
}
