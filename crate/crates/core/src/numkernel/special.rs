use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

// Rybicki's sampling step and the number of symmetric term pairs kept. With
// h = 0.2 both the aliasing error exp(-(π/2h)²) and the dropped tail
// exp(-((2N+1)h)²) sit below 1e-26.
const RYBICKI_H: f64 = 0.2;
const RYBICKI_TERMS: usize = 20;
const SERIES_CUTOFF: f64 = 0.5;

fn rybicki_coefficients() -> [f64; RYBICKI_TERMS] {
    std::array::from_fn(|i| {
        let t = (2 * i + 1) as f64 * RYBICKI_H;
        (-t * t).exp()
    })
}

/// Dawson's integral `F(x) = exp(-x²) ∫₀ˣ exp(t²) dt`.
///
/// Maclaurin series near the origin, Rybicki's exponentially convergent
/// sampling formula elsewhere. Relative accuracy is about 1e-15 for all
/// finite `x`.
pub fn dawson(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax < SERIES_CUTOFF {
        // F(x) = Σ (-2x²)ⁿ x / (2n+1)!!
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        loop {
            term *= -2.0 * x2 / (2.0 * n + 3.0);
            sum += term;
            n += 1.0;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    if ax.is_infinite() {
        return 0.0;
    }
    let c = rybicki_coefficients();
    let n0 = 2.0 * (0.5 * ax / RYBICKI_H + 0.5).floor();
    let xp = ax - n0 * RYBICKI_H;
    let mut e1 = (2.0 * xp * RYBICKI_H).exp();
    let e2 = e1 * e1;
    let mut d1 = n0 + 1.0;
    let mut d2 = n0 - 1.0;
    let mut sum = 0.0;
    for ci in c {
        sum += ci * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    FRAC_1_SQRT_PI * (-xp * xp).exp() * sum * x.signum()
}

/// Imaginary error function `erfi(x) = -i erf(ix)`.
///
/// Computed as `(2/√π) exp(x²) F(x)`. Overflows to ±∞ once `x²` exceeds the
/// exponent range (|x| above roughly 26.6); callers that need
/// `exp(-x²) erfi(x)` should use [`j_function`] instead.
pub fn erfi(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let f = dawson(x);
    let x2 = x * x;
    // Split the exponential so the product does not overflow early.
    let half = (0.5 * x2).exp();
    FRAC_2_SQRT_PI * half * f * half
}

/// `J(d) = exp(-d²) erfi(d) = (2/√π) F(d)`. Never overflows.
pub fn j_function(d: f64) -> f64 {
    FRAC_2_SQRT_PI * dawson(d)
}

// Weideman's rational expansion of w(z) in powers of (L+iz)/(L-iz).
const WEIDEMAN_TERMS: usize = 40;
// Beyond this modulus the Laplace continued fraction takes over.
const CONTINUED_FRACTION_CUTOFF: f64 = 12.0;
const CONTINUED_FRACTION_DEPTH: usize = 40;

fn weideman_scale() -> f64 {
    (WEIDEMAN_TERMS as f64 / SQRT_2).sqrt()
}

fn weideman_coefficients() -> &'static [f64; WEIDEMAN_TERMS] {
    static COEFFS: OnceLock<[f64; WEIDEMAN_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let m = 2 * WEIDEMAN_TERMS;
        let l = weideman_scale();
        // Samples of exp(-t²)(L²+t²) at t = L tan(θ/2), θ = jπ/M, periodic in j.
        let samples: Vec<f64> = (0..2 * m)
            .map(|j| {
                let k = if j < m {
                    j as f64
                } else {
                    j as f64 - 2.0 * m as f64
                };
                if j == m {
                    return 0.0;
                }
                let t = l * (0.5 * k * PI / m as f64).tan();
                (-t * t).exp() * (l * l + t * t)
            })
            .collect();
        std::array::from_fn(|i| {
            let n = (i + 1) as f64;
            let sum: f64 = samples
                .iter()
                .enumerate()
                .map(|(j, f)| f * (PI * j as f64 * n / m as f64).cos())
                .sum();
            sum / (2 * m) as f64
        })
    })
}

/// Faddeeva function `w(z) = exp(-z²) erfc(-iz)` for `Im z ≥ 0`.
///
/// Weideman's 40-term rational expansion for moderate `|z|`, the Laplace
/// continued fraction beyond. Absolute accuracy is about 1e-14. On the real
/// axis `w(x) = exp(-x²) + (2i/√π) F(x)`.
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.im < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Faddeeva function needs finite z in the closed upper half plane, got {z}"
        )));
    }
    if z.norm() > CONTINUED_FRACTION_CUTOFF {
        // w(z) = (i/√π) / (z - (1/2)/(z - 1/(z - (3/2)/(z - …))))
        let mut tail = z;
        for k in (1..=CONTINUED_FRACTION_DEPTH).rev() {
            tail = z - 0.5 * k as f64 / tail;
        }
        return Ok(Complex64::new(0.0, FRAC_1_SQRT_PI) / tail);
    }
    let l = weideman_scale();
    let iz = Complex64::new(-z.im, z.re);
    let denom = l - iz;
    let zeta = (l + iz) / denom;
    let p = weideman_coefficients()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * zeta + a);
    Ok(2.0 * p / (denom * denom) + FRAC_1_SQRT_PI / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Adaptive Simpson, used as an independent oracle.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    fn dawson_oracle(x: f64) -> f64 {
        simpson(&|t: f64| (t * t - x * x).exp(), 0.0, x, 1e-15)
    }

    #[test]
    fn odd_and_zero_at_origin() {
        assert_eq!(dawson(0.0), 0.0);
        assert_eq!(erfi(0.0), 0.0);
        assert_eq!(j_function(0.0), 0.0);
    }

    #[test]
    fn erfi_one_matches_quadrature() {
        let oracle = FRAC_2_SQRT_PI * simpson(&|t: f64| (t * t).exp(), 0.0, 1.0, 1e-15);
        assert!(
            (erfi(1.0) - oracle).abs() < 1e-13 * oracle,
            "{} vs {}",
            erfi(1.0),
            oracle
        );
    }

    #[test]
    fn dawson_matches_quadrature_across_range() {
        for &x in &[
            0.05, 0.19, 0.3, 0.49, 0.5, 0.51, 0.9241, 1.0, 1.7, 2.5, 3.0, 4.2, 5.0, 7.5, 10.0,
        ] {
            let oracle = dawson_oracle(x);
            let rel = (dawson(x) - oracle).abs() / oracle;
            assert!(
                rel < 1e-12,
                "x = {x}: {} vs {oracle} (rel {rel:e})",
                dawson(x)
            );
        }
    }

    #[test]
    fn dawson_argmax_by_golden_section_on_oracle() {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (0.5, 1.5);
        while b - a > 1e-7 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if dawson_oracle(c) > dawson_oracle(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let arg = 0.5 * (a + b);
        assert!((arg - 0.9241).abs() < 1e-4, "argmax {arg}");
        // d/dx F = 1 - 2xF vanishes at the maximum.
        assert!((1.0 - 2.0 * arg * dawson(arg)).abs() < 1e-6);
    }

    #[test]
    fn unit_slope_at_origin() {
        let h = 1e-5;
        let slope = (dawson(h) - dawson(-h)) / (2.0 * h);
        assert!((slope - 1.0).abs() < 1e-8);
    }

    #[test]
    fn large_argument_asymptotics() {
        // F(x) ≈ 1/(2x) + 1/(4x³) + 3/(8x⁵) + 15/(16x⁷)
        let x: f64 = 50.0;
        let asym = 1.0 / (2.0 * x)
            + 1.0 / (4.0 * x.powi(3))
            + 3.0 / (8.0 * x.powi(5))
            + 15.0 / (16.0 * x.powi(7));
        assert!((dawson(x) - asym).abs() < 1e-12 * asym);
        assert!(erfi(30.0).is_infinite());
        assert!(j_function(30.0).is_finite());
    }

    #[test]
    fn faddeeva_on_real_axis() {
        for x in [
            -7.5, -2.0, -0.3, 0.0, 0.4, 0.9241, 1.7, 3.0, 5.5, 11.9, 12.5, 40.0,
        ] {
            let w = faddeeva(Complex64::new(x, 0.0)).unwrap();
            assert!((w.re - (-x * x).exp()).abs() < 1e-14, "x={x}: {w}");
            assert!(
                (w.im - FRAC_2_SQRT_PI * dawson(x)).abs() < 1e-14,
                "x={x}: {w}"
            );
        }
    }

    #[test]
    fn faddeeva_on_imaginary_axis() {
        // w(iy) = exp(y²) erfc(y)
        for (y, want) in [
            (0.5, 0.615_690_344_192_925_8),
            (1.0, 0.427_583_576_155_807),
            (2.0, 0.255_395_676_310_505_8),
            (20.0, 0.028_174_348_741_051_32),
        ] {
            let w = faddeeva(Complex64::new(0.0, y)).unwrap();
            assert!(
                (w.re - want).abs() < 1e-14 * want.max(1.0) && w.im.abs() < 1e-14,
                "y={y}: {w}"
            );
        }
        assert!((faddeeva(Complex64::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!(faddeeva(Complex64::new(1.0, -0.1)).is_err());
    }

    proptest! {
        #[test]
        fn faddeeva_reflection(x in -20.0f64..20.0, y in 0.0f64..20.0) {
            // w(-z̄) = conj w(z)
            let w = faddeeva(Complex64::new(x, y)).unwrap();
            let r = faddeeva(Complex64::new(-x, y)).unwrap();
            prop_assert!((w.conj() - r).norm() < 1e-15);
        }

        #[test]
        fn faddeeva_satisfies_its_ode(x in -10.0f64..10.0, y in 0.01f64..10.0) {
            // w' = -2zw + 2i/√π, checked by central differences along x.
            let z = Complex64::new(x, y);
            let h = 1e-5;
            let fd = (faddeeva(z + h).unwrap() - faddeeva(z - h).unwrap()) / (2.0 * h);
            let exact = -2.0 * z * faddeeva(z).unwrap() + Complex64::new(0.0, FRAC_2_SQRT_PI);
            prop_assert!((fd - exact).norm() < 1e-8 * exact.norm().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn erfi_is_odd(x in -20.0f64..20.0) {
            prop_assert_eq!(erfi(x), -erfi(-x));
            prop_assert_eq!(dawson(x), -dawson(-x));
        }

        #[test]
        fn dawson_satisfies_its_ode(x in -8.0f64..8.0) {
            // F' = 1 - 2xF, checked by central differences.
            let h = 1e-5;
            let fd = (dawson(x + h) - dawson(x - h)) / (2.0 * h);
            prop_assert!((fd - (1.0 - 2.0 * x * dawson(x))).abs() < 1e-8);
        }
    }
}
