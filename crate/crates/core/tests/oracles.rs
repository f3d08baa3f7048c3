//! Closed forms and the quadrature layer checked against brute-force
//! integration written independently of the library.

use std::f64::consts::PI;

use eitkerr::ensemble::{complex_detuning_average, reciprocal_detuning_average};
use eitkerr::lambda3::{generator3, steady_state3, LambdaParams};
use eitkerr::level::{A, B, C};
use eitkerr::nsys4::{steady_state4, NParams};
use eitkerr::numkernel::{j_function, InhomLine};
use eitkerr::Complex64;
use proptest::prelude::*;

/// Composite Simpson rule on `n` (even) panels.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (f(a) + inner + f(b))
}

fn gaussian(x: f64, centre: f64, width: f64) -> f64 {
    let z = (x - centre) / width;
    (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * width)
}

/// Principal value of ∫ P(Δ)/Δ dΔ by pairing ±Δ, which removes the pole.
fn principal_value(centre: f64, width: f64) -> f64 {
    let p = |x: f64| gaussian(x, centre, width);
    let slope_at_zero = centre / (width * width) * p(0.0);
    let odd = |x: f64| {
        if x == 0.0 {
            2.0 * slope_at_zero
        } else {
            (p(x) - p(-x)) / x
        }
    };
    simpson(&odd, 0.0, centre.abs() + 14.0 * width, 20_000)
}

#[test]
fn reciprocal_average_matches_principal_value() {
    for (d, width) in [
        (3.0, 1.0),
        (3.0, 250.0),
        (0.5, 2.0),
        (1.5, 0.1),
        (-2.0, 7.0),
        (6.0, 30.0),
    ] {
        let centre = d * 2f64.sqrt() * width;
        let line = InhomLine::new(centre, width).unwrap();
        let oracle = principal_value(centre, width);
        let closed = reciprocal_detuning_average(&line);
        assert!(
            (closed - oracle).abs() <= 1e-12 * oracle.abs(),
            "d={d}: {closed} vs {oracle}"
        );
    }
}

#[test]
fn j_maximum_by_brute_force() {
    let oracle = |d: f64| (2.0 / PI).sqrt() * principal_value(d * 2f64.sqrt(), 1.0);
    let (best, _) = (0..=800)
        .map(|i| 0.8 + i as f64 * 3e-4)
        .map(|d| (d, oracle(d)))
        .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
    assert!((best - 0.9241).abs() < 1e-3);
    assert!((oracle(best) - j_function(best)).abs() < 1e-12);
}

#[test]
fn complex_average_matches_direct_integration() {
    for (centre, width) in [
        (30.0, 10.0),
        (-60.0, 20.0),
        (500.0, 100.0),
        (0.0, 3.0),
        (4.2e4, 1e4),
    ] {
        let line = InhomLine::new(centre, width).unwrap();
        let got = complex_detuning_average(1.0, &line).unwrap();
        let kernel = |x: f64| 2.0 / Complex64::new(2.0 * x, 1.0);
        // a fine panel across the Lorentzian, coarse ones over the wings
        let (lo, hi) = (centre - 14.0 * width, centre + 14.0 * width);
        let mut cuts = vec![lo, hi];
        cuts.extend([-200.0, 200.0].into_iter().filter(|c| lo < *c && *c < hi));
        cuts.sort_by(f64::total_cmp);
        let integrate = |part: &dyn Fn(Complex64) -> f64| -> f64 {
            cuts.windows(2)
                .map(|w| {
                    simpson(
                        &|x| gaussian(x, centre, width) * part(kernel(x)),
                        w[0],
                        w[1],
                        200_000,
                    )
                })
                .sum()
        };
        let (re, im) = (integrate(&|k| k.re), integrate(&|k| k.im));
        let want = Complex64::new(re, im);
        assert!((got - want).norm() < 1e-11 * want.norm(), "{got} vs {want}");
        assert!(im < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_steady_state_is_physical(
        o1 in 0.01f64..3.0,
        o2 in 0.01f64..3.0,
        delta in -5.0f64..5.0,
        two_photon in -2.0f64..2.0,
    ) {
        let p = LambdaParams::new(o1, o2).with_detunings(delta, two_photon);
        let rho = steady_state3(&p).unwrap();
        prop_assert!((rho.trace() - 1.0).norm() < 1e-10);
        prop_assert!(rho.hermiticity_error() < 1e-10);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
        let residual = generator3(&p).apply(rho.matrix()).unwrap();
        prop_assert!(residual.norm() < 1e-9);
    }

    #[test]
    fn lambda_dark_state_at_two_photon_resonance(o1 in 0.05f64..3.0, o2 in 0.05f64..3.0, delta in -5.0f64..5.0) {
        let rho = steady_state3(&LambdaParams::new(o1, o2).with_detunings(delta, 0.0)).unwrap();
        prop_assert!(rho.population(B) < 1e-10);
        let s = o1 * o1 + o2 * o2;
        prop_assert!((rho.population(A) - o2 * o2 / s).abs() < 1e-8);
        prop_assert!((rho.population(C) - o1 * o1 / s).abs() < 1e-8);
    }

    #[test]
    fn n_steady_state_is_physical(
        o1 in 0.05f64..2.0,
        o2 in 0.05f64..2.0,
        o3 in 0.0f64..0.5,
        d3 in prop_oneof![-40.0f64..-2.0, 2.0f64..40.0],
    ) {
        let rho = steady_state4(&NParams::new(o1, o2, o3, d3)).unwrap();
        prop_assert!((rho.trace() - 1.0).norm() < 1e-10);
        prop_assert!(rho.hermiticity_error() < 1e-10);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
    }
}
