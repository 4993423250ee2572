use std::f64::consts::PI;

use proptest::prelude::*;
use rosenmorse_core::specfun::{gamma, jacobi, jacobi_explicit, jacobi_recurrence};
use rosenmorse_core::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Richardson-extrapolated central difference of the explicit sum in `z`.
fn explicit_slope(n: usize, a: Complex64, b: Complex64, z: Complex64) -> Complex64 {
    let d = |h: f64| (jacobi_explicit(n, a, b, z + h) - jacobi_explicit(n, a, b, z - h)) / (2.0 * h);
    let h = 1e-3;
    (d(h / 2.0) * 4.0 - d(h)) / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recurrence_matches_explicit_sum(
        n in 0usize..=10,
        ar in 0.0f64..4.0, ai in -3.0f64..3.0,
        br in 0.0f64..4.0, bi in -3.0f64..3.0,
        zr in -1.5f64..1.5, zi in -1.5f64..1.5,
    ) {
        let (a, b, z) = (c(ar, ai), c(br, bi), c(zr, zi));
        let r = jacobi_recurrence(n, a, b, z).unwrap();
        let e = jacobi_explicit(n, a, b, z);
        prop_assert!((r - e).norm() <= 1e-10 * e.norm().max(1.0), "{r} vs {e}");
    }

    #[test]
    fn derivative_identity(
        n in 1usize..=8,
        ar in 0.0f64..3.0, ai in -2.0f64..2.0,
        br in 0.0f64..3.0, bi in -2.0f64..2.0,
        zr in -0.9f64..0.9, zi in -0.5f64..0.5,
    ) {
        let (a, b, z) = (c(ar, ai), c(br, bi), c(zr, zi));
        let d = jacobi(n, a, b, z, 1).unwrap()[1];
        let shifted = (a + b + (n + 1) as f64) * 0.5 * jacobi(n - 1, a + 1.0, b + 1.0, z, 0).unwrap()[0];
        prop_assert!((d - shifted).norm() <= 1e-12 * d.norm().max(1.0));
        let fd = explicit_slope(n, a, b, z);
        prop_assert!((d - fd).norm() <= 1e-7 * d.norm().max(1.0), "{d} vs {fd}");
    }

    #[test]
    fn gamma_reflection(re in -3.0f64..3.0, im in -5.0f64..5.0) {
        let z = c(re, im);
        prop_assume!(im.abs() > 0.05 || (re - re.round()).abs() > 0.05);
        let lhs = gamma(z).unwrap() * gamma(c(1.0, 0.0) - z).unwrap();
        let rhs = c(PI, 0.0) / (z * PI).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "{lhs} vs {rhs}");
    }
}

#[test]
fn jacobi_derivatives_vanish_above_degree() {
    let d = jacobi(3, c(1.5, 0.2), c(0.5, -0.1), c(0.3, 0.0), 6).unwrap();
    assert!(d[4..].iter().all(|v| v.norm() == 0.0));
}
