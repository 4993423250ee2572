use rosenmorse_core::numerics::quadrature::QuadratureGrid;
use rosenmorse_core::suites::eigenstate_suite;
use rosenmorse_core::SystemParams;

fn assert_suite(p: SystemParams, count: usize, expect: usize) {
    let r = eigenstate_suite(&p, count).unwrap();
    assert_eq!(r.states, expect);
    assert!(r.residual < 1e-8, "{p}: residual {}", r.residual);
    assert!(r.orthonormality < 1e-9, "{p}: orthonormality {}", r.orthonormality);
    assert!(r.node_mismatches.is_empty(), "{p}: {:?}", r.node_mismatches);
    assert!(r.imaginary < 1e-10, "{p}: imaginary {}", r.imaginary);
}

#[test]
fn deep_hyperbolic_well() {
    assert_suite(SystemParams::rmii(16.0, 20.0).unwrap(), 100, 16);
}

#[test]
fn shallow_hyperbolic_well() {
    assert_suite(SystemParams::rmii(1.0, 2.0).unwrap(), 100, 1);
}

#[test]
fn trigonometric_well() {
    assert_suite(SystemParams::rmi(20.0, 2.0).unwrap(), 21, 21);
}

#[test]
fn bound_levels_sit_below_the_left_asymptote() {
    for (l, s) in [(16.0, 20.0), (1.0, 2.0), (0.0, 5.0), (24.0, 5.0)] {
        let p = SystemParams::rmii(l, s).unwrap();
        let m = p.n_max().unwrap();
        for n in 0..=m {
            assert!(p.energy(n) < -2.0 * l, "{p} n = {n}");
            if n > 0 {
                assert!(p.energy(n) > p.energy(n - 1));
            }
        }
    }
}

#[test]
fn gaussian_quadrature_converges_with_panels() {
    // erf(10) differs from 1 by ~2e-45
    let exact = std::f64::consts::PI.sqrt();
    let err = |panels: usize| (QuadratureGrid::new(-10.0, 10.0, panels).integrate_fn(|x| (-x * x).exp()) - exact).abs();
    let (e1, e2) = (err(1), err(2));
    assert!(e1 > 1e-8, "{e1}");
    assert!(e2 < e1 * 1e-4, "{e1} -> {e2}");
    assert!(err(4) < 1e-14);
}
