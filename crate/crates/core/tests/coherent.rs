use rosenmorse_core::coherent::{
    almost_eigen_deviation, coherent_state, nesting, observables, secondary_peak, CoherentState, CsBasis,
    MatrixElements, SampledBasis, DEFAULT_TRUNCATION_TOL,
};
use rosenmorse_core::susy::type3_extension;
use rosenmorse_core::{Complex64, SystemParams};

fn rmii() -> SystemParams {
    SystemParams::rmii(16.0, 20.0).unwrap()
}

fn state(b: &CsBasis, w: f64) -> CoherentState {
    coherent_state(b, Complex64::new(w, 0.0), DEFAULT_TRUNCATION_TOL).unwrap()
}

fn bases() -> Vec<(CsBasis, SystemParams)> {
    let ext = type3_extension(&rmii(), 2).unwrap();
    let rmi = SystemParams::rmi(20.0, 2.0).unwrap();
    vec![(CsBasis::Base(rmii()), rmii()), (CsBasis::TypeIII(ext), rmii()), (CsBasis::Base(rmi), rmi)]
}

#[test]
fn evolution_is_unitary() {
    for (b, p) in bases() {
        let cs = state(&b, 2.0);
        let basis = SampledBasis::for_state(&cs, p.default_grid()).unwrap();
        for i in 0..=30 {
            let o = observables(&cs, i as f64 * 0.1, &basis);
            assert!((o.norm - 1.0).abs() < 1e-10, "{:?} t = {}: {}", b.kind(), i as f64 * 0.1, o.norm);
        }
    }
}

#[test]
fn quadrature_mean_position_matches_spectral_sum() {
    for (b, p) in bases() {
        let cs = state(&b, 1.5);
        let basis = SampledBasis::for_state(&cs, p.default_grid()).unwrap();
        let me = MatrixElements::new(&basis);
        for i in 0..=12 {
            let t = i as f64 * 0.25;
            let (a, s) = (observables(&cs, t, &basis), me.observables(&cs, t));
            assert!((a.mean_x - s.mean_x).abs() < 1e-8, "{:?} t = {t}", b.kind());
            assert!((a.mean_p - s.mean_p).abs() < 1e-8, "{:?} t = {t}", b.kind());
        }
    }
}

#[test]
fn heisenberg_bound_everywhere() {
    for (b, p) in bases() {
        let grid = p.default_grid();
        for w in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let cs = state(&b, w);
            let basis = SampledBasis::for_state(&cs, grid.clone()).unwrap();
            let me = MatrixElements::new(&basis);
            for i in 0..=30 {
                let o = me.observables(&cs, i as f64 * 0.1);
                assert!(o.uncertainty_product >= 0.25 - 1e-9, "{:?} w = {w}: {o:?}", b.kind());
            }
        }
    }
}

#[test]
fn uncertainty_band_at_time_zero() {
    let b = CsBasis::Base(rmii());
    for i in 4..=32 {
        let w = i as f64 * 0.25;
        let cs = state(&b, w);
        let basis = SampledBasis::for_state(&cs, rmii().default_grid()).unwrap();
        let u = observables(&cs, 0.0, &basis).uncertainty_product;
        assert!((0.25..=0.5).contains(&u), "w = {w}: {u}");
    }
}

#[test]
fn extension_uncertainty_exceeds_base_at_small_label() {
    let ext = CsBasis::TypeIII(type3_extension(&rmii(), 2).unwrap());
    let base = CsBasis::Base(rmii());
    for w in [0.25, 0.5, 1.0] {
        let u = |b: &CsBasis| {
            let cs = state(b, w);
            let basis = SampledBasis::for_state(&cs, rmii().default_grid()).unwrap();
            observables(&cs, 0.0, &basis).uncertainty_product
        };
        assert!(u(&ext) > u(&base), "w = {w}");
    }
}

#[test]
fn almost_eigenstate_deviation() {
    let b = CsBasis::Base(rmii());
    let grid = rmii().default_grid();
    // large label: the unmatched top term dominates rounding
    let big = state(&b, 5.0);
    let (m, c) = (almost_eigen_deviation(&big, &grid).unwrap(), big.deviation_closed_form().unwrap());
    assert!((m - c).abs() < 1e-5 * c, "{m} vs {c}");
    // small label: the closed form is far below the rounding floor of the chain sum
    let small = state(&b, 0.5);
    assert!(almost_eigen_deviation(&small, &grid).unwrap() < 1e-13);
    assert!(small.deviation_closed_form().unwrap() < 1e-20);
    assert_eq!(almost_eigen_deviation(&state(&b, 0.0), &grid).unwrap(), 0.0);
}

#[test]
fn figure_shapes() {
    let ext = CsBasis::TypeIII(type3_extension(&rmii(), 2).unwrap());
    let grid = rmii().default_grid();
    let heights: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&w| {
            let cs = state(&ext, w);
            let basis = SampledBasis::for_state(&cs, grid.clone()).unwrap();
            secondary_peak(&basis.density(&cs, 0.0)).unwrap().1
        })
        .collect();
    assert!(heights.windows(2).all(|h| h[0] > h[1]), "{heights:?}");

    let b = CsBasis::Base(rmii());
    let widest = state(&b, 2.0);
    let me = MatrixElements::new(&SampledBasis::for_state(&widest, grid).unwrap());
    let curves: Vec<Vec<(f64, f64)>> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&w| {
            let cs = state(&b, w);
            (0..=3000).map(|i| me.observables(&cs, i as f64 * 1e-3)).map(|o| (o.mean_x, o.mean_p)).collect()
        })
        .collect();
    assert!(nesting(&curves, 24).nested());
}
