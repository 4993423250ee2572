//! Grid checks shared by the test suites and the CLI verifiers.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::error::Result;
use crate::numerics::jet::Jet;
use crate::numerics::quadrature::QuadratureGrid;
use crate::systems::{JetFn, WaveFunction};

/// `max |-ψ'' + (V - E)ψ| / max |ψ|` over the points.
pub fn schrodinger_residual(wf: &WaveFunction, v: &dyn JetFn, energy: f64, xs: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &x in xs {
        let psi = wf.eval(x, 2)?;
        let pot = v.eval(x, 0)?.value();
        let r = -psi.derivative(2) + (pot - energy) * psi.value();
        worst = worst.max(r.norm());
        scale = scale.max(psi.value().norm());
    }
    Ok(worst / scale)
}

/// Sign changes of the real part, skipping samples below `1e-12` of the peak.
pub fn node_count(wf: &WaveFunction, xs: &[f64]) -> Result<usize> {
    let vals: Vec<f64> = xs.iter().map(|&x| wf.value(x).map(|v| v.re)).collect::<Result<_>>()?;
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0f64;
    let mut count = 0;
    for v in vals {
        if v.abs() <= 1e-12 * peak {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            count += 1;
        }
        last = v.signum();
    }
    Ok(count)
}

/// `max |Im ψ| / max |ψ|`.
pub fn imaginary_residue(wf: &WaveFunction, xs: &[f64]) -> Result<f64> {
    let (mut im, mut peak) = (0.0f64, 0.0f64);
    for &x in xs {
        let v = wf.value(x)?;
        im = im.max(v.im.abs());
        peak = peak.max(v.norm());
    }
    Ok(im / peak)
}

/// `max |a - b| / max |b|`.
pub fn relative_max_diff(a: &WaveFunction, b: &WaveFunction, xs: &[f64]) -> Result<f64> {
    let (mut d, mut peak) = (0.0f64, 0.0f64);
    for &x in xs {
        let bv = b.value(x)?;
        d = d.max((a.value(x)? - bv).norm());
        peak = peak.max(bv.norm());
    }
    Ok(d / peak)
}

/// `max |f|` over the points.
pub fn max_abs(wf: &WaveFunction, xs: &[f64]) -> Result<f64> {
    xs.iter().try_fold(0.0f64, |m, &x| Ok(m.max(wf.value(x)?.norm())))
}

/// `⟨a|b⟩ = ∫ conj(a) b`.
pub fn inner(a: &WaveFunction, b: &WaveFunction, grid: &QuadratureGrid) -> Result<Complex64> {
    let vals: Vec<Complex64> =
        grid.nodes().iter().map(|&x| Ok(a.value(x)?.conj() * b.value(x)?)).collect::<Result<_>>()?;
    Ok(grid.integrate(&vals))
}

pub fn norm(wf: &WaveFunction, grid: &QuadratureGrid) -> Result<f64> {
    Ok(inner(wf, wf, grid)?.re.sqrt())
}

/// Largest `|⟨ψ_i|ψ_j⟩ - δ_ij|` over all pairs.
pub fn orthonormality_defect(states: &[WaveFunction], grid: &QuadratureGrid) -> Result<f64> {
    let samples: Vec<Vec<Complex64>> = states.iter().map(|s| s.sample(grid.nodes())).collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate().skip(i) {
            let prod: Vec<Complex64> = a.iter().zip(b).map(|(p, q)| p.conj() * q).collect();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((grid.integrate(&prod) - target).norm());
        }
    }
    Ok(worst)
}

/// The jet of `(-d²/dx² + V) f` from a jet of `f`; order drops by two.
pub fn hamiltonian_jet(f: &Jet, v: &Jet) -> Jet {
    let d2 = f.differentiate().differentiate();
    let k = d2.order();
    &(v.truncate(k) * f.truncate(k)) - &d2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{eigenstate, interior_grid, SystemParams};

    #[test]
    fn rmii_small_system_checks() {
        let p = SystemParams::rmii(1.0, 2.0).unwrap();
        let psi = eigenstate(&p, 0).unwrap();
        let v = move |x: f64, k: usize| crate::systems::potential(&p, &Jet::lift(x, k));
        let xs = interior_grid(-25.0, 25.0, 4096);
        assert!(schrodinger_residual(&psi, &v, p.energy(0), &xs).unwrap() < 1e-12);
        assert_eq!(node_count(&psi, &xs).unwrap(), 0);
        assert!((norm(&psi, &p.default_grid()).unwrap() - 1.0).abs() < 1e-10);
    }
}
