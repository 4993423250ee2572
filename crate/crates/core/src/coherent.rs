//! Barut-Girardello-type coherent states `φ(w) ∝ Σ w^n/√ρ(n) ψ(n)`, their time
//! evolution and phase-space observables.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ladder::{build_ladder, build_re_ladder, Direction, OperatorChain};
use crate::numerics::jet::Jet;
use crate::numerics::quadrature::{pairwise_sum, QuadratureGrid};
use crate::susy::{type3_state, RationalExtension};
use crate::systems::{eigenstate, JetFn, SystemParams, Variant, WaveFunction};

/// Hard cap on the number of RMI terms.
pub const MAX_TERMS: usize = 200;
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsKind {
    FiniteRmii,
    ShiftedTypeIII,
    TruncatedRmi,
}

/// The system whose states are superposed.
#[derive(Clone, Debug)]
pub enum CsBasis {
    Base(SystemParams),
    TypeIII(RationalExtension),
}

impl CsBasis {
    pub fn kind(&self) -> CsKind {
        match self {
            CsBasis::Base(p) if p.variant() == Variant::Rmii => CsKind::FiniteRmii,
            CsBasis::Base(_) => CsKind::TruncatedRmi,
            CsBasis::TypeIII(_) => CsKind::ShiftedTypeIII,
        }
    }

    /// Lowest excitation in the ladder subspace: `ψ̃(1)` for type III, else `ψ(0)`.
    pub fn first(&self) -> usize {
        match self {
            CsBasis::TypeIII(_) => 1,
            CsBasis::Base(_) => 0,
        }
    }

    /// Highest excitation for the finite kinds.
    pub fn last(&self) -> Option<usize> {
        match self {
            CsBasis::Base(p) => p.n_max(),
            CsBasis::TypeIII(e) => Some(e.n_max()),
        }
    }

    fn base(&self) -> &SystemParams {
        match self {
            CsBasis::Base(p) => p,
            CsBasis::TypeIII(e) => e.base(),
        }
    }

    pub fn energy(&self, n: usize) -> f64 {
        match self {
            CsBasis::Base(p) => p.energy(n),
            CsBasis::TypeIII(e) => e.energy(n),
        }
    }

    pub fn state(&self, n: usize) -> Result<WaveFunction> {
        match self {
            CsBasis::Base(p) => eigenstate(p, n),
            CsBasis::TypeIII(e) => type3_state(e, n),
        }
    }

    pub fn lowering(&self, n: usize) -> Result<OperatorChain> {
        match self {
            CsBasis::Base(p) => build_ladder(p, n, Direction::Lower),
            CsBasis::TypeIII(e) => build_re_ladder(e, n, Direction::Lower),
        }
    }

    /// `ln ρ(n)`, with `ρ(n) = Π_{j=1}^{n} k(j)` and `ρ̃(n+1) = ρ_s(n)`.
    pub fn ln_rho(&self, n: usize) -> Result<f64> {
        let m = n.checked_sub(self.first()).ok_or(Error::AddedLevelLadder)?;
        if let Some(max) = self.last() {
            if n > max {
                return Err(Error::ExcitationOutOfRange { n, max });
            }
        }
        let p = self.base();
        Ok((1..=m).map(|j| p.k(j).ln()).sum())
    }

    pub fn rho(&self, n: usize) -> Result<f64> {
        Ok(self.ln_rho(n)?.exp())
    }
}

#[derive(Clone, Debug)]
pub struct CsTerm {
    /// Excitation label of the state.
    pub n: usize,
    /// `w^m / √(𝒩 ρ)`, with `m` counted from the lowest included state.
    pub coeff: Complex64,
    pub energy: f64,
    pub wf: WaveFunction,
}

#[derive(Clone, Debug)]
pub struct CoherentState {
    pub w: Complex64,
    pub kind: CsKind,
    pub basis: CsBasis,
    /// `𝒩(|w|²) = Σ |w|^{2m}/ρ`.
    pub norm_const: f64,
    pub truncation_tol: Option<f64>,
    pub terms: Vec<CsTerm>,
}

/// `ln(e^a + e^b)` without overflow.
fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Builds `φ(w)`. Finite kinds use every bound state; RMI keeps terms until the
/// discarded weight fraction drops below `truncation_tol`.
pub fn coherent_state(basis: &CsBasis, w: Complex64, truncation_tol: f64) -> Result<CoherentState> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::NonFinite("coherent-state label"));
    }
    let first = basis.first();
    let ln_w2 = 2.0 * w.norm().ln();
    // ln(|w|^{2m}/ρ), with 0^0 = 1
    let ln_t = |n: usize| -> Result<f64> {
        let m = n - first;
        let lw = if m == 0 { 0.0 } else { m as f64 * ln_w2 };
        Ok(lw - basis.ln_rho(n)?)
    };

    let (last, tol) = match basis.last() {
        Some(top) if basis.kind() != CsKind::TruncatedRmi => (top, None),
        _ => {
            if !(truncation_tol > 0.0) {
                return Err(Error::InvalidParams("truncation tolerance must be positive".into()));
            }
            (truncated_top(basis, ln_w2, truncation_tol)?, Some(truncation_tol))
        }
    };

    let mut ln_norm = f64::NEG_INFINITY;
    let ln_terms: Vec<f64> = (first..=last).map(ln_t).collect::<Result<_>>()?;
    for &t in &ln_terms {
        ln_norm = ln_add(ln_norm, t);
    }
    let phase = w.arg();
    let terms = (first..=last)
        .zip(&ln_terms)
        .map(|(n, &lt)| {
            let m = (n - first) as f64;
            let mag = (0.5 * (lt - ln_norm)).exp();
            Ok(CsTerm { n, coeff: Complex64::from_polar(mag, m * phase), energy: basis.energy(n), wf: basis.state(n)? })
        })
        .collect::<Result<_>>()?;
    Ok(CoherentState {
        w,
        kind: basis.kind(),
        basis: basis.clone(),
        norm_const: ln_norm.exp(),
        truncation_tol: tol,
        terms,
    })
}

/// First `N` whose geometric tail bound on `Σ_{n>N} |w|^{2n}/ρ(n)` is below
/// `tol · Σ_{n≤N}`. Term ratios `|w|²/k(n+1)` fall monotonically, so once a ratio is
/// below one the tail is bounded by `t_{N+1} / (1 - r_{N+1})`.
fn truncated_top(basis: &CsBasis, ln_w2: f64, tol: f64) -> Result<usize> {
    let p = basis.base();
    let mut ln_sum = 0.0;
    let mut ln_t = 0.0;
    for n in 0..MAX_TERMS {
        let ln_r = ln_w2 - p.k(n + 1).ln();
        let ln_next = ln_t + ln_r;
        if ln_r < 0.0 {
            let ln_tail = ln_next - (-ln_r.exp()).ln_1p();
            if ln_tail - ln_sum < tol.ln() {
                return Ok(n);
            }
        }
        ln_t = ln_next;
        ln_sum = ln_add(ln_sum, ln_t);
    }
    Err(Error::TruncationNotReached(MAX_TERMS))
}

impl CoherentState {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `⟨H⟩ = Σ |c_n|² E(n)`.
    pub fn mean_energy(&self) -> f64 {
        let parts: Vec<f64> = self.terms.iter().map(|t| t.coeff.norm_sqr() * t.energy).collect();
        pairwise_sum(&parts)
    }

    /// `Σ |c_n|²`; one up to rounding.
    pub fn weight(&self) -> f64 {
        let parts: Vec<f64> = self.terms.iter().map(|t| t.coeff.norm_sqr()).collect();
        pairwise_sum(&parts)
    }

    /// `c_n e^{-i E(n) t}`.
    pub fn coefficients_at(&self, t: f64) -> Vec<Complex64> {
        self.terms.iter().map(|c| c.coeff * Complex64::from_polar(1.0, -c.energy * t)).collect()
    }

    /// `|w|^{N+1} / √(𝒩 ρ(N))` for the top level `N`: the norm of the unmatched term
    /// in `A-φ - wφ`.
    pub fn deviation_closed_form(&self) -> Result<f64> {
        let top = self.terms.last().ok_or(Error::Mismatch("empty coherent state"))?;
        Ok(self.w.norm() * top.coeff.norm())
    }
}

/// Time-evolved `Φ(w; x, t)` as a jet evaluator.
pub fn evolve(cs: &CoherentState, t: f64) -> Arc<dyn JetFn> {
    let parts: Vec<(Complex64, Arc<dyn JetFn>)> =
        cs.coefficients_at(t).into_iter().zip(&cs.terms).map(|(c, term)| (c, term.wf.evaluator())).collect();
    Arc::new(move |x: f64, order: usize| {
        let mut acc = Jet::zero(x, order);
        for (c, f) in &parts {
            acc += &f.eval(x, order)?.scale(*c);
        }
        Ok(acc)
    })
}

/// `‖A-φ(w) - wφ(w)‖` with `A-` applied as operator chains, in `L²` over `grid`.
pub fn almost_eigen_deviation(cs: &CoherentState, grid: &QuadratureGrid) -> Result<f64> {
    if cs.kind == CsKind::TruncatedRmi {
        return Err(Error::Mismatch("almost-eigenstate deviation needs a finite basis"));
    }
    let chains: Vec<OperatorChain> = cs.terms.iter().map(|t| cs.basis.lowering(t.n)).collect::<Result<_>>()?;
    let mut dens = Vec::with_capacity(grid.len());
    let mut parts = Vec::with_capacity(2 * cs.terms.len());
    for &x in grid.nodes() {
        parts.clear();
        for (term, chain) in cs.terms.iter().zip(&chains) {
            let f = term.wf.eval(x, chain.order())?;
            parts.push(chain.apply_jet(&f)?.value() * term.coeff);
            parts.push(-f.value() * term.coeff * cs.w);
        }
        dens.push(pairwise_sum(&parts).norm_sqr());
    }
    Ok(grid.integrate_real(&dens).sqrt())
}

/// Basis states and their first derivatives at the nodes of a grid.
#[derive(Clone, Debug)]
pub struct SampledBasis {
    grid: QuadratureGrid,
    values: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
}

/// Tail threshold for the grid-coverage check on truncated RMII domains.
pub const COVERAGE_TOL: f64 = 1e-12;

impl SampledBasis {
    /// Samples the states. On a truncated RMII domain each state must have decayed
    /// below [`COVERAGE_TOL`] of its peak at both grid ends.
    pub fn new(states: &[WaveFunction], grid: QuadratureGrid, check_tails: bool) -> Result<Self> {
        let mut values = Vec::with_capacity(states.len());
        let mut derivs = Vec::with_capacity(states.len());
        for s in states {
            let mut v = Vec::with_capacity(grid.len());
            let mut d = Vec::with_capacity(grid.len());
            for &x in grid.nodes() {
                let j = s.eval(x, 1)?;
                v.push(j.value().re);
                d.push(j.derivative(1).re);
            }
            if check_tails {
                let peak = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
                let (lo, hi) = grid.domain();
                for end in [lo, hi] {
                    if s.value(end)?.norm() > COVERAGE_TOL * peak {
                        return Err(Error::GridCoverage(end));
                    }
                }
            }
            values.push(v);
            derivs.push(d);
        }
        Ok(Self { grid, values, derivs })
    }

    pub fn for_state(cs: &CoherentState, grid: QuadratureGrid) -> Result<Self> {
        let states: Vec<WaveFunction> = cs.terms.iter().map(|t| t.wf.clone()).collect();
        let tails = cs.kind != CsKind::TruncatedRmi;
        Self::new(&states, grid, tails)
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ c_n ψ_n` and `Σ c_n ψ_n'` at the nodes.
    pub fn combine(&self, coeffs: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        assert_eq!(coeffs.len(), self.values.len(), "coefficient count does not match basis");
        let m = self.grid.len();
        let mut f = alloc::vec![Complex64::new(0.0, 0.0); m];
        let mut df = f.clone();
        for (c, (v, d)) in coeffs.iter().zip(self.values.iter().zip(&self.derivs)) {
            for i in 0..m {
                f[i] += c * v[i];
                df[i] += c * d[i];
            }
        }
        (f, df)
    }

    /// `|Φ(x_i, t)|²` at the nodes.
    pub fn density(&self, cs: &CoherentState, t: f64) -> Vec<f64> {
        self.combine(&cs.coefficients_at(t)).0.iter().map(|z| z.norm_sqr()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observables {
    pub norm: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub uncertainty_product: f64,
}

impl Observables {
    fn from_moments(norm: f64, x: f64, x2: f64, p: f64, p2: f64) -> Self {
        let var_x = (x2 - x * x).max(0.0);
        let var_p = (p2 - p * p).max(0.0);
        Self { norm, mean_x: x, mean_p: p, var_x, var_p, uncertainty_product: var_x * var_p }
    }
}

/// `⟨x⟩, ⟨p⟩`, variances and `(Δx)²(Δp)²` by direct quadrature, with `⟨p⟩ = Im∫Φ*Φ'`
/// and `⟨p²⟩ = ∫|Φ'|²`. Moments are divided by the computed norm.
pub fn observables(cs: &CoherentState, t: f64, basis: &SampledBasis) -> Observables {
    let (f, df) = basis.combine(&cs.coefficients_at(t));
    let g = basis.grid();
    let xs = g.nodes();
    let rho: Vec<f64> = f.iter().map(|z| z.norm_sqr()).collect();
    let n = g.integrate_real(&rho);
    let m = |v: Vec<f64>| g.integrate_real(&v) / n;
    let x = m(rho.iter().zip(xs).map(|(r, x)| r * x).collect());
    let x2 = m(rho.iter().zip(xs).map(|(r, x)| r * x * x).collect());
    let p = m(f.iter().zip(&df).map(|(a, b)| (a.conj() * b).im).collect());
    let p2 = m(df.iter().map(|z| z.norm_sqr()).collect());
    Observables::from_moments(n.sqrt(), x, x2, p, p2)
}

/// `⟨ψ_m|O|ψ_n⟩` for `x`, `x²`, `p = -i d/dx` and `p²`, computed once per basis.
#[derive(Clone, Debug)]
pub struct MatrixElements {
    pub overlap: Vec<Vec<f64>>,
    pub x: Vec<Vec<f64>>,
    pub x2: Vec<Vec<f64>>,
    /// `∫ψ_m ψ_n'`; the `p` element is `-i` times this.
    pub d: Vec<Vec<f64>>,
    /// `∫ψ_m' ψ_n'`.
    pub p2: Vec<Vec<f64>>,
}

impl MatrixElements {
    pub fn new(basis: &SampledBasis) -> Self {
        let g = basis.grid();
        let xs = g.nodes();
        let n = basis.len();
        let table = |f: &dyn Fn(usize, usize, usize) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let v: Vec<f64> = (0..xs.len()).map(|i| f(a, b, i)).collect();
                            g.integrate_real(&v)
                        })
                        .collect()
                })
                .collect()
        };
        let (v, d) = (&basis.values, &basis.derivs);
        Self {
            overlap: table(&|a, b, i| v[a][i] * v[b][i]),
            x: table(&|a, b, i| v[a][i] * xs[i] * v[b][i]),
            x2: table(&|a, b, i| v[a][i] * xs[i] * xs[i] * v[b][i]),
            d: table(&|a, b, i| v[a][i] * d[b][i]),
            p2: table(&|a, b, i| d[a][i] * d[b][i]),
        }
    }

    fn quad(m: &[Vec<f64>], c: &[Complex64]) -> Complex64 {
        let parts: Vec<Complex64> = c
            .iter()
            .enumerate()
            .flat_map(|(a, ca)| c.iter().enumerate().map(move |(b, cb)| ca.conj() * cb * m[a][b]))
            .collect();
        pairwise_sum(&parts)
    }

    /// The same record as [`observables`], from the spectral sums
    /// `Σ c̄_m c_n e^{i(E_m - E_n)t} O_mn`.
    pub fn observables(&self, cs: &CoherentState, t: f64) -> Observables {
        let c = cs.coefficients_at(t);
        let n = Self::quad(&self.overlap, &c).re;
        let x = Self::quad(&self.x, &c).re / n;
        let x2 = Self::quad(&self.x2, &c).re / n;
        let p = (Self::quad(&self.d, &c) * Complex64::new(0.0, -1.0)).re / n;
        let p2 = Self::quad(&self.p2, &c).re / n;
        Observables::from_moments(n.sqrt(), x, x2, p, p2)
    }
}

/// Local maxima of sampled data, as `(index, value)` sorted by decreasing value.
pub fn local_maxima(values: &[f64]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .map(|i| (i, values[i]))
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    out
}

/// Height of the second-largest local maximum relative to the largest, with its index.
pub fn secondary_peak(values: &[f64]) -> Option<(usize, f64)> {
    let m = local_maxima(values);
    (m.len() >= 2).then(|| (m[1].0, m[1].1 / m[0].1))
}

/// Radius bands of phase-space curves around a common center, per angular bin.
#[derive(Clone, Debug, PartialEq)]
pub struct NestingReport {
    pub center: (f64, f64),
    /// `(min, max)` radius per bin for each curve; empty bins hold `None`.
    pub bands: Vec<Vec<Option<(f64, f64)>>>,
}

impl NestingReport {
    /// Every curve winds around the center (no empty bin) and each band lies
    /// strictly inside the next curve's band in every bin.
    pub fn nested(&self) -> bool {
        if self.bands.iter().any(|b| b.iter().any(Option::is_none)) {
            return false;
        }
        self.bands
            .windows(2)
            .all(|pair| pair[0].iter().zip(&pair[1]).all(|(a, b)| matches!((a, b), (Some(a), Some(b)) if a.1 < b.0)))
    }
}

/// Bins curves `(x, p)` by angle about the centroid of the first curve. Both axes
/// are scaled by the extents of the last curve so that the radii are comparable.
pub fn nesting(curves: &[Vec<(f64, f64)>], bins: usize) -> NestingReport {
    let first = &curves[0];
    let n = first.len() as f64;
    let center = (first.iter().map(|p| p.0).sum::<f64>() / n, first.iter().map(|p| p.1).sum::<f64>() / n);
    let extent = |f: fn(&(f64, f64)) -> f64| {
        let last = &curves[curves.len() - 1];
        let (lo, hi) = last.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| (a.0.min(v), a.1.max(v)));
        (hi - lo).max(f64::MIN_POSITIVE)
    };
    let (sx, sp) = (extent(|p| p.0), extent(|p| p.1));
    let bands = curves
        .iter()
        .map(|c| {
            let mut b: Vec<Option<(f64, f64)>> = alloc::vec![None; bins];
            for &(x, p) in c {
                let (dx, dp) = ((x - center.0) / sx, (p - center.1) / sp);
                let r = dx.hypot(dp);
                let turn = (dp.atan2(dx) + PI) / (2.0 * PI);
                let k = ((turn * bins as f64) as usize).min(bins - 1);
                b[k] = Some(match b[k] {
                    Some((lo, hi)) => (lo.min(r), hi.max(r)),
                    None => (r, r),
                });
            }
            b
        })
        .collect();
    NestingReport { center, bands }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::type3_extension;

    fn rmii() -> SystemParams {
        SystemParams::rmii(16.0, 20.0).unwrap()
    }

    #[test]
    fn rho_values() {
        let b = CsBasis::Base(rmii());
        assert_eq!(b.rho(0).unwrap(), 1.0);
        assert!((b.rho(1).unwrap() - 38.930859).abs() < 1e-6);
        let e = CsBasis::TypeIII(type3_extension(&rmii(), 2).unwrap());
        assert_eq!(e.rho(1).unwrap(), 1.0);
        assert!((e.rho(2).unwrap() - b.rho(1).unwrap()).abs() < 1e-12);
        assert!(e.rho(0).is_err());
    }

    #[test]
    fn zero_label_is_lowest_state() {
        let b = CsBasis::Base(rmii());
        let cs = coherent_state(&b, Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert_eq!(cs.terms[0].coeff, Complex64::new(1.0, 0.0));
        assert!(cs.terms[1..].iter().all(|t| t.coeff.norm() == 0.0));
        assert_eq!(cs.deviation_closed_form().unwrap(), 0.0);
        let e = CsBasis::TypeIII(type3_extension(&rmii(), 2).unwrap());
        let cs3 = coherent_state(&e, Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert_eq!((cs3.terms[0].n, cs3.terms[0].coeff.re), (1, 1.0));
    }

    #[test]
    fn extension_shares_normalization() {
        let w = Complex64::new(3.0, 0.0);
        let a = coherent_state(&CsBasis::Base(rmii()), w, 0.0).unwrap();
        let ext = type3_extension(&rmii(), 2).unwrap();
        let b = coherent_state(&CsBasis::TypeIII(ext), w, 0.0).unwrap();
        assert!((a.norm_const - b.norm_const).abs() < 1e-12 * a.norm_const);
        assert!((a.weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rmi_truncation() {
        let b = CsBasis::Base(SystemParams::rmi(20.0, 2.0).unwrap());
        let cs = coherent_state(&b, Complex64::new(2.0, 0.0), 1e-12).unwrap();
        assert!(cs.len() <= 41, "{}", cs.len());
        assert!((cs.weight() - 1.0).abs() < 1e-12);
        assert!(coherent_state(&b, Complex64::new(2.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn closed_form_deviation_grows() {
        let b = CsBasis::Base(rmii());
        let mut last = 0.0;
        for i in 1..=20 {
            let d =
                coherent_state(&b, Complex64::new(i as f64 * 0.05, 0.0), 0.0).unwrap().deviation_closed_form().unwrap();
            assert!(d > last);
            last = d;
        }
    }

    #[test]
    fn spectral_and_direct_observables_agree() {
        let p = rmii();
        let cs = coherent_state(&CsBasis::Base(p), Complex64::new(2.0, 0.0), 0.0).unwrap();
        let basis = SampledBasis::for_state(&cs, p.default_grid()).unwrap();
        let me = MatrixElements::new(&basis);
        for t in [0.0, 0.3, 1.1] {
            let a = observables(&cs, t, &basis);
            let b = me.observables(&cs, t);
            assert!((a.norm - 1.0).abs() < 1e-10);
            assert!((a.mean_x - b.mean_x).abs() < 1e-8, "{a:?} {b:?}");
            assert!((a.mean_p - b.mean_p).abs() < 1e-8);
            assert!(a.uncertainty_product >= 0.25 - 1e-9);
        }
        let still = coherent_state(&CsBasis::Base(p), Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert!(observables(&still, 0.4, &basis).mean_p.abs() < 1e-12);
    }

    #[test]
    fn large_label_delocalizes_in_time() {
        let p = rmii();
        let b = CsBasis::Base(p);
        let wide = coherent_state(&b, Complex64::new(5.0, 0.0), 0.0).unwrap();
        let narrow = coherent_state(&b, Complex64::new(0.5, 0.0), 0.0).unwrap();
        let basis = SampledBasis::for_state(&wide, p.default_grid()).unwrap();
        let growth = |cs: &CoherentState| observables(cs, 1.0, &basis).var_x / observables(cs, 0.0, &basis).var_x;
        assert!(growth(&wide) > 1.8, "{}", growth(&wide));
        assert!(growth(&narrow) < 1.2, "{}", growth(&narrow));
    }

    #[test]
    fn extension_secondary_peak_grows_as_label_shrinks() {
        let ext = type3_extension(&rmii(), 2).unwrap();
        let b = CsBasis::TypeIII(ext);
        let grid = rmii().default_grid();
        let mut last = f64::INFINITY;
        for w in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let cs = coherent_state(&b, Complex64::new(w, 0.0), 0.0).unwrap();
            let basis = SampledBasis::for_state(&cs, grid.clone()).unwrap();
            let (_, h) = secondary_peak(&basis.density(&cs, 0.0)).unwrap();
            assert!(h < last, "w = {w}: {h}");
            last = h;
        }
    }

    #[test]
    fn nesting_predicate() {
        let circle =
            |r: f64| (0..200).map(|i| (r * (i as f64 * 0.1).cos(), r * (i as f64 * 0.1).sin())).collect::<Vec<_>>();
        let rep = nesting(&[circle(0.5), circle(1.0), circle(2.0)], 12);
        assert!(rep.nested());
        assert!(!nesting(&[circle(1.0), circle(0.5)], 12).nested());
        let arc: Vec<_> = circle(1.0).into_iter().take(10).collect();
        assert!(!nesting(&[arc, circle(2.0)], 12).nested());
    }
}
