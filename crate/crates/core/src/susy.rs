//! First-order SUSY: superpotentials, intertwiners `B± = W ± d/dx`, the shape
//! invariant hierarchy and the type III rational extensions of RMII.
//!
//! With `B±` built from `W`, `H = B+B- + ε` and the partner is `H̃ = B-B+ + ε`, so
//! `V = W² + W' + ε` and `Ṽ = V - 2W'`.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::jet::Jet;
use crate::numerics::quadrature::integrate_refined;
use crate::specfun::jacobi_robust;
use crate::systems::{
    eigenstate, potential, taylor_from_derivs, JetFn, SystemParams, SystemTag, Variant, WaveFunction, DEFAULT_CUTOFF,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

/// `W ± d/dx`.
#[derive(Clone)]
pub struct FirstOrderOp {
    w: Arc<dyn JetFn>,
    pub sign: Sign,
}

impl core::fmt::Debug for FirstOrderOp {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FirstOrderOp").field("sign", &self.sign).finish()
    }
}

impl FirstOrderOp {
    pub fn new(w: Arc<dyn JetFn>, sign: Sign) -> Self {
        Self { w, sign }
    }

    pub fn superpotential(&self) -> &Arc<dyn JetFn> {
        &self.w
    }

    /// Applies the operator to a jet of order `K`, giving order `K - 1`.
    pub fn apply(&self, f: &Jet) -> Result<Jet> {
        if f.order() == 0 {
            return Err(Error::InsufficientJetOrder { required: 1, available: 0 });
        }
        let k = f.order() - 1;
        let w = self.w.eval(f.center(), k)?;
        let wf = &w * &f.truncate(k);
        let df = f.differentiate();
        Ok(match self.sign {
            Sign::Minus => wf - df,
            Sign::Plus => wf + df,
        })
    }

    /// `scale · (W ± d/dx) ψ` as a new wave function with the given labels.
    pub fn map_state(&self, wf: &WaveFunction, scale: f64, n: usize, energy: f64, system: SystemTag) -> WaveFunction {
        let op = self.clone();
        let inner = wf.evaluator();
        let eval = move |x: f64, order: usize| Ok(op.apply(&inner.eval(x, order + 1)?)? * scale);
        WaveFunction::new(eval, n, energy, system, wf.normalizable)
    }
}

/// `W_s = -s tanh x - λ/s` (RMII) or `W_s = s cot x - λ/s` (RMI).
pub fn superpotential(p: &SystemParams) -> Arc<dyn JetFn> {
    let (s, l) = (p.s(), p.lambda());
    match p.variant() {
        Variant::Rmii => Arc::new(move |x: f64, k: usize| Ok(Jet::lift(x, k).tanh() * -s + -l / s)),
        Variant::Rmi => Arc::new(move |x: f64, k: usize| Ok(Jet::lift(x, k).cot()? * s + -l / s)),
    }
}

/// `(B-, B+)` for the system; `B-` annihilates its ground state.
pub fn intertwiners(p: &SystemParams) -> (FirstOrderOp, FirstOrderOp) {
    let w = superpotential(p);
    (FirstOrderOp::new(w.clone(), Sign::Minus), FirstOrderOp::new(w, Sign::Plus))
}

/// `V - 2W'` evaluated from the superpotential.
pub fn partner_potential(p: &SystemParams) -> Arc<dyn JetFn> {
    let p = *p;
    let w = superpotential(&p);
    Arc::new(move |x: f64, k: usize| {
        let v = potential(&p, &Jet::lift(x, k))?;
        let dw = w.eval(x, k + 1)?.differentiate();
        Ok(v - dw * 2.0)
    })
}

/// `W' + W² - V + ε` pointwise; zero for a valid superpotential.
pub fn riccati_residual(w: &dyn JetFn, v: &dyn JetFn, eps: f64, x: f64) -> Result<f64> {
    let wj = w.eval(x, 1)?;
    let w0 = wj.value();
    Ok((wj.derivative(1) + w0 * w0 - v.eval(x, 0)?.value() + eps).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDirection {
    /// `ψ_s(n+1) ↦ ψ_{s±1}(n)` through `B-_s`.
    Down,
    /// `ψ_{s±1}(n) ↦ ψ_s(n+1)` through `B+_s`.
    Up,
}

/// Moves an eigenstate along the hierarchy, normalized by `1/√(E_s(n+1) - E_s(0))`.
///
/// `p` is always the member whose intertwiners are used: the source for `Down`, the
/// target for `Up`.
pub fn susy_map(p: &SystemParams, direction: MapDirection, wf: &WaveFunction) -> Result<WaveFunction> {
    let (bm, bp) = intertwiners(p);
    let next = SystemParams::new(p.variant(), p.lambda(), p.level(1).s())?;
    match direction {
        MapDirection::Down => {
            if wf.n == 0 {
                return Err(Error::AnnihilatedState);
            }
            let n = wf.n - 1;
            let scale = 1.0 / (p.energy(n + 1) - p.energy(0)).sqrt();
            Ok(bm.map_state(wf, scale, n, p.energy(n + 1), SystemTag::Base(next)))
        }
        MapDirection::Up => {
            let n = wf.n;
            let scale = 1.0 / (p.energy(n + 1) - p.energy(0)).sqrt();
            Ok(bp.map_state(wf, scale, n + 1, p.energy(n + 1), SystemTag::Base(*p)))
        }
    }
}

/// State-adding partner of RMII seeded by the polynomial solution
/// `u = cosh^σ x · e^{λx/σ} · P_k^{(-ã,-b̃)}(tanh x)`, `σ = s + k + 1`.
#[derive(Clone)]
pub struct RationalExtension {
    base: SystemParams,
    k: usize,
    sigma: f64,
    a_t: f64,
    b_t: f64,
    eps: f64,
    ln_ground_norm: f64,
    ground_sign: f64,
    pub b_minus: FirstOrderOp,
    pub b_plus: FirstOrderOp,
}

impl core::fmt::Debug for RationalExtension {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RationalExtension")
            .field("base", &self.base)
            .field("k", &self.k)
            .field("eps", &self.eps)
            .finish()
    }
}

/// Sign-scan resolution for the seed node check.
pub const SEED_SCAN_POINTS: usize = 4096;

pub fn type3_extension(p: &SystemParams, k: usize) -> Result<RationalExtension> {
    if p.variant() != Variant::Rmii {
        return Err(Error::InvalidParams("type III extensions need an rmii base".to_string()));
    }
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::InvalidParams(alloc::format!("seed degree must be even and >= 2, got {k}")));
    }
    let (s, l) = (p.s(), p.lambda());
    let sigma = s + k as f64 + 1.0;
    let a_t = sigma + l / sigma;
    let b_t = sigma - l / sigma;
    let eps = -sigma * sigma - l * l / (sigma * sigma);
    let (a, b) = (Complex64::new(-a_t, 0.0), Complex64::new(-b_t, 0.0));
    let poly = move |z: f64| jacobi_robust(k, a, b, Complex64::new(z, 0.0), 0)[0].re;

    let ends = [poly(-1.0), poly(1.0)];
    let mut sign = ends[0].signum();
    for i in 0..=SEED_SCAN_POINTS + 1 {
        let z = -1.0 + 2.0 * i as f64 / (SEED_SCAN_POINTS + 1) as f64;
        let v = poly(z);
        if v == 0.0 || v.signum() != sign {
            return Err(Error::SeedHasNode(z));
        }
        sign = v.signum();
    }

    let w = seed_superpotential(k, sigma, l, a, b);
    let mut ext = RationalExtension {
        base: *p,
        k,
        sigma,
        a_t,
        b_t,
        eps,
        ln_ground_norm: 0.0,
        ground_sign: poly(0.0).signum(),
        b_minus: FirstOrderOp::new(w.clone(), Sign::Minus),
        b_plus: FirstOrderOp::new(w, Sign::Plus),
    };
    let density = |x: f64| {
        let e = 2.0 * ext.ln_inverse_profile(x);
        let pz = poly(x.tanh());
        e.exp() / (pz * pz)
    };
    let (mass, _) = integrate_refined(density, -DEFAULT_CUTOFF, DEFAULT_CUTOFF, 64, 1e-13, 8192)
        .ok_or(Error::NonFinite("type III ground-state normalization"))?;
    ext.ln_ground_norm = -0.5 * mass.ln();
    Ok(ext)
}

// W = σ tanh x + λ/σ + d/dx ln P_k(tanh x) = u'/u
fn seed_superpotential(k: usize, sigma: f64, l: f64, a: Complex64, b: Complex64) -> Arc<dyn JetFn> {
    Arc::new(move |x: f64, order: usize| {
        let xj = Jet::lift(x, order + 1);
        let t = xj.tanh();
        let pz = t.compose(&taylor_from_derivs(jacobi_robust(k, a, b, t.value(), order + 1)));
        let dlog = pz.differentiate().div(&pz.truncate(order))?;
        Ok(t.truncate(order) * sigma + l / sigma + dlog)
    })
}

impl RationalExtension {
    pub fn base(&self) -> &SystemParams {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn a_t(&self) -> f64 {
        self.a_t
    }

    pub fn b_t(&self) -> f64 {
        self.b_t
    }

    /// The added level `ε`.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn tag(&self) -> SystemTag {
        SystemTag::TypeIII { base: self.base, k: self.k }
    }

    /// Highest excitation of the extended system: the base tower plus one.
    pub fn n_max(&self) -> usize {
        self.base.n_max().map_or(0, |m| m + 1)
    }

    /// `Ẽ(0) = ε`, `Ẽ(n) = E_s(n-1)`.
    pub fn energy(&self, n: usize) -> f64 {
        if n == 0 {
            self.eps
        } else {
            self.base.energy(n - 1)
        }
    }

    fn jacobi_params(&self) -> (Complex64, Complex64) {
        (Complex64::new(-self.a_t, 0.0), Complex64::new(-self.b_t, 0.0))
    }

    /// `ln(cosh^{-σ} x e^{-λx/σ})`, the non-polynomial part of `1/u`.
    fn ln_inverse_profile(&self, x: f64) -> f64 {
        let a = x.abs();
        let ln_cosh = a + (-2.0 * a).exp().ln_1p() - core::f64::consts::LN_2;
        -self.sigma * ln_cosh - self.base.lambda() * x / self.sigma
    }

    /// `P_k(tanh x)` as a jet.
    pub fn seed_polynomial(&self, x: f64, order: usize) -> Jet {
        let (a, b) = self.jacobi_params();
        let t = Jet::lift(x, order).tanh();
        t.compose(&taylor_from_derivs(jacobi_robust(self.k, a, b, t.value(), order)))
    }

    /// The seed `u(x)`.
    pub fn seed(&self, x: f64, order: usize) -> Jet {
        let xj = Jet::lift(x, order);
        let env = (xj.ln_cosh() * self.sigma + &xj * (self.base.lambda() / self.sigma)).exp();
        env * self.seed_polynomial(x, order)
    }

    pub fn superpotential(&self) -> &Arc<dyn JetFn> {
        self.b_minus.superpotential()
    }

    /// Closed form `V_{s+1} + 2(1-z²){2zP'/P - (1-z²)[P''/P - (P'/P)²] - k}`, `z = tanh x`.
    pub fn potential_jet(&self, x: &Jet) -> Result<Jet> {
        let order = x.order();
        let shifted = SystemParams::unchecked(Variant::Rmii, self.base.lambda(), self.base.s() + 1.0);
        let v = potential(&shifted, x)?;
        let (a, b) = self.jacobi_params();
        let z = x.tanh();
        let d = jacobi_robust(self.k, a, b, z.value(), order + 2);
        let p0 = z.compose(&taylor_from_derivs(d.clone()));
        let p1 = z.compose(&taylor_from_derivs(d[1..].to_vec()));
        let p2 = z.compose(&taylor_from_derivs(d[2..].to_vec()));
        let r1 = p1.div(&p0)?;
        let r2 = p2.div(&p0)?;
        let one_m = (&z * &z) * -1.0 + 1.0;
        let inner = (&z * &r1) * 2.0 - &one_m * &(r2 - &r1 * &r1) + -(self.k as f64);
        Ok(v + (one_m * inner) * 2.0)
    }

    pub fn potential_fn(&self) -> Arc<dyn JetFn> {
        let ext = self.clone();
        Arc::new(move |x: f64, k: usize| ext.potential_jet(&Jet::lift(x, k)))
    }

    /// The same potential built as `V_s - 2W'` from the intertwiner superpotential.
    pub fn potential_via_superpotential(&self) -> Arc<dyn JetFn> {
        let base = self.base;
        let w = self.superpotential().clone();
        Arc::new(move |x: f64, k: usize| {
            let v = potential(&base, &Jet::lift(x, k))?;
            Ok(v - w.eval(x, k + 1)?.differentiate() * 2.0)
        })
    }
}

/// Closed-form `Ṽ` of the extension.
pub fn type3_potential(ext: &RationalExtension, x: &Jet) -> Result<Jet> {
    ext.potential_jet(x)
}

/// `ψ̃(0) ∝ 1/u` (positive at the origin, unit norm) or
/// `ψ̃(n) = 𝓑- ψ_s(n-1) / √(E_s(n-1) - ε)`.
pub fn type3_state(ext: &RationalExtension, n: usize) -> Result<WaveFunction> {
    let max = ext.n_max();
    if n > max {
        return Err(Error::ExcitationOutOfRange { n, max });
    }
    if n == 0 {
        let e = ext.clone();
        let eval = move |x: f64, order: usize| {
            let xj = Jet::lift(x, order);
            let ln_env = xj.ln_cosh() * -e.sigma + &xj * (-e.base.lambda() / e.sigma) + e.ln_ground_norm;
            (ln_env.exp() * e.ground_sign).div(&e.seed_polynomial(x, order))
        };
        return Ok(WaveFunction::new(eval, 0, ext.eps, ext.tag(), true));
    }
    let psi = eigenstate(&ext.base, n - 1)?;
    let scale = 1.0 / (ext.base.energy(n - 1) - ext.eps).sqrt();
    Ok(ext.b_minus.map_state(&psi, scale, n, ext.energy(n), ext.tag()))
}

/// All bound states `ψ̃(0..=n_max+1)`.
pub fn type3_states(ext: &RationalExtension) -> Result<Vec<WaveFunction>> {
    (0..=ext.n_max()).map(|n| type3_state(ext, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{relative_max_diff, schrodinger_residual};
    use crate::systems::{interior_grid, potential_fn};

    fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
    }

    #[test]
    fn ground_state_is_annihilated() {
        for p in [SystemParams::rmii(1.0, 2.0).unwrap(), SystemParams::rmi(20.0, 2.0).unwrap()] {
            let (bm, _) = intertwiners(&p);
            let psi = eigenstate(&p, 0).unwrap();
            let (lo, hi) = p.domain();
            let mut worst = 0.0f64;
            let mut peak = 0.0f64;
            for x in interior_grid(lo, hi, 801) {
                worst = worst.max(bm.apply(&psi.eval(x, 1).unwrap()).unwrap().value().norm());
                peak = peak.max(psi.value(x).unwrap().norm());
            }
            assert!(worst < 1e-10 * peak, "{p}: {worst}");
        }
    }

    #[test]
    fn shape_invariance_small_system() {
        let p = SystemParams::rmii(1.0, 2.0).unwrap();
        let vt = partner_potential(&p);
        let below = potential_fn(&p.level(1));
        for x in linspace(-10.0, 10.0, 201) {
            let d = vt.eval(x, 0).unwrap().value() - below.eval(x, 0).unwrap().value();
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn constant_lambda_partner_offset() {
        // λ = 0: Ṽ - V = 2s sech²x
        let p = SystemParams::rmii(0.0, 3.0).unwrap();
        let vt = partner_potential(&p);
        let v = potential_fn(&p);
        for x in linspace(-5.0, 5.0, 51) {
            let d = (vt.eval(x, 0).unwrap().value() - v.eval(x, 0).unwrap().value()).re;
            assert!((d - 6.0 / x.cosh().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn down_map_matches_lower_member() {
        let p = SystemParams::rmii(16.0, 20.0).unwrap();
        let psi1 = eigenstate(&p, 1).unwrap();
        let mapped = susy_map(&p, MapDirection::Down, &psi1).unwrap();
        let lower = eigenstate(&SystemParams::rmii(16.0, 19.0).unwrap(), 0).unwrap();
        let xs = interior_grid(-25.0, 25.0, 2001);
        assert!(relative_max_diff(&mapped, &lower, &xs).unwrap() < 1e-8);
        assert!(matches!(susy_map(&p, MapDirection::Down, &eigenstate(&p, 0).unwrap()), Err(Error::AnnihilatedState)));
    }

    #[test]
    fn added_level_example() {
        let p = SystemParams::rmii(16.0, 20.0).unwrap();
        let ext = type3_extension(&p, 2).unwrap();
        assert!((ext.eps() + 529.48).abs() < 0.01);
        assert!(ext.eps() < p.energy(0));
        let g = type3_state(&ext, 0).unwrap();
        assert!(g.value(0.0).unwrap().re > 0.0);
        let xs = interior_grid(-25.0, 25.0, 2001);
        assert!(schrodinger_residual(&g, ext.potential_fn().as_ref(), ext.eps(), &xs).unwrap() < 1e-8);
    }

    #[test]
    fn bad_seed_degrees() {
        let p = SystemParams::rmii(16.0, 20.0).unwrap();
        assert!(type3_extension(&p, 3).is_err());
        assert!(type3_extension(&p, 0).is_err());
        assert!(type3_extension(&SystemParams::rmi(1.0, 2.0).unwrap(), 2).is_err());
    }

    #[test]
    fn extension_potentials_agree_and_states_solve() {
        let p = SystemParams::rmii(16.0, 20.0).unwrap();
        let ext = type3_extension(&p, 2).unwrap();
        let (a, b) = (ext.potential_fn(), ext.potential_via_superpotential());
        for x in linspace(-20.0, 20.0, 401) {
            let (va, vb) = (a.eval(x, 0).unwrap().value(), b.eval(x, 0).unwrap().value());
            assert!((va - vb).norm() < 1e-10 * va.norm().max(1.0), "{x}: {va} {vb}");
        }
        let xs = interior_grid(-25.0, 25.0, 1001);
        let states = type3_states(&ext).unwrap();
        assert_eq!(states.len(), 17);
        for st in &states {
            assert!(schrodinger_residual(st, a.as_ref(), st.energy, &xs).unwrap() < 1e-8, "n = {}", st.n);
        }
        let grid = p.default_grid();
        assert!(crate::diagnostics::orthonormality_defect(&states, &grid).unwrap() < 1e-8);
    }
}
