//! Ladder operators as ordered operator chains.
//!
//! `A±(n)` walks `ψ_s(n)` down the hierarchy to a ground state with `B-` factors,
//! hops to the neighbouring member's ground state with a multiplier, then climbs back
//! with `B+` factors to `ψ_s(n±1)`. Everything is applied to jets, so an operator of
//! order `2n±1` just consumes that many Taylor orders.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::diagnostics::hamiltonian_jet;
use crate::error::{Error, Result};
use crate::numerics::jet::Jet;
use crate::susy::{intertwiners, FirstOrderOp, RationalExtension};
use crate::systems::{eigenstate, interior_grid, potential, JetFn, SystemParams, SystemTag, Variant, WaveFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Raise,
}

impl Direction {
    fn target(self, n: usize) -> Option<usize> {
        match self {
            Direction::Lower => n.checked_sub(1),
            Direction::Raise => Some(n + 1),
        }
    }
}

/// Which way a ground-state multiplier moves along the hierarchy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftLabel {
    /// `γ_s`: ground state of `s` to that of the next member (`s-1` RMII, `s+1` RMI).
    Gamma,
    /// `γ_s⁻¹`: the reverse step.
    GammaInverse,
}

/// Multiplication by `prefactor · g(x)`.
#[derive(Clone)]
pub struct MultiplierOp {
    g: Arc<dyn JetFn>,
    pub label: ShiftLabel,
    pub prefactor: f64,
}

impl core::fmt::Debug for MultiplierOp {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MultiplierOp").field("label", &self.label).field("prefactor", &self.prefactor).finish()
    }
}

impl MultiplierOp {
    pub fn apply(&self, f: &Jet) -> Result<Jet> {
        Ok(self.g.eval(f.center(), f.order())? * f * self.prefactor)
    }

    pub fn g(&self) -> &Arc<dyn JetFn> {
        &self.g
    }
}

/// `g = ψ_to(0)/ψ_from(0)` without normalization, plus the normalization ratio when
/// the target ground state is square integrable.
fn shift_between(from: SystemParams, to: SystemParams, label: ShiftLabel) -> (MultiplierOp, bool) {
    let g = move |x: f64, k: usize| {
        let xj = Jet::lift(x, k);
        Ok((to.ln_ground_profile(&xj)? - from.ln_ground_profile(&xj)?).exp())
    };
    let (prefactor, ok) = match (to.ln_norm(0), from.ln_norm(0)) {
        (Some(a), Some(b)) => ((a - b).exp(), true),
        _ => (1.0, false),
    };
    (MultiplierOp { g: Arc::new(g), label, prefactor }, ok)
}

/// The ground-state connection between `p` and its neighbour in the hierarchy.
///
/// For RMII, `γ_s = cosh x · e^{-λx/(s(s-1))}` with prefactor `M_{s-1}(0)/M_s(0)`.
pub fn ground_shift(p: &SystemParams, label: ShiftLabel) -> Result<MultiplierOp> {
    let delta = p.variant().delta();
    let target_s = match label {
        ShiftLabel::Gamma => p.s() + delta,
        ShiftLabel::GammaInverse => p.s() - delta,
    };
    let invalid = || Error::InvalidShiftedParams { lambda: p.lambda(), s: target_s };
    let to = SystemParams::new(p.variant(), p.lambda(), target_s).map_err(|_| invalid())?;
    let (op, ok) = shift_between(*p, to, label);
    if !ok {
        return Err(invalid());
    }
    Ok(op)
}

#[derive(Clone, Debug)]
pub enum ChainOp {
    First(FirstOrderOp),
    Multiplier(MultiplierOp),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainMeta {
    pub variant: Variant,
    pub direction: Direction,
    /// Excitation the chain expects as input.
    pub n: usize,
    pub system: SystemTag,
}

/// `scalar · op_last ∘ … ∘ op_first`; `ops` is stored in application order.
#[derive(Clone, Debug)]
pub struct OperatorChain {
    pub ops: Vec<ChainOp>,
    pub scalar: f64,
    pub meta: ChainMeta,
    /// Set when the image is not square integrable (`A+(n_max)`).
    pub unnormalizable: bool,
}

impl OperatorChain {
    /// Number of first-order factors, i.e. the differential order.
    pub fn order(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, ChainOp::First(_))).count()
    }

    pub fn multiplier_count(&self) -> usize {
        self.ops.len() - self.order()
    }

    /// Excitation of the image, or `None` for `A-(0)`.
    pub fn target(&self) -> Option<usize> {
        self.meta.direction.target(self.meta.n)
    }

    pub fn apply_jet(&self, f: &Jet) -> Result<Jet> {
        let need = self.order();
        if f.order() < need {
            return Err(Error::InsufficientJetOrder { required: need, available: f.order() });
        }
        let mut cur = f.clone();
        for op in &self.ops {
            cur = match op {
                ChainOp::First(b) => b.apply(&cur)?,
                ChainOp::Multiplier(m) => m.apply(&cur)?,
            };
        }
        Ok(cur * self.scalar)
    }

    /// The image of `wf` as a new wave function. The image keeps `wf`'s labels when
    /// the chain annihilates it.
    pub fn apply(&self, wf: &WaveFunction) -> Result<WaveFunction> {
        if wf.n != self.meta.n {
            return Err(Error::Mismatch("chain excitation does not match the state"));
        }
        let chain = self.clone();
        let inner = wf.evaluator();
        let need = self.order();
        let eval = move |x: f64, order: usize| chain.apply_jet(&inner.eval(x, order + need)?);
        let (n, energy) = match self.target() {
            Some(m) => (m, self.target_energy(m)),
            None => (wf.n, wf.energy),
        };
        Ok(WaveFunction::new(eval, n, energy, self.meta.system, wf.normalizable && !self.unnormalizable))
    }

    fn target_energy(&self, m: usize) -> f64 {
        match self.meta.system {
            SystemTag::Base(p) => p.energy(m),
            SystemTag::TypeIII { base, k } => {
                let sig = base.s() + k as f64 + 1.0;
                let l = base.lambda();
                if m == 0 {
                    -sig * sig - l * l / (sig * sig)
                } else {
                    base.energy(m - 1)
                }
            }
        }
    }
}

/// Builds `A±(n)` for a base system.
pub fn build_ladder(p: &SystemParams, n: usize, direction: Direction) -> Result<OperatorChain> {
    p.check_excitation(n)?;
    let meta = ChainMeta { variant: p.variant(), direction, n, system: SystemTag::Base(*p) };
    let Some(m) = direction.target(n) else {
        let (bm, _) = intertwiners(p);
        return Ok(OperatorChain { ops: alloc::vec![ChainOp::First(bm)], scalar: 1.0, meta, unnormalizable: false });
    };

    let mut ops = Vec::with_capacity(n + m + 1);
    let mut denom = 1.0;
    for j in 0..n {
        ops.push(ChainOp::First(intertwiners(&p.level(j)).0));
        if !(direction == Direction::Lower && j == 0) {
            denom *= (p.energy(n) - p.energy(j)).sqrt();
        }
    }
    let label = if m > n { ShiftLabel::Gamma } else { ShiftLabel::GammaInverse };
    let (mult, ok) = shift_between(p.level(n), p.level(m), label);
    ops.push(ChainOp::Multiplier(mult));
    for j in (0..m).rev() {
        ops.push(ChainOp::First(intertwiners(&p.level(j)).1));
        if !(direction == Direction::Raise && j == 0) {
            denom *= (p.energy(m) - p.energy(j)).sqrt();
        }
    }
    let beyond_top = p.n_max().is_some_and(|top| m > top);
    Ok(OperatorChain { ops, scalar: 1.0 / denom, meta, unnormalizable: !ok || beyond_top })
}

/// `𝒜±(n) = 𝓑- A±(n-1) 𝓑+ / √((Ẽ(n±1) - ε)(Ẽ(n) - ε))` on the extension.
///
/// `𝒜-(1)` has no image level, so only the nonzero factor is divided out; it is a
/// third-order operator that annihilates `ψ̃(1)`.
pub fn build_re_ladder(ext: &RationalExtension, n: usize, direction: Direction) -> Result<OperatorChain> {
    if n == 0 {
        return Err(Error::AddedLevelLadder);
    }
    let max = ext.n_max();
    if n > max {
        return Err(Error::ExcitationOutOfRange { n, max });
    }
    let inner = build_ladder(ext.base(), n - 1, direction)?;
    let mut ops = Vec::with_capacity(inner.ops.len() + 2);
    ops.push(ChainOp::First(ext.b_plus.clone()));
    ops.extend(inner.ops.iter().cloned());
    ops.push(ChainOp::First(ext.b_minus.clone()));

    let eps = ext.eps();
    let mut denom = (ext.energy(n) - eps).sqrt();
    if let Some(m) = direction.target(n) {
        if m > 0 {
            denom *= (ext.energy(m) - eps).sqrt();
        }
    }
    let meta = ChainMeta { variant: Variant::Rmii, direction, n, system: ext.tag() };
    Ok(OperatorChain { ops, scalar: inner.scalar / denom, meta, unnormalizable: inner.unnormalizable })
}

/// Residuals of the generalized Heisenberg algebra at one excitation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhaReport {
    pub n: usize,
    /// `Δ-(E(n)) = E(n-1) - E(n)`; zero for `n = 0`.
    pub delta_minus: f64,
    /// `Δ+(E(n)) = E(n+1) - E(n)`.
    pub delta_plus: f64,
    /// `Ω(E(n)) = k(n+1) - k(n)`.
    pub omega: f64,
    /// `max |[H, A-]ψ - Δ- A-ψ| / max |Δ- A-ψ|`.
    pub lower_residual: f64,
    pub raise_residual: f64,
    /// `max |[A-, A+]ψ - Ωψ| / max |Ωψ|`.
    pub omega_residual: f64,
    /// Grid points left out by the rounding floor, worst of the three checks.
    pub skipped: usize,
    pub points: usize,
}

impl GhaReport {
    pub fn worst(&self) -> f64 {
        self.lower_residual.max(self.raise_residual).max(self.omega_residual)
    }
}

pub const GHA_POINTS: usize = 401;

/// A point enters a pointwise check only when its rounding floor stays below this
/// fraction of the check's scale.
///
/// Near the RMI endpoints each `B-` factor cancels two powers of `x`, so an order `m`
/// chain loses roughly `x^{-m}` in relative precision there. The floor keeps those
/// points out of identity checks instead of letting rounding noise pose as a defect.
pub const ROUNDING_FLOOR: f64 = 1e-8;

/// `f` with each Taylor coefficient nudged by a relative `ε` of alternating sign.
/// Rerunning a computation on it shows how strongly input rounding is amplified at
/// this point.
pub fn perturbed(f: &Jet) -> Jet {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * (1.0 + if k % 2 == 0 { f64::EPSILON } else { -f64::EPSILON }))
        .collect();
    Jet::from_coeffs(f.center(), coeffs)
}

/// Outcome of a pointwise identity check on a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointwiseCheck {
    pub error: f64,
    pub used: usize,
    /// Points whose rounding floor exceeded [`ROUNDING_FLOOR`].
    pub skipped: usize,
}

#[derive(Default)]
struct Tally {
    rows: Vec<(f64, f64, f64)>,
}

impl Tally {
    fn push(&mut self, residual: f64, scale: f64, floor: f64) {
        self.rows.push((residual, scale, floor));
    }

    /// `max residual / max scale` over points whose floor is within budget.
    fn finish(&self, renorm: f64) -> PointwiseCheck {
        let peak = self.rows.iter().fold(0.0f64, |m, r| m.max(r.1));
        let (mut worst, mut used) = (0.0f64, 0);
        for &(r, _, floor) in &self.rows {
            if floor <= ROUNDING_FLOOR * peak {
                worst = worst.max(r);
                used += 1;
            }
        }
        let error = if peak > 0.0 { worst / peak * renorm } else { worst };
        PointwiseCheck { error, used, skipped: self.rows.len() - used }
    }
}

/// Checks the commutators `[H, A±] = Δ± A±` and `[A-, A+] = Ω` on `ψ(n)`.
pub fn gha_check(p: &SystemParams, n: usize) -> Result<GhaReport> {
    if let Some(max) = p.n_max() {
        if n + 1 > max {
            return Err(Error::ExcitationOutOfRange { n: n + 1, max });
        }
    }
    let psi = eigenstate(p, n)?;
    let up = build_ladder(p, n, Direction::Raise)?;
    let down = build_ladder(p, n, Direction::Lower)?;
    let down_up = build_ladder(p, n + 1, Direction::Lower)?;
    let up_down = if n > 0 { Some(build_ladder(p, n - 1, Direction::Raise)?) } else { None };

    let delta_plus = p.energy(n + 1) - p.energy(n);
    let delta_minus = if n > 0 { p.energy(n - 1) - p.energy(n) } else { 0.0 };
    let omega = p.k(n + 1) - p.k(n);
    let zero = Complex64::new(0.0, 0.0);

    // (H - E(n±1)) A±ψ(n) vanishes exactly when [H, A±] = Δ± A± holds on ψ(n)
    let residuals = |f: &Jet, v: &Jet| -> Result<[(Complex64, Complex64); 3]> {
        let commutator = |chain: &OperatorChain, e: f64, delta: f64| -> Result<(Complex64, Complex64)> {
            let phi = chain.apply_jet(f)?;
            let h = hamiltonian_jet(&phi, &v.truncate(phi.order()));
            Ok((h.value() - phi.value() * e, phi.value() * delta))
        };
        let lower = if n > 0 { commutator(&down, p.energy(n - 1), delta_minus)? } else { (zero, zero) };
        let raise = commutator(&up, p.energy(n + 1), delta_plus)?;
        let mut comm = down_up.apply_jet(&up.apply_jet(f)?)?.value();
        if let Some(ud) = &up_down {
            comm -= ud.apply_jet(&down.apply_jet(f)?)?.value();
        }
        let target = f.value() * omega;
        Ok([lower, raise, (comm - target, target)])
    };

    let order = 2 + up.order().max(down.order()) + down_up.order();
    let (lo, hi) = p.domain();
    let mut tallies: [Tally; 3] = Default::default();
    for x in interior_grid(lo, hi, GHA_POINTS) {
        let f = psi.eval(x, order)?;
        let v = potential(p, &Jet::lift(x, order))?;
        let r = residuals(&f, &v)?;
        let rp = residuals(&perturbed(&f), &v)?;
        for (t, (a, b)) in tallies.iter_mut().zip(r.iter().zip(&rp)) {
            t.push(a.0.norm(), a.1.norm(), (a.0 - b.0).norm());
        }
    }
    let [lower, raise, om] = tallies.map(|t| t.finish(1.0));
    Ok(GhaReport {
        n,
        delta_minus,
        delta_plus,
        omega,
        lower_residual: lower.error,
        raise_residual: raise.error,
        omega_residual: om.error,
        skipped: lower.skipped.max(raise.skipped).max(om.skipped),
        points: GHA_POINTS,
    })
}

/// `max |A(n)ψ(n) - √k ψ(n∓1)| / max |ψ(n∓1)|` on `count` interior points of the
/// working domain.
pub fn ladder_action_error(p: &SystemParams, n: usize, direction: Direction, count: usize) -> Result<PointwiseCheck> {
    let chain = build_ladder(p, n, direction)?;
    let Some(m) = chain.target() else {
        return Err(Error::InvalidParams(format!("A-(0) has no neighbour for n = {n}")));
    };
    let psi = eigenstate(p, n)?;
    let target = eigenstate(p, m)?;
    let root_k = p.k(n.max(m)).sqrt();
    let need = chain.order();
    let (lo, hi) = p.domain();
    let mut tally = Tally::default();
    for x in interior_grid(lo, hi, count) {
        let f = psi.eval(x, need)?;
        let e = target.value(x)? * root_k;
        let img = chain.apply_jet(&f)?.value();
        let floor = (chain.apply_jet(&perturbed(&f))?.value() - img).norm();
        tally.push((img - e).norm(), e.norm(), floor);
    }
    Ok(tally.finish(root_k))
}

/// `A+(n-1) A-(n) ψ(n)` against `k(n) ψ(n)`, as `max |·| / max |k ψ|` on the points
/// whose rounding floor is within budget.
pub fn factorization_error(p: &SystemParams, n: usize) -> Result<PointwiseCheck> {
    if n == 0 {
        return Err(Error::InvalidParams(String::from("factorization needs n >= 1")));
    }
    let down = build_ladder(p, n, Direction::Lower)?;
    let up = build_ladder(p, n - 1, Direction::Raise)?;
    let psi = eigenstate(p, n)?;
    let k = p.k(n);
    let need = down.order() + up.order();
    let (lo, hi) = p.domain();
    let mut tally = Tally::default();
    for x in interior_grid(lo, hi, GHA_POINTS) {
        let f = psi.eval(x, need)?;
        let img = up.apply_jet(&down.apply_jet(&f)?)?.value();
        let floor = (up.apply_jet(&down.apply_jet(&perturbed(&f))?)?.value() - img).norm();
        let e = f.value() * k;
        tally.push((img - e).norm(), e.norm(), floor);
    }
    Ok(tally.finish(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::{type3_extension, type3_state};

    fn rmii() -> SystemParams {
        SystemParams::rmii(16.0, 20.0).unwrap()
    }

    #[test]
    fn chain_shapes() {
        let p = rmii();
        let a0 = build_ladder(&p, 0, Direction::Lower).unwrap();
        assert_eq!((a0.order(), a0.multiplier_count()), (1, 0));
        let a2 = build_ladder(&p, 2, Direction::Raise).unwrap();
        assert_eq!((a2.order(), a2.multiplier_count()), (5, 1));
        for n in 1..=10 {
            assert_eq!(build_ladder(&p, n, Direction::Lower).unwrap().order(), 2 * n - 1);
            assert_eq!(build_ladder(&p, n, Direction::Raise).unwrap().order(), 2 * n + 1);
        }
        assert!(build_ladder(&p, 15, Direction::Raise).unwrap().unnormalizable);
        assert!(!build_ladder(&p, 14, Direction::Raise).unwrap().unnormalizable);
    }

    #[test]
    fn shift_connects_ground_states() {
        let p = SystemParams::rmii(1.0, 3.0).unwrap();
        let g = ground_shift(&p, ShiftLabel::Gamma).unwrap();
        let psi = eigenstate(&p, 0).unwrap();
        let lower = eigenstate(&p.level(1), 0).unwrap();
        for x in interior_grid(-25.0, 25.0, 501) {
            let a = g.apply(&psi.eval(x, 0).unwrap()).unwrap().value();
            assert!((a - lower.value(x).unwrap()).norm() < 1e-10);
        }
        let back = ground_shift(&p.level(1), ShiftLabel::GammaInverse).unwrap();
        assert!((g.prefactor * back.prefactor - 1.0).abs() < 1e-12);
        // s = 1, λ = 1 sits on the threshold: no bound ground state
        assert!(matches!(
            ground_shift(&SystemParams::rmii(1.0, 2.0).unwrap(), ShiftLabel::Gamma),
            Err(Error::InvalidShiftedParams { .. })
        ));
    }

    #[test]
    fn low_ladder_actions() {
        let p = rmii();
        assert!((p.k(1) - 38.930859).abs() < 1e-6);
        for (n, d) in [(1, Direction::Lower), (0, Direction::Raise), (3, Direction::Raise)] {
            let e = ladder_action_error(&p, n, d, 801).unwrap().error;
            assert!(e < 1e-8, "{n} {d:?}: {e}");
        }
        let q = SystemParams::rmi(20.0, 2.0).unwrap();
        assert!(ladder_action_error(&q, 3, Direction::Lower, 801).unwrap().error < 1e-7);
    }

    #[test]
    fn lowering_annihilates_ground() {
        let p = rmii();
        let out = build_ladder(&p, 0, Direction::Lower).unwrap().apply(&eigenstate(&p, 0).unwrap()).unwrap();
        let psi = eigenstate(&p, 0).unwrap();
        let xs = interior_grid(-25.0, 25.0, 401);
        let peak = crate::diagnostics::max_abs(&psi, &xs).unwrap();
        assert!(crate::diagnostics::max_abs(&out, &xs).unwrap() < 1e-10 * peak);
    }

    #[test]
    fn extension_ladder() {
        let p = rmii();
        let ext = type3_extension(&p, 2).unwrap();
        assert!(matches!(build_re_ladder(&ext, 0, Direction::Lower), Err(Error::AddedLevelLadder)));
        let a1 = build_re_ladder(&ext, 1, Direction::Lower).unwrap();
        assert_eq!(a1.order(), 3);
        let s1 = type3_state(&ext, 1).unwrap();
        let s2 = type3_state(&ext, 2).unwrap();
        let killed = a1.apply(&s1).unwrap();
        let a2 = build_re_ladder(&ext, 2, Direction::Lower).unwrap().apply(&s2).unwrap();
        let kt = p.k(1).sqrt();
        let (mut d0, mut d1, mut peak) = (0.0f64, 0.0f64, 0.0f64);
        for x in interior_grid(-25.0, 25.0, 801) {
            let v1 = s1.value(x).unwrap();
            peak = peak.max(v1.norm());
            d0 = d0.max(killed.value(x).unwrap().norm());
            d1 = d1.max((a2.value(x).unwrap() - v1 * kt).norm());
        }
        assert!(d0 < 1e-9 * peak, "{d0}");
        assert!(d1 < 1e-7 * kt * peak, "{d1}");
    }

    #[test]
    fn gha_low_level() {
        let r = gha_check(&rmii(), 1).unwrap();
        assert!((r.delta_minus + 38.930859).abs() < 1e-6);
        assert!(r.worst() < 1e-6, "{r:?}");
        let r0 = gha_check(&rmii(), 0).unwrap();
        assert!((r0.omega - rmii().k(1)).abs() < 1e-12);
    }
}
