//! Grid-level verification suites. Each returns the measured residuals; the caller
//! decides which tolerances apply.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::diagnostics::{hamiltonian_jet, imaginary_residue, node_count, orthonormality_defect, schrodinger_residual};
use crate::error::{Error, Result};
pub use crate::ladder::factorization_error;
use crate::ladder::{build_ladder, build_re_ladder, ladder_action_error, Direction};
use crate::numerics::jet::Jet;
use crate::susy::{intertwiners, partner_potential, riccati_residual, superpotential, type3_state, RationalExtension};
use crate::systems::{eigenstate, interior_grid, potential_fn, rmi_complex_state, SystemParams, Variant, WaveFunction};

/// Points used for pointwise residuals.
pub const RESIDUAL_POINTS: usize = 801;
/// Points used for sign-change counting.
pub const NODE_POINTS: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSuite {
    pub states: usize,
    /// Worst relative Schrödinger residual.
    pub residual: f64,
    pub orthonormality: f64,
    /// `(n, counted nodes)` wherever the count differs from `n`.
    pub node_mismatches: Vec<(usize, usize)>,
    /// Worst imaginary residue before the real part is taken (RMI only; zero for RMII).
    pub imaginary: f64,
}

/// Checks `ψ(0..count)`. For RMII `count` is clipped to the bound spectrum.
pub fn eigenstate_suite(p: &SystemParams, count: usize) -> Result<EigenSuite> {
    let count = match p.n_max() {
        Some(m) => count.min(m + 1),
        None => count,
    };
    let (lo, hi) = p.domain();
    let xs = interior_grid(lo, hi, RESIDUAL_POINTS);
    let node_xs = interior_grid(lo, hi, NODE_POINTS);
    let v = potential_fn(p);
    let states: Vec<WaveFunction> = (0..count).map(|n| eigenstate(p, n)).collect::<Result<_>>()?;
    let mut residual = 0.0f64;
    let mut imaginary = 0.0f64;
    let mut node_mismatches = Vec::new();
    for (n, psi) in states.iter().enumerate() {
        residual = residual.max(schrodinger_residual(psi, v.as_ref(), psi.energy, &xs)?);
        let nodes = node_count(psi, &node_xs)?;
        if nodes != n {
            node_mismatches.push((n, nodes));
        }
        if p.variant() == Variant::Rmi {
            imaginary = imaginary.max(imaginary_residue(&rmi_complex_state(p, n)?, &xs)?);
        }
    }
    let orthonormality = orthonormality_defect(&states, &p.default_grid())?;
    Ok(EigenSuite { states: count, residual, orthonormality, node_mismatches, imaginary })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SusySuite {
    /// `max |W' + W² - V + E(0)| / max(1, |V|)`.
    pub riccati: f64,
    /// Worst `|(B-H - H̃B-)f| / max(|B-Hf|, |H̃B-f|)` over the test jets.
    pub intertwining: f64,
    /// `max |(V - 2W') - V_next| / max |V_next|` on the grid.
    pub partner: f64,
    /// `max |B-ψ(0)| / max |ψ(0)|`.
    pub annihilation: f64,
    /// `max |E_next(n) - E(n+1)|` over the shared bound levels.
    pub bookkeeping: f64,
}

/// SUSY identities for `p` and its hierarchy neighbour. The test jets must be
/// centred inside the working domain and have order at least 3.
pub fn susy_suite(p: &SystemParams, test_jets: &[Jet]) -> Result<SusySuite> {
    let next = p.level(1);
    let (lo, hi) = p.domain();
    let xs = interior_grid(lo, hi, RESIDUAL_POINTS);
    let v = potential_fn(p);
    let v_next = potential_fn(&next);
    let w = superpotential(p);
    let partner = partner_potential(p);
    let (bm, _) = intertwiners(p);
    let ground = eigenstate(p, 0)?;
    let e0 = p.energy(0);

    let (mut riccati, mut pd, mut pscale, mut ann, mut gscale) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &x in &xs {
        let vx = v.eval(x, 0)?.value().re;
        riccati = riccati.max(riccati_residual(w.as_ref(), v.as_ref(), e0, x)? / vx.abs().max(1.0));
        let vn = v_next.eval(x, 0)?.value();
        pd = pd.max((partner.eval(x, 0)?.value() - vn).norm());
        pscale = pscale.max(vn.norm());
        let g = ground.eval(x, 1)?;
        ann = ann.max(bm.apply(&g)?.value().norm());
        gscale = gscale.max(g.value().norm());
    }

    let mut intertwining = 0.0f64;
    for f in test_jets {
        if f.order() < 3 {
            return Err(Error::InsufficientJetOrder { required: 3, available: f.order() });
        }
        let k = f.order();
        let vj = v.eval(f.center(), k)?;
        let vnj = v_next.eval(f.center(), k)?;
        let lhs = bm.apply(&hamiltonian_jet(f, &vj))?;
        let rhs = hamiltonian_jet(&bm.apply(f)?, &vnj);
        let m = lhs.order().min(rhs.order());
        let (lhs, rhs) = (lhs.truncate(m), rhs.truncate(m));
        let scale = lhs.max_abs().max(rhs.max_abs());
        if scale > 0.0 {
            intertwining = intertwining.max((&lhs - &rhs).max_abs() / scale);
        }
    }

    // Sp(H̃) = Sp(H) \ {E(0)}: the partner's levels are E(1), E(2), ...
    let bookkeeping = match (p.n_max(), next.n_max()) {
        (Some(m), Some(mn)) if mn + 1 == m => level_gap(p, &next, m),
        (Some(0), None) => 0.0,
        (Some(_), _) => f64::INFINITY,
        (None, _) => level_gap(p, &next, 20),
    };
    Ok(SusySuite { riccati, intertwining, partner: pd / pscale, annihilation: ann / gscale, bookkeeping })
}

fn level_gap(p: &SystemParams, next: &SystemParams, count: usize) -> f64 {
    (0..count).fold(0.0f64, |a, n| {
        let e = p.energy(n + 1);
        a.max((next.energy(n) - e).abs() / e.abs().max(1.0))
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtensionSuite {
    pub eps: f64,
    /// Relative residual of `ψ̃(0)` against `Ṽ` with energy `ε`.
    pub ground_residual: f64,
    /// Worst relative residual over all `ψ̃(n)` at their assigned energies.
    pub state_residual: f64,
    pub orthonormality: f64,
    /// `max |W' + W² - V + ε| / max(1, |V|)` for the seed superpotential against the
    /// base potential.
    pub riccati: f64,
    /// `|Ṽ(-L) + 2λ|` and `|Ṽ(L) - 2λ|` at `L = 25`.
    pub asymptotes: (f64, f64),
    /// Whether the assigned energies are `{ε} ∪ Sp(H)` in order.
    pub bookkeeping: bool,
}

pub const ASYMPTOTE_POINT: f64 = 25.0;

pub fn extension_suite(ext: &RationalExtension) -> Result<ExtensionSuite> {
    let base = ext.base();
    let (lo, hi) = base.domain();
    let xs = interior_grid(lo, hi, RESIDUAL_POINTS);
    let v = ext.potential_fn();
    let w = ext.superpotential();
    let eps = ext.eps();
    let states: Vec<WaveFunction> = (0..=ext.n_max()).map(|n| type3_state(ext, n)).collect::<Result<_>>()?;
    let ground_residual = schrodinger_residual(&states[0], v.as_ref(), eps, &xs)?;
    let mut state_residual = 0.0f64;
    for s in &states {
        state_residual = state_residual.max(schrodinger_residual(s, v.as_ref(), s.energy, &xs)?);
    }
    let v_base = potential_fn(base);
    let mut riccati = 0.0f64;
    for &x in &xs {
        let vx = v_base.eval(x, 0)?.value().re;
        riccati = riccati.max(riccati_residual(w.as_ref(), v_base.as_ref(), eps, x)? / vx.abs().max(1.0));
    }
    let two_l = 2.0 * base.lambda();
    let at = |x: f64| -> Result<f64> { Ok(v.eval(x, 0)?.value().re) };
    let asymptotes = ((at(-ASYMPTOTE_POINT)? + two_l).abs(), (at(ASYMPTOTE_POINT)? - two_l).abs());
    let bookkeeping = states[0].energy == eps
        && eps < base.energy(0)
        && states[1..].iter().enumerate().all(|(n, s)| s.energy == base.energy(n));
    let orthonormality = orthonormality_defect(&states, &base.default_grid())?;
    Ok(ExtensionSuite { eps, ground_residual, state_residual, orthonormality, riccati, asymptotes, bookkeeping })
}

/// One ladder-action measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderRow {
    pub n: usize,
    pub direction: Direction,
    pub order: usize,
    pub error: f64,
    pub skipped: usize,
}

/// `A∓(n)ψ(n)` against `√k ψ(n∓1)` for `n` in `ns`, both directions where a
/// neighbour exists.
pub fn ladder_suite(p: &SystemParams, ns: impl IntoIterator<Item = usize>) -> Result<Vec<LadderRow>> {
    let mut rows = Vec::new();
    for n in ns {
        for direction in [Direction::Lower, Direction::Raise] {
            let has_target = match direction {
                Direction::Lower => n > 0,
                Direction::Raise => p.n_max().is_none_or(|m| n < m),
            };
            if !has_target {
                continue;
            }
            let order = build_ladder(p, n, direction)?.order();
            let c = ladder_action_error(p, n, direction, RESIDUAL_POINTS)?;
            rows.push(LadderRow { n, direction, order, error: c.error, skipped: c.skipped });
        }
    }
    Ok(rows)
}

/// Ladder identities of the extension: `𝒜-(1)ψ̃(1) = 0` and
/// `𝒜-(2)ψ̃(2) = √k(1) ψ̃(1)`, both relative to `max |ψ̃(1)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtensionLadder {
    pub annihilation: f64,
    pub action: f64,
}

pub fn extension_ladder(ext: &RationalExtension) -> Result<ExtensionLadder> {
    let s1 = type3_state(ext, 1)?;
    let s2 = type3_state(ext, 2)?;
    let a1 = build_re_ladder(ext, 1, Direction::Lower)?.apply(&s1)?;
    let a2 = build_re_ladder(ext, 2, Direction::Lower)?.apply(&s2)?;
    let kt = ext.base().k(1).sqrt();
    let (lo, hi) = ext.base().domain();
    let (mut d0, mut d1, mut peak) = (0.0f64, 0.0f64, 0.0f64);
    for x in interior_grid(lo, hi, RESIDUAL_POINTS) {
        let v1 = s1.value(x)?;
        peak = peak.max(v1.norm());
        d0 = d0.max(a1.value(x)?.norm());
        d1 = d1.max((a2.value(x)? - v1 * kt).norm());
    }
    Ok(ExtensionLadder { annihilation: d0 / peak, action: d1 / peak })
}
