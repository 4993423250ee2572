//! The acceptance criteria as runnable checks. Each check measures, compares with
//! its fixed tolerance and runtime budget, and reports the numbers it saw.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rosenmorse_core::classical::{flow, harmonic, orbit_at_energy, FlowOptions};
use rosenmorse_core::coherent::{
    almost_eigen_deviation, coherent_state, nesting, observables, secondary_peak, CoherentState, CsBasis,
    MatrixElements, SampledBasis, DEFAULT_TRUNCATION_TOL,
};
use rosenmorse_core::ladder::gha_check;
use rosenmorse_core::suites::{eigenstate_suite, extension_ladder, extension_suite, ladder_suite, susy_suite};
use rosenmorse_core::susy::type3_extension;
use rosenmorse_core::systems::{potential_fn, JetFn};
use rosenmorse_core::{Complex64, SystemParams};

use crate::commands::{ladder_tolerance, random_test_jets};

#[derive(Clone, Debug)]
pub struct Report {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
    /// Set when the criterion cannot hold in double precision; the detail then
    /// carries the measured numbers.
    pub infeasible: Option<&'static str>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{verdict}] {}. {} ({:.2} s of {} s): {}",
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )?;
        if let (false, Some(why)) = (self.passed, self.infeasible) {
            write!(f, " [known: {why}]")?;
        }
        Ok(())
    }
}

type Measured = Result<(bool, String), String>;

fn timed(id: u8, title: &'static str, budget_s: u64, body: impl FnOnce() -> Measured) -> Report {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let (ok, mut detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    let in_time = elapsed < budget;
    if !in_time {
        detail.push_str("; over the runtime budget");
    }
    Report { id, title, passed: ok && in_time, detail, elapsed, budget, infeasible: None }
}

fn rmii() -> SystemParams {
    SystemParams::rmii(16.0, 20.0).expect("valid")
}

fn rmi() -> SystemParams {
    SystemParams::rmi(20.0, 2.0).expect("valid")
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

pub fn added_level() -> Report {
    timed(1, "added-level energy", 1, || {
        let ext = type3_extension(&rmii(), 2).map_err(err)?;
        let eps = ext.eps();
        Ok(((eps + 529.48).abs() < 0.01, format!("eps = {eps:.6}")))
    })
}

pub fn spectrum() -> Report {
    timed(2, "spectrum", 1, || {
        let p = rmii();
        let (m, e0, e1) = (p.n_max(), p.energy(0), rmi().energy(0));
        let ok = m == Some(15) && (e0 + 400.64).abs() < 1e-10 && (e1 + 96.0).abs() < 1e-10;
        Ok((ok, format!("n_max = {m:?}, E(0) = {e0:.12}, RMI E(0) = {e1:.12}")))
    })
}

pub fn eigenstates() -> Report {
    timed(3, "eigenstate suite", 30, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (p, count) in [(rmii(), 16), (SystemParams::rmii(1.0, 2.0).map_err(err)?, 1), (rmi(), 21)] {
            let r = eigenstate_suite(&p, count).map_err(err)?;
            ok &= r.states == count
                && r.residual < 1e-8
                && r.orthonormality < 1e-9
                && r.node_mismatches.is_empty()
                && r.imaginary < 1e-10;
            parts.push(format!(
                "{p}: {} states, residual {:.1e}, orthonormality {:.1e}, imaginary {:.1e}, node errors {}",
                r.states,
                r.residual,
                r.orthonormality,
                r.imaginary,
                r.node_mismatches.len()
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn susy() -> Report {
    timed(4, "SUSY suite", 30, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for p in [rmii(), SystemParams::rmii(1.0, 2.0).map_err(err)?, rmi()] {
            let jets = random_test_jets(p.domain(), 7, 20);
            let r = susy_suite(&p, &jets).map_err(err)?;
            ok &= r.riccati < 1e-10 && r.intertwining < 1e-8 && r.partner < 1e-12 && r.annihilation < 1e-10;
            parts.push(format!(
                "{p}: riccati {:.1e}, intertwining {:.1e}, partner {:.1e}, B-psi0 {:.1e}",
                r.riccati, r.intertwining, r.partner, r.annihilation
            ));
        }
        let ext = type3_extension(&rmii(), 2).map_err(err)?;
        let e = extension_suite(&ext).map_err(err)?;
        ok &= e.ground_residual < 1e-8 && e.asymptotes.0 < 1e-6 && e.asymptotes.1 < 1e-6;
        parts.push(format!(
            "type III: ground residual {:.1e}, asymptotes {:.1e} / {:.1e}",
            e.ground_residual, e.asymptotes.0, e.asymptotes.1
        ));
        Ok((ok, parts.join("; ")))
    })
}

pub fn ladders() -> Report {
    timed(5, "ladder action", 120, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for p in [rmii(), rmi()] {
            let rows = ladder_suite(&p, 0..=10).map_err(err)?;
            let low = rows.iter().filter(|r| r.n <= 6).fold(0.0f64, |m, r| m.max(r.error));
            let high = rows.iter().filter(|r| r.n > 6).fold(0.0f64, |m, r| m.max(r.error));
            ok &= rows.iter().all(|r| r.error < ladder_tolerance(r.n));
            let mut gha = 0.0f64;
            for n in 0..=4 {
                gha = gha.max(gha_check(&p, n).map_err(err)?.worst());
            }
            ok &= gha < 1e-6;
            parts.push(format!("{p}: n <= 6 {low:.1e}, n = 7..10 {high:.1e}, GHA {gha:.1e}"));
        }
        let ext = type3_extension(&rmii(), 2).map_err(err)?;
        let r = extension_ladder(&ext).map_err(err)?;
        ok &= r.annihilation < 1e-9 && r.action < 1e-6;
        parts.push(format!("type III: A-(1) {:.1e}, A-(2) {:.1e}", r.annihilation, r.action));
        Ok((ok, parts.join("; ")))
    })
}

/// Absolute rounding budget of the chain sum in `A-φ(w) - wφ(w)`, per unit `max(1, |w|)`.
const CHAIN_SUM_FLOOR: f64 = 1e-12;

pub fn almost_eigenstate() -> Report {
    let mut within_floor = true;
    let mut measured = 0;
    let mut r = timed(6, "almost-eigenstate identity", 60, || {
        let b = CsBasis::Base(rmii());
        let grid = rmii().default_grid();
        let mut ok = true;
        let mut parts = Vec::new();
        for w in [0.5, 1.0, 2.0, 5.0] {
            let cs = coherent_state(&b, Complex64::new(w, 0.0), 0.0).map_err(err)?;
            let m = almost_eigen_deviation(&cs, &grid).map_err(err)?;
            let c = cs.deviation_closed_form().map_err(err)?;
            let rel = (m - c).abs() / c;
            ok &= rel < 1e-8;
            measured += 1;
            within_floor &= rel < 1e-8 || (m - c).abs() <= CHAIN_SUM_FLOOR * w.max(1.0);
            parts.push(format!("w = {w}: measured {m:.3e}, closed form {c:.3e}, rel {rel:.1e}"));
        }
        Ok((ok, parts.join("; ")))
    });
    // Only a shortfall that rounding explains is a known failure.
    if !r.passed && within_floor && measured == 4 && r.elapsed < r.budget {
        r.infeasible = Some("closed form lies below the f64 rounding floor of the chain sum for small w");
    }
    r
}

fn basis_states() -> Result<Vec<(&'static str, CsBasis)>, String> {
    let ext = type3_extension(&rmii(), 2).map_err(err)?;
    Ok(vec![("RMII", CsBasis::Base(rmii())), ("type III", CsBasis::TypeIII(ext)), ("RMI", CsBasis::Base(rmi()))])
}

fn state(b: &CsBasis, w: f64) -> Result<CoherentState, String> {
    coherent_state(b, Complex64::new(w, 0.0), DEFAULT_TRUNCATION_TOL).map_err(err)
}

fn grid_for(b: &CsBasis) -> rosenmorse_core::QuadratureGrid {
    match b {
        CsBasis::Base(p) => p.default_grid(),
        CsBasis::TypeIII(e) => e.base().default_grid(),
    }
}

pub fn heisenberg() -> Report {
    timed(7, "Heisenberg bound", 120, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, b) in basis_states()? {
            let mut least = f64::INFINITY;
            for i in 0..=60 {
                let cs = state(&b, i as f64 * 0.25)?;
                let me = MatrixElements::new(&SampledBasis::for_state(&cs, grid_for(&b)).map_err(err)?);
                for j in 0..=30 {
                    least = least.min(me.observables(&cs, j as f64 * 0.1).uncertainty_product);
                }
            }
            ok &= least >= 0.25 - 1e-9;
            parts.push(format!("{name}: min product {least:.6}"));
        }
        let b = CsBasis::Base(rmii());
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 4..=32 {
            let cs = state(&b, i as f64 * 0.25)?;
            let basis = SampledBasis::for_state(&cs, rmii().default_grid()).map_err(err)?;
            let u = observables(&cs, 0.0, &basis).uncertainty_product;
            lo = lo.min(u);
            hi = hi.max(u);
        }
        ok &= lo >= 0.25 && hi <= 0.5;
        parts.push(format!("RMII w in [1, 8], t = 0: product in [{lo:.5}, {hi:.5}]"));
        Ok((ok, parts.join("; ")))
    })
}

pub fn classical() -> Report {
    timed(8, "classical module", 30, || {
        let opts = FlowOptions::new((-5.0, 5.0));
        let tr = flow(&harmonic, 1.0, 0.0, 1.0, 1e-4, &opts).map_err(err)?;
        let x1 = tr.samples.last().map(|s| s.1).unwrap_or(f64::NAN);
        let herr = (x1 - 2f64.cos()).abs();
        let mut ok = herr < 1e-6;
        let mut parts = vec![format!("harmonic |x(1) - cos 2| = {herr:.1e}")];
        for (name, b) in basis_states()? {
            let (v, bracket): (std::sync::Arc<dyn JetFn>, (f64, f64)) = match &b {
                CsBasis::Base(p) if p.variant() == rosenmorse_core::Variant::Rmi => {
                    (potential_fn(p), (1e-3, PI - 1e-3))
                }
                CsBasis::Base(p) => (potential_fn(p), p.domain()),
                CsBasis::TypeIII(e) => (e.potential_fn(), e.base().domain()),
            };
            let mut o = FlowOptions::new(bracket);
            o.sample_every = 1000;
            let mut worst = 0.0f64;
            for w in [0.5, 1.0, 2.0] {
                let e = state(&b, w)?.mean_energy();
                worst = worst.max(orbit_at_energy(v.as_ref(), e, 3.0, 1e-4, &o).map_err(err)?.max_drift);
            }
            ok &= worst < 1e-8;
            parts.push(format!("{name}: drift {worst:.1e}"));
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn figure_shapes() -> Report {
    timed(9, "figure shapes", 120, || {
        let ext = CsBasis::TypeIII(type3_extension(&rmii(), 2).map_err(err)?);
        let grid = rmii().default_grid();
        let mut heights = Vec::new();
        for w in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let cs = state(&ext, w)?;
            let basis = SampledBasis::for_state(&cs, grid.clone()).map_err(err)?;
            let h = secondary_peak(&basis.density(&cs, 0.0)).map(|p| p.1).unwrap_or(0.0);
            heights.push(h);
        }
        let grows = heights.windows(2).all(|h| h[0] > h[1]);

        let b = CsBasis::Base(rmii());
        let me = MatrixElements::new(&SampledBasis::for_state(&state(&b, 2.0)?, grid).map_err(err)?);
        let mut curves = Vec::new();
        for w in [0.5, 1.0, 2.0] {
            let cs = state(&b, w)?;
            curves
                .push((0..=3000).map(|i| me.observables(&cs, i as f64 * 1e-3)).map(|o| (o.mean_x, o.mean_p)).collect());
        }
        let nested = nesting(&curves, 24).nested();
        let hs: Vec<String> = heights.iter().map(|h| format!("{h:.3}")).collect();
        Ok((
            grows && nested,
            format!("secondary peak (w = 0.25..8) [{}], trajectories nested: {nested}", hs.join(", ")),
        ))
    })
}

/// Every criterion in order.
pub fn run_all() -> Vec<Report> {
    vec![
        added_level(),
        spectrum(),
        eigenstates(),
        susy(),
        ladders(),
        almost_eigenstate(),
        heisenberg(),
        classical(),
        figure_shapes(),
    ]
}
