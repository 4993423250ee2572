//! One function per subcommand, each producing a table.

use std::sync::Arc;

use clap::Subcommand;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rosenmorse_core::classical::{orbit_at_energy, FlowOptions};
use rosenmorse_core::coherent::{
    coherent_state, evolve, observables, CoherentState, CsBasis, MatrixElements, SampledBasis,
};
use rosenmorse_core::ladder::{factorization_error, gha_check};
use rosenmorse_core::suites::{extension_ladder, extension_suite, ladder_suite, susy_suite};
use rosenmorse_core::susy::{type3_extension, type3_state, RationalExtension};
use rosenmorse_core::systems::{eigenstate, potential_fn, JetFn};
use rosenmorse_core::{Complex64, Jet, Variant};

use crate::config::{Defaults, RunConfig};
use crate::output::{Cell, Table};
use crate::CliError;

/// Search interval `(lo, hi)` for turning points.
pub type Bracket = (f64, f64);

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Bound-state energies.
    Spectrum,
    /// One eigenstate (and derivatives) on the x grid.
    Eigenstate,
    /// Riccati, intertwining, partner and added-level identities.
    SusyVerify,
    /// Ladder actions, factorization and algebra commutators.
    LadderVerify,
    /// Coherent-state densities over the (w, t, x) lattice.
    CoherentDensity,
    /// Phase-space means and variances over (w, t).
    Trajectory,
    /// Uncertainty product as a function of w at one time.
    UncertaintySweep,
    /// Classical orbits at the coherent-state energies.
    ClassicalOrbit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Eigenstate => "eigenstate",
            Command::SusyVerify => "susy-verify",
            Command::LadderVerify => "ladder-verify",
            Command::CoherentDensity => "coherent-density",
            Command::Trajectory => "trajectory",
            Command::UncertaintySweep => "uncertainty-sweep",
            Command::ClassicalOrbit => "classical-orbit",
        }
    }

    pub fn defaults(self) -> Defaults {
        let (w, t, n) = match self {
            Command::Spectrum => ("0", "0", 21),
            Command::Eigenstate => ("0", "0", 0),
            Command::LadderVerify => ("0", "0", 10),
            Command::CoherentDensity => ("0.5,1,2", "0", 0),
            Command::Trajectory => ("0.5,1,2", "0:3:0.01", 0),
            Command::UncertaintySweep => ("0:15:0.25", "0", 0),
            Command::ClassicalOrbit => ("0.5,1,2", "0", 0),
            Command::SusyVerify => ("0", "0", 0),
        };
        Defaults { w, t, n }
    }

    /// Whether tolerance breaches turn into exit code 3.
    pub fn verifies(self) -> bool {
        matches!(self, Command::SusyVerify | Command::LadderVerify)
    }
}

/// A table plus the checks that missed their tolerance.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub table: Table,
    pub breaches: Vec<String>,
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Spectrum => spectrum(cfg),
        Command::Eigenstate => eigenstate_table(cfg),
        Command::SusyVerify => susy_verify(cfg),
        Command::LadderVerify => ladder_verify(cfg),
        Command::CoherentDensity => coherent_density(cfg),
        Command::Trajectory => trajectory(cfg),
        Command::UncertaintySweep => uncertainty_sweep(cfg),
        Command::ClassicalOrbit => classical_orbit(cfg),
    }
    .map(|table| Outcome { breaches: breaches(&table), table })
}

fn extension(cfg: &RunConfig) -> Result<Option<RationalExtension>, CliError> {
    cfg.k.map(|k| type3_extension(&cfg.params, k)).transpose().map_err(CliError::from)
}

fn basis(cfg: &RunConfig) -> Result<CsBasis, CliError> {
    Ok(match extension(cfg)? {
        Some(ext) => CsBasis::TypeIII(ext),
        None => CsBasis::Base(cfg.params),
    })
}

fn state_at(b: &CsBasis, w: f64, cfg: &RunConfig) -> Result<CoherentState, CliError> {
    Ok(coherent_state(b, Complex64::new(w, 0.0), cfg.truncation_tol)?)
}

fn spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["n", "energy", "shifted"]);
    match extension(cfg)? {
        Some(ext) => {
            for n in 0..=ext.n_max() {
                t.push(vec![n.into(), ext.energy(n).into(), (ext.energy(n) - ext.eps()).into()]);
            }
        }
        None => {
            let p = cfg.params;
            let count = p.n_max().map_or(cfg.n, |m| m + 1);
            for n in 0..count {
                t.push(vec![n.into(), p.energy(n).into(), p.k(n).into()]);
            }
        }
    }
    Ok(t)
}

fn eigenstate_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let psi = match extension(cfg)? {
        Some(ext) => type3_state(&ext, cfg.n)?,
        None => eigenstate(&cfg.params, cfg.n)?,
    };
    let mut cols = vec!["x".to_string(), "re".into(), "im".into()];
    for k in 1..=cfg.jet_order {
        cols.push(format!("d{k}_re"));
        cols.push(format!("d{k}_im"));
    }
    let mut t = Table { columns: cols, rows: Vec::new() };
    for &x in &cfg.x {
        let j = psi.eval(x, cfg.jet_order)?;
        let mut row: Vec<Cell> = vec![x.into()];
        for k in 0..=cfg.jet_order {
            let d = j.derivative(k);
            row.push(d.re.into());
            row.push(d.im.into());
        }
        t.push(row);
    }
    Ok(t)
}

const CHECK_COLUMNS: [&str; 6] = ["check", "n", "value", "tolerance", "skipped", "passed"];

fn check_row(t: &mut Table, name: &str, n: usize, value: f64, tol: f64, skipped: usize) {
    t.push(vec![name.into(), n.into(), value.into(), tol.into(), skipped.into(), (value < tol).into()]);
}

/// Rows whose `passed` column is false, described with their residual.
fn breaches(t: &Table) -> Vec<String> {
    let Some(p) = t.column("passed") else { return Vec::new() };
    t.rows
        .iter()
        .filter(|r| r[p] == Cell::Bool(false))
        .map(|r| match (&r[0], &r[1], &r[2], &r[3]) {
            (Cell::Text(c), Cell::Int(n), Cell::Float(v), Cell::Float(tol)) => {
                format!("{c} (n = {n}): residual {v:e} exceeds {tol:e}")
            }
            _ => format!("{r:?}"),
        })
        .collect()
}

/// Order-6 jets with coefficients in [-1, 1], centred in the middle 90% of the domain.
pub fn random_test_jets(domain: (f64, f64), seed: u64, count: usize) -> Vec<Jet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = domain;
    let pad = 0.05 * (hi - lo);
    (0..count)
        .map(|_| {
            let x = rng.random_range(lo + pad..hi - pad);
            let c = (0..7).map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
            Jet::from_coeffs(x, c)
        })
        .collect()
}

fn susy_verify(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&CHECK_COLUMNS);
    let jets = random_test_jets(cfg.domain, cfg.seed, 20);
    let r = susy_suite(&cfg.params, &jets)?;
    check_row(&mut t, "riccati", 0, r.riccati, 1e-10, 0);
    check_row(&mut t, "intertwining", jets.len(), r.intertwining, 1e-8, 0);
    check_row(&mut t, "partner_potential", 0, r.partner, 1e-12, 0);
    check_row(&mut t, "ground_annihilation", 0, r.annihilation, 1e-10, 0);
    check_row(&mut t, "spectrum_bookkeeping", 0, r.bookkeeping, 1e-12, 0);
    if let Some(ext) = extension(cfg)? {
        let e = extension_suite(&ext)?;
        t.push(vec!["added_level".into(), 0usize.into(), e.eps.into(), "".into(), 0usize.into(), true.into()]);
        check_row(&mut t, "extension_ground_residual", 0, e.ground_residual, 1e-8, 0);
        check_row(&mut t, "extension_state_residual", ext.n_max(), e.state_residual, 1e-8, 0);
        check_row(&mut t, "extension_orthonormality", ext.n_max(), e.orthonormality, 1e-8, 0);
        check_row(&mut t, "extension_riccati", 0, e.riccati, 1e-10, 0);
        check_row(&mut t, "asymptote_minus", 0, e.asymptotes.0, 1e-6, 0);
        check_row(&mut t, "asymptote_plus", 0, e.asymptotes.1, 1e-6, 0);
        check_row(&mut t, "extension_bookkeeping", 0, if e.bookkeeping { 0.0 } else { 1.0 }, 0.5, 0);
    }
    Ok(t)
}

/// Ladder-action tolerance by excitation.
pub fn ladder_tolerance(n: usize) -> f64 {
    if n <= 6 {
        1e-6
    } else {
        1e-3
    }
}

fn ladder_verify(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = cfg.params;
    let mut t = Table::new(&CHECK_COLUMNS);
    let top = p.n_max().map_or(cfg.n, |m| m.min(cfg.n));
    for row in ladder_suite(&p, 0..=top)? {
        let name = match row.direction {
            rosenmorse_core::ladder::Direction::Lower => "lower",
            rosenmorse_core::ladder::Direction::Raise => "raise",
        };
        check_row(&mut t, name, row.n, row.error, ladder_tolerance(row.n), row.skipped);
    }
    for n in 1..=top {
        let c = factorization_error(&p, n)?;
        check_row(&mut t, "factorization", n, c.error, ladder_tolerance(n), c.skipped);
    }
    for n in (0..=4usize).filter(|&n| p.n_max().is_none_or(|m| n < m)) {
        let g = gha_check(&p, n)?;
        check_row(&mut t, "gha_lower", n, g.lower_residual, 1e-6, g.skipped);
        check_row(&mut t, "gha_raise", n, g.raise_residual, 1e-6, g.skipped);
        check_row(&mut t, "gha_omega", n, g.omega_residual, 1e-6, g.skipped);
    }
    if let Some(ext) = extension(cfg)? {
        let r = extension_ladder(&ext)?;
        check_row(&mut t, "extension_annihilation", 1, r.annihilation, 1e-9, 0);
        check_row(&mut t, "extension_action", 2, r.action, 1e-6, 0);
    }
    Ok(t)
}

fn coherent_density(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = basis(cfg)?;
    let mut t = Table::new(&["w", "t", "x", "density"]);
    for &w in &cfg.w {
        let cs = state_at(&b, w, cfg)?;
        for &time in &cfg.t {
            let f = evolve(&cs, time);
            for &x in &cfg.x {
                t.push(vec![w.into(), time.into(), x.into(), f.eval(x, 0)?.value().norm_sqr().into()]);
            }
        }
    }
    Ok(t)
}

fn trajectory(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = basis(cfg)?;
    let grid = cfg.quadrature();
    let mut t = Table::new(&["w", "t", "mean_x", "mean_p", "var_x", "var_p", "product"]);
    for &w in &cfg.w {
        let cs = state_at(&b, w, cfg)?;
        let me = MatrixElements::new(&SampledBasis::for_state(&cs, grid.clone())?);
        for &time in &cfg.t {
            let o = me.observables(&cs, time);
            t.push(vec![
                w.into(),
                time.into(),
                o.mean_x.into(),
                o.mean_p.into(),
                o.var_x.into(),
                o.var_p.into(),
                o.uncertainty_product.into(),
            ]);
        }
    }
    Ok(t)
}

fn uncertainty_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let [time] = cfg.t[..] else {
        return Err(CliError::Validation("uncertainty-sweep takes a single --t value".into()));
    };
    let b = basis(cfg)?;
    let grid = cfg.quadrature();
    let mut t = Table::new(&["w", "var_x", "var_p", "product"]);
    for &w in &cfg.w {
        let cs = state_at(&b, w, cfg)?;
        let o = observables(&cs, time, &SampledBasis::for_state(&cs, grid.clone())?);
        t.push(vec![w.into(), o.var_x.into(), o.var_p.into(), o.uncertainty_product.into()]);
    }
    Ok(t)
}

/// The potential of the configured system and a bracket for its turning points.
pub fn classical_potential(cfg: &RunConfig) -> Result<(Arc<dyn JetFn>, Bracket), CliError> {
    let v = match extension(cfg)? {
        Some(ext) => ext.potential_fn(),
        None => potential_fn(&cfg.params),
    };
    let (lo, hi) = cfg.domain;
    let bracket = match cfg.params.variant() {
        Variant::Rmii => (lo, hi),
        Variant::Rmi => (lo + 1e-3, hi - 1e-3),
    };
    Ok((v, bracket))
}

fn classical_orbit(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = basis(cfg)?;
    let (v, bracket) = classical_potential(cfg)?;
    let opts = FlowOptions { integrator: cfg.integrator, bracket, sample_every: cfg.sample_every };
    let mut t = Table::new(&["w", "t", "x", "p", "energy", "drift"]);
    for &w in &cfg.w {
        let e = state_at(&b, w, cfg)?.mean_energy();
        let orbit = orbit_at_energy(v.as_ref(), e, cfg.t_end, cfg.dt, &opts)?;
        for &(time, x, p) in &orbit.samples {
            let h = p * p + v.eval(x, 0)?.value().re;
            t.push(vec![w.into(), time.into(), x.into(), p.into(), e.into(), ((h - e).abs() / e.abs()).into()]);
        }
    }
    Ok(t)
}
