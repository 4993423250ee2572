//! Classical bounded motion with `H = p² + V(x)`, so `ẋ = 2p` and `ṗ = -V'(x)`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::jet::Jet;
use crate::systems::JetFn;

/// Fixed-step symplectic schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    /// Kick-drift-kick, second order.
    Leapfrog,
    /// Three leapfrog substeps with Yoshida weights, fourth order.
    Yoshida4,
    /// Seven substeps, sixth order.
    Yoshida6,
    /// Fifteen substeps, eighth order.
    Yoshida8,
}

// Outer weights of the symmetric compositions, innermost last. The central
// weight is `1 - 2 * sum`.
const YOSHIDA6: [f64; 3] = [0.784513610477560, 0.235573213359357, -1.17767998417887];
const YOSHIDA8: [f64; 7] = [
    0.914844246229740,
    0.253693336566229,
    -1.44485223686048,
    -0.158240635368243,
    1.93813913762276,
    -1.96061023297549,
    0.102799849391985,
];

fn compose(v: &dyn JetFn, outer: &[f64], x: &mut f64, p: &mut f64, dt: f64) -> Result<()> {
    let center = 1.0 - 2.0 * outer.iter().sum::<f64>();
    for &w in outer {
        leapfrog(v, x, p, w * dt)?;
    }
    leapfrog(v, x, p, center * dt)?;
    for &w in outer.iter().rev() {
        leapfrog(v, x, p, w * dt)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTrajectory {
    /// `(t, x, p)`.
    pub samples: Vec<(f64, f64, f64)>,
    pub energy: f64,
    /// `max |H(t) - H(0)| / |H(0)|` over every step.
    pub max_drift: f64,
    pub turning_points: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    pub integrator: Integrator,
    /// Search interval for the turning points of the initial energy.
    pub bracket: (f64, f64),
    /// Keep every `sample_every`-th step.
    pub sample_every: usize,
}

impl FlowOptions {
    pub fn new(bracket: (f64, f64)) -> Self {
        Self { integrator: Integrator::Yoshida8, bracket, sample_every: 1 }
    }
}

fn value(v: &dyn JetFn, x: f64) -> Result<f64> {
    Ok(v.eval(x, 0)?.value().re)
}

fn force(v: &dyn JetFn, x: f64) -> Result<f64> {
    Ok(-v.eval(x, 1)?.derivative(1).re)
}

fn leapfrog(v: &dyn JetFn, x: &mut f64, p: &mut f64, dt: f64) -> Result<()> {
    *p += 0.5 * dt * force(v, *x)?;
    *x += 2.0 * dt * *p;
    *p += 0.5 * dt * force(v, *x)?;
    Ok(())
}

fn step(v: &dyn JetFn, scheme: Integrator, x: &mut f64, p: &mut f64, dt: f64) -> Result<()> {
    match scheme {
        Integrator::Leapfrog => leapfrog(v, x, p, dt),
        Integrator::Yoshida4 => compose(v, &[1.0 / (2.0 - 2f64.cbrt())], x, p, dt),
        Integrator::Yoshida6 => compose(v, &YOSHIDA6, x, p, dt),
        Integrator::Yoshida8 => compose(v, &YOSHIDA8, x, p, dt),
    }
}

/// Integrates from `(x0, p0)` to `t_end`. Fails if `x` leaves the turning-point
/// interval of the initial energy by more than 10% of its width.
pub fn flow(v: &dyn JetFn, x0: f64, p0: f64, t_end: f64, dt: f64, opts: &FlowOptions) -> Result<PhaseTrajectory> {
    if !(dt > 0.0 && t_end >= 0.0) {
        return Err(Error::InvalidParams(alloc::format!("bad time step {dt} or span {t_end}")));
    }
    let energy = p0 * p0 + value(v, x0)?;
    let (a, b) = turning_points(v, energy, opts.bracket)?;
    let slack = 0.1 * (b - a);
    let (lo, hi) = (a - slack, b + slack);
    let steps = (t_end / dt).round() as usize;
    let every = opts.sample_every.max(1);

    let (mut x, mut p) = (x0, p0);
    let mut samples = Vec::with_capacity(steps / every + 2);
    samples.push((0.0, x, p));
    let mut max_drift = 0.0f64;
    let scale = energy.abs().max(f64::MIN_POSITIVE);
    for i in 1..=steps {
        step(v, opts.integrator, &mut x, &mut p, dt)?;
        if !(x >= lo && x <= hi) {
            return Err(Error::UnboundedMotion { x, lo, hi });
        }
        let h = p * p + value(v, x)?;
        max_drift = max_drift.max((h - energy).abs() / scale);
        if i % every == 0 || i == steps {
            samples.push((i as f64 * dt, x, p));
        }
    }
    Ok(PhaseTrajectory { samples, energy, max_drift, turning_points: (a, b) })
}

/// Starts at rest on the right turning point of energy `e`.
pub fn orbit_at_energy(v: &dyn JetFn, e: f64, t_end: f64, dt: f64, opts: &FlowOptions) -> Result<PhaseTrajectory> {
    let (_, right) = turning_points(v, e, opts.bracket)?;
    flow(v, right, 0.0, t_end, dt, opts)
}

pub const SCAN_POINTS: usize = 4096;

/// Roots of `V(x) = E` on either side of the deepest point of `V` in `bracket`.
pub fn turning_points(v: &dyn JetFn, e: f64, bracket: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = bracket;
    let h = (hi - lo) / SCAN_POINTS as f64;
    let xs: Vec<f64> = (0..=SCAN_POINTS).map(|i| lo + i as f64 * h).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| value(v, x)).collect::<Result<_>>()?;
    let (imin, vmin) = vs.iter().enumerate().fold((0, f64::INFINITY), |m, (i, &a)| if a < m.1 { (i, a) } else { m });
    if !(vmin < e) {
        return Err(Error::NoBoundedWell(e));
    }
    let left = (0..imin).rev().find(|&i| vs[i] >= e).ok_or(Error::NoBoundedWell(e))?;
    let right = (imin + 1..xs.len()).find(|&i| vs[i] >= e).ok_or(Error::NoBoundedWell(e))?;
    Ok((bisect(v, e, xs[left + 1], xs[left])?, bisect(v, e, xs[right - 1], xs[right])?))
}

/// Root of `V - E` between `inside` (below) and `outside` (at or above).
fn bisect(v: &dyn JetFn, e: f64, mut inside: f64, mut outside: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if value(v, mid)? < e {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

/// `V(x) = x²`, whose orbits are `x = A cos 2t`.
pub fn harmonic(x: f64, order: usize) -> Result<Jet> {
    let j = Jet::lift(x, order);
    Ok(&j * &j)
}
