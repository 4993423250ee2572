//! The hyperbolic (RMII) and trigonometric (RMI) Rosen-Morse systems.
//!
//! Units are `ħ = 2m = 1`, so `H = -d²/dx² + V`.
//!
//! RMII: `V = 2λ tanh x - s(s+1) sech²x` on the real line, finitely many bound states
//! `E(n) = -(s-n)² - λ²/(s-n)²` for `n < s - √λ`.
//!
//! RMI: `V = -2λ cot x + s(s-1) csc²x` on `(0, π)`, infinitely many levels
//! `E(n) = (s+n)² - λ²/(s+n)²`.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::jet::Jet;
use crate::numerics::quadrature::QuadratureGrid;
use crate::specfun::{jacobi_robust, ln_gamma_real, log_gamma, NEAR_POLE};

/// Half-width of the truncated RMII domain.
pub const DEFAULT_CUTOFF: f64 = 25.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Rmii,
    Rmi,
}

impl Variant {
    /// Direction of the SUSY hierarchy in `s`: RMII steps down, RMI steps up.
    pub fn delta(self) -> f64 {
        match self {
            Variant::Rmii => -1.0,
            Variant::Rmi => 1.0,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Rmii => "rmii",
            Variant::Rmi => "rmi",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    lambda: f64,
    s: f64,
    variant: Variant,
}

impl SystemParams {
    pub fn new(variant: Variant, lambda: f64, s: f64) -> Result<Self> {
        match variant {
            Variant::Rmii => Self::rmii(lambda, s),
            Variant::Rmi => Self::rmi(lambda, s),
        }
    }

    /// Needs `s > 0` and `0 ≤ λ < s²`.
    pub fn rmii(lambda: f64, s: f64) -> Result<Self> {
        if !(lambda.is_finite() && s.is_finite() && s > 0.0 && lambda >= 0.0 && lambda < s * s) {
            return Err(Error::InvalidParams(alloc::format!(
                "rmii needs s > 0 and 0 <= lambda < s^2, got s = {s}, lambda = {lambda}"
            )));
        }
        Ok(Self { lambda, s, variant: Variant::Rmii })
    }

    /// Needs `s > 1` and `λ ≥ 0`.
    pub fn rmi(lambda: f64, s: f64) -> Result<Self> {
        if !(lambda.is_finite() && s.is_finite() && s > 1.0 && lambda >= 0.0) {
            return Err(Error::InvalidParams(alloc::format!(
                "rmi needs s > 1 and lambda >= 0, got s = {s}, lambda = {lambda}"
            )));
        }
        Ok(Self { lambda, s, variant: Variant::Rmi })
    }

    /// A hierarchy member without validation; used where an intermediate level may
    /// sit outside the bound-state window.
    pub(crate) fn unchecked(variant: Variant, lambda: f64, s: f64) -> Self {
        Self { lambda, s, variant }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The member `j` steps along the hierarchy: `s - j` for RMII, `s + j` for RMI.
    pub fn level(&self, j: usize) -> Self {
        Self::unchecked(self.variant, self.lambda, self.s + self.variant.delta() * j as f64)
    }

    /// Level energy formula, evaluated for any `n`.
    pub fn energy(&self, n: usize) -> f64 {
        let l = self.lambda;
        match self.variant {
            Variant::Rmii => {
                let sig = self.s - n as f64;
                -sig * sig - l * l / (sig * sig)
            }
            Variant::Rmi => {
                let sig = self.s + n as f64;
                sig * sig - l * l / (sig * sig)
            }
        }
    }

    /// Highest bound excitation for RMII: largest integer strictly below `s - √λ`.
    pub fn n_max(&self) -> Option<usize> {
        match self.variant {
            Variant::Rmii => {
                let top = self.s - self.lambda.sqrt();
                if top <= 0.0 {
                    return None;
                }
                Some((top.ceil() - 1.0).max(0.0) as usize)
            }
            Variant::Rmi => None,
        }
    }

    /// Shifted energy `k(n) = E(n) - E(0)`.
    pub fn k(&self, n: usize) -> f64 {
        self.energy(n) - self.energy(0)
    }

    pub fn check_excitation(&self, n: usize) -> Result<()> {
        match self.n_max() {
            Some(max) if n > max => Err(Error::ExcitationOutOfRange { n, max }),
            None if self.variant == Variant::Rmii => Err(Error::ExcitationOutOfRange { n, max: 0 }),
            _ => Ok(()),
        }
    }

    /// Default working domain: `[-L, L]` for RMII, `[0, π]` for RMI.
    pub fn domain(&self) -> (f64, f64) {
        match self.variant {
            Variant::Rmii => (-DEFAULT_CUTOFF, DEFAULT_CUTOFF),
            Variant::Rmi => (0.0, PI),
        }
    }

    pub fn default_grid(&self) -> QuadratureGrid {
        let (lo, hi) = self.domain();
        QuadratureGrid::with_default_panels(lo, hi)
    }

    /// `ln` of the ground-state profile without normalization, as a jet in `x`:
    /// `-s ln cosh x - λx/s` (RMII) or `s ln sin x - λx/s` (RMI).
    pub fn ln_ground_profile(&self, x: &Jet) -> Result<Jet> {
        let (s, l) = (self.s, self.lambda);
        match self.variant {
            Variant::Rmii => Ok(x.ln_cosh() * -s + x * (-l / s)),
            Variant::Rmi => {
                check_rmi_point(x.center())?;
                Ok(x.ln_sin()? * s + x * (-l / s))
            }
        }
    }

    /// Logarithm of the normalization constant of level `n`, with its sign absorbed
    /// elsewhere. `None` when the level is not square integrable.
    pub fn ln_norm(&self, n: usize) -> Option<f64> {
        let (s, l) = (self.s, self.lambda);
        let nf = n as f64;
        let lnfact = ln_gamma_real(nf + 1.0).ok()?;
        match self.variant {
            Variant::Rmii => {
                let sig = s - nf;
                let q = sig * sig - l * l / (sig * sig);
                if !(sig > 0.0 && q > 0.0) {
                    return None;
                }
                let body = lnfact + q.ln() + ln_gamma_real(2.0 * s - nf + 1.0).ok()?
                    - sig.ln()
                    - ln_gamma_real(s + 1.0 + l / sig).ok()?
                    - ln_gamma_real(s + 1.0 - l / sig).ok()?;
                Some((nf - s) * core::f64::consts::LN_2 + 0.5 * body)
            }
            Variant::Rmi => {
                let sig = s + nf;
                let lg = log_gamma(Complex64::new(s, l / sig)).ok()?.re;
                let body = lnfact + (sig * sig + l * l / (sig * sig)).ln() + 2.0 * lg
                    - PI.ln()
                    - (2.0 * sig).ln()
                    - ln_gamma_real(2.0 * s + nf).ok()?;
                Some(l * PI / (2.0 * sig) + sig * core::f64::consts::LN_2 + 0.5 * body)
            }
        }
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(s = {}, lambda = {})", self.variant, self.s, self.lambda)
    }
}

fn check_rmi_point(x: f64) -> Result<()> {
    if x > 0.0 && x < PI {
        Ok(())
    } else {
        Err(Error::EndpointEvaluation(x))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Spectrum {
    pub params: SystemParams,
    pub n_max: Option<usize>,
    pub ground_energy: f64,
}

impl Spectrum {
    pub fn energy(&self, n: usize) -> f64 {
        self.params.energy(n)
    }

    /// Energies `E(0..=n_max)`, or the first `count` levels of an unbounded spectrum.
    pub fn levels(&self, count: usize) -> Vec<f64> {
        let top = self.n_max.map_or(count, |m| m + 1);
        (0..top).map(|n| self.energy(n)).collect()
    }
}

pub fn spectrum(p: &SystemParams) -> Spectrum {
    Spectrum { params: *p, n_max: p.n_max(), ground_energy: p.energy(0) }
}

/// `V(x)` as a jet.
pub fn potential(p: &SystemParams, x: &Jet) -> Result<Jet> {
    let (s, l) = (p.s(), p.lambda());
    match p.variant() {
        Variant::Rmii => {
            let sech = x.sech();
            Ok(x.tanh() * (2.0 * l) - (&sech * &sech) * (s * (s + 1.0)))
        }
        Variant::Rmi => {
            check_rmi_point(x.center())?;
            let cot = x.cot()?;
            let csc2 = (&cot * &cot) + 1.0;
            Ok(cot * (-2.0 * l) + csc2 * (s * (s - 1.0)))
        }
    }
}

/// `V` of `p` as a shareable jet evaluator.
pub fn potential_fn(p: &SystemParams) -> Arc<dyn JetFn> {
    let p = *p;
    Arc::new(move |x: f64, order: usize| potential(&p, &Jet::lift(x, order)))
}

/// Scalar potential value.
pub fn potential_value(p: &SystemParams, x: f64) -> Result<f64> {
    Ok(potential(p, &Jet::lift(x, 0))?.value().re)
}

/// Anything that yields jets of a function of `x`.
pub trait JetFn: Send + Sync {
    fn eval(&self, x: f64, order: usize) -> Result<Jet>;
}

impl<F> JetFn for F
where
    F: Fn(f64, usize) -> Result<Jet> + Send + Sync,
{
    fn eval(&self, x: f64, order: usize) -> Result<Jet> {
        self(x, order)
    }
}

/// Which Hamiltonian a wave function belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SystemTag {
    Base(SystemParams),
    TypeIII { base: SystemParams, k: usize },
}

#[derive(Clone)]
pub struct WaveFunction {
    eval: Arc<dyn JetFn>,
    pub n: usize,
    pub energy: f64,
    pub system: SystemTag,
    pub normalizable: bool,
}

impl fmt::Debug for WaveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveFunction")
            .field("n", &self.n)
            .field("energy", &self.energy)
            .field("system", &self.system)
            .field("normalizable", &self.normalizable)
            .finish()
    }
}

impl WaveFunction {
    pub fn new(eval: impl JetFn + 'static, n: usize, energy: f64, system: SystemTag, normalizable: bool) -> Self {
        Self { eval: Arc::new(eval), n, energy, system, normalizable }
    }

    pub fn eval(&self, x: f64, order: usize) -> Result<Jet> {
        self.eval.eval(x, order)
    }

    pub fn value(&self, x: f64) -> Result<Complex64> {
        Ok(self.eval(x, 0)?.value())
    }

    pub fn evaluator(&self) -> Arc<dyn JetFn> {
        self.eval.clone()
    }

    /// Values at each point.
    pub fn sample(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        xs.iter().map(|&x| self.value(x)).collect()
    }

    /// A copy whose evaluator is multiplied by `k`.
    pub fn scaled(&self, k: Complex64) -> Self {
        let inner = self.eval.clone();
        Self { eval: Arc::new(move |x: f64, order: usize| Ok(inner.eval(x, order)?.scale(k))), ..self.clone() }
    }

    /// A copy keeping only the real part.
    pub fn real_part(&self) -> Self {
        let inner = self.eval.clone();
        Self { eval: Arc::new(move |x: f64, order: usize| Ok(inner.eval(x, order)?.re())), ..self.clone() }
    }
}

/// Normalized closed-form eigenstate `ψ(n)`. RMI states are evaluated in complex
/// arithmetic and the real part returned; see [`rmi_complex_state`].
pub fn eigenstate(p: &SystemParams, n: usize) -> Result<WaveFunction> {
    match p.variant() {
        Variant::Rmii => {
            p.check_excitation(n)?;
            rmii_state(p, n)
        }
        Variant::Rmi => Ok(rmi_complex_state(p, n)?.real_part()),
    }
}

fn rmii_state(p: &SystemParams, n: usize) -> Result<WaveFunction> {
    let (s, l) = (p.s(), p.lambda());
    let sig = s - n as f64;
    let a = Complex64::new(sig + l / sig, 0.0);
    let b = Complex64::new(sig - l / sig, 0.0);
    let ln_m = p.ln_norm(n).ok_or_else(|| Error::InvalidParams(p.to_string()))?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let eval = move |x: f64, order: usize| -> Result<Jet> {
        let xj = Jet::lift(x, order);
        let envelope = (xj.ln_cosh() * -sig + &xj * (-l / sig) + ln_m).exp();
        let t = xj.tanh();
        let poly = t.compose(&taylor_from_derivs(jacobi_robust(n, a, b, t.value(), order)));
        Ok(envelope * poly * sign)
    };
    Ok(WaveFunction::new(eval, n, p.energy(n), SystemTag::Base(*p), true))
}

/// Taylor coefficients `d_j / j!` from derivatives `d_j`.
pub(crate) fn taylor_from_derivs(mut d: Vec<Complex64>) -> Vec<Complex64> {
    let mut fact = 1.0;
    for (j, c) in d.iter_mut().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        *c /= fact;
    }
    d
}

/// RMI eigenstate before discarding the imaginary part. Mathematically real; the
/// imaginary residue measures rounding in the complex Jacobi evaluation.
///
/// `P_n^{(c,d)}(i cot x)` is carried as `sin^n x · P_n`, a polynomial in `sin` and
/// `i cos`, so the endpoint poles of `cot` never enter.
pub fn rmi_complex_state(p: &SystemParams, n: usize) -> Result<WaveFunction> {
    let (s, l) = (p.s(), p.lambda());
    let sig = s + n as f64;
    let c = Complex64::new(-sig, l / sig);
    let d = c.conj();
    let ln_k = p.ln_norm(n).ok_or_else(|| Error::InvalidParams(p.to_string()))?;
    let phase = Complex64::i().powu(n as u32);
    let eval = move |x: f64, order: usize| -> Result<Jet> {
        check_rmi_point(x)?;
        let xj = Jet::lift(x, order);
        let envelope = (xj.ln_sin()? * s + &xj * (-l / sig) + ln_k).exp();
        let (sn, cs) = xj.sin_cos();
        let q = homogeneous_jacobi(n, c, d, &sn, &(cs * Complex64::i()));
        Ok(envelope * q * phase)
    };
    Ok(WaveFunction::new(eval, n, p.energy(n), SystemTag::Base(*p), true))
}

/// `S^n · P_n^{(a,b)}(C/S)` for jets `S`, `C`, by the degree recurrence multiplied
/// through by powers of `S`. Falls back to the homogenized explicit sum when a
/// recurrence divisor is near zero.
pub(crate) fn homogeneous_jacobi(n: usize, a: Complex64, b: Complex64, sj: &Jet, cj: &Jet) -> Jet {
    let order = sj.order().min(cj.order());
    let center = sj.center();
    let one = Jet::constant(center, Complex64::new(1.0, 0.0), order);
    if n == 0 {
        return one;
    }
    // (z - 1)/2 and (z + 1)/2, homogenized
    let zm = (cj - sj) * 0.5;
    let zp = (cj + sj) * 0.5;
    let q1 = sj.scale(a + 1.0) + zm.scale(a + b + 2.0);
    if n == 1 {
        return q1;
    }
    let s2 = sj * sj;
    let ab2 = a * a - b * b;
    let (mut prev, mut cur) = (one, q1);
    for m in 2..=n {
        let mf = m as f64;
        let cc = a + b + 2.0 * mf;
        let denom = 2.0 * mf * (a + b + mf) * (cc - 2.0);
        if denom.norm() < NEAR_POLE {
            return homogeneous_explicit(n, a, b, &zm, &zp);
        }
        let lin = cj.scale((cc - 1.0) * cc * (cc - 2.0)) + sj.scale((cc - 1.0) * ab2);
        let next = (lin * &cur - (&s2 * &prev).scale(2.0 * (a + mf - 1.0) * (b + mf - 1.0) * cc))
            .scale(Complex64::new(1.0, 0.0) / denom);
        prev = cur;
        cur = next;
    }
    cur
}

fn homogeneous_explicit(n: usize, a: Complex64, b: Complex64, zm: &Jet, zp: &Jet) -> Jet {
    let order = zm.order();
    let mut total = Jet::zero(zm.center(), order);
    for j in 0..=n {
        let mut ca = Complex64::new(1.0, 0.0);
        for i in 1..=(n - j) {
            ca *= (a + (j + i) as f64) / i as f64;
        }
        let mut cb = Complex64::new(1.0, 0.0);
        for i in 1..=j {
            cb *= (b + (n - j + i) as f64) / i as f64;
        }
        let mut term = Jet::constant(zm.center(), ca * cb, order);
        for _ in 0..j {
            term = term * zm;
        }
        for _ in 0..(n - j) {
            term = term * zp;
        }
        total += &term;
    }
    total
}

/// Evenly spaced interior points `lo + (i + 1/2) h`, never touching the endpoints.
pub fn interior_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let h = (hi - lo) / count as f64;
    (0..count).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

/// Smallest exponential decay rate among RMII levels `0..=n`; the truncated domain
/// is adequate when `e^{-rate·L}` is negligible.
pub fn slowest_decay(p: &SystemParams, n: usize) -> f64 {
    (0..=n)
        .map(|m| {
            let sig = p.s() - m as f64;
            (sig - p.lambda() / sig).abs().min(sig + p.lambda() / sig)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn potential_examples() {
        let p = SystemParams::rmii(1.0, 2.0).unwrap();
        assert_relative_eq!(potential_value(&p, 0.0).unwrap(), -6.0, epsilon = 1e-15);
        let q = SystemParams::rmii(16.0, 20.0).unwrap();
        assert_relative_eq!(potential_value(&q, 40.0).unwrap(), 32.0, max_relative = 1e-12);
        assert_relative_eq!(potential_value(&q, -40.0).unwrap(), -32.0, max_relative = 1e-12);
        let r = SystemParams::rmi(20.0, 2.0).unwrap();
        assert_relative_eq!(potential_value(&r, PI / 2.0).unwrap(), 2.0, epsilon = 1e-13);
        assert!(matches!(potential_value(&r, 0.0), Err(Error::EndpointEvaluation(_))));
    }

    #[test]
    fn parameter_windows() {
        assert!(SystemParams::rmii(4.0, 2.0).is_err());
        assert!(SystemParams::rmii(-0.1, 2.0).is_err());
        assert!(SystemParams::rmi(1.0, 1.0).is_err());
        assert!(SystemParams::rmi(0.0, 1.5).is_ok());
    }

    #[test]
    fn spectrum_examples() {
        let p = SystemParams::rmii(16.0, 20.0).unwrap();
        let sp = spectrum(&p);
        assert_eq!(sp.n_max, Some(15));
        assert!((sp.ground_energy + 400.64).abs() < 1e-10);
        let r = SystemParams::rmi(20.0, 2.0).unwrap();
        assert!((spectrum(&r).ground_energy + 96.0).abs() < 1e-10);
        assert_eq!(spectrum(&r).n_max, None);
        // E(n_max) stays below the lower asymptote -2λ
        assert!(p.energy(15) < -32.0);
        assert!(p.energy(16) >= -32.0);
    }

    #[test]
    fn out_of_range_excitation() {
        let p = SystemParams::rmii(1.0, 2.0).unwrap();
        assert_eq!(p.n_max(), Some(0));
        assert!(matches!(eigenstate(&p, 1), Err(Error::ExcitationOutOfRange { n: 1, max: 0 })));
    }

    #[test]
    fn rmii_ground_state_closed_form() {
        // ψ(0) ∝ cosh^{-2} e^{-x/2}; check the shape ratio and normalization
        let p = SystemParams::rmii(1.0, 2.0).unwrap();
        let psi = eigenstate(&p, 0).unwrap();
        let r0 = psi.value(0.0).unwrap().re;
        for x in [-3.0f64, -0.5, 1.0, 4.0] {
            let expected = r0 * x.cosh().powi(-2) * (-x / 2.0).exp();
            assert_relative_eq!(psi.value(x).unwrap().re, expected, max_relative = 1e-13);
        }
        let g = p.default_grid();
        let dens: Vec<f64> = g.nodes().iter().map(|&x| psi.value(x).unwrap().norm_sqr()).collect();
        assert_relative_eq!(g.integrate_real(&dens), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn rmi_homogenized_matches_direct_jacobi() {
        for n in [1usize, 4, 7] {
            let sig = 2.0 + n as f64;
            let c = Complex64::new(-sig, 20.0 / sig);
            let x: f64 = 1.1;
            let xj = Jet::lift(x, 0);
            let (sn, cs) = xj.sin_cos();
            let q = homogeneous_jacobi(n, c, c.conj(), &sn, &(cs * Complex64::i())).value();
            let direct = crate::specfun::jacobi_value(n, c, c.conj(), Complex64::new(0.0, 1.0 / x.tan()))
                * x.sin().powi(n as i32);
            assert!((q - direct).norm() < 1e-12 * direct.norm(), "n = {n}");
        }
    }
}
