//! Truncated Taylor expansions with complex coefficients.
//!
//! A [`Jet`] of order `K` stores `c_j = f^(j)(x0) / j!` for `j = 0..=K`. Binary
//! operations truncate to the smaller order; [`Jet::differentiate`] drops one order.
//! Elementary functions use the usual convolution recurrences, which are exact up to
//! rounding at every order.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    center: f64,
    coeffs: Vec<Complex64>,
}

impl Jet {
    /// The identity function `x ↦ x` expanded at `x`.
    pub fn lift(x: f64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::zero(); order + 1];
        coeffs[0] = Complex64::new(x, 0.0);
        if order >= 1 {
            coeffs[1] = Complex64::new(1.0, 0.0);
        }
        Self { center: x, coeffs }
    }

    pub fn constant(center: f64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::zero(); order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    pub fn zero(center: f64, order: usize) -> Self {
        Self::constant(center, Complex64::zero(), order)
    }

    /// Builds a jet from raw Taylor coefficients. Panics on an empty list.
    pub fn from_coeffs(center: f64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { center, coeffs }
    }

    /// Jet of a real function from its derivatives `f, f', f'', ...` at `center`.
    pub fn from_derivatives(center: f64, derivs: &[f64]) -> Self {
        let mut fact = 1.0;
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                if j > 0 {
                    fact *= j as f64;
                }
                Complex64::new(d / fact, 0.0)
            })
            .collect();
        Self::from_coeffs(center, coeffs)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `f^(k)(center)`, zero above the stored order.
    pub fn derivative(&self, k: usize) -> Complex64 {
        if k > self.order() {
            return Complex64::zero();
        }
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.coeffs[k] * fact
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        Self { center: self.center, coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn map_coeffs(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { center: self.center, coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    pub fn re(&self) -> Self {
        self.map_coeffs(|c| Complex64::new(c.re, 0.0))
    }

    /// `c'_j = (j+1) c_{j+1}`; order drops by one. A zero-order jet differentiates
    /// to the zero jet of order zero.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.center, 0);
        }
        let coeffs = (0..self.order()).map(|j| self.coeffs[j + 1] * (j + 1) as f64).collect();
        Self { center: self.center, coeffs }
    }

    /// Antiderivative with the given value at the center; order grows by one.
    pub fn integrate(&self, value: Complex64) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(value);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(j, &c)| c / (j + 1) as f64));
        Self { center: self.center, coeffs }
    }

    fn same_shape(&self, other: &Self) -> usize {
        debug_assert!(
            self.center == other.center,
            "jets expanded at different points: {} vs {}",
            self.center,
            other.center
        );
        self.order().min(other.order())
    }

    pub fn mul_jet(&self, other: &Self) -> Self {
        let k = self.same_shape(other);
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = (0..=k).map(|n| (0..=n).map(|j| a[j] * b[n - j]).sum()).collect();
        Self { center: self.center, coeffs }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let k = self.same_shape(other);
        let b = &other.coeffs;
        if b[0].norm() == 0.0 || !b[0].is_finite() {
            return Err(Error::DivisionByZero);
        }
        let mut q: Vec<Complex64> = Vec::with_capacity(k + 1);
        for n in 0..=k {
            let mut acc = self.coeffs[n];
            for j in 1..=n {
                acc -= b[j] * q[n - j];
            }
            q.push(acc / b[0]);
        }
        Ok(Self { center: self.center, coeffs: q })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(self.center, Complex64::new(1.0, 0.0), self.order()).div(self)
    }

    /// Generic first-order recurrence `h' = g · f'` where `g` is produced from the
    /// already known coefficients of `h`.
    fn chain(&self, h0: Complex64, g_coeff: impl Fn(&[Complex64], usize) -> Complex64) -> Self {
        let k = self.order();
        let f = &self.coeffs;
        let mut h = Vec::with_capacity(k + 1);
        h.push(h0);
        for n in 1..=k {
            let mut acc = Complex64::zero();
            for (j, fj) in f.iter().enumerate().take(n + 1).skip(1) {
                acc += fj * g_coeff(&h, n - j) * j as f64;
            }
            h.push(acc / n as f64);
        }
        Self { center: self.center, coeffs: h }
    }

    pub fn exp(&self) -> Self {
        self.chain(self.coeffs[0].exp(), |h, m| h[m])
    }

    /// Natural logarithm; errors when the constant term is zero.
    pub fn ln(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0.norm() == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let dl = self.differentiate().div(&self.truncate(self.order().saturating_sub(1)))?;
        Ok(if self.order() == 0 { Self::constant(self.center, f0.ln(), 0) } else { dl.integrate(f0.ln()) })
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let k = self.order();
        let f = &self.coeffs;
        let mut s = Vec::with_capacity(k + 1);
        let mut c = Vec::with_capacity(k + 1);
        s.push(f[0].sin());
        c.push(f[0].cos());
        for n in 1..=k {
            let (mut as_, mut ac) = (Complex64::zero(), Complex64::zero());
            for j in 1..=n {
                as_ += f[j] * c[n - j] * j as f64;
                ac -= f[j] * s[n - j] * j as f64;
            }
            s.push(as_ / n as f64);
            c.push(ac / n as f64);
        }
        (Self { center: self.center, coeffs: s }, Self { center: self.center, coeffs: c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        let k = self.order();
        let f = &self.coeffs;
        let mut s = Vec::with_capacity(k + 1);
        let mut c = Vec::with_capacity(k + 1);
        s.push(f[0].sinh());
        c.push(f[0].cosh());
        for n in 1..=k {
            let (mut as_, mut ac) = (Complex64::zero(), Complex64::zero());
            for j in 1..=n {
                as_ += f[j] * c[n - j] * j as f64;
                ac += f[j] * s[n - j] * j as f64;
            }
            s.push(as_ / n as f64);
            c.push(ac / n as f64);
        }
        (Self { center: self.center, coeffs: s }, Self { center: self.center, coeffs: c })
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    /// `t' = (1 - t²) f'`, which stays bounded for large arguments.
    pub fn tanh(&self) -> Self {
        let t0 = stable_tanh(self.coeffs[0]);
        self.chain(t0, |t, m| {
            let sq: Complex64 = (0..=m).map(|i| t[i] * t[m - i]).sum();
            if m == 0 {
                Complex64::new(1.0, 0.0) - sq
            } else {
                -sq
            }
        })
    }

    pub fn sech(&self) -> Self {
        let t = self.tanh();
        // sech' = -tanh · sech · f'
        let s0 = stable_sech(self.coeffs[0]);
        let tc = t.coeffs;
        let k = self.order();
        let f = &self.coeffs;
        let mut s: Vec<Complex64> = Vec::with_capacity(k + 1);
        s.push(s0);
        for n in 1..=k {
            let mut acc = Complex64::zero();
            for j in 1..=n {
                let ts: Complex64 = (0..=(n - j)).map(|i| tc[i] * s[n - j - i]).sum();
                acc -= f[j] * ts * j as f64;
            }
            s.push(acc / n as f64);
        }
        Self { center: self.center, coeffs: s }
    }

    /// Cotangent; errors where `sin f0` vanishes.
    pub fn cot(&self) -> Result<Self> {
        let s0 = self.coeffs[0].sin();
        if s0.norm() == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let c0 = self.coeffs[0].cos() / s0;
        Ok(self.chain(c0, |c, m| {
            let sq: Complex64 = (0..=m).map(|i| c[i] * c[m - i]).sum();
            if m == 0 {
                -(Complex64::new(1.0, 0.0) + sq)
            } else {
                -sq
            }
        }))
    }

    /// `f^r` for real `r`; the base must have a positive real constant term.
    pub fn powr(&self, r: f64) -> Result<Self> {
        let f = &self.coeffs;
        if !(f[0].re > 0.0 && f[0].im == 0.0) {
            return Err(Error::NonPositiveBase);
        }
        let k = self.order();
        let mut h = Vec::with_capacity(k + 1);
        h.push(Complex64::new(f[0].re.powf(r), 0.0));
        for n in 1..=k {
            let mut acc = Complex64::zero();
            for j in 1..=n {
                acc += f[j] * h[n - j] * ((r + 1.0) * j as f64 - n as f64);
            }
            h.push(acc / (f[0] * n as f64));
        }
        Ok(Self { center: self.center, coeffs: h })
    }

    /// `ln cosh f`, accurate for large real arguments where `cosh` overflows.
    pub fn ln_cosh(&self) -> Self {
        let f0 = self.coeffs[0];
        let l0 = if f0.im == 0.0 {
            let a = f0.re.abs();
            Complex64::new(a + (-2.0 * a).exp().ln_1p() - core::f64::consts::LN_2, 0.0)
        } else {
            f0.cosh().ln()
        };
        let t = self.tanh();
        self.chain(l0, move |_, m| t.coeffs[m])
    }

    /// `ln sin f`; errors where `sin f0` vanishes.
    pub fn ln_sin(&self) -> Result<Self> {
        let c = self.cot()?;
        let l0 = self.coeffs[0].sin().ln();
        Ok(self.chain(l0, move |_, m| c.coeffs[m]))
    }

    /// `Σ_j a_j (f - f0)^j` by Horner's rule, for an outer function with Taylor
    /// coefficients `a_j` at `f0`.
    pub fn compose(&self, outer: &[Complex64]) -> Self {
        let mut d = self.clone();
        d.coeffs[0] = Complex64::zero();
        let mut acc = Self::constant(self.center, *outer.last().unwrap_or(&Complex64::zero()), self.order());
        for &a in outer.iter().rev().skip(1) {
            acc = acc.mul_jet(&d);
            acc.coeffs[0] += a;
        }
        acc
    }

    pub fn scale(&self, k: Complex64) -> Self {
        self.map_coeffs(|c| c * k)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

// The library forms go through sinh/cosh and turn into inf/inf for large real parts.
fn stable_tanh(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(z.re.tanh(), 0.0);
    }
    if z.re.abs() > 20.0 {
        let sg = z.re.signum();
        let e = (-2.0 * z * sg).exp();
        return (Complex64::new(1.0, 0.0) - e) / (Complex64::new(1.0, 0.0) + e) * sg;
    }
    z.tanh()
}

fn stable_sech(z: Complex64) -> Complex64 {
    if z.re.abs() > 20.0 {
        let sg = z.re.signum();
        let e = (-z * sg).exp();
        return 2.0 * e / (Complex64::new(1.0, 0.0) + e * e);
    }
    Complex64::new(1.0, 0.0) / z.cosh()
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let k = self.same_shape(rhs);
        let coeffs = (0..=k).map(|j| self.coeffs[j] + rhs.coeffs[j]).collect();
        Jet { center: self.center, coeffs }
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let k = self.same_shape(rhs);
        let coeffs = (0..=k).map(|j| self.coeffs[j] - rhs.coeffs[j]).collect();
        Jet { center: self.center, coeffs }
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.map_coeffs(|c| c * k)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, k: f64) -> Jet {
        self.coeffs.iter_mut().for_each(|c| *c *= k);
        self
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(mut self, k: Complex64) -> Jet {
        self.coeffs.iter_mut().for_each(|c| *c *= k);
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, k: f64) -> Jet {
        self.coeffs[0] += k;
        self
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        let k = self.same_shape(rhs);
        self.coeffs.truncate(k + 1);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}
