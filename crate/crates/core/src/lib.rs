//! Rosen-Morse quantum systems: closed-form eigenstates, SUSY hierarchies, type III
//! rational extensions, high-order ladder operators and coherent states.
//!
//! Differential operators are applied through truncated Taylor jets, so an operator
//! chain of order 31 costs no more code than one of order 1. Everything here is
//! `no_std` with `alloc`.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are there to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod classical;
pub mod coherent;
pub mod diagnostics;
pub mod error;
pub mod ladder;
pub mod numerics;
pub mod specfun;
pub mod suites;
pub mod susy;
pub mod systems;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::jet::Jet;
pub use numerics::quadrature::QuadratureGrid;
pub use systems::{SystemParams, Variant, WaveFunction};
