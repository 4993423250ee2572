//! Jet arithmetic and composite Gauss-Legendre quadrature.

pub mod jet;
pub mod quadrature;

pub use jet::Jet;
pub use quadrature::{pairwise_sum, QuadratureGrid};
