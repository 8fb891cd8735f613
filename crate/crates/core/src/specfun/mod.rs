//! Special functions and quadrature used by the analytic layers.

mod bessel;
mod hyper;
mod marcum;
mod quad;

pub use bessel::{bessel_i0, bessel_i0_scaled};
pub use hyper::gauss_2f1_interference;
pub use marcum::{marcum_q1, rician_pdf};
pub use quad::{integrate, integrate_with_breaks, Domain, Estimate, GaussLegendre, QuadratureSpec, TruncationPolicy};

pub(crate) use hyper::interference_2f1_unchecked;
pub(crate) use marcum::{marcum_pair, rician_pdf_unchecked};
