//! Analytics for a three-tier cache-enabled heterogeneous network: D2D
//! transmitters, clustered small cells and macro cells.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod association;
pub mod content;
pub mod dpsq;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod rates;
pub mod specfun;
pub mod traffic;

pub use error::{Error, Result};
