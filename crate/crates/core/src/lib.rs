//! Pseudo-spectral toolkit for the mixed fractional nonlinear Schrödinger
//! equation `i u_t = (D1^a1 + D2^a2) u + mu |u|^(p-1) u` on a periodic box.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod error;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod linear_flow;
pub mod multipliers;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{Field2D, Grid2D, Space};
pub use multipliers::{DispersionParams, ProjectionKind};
