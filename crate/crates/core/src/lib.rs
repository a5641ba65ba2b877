//! Second-order finite-volume GRP solvers for compressible flow with a
//! one-sided generalized Riemann problem treatment of physical boundaries.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod burgers;
pub mod cases;
pub mod error;
pub mod exact;
pub mod fvm1d;
pub mod fvm2d;
pub mod gas;
pub mod geometry;
pub mod grp;
pub mod io;
pub mod riemann;
pub mod run;

pub use error::{Error, Result};
pub use gas::{Cons, Cons2, Eos, Prim, Prim2};
