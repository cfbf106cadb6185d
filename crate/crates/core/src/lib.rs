//! Ensemble-based a posteriori error estimation for steady two-dimensional
//! Euler flows with shock interactions.
//!
//! The pipeline builds exact piecewise-uniform references ([`analytic`]),
//! computes steady solutions with structurally different shock-capturing
//! schemes ([`solver`]), estimates their truncation errors with a sixth-order
//! postprocessor ([`truncation`]), measures distances and angles between error
//! vectors ([`geometry`]) and evaluates distance- and angle-based error-norm
//! estimators with their effectivity indices ([`estimators`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod concentration;
pub mod error;
pub mod estimators;
pub mod gas;
pub mod geometry;
pub mod grid;
pub mod harness;
pub mod io;
pub mod par;
mod roots;
pub mod solver;
pub mod truncation;

pub use error::{Error, Result};
