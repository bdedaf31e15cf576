#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for the quasi-hyperbolic metric
//! `h_D(a, b) = inf over curves of int ||du|| / d_D(u)` of Euclidean domains.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod flatten;
pub mod geom;
pub mod metric;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
