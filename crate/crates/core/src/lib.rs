#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod io;
pub mod oracles;
pub mod quadrature;
pub mod transforms;

pub use error::{Error, Result};
