pub mod analytic;
pub mod bessel;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod shape;
pub mod solver;
pub mod thickness;

pub use error::{Error, Result};
