//! Frobenius-lift Chern connections on `GL_n` and their curvatures, computed
//! with exact arithmetic on truncated power series.

mod error;

pub mod chern;
pub mod cli;
pub mod curvature;
pub mod matseries;
pub mod oneprime;
pub mod padics;
pub mod reduced;
pub mod ring;
pub mod scalars;
pub mod series;
pub mod unitary;

pub use error::{Error, Result};
