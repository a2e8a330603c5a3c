//! Exact computations with double Poisson brackets on free associative
//! algebras and the Poisson brackets they induce on (twisted) coordinate
//! rings of representation spaces.

pub mod centralizer;
pub mod double_bracket;
pub mod error;
pub mod families;
pub mod free_algebra;
pub mod job;
pub mod linalg;
pub mod lincomb;
pub mod matrix_involutions;
pub mod poly;
pub mod rep_poisson;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
