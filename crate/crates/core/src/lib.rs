//! Integral homology of dual de Rham complexes and related functor computations.

pub mod abelian;
pub mod cli;
pub mod comparison;
pub mod derham;
pub mod error;
pub mod koszul;
pub mod linear;
pub mod numtheory;
pub mod poly;

pub use error::{Error, Result};
