//! Finite pointed posets, embedding-projection and adjoint pairs, ω-chains
//! and their colimits, locally determined cocones, functor combinators and
//! enriched presheaves, plus a solver for domain equations `D = F(D)`.

pub mod chains;
pub mod config;
pub mod error;
pub mod finposet;
pub mod fixtures;
pub mod functors;
pub mod gen;
pub mod json;
pub mod opairs;
pub mod presheaf;
pub mod solver;
pub mod suite;

pub use config::Caps;
pub use error::{Error, Result};
