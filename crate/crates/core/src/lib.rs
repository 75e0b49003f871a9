//! Exact computations for relative BGG complexes on type A parabolic pairs.

pub mod acceptance;
pub mod bgg;
pub mod error;
pub mod homology;
pub mod matrix;
pub mod parabolic;
pub mod pathgeom;
pub mod rational;
pub mod repn;
pub mod rootdata;

pub use error::{BggError, Result};
pub use rational::Q;
