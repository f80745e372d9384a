//! Numerics for distance statistics of large random quadrangulations:
//! exact generating functions, the continuum scaling functions and the
//! profiles derived from them.

pub mod error;
pub mod series;

pub use error::{Error, Result};
pub mod dd;
pub mod diff;
pub mod laplace;
pub mod local;
pub mod profile;
pub mod quad;
pub mod special;
pub mod tables;
pub mod verify;
pub mod scalar;
pub mod scaling;
