//! Exact computations for quantized enveloping algebras, their coordinate
//! algebras and the holomorphic calculus on irreducible quantum flag
//! manifolds.

pub mod calculus;
pub mod cartan;
pub mod coordring;
pub mod error;
pub mod linalg;
pub mod par;
pub mod peterweyl;
pub mod repr;
pub mod rmatrix;
pub mod scalars;
pub mod verify;

pub use error::{Error, Result};
