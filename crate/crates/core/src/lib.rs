//! Exact arithmetic for Lie tori graded by the root system `C_r`: graded
//! coordinate algebras, the `sp₂ᵣ(𝔞)` construction, axiom verification, and
//! recovery of coordinates from structure constants.

pub mod algebra;
pub mod config;
pub mod constructors;
pub mod error;
pub mod extract;
pub mod group;
pub mod jordan;
pub mod linalg;
pub mod pipeline;
pub mod report;
pub mod symplectic;
pub mod verify;
pub mod scalar;
pub mod sp;

pub use error::{Error, Result};
pub use scalar::Q;
