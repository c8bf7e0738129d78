//! Exact computation of SO(3) Witten-Reshetikhin-Turaev invariants at odd
//! roots of unity, unified invariants of rational homology spheres, and the
//! q-series identities behind their integrality.

pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod jones;
pub mod laplace;
pub mod numtheory;
pub mod qring;
pub mod qseries;
pub mod unified;
pub mod wrt;

pub use error::{Error, Result};
