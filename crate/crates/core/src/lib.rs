//! Flat data-parallel array combinators and four benchmark kernels written
//! against them: a direct N-body simulation, the NAS MG multigrid V-cycle,
//! a flattened Quickhull, and tiled self-attention.

pub mod attention;
pub mod bench;
pub mod error;
pub mod multigrid;
pub mod nbody;
pub mod par;
pub mod quickhull;

pub use error::{Error, Result};
