//! Exact computation of the small-extensions closure of finitely presented
//! ordered abelian groups, and its use for depth-zero valuations on K[x].

pub mod complete;
pub mod error;
pub mod linalg;
pub mod ordgroup;
pub mod parse;
pub mod scalars;
pub mod sme;
pub mod valuation;

pub use error::{Error, Result};
