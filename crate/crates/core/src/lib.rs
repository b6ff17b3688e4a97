//! Doubly dual-flat information geometry for reversible dynamics on graphs
//! and chemical-reaction-network hypergraphs.
//!
//! The crate builds CRN hypergraphs (from code or from a small text format),
//! integrates reversible mass-action kinetics, and evaluates the Legendre and
//! Bregman structures on vertex and edge spaces: Birch-point projections, the
//! Helmholtz-Hodge-Kodaira flux/force decomposition, induced tangent and cycle
//! dualities, effective equilibrium and cycle kinetics, and entropy-production
//! ledgers.

pub mod cli;
pub mod convexfun;
pub mod dynamics;
pub mod error;
pub mod infogeo;
pub mod kinetics;
mod linalg;
pub mod netcore;
pub mod netio;

pub use error::{Error, Result};
