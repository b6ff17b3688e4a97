//! Legendre-dual convex functions: thermodynamic functions on the vertex
//! space and dissipation functions on the edge space.

mod dissipation;
mod thermo;

pub use dissipation::{asinh_stable, log_mean, DissipationFunction, DissipationPair};
pub use thermo::ThermoFunction;

#[cfg(test)]
mod tests;
