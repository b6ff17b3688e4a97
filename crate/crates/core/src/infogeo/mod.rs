//! Equilibrium projections, flux/force decompositions and induced dual
//! structures built on the convex functions of [`crate::convexfun`].

mod birch;
mod effective;
mod hhk;
mod newton;
mod pseudo_hilbert;

pub use birch::{birch_point, pythagoras_vertex, BirchPoint, PythagorasReport};
pub use effective::{effective_keq, effective_kst, EffectiveSchedule, ScheduleEntry, ScheduleKind};
pub use hhk::{
    cycle_dual, hhk_decompose, hhk_f_st, hhk_j_eq, tangent_dual, CycleDual, FluxSplit, ForceSplit,
    HhkDecomposition, SubspaceCoords, TangentDual,
};
pub use newton::SolverOptions;
pub use pseudo_hilbert::{cb_orthogonality, pseudo_hilbert_decompose, CbOrthogonality, PseudoHilbert};
