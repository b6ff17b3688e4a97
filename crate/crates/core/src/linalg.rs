use nalgebra::{DMatrix, DVector};

/// Solves a symmetric positive definite system, falling back to LU when the
/// Cholesky factorization fails on a nearly singular matrix.
pub(crate) fn solve_spd(a: DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(chol) = a.clone().cholesky() {
        return Some(chol.solve(b));
    }
    a.lu().solve(b)
}


pub(crate) fn inf_norm(v: &DVector<f64>) -> f64 {
    v.amax()
}

/// Serializes a `DVector` as a flat JSON array.
pub(crate) fn ser_vec<S: serde::Serializer>(v: &DVector<f64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}
