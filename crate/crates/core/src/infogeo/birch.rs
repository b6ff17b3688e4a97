use nalgebra::DVector;
use serde::Serialize;

use super::newton::{minimize, SolverOptions};
use crate::convexfun::ThermoFunction;
use crate::error::{check_len, check_positive, Error, Result};
use crate::linalg::ser_vec;
use crate::netcore::ReactionNetwork;

/// Equilibrium state of the stoichiometric class of x₀ relative to x̃.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirchPoint {
    #[serde(serialize_with = "ser_vec")]
    pub x_eq: DVector<f64>,
    /// Multipliers λ with ∂Φ(x_eq) = ∂Φ(x̃) + Uᵀλ.
    #[serde(serialize_with = "ser_vec")]
    pub lambda: DVector<f64>,
    /// ‖U x_eq − U x₀‖∞
    pub conservation_residual: f64,
    /// ‖𝕊ᵀ(∂Φ(x_eq) − ∂Φ(x̃))‖∞
    pub manifold_residual: f64,
    pub iterations: usize,
}

/// Minimizes D[x‖x̃] over {x : Ux = Ux₀} in the dual coordinates
/// y = ∂Φ(x̃) + Uᵀλ.
pub fn birch_point(
    net: &ReactionNetwork,
    thermo: &ThermoFunction,
    x0: &DVector<f64>,
    x_ref: &DVector<f64>,
    opts: &SolverOptions,
) -> Result<BirchPoint> {
    let n = net.n_species();
    check_len(n, x0.len(), "initial state")?;
    check_len(n, x_ref.len(), "reference state")?;
    check_len(n, thermo.dim(), "thermodynamic function")?;
    if matches!(thermo, ThermoFunction::KullbackLeibler { .. }) {
        check_positive(x0.as_slice())?;
        check_positive(x_ref.as_slice())?;
    }
    let u = net.cons_f64();
    let eta = u * x0;
    let y_ref = thermo.to_dual(x_ref)?;
    let tol = opts.tol * 1e-2 * (1.0 + eta.amax());
    let min = minimize(
        |lam| {
            let y = &y_ref + u.tr_mul(lam);
            let val = thermo.conjugate(&y).ok()? - lam.dot(&eta);
            let x = thermo.to_primal(&y).ok()?;
            let h = u * thermo.hessian_conjugate(&y).ok()? * u.transpose();
            val.is_finite().then(|| (val, u * x - &eta, h))
        },
        DVector::zeros(net.n_conserved()),
        tol,
        opts.max_iter,
        "Birch point",
    )?;
    let y = &y_ref + u.tr_mul(&min.x);
    let x_eq = if net.n_conserved() == 0 {
        x_ref.clone()
    } else {
        thermo.to_primal(&y)?
    };
    let manifold_residual = net.stoich_f64().tr_mul(&(thermo.to_dual(&x_eq)? - &y_ref)).amax();
    Ok(BirchPoint {
        conservation_residual: (u * &x_eq - &eta).amax(),
        manifold_residual,
        x_eq,
        lambda: min.x,
        iterations: min.iterations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PythagorasReport {
    /// D[x‖x_q]
    pub d_x_q: f64,
    /// D[x‖x†]
    pub d_x_dagger: f64,
    /// D[x†‖x_q]
    pub d_dagger_q: f64,
    pub gap: f64,
}

/// Generalized Pythagorean relation on the vertex space. `x` must share the
/// stoichiometric class of `x_dagger`, and `x_q` its equilibrium manifold.
pub fn pythagoras_vertex(
    net: &ReactionNetwork,
    thermo: &ThermoFunction,
    x: &DVector<f64>,
    x_dagger: &DVector<f64>,
    x_q: &DVector<f64>,
) -> Result<PythagorasReport> {
    let n = net.n_species();
    for v in [x, x_dagger, x_q] {
        check_len(n, v.len(), "Pythagoras input")?;
    }
    let u = net.cons_f64();
    let cons = (u * (x - x_dagger)).amax();
    let cons_scale = 1.0 + (u * x).amax();
    if cons > 1e-9 * cons_scale {
        return Err(Error::Domain(format!(
            "x and x† lie in different stoichiometric classes (residual {cons:e})"
        )));
    }
    let dy = thermo.to_dual(x_q)? - thermo.to_dual(x_dagger)?;
    let man = net.stoich_f64().tr_mul(&dy).amax();
    if man > 1e-9 * (1.0 + dy.amax()) {
        return Err(Error::Domain(format!(
            "x_q and x† lie on different equilibrium manifolds (residual {man:e})"
        )));
    }
    let d_x_q = thermo.bregman(x, x_q)?;
    let d_x_dagger = thermo.bregman(x, x_dagger)?;
    let d_dagger_q = thermo.bregman(x_dagger, x_q)?;
    Ok(PythagorasReport {
        gap: d_x_q - d_x_dagger - d_dagger_q,
        d_x_q,
        d_x_dagger,
        d_dagger_q,
    })
}
