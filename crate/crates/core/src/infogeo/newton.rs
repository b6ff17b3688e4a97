use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::solve_spd;

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Stationarity tolerance, scaled by the caller's problem magnitude.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100,
        }
    }
}

pub(crate) struct Minimum {
    pub x: DVector<f64>,
    pub iterations: usize,

}

/// Objective value, gradient and Hessian; `None` outside the domain or on
/// overflow.
pub(crate) type Eval = Option<(f64, DVector<f64>, DMatrix<f64>)>;

const ARMIJO_C: f64 = 1e-4;

/// Damped Newton for a smooth strictly convex objective.
pub(crate) fn minimize<F>(
    mut obj: F,
    x0: DVector<f64>,
    tol: f64,
    max_iter: usize,
    solver: &'static str,
) -> Result<Minimum>
where
    F: FnMut(&DVector<f64>) -> Eval,
{
    let stalled = |iterations: usize, residual: f64| Error::NoConvergence {
        solver,
        iterations,
        residual,
    };
    let mut x = x0;
    let (mut fx, mut g, mut hess) = obj(&x).ok_or_else(|| stalled(0, f64::INFINITY))?;
    for it in 0..=max_iter {
        let gn = g.amax();
        if gn <= tol || x.is_empty() {
            return Ok(Minimum {
                x,
                iterations: it,

            });
        }
        if it == max_iter {
            return Err(stalled(it, gn));
        }
        let d = solve_spd(hess.clone(), &(-&g)).ok_or_else(|| stalled(it, gn))?;
        let slope = g.dot(&d);
        let mut alpha = 1.0;
        loop {
            let trial = &x + alpha * &d;
            if let Some((ft, gt, ht)) = obj(&trial) {
                let armijo = ft <= fx + ARMIJO_C * alpha * slope;
                // below rounding the objective is flat; trust the gradient
                let flat = (ft - fx).abs() <= 1e-13 * (1.0 + fx.abs()) && gt.amax() < gn;
                if ft.is_finite() && (armijo || flat) {
                    x = trial;
                    fx = ft;
                    g = gt;
                    hess = ht;
                    break;
                }
            }
            alpha *= 0.5;
            if alpha < 1e-14 {
                return Err(stalled(it, gn));
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_log_sum_exp_plus_linear() {
        // f(x) = Σ e^{x_i} − Σ b_i x_i, minimum at ln b
        let b = DVector::from_vec(vec![0.5, 3.0, 40.0]);
        let m = minimize(
            |x| {
                let e = x.map(f64::exp);
                Some((e.sum() - b.dot(x), &e - &b, DMatrix::from_diagonal(&e)))
            },
            DVector::zeros(3),
            1e-12,
            100,
            "test",
        )
        .unwrap();
        for i in 0..3 {
            assert!((m.x[i] - b[i].ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn reports_stall() {
        let r = minimize(
            |x| Some((x[0], DVector::from_element(1, 1.0), DMatrix::from_element(1, 1, 1.0))),
            DVector::zeros(1),
            1e-12,
            5,
            "linear",
        );
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
