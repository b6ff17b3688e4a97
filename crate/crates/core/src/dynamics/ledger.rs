use nalgebra::DVector;
use serde::Serialize;

use super::Trajectory;
use crate::convexfun::ThermoFunction;
use crate::error::{check_len, check_positive, Error, Result};
use crate::kinetics::{lma_flux, wegscheider_check};
use crate::netcore::ReactionNetwork;

/// Composite Simpson rule on a possibly non-uniform grid. An odd number of
/// intervals is closed with the three-point rule on the last interval.
pub fn simpson(t: &[f64], y: &[f64]) -> f64 {
    assert_eq!(t.len(), y.len());
    let n = t.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (t[1] - t[0]) * (y[0] + y[1]);
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let h0 = t[i + 1] - t[i];
        let h1 = t[i + 2] - t[i + 1];
        let hs = h0 + h1;
        total += hs / 6.0 * ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        let h0 = t[n - 2] - t[n - 3];
        let h1 = t[n - 1] - t[n - 2];
        let alpha = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
        let beta = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
        let eta = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        total += alpha * y[n - 1] + beta * y[n - 2] - eta * y[n - 3];
    }
    total
}

/// Energy balance D[x₀‖x̃] − D[x_t‖x̃] = ∫₀ᵗ (Ψ + Ψ*) ds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeGiorgiReport {
    pub t_end: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks the energy balance of a gradient flow. Only equilibrium-class
/// networks qualify; anything else is refused.
pub fn degiorgi_ledger(traj: &Trajectory, net: &ReactionNetwork, x_ref: &DVector<f64>) -> Result<DeGiorgiReport> {
    let weg = wegscheider_check(net);
    if !weg.is_equilibrium {
        return Err(Error::Domain(format!(
            "energy balance holds only for gradient flows; cycle affinity {:?} is nonzero",
            weg.cycle_affinity
        )));
    }
    check_len(net.n_species(), x_ref.len(), "reference state")?;
    check_positive(x_ref.as_slice())?;
    if traj.len() < 2 {
        return Err(Error::Domain("energy balance needs at least two samples".into()));
    }
    let kl = ThermoFunction::kl_unit(net.n_species());
    let d0 = kl.bregman(&traj.states[0], x_ref)?;
    let d1 = kl.bregman(traj.states.last().unwrap(), x_ref)?;
    let integrand: Vec<f64> = traj.ledger.iter().map(|r| r.psi + r.psi_star).collect();
    let lhs = d0 - d1;
    let rhs = simpson(&traj.times, &integrand);
    let gap = lhs - rhs;
    let tolerance = (1e-4 * lhs.abs()).max(1e-6);
    Ok(DeGiorgiReport {
        t_end: *traj.times.last().unwrap(),
        lhs,
        rhs,
        gap,
        tolerance,
        passed: gap.abs() < tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovReport {
    /// (t, dD/dt) per sample.
    pub samples: Vec<(f64, f64)>,
    pub max_rate: f64,
    /// Samples with dD/dt above the allowance.
    pub violations: usize,
    pub allowance: f64,
}

impl LyapunovReport {
    pub fn non_increasing(&self) -> bool {
        self.violations == 0
    }
}

/// dD[x_t‖x̃]/dt = −⟨j, 𝕊ᵀ(ln x − ln x̃)⟩ at every sample.
pub fn lyapunov_monitor(traj: &Trajectory, net: &ReactionNetwork, x_ref: &DVector<f64>) -> Result<LyapunovReport> {
    check_len(net.n_species(), x_ref.len(), "reference state")?;
    check_positive(x_ref.as_slice())?;
    let allowance = 1e-10;
    let mut samples = Vec::with_capacity(traj.len());
    for (&t, x) in traj.times.iter().zip(&traj.states) {
        let j = lma_flux(net, x)?.flux;
        let dlog = x.zip_map(x_ref, |a, b| a.ln() - b.ln());
        samples.push((t, -j.dot(&net.stoich_f64().tr_mul(&dlog))));
    }
    let max_rate = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let violations = samples.iter().filter(|s| s.1 > allowance).count();
    Ok(LyapunovReport {
        samples,
        max_rate,
        violations,
        allowance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate, SimOptions};
    use crate::netcore::brusselator;

    #[test]
    fn simpson_exactness() {
        // quadratics on a non-uniform grid, odd and even interval counts
        let t = [0.0, 0.3, 0.5, 1.1, 1.2, 2.0];
        let q: Vec<f64> = t.iter().map(|s| 3.0 * s * s - 1.0).collect();
        assert!((simpson(&t, &q) - 6.0).abs() < 1e-12);
        assert!((simpson(&t[..5], &q[..5]) - (1.2f64.powi(3) - 1.2)).abs() < 1e-12);
        // cubics on a uniform grid
        let u: Vec<f64> = (0..9).map(|i| i as f64 * 0.25).collect();
        let c: Vec<f64> = u.iter().map(|s| s * s * s - 2.0 * s).collect();
        assert!((simpson(&u, &c) - (4.0 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn refuses_nonequilibrium_network() {
        let net = brusselator([1.0, 3.0, 1.0], [1.0, 0.1, 0.1]).unwrap();
        let tr = simulate(&net, &DVector::from_vec(vec![1.0, 4.0]), 1.0, &SimOptions::default()).unwrap();
        assert!(degiorgi_ledger(&tr, &net, &DVector::from_vec(vec![1.0, 1.0])).is_err());
    }

    #[test]
    fn equilibrium_brusselator_balance_and_monotone_divergence() {
        let net = brusselator([1.0, 3.0, 1.0], [1.0, 1.0, 3.0]).unwrap();
        let x_ref = wegscheider_check(&net).reference_state();
        let opts = SimOptions::default()
            .with_grid(crate::dynamics::OutputGrid::Uniform(2001))
            .with_reference(x_ref.clone());
        let tr = simulate(&net, &DVector::from_vec(vec![1.0, 4.0]), 20.0, &opts).unwrap();
        let rep = degiorgi_ledger(&tr, &net, &x_ref).unwrap();
        assert!(rep.passed, "{rep:?}");
        let ly = lyapunov_monitor(&tr, &net, &x_ref).unwrap();
        assert!(ly.non_increasing(), "max rate {}", ly.max_rate);
    }
}
