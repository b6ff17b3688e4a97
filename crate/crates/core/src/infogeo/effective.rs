use nalgebra::DVector;
use serde::Serialize;

use super::hhk::{cycle_dual_from, tangent_dual_from};
use super::newton::SolverOptions;
use crate::dynamics::{RateSchedule, Trajectory};
use crate::error::{Error, Result};
use crate::kinetics::{lma_dissipation, lma_flux, lma_flux_with, KineticSplit};
use crate::netcore::ReactionNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Equilibrium,
    Cycle,
}

/// One grid time of an effective-kinetics schedule with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleEntry {
    pub t: f64,
    pub big_k: Vec<f64>,
    pub kplus: Vec<f64>,
    pub kminus: Vec<f64>,
    /// ‖Vᵀ f_MA(x_t; K)‖∞ for equilibrium schedules, ‖Vᵀ f_MA(x_t; K) − ζ_t‖∞
    /// for cycle schedules.
    pub cycle_residual: f64,
    /// Relative ‖−𝕊 j_MA(x_t; k) − ẋ_t‖∞ for equilibrium schedules,
    /// ‖𝕊 j_MA(x_t; k)‖∞ for cycle schedules.
    pub flow_residual: f64,
    /// Cycle coordinate z◊ (cycle schedules only).
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveSchedule {
    pub kind: ScheduleKind,
    /// Activity part shared by every entry.
    pub kappa: Vec<f64>,
    pub entries: Vec<ScheduleEntry>,
    pub max_cycle_residual: f64,
    pub max_flow_residual: f64,
}

impl EffectiveSchedule {
    pub fn rate_schedule(&self) -> Result<RateSchedule> {
        RateSchedule::new(
            self.entries.iter().map(|e| e.t).collect(),
            self.entries.iter().map(|e| e.kplus.clone()).collect(),
            self.entries.iter().map(|e| e.kminus.clone()).collect(),
        )
    }

    /// Largest deviation of the activity part of any entry from `kappa`,
    /// relative.
    pub fn kappa_drift(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| {
                e.kplus
                    .iter()
                    .zip(&e.kminus)
                    .zip(&self.kappa)
                    .map(|((p, m), k)| ((p * m).sqrt() - k).abs() / k)
            })
            .fold(0.0, f64::max)
    }
}

fn split_from_log_k(kappa: &[f64], ln_k: &DVector<f64>) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let big_k: Vec<f64> = ln_k.iter().map(|l| l.exp()).collect();
    let kplus = kappa.iter().zip(ln_k.iter()).map(|(c, l)| c * (0.5 * l).exp()).collect();
    let kminus = kappa.iter().zip(ln_k.iter()).map(|(c, l)| c * (-0.5 * l).exp()).collect();
    (big_k, kplus, kminus)
}

fn check_nonempty(traj: &Trajectory) -> Result<()> {
    if traj.is_empty() {
        Err(Error::Domain("trajectory has no samples".into()))
    } else {
        Ok(())
    }
}

/// Time-dependent force parameters K_eq(t) whose equilibrium flow at x_t
/// reproduces the recorded velocity, with κ unchanged.
pub fn effective_keq(net: &ReactionNetwork, traj: &Trajectory, opts: &SolverOptions) -> Result<EffectiveSchedule> {
    check_nonempty(traj)?;
    let kappa = KineticSplit::of(net).kappa;
    let s = net.stoich_f64();
    let v_basis = net.cycle_f64();
    let mut entries = Vec::with_capacity(traj.len());
    let mut warm: Option<DVector<f64>> = None;
    for (&t, x) in traj.times.iter().zip(&traj.states) {
        let dissip = lma_dissipation(net, x)?;
        let xdot = -(s * lma_flux(net, x)?.flux);
        let td = tangent_dual_from(net, &dissip, &xdot, warm.as_ref(), opts)?;
        let lnx = x.map(f64::ln);
        let ln_k = -s.tr_mul(&(&td.u + &lnx));
        let (big_k, kplus, kminus) = split_from_log_k(&kappa, &ln_k);
        let pair = lma_flux_with(net, x, &kplus, &kminus)?;
        let cycle_residual = if net.n_cycles() == 0 {
            0.0
        } else {
            v_basis.tr_mul(&pair.force).amax()
        };
        let scale = xdot.amax().max(1e-12 * (1.0 + pair.jplus.amax()));
        let flow_residual = (-(s * &pair.flux) - &xdot).amax() / scale;
        entries.push(ScheduleEntry {
            t,
            big_k,
            kplus,
            kminus,
            cycle_residual,
            flow_residual,
            z: Vec::new(),
        });
        warm = Some(td.u);
    }
    Ok(finish(ScheduleKind::Equilibrium, kappa, entries))
}

/// Time-dependent force parameters K_st(t) that make x_t a steady state
/// while keeping the cycle affinities of the original kinetics.
pub fn effective_kst(net: &ReactionNetwork, traj: &Trajectory, opts: &SolverOptions) -> Result<EffectiveSchedule> {
    check_nonempty(traj)?;
    let kappa = KineticSplit::of(net).kappa;
    let s = net.stoich_f64();
    let v_basis = net.cycle_f64();
    let mut entries = Vec::with_capacity(traj.len());
    let mut warm: Option<DVector<f64>> = None;
    for (&t, x) in traj.times.iter().zip(&traj.states) {
        let dissip = lma_dissipation(net, x)?;
        let zeta = v_basis.tr_mul(&lma_flux(net, x)?.force);
        let cd = cycle_dual_from(net, &dissip, &zeta, warm.as_ref(), opts)?;
        let lnx = x.map(f64::ln);
        let ln_k = &cd.force - s.tr_mul(&lnx);
        let (big_k, kplus, kminus) = split_from_log_k(&kappa, &ln_k);
        let pair = lma_flux_with(net, x, &kplus, &kminus)?;
        let cycle_residual = if net.n_cycles() == 0 {
            0.0
        } else {
            (v_basis.tr_mul(&pair.force) - &zeta).amax()
        };
        entries.push(ScheduleEntry {
            t,
            big_k,
            kplus,
            kminus,
            cycle_residual,
            flow_residual: (s * &pair.flux).amax(),
            z: cd.z.as_slice().to_vec(),
        });
        warm = Some(cd.y);
    }
    Ok(finish(ScheduleKind::Cycle, kappa, entries))
}

fn finish(kind: ScheduleKind, kappa: Vec<f64>, entries: Vec<ScheduleEntry>) -> EffectiveSchedule {
    let max_cycle_residual = entries.iter().map(|e| e.cycle_residual).fold(0.0, f64::max);
    let max_flow_residual = entries.iter().map(|e| e.flow_residual).fold(0.0, f64::max);
    EffectiveSchedule {
        kind,
        kappa,
        entries,
        max_cycle_residual,
        max_flow_residual,
    }
}
