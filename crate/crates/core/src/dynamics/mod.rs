//! Time integration of `ẋ = −𝕊 j(x)` with per-sample thermodynamic ledgers.

mod dopri;
mod ledger;
mod schedule;

use nalgebra::DVector;

pub use ledger::{degiorgi_ledger, lyapunov_monitor, simpson, DeGiorgiReport, LyapunovReport};
pub use schedule::RateSchedule;

use crate::convexfun::{DissipationFunction, ThermoFunction};
use crate::error::{check_len, check_positive, Error, Result};
use crate::kinetics::lma_flux_with;
use crate::netcore::ReactionNetwork;

/// Where the trajectory is sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum OutputGrid {
    /// `n` equally spaced points on [0, t_end], both ends included.
    Uniform(usize),
    /// Explicit increasing sample times in [0, t_end].
    Times(Vec<f64>),
    /// Every accepted integrator step.
    Steps,
}

#[derive(Debug, Clone)]
pub struct SimOptions {
    pub rtol: f64,
    pub atol: f64,
    /// States below this are treated as reaching the boundary.
    pub floor: f64,
    pub max_steps: usize,
    pub grid: OutputGrid,
    /// Reference state for the D[x‖x̃] column of the ledger.
    pub x_ref: Option<DVector<f64>>,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            floor: 1e-12,
            max_steps: 1_000_000,
            grid: OutputGrid::Uniform(201),
            x_ref: None,
        }
    }
}

impl SimOptions {
    pub fn with_grid(mut self, grid: OutputGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn with_reference(mut self, x_ref: DVector<f64>) -> Self {
        self.x_ref = Some(x_ref);
        self
    }
}

/// Thermodynamic bookkeeping at one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub t: f64,
    /// D[x‖x̃], present when a reference state was supplied.
    pub divergence: Option<f64>,
    pub epr: f64,
    pub pepr: f64,
    /// Ψ(j)
    pub psi: f64,
    /// Ψ*(f)
    pub psi_star: f64,
    /// Ux
    pub conserved: DVector<f64>,
    /// Size of the integrator step that produced this sample.
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// End of the accepted step.
    pub t: f64,
    pub h: f64,
    pub error_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
    pub ledger: Vec<LedgerRow>,
    pub steps: Vec<StepRecord>,
    pub rejected: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&DVector<f64>> {
        self.states.last()
    }

    /// Largest ∞-norm change of Ux relative to the first sample, scaled by
    /// max(1, ‖Ux₀‖∞).
    pub fn conservation_drift(&self) -> f64 {
        let Some(first) = self.ledger.first() else {
            return 0.0;
        };
        let scale = first.conserved.amax().max(1.0);
        self.ledger
            .iter()
            .map(|r| (&r.conserved - &first.conserved).amax() / scale)
            .fold(0.0, f64::max)
    }

    /// max_t ‖x_t − y_t‖∞ / max_t ‖x_t‖∞ over matching samples.
    pub fn relative_sup_distance(&self, other: &Trajectory) -> Result<f64> {
        check_len(self.len(), other.len(), "trajectory samples")?;
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for (a, b) in self.states.iter().zip(&other.states) {
            num = num.max((a - b).amax());
            den = den.max(a.amax());
        }
        Ok(num / den)
    }
}

/// Integrates the mass-action flow with the network's own rate constants.
pub fn simulate(net: &ReactionNetwork, x0: &DVector<f64>, t_end: f64, opts: &SimOptions) -> Result<Trajectory> {
    let (kp, km) = (net.kplus().to_vec(), net.kminus().to_vec());
    simulate_with(net, x0, t_end, opts, |_| (kp.clone(), km.clone()))
}

/// Integrates the mass-action flow with rates read from a schedule.
pub fn simulate_timedep(
    net: &ReactionNetwork,
    x0: &DVector<f64>,
    t_end: f64,
    schedule: &RateSchedule,
    opts: &SimOptions,
) -> Result<Trajectory> {
    check_len(net.n_edges(), schedule.n_edges(), "rate schedule")?;
    simulate_with(net, x0, t_end, opts, |t| schedule.at(t))
}

fn mass_action_rhs(net: &ReactionNetwork, x: &DVector<f64>, kp: &[f64], km: &[f64]) -> DVector<f64> {
    let mono = |m: &nalgebra::DMatrix<f64>, e: usize| -> f64 {
        m.column(e)
            .iter()
            .zip(x.iter())
            .filter(|(&g, _)| g != 0.0)
            .map(|(&g, &xi)| xi.powi(g as i32))
            .product()
    };
    let j = DVector::from_fn(net.n_edges(), |e, _| {
        kp[e] * mono(net.head_compositions(), e) - km[e] * mono(net.tail_compositions(), e)
    });
    -(net.stoich_f64() * j)
}

fn ledger_row(
    net: &ReactionNetwork,
    x: &DVector<f64>,
    t: f64,
    step: f64,
    rates: (Vec<f64>, Vec<f64>),
    x_ref: Option<&DVector<f64>>,
) -> Result<LedgerRow> {
    let pair = lma_flux_with(net, x, &rates.0, &rates.1)?;
    let dissip = DissipationFunction::cosh(pair.activity.clone())?;
    let divergence = match x_ref {
        Some(r) => Some(ThermoFunction::kl_unit(x.len()).bregman(x, r)?),
        None => None,
    };
    Ok(LedgerRow {
        t,
        divergence,
        epr: pair.epr(),
        pepr: pair.pepr(),
        psi: dissip.value(&pair.flux)?,
        psi_star: dissip.conjugate(&pair.force)?,
        conserved: net.conserved(x),
        step,
    })
}

/// Integrates `ẋ = −𝕊 j_MA(x; k⁺(t), k⁻(t))` for an arbitrary rate function.
pub fn simulate_with<R>(
    net: &ReactionNetwork,
    x0: &DVector<f64>,
    t_end: f64,
    opts: &SimOptions,
    rates: R,
) -> Result<Trajectory>
where
    R: Fn(f64) -> (Vec<f64>, Vec<f64>),
{
    check_len(net.n_species(), x0.len(), "initial state")?;
    check_positive(x0.as_slice())?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!("t_end must be positive, got {t_end}")));
    }
    if let Some(r) = &opts.x_ref {
        check_len(net.n_species(), r.len(), "reference state")?;
        check_positive(r.as_slice())?;
    }
    let grid: Vec<f64> = match &opts.grid {
        OutputGrid::Uniform(n) => {
            let n = (*n).max(2);
            (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
        }
        OutputGrid::Times(ts) => {
            if ts.windows(2).any(|w| !(w[1] > w[0])) || ts.iter().any(|&s| !(0.0..=t_end).contains(&s)) {
                return Err(Error::Domain("output times must be increasing and inside [0, t_end]".into()));
            }
            ts.clone()
        }
        OutputGrid::Steps => vec![0.0],
    };
    let record_steps = opts.grid == OutputGrid::Steps;
    let x_ref = opts.x_ref.as_ref();
    let mut rhs = |t: f64, x: &DVector<f64>| {
        let (kp, km) = rates(t);
        mass_action_rhs(net, x, &kp, &km)
    };

    let mut traj = Trajectory::default();
    let record = |traj: &mut Trajectory, t: f64, x: DVector<f64>, h: f64| -> Result<()> {
        let row = ledger_row(net, &x, t, h, rates(t), x_ref).map_err(|e| match e {
            Error::NonPositiveState { index, value } => Error::BoundaryHalt {
                t,
                reason: format!(
                    "component {index} ({}) reached {value:e} between steps, below the positivity floor",
                    net.species()[index]
                ),
                partial: Box::new(traj.clone()),
            },
            other => other,
        })?;
        traj.times.push(t);
        traj.states.push(x);
        traj.ledger.push(row);
        Ok(())
    };

    let mut next = 0;
    if grid.first() == Some(&0.0) {
        record(&mut traj, 0.0, x0.clone(), 0.0)?;
        next = 1;
    }

    let mut t = 0.0;
    let mut y = x0.clone();
    let mut k1 = rhs(t, &y);
    let mut h = dopri::initial_step(&mut rhs, t, &y, &k1, opts.rtol, opts.atol, t_end);
    let h_min = 1e-13 * t_end;
    let mut last_rejected = false;
    let mut n_steps = 0;
    while t < t_end {
        n_steps += 1;
        if n_steps > opts.max_steps {
            return Err(Error::NoConvergence {
                solver: "Dormand-Prince",
                iterations: opts.max_steps,
                residual: t_end - t,
            });
        }
        let last = t + h * (1.0 + 1e-10) >= t_end;
        if last {
            h = t_end - t;
        }
        let a = dopri::step(&mut rhs, t, &y, &k1, h, opts.rtol, opts.atol);
        let below = a.y.iter().position(|&v| !(v >= opts.floor));
        if a.err.is_finite() && a.err <= 1.0 && below.is_none() {
            let t_new = if last { t_end } else { t + h };
            while next < grid.len() && grid[next] <= t_new {
                let s = grid[next];
                let x = if s == t_new { a.y.clone() } else { a.dense.eval(s) };
                record(&mut traj, s, x, h)?;
                next += 1;
            }
            if record_steps {
                record(&mut traj, t_new, a.y.clone(), h)?;
            }
            traj.steps.push(StepRecord {
                t: t_new,
                h,
                error_norm: a.err,
            });
            let grow = if last_rejected { 1.0 } else { 5.0 };
            let fac = (0.9 * a.err.max(1e-10).powf(-0.2)).clamp(0.2, grow);
            t = t_new;
            y = a.y;
            k1 = a.k7;
            h *= fac;
            last_rejected = false;
        } else {
            traj.rejected += 1;
            last_rejected = true;
            h *= match below {
                Some(_) => 0.25,
                None if a.err.is_finite() => (0.9 * a.err.powf(-0.2)).max(0.2),
                None => 0.25,
            };
            if h < h_min {
                let reason = match below {
                    Some(i) => format!(
                        "component {i} ({}) would fall below the floor {:e}",
                        net.species()[i],
                        opts.floor
                    ),
                    None => "step size underflow".to_string(),
                };
                return Err(Error::BoundaryHalt {
                    t,
                    reason,
                    partial: Box::new(traj),
                });
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::brusselator;

    fn ab(kp: f64, km: f64) -> ReactionNetwork {
        ReactionNetwork::new(
            vec!["A".into(), "B".into()],
            vec![vec![1, 0], vec![0, 1]],
            vec![(0, 1)],
            vec![kp],
            vec![km],
        )
        .unwrap()
    }

    #[test]
    fn linear_relaxation_matches_closed_form() {
        let net = ab(2.0, 1.0);
        let x0 = DVector::from_vec(vec![1.0, 1.0]);
        let opts = SimOptions::default().with_reference(DVector::from_vec(vec![1.0, 2.0]));
        let tr = simulate(&net, &x0, 5.0, &opts).unwrap();
        for (t, x) in tr.times.iter().zip(&tr.states) {
            // a(t) = 2/3 + (1/3) e^{-3t}
            let a = 2.0 / 3.0 + (-3.0 * t).exp() / 3.0;
            assert!((x[0] - a).abs() < 1e-8, "t = {t}");
            assert!((x[1] - (2.0 - a)).abs() < 1e-8);
        }
        let d: Vec<f64> = tr.ledger.iter().map(|r| r.divergence.unwrap()).collect();
        assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-14));
        assert!(tr.conservation_drift() < 1e-12);
    }

    #[test]
    fn ledger_identities() {
        let net = brusselator([1.0, 3.0, 1.0], [1.0, 0.1, 0.1]).unwrap();
        let tr = simulate(&net, &DVector::from_vec(vec![1.0, 4.0]), 10.0, &SimOptions::default()).unwrap();
        for r in &tr.ledger {
            assert!((r.epr - r.psi - r.psi_star).abs() <= 1e-9 * r.epr.abs().max(1.0));
            assert!(r.epr >= r.pepr && r.pepr >= 0.0);
        }
        assert_eq!(tr.times.len(), 201);
        assert_eq!(*tr.times.last().unwrap(), 10.0);
    }

    #[test]
    fn detailed_balanced_start_stays_put() {
        let net = ab(2.0, 1.0);
        let x0 = DVector::from_vec(vec![2.0 / 3.0, 4.0 / 3.0]);
        let tr = simulate(&net, &x0, 3.0, &SimOptions::default()).unwrap();
        assert!(tr.states.iter().all(|x| (x - &x0).amax() < 1e-8));
    }

    #[test]
    fn constant_schedule_matches_static_run() {
        let net = brusselator([1.0, 3.0, 1.0], [1.0, 0.1, 0.1]).unwrap();
        let x0 = DVector::from_vec(vec![1.0, 4.0]);
        let opts = SimOptions::default();
        let a = simulate(&net, &x0, 5.0, &opts).unwrap();
        let sched = RateSchedule::constant(net.kplus().to_vec(), net.kminus().to_vec()).unwrap();
        let b = simulate_timedep(&net, &x0, 5.0, &sched, &opts).unwrap();
        assert!(a.relative_sup_distance(&b).unwrap() < 1e-9);
    }

    #[test]
    fn step_grid_records_every_step() {
        let net = ab(2.0, 1.0);
        let opts = SimOptions::default().with_grid(OutputGrid::Steps);
        let tr = simulate(&net, &DVector::from_vec(vec![1.0, 1.0]), 1.0, &opts).unwrap();
        assert_eq!(tr.len(), tr.steps.len() + 1);
        assert!(tr.ledger.iter().skip(1).all(|r| r.step > 0.0));
    }

    #[test]
    fn boundary_approach_halts_with_partial_trajectory() {
        // Irreversible-like drain: A → B with a vanishing back rate drives A to 0.
        let net = ab(50.0, 1e-30);
        let opts = SimOptions {
            floor: 1e-6,
            ..SimOptions::default()
        };
        match simulate(&net, &DVector::from_vec(vec![1.0, 1e-3]), 10.0, &opts) {
            Err(Error::BoundaryHalt { t, partial, .. }) => {
                assert!(t > 0.0 && t < 10.0);
                assert!(!partial.is_empty());
            }
            other => panic!("expected a boundary halt, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let net = ab(2.0, 1.0);
        let o = SimOptions::default();
        assert!(simulate(&net, &DVector::from_vec(vec![1.0, 0.0]), 1.0, &o).is_err());
        assert!(simulate(&net, &DVector::from_vec(vec![1.0, 1.0]), 0.0, &o).is_err());
        assert!(simulate(&net, &DVector::from_vec(vec![1.0]), 1.0, &o).is_err());
    }
}
