use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::dynamics::{RateSchedule, Trajectory};
use crate::error::Result;
use crate::netcore::ReactionNetwork;

/// Trajectory as CSV with columns
/// `t,x_<name>...,D,epr,pepr,psi,psistar,eta_<i>...`. The `D` cell is empty
/// when the run had no reference state.
pub fn trajectory_csv(traj: &Trajectory, net: &ReactionNetwork) -> String {
    let mut out = String::from("t");
    for s in net.species() {
        let _ = write!(out, ",x_{s}");
    }
    out.push_str(",D,epr,pepr,psi,psistar");
    for i in 1..=net.n_conserved() {
        let _ = write!(out, ",eta_{i}");
    }
    out.push('\n');
    for (x, row) in traj.states.iter().zip(&traj.ledger) {
        let _ = write!(out, "{:.16e}", row.t);
        for v in x.iter() {
            let _ = write!(out, ",{v:.16e}");
        }
        match row.divergence {
            Some(d) => {
                let _ = write!(out, ",{d:.16e}");
            }
            None => out.push(','),
        }
        for v in [row.epr, row.pepr, row.psi, row.psi_star] {
            let _ = write!(out, ",{v:.16e}");
        }
        for v in row.conserved.iter() {
            let _ = write!(out, ",{v:.16e}");
        }
        out.push('\n');
    }
    out
}

/// Pretty-printed JSON of any report; field order follows the struct.
pub fn report_json<T: Serialize + ?Sized>(report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    times: Vec<f64>,
    kplus: Vec<Vec<f64>>,
    kminus: Vec<Vec<f64>>,
}

pub fn schedule_to_json(s: &RateSchedule) -> Result<String> {
    report_json(&ScheduleFile {
        times: s.times().to_vec(),
        kplus: s.kplus().to_vec(),
        kminus: s.kminus().to_vec(),
    })
}

pub fn schedule_from_json(text: &str) -> Result<RateSchedule> {
    let f: ScheduleFile = serde_json::from_str(text)?;
    RateSchedule::new(f.times, f.kplus, f.kminus)
}
