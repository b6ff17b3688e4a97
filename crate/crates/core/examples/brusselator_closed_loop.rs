//! Relaxation of the nonequilibrium Brusselator, the effective equilibrium
//! kinetics that retrace it, and the effective cycle kinetics that freeze it.

use crngeom::dynamics::{simulate, simulate_timedep, OutputGrid, SimOptions};
use crngeom::infogeo::{effective_keq, effective_kst, SolverOptions};
use crngeom::netcore::brusselator;
use nalgebra::DVector;

fn main() {
    let net = brusselator([1.0, 3.0, 1.0], [1.0, 0.1, 0.1]).unwrap();
    let x0 = DVector::from_vec(vec![1.0, 4.0]);
    let opts = SimOptions::default().with_grid(OutputGrid::Uniform(2001));
    let tr = simulate(&net, &x0, 10.0, &opts).unwrap();
    for k in (0..tr.len()).step_by(250) {
        println!("t = {:5.2}  x = ({:.6}, {:.6})  EPR = {:.6}", tr.times[k], tr.states[k][0], tr.states[k][1], tr.ledger[k].epr);
    }

    let eq = effective_keq(&net, &tr, &SolverOptions::default()).unwrap();
    let replay = simulate_timedep(&net, &x0, 10.0, &eq.rate_schedule().unwrap(), &opts).unwrap();
    println!("K_eq(0) = {:?}", eq.entries[0].big_k);
    println!("K_eq(10) = {:?}", eq.entries.last().unwrap().big_k);
    println!("replay deviation (relative sup-norm): {:e}", tr.relative_sup_distance(&replay).unwrap());

    let st = effective_kst(&net, &tr, &SolverOptions::default()).unwrap();
    println!("max ‖𝕊 j_MA(x_t; k_st)‖∞ = {:e}", st.max_flow_residual);
    println!("κ drift: equilibrium {:e}, cycle {:e}", eq.kappa_drift(), st.kappa_drift());
}
