//! Energy balance and Lyapunov decay for the equilibrium Brusselator variant.

use crngeom::dynamics::{degiorgi_ledger, lyapunov_monitor, simulate, OutputGrid, SimOptions};
use crngeom::kinetics::wegscheider_check;
use crngeom::netcore::brusselator;
use nalgebra::DVector;

fn main() {
    let net = brusselator([1.0, 3.0, 1.0], [1.0, 1.0, 3.0]).unwrap();
    let weg = wegscheider_check(&net);
    println!("equilibrium class: {} (ζ = {:?})", weg.is_equilibrium, weg.cycle_affinity);
    let x_ref = weg.reference_state();
    let opts = SimOptions::default()
        .with_grid(OutputGrid::Uniform(2001))
        .with_reference(x_ref.clone());
    let tr = simulate(&net, &DVector::from_vec(vec![1.0, 4.0]), 20.0, &opts).unwrap();
    let dg = degiorgi_ledger(&tr, &net, &x_ref).unwrap();
    println!("D[x0‖x̃] − D[x_T‖x̃] = {:.12}", dg.lhs);
    println!("∫ (Ψ + Ψ*) dt       = {:.12}  (gap {:e}, passed {})", dg.rhs, dg.gap, dg.passed);
    let ly = lyapunov_monitor(&tr, &net, &x_ref).unwrap();
    println!("max dD/dt = {:e}, violations = {}", ly.max_rate, ly.violations);
}
