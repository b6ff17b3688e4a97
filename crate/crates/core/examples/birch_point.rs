//! Equilibrium (Birch) points as Bregman projections and the generalized
//! Pythagorean relation on the vertex space.

use crngeom::convexfun::ThermoFunction;
use crngeom::infogeo::{birch_point, pythagoras_vertex, SolverOptions};
use crngeom::netio::parse_network;
use nalgebra::DVector;

fn main() {
    let net = parse_network("species A B\nreaction r1: A <-> B ; kf=2 kr=1\n").unwrap();
    let kl = ThermoFunction::kl_unit(2);
    let x0 = DVector::from_vec(vec![1.0, 1.0]);
    let x_ref = DVector::from_vec(vec![1.0, 2.0]);
    let bp = birch_point(&net, &kl, &x0, &x_ref, &SolverOptions::default()).unwrap();
    println!("A <-> B: x_eq = {:?} after {} Newton steps", bp.x_eq.as_slice(), bp.iterations);
    let rep = pythagoras_vertex(&net, &kl, &x0, &bp.x_eq, &DVector::from_vec(vec![3.0, 6.0])).unwrap();
    println!(
        "D[x‖x_q] = {:.12} = D[x‖x†] + D[x†‖x_q] = {:.12} + {:.12} (gap {:e})",
        rep.d_x_q, rep.d_x_dagger, rep.d_dagger_q, rep.gap
    );

    let assoc = parse_network("species A B C\nreaction bind: C <-> A + B ; kf=2 kr=1\n").unwrap();
    let bp = birch_point(
        &assoc,
        &ThermoFunction::kl_unit(3),
        &DVector::from_vec(vec![1.0, 1.0, 1.0]),
        &DVector::from_vec(vec![1.0, 2.0, 1.0]),
        &SolverOptions::default(),
    )
    .unwrap();
    println!(
        "C <-> A + B: x_eq = {:?}, conservation residual {:e}, manifold residual {:e}",
        bp.x_eq.as_slice(),
        bp.conservation_residual,
        bp.manifold_residual
    );
}
