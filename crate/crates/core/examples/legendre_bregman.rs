//! Legendre duality and Bregman divergences of the KL thermodynamic function
//! and the cosh dissipation function.

use crngeom::convexfun::{DissipationFunction, ThermoFunction};
use nalgebra::DVector;

fn main() {
    let kl = ThermoFunction::kl_unit(2);
    let x = DVector::from_vec(vec![0.5, 2.0]);
    let x_ref = DVector::from_vec(vec![1.0, 1.0]);
    let y = kl.to_dual(&x).unwrap();
    println!("Φ(x) = {:.12}, Φ*(∂Φ(x)) = {:.12}", kl.value(&x).unwrap(), kl.conjugate(&y).unwrap());
    println!("Fenchel-Young gap: {:e}", kl.value(&x).unwrap() + kl.conjugate(&y).unwrap() - x.dot(&y));
    println!("D[x‖x̃] = {:.12}", kl.bregman(&x, &x_ref).unwrap());
    println!("round trip error: {:e}", (kl.to_primal(&y).unwrap() - &x).amax());

    let omega = DVector::from_vec(vec![2.0 * 2f64.sqrt(), 1.0]);
    let psi = DissipationFunction::cosh(omega).unwrap();
    let f = DVector::from_vec(vec![2f64.ln(), -0.3]);
    let pair = psi.pair_from_force(&f).unwrap();
    println!("j = ∂Ψ*(f) = {:?}", pair.flux.as_slice());
    println!("Ψ(j) + Ψ*(f) = {:.15}, ⟨j,f⟩ = {:.15}", pair.psi + pair.psi_star, pair.pairing());
    println!("symmetry: Ψ*(−f) − Ψ*(f) = {:e}", psi.conjugate(&(-&f)).unwrap() - pair.psi_star);
    let f_ref = DVector::from_vec(vec![0.0, 0.4]);
    println!("𝒟[j; f_ref] = {:.12}", psi.bregman(&pair.flux, &f_ref).unwrap());
}
