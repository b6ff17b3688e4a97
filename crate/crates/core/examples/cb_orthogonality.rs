//! Complex-balanced steady state of a deficiency-zero cycle and the
//! pseudo-Hilbert orthogonal split of the mass-action force around it.

use crngeom::infogeo::{cb_orthogonality, pseudo_hilbert_decompose};
use crngeom::kinetics::{classify_state, find_steady_state, lma_dissipation, wegscheider_check, CLASSIFY_TOL};
use crngeom::netio::parse_network;
use nalgebra::DVector;

const TRIANGLE: &str = "\
species A B C
reaction r1: 2 A <-> B ; kf=3 kr=1
reaction r2: B <-> A + C ; kf=2 kr=0.5
reaction r3: A + C <-> 2 A ; kf=1.5 kr=2
";

fn main() {
    let net = parse_network(TRIANGLE).unwrap();
    println!("equilibrium class: {}", wegscheider_check(&net).is_equilibrium);
    let x_cb = find_steady_state(&net, &DVector::from_vec(vec![1.0, 1.0, 1.0]), 1e-14).unwrap();
    let class = classify_state(&net, &x_cb, CLASSIFY_TOL).unwrap();
    println!("steady state {:?} classified {:?}", x_cb.as_slice(), class.class);
    for x in [vec![0.2, 3.0, 1.1], vec![2.0, 0.1, 0.5]] {
        let x = DVector::from_vec(x);
        let o = cb_orthogonality(&net, &x, &x_cb).unwrap();
        println!("x = {:?}: Ψ*(f_S+f_A) = {:.12}, Ψ*(f_S−f_A) = {:.12}", x.as_slice(), o.psi_star_sum, o.psi_star_difference);
        let ph = pseudo_hilbert_decompose(&lma_dissipation(&net, &x).unwrap(), &(&o.f_s + &o.f_a), &(&o.f_s - &o.f_a)).unwrap();
        println!("  ⟨j,f_A⟩ = {:.10} = ½𝒟[j; f″] = {:.10}", ph.pairing_a, ph.half_divergence_a);
        println!("  ⟨j,f_S⟩ = {:.10} = ½𝒟[j; −f″] = {:.10}", ph.pairing_s, ph.half_divergence_s);
    }
}
