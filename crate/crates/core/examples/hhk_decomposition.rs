//! Flux and force decomposition of the Brusselator at x = (1, 4), with the
//! induced tangent and cycle dualities.

use crngeom::infogeo::{cycle_dual, hhk_decompose, tangent_dual, SolverOptions};
use crngeom::kinetics::{lma_dissipation, lma_flux};
use crngeom::netcore::brusselator;
use nalgebra::DVector;

fn main() {
    let net = brusselator([1.0, 3.0, 1.0], [1.0, 0.1, 0.1]).unwrap();
    let x = DVector::from_vec(vec![1.0, 4.0]);
    let pair = lma_flux(&net, &x).unwrap();
    let dissip = lma_dissipation(&net, &x).unwrap();
    let opts = SolverOptions::default();

    let d = hhk_decompose(&net, &dissip, &x, &pair.flux, &pair.force, &opts).unwrap();
    println!("j      = {:?}", pair.flux.as_slice());
    println!("j_eq   = {:?}", d.flux.j_eq.as_slice());
    println!("j−j_eq = {:?} (divergence residual {:e})", d.flux.remainder.as_slice(), d.flux.divergence_residual);
    println!("Ψ(j) = {:.10} = 𝒟[j‖j_eq] + Ψ(j_eq) = {:.10} + {:.10}", d.flux.psi, d.flux.divergence, d.flux.psi_eq);
    println!("f      = {:?}", pair.force.as_slice());
    println!("f_st   = {:?} (stationarity residual {:e})", d.force.f_st.as_slice(), d.force.stationarity_residual);

    let v = -(net.stoich_f64() * &pair.flux);
    let td = tangent_dual(&net, &dissip, &v, &opts).unwrap();
    println!("tangent: Ψ̃(v) + Ψ̃*(u) − ⟨v,u⟩ = {:e}", td.psi + td.psi_star - td.pairing);

    let zeta = net.cycle_f64().tr_mul(&pair.force);
    let cd = cycle_dual(&net, &dissip, &zeta, &opts).unwrap();
    println!("cycle: ζ = {:?}, z◊ = {:?}, j◊ = {:?}", zeta.as_slice(), cd.z.as_slice(), cd.flux.as_slice());
    println!("cycle: Ψ̂(z◊) + Ψ̂*(ζ) − ⟨z◊,ζ⟩ = {:e}", cd.psi + cd.psi_star - cd.pairing);
}
