//! Incidence, stoichiometric matrix, conservation laws and cycles computed
//! exactly for the Brusselator and for an association reaction.

use crngeom::netcore::{brusselator, ReactionNetwork};

fn show(name: &str, net: &ReactionNetwork) {
    println!("{name}: N_X={} N_v={} N_e={} rank={}", net.n_species(), net.n_hypervertices(), net.n_edges(), net.rank());
    println!("  Γ = {:?}", net.gamma().rows_vec());
    println!("  𝔹 = {:?}", net.incidence().rows_vec());
    println!("  𝕊 = {:?}", net.stoich().rows_vec());
    println!("  U (rows span Ker 𝕊ᵀ) = {:?}", net.cons_basis().rows_vec());
    println!("  V (columns span Ker 𝕊) = {:?}", net.cycle_basis().transpose().rows_vec());
}

fn main() {
    let bru = brusselator([1.0, 3.0, 1.0], [1.0, 0.1, 0.1]).unwrap();
    show("Brusselator", &bru);
    assert_eq!(bru.stoich().rows_vec(), vec![vec![-1, 1, -1], vec![0, -1, 1]]);

    let assoc = ReactionNetwork::new(
        vec!["A".into(), "B".into(), "C".into()],
        vec![vec![0, 0, 1], vec![1, 1, 0]],
        vec![(0, 1)],
        vec![2.0],
        vec![1.0],
    )
    .unwrap();
    show("C <-> A + B", &assoc);
    assert_eq!(assoc.n_conserved(), 2);

    // Discrete calculus on the Brusselator: div ∘ grad is 𝕊𝕊ᵀ.
    let ops = bru.ops();
    let y = nalgebra::DVector::from_vec(vec![0.5, -1.0]);
    let g = ops.grad(&y).unwrap();
    println!("grad y = {:?}, div grad y = {:?}", g.as_slice(), ops.div(&g).unwrap().as_slice());
}
