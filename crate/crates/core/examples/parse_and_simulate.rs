//! Parse a network from text, integrate it, and print the trajectory CSV.

use crngeom::dynamics::{simulate, OutputGrid, SimOptions};
use crngeom::netio::{network_to_text, parse_network, trajectory_csv};
use nalgebra::DVector;

fn main() {
    let net = parse_network(
        "# conversion with dimerization
species A B D
reaction iso: A <-> B ; kf=2 kr=1
reaction dim: 2 B <-> D ; kf=0.5 kr=0.25
",
    )
    .unwrap();
    print!("{}", network_to_text(&net));
    let opts = SimOptions::default()
        .with_grid(OutputGrid::Uniform(6))
        .with_reference(DVector::from_vec(vec![1.0, 2.0, 8.0]));
    let tr = simulate(&net, &DVector::from_vec(vec![1.0, 0.5, 0.1]), 5.0, &opts).unwrap();
    print!("{}", trajectory_csv(&tr, &net));
}
