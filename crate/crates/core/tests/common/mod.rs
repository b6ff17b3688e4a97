#![allow(dead_code)]

use crngeom::netcore::ReactionNetwork;
use nalgebra::DVector;
use rand::Rng;

pub fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

pub fn data(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Random reversible hypergraph on `n_species` species with small
/// stoichiometric coefficients.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n_species: usize, n_vertices: usize, n_edges: usize) -> ReactionNetwork {
    loop {
        let mut vertices: Vec<Vec<u32>> = Vec::new();
        while vertices.len() < n_vertices {
            let c: Vec<u32> = (0..n_species).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..=2) } else { 0 }).collect();
            if !vertices.contains(&c) {
                vertices.push(c);
            }
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        while edges.len() < n_edges {
            let h = rng.gen_range(0..n_vertices);
            let t = rng.gen_range(0..n_vertices);
            if h != t && !edges.contains(&(h, t)) && !edges.contains(&(t, h)) {
                edges.push((h, t));
            }
        }
        let kp = (0..n_edges).map(|_| rng.gen_range(0.2..5.0)).collect();
        let km = (0..n_edges).map(|_| rng.gen_range(0.2..5.0)).collect();
        let names = (1..=n_species).map(|i| format!("S{i}")).collect();
        if let Ok(net) = ReactionNetwork::new(names, vertices, edges, kp, km) {
            if net.rank() > 0 {
                return net;
            }
        }
    }
}

/// Same network with rates rescaled so that ln K = −𝕊ᵀy for a random y.
pub fn equilibrium_rates<R: Rng>(rng: &mut R, net: &ReactionNetwork) -> ReactionNetwork {
    let y = DVector::from_fn(net.n_species(), |_, _| rng.gen_range(-1.0..1.0));
    let ln_k = -net.stoich_f64().tr_mul(&y);
    let kp: Vec<f64> = (0..net.n_edges()).map(|_| rng.gen_range(0.2..5.0)).collect();
    let km = kp.iter().zip(ln_k.iter()).map(|(p, l)| p / l.exp()).collect();
    net.with_rates(kp, km).unwrap()
}

pub fn random_positive<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| (rng.gen_range(lo.ln()..hi.ln())).exp())
}

pub fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}
