//! Hypergraph data model and discrete-homology bases.

mod exact;
mod network;
mod ops;

pub use exact::{kernel_cols, IntMatrix};
pub use network::ReactionNetwork;
pub use ops::DiscreteOps;

/// Reversible simplified Brusselator with the given rates.
///
/// Hypervertices `0, X1, X2, 2X1+X2, 3X1`; edges `0⇄X1`, `X1⇄X2`,
/// `2X1+X2⇄3X1`.
pub fn brusselator(kplus: [f64; 3], kminus: [f64; 3]) -> crate::Result<ReactionNetwork> {
    ReactionNetwork::new(
        vec!["X1".into(), "X2".into()],
        vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 1], vec![3, 0]],
        vec![(0, 1), (1, 2), (3, 4)],
        kplus.to_vec(),
        kminus.to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use nalgebra::DVector;

    use super::*;
    use crate::Error;

    fn ab(kp: f64, km: f64) -> ReactionNetwork {
        ReactionNetwork::new(
            vec!["A".into(), "B".into()],
            vec![vec![1, 0], vec![0, 1]],
            vec![(0, 1)],
            vec![kp],
            vec![km],
        )
        .unwrap()
    }

    /// C ⇄ A + B, head C.
    fn association() -> ReactionNetwork {
        ReactionNetwork::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec![0, 0, 1], vec![1, 1, 0]],
            vec![(0, 1)],
            vec![1.0],
            vec![1.0],
        )
        .unwrap()
    }

    #[test]
    fn brusselator_matrices() {
        let net = brusselator([1.0; 3], [1.0; 3]).unwrap();
        let s = net.stoich();
        assert_eq!(s.rows_vec(), vec![vec![-1, 1, -1], vec![0, -1, 1]]);
        assert_eq!(
            net.incidence().rows_vec(),
            vec![vec![1, 0, 0], vec![-1, 1, 0], vec![0, -1, 0], vec![0, 0, 1], vec![0, 0, -1]]
        );
        assert_eq!(net.cycle_basis().col(0), vec![0, 1, 1]);
        assert_eq!(net.n_cycles(), 1);
        assert_eq!(net.n_conserved(), 0);
        assert_eq!(net.rank(), 2);
    }

    #[test]
    fn single_edge_graph() {
        let net = ab(2.0, 1.0);
        assert_eq!(net.stoich().rows_vec(), vec![vec![1], vec![-1]]);
        assert_eq!(net.stoich(), net.incidence());
        assert_eq!(net.cons_basis().rows_vec(), vec![vec![1, 1]]);
    }

    #[test]
    fn association_stoich_and_conservation() {
        let net = association();
        assert_eq!(net.stoich().col(0), vec![-1, -1, 1]);
        assert_eq!(net.cons_basis().rows_vec(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert!(net.cycle_basis().ncols() == 0);
    }

    #[test]
    fn kernel_identities_exact() {
        for net in [brusselator([1.0; 3], [2.0; 3]).unwrap(), ab(1.0, 1.0), association()] {
            assert!(net.cons_basis().mul(net.stoich()).is_zero());
            assert!(net.stoich().mul(net.cycle_basis()).is_zero());
            assert_eq!(net.n_cycles() + net.rank(), net.n_edges());
            assert_eq!(net.n_conserved() + net.rank(), net.n_species());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let dup = ReactionNetwork::new(
            vec!["A".into(), "A".into()],
            vec![vec![1, 0], vec![0, 1]],
            vec![(0, 1)],
            vec![1.0],
            vec![1.0],
        );
        assert!(matches!(dup, Err(Error::DuplicateSpecies(_))));
        let loop_ = ReactionNetwork::new(
            vec!["A".into()],
            vec![vec![1]],
            vec![(0, 0)],
            vec![1.0],
            vec![1.0],
        );
        assert!(matches!(loop_, Err(Error::SelfLoop { .. })));
        let rate = ReactionNetwork::new(
            vec!["A".into(), "B".into()],
            vec![vec![1, 0], vec![0, 1]],
            vec![(0, 1)],
            vec![0.0],
            vec![1.0],
        );
        assert!(matches!(rate, Err(Error::NonPositiveRate { .. })));
        let hv = ReactionNetwork::new(
            vec!["A".into(), "B".into()],
            vec![vec![1, 0], vec![1, 0]],
            vec![(0, 1)],
            vec![1.0],
            vec![1.0],
        );
        assert!(matches!(hv, Err(Error::DuplicateHypervertex(_))));
    }

    #[test]
    fn discrete_operators() {
        let net = brusselator([1.0; 3], [1.0; 3]).unwrap();
        let ops = net.ops();
        let g = ops.grad(&DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(g.as_slice(), &[-1.0, 1.0, -1.0]);
        let y = DVector::from_vec(vec![0.3, -1.7]);
        assert_eq!(ops.curl(&ops.grad(&y).unwrap()).unwrap().norm(), 0.0);
        let z = DVector::from_vec(vec![2.5]);
        assert_eq!(ops.div(&ops.curl_adj(&z).unwrap()).unwrap().norm(), 0.0);
        assert!(ops.grad(&DVector::zeros(3)).is_err());
    }

    #[test]
    fn laplacian() {
        let l = ab(2.0, 1.0).graph_laplacian().unwrap();
        assert_eq!(l.as_slice(), &[2.0, -2.0, -1.0, 1.0]); // column-major [[2,-1],[-2,1]]
        let sym = ab(1.0, 1.0).graph_laplacian().unwrap();
        assert_eq!(sym, sym.transpose());
        assert!(matches!(
            brusselator([1.0; 3], [1.0; 3]).unwrap().graph_laplacian(),
            Err(Error::NotAGraph)
        ));
    }

    #[test]
    fn laplacian_reproduces_linear_flux() {
        let net = ReactionNetwork::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            vec![(0, 1), (1, 2), (2, 0)],
            vec![1.5, 0.7, 2.0],
            vec![0.3, 1.1, 0.9],
        )
        .unwrap();
        let l = net.graph_laplacian().unwrap();
        let x = DVector::from_vec(vec![0.4, 1.3, 2.2]);
        let mut sx = DVector::zeros(3);
        for (e, &(h, t)) in net.edges().iter().enumerate() {
            let hs = net.hypervertices()[h].iter().position(|&c| c == 1).unwrap();
            let ts = net.hypervertices()[t].iter().position(|&c| c == 1).unwrap();
            let j = net.kplus()[e] * x[hs] - net.kminus()[e] * x[ts];
            sx[hs] += j;
            sx[ts] -= j;
        }
        assert!((l * &x - sx).amax() < 1e-14);
        let ones = DVector::from_element(3, 1.0);
        assert!((net.graph_laplacian().unwrap().tr_mul(&ones)).amax() < 1e-14);
    }
}
