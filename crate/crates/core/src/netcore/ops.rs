use nalgebra::{DMatrix, DVector};

use super::ReactionNetwork;
use crate::error::{check_len, Error, Result};

/// Discrete vector calculus on the hypergraph chain complex.
///
/// `grad = 𝕊ᵀ`, `div = 𝕊`, `curl = Vᵀ` and its adjoint `V`. By construction
/// `div ∘ curl_adj = 0` and `curl ∘ grad = 0`.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteOps<'a> {
    net: &'a ReactionNetwork,
}

impl<'a> DiscreteOps<'a> {
    pub fn new(net: &'a ReactionNetwork) -> Self {
        Self { net }
    }

    /// Vertex potential `y` to edge force `𝕊ᵀ y`.
    pub fn grad(&self, y: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.net.n_species(), y.len(), "grad input")?;
        Ok(self.net.stoich_f64().tr_mul(y))
    }

    /// Edge flux `j` to vertex source `𝕊 j`.
    pub fn div(&self, j: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.net.n_edges(), j.len(), "div input")?;
        Ok(self.net.stoich_f64() * j)
    }

    /// Edge force `f` to cycle affinity `Vᵀ f`.
    pub fn curl(&self, f: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.net.n_edges(), f.len(), "curl input")?;
        Ok(self.net.cycle_f64().tr_mul(f))
    }

    /// Cycle coordinates `z` to the divergence-free flux `V z`.
    pub fn curl_adj(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.net.n_cycles(), z.len(), "curl_adj input")?;
        Ok(self.net.cycle_f64() * z)
    }
}

impl ReactionNetwork {
    pub fn ops(&self) -> DiscreteOps<'_> {
        DiscreteOps::new(self)
    }

    /// Weighted asymmetric graph Laplacian
    /// `L = 𝔹[diag(k⁺)(𝔹⁺)ᵀ − diag(k⁻)(𝔹⁻)ᵀ]`, returned in species order so
    /// that `dx/dt = −L x` for the linear (Γ = I) dynamics.
    pub fn graph_laplacian(&self) -> Result<DMatrix<f64>> {
        if !self.is_graph() {
            return Err(Error::NotAGraph);
        }
        let n = self.n_species();
        let species_of = |hv: usize| -> usize {
            self.hypervertices()[hv]
                .iter()
                .position(|&c| c == 1)
                .expect("graph hypervertex holds one species")
        };
        let mut l = DMatrix::zeros(n, n);
        for (e, &(head, tail)) in self.edges().iter().enumerate() {
            let (h, t) = (species_of(head), species_of(tail));
            let (kp, km) = (self.kplus()[e], self.kminus()[e]);
            // column e of 𝔹 is +1 at h, −1 at t; the bracket row e is k⁺ at h, −k⁻ at t
            l[(h, h)] += kp;
            l[(h, t)] -= km;
            l[(t, h)] -= kp;
            l[(t, t)] += km;
        }
        Ok(l)
    }
}
