use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};

use super::exact::{kernel_cols, IntMatrix};
use crate::error::{check_len, Error, Result};

/// A reversible, edge-weighted CRN hypergraph.
///
/// Species are the vertices; hypervertices (complexes) are non-negative
/// integer composition vectors; every edge joins a head and a tail
/// hypervertex. The head column of the incidence matrix carries `+1`, and a
/// positive net flux consumes the head complex (`dx/dt = -S j`).
///
/// The network is immutable once built. Exact integer matrices are kept next
/// to their floating-point copies used by the numerical modules.
#[derive(Debug, Clone)]
pub struct ReactionNetwork {
    species: Vec<String>,
    hypervertices: Vec<Vec<u32>>,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
    kplus: Vec<f64>,
    kminus: Vec<f64>,
    gamma: IntMatrix,
    incidence: IntMatrix,
    stoich: IntMatrix,
    cons_basis: IntMatrix,
    cycle_basis: IntMatrix,
    rank: usize,
    // floating-point views
    stoich_f: DMatrix<f64>,
    cons_f: DMatrix<f64>,
    cycle_f: DMatrix<f64>,
    head_f: DMatrix<f64>,
    tail_f: DMatrix<f64>,
    image_basis: DMatrix<f64>,
}

impl ReactionNetwork {
    /// Assembles Γ, 𝔹, 𝕊 = Γ𝔹 and the exact kernel bases.
    ///
    /// Edges are `(head, tail)` indices into `hypervertices`. Reaction labels
    /// default to `r1, r2, ...`.
    pub fn new(
        species: Vec<String>,
        hypervertices: Vec<Vec<u32>>,
        edges: Vec<(usize, usize)>,
        kplus: Vec<f64>,
        kminus: Vec<f64>,
    ) -> Result<Self> {
        let labels = (1..=edges.len()).map(|e| format!("r{e}")).collect();
        Self::with_labels(species, hypervertices, edges, labels, kplus, kminus)
    }

    pub fn with_labels(
        species: Vec<String>,
        hypervertices: Vec<Vec<u32>>,
        edges: Vec<(usize, usize)>,
        labels: Vec<String>,
        kplus: Vec<f64>,
        kminus: Vec<f64>,
    ) -> Result<Self> {
        let nx = species.len();
        let nv = hypervertices.len();
        let ne = edges.len();
        if nx == 0 {
            return Err(Error::InvalidNetwork("no species".into()));
        }
        if ne == 0 {
            return Err(Error::InvalidNetwork("no edges".into()));
        }
        let mut seen = HashSet::new();
        for name in &species {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateSpecies(name.clone()));
            }
        }
        let mut seen = HashSet::new();
        for hv in &hypervertices {
            check_len(nx, hv.len(), "hypervertex composition")?;
            if !seen.insert(hv.as_slice()) {
                return Err(Error::DuplicateHypervertex(hv.clone()));
            }
        }
        check_len(ne, labels.len(), "reaction labels")?;
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidNetwork(format!("duplicate reaction label `{label}`")));
            }
        }
        check_len(ne, kplus.len(), "forward rates")?;
        check_len(ne, kminus.len(), "reverse rates")?;
        check_rates(&kplus, &kminus)?;

        let mut gamma = IntMatrix::zeros(nx, nv);
        for (l, hv) in hypervertices.iter().enumerate() {
            for (i, &c) in hv.iter().enumerate() {
                gamma.set(i, l, i64::from(c));
            }
        }
        let mut incidence = IntMatrix::zeros(nv, ne);
        for (e, &(head, tail)) in edges.iter().enumerate() {
            if head >= nv || tail >= nv {
                return Err(Error::InvalidNetwork(format!(
                    "edge {e} references hypervertex outside 0..{nv}"
                )));
            }
            if head == tail {
                return Err(Error::SelfLoop { edge: e, vertex: head });
            }
            incidence.set(head, e, 1);
            incidence.set(tail, e, -1);
        }
        let stoich = gamma.mul(&incidence);
        let rank = stoich.rank();

        let cycles = kernel_cols(&stoich)?;
        let cycle_basis = if cycles.is_empty() {
            IntMatrix::zeros(ne, 0)
        } else {
            IntMatrix::from_cols(&cycles, ne)
        };
        let cons = kernel_cols(&stoich.transpose())?;
        let cons_basis = if cons.is_empty() {
            IntMatrix::zeros(0, nx)
        } else {
            IntMatrix::from_rows(&cons, nx)
        };

        let stoich_f = stoich.to_f64();
        let head_f = DMatrix::from_fn(nx, ne, |i, e| f64::from(hypervertices[edges[e].0][i]));
        let tail_f = DMatrix::from_fn(nx, ne, |i, e| f64::from(hypervertices[edges[e].1][i]));
        let image_basis = image_basis(&stoich_f, rank);

        Ok(Self {
            species,
            hypervertices,
            edges,
            labels,
            kplus,
            kminus,
            gamma,
            incidence,
            cons_f: cons_basis.to_f64(),
            cycle_f: cycle_basis.to_f64(),
            stoich,
            cons_basis,
            cycle_basis,
            rank,
            stoich_f,
            head_f,
            tail_f,
            image_basis,
        })
    }

    /// Same structure with different rate constants.
    pub fn with_rates(&self, kplus: Vec<f64>, kminus: Vec<f64>) -> Result<Self> {
        check_len(self.n_edges(), kplus.len(), "forward rates")?;
        check_len(self.n_edges(), kminus.len(), "reverse rates")?;
        check_rates(&kplus, &kminus)?;
        Ok(Self {
            kplus,
            kminus,
            ..self.clone()
        })
    }

    pub fn n_species(&self) -> usize {
        self.species.len()
    }

    pub fn n_hypervertices(&self) -> usize {
        self.hypervertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of independent conserved quantities, `N_X - rank(S)`.
    pub fn n_conserved(&self) -> usize {
        self.cons_basis.nrows()
    }

    /// Number of independent cycles, `N_e - rank(S)`.
    pub fn n_cycles(&self) -> usize {
        self.cycle_basis.ncols()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    pub fn hypervertices(&self) -> &[Vec<u32>] {
        &self.hypervertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kplus(&self) -> &[f64] {
        &self.kplus
    }

    pub fn kminus(&self) -> &[f64] {
        &self.kminus
    }

    /// Hypervertex matrix Γ (`N_X × N_v̂`).
    pub fn gamma(&self) -> &IntMatrix {
        &self.gamma
    }

    /// Incidence matrix 𝔹 (`N_v̂ × N_e`).
    pub fn incidence(&self) -> &IntMatrix {
        &self.incidence
    }

    /// Hypergraph incidence (stoichiometric) matrix 𝕊 = Γ𝔹 (`N_X × N_e`).
    pub fn stoich(&self) -> &IntMatrix {
        &self.stoich
    }

    /// Rows span Ker 𝕊ᵀ (`N_l × N_X`).
    pub fn cons_basis(&self) -> &IntMatrix {
        &self.cons_basis
    }

    /// Columns span Ker 𝕊 (`N_e × N_z`).
    pub fn cycle_basis(&self) -> &IntMatrix {
        &self.cycle_basis
    }

    pub fn stoich_f64(&self) -> &DMatrix<f64> {
        &self.stoich_f
    }

    pub fn cons_f64(&self) -> &DMatrix<f64> {
        &self.cons_f
    }

    pub fn cycle_f64(&self) -> &DMatrix<f64> {
        &self.cycle_f
    }

    /// Columns are the head compositions γ⁺_e = Γ𝔹⁺.
    pub fn head_compositions(&self) -> &DMatrix<f64> {
        &self.head_f
    }

    /// Columns are the tail compositions γ⁻_e = Γ𝔹⁻.
    pub fn tail_compositions(&self) -> &DMatrix<f64> {
        &self.tail_f
    }

    /// Orthonormal basis of Im 𝕊 (`N_X × rank`).
    pub fn image_basis(&self) -> &DMatrix<f64> {
        &self.image_basis
    }

    /// Conserved quantities `U x`.
    pub fn conserved(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.cons_f * x
    }

    /// True when every hypervertex is a single species with unit coefficient
    /// and every species is a hypervertex, i.e. Γ is a permutation of I.
    pub fn is_graph(&self) -> bool {
        self.hypervertices.len() == self.species.len()
            && self
                .hypervertices
                .iter()
                .all(|hv| hv.iter().sum::<u32>() == 1 && hv.iter().all(|&c| c <= 1))
    }

    /// Per-edge log equilibrium constants `ln K = ln(k⁺/k⁻)`.
    pub fn log_k(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.n_edges(),
            self.kplus.iter().zip(&self.kminus).map(|(p, m)| (p / m).ln()),
        )
    }
}

fn check_rates(kplus: &[f64], kminus: &[f64]) -> Result<()> {
    for (which, rates) in [("k+", kplus), ("k-", kminus)] {
        for (edge, &value) in rates.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveRate { edge, which, value });
            }
        }
    }
    Ok(())
}

/// Left singular vectors belonging to the `rank` largest singular values.
fn image_basis(s: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let n = s.nrows();
    if rank == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = s.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let cols: Vec<_> = order[..rank].iter().map(|&k| u.column(k).into_owned()).collect();
    DMatrix::from_columns(&cols)
}
