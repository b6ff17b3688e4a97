//! Mass-action fluxes, forces and activities, the (κ, K) parameter split,
//! Wegscheider classification and steady-state classification.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::convexfun::DissipationFunction;
use crate::error::{check_len, check_positive, Error, Result};
use crate::linalg::{inf_norm, solve_spd};
use crate::netcore::ReactionNetwork;

/// Flux, force and activity on the edges at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePair {
    pub jplus: DVector<f64>,
    pub jminus: DVector<f64>,
    /// j = j⁺ − j⁻
    pub flux: DVector<f64>,
    /// f = ln(j⁺/j⁻)
    pub force: DVector<f64>,
    /// ω = 2√(j⁺∘j⁻)
    pub activity: DVector<f64>,
}

impl EdgePair {
    /// Builds the pair from strictly positive one-way fluxes.
    pub fn from_oneway(jplus: DVector<f64>, jminus: DVector<f64>) -> Result<Self> {
        check_len(jplus.len(), jminus.len(), "one-way fluxes")?;
        check_positive(jplus.as_slice())?;
        check_positive(jminus.as_slice())?;
        Ok(Self {
            flux: &jplus - &jminus,
            force: jplus.zip_map(&jminus, |a, b| a.ln() - b.ln()),
            activity: jplus.zip_map(&jminus, |a, b| 2.0 * (a * b).sqrt()),
            jplus,
            jminus,
        })
    }

    /// Entropy production rate Σ (j⁺ − j⁻) ln(j⁺/j⁻).
    pub fn epr(&self) -> f64 {
        epr(&self.jplus, &self.jminus)
    }

    /// Pseudo entropy production rate 2 Σ (j⁺ − j⁻)²/(j⁺ + j⁻).
    pub fn pepr(&self) -> f64 {
        pepr(&self.jplus, &self.jminus)
    }

    /// Cosh-type dissipation function with this pair's activity.
    pub fn dissipation(&self) -> Result<DissipationFunction> {
        DissipationFunction::cosh(self.activity.clone())
    }
}

/// Pseudo rate 2(a − b)²/(a + b) of one edge.
fn edge_pepr(a: f64, b: f64) -> f64 {
    let d = a - b;
    2.0 * d * (d / (a + b))
}

/// (a − b) ln(a/b), written as 2(a − b) atanh r with r = (a − b)/(a + b)
/// near balance so that it never falls below [`edge_pepr`].
fn edge_epr(a: f64, b: f64) -> f64 {
    let d = a - b;
    let r = d / (a + b);
    if r.abs() < 0.5 {
        2.0 * d * r.atanh()
    } else {
        d * (a.ln() - b.ln())
    }
}

/// Σ (j⁺ − j⁻) ln(j⁺/j⁻), accumulated as the pseudo rate plus non-negative
/// per-edge excesses so that EPR ≥ pEPR survives rounding.
pub fn epr(jplus: &DVector<f64>, jminus: &DVector<f64>) -> f64 {
    let excess: f64 = jplus
        .iter()
        .zip(jminus.iter())
        .map(|(&a, &b)| (edge_epr(a, b) - edge_pepr(a, b)).max(0.0))
        .sum();
    pepr(jplus, jminus) + excess
}

pub fn pepr(jplus: &DVector<f64>, jminus: &DVector<f64>) -> f64 {
    jplus.iter().zip(jminus.iter()).map(|(&a, &b)| edge_pepr(a, b)).sum()
}

/// Force part K = k⁺/k⁻ and activity part κ = √(k⁺k⁻) of the rate constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KineticSplit {
    pub kappa: Vec<f64>,
    pub big_k: Vec<f64>,
}

impl KineticSplit {
    pub fn from_rates(kplus: &[f64], kminus: &[f64]) -> Self {
        Self {
            kappa: kplus.iter().zip(kminus).map(|(p, m)| (p * m).sqrt()).collect(),
            big_k: kplus.iter().zip(kminus).map(|(p, m)| p / m).collect(),
        }
    }

    pub fn of(net: &ReactionNetwork) -> Self {
        Self::from_rates(net.kplus(), net.kminus())
    }

    /// k± = κ∘K^{±1/2}.
    pub fn to_rates(&self) -> (Vec<f64>, Vec<f64>) {
        let kp = self.kappa.iter().zip(&self.big_k).map(|(c, k)| c * k.sqrt()).collect();
        let km = self.kappa.iter().zip(&self.big_k).map(|(c, k)| c / k.sqrt()).collect();
        (kp, km)
    }
}

/// x^γ for every column γ of `exponents`, given ln x.
fn monomials(exponents: &DMatrix<f64>, x: &DVector<f64>, lnx: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(exponents.ncols(), |e, _| {
        let col = exponents.column(e);
        if col.iter().all(|&g| g <= 4.0) {
            col.iter()
                .zip(x.iter())
                .filter(|(&g, _)| g != 0.0)
                .map(|(&g, &xi)| xi.powi(g as i32))
                .product()
        } else {
            col.dot(lnx).exp()
        }
    })
}

fn checked_log(net: &ReactionNetwork, x: &DVector<f64>) -> Result<DVector<f64>> {
    check_len(net.n_species(), x.len(), "state")?;
    check_positive(x.as_slice())?;
    Ok(x.map(f64::ln))
}

/// Mass-action flux `j± = k± ∘ x^{γ±}` with explicit rate vectors.
pub fn lma_flux_with(
    net: &ReactionNetwork,
    x: &DVector<f64>,
    kplus: &[f64],
    kminus: &[f64],
) -> Result<EdgePair> {
    let lnx = checked_log(net, x)?;
    check_len(net.n_edges(), kplus.len(), "forward rates")?;
    check_len(net.n_edges(), kminus.len(), "reverse rates")?;
    let mp = monomials(net.head_compositions(), x, &lnx);
    let mm = monomials(net.tail_compositions(), x, &lnx);
    let jplus = DVector::from_fn(net.n_edges(), |e, _| kplus[e] * mp[e]);
    let jminus = DVector::from_fn(net.n_edges(), |e, _| kminus[e] * mm[e]);
    let split = KineticSplit::from_rates(kplus, kminus);
    let (force, activity) = force_activity_from_log(net, &lnx, &split);
    Ok(EdgePair {
        flux: &jplus - &jminus,
        force,
        activity,
        jplus,
        jminus,
    })
}

/// Mass-action flux with the network's own rate constants.
pub fn lma_flux(net: &ReactionNetwork, x: &DVector<f64>) -> Result<EdgePair> {
    lma_flux_with(net, x, net.kplus(), net.kminus())
}

/// Extended mass-action flux: one-way fluxes and activity multiplied by a
/// positive local factor `g`; the force is unchanged.
pub fn lma_flux_extended(net: &ReactionNetwork, x: &DVector<f64>, g: &DVector<f64>) -> Result<EdgePair> {
    check_len(net.n_edges(), g.len(), "activity factor")?;
    check_positive(g.as_slice())?;
    let mut pair = lma_flux(net, x)?;
    pair.jplus.component_mul_assign(g);
    pair.jminus.component_mul_assign(g);
    pair.activity.component_mul_assign(g);
    pair.flux = &pair.jplus - &pair.jminus;
    Ok(pair)
}

fn force_activity_from_log(
    net: &ReactionNetwork,
    lnx: &DVector<f64>,
    split: &KineticSplit,
) -> (DVector<f64>, DVector<f64>) {
    let grad = net.stoich_f64().tr_mul(lnx);
    let force = DVector::from_fn(net.n_edges(), |e, _| split.big_k[e].ln() + grad[e]);
    let both = net.head_compositions() + net.tail_compositions();
    let half = both.tr_mul(lnx);
    let activity = DVector::from_fn(net.n_edges(), |e, _| 2.0 * split.kappa[e] * (0.5 * half[e]).exp());
    (force, activity)
}

/// Force `f = ln K + 𝕊ᵀ ln x` and activity `ω = 2κ∘x^{(γ⁺+γ⁻)/2}`.
pub fn lma_force_activity(net: &ReactionNetwork, x: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    lma_force_activity_split(net, x, &KineticSplit::of(net))
}

pub fn lma_force_activity_split(
    net: &ReactionNetwork,
    x: &DVector<f64>,
    split: &KineticSplit,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let lnx = checked_log(net, x)?;
    check_len(net.n_edges(), split.kappa.len(), "kinetic split")?;
    Ok(force_activity_from_log(net, &lnx, split))
}

/// Cosh-type dissipation function of the network's mass-action kinetics at x.
pub fn lma_dissipation(net: &ReactionNetwork, x: &DVector<f64>) -> Result<DissipationFunction> {
    let (_, activity) = lma_force_activity(net, x)?;
    DissipationFunction::cosh(activity)
}

/// Outcome of the Wegscheider test `ln K ∈ Im 𝕊ᵀ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WegscheiderReport {
    pub is_equilibrium: bool,
    /// ζ = Vᵀ ln K
    pub cycle_affinity: Vec<f64>,
    /// Minimum-norm least-squares solution of −𝕊ᵀỹ = ln K.
    pub tilde_y: Vec<f64>,
    /// Residual f_NE = ln K + 𝕊ᵀỹ, orthogonal to Im 𝕊ᵀ.
    pub f_ne: Vec<f64>,
}

impl WegscheiderReport {
    /// x̃ = exp(ỹ), the reference state whose KL divergence generates the
    /// equilibrium flow (when the network is equilibrium-class).
    pub fn reference_state(&self) -> DVector<f64> {
        DVector::from_iterator(self.tilde_y.len(), self.tilde_y.iter().map(|y| y.exp()))
    }
}

pub const WEGSCHEIDER_TOL: f64 = 1e-10;

pub fn wegscheider_check(net: &ReactionNetwork) -> WegscheiderReport {
    let lnk = net.log_k();
    let zeta = net.cycle_f64().tr_mul(&lnk);
    let q = net.image_basis();
    let tilde_y = if q.ncols() == 0 {
        DVector::zeros(net.n_species())
    } else {
        // −𝕊ᵀ Q c ≈ ln K, minimum norm because ỹ = Q c ∈ Im 𝕊
        let a = net.stoich_f64().tr_mul(q);
        let c = solve_spd(a.tr_mul(&a), &(-a.tr_mul(&lnk))).expect("𝕊ᵀQ has full column rank");
        q * c
    };
    let f_ne = &lnk + net.stoich_f64().tr_mul(&tilde_y);
    WegscheiderReport {
        is_equilibrium: zeta.len() == 0 || inf_norm(&zeta) < WEGSCHEIDER_TOL,
        cycle_affinity: zeta.as_slice().to_vec(),
        tilde_y: tilde_y.as_slice().to_vec(),
        f_ne: f_ne.as_slice().to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StateClass {
    /// j = 0
    #[serde(rename = "DB")]
    DetailedBalanced,
    /// 𝔹j = 0
    #[serde(rename = "CB")]
    ComplexBalanced,
    /// 𝕊j = 0
    #[serde(rename = "ST")]
    Steady,
    #[serde(rename = "none")]
    NotSteady,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub class: StateClass,
    /// ‖𝕊j‖∞
    pub steady_residual: f64,
    /// ‖𝔹j‖∞
    pub complex_residual: f64,
    /// ‖j‖∞
    pub flux_residual: f64,
}

pub const CLASSIFY_TOL: f64 = 1e-8;

pub fn classify_state(net: &ReactionNetwork, x: &DVector<f64>, tol: f64) -> Result<Classification> {
    let j = lma_flux(net, x)?.flux;
    let steady_residual = inf_norm(&(net.stoich_f64() * &j));
    let complex_residual = inf_norm(&(net.incidence().to_f64() * &j));
    let flux_residual = inf_norm(&j);
    let class = if flux_residual < tol {
        StateClass::DetailedBalanced
    } else if complex_residual < tol {
        StateClass::ComplexBalanced
    } else if steady_residual < tol {
        StateClass::Steady
    } else {
        StateClass::NotSteady
    };
    Ok(Classification {
        class,
        steady_residual,
        complex_residual,
        flux_residual,
    })
}

/// Locates a steady state `𝕊 j(x) = 0` in the stoichiometric class of
/// `x_guess` by damped Newton in log coordinates.
pub fn find_steady_state(net: &ReactionNetwork, x_guess: &DVector<f64>, tol: f64) -> Result<DVector<f64>> {
    let nx = net.n_species();
    let mut w = checked_log(net, x_guess)?;
    let eta = net.conserved(x_guess);
    let q = net.image_basis();
    let u = net.cons_f64();
    let r = q.ncols();
    let residual = |w: &DVector<f64>| -> Result<(DVector<f64>, EdgePair)> {
        let x = w.map(f64::exp);
        let pair = lma_flux(net, &x)?;
        let mut res = DVector::zeros(nx);
        res.rows_mut(0, r).copy_from(&q.tr_mul(&(net.stoich_f64() * &pair.flux)));
        res.rows_mut(r, nx - r).copy_from(&(u * &x - &eta));
        Ok((res, pair))
    };
    let (mut res, mut pair) = residual(&w)?;
    const MAX_ITER: usize = 100;
    for _ in 0..MAX_ITER {
        let scale = 1.0 + pair.jplus.amax().max(pair.jminus.amax());
        if inf_norm(&res) < tol * scale {
            return Ok(w.map(f64::exp));
        }
        let x = w.map(f64::exp);
        let jw = DMatrix::from_fn(net.n_edges(), nx, |e, i| {
            pair.jplus[e] * net.head_compositions()[(i, e)] - pair.jminus[e] * net.tail_compositions()[(i, e)]
        });
        let mut jac = DMatrix::zeros(nx, nx);
        jac.rows_mut(0, r).copy_from(&(q.tr_mul(net.stoich_f64()) * jw));
        jac.rows_mut(r, nx - r).copy_from(&(u * DMatrix::from_diagonal(&x)));
        let Some(step) = jac.lu().solve(&(-&res)) else {
            break;
        };
        let mut alpha = (2.0 / step.amax()).min(1.0);
        let norm0 = res.norm();
        loop {
            let trial = &w + alpha * &step;
            if let Ok((tres, tpair)) = residual(&trial) {
                if tres.norm() < (1.0 - 1e-4 * alpha) * norm0 || alpha < 1e-10 {
                    w = trial;
                    res = tres;
                    pair = tpair;
                    break;
                }
            }
            alpha *= 0.5;
            if alpha < 1e-12 {
                return Err(Error::NoConvergence {
                    solver: "steady-state Newton",
                    iterations: MAX_ITER,
                    residual: inf_norm(&res),
                });
            }
        }
    }
    Err(Error::NoConvergence {
        solver: "steady-state Newton",
        iterations: MAX_ITER,
        residual: inf_norm(&res),
    })
}
