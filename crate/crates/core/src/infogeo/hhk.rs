use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::newton::{minimize, SolverOptions};
use crate::convexfun::DissipationFunction;
use crate::error::{check_len, Error, Result};
use crate::linalg::{ser_vec, solve_spd};
use crate::netcore::ReactionNetwork;

/// Induced dual pair on the tangent space: `v = −𝕊 ∂Ψ*(−𝕊ᵀu)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentDual {
    /// Representative of u with no component along Ker 𝕊ᵀ.
    #[serde(serialize_with = "ser_vec")]
    pub u: DVector<f64>,
    /// j† = ∂Ψ*(−𝕊ᵀu)
    #[serde(serialize_with = "ser_vec")]
    pub flux: DVector<f64>,
    /// Ψ̃(v) = Ψ(j†)
    pub psi: f64,
    /// Ψ̃*(u) = Ψ*(−𝕊ᵀu)
    pub psi_star: f64,
    /// ⟨v, u⟩
    pub pairing: f64,
    /// ‖−𝕊j† − v‖∞
    pub residual: f64,
    pub iterations: usize,
}

pub fn tangent_dual(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    v: &DVector<f64>,
    opts: &SolverOptions,
) -> Result<TangentDual> {
    tangent_dual_from(net, dissip, v, None, opts)
}

pub(crate) fn tangent_dual_from(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    v: &DVector<f64>,
    start: Option<&DVector<f64>>,
    opts: &SolverOptions,
) -> Result<TangentDual> {
    check_len(net.n_species(), v.len(), "velocity")?;
    check_len(net.n_edges(), dissip.dim(), "dissipation function")?;
    let q = net.image_basis();
    let scale = 1.0 + v.amax();
    let off = (v - q * q.tr_mul(v)).amax();
    if off > 1e-9 * scale {
        return Err(Error::Domain(format!(
            "velocity is not in the image of the stoichiometric matrix (residual {off:e})"
        )));
    }
    let a = net.stoich_f64().tr_mul(q);
    let qv = q.tr_mul(v);
    let c0 = start.map_or_else(|| DVector::zeros(q.ncols()), |u| q.tr_mul(u));
    let min = minimize(
        |c| {
            let f = -(&a * c);
            let val = dissip.conjugate(&f).ok()? - c.dot(&qv);
            let j = dissip.flux(&f).ok()?;
            let h = dissip.hessian_conjugate_diag(&f).ok()?;
            let grad = -a.tr_mul(&j) - &qv;
            let hess = a.tr_mul(&DMatrix::from_diagonal(&h)) * &a;
            val.is_finite().then_some((val, grad, hess))
        },
        c0,
        opts.tol * scale,
        opts.max_iter,
        "tangent dual",
    )?;
    let u = q * &min.x;
    let f = -net.stoich_f64().tr_mul(&u);
    let pair = dissip.pair_from_force(&f)?;
    Ok(TangentDual {
        residual: (-(net.stoich_f64() * &pair.flux) - v).amax(),
        psi: pair.psi,
        psi_star: pair.psi_star,
        pairing: v.dot(&u),
        flux: pair.flux,
        u,
        iterations: min.iterations,
    })
}

/// Equilibrium part of a flux: the Ψ-projection of j onto
/// {j′ : 𝕊j′ = 𝕊j} ∩ {j′ : ∂Ψ(j′) ∈ Im 𝕊ᵀ}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxSplit {
    #[serde(serialize_with = "ser_vec")]
    pub j_eq: DVector<f64>,
    /// Certificate: ∂Ψ(j_eq) = −𝕊ᵀu_eq.
    #[serde(serialize_with = "ser_vec")]
    pub u_eq: DVector<f64>,
    /// j − j_eq, divergence free.
    #[serde(serialize_with = "ser_vec")]
    pub remainder: DVector<f64>,
    /// ‖𝕊(j − j_eq)‖∞
    pub divergence_residual: f64,
    pub psi: f64,
    pub psi_eq: f64,
    /// 𝒟[j‖j_eq]
    pub divergence: f64,
    /// Ψ(j) − 𝒟[j‖j_eq] − Ψ(j_eq)
    pub pythagoras_gap: f64,
}

pub fn hhk_j_eq(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    j: &DVector<f64>,
    opts: &SolverOptions,
) -> Result<FluxSplit> {
    check_len(net.n_edges(), j.len(), "flux")?;
    let v = -(net.stoich_f64() * j);
    let td = tangent_dual(net, dissip, &v, opts)?;
    let f_eq = -net.stoich_f64().tr_mul(&td.u);
    let psi = dissip.value(j)?;
    let divergence = dissip.bregman(j, &f_eq)?;
    let remainder = j - &td.flux;
    Ok(FluxSplit {
        divergence_residual: (net.stoich_f64() * &remainder).amax(),
        pythagoras_gap: psi - divergence - td.psi,
        psi,
        psi_eq: td.psi,
        divergence,
        j_eq: td.flux,
        u_eq: td.u,
        remainder,
    })
}

/// Steady part of a force: the Ψ*-projection of f onto
/// {f′ : Vᵀf′ = Vᵀf} ∩ {f′ : 𝕊∂Ψ*(f′) = 0}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForceSplit {
    #[serde(serialize_with = "ser_vec")]
    pub f_st: DVector<f64>,
    /// f_st = f + 𝕊ᵀy
    #[serde(serialize_with = "ser_vec")]
    pub y: DVector<f64>,
    /// j_st = ∂Ψ*(f_st)
    #[serde(serialize_with = "ser_vec")]
    pub j_st: DVector<f64>,
    /// ‖𝕊 j_st‖∞
    pub stationarity_residual: f64,
    /// ‖Vᵀ(f_st − f)‖∞
    pub cycle_residual: f64,
    pub psi_star: f64,
    pub psi_star_st: f64,
    /// 𝒟[j_st; f]
    pub divergence: f64,
    /// Ψ*(f) − Ψ*(f_st) − 𝒟[j_st; f]
    pub pythagoras_gap: f64,
    pub iterations: usize,
}

pub fn hhk_f_st(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    f: &DVector<f64>,
    opts: &SolverOptions,
) -> Result<ForceSplit> {
    hhk_f_st_from(net, dissip, f, None, opts)
}

pub(crate) fn hhk_f_st_from(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    f: &DVector<f64>,
    start: Option<&DVector<f64>>,
    opts: &SolverOptions,
) -> Result<ForceSplit> {
    check_len(net.n_edges(), f.len(), "force")?;
    check_len(net.n_edges(), dissip.dim(), "dissipation function")?;
    let q = net.image_basis();
    let a = net.stoich_f64().tr_mul(q);
    let (c, iterations) = if net.n_cycles() == 0 {
        // Im 𝕊ᵀ is everything: the minimizer is f_st = 0.
        let c = solve_spd(a.tr_mul(&a), &(-a.tr_mul(f))).unwrap_or_else(|| DVector::zeros(q.ncols()));
        (c, 0)
    } else {
        let scale = 1.0 + dissip.flux(f)?.amax();
        let c0 = start.map_or_else(|| DVector::zeros(q.ncols()), |y| q.tr_mul(y));
        let min = minimize(
            |c| {
                let g = f + &a * c;
                let val = dissip.conjugate(&g).ok()?;
                let j = dissip.flux(&g).ok()?;
                let h = dissip.hessian_conjugate_diag(&g).ok()?;
                let hess = a.tr_mul(&DMatrix::from_diagonal(&h)) * &a;
                val.is_finite().then(|| (val, a.tr_mul(&j), hess))
            },
            c0,
            opts.tol * scale,
            opts.max_iter,
            "steady force",
        )?;
        (min.x, min.iterations)
    };
    let y = q * c;
    let f_st = if net.n_cycles() == 0 {
        DVector::zeros(f.len())
    } else {
        f + net.stoich_f64().tr_mul(&y)
    };
    let j_st = dissip.flux(&f_st)?;
    let psi_star = dissip.conjugate(f)?;
    let psi_star_st = dissip.conjugate(&f_st)?;
    let divergence = dissip.bregman(&j_st, f)?;
    let cycle_residual = if net.n_cycles() == 0 {
        0.0
    } else {
        net.cycle_f64().tr_mul(&(&f_st - f)).amax()
    };
    Ok(ForceSplit {
        stationarity_residual: (net.stoich_f64() * &j_st).amax(),
        cycle_residual,
        pythagoras_gap: psi_star - psi_star_st - divergence,
        psi_star,
        psi_star_st,
        divergence,
        f_st,
        y,
        j_st,
        iterations,
    })
}

/// Induced dual pair on the cycle spaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleDual {
    /// f◊ = argmin {Ψ*(f) : Vᵀf = ζ}
    #[serde(serialize_with = "ser_vec")]
    pub force: DVector<f64>,
    /// j◊ = ∂Ψ*(f◊) ∈ Ker 𝕊
    #[serde(serialize_with = "ser_vec")]
    pub flux: DVector<f64>,
    /// z◊ with V z◊ = j◊
    #[serde(serialize_with = "ser_vec")]
    pub z: DVector<f64>,
    /// Ψ̂*(ζ) = Ψ*(f◊)
    pub psi_star: f64,
    /// Ψ̂(z◊) = Ψ(j◊)
    pub psi: f64,
    /// ⟨z◊, ζ⟩
    pub pairing: f64,
    /// ‖V z◊ − j◊‖∞
    pub cycle_fit_residual: f64,
    pub stationarity_residual: f64,
    #[serde(skip)]
    pub(crate) y: DVector<f64>,
}

pub fn cycle_dual(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    zeta: &DVector<f64>,
    opts: &SolverOptions,
) -> Result<CycleDual> {
    cycle_dual_from(net, dissip, zeta, None, opts)
}

pub(crate) fn cycle_dual_from(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    zeta: &DVector<f64>,
    start: Option<&DVector<f64>>,
    opts: &SolverOptions,
) -> Result<CycleDual> {
    check_len(net.n_cycles(), zeta.len(), "cycle affinity")?;
    let v = net.cycle_f64();
    let gram = v.tr_mul(v);
    let f0 = if zeta.is_empty() {
        DVector::zeros(net.n_edges())
    } else {
        v * solve_spd(gram.clone(), zeta).expect("cycle basis has full column rank")
    };
    let split = hhk_f_st_from(net, dissip, &f0, start, opts)?;
    let z = if zeta.is_empty() {
        DVector::zeros(0)
    } else {
        solve_spd(gram, &v.tr_mul(&split.j_st)).expect("cycle basis has full column rank")
    };
    let psi = dissip.value(&split.j_st)?;
    Ok(CycleDual {
        cycle_fit_residual: (v * &z - &split.j_st).amax(),
        stationarity_residual: split.stationarity_residual,
        pairing: z.dot(zeta),
        psi_star: split.psi_star_st,
        psi,
        force: split.f_st,
        flux: split.j_st,
        z,
        y: split.y,
    })
}

/// Coordinates of a state, flux and force along the four parametric
/// subspaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceCoords {
    /// η = Ux
    #[serde(serialize_with = "ser_vec")]
    pub eta: DVector<f64>,
    /// v = −𝕊j
    #[serde(serialize_with = "ser_vec")]
    pub velocity: DVector<f64>,
    /// ζ = Vᵀf
    #[serde(serialize_with = "ser_vec")]
    pub cycle_affinity: DVector<f64>,
    /// z with Vz = j − j_eq
    #[serde(serialize_with = "ser_vec")]
    pub cycle_flux: DVector<f64>,
}

impl SubspaceCoords {
    pub fn new(
        net: &ReactionNetwork,
        x: &DVector<f64>,
        j: &DVector<f64>,
        f: &DVector<f64>,
        j_eq: &DVector<f64>,
    ) -> Self {
        let v = net.cycle_f64();
        let cycle_flux = if net.n_cycles() == 0 {
            DVector::zeros(0)
        } else {
            solve_spd(v.tr_mul(v), &v.tr_mul(&(j - j_eq))).expect("cycle basis has full column rank")
        };
        Self {
            eta: net.conserved(x),
            velocity: -(net.stoich_f64() * j),
            cycle_affinity: v.tr_mul(f),
            cycle_flux,
        }
    }
}

/// Both halves of the information-geometric Helmholtz-Hodge-Kodaira split at
/// one (x, j, f).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HhkDecomposition {
    #[serde(serialize_with = "ser_vec")]
    pub x: DVector<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub j: DVector<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub f: DVector<f64>,
    pub flux: FluxSplit,
    pub force: ForceSplit,
    pub coords: SubspaceCoords,
}

pub fn hhk_decompose(
    net: &ReactionNetwork,
    dissip: &DissipationFunction,
    x: &DVector<f64>,
    j: &DVector<f64>,
    f: &DVector<f64>,
    opts: &SolverOptions,
) -> Result<HhkDecomposition> {
    let flux = hhk_j_eq(net, dissip, j, opts)?;
    let force = hhk_f_st(net, dissip, f, opts)?;
    let coords = SubspaceCoords::new(net, x, j, f, &flux.j_eq);
    Ok(HhkDecomposition {
        x: x.clone(),
        j: j.clone(),
        f: f.clone(),
        flux,
        force,
        coords,
    })
}
