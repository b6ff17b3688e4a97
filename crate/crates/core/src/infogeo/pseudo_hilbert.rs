use nalgebra::DVector;
use serde::Serialize;

use crate::convexfun::DissipationFunction;
use crate::error::{check_len, check_positive, Error, Result};
use crate::kinetics::lma_dissipation;
use crate::linalg::ser_vec;
use crate::netcore::ReactionNetwork;

/// Split of f against a partner f″ on the same level set of Ψ*.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoHilbert {
    /// (f + f″)/2
    #[serde(serialize_with = "ser_vec")]
    pub f_s: DVector<f64>,
    /// (f − f″)/2
    #[serde(serialize_with = "ser_vec")]
    pub f_a: DVector<f64>,
    /// j = ∂Ψ*(f)
    #[serde(serialize_with = "ser_vec")]
    pub j: DVector<f64>,
    /// ⟨j, f_A⟩
    pub pairing_a: f64,
    /// ⟨j, f_S⟩
    pub pairing_s: f64,
    /// ½𝒟[j; f″]
    pub half_divergence_a: f64,
    /// ½𝒟[j; −f″]
    pub half_divergence_s: f64,
    /// Ψ*(f″) − Ψ*(f)
    pub level_gap: f64,
}

pub fn pseudo_hilbert_decompose(
    dissip: &DissipationFunction,
    f: &DVector<f64>,
    f_partner: &DVector<f64>,
) -> Result<PseudoHilbert> {
    check_len(f.len(), f_partner.len(), "partner force")?;
    let level = dissip.conjugate(f)?;
    let level_gap = dissip.conjugate(f_partner)? - level;
    if level_gap.abs() > 1e-9 * (1.0 + level.abs()) {
        return Err(Error::Domain(format!(
            "partner force is not on the same level set (Ψ* differs by {level_gap:e})"
        )));
    }
    let j = dissip.flux(f)?;
    let f_s = 0.5 * (f + f_partner);
    let f_a = 0.5 * (f - f_partner);
    Ok(PseudoHilbert {
        pairing_a: j.dot(&f_a),
        pairing_s: j.dot(&f_s),
        half_divergence_a: 0.5 * dissip.bregman(&j, f_partner)?,
        half_divergence_s: 0.5 * dissip.bregman(&j, &(-f_partner))?,
        level_gap,
        f_s,
        f_a,
        j,
    })
}

/// Orthogonal split of the mass-action force at x around a
/// complex-balanced state: f_S = 𝕊ᵀ(ln x − ln x̃), f_A = ln K + 𝕊ᵀ ln x̃.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CbOrthogonality {
    #[serde(serialize_with = "ser_vec")]
    pub f_s: DVector<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub f_a: DVector<f64>,
    /// Ψ*(f_S + f_A)
    pub psi_star_sum: f64,
    /// Ψ*(f_S − f_A)
    pub psi_star_difference: f64,
    pub gap: f64,
}

pub fn cb_orthogonality(net: &ReactionNetwork, x: &DVector<f64>, x_cb: &DVector<f64>) -> Result<CbOrthogonality> {
    check_len(net.n_species(), x_cb.len(), "complex-balanced state")?;
    check_positive(x_cb.as_slice())?;
    let dissip = lma_dissipation(net, x)?;
    let s = net.stoich_f64();
    let ln_cb = x_cb.map(f64::ln);
    let f_s = s.tr_mul(&(x.map(f64::ln) - &ln_cb));
    let f_a = net.log_k() + s.tr_mul(&ln_cb);
    let psi_star_sum = dissip.conjugate(&(&f_s + &f_a))?;
    let psi_star_difference = dissip.conjugate(&(&f_s - &f_a))?;
    Ok(CbOrthogonality {
        gap: psi_star_sum - psi_star_difference,
        f_s,
        f_a,
        psi_star_sum,
        psi_star_difference,
    })
}
