use nalgebra::DVector;

use crate::error::{check_len, Error, Result};

/// Odd-symmetric inverse hyperbolic sine, `ln(|u| + √(1+u²))` with a series
/// branch near zero.
pub fn asinh_stable(u: f64) -> f64 {
    let a = u.abs();
    let r = if a < 1e-4 {
        let a2 = a * a;
        a * (1.0 - a2 / 6.0 + 3.0 * a2 * a2 / 40.0)
    } else {
        (a + (1.0 + a * a).sqrt()).ln()
    };
    r.copysign(u)
}

/// Logarithmic mean `(a − b)/(ln a − ln b)`, equal to `a` in the coincident limit.
pub fn log_mean(a: f64, b: f64) -> f64 {
    if (a - b).abs() < 1e-12 * (a + b) {
        a
    } else {
        (a - b) / (a.ln() - b.ln())
    }
}

/// Symmetric Legendre pair (Ψ, Ψ*) on the edge space at a fixed state.
#[derive(Debug, Clone, PartialEq)]
pub enum DissipationFunction {
    /// Ψ*_ω(f) = 2 Σ ω_e (cosh(f_e/2) − 1), with j = ω∘sinh(f/2).
    Cosh { activity: DVector<f64> },
    /// Ψ*(f) = ½ Σ m_e f_e², with j = m∘f.
    Quadratic { metric: DVector<f64> },
}

/// A flux/force pair produced by one Legendre map, with both function values.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationPair {
    pub flux: DVector<f64>,
    pub force: DVector<f64>,
    pub psi: f64,
    pub psi_star: f64,
}

impl DissipationPair {
    /// ⟨j, f⟩, which equals Ψ(j) + Ψ*(f).
    pub fn pairing(&self) -> f64 {
        self.flux.dot(&self.force)
    }
}

fn check_activity(w: &DVector<f64>) -> Result<()> {
    for (index, &value) in w.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveActivity { index, value });
        }
    }
    Ok(())
}

impl DissipationFunction {
    pub fn cosh(activity: DVector<f64>) -> Result<Self> {
        check_activity(&activity)?;
        Ok(Self::Cosh { activity })
    }

    pub fn quadratic(metric: DVector<f64>) -> Result<Self> {
        check_activity(&metric)?;
        Ok(Self::Quadratic { metric })
    }

    /// Quadratic family with `M* = diag[(j⁺ − j⁻)/(ln j⁺ − ln j⁻)]`, which
    /// reproduces the mass-action flux/force pairing at that state.
    pub fn quadratic_from_oneway(jplus: &DVector<f64>, jminus: &DVector<f64>) -> Result<Self> {
        check_len(jplus.len(), jminus.len(), "one-way fluxes")?;
        Self::quadratic(jplus.zip_map(jminus, log_mean))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Cosh { activity } => activity.len(),
            Self::Quadratic { metric } => metric.len(),
        }
    }

    fn scale(&self) -> &DVector<f64> {
        match self {
            Self::Cosh { activity } => activity,
            Self::Quadratic { metric } => metric,
        }
    }

    fn check(&self, v: &DVector<f64>, context: &'static str) -> Result<()> {
        check_len(self.dim(), v.len(), context)
    }

    /// Primal dissipation Ψ(j).
    pub fn value(&self, j: &DVector<f64>) -> Result<f64> {
        self.check(j, "flux")?;
        Ok(match self {
            Self::Cosh { activity } => j
                .iter()
                .zip(activity.iter())
                .map(|(&je, &w)| {
                    let r = je / w;
                    let root = (1.0 + r * r).sqrt();
                    2.0 * w * (r * asinh_stable(r) - r * r / (root + 1.0))
                })
                .sum(),
            Self::Quadratic { metric } => {
                0.5 * j.iter().zip(metric.iter()).map(|(je, m)| je * je / m).sum::<f64>()
            }
        })
    }

    /// Dual dissipation Ψ*(f).
    pub fn conjugate(&self, f: &DVector<f64>) -> Result<f64> {
        self.check(f, "force")?;
        Ok(match self {
            // 2ω(cosh(f/2) − 1) = 4ω sinh²(f/4)
            Self::Cosh { activity } => f
                .iter()
                .zip(activity.iter())
                .map(|(&fe, &w)| {
                    let s = (fe / 4.0).sinh();
                    4.0 * w * s * s
                })
                .sum(),
            Self::Quadratic { metric } => {
                0.5 * f.iter().zip(metric.iter()).map(|(fe, m)| m * fe * fe).sum::<f64>()
            }
        })
    }

    /// j = ∂Ψ*(f).
    pub fn flux(&self, f: &DVector<f64>) -> Result<DVector<f64>> {
        self.check(f, "force")?;
        Ok(match self {
            Self::Cosh { activity } => f.zip_map(activity, |fe, w| w * (fe / 2.0).sinh()),
            Self::Quadratic { metric } => f.component_mul(metric),
        })
    }

    /// f = ∂Ψ(j).
    pub fn force(&self, j: &DVector<f64>) -> Result<DVector<f64>> {
        self.check(j, "flux")?;
        Ok(match self {
            Self::Cosh { activity } => j.zip_map(activity, |je, w| 2.0 * asinh_stable(je / w)),
            Self::Quadratic { metric } => j.component_div(metric),
        })
    }

    /// Diagonal of the Hessian of Ψ at j.
    pub fn hessian_diag(&self, j: &DVector<f64>) -> Result<DVector<f64>> {
        self.check(j, "flux")?;
        Ok(match self {
            Self::Cosh { activity } => j.zip_map(activity, |je, w| 2.0 / (w * w + je * je).sqrt()),
            Self::Quadratic { metric } => metric.map(|m| 1.0 / m),
        })
    }

    /// Diagonal of the Hessian of Ψ* at f.
    pub fn hessian_conjugate_diag(&self, f: &DVector<f64>) -> Result<DVector<f64>> {
        self.check(f, "force")?;
        Ok(match self {
            Self::Cosh { activity } => f.zip_map(activity, |fe, w| 0.5 * w * (fe / 2.0).cosh()),
            Self::Quadratic { metric } => metric.clone(),
        })
    }

    /// Legendre pair generated from a force.
    pub fn pair_from_force(&self, f: &DVector<f64>) -> Result<DissipationPair> {
        let flux = self.flux(f)?;
        Ok(DissipationPair {
            psi: self.value(&flux)?,
            psi_star: self.conjugate(f)?,
            force: f.clone(),
            flux,
        })
    }

    /// Legendre pair generated from a flux.
    pub fn pair_from_flux(&self, j: &DVector<f64>) -> Result<DissipationPair> {
        let force = self.force(j)?;
        Ok(DissipationPair {
            psi: self.value(j)?,
            psi_star: self.conjugate(&force)?,
            flux: j.clone(),
            force,
        })
    }

    /// Bregman divergence 𝒟[j; f′] = Ψ(j) + Ψ*(f′) − ⟨j, f′⟩.
    pub fn bregman(&self, j: &DVector<f64>, f_ref: &DVector<f64>) -> Result<f64> {
        Ok(self.value(j)? + self.conjugate(f_ref)? - j.dot(f_ref))
    }

    /// Same family with the per-edge scale multiplied by `g` (extended
    /// mass-action activity factor).
    pub fn scaled(&self, g: &DVector<f64>) -> Result<Self> {
        self.check(g, "activity factor")?;
        check_activity(g)?;
        let s = self.scale().component_mul(g);
        Ok(match self {
            Self::Cosh { .. } => Self::Cosh { activity: s },
            Self::Quadratic { .. } => Self::Quadratic { metric: s },
        })
    }
}
