use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, check_positive, Error, Result};

/// Legendre pair (Φ, Φ*) on the vertex space.
#[derive(Debug, Clone)]
pub enum ThermoFunction {
    /// Φ(x) = Σ (ln(xᵢ/x°ᵢ) − 1) xᵢ and Φ*(y) = Σ x°ᵢ e^{yᵢ}.
    KullbackLeibler { origin: DVector<f64> },
    /// Φ(x) = ½ (x − c)ᵀ M (x − c) with a symmetric positive definite metric.
    Quadratic {
        metric: DMatrix<f64>,
        inverse: DMatrix<f64>,
        center: DVector<f64>,
    },
}

impl ThermoFunction {
    pub fn kl(origin: DVector<f64>) -> Result<Self> {
        check_positive(origin.as_slice())?;
        Ok(Self::KullbackLeibler { origin })
    }

    /// KL family with x° = 𝟙.
    pub fn kl_unit(n: usize) -> Self {
        Self::KullbackLeibler {
            origin: DVector::from_element(n, 1.0),
        }
    }

    pub fn quadratic(metric: DMatrix<f64>, center: DVector<f64>) -> Result<Self> {
        let n = center.len();
        check_len(n, metric.nrows(), "quadratic metric rows")?;
        check_len(n, metric.ncols(), "quadratic metric cols")?;
        if (&metric - metric.transpose()).amax() > 1e-12 * (1.0 + metric.amax()) {
            return Err(Error::Domain("quadratic metric must be symmetric".into()));
        }
        let chol = metric
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Domain("quadratic metric must be positive definite".into()))?;
        Ok(Self::Quadratic {
            inverse: chol.inverse(),
            metric,
            center,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::KullbackLeibler { origin } => origin.len(),
            Self::Quadratic { center, .. } => center.len(),
        }
    }

    fn check_primal(&self, x: &DVector<f64>) -> Result<()> {
        check_len(self.dim(), x.len(), "density vector")?;
        if let Self::KullbackLeibler { .. } = self {
            check_positive(x.as_slice())?;
        }
        Ok(())
    }

    /// Φ(x).
    pub fn value(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_primal(x)?;
        Ok(match self {
            Self::KullbackLeibler { origin } => x
                .iter()
                .zip(origin.iter())
                .map(|(&xi, &oi)| ((xi / oi).ln() - 1.0) * xi)
                .sum(),
            Self::Quadratic { metric, center, .. } => {
                let d = x - center;
                0.5 * d.dot(&(metric * &d))
            }
        })
    }

    /// Φ*(y).
    pub fn conjugate(&self, y: &DVector<f64>) -> Result<f64> {
        check_len(self.dim(), y.len(), "potential vector")?;
        Ok(match self {
            Self::KullbackLeibler { origin } => {
                origin.iter().zip(y.iter()).map(|(o, yi)| o * yi.exp()).sum()
            }
            Self::Quadratic {
                inverse, center, ..
            } => 0.5 * y.dot(&(inverse * y)) + center.dot(y),
        })
    }

    /// Legendre map y = ∂Φ(x).
    pub fn to_dual(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_primal(x)?;
        Ok(match self {
            Self::KullbackLeibler { origin } => x.zip_map(origin, |xi, oi| (xi / oi).ln()),
            Self::Quadratic { metric, center, .. } => metric * (x - center),
        })
    }

    /// Inverse Legendre map x = ∂Φ*(y).
    pub fn to_primal(&self, y: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.dim(), y.len(), "potential vector")?;
        Ok(match self {
            Self::KullbackLeibler { origin } => y.zip_map(origin, |yi, oi| oi * yi.exp()),
            Self::Quadratic {
                inverse, center, ..
            } => inverse * y + center,
        })
    }

    /// Hessian G_x of Φ.
    pub fn hessian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_primal(x)?;
        Ok(match self {
            Self::KullbackLeibler { .. } => DMatrix::from_diagonal(&x.map(|v| 1.0 / v)),
            Self::Quadratic { metric, .. } => metric.clone(),
        })
    }

    /// Hessian G*_y of Φ*.
    pub fn hessian_conjugate(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        check_len(self.dim(), y.len(), "potential vector")?;
        Ok(match self {
            Self::KullbackLeibler { origin } => {
                DMatrix::from_diagonal(&y.zip_map(origin, |yi, oi| oi * yi.exp()))
            }
            Self::Quadratic { inverse, .. } => inverse.clone(),
        })
    }

    /// Bregman divergence D[x‖x_ref] = Φ(x) − Φ(x_ref) − ⟨x − x_ref, ∂Φ(x_ref)⟩.
    ///
    /// For the KL family this is the generalized Kullback-Leibler divergence
    /// and does not depend on x°.
    pub fn bregman(&self, x: &DVector<f64>, x_ref: &DVector<f64>) -> Result<f64> {
        self.check_primal(x)?;
        self.check_primal(x_ref)?;
        Ok(match self {
            Self::KullbackLeibler { .. } => x
                .iter()
                .zip(x_ref.iter())
                .map(|(&a, &b)| a * (a / b).ln() - (a - b))
                .sum(),
            Self::Quadratic { metric, .. } => {
                let d = x - x_ref;
                0.5 * d.dot(&(metric * &d))
            }
        })
    }
}
