use serde::Serialize;

use crate::error::{Error, Result};

/// Tabulated rate constants `(k⁺(t), k⁻(t))`, linearly interpolated between
/// nodes and held constant outside the tabulated range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSchedule {
    times: Vec<f64>,
    kplus: Vec<Vec<f64>>,
    kminus: Vec<Vec<f64>>,
}

impl RateSchedule {
    pub fn new(times: Vec<f64>, kplus: Vec<Vec<f64>>, kminus: Vec<Vec<f64>>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Domain("rate schedule has no nodes".into()));
        }
        if kplus.len() != times.len() || kminus.len() != times.len() {
            return Err(Error::Domain(format!(
                "rate schedule has {} times but {} forward and {} reverse rows",
                times.len(),
                kplus.len(),
                kminus.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("rate schedule times must be strictly increasing".into()));
        }
        let n = kplus[0].len();
        for (row, (p, m)) in kplus.iter().zip(&kminus).enumerate() {
            if p.len() != n || m.len() != n {
                return Err(Error::Domain(format!("rate schedule row {row} has inconsistent length")));
            }
            for (edge, (&a, &b)) in p.iter().zip(m).enumerate() {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::NonPositiveRate { edge, which: "k+", value: a });
                }
                if !(b > 0.0 && b.is_finite()) {
                    return Err(Error::NonPositiveRate { edge, which: "k-", value: b });
                }
            }
        }
        Ok(Self { times, kplus, kminus })
    }

    pub fn constant(kplus: Vec<f64>, kminus: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0], vec![kplus], vec![kminus])
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn kplus(&self) -> &[Vec<f64>] {
        &self.kplus
    }

    pub fn kminus(&self) -> &[Vec<f64>] {
        &self.kminus
    }

    pub fn n_edges(&self) -> usize {
        self.kplus[0].len()
    }

    /// Rates at time `t`.
    pub fn at(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.times.len();
        if t <= self.times[0] || n == 1 {
            return (self.kplus[0].clone(), self.kminus[0].clone());
        }
        if t >= self.times[n - 1] {
            return (self.kplus[n - 1].clone(), self.kminus[n - 1].clone());
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let th = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        let lerp = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + (y - x) * th).collect();
        (
            lerp(&self.kplus[i], &self.kplus[i + 1]),
            lerp(&self.kminus[i], &self.kminus[i + 1]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_and_clamping() {
        let s = RateSchedule::new(
            vec![0.0, 1.0, 3.0],
            vec![vec![1.0], vec![2.0], vec![4.0]],
            vec![vec![1.0], vec![1.0], vec![0.5]],
        )
        .unwrap();
        assert_eq!(s.at(-1.0).0, vec![1.0]);
        assert_eq!(s.at(0.5).0, vec![1.5]);
        assert_eq!(s.at(2.0), (vec![3.0], vec![0.75]));
        assert_eq!(s.at(1.0).0, vec![2.0]);
        assert_eq!(s.at(9.0).1, vec![0.5]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(RateSchedule::new(vec![0.0, 0.0], vec![vec![1.0]; 2], vec![vec![1.0]; 2]).is_err());
        assert!(RateSchedule::new(vec![0.0], vec![vec![0.0]], vec![vec![1.0]]).is_err());
        assert!(RateSchedule::new(vec![0.0, 1.0], vec![vec![1.0]], vec![vec![1.0]; 2]).is_err());
    }
}
