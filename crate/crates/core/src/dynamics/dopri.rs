//! Dormand-Prince 5(4) with the classical 4th-order continuous extension.

use nalgebra::DVector;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Result of one attempted step.
pub(crate) struct Attempt {
    pub y: DVector<f64>,
    /// Derivative at the new point (first stage of the next step).
    pub k7: DVector<f64>,
    pub err: f64,
    pub dense: Dense,
}

/// Continuous extension on [t, t+h].
pub(crate) struct Dense {
    pub t: f64,
    pub h: f64,
    r: [DVector<f64>; 5],
}

impl Dense {
    pub fn eval(&self, t: f64) -> DVector<f64> {
        let th = (t - self.t) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.r;
        r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)))
    }
}

pub(crate) fn error_norm(err: &DVector<f64>, y0: &DVector<f64>, y1: &DVector<f64>, rtol: f64, atol: f64) -> f64 {
    let n = err.len().max(1) as f64;
    let s: f64 = (0..err.len())
        .map(|i| {
            let sc = atol + rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (s / n).sqrt()
}

pub(crate) fn step<F>(rhs: &mut F, t: f64, y: &DVector<f64>, k1: &DVector<f64>, h: f64, rtol: f64, atol: f64) -> Attempt
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let k2 = rhs(t + C2 * h, &(y + h * A21 * k1));
    let k3 = rhs(t + C3 * h, &(y + h * (A31 * k1 + A32 * &k2)));
    let k4 = rhs(t + C4 * h, &(y + h * (A41 * k1 + A42 * &k2 + A43 * &k3)));
    let k5 = rhs(t + C5 * h, &(y + h * (A51 * k1 + A52 * &k2 + A53 * &k3 + A54 * &k4)));
    let k6 = rhs(
        t + h,
        &(y + h * (A61 * k1 + A62 * &k2 + A63 * &k3 + A64 * &k4 + A65 * &k5)),
    );
    let y_new = y + h * (A71 * k1 + A73 * &k3 + A74 * &k4 + A75 * &k5 + A76 * &k6);
    let k7 = rhs(t + h, &y_new);
    let e = h * (E1 * k1 + E3 * &k3 + E4 * &k4 + E5 * &k5 + E6 * &k6 + E7 * &k7);
    let err = error_norm(&e, y, &y_new, rtol, atol);

    let ydiff = &y_new - y;
    let bspl = h * k1 - &ydiff;
    let r4 = &ydiff - h * &k7 - &bspl;
    let r5 = h * (D1 * k1 + D3 * &k3 + D4 * &k4 + D5 * &k5 + D6 * &k6 + D7 * &k7);
    Attempt {
        dense: Dense {
            t,
            h,
            r: [y.clone(), ydiff, bspl, r4, r5],
        },
        y: y_new,
        k7,
        err,
    }
}

/// Starting step size heuristic (Hairer, Nørsett & Wanner).
pub(crate) fn initial_step<F>(rhs: &mut F, t: f64, y: &DVector<f64>, f0: &DVector<f64>, rtol: f64, atol: f64, span: f64) -> f64
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let zero = DVector::zeros(y.len());
    let d0 = error_norm(y, y, &zero, rtol, atol);
    let d1 = error_norm(f0, y, &zero, rtol, atol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let f1 = rhs(t + h0, &(y + h0 * f0));
    let d2 = error_norm(&(f1 - f0), y, &zero, rtol, atol) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_with_dense_output() {
        let mut rhs = |_t: f64, y: &DVector<f64>| -y;
        let y0 = DVector::from_element(1, 1.0);
        let k1 = rhs(0.0, &y0);
        let a = step(&mut rhs, 0.0, &y0, &k1, 0.1, 1e-8, 1e-10);
        assert!((a.y[0] - (-0.1f64).exp()).abs() < 1e-8);
        for th in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let t = 0.1 * th;
            assert!((a.dense.eval(t)[0] - (-t).exp()).abs() < 1e-8, "θ = {th}");
        }
    }

    #[test]
    fn fifth_order_convergence() {
        // ẏ = cos t: global error of one step scales like h⁶
        let mut rhs = |t: f64, _y: &DVector<f64>| DVector::from_element(1, t.cos());
        let y0 = DVector::zeros(1);
        let err = |h: f64, rhs: &mut dyn FnMut(f64, &DVector<f64>) -> DVector<f64>| {
            let k1 = rhs(0.0, &y0);
            let mut r = |t: f64, y: &DVector<f64>| rhs(t, y);
            (step(&mut r, 0.0, &y0, &k1, h, 1e-8, 1e-10).y[0] - h.sin()).abs()
        };
        let e1 = err(0.4, &mut rhs);
        let e2 = err(0.2, &mut rhs);
        assert!(e1 / e2 > 40.0, "ratio {}", e1 / e2);
    }
}
