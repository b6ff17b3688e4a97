use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;

fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

#[test]
fn reference_point_maps_to_origin() {
    let phi = ThermoFunction::kl_unit(3);
    assert_eq!(phi.to_dual(&v(&[1.0, 1.0, 1.0])).unwrap(), DVector::zeros(3));
}

#[test]
fn legendre_map_is_componentwise_log() {
    let phi = ThermoFunction::kl_unit(2);
    let y = phi.to_dual(&v(&[2.0 / 3.0, 4.0 / 3.0])).unwrap();
    assert_relative_eq!(y[0], (2.0f64 / 3.0).ln(), epsilon = 1e-15);
    assert_relative_eq!(y[1], (4.0f64 / 3.0).ln(), epsilon = 1e-15);
}

#[test]
fn legendre_rejects_boundary() {
    let phi = ThermoFunction::kl_unit(2);
    assert!(phi.to_dual(&v(&[0.0, 1.0])).is_err());
    assert!(phi.bregman(&v(&[1.0, -1.0]), &v(&[1.0, 1.0])).is_err());
}

#[test]
fn kl_divergence_value() {
    let phi = ThermoFunction::kl_unit(2);
    let d = phi.bregman(&v(&[2.0 / 3.0, 4.0 / 3.0]), &v(&[1.0, 2.0])).unwrap();
    // 2 ln(2/3) + 1
    assert_relative_eq!(d, 0.189_069_783_783_671_2, max_relative = 1e-13);
    assert_eq!(phi.bregman(&v(&[0.3, 2.0]), &v(&[0.3, 2.0])).unwrap(), 0.0);
}

#[test]
fn kl_divergence_independent_of_origin() {
    let a = ThermoFunction::kl(v(&[0.5, 3.0])).unwrap();
    let b = ThermoFunction::kl_unit(2);
    let (x, r) = (v(&[0.7, 1.9]), v(&[1.3, 0.2]));
    let da = a.bregman(&x, &r).unwrap();
    // definition route: Φ(x) − Φ(r) − ⟨x − r, ∂Φ(r)⟩
    let def = a.value(&x).unwrap() - a.value(&r).unwrap() - (&x - &r).dot(&a.to_dual(&r).unwrap());
    assert_relative_eq!(da, def, max_relative = 1e-12);
    assert_relative_eq!(da, b.bregman(&x, &r).unwrap(), max_relative = 1e-14);
}

#[test]
fn quadratic_thermo_pair() {
    let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    let phi = ThermoFunction::quadratic(m.clone(), v(&[0.1, -0.2])).unwrap();
    let x = v(&[1.0, 3.0]);
    let y = phi.to_dual(&x).unwrap();
    assert!((phi.to_primal(&y).unwrap() - &x).amax() < 1e-14);
    let fy = phi.value(&x).unwrap() + phi.conjugate(&y).unwrap();
    assert_relative_eq!(fy, x.dot(&y), max_relative = 1e-12);
    let prod = phi.hessian(&x).unwrap() * phi.hessian_conjugate(&y).unwrap();
    assert!((prod - DMatrix::identity(2, 2)).amax() < 1e-14);
    assert!(ThermoFunction::quadratic(-m, v(&[0.0, 0.0])).is_err());
}

#[test]
fn dissipation_pair_spot_values() {
    let w = 2.0 * 2f64.sqrt();
    let psi = DissipationFunction::cosh(v(&[w])).unwrap();
    let p = psi.pair_from_force(&v(&[2f64.ln()])).unwrap();
    assert_relative_eq!(p.flux[0], 1.0, max_relative = 1e-14);
    assert_relative_eq!(p.psi_star, 6.0 - 4.0 * 2f64.sqrt(), max_relative = 1e-13);
    assert_relative_eq!(p.psi, 2f64.ln() - 6.0 + 4.0 * 2f64.sqrt(), max_relative = 1e-12);
    assert_relative_eq!(p.pairing(), 2f64.ln(), max_relative = 1e-14);
    assert!((p.psi_star - 0.34315).abs() < 1e-5);
    assert!((p.psi - 0.35000).abs() < 1e-5);
}

#[test]
fn zero_force_zero_flux() {
    let psi = DissipationFunction::cosh(v(&[1.0, 3.0])).unwrap();
    let p = psi.pair_from_force(&DVector::zeros(2)).unwrap();
    assert_eq!(p.flux, DVector::zeros(2));
    assert_eq!(p.psi, 0.0);
    assert_eq!(p.psi_star, 0.0);
    assert!(DissipationFunction::cosh(v(&[1.0, 0.0])).is_err());
}

#[test]
fn bregman_edge_special_cases() {
    let psi = DissipationFunction::cosh(v(&[1.5, 0.4])).unwrap();
    let f = v(&[0.3, -2.0]);
    let j = psi.flux(&f).unwrap();
    assert!(psi.bregman(&j, &f).unwrap().abs() < 1e-14);
    assert_relative_eq!(
        psi.bregman(&DVector::zeros(2), &f).unwrap(),
        psi.conjugate(&f).unwrap(),
        max_relative = 1e-15
    );
}

/// Ψ_e(j) by maximizing j f − ψ*_e(f) with bisection on the stationarity
/// condition ω sinh(f/2) = j. Uses no inverse hyperbolic function.
fn psi_by_conjugation(j: f64, w: f64) -> f64 {
    let (mut lo, mut hi) = (-200.0f64, 200.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if w * (mid / 2.0).sinh() < j {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let f = 0.5 * (lo + hi);
    j * f - 2.0 * w * ((f / 2.0).cosh() - 1.0)
}

/// Neumaier-compensated sum.
fn compensated(terms: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &t in terms {
        let n = s + t;
        c += if s.abs() >= t.abs() { (s - n) + t } else { (t - n) + s };
        s = n;
    }
    s + c
}

#[test]
fn bregman_edge_matches_term_by_term_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = 4;
        let w: DVector<f64> = DVector::from_fn(n, |_, _| rng.gen_range(0.1..5.0));
        let j: DVector<f64> = DVector::from_fn(n, |_, _| rng.gen_range(-3.0..3.0));
        let f: DVector<f64> = DVector::from_fn(n, |_, _| rng.gen_range(-3.0..3.0));
        let psi = DissipationFunction::cosh(w.clone()).unwrap();
        let mut terms = Vec::new();
        for e in 0..n {
            terms.push(psi_by_conjugation(j[e], w[e]));
            terms.push(2.0 * w[e] * ((f[e] / 2.0).cosh() - 1.0));
            terms.push(-j[e] * f[e]);
        }
        let oracle = compensated(&terms);
        let got = psi.bregman(&j, &f).unwrap();
        assert!((got - oracle).abs() < 1e-9 * (1.0 + oracle.abs()), "{got} vs {oracle}");
    }
}

#[test]
fn hessian_closed_forms() {
    let phi = ThermoFunction::kl_unit(2);
    let x = v(&[0.5, 4.0]);
    assert_eq!(phi.hessian(&x).unwrap().diagonal(), v(&[2.0, 0.25]));
    let w = v(&[1.2, 0.3]);
    let f = v(&[0.7, -1.1]);
    let psi = DissipationFunction::cosh(w.clone()).unwrap();
    let expect = w.zip_map(&f, |we, fe| we / 2.0 * (fe / 2.0).cosh());
    assert!((psi.hessian_conjugate_diag(&f).unwrap() - expect).amax() < 1e-15);
    let j = psi.flux(&f).unwrap();
    let prod = psi.hessian_diag(&j).unwrap().component_mul(&psi.hessian_conjugate_diag(&f).unwrap());
    assert!((prod - DVector::from_element(2, 1.0)).amax() < 1e-13);
}

#[test]
fn quadratic_reproduces_mass_action_pairing() {
    let jp = v(&[2.0, 0.3, 5.0, 1.0]);
    let jm = v(&[1.0, 0.9, 5.0, 1.0 + 1e-14]);
    let q = DissipationFunction::quadratic_from_oneway(&jp, &jm).unwrap();
    let f = jp.zip_map(&jm, |a, b| (a / b).ln());
    let j = &jp - &jm;
    let jq = q.flux(&f).unwrap();
    assert!((jq - &j).amax() < 1e-12);
    // same pairing as the cosh family with ω = 2√(j⁺j⁻)
    let cosh = DissipationFunction::cosh(jp.zip_map(&jm, |a, b| 2.0 * (a * b).sqrt())).unwrap();
    assert!((cosh.flux(&f).unwrap() - j).amax() < 1e-12);
    assert_eq!(log_mean(3.0, 3.0), 3.0);
}

#[test]
fn asinh_matches_std() {
    for &u in &[0.0, 1e-9, -3e-5, 1e-4, 0.5, -2.0, 1e3, -1e8] {
        let a = asinh_stable(u);
        assert!((a - f64::asinh(u)).abs() <= 1e-15 * (1.0 + a.abs()), "{u}");
    }
}

proptest! {
    #[test]
    fn kl_divergence_nonnegative(a in prop::collection::vec(0.01f64..10.0, 3), b in prop::collection::vec(0.01f64..10.0, 3)) {
        let phi = ThermoFunction::kl_unit(3);
        let d = phi.bregman(&v(&a), &v(&b)).unwrap();
        prop_assert!(d >= -1e-14);
    }

    #[test]
    fn dissipation_symmetric_and_fenchel_young(
        w in prop::collection::vec(0.05f64..8.0, 3),
        f in prop::collection::vec(-6.0f64..6.0, 3),
    ) {
        let psi = DissipationFunction::cosh(v(&w)).unwrap();
        let f = v(&f);
        let p = psi.pair_from_force(&f).unwrap();
        prop_assert!((psi.conjugate(&-&f).unwrap() - p.psi_star).abs() <= 1e-13 * (1.0 + p.psi_star));
        prop_assert!((psi.flux(&-&f).unwrap() + &p.flux).amax() <= 1e-13 * (1.0 + p.flux.amax()));
        let pairing = p.pairing();
        prop_assert!(pairing >= 0.0);
        prop_assert!((p.psi + p.psi_star - pairing).abs() <= 1e-10 * (1.0 + pairing));
        let back = psi.force(&p.flux).unwrap();
        prop_assert!((back - &f).amax() <= 1e-10 * (1.0 + f.amax()));
    }

    #[test]
    fn dissipation_coercive_along_rays(w in 0.1f64..5.0, dir in -1.0f64..1.0) {
        prop_assume!(dir.abs() > 1e-3);
        let psi = DissipationFunction::cosh(v(&[w])).unwrap();
        let mut last = 0.0;
        for k in 1..20 {
            let t = k as f64 * 0.5;
            let ratio = psi.conjugate(&v(&[t * dir])).unwrap() / (t * dir.abs());
            prop_assert!(ratio > last);
            last = ratio;
        }
    }
}
