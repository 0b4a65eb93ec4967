use std::f64::consts::PI;

use dispersive_lab::data::{random_data_stream, DataProfile};
use dispersive_lab::estimates::{
    bilinear_closed_form, check_bilinear_identity_with, ensemble_sup_ratio_with, trilinear_brute_force,
    trilinear_quadrature, EstimateId, EstimateTag, Harness, IdentitySetup,
};
use dispersive_lab::spectral::{SampledField, SpaceGrid};
use num_complex::Complex64;

#[test]
fn gaussian_pair_matches_the_predicted_constant() {
    let grid = SpaceGrid::new(64.0 * PI, 1024).unwrap();
    let prof = DataProfile::gaussian(1.0);
    let (u, v) = (random_data_stream(&prof, 4, 0, grid).unwrap(), random_data_stream(&prof, 4, 1, grid).unwrap());
    for p in [2.0, 1.5, 3.0] {
        let rep = check_bilinear_identity_with(&u, &v, p, &IdentitySetup::baseline()).unwrap();
        assert!((rep.fitted_c / rep.predicted_c - 1.0).abs() < 1e-6, "p = {p}");
        assert!(rep.max_rel_dev < 1e-6);
        assert!(!rep.window_flag);
    }
}

#[test]
fn closed_form_scales_bilinearly() {
    let grid = SpaceGrid::new(40.0, 256).unwrap();
    let u = SampledField::from_fn(grid, |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
    let a = bilinear_closed_form(&u, &u, 2.0, 1.0, 0.3).unwrap();
    let b = bilinear_closed_form(&u.scaled(Complex64::new(2.0, 0.0)), &u, 2.0, 1.0, 0.3).unwrap();
    assert!((b - 2.0 * a).norm() < 1e-14);
}

#[test]
fn trilinear_quadrature_agrees_with_the_brute_force_sum() {
    let grid = SpaceGrid::new(80.0, 256).unwrap();
    let g = |s: f64, k: f64| SampledField::from_fn(grid, |x| Complex64::from_polar((-x * x / (2.0 * s * s)).exp(), k * x)).unwrap();
    let (u, v, w) = (g(1.0, 0.3), g(1.2, -0.2), g(0.9, 0.1));
    let (xi, tau) = (0.5, 1.0);
    let q = trilinear_quadrature(&u, &v, &w, xi, tau).unwrap();
    let b = trilinear_brute_force(&u, &v, &w, xi, tau, 0.05).unwrap();
    assert!((q - b).norm() / q.norm() < 2e-2, "{q} vs {b}");
}

#[test]
fn every_estimate_has_a_finite_reproducible_sup_ratio() {
    let prof = DataProfile::gaussian(1.0);
    let h = Harness::baseline();
    for tag in EstimateTag::ALL {
        let id = EstimateId::new(tag);
        let a = ensemble_sup_ratio_with(&id, 6, 3, &prof, &h, 1).unwrap();
        let b = ensemble_sup_ratio_with(&id, 6, 3, &prof, &h, 1).unwrap();
        assert!(a.max_ratio.is_finite() && a.max_ratio > 0.0, "{}", tag.name());
        assert_eq!(a.max_ratio, b.max_ratio);
        assert!(a.failures.is_empty(), "{}: {:?}", tag.name(), a.failures);
    }
}

#[test]
fn hypotheses_are_checked() {
    let mut id = EstimateId::new(EstimateTag::FS102);
    assert!(id.check_hypotheses().is_ok());
    id.params.r = 1.2;
    assert!(id.check_hypotheses().is_err());
    assert!("NOPE".parse::<EstimateTag>().is_err());
    for tag in EstimateTag::ALL {
        assert_eq!(tag.name().parse::<EstimateTag>().unwrap(), tag);
    }
}
