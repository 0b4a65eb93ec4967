use dispersive_lab::data::{random_data, DataProfile};
use dispersive_lab::spectral::{
    forward_fourier, free_propagate, inverse_fourier, spectral_derivative, PhaseSign, SampledField, SpaceGrid,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> SpaceGrid {
    SpaceGrid::new(40.0, 256).unwrap()
}

fn data(seed: u64) -> SampledField {
    random_data(&DataProfile::from_tag("modulated-bump", 1.0, 2.0, 0.6).unwrap(), seed, grid()).unwrap()
}

#[test]
fn gaussian_transform_matches_closed_form() {
    let f = SampledField::from_fn(grid(), |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
    let spec = forward_fourier(&f).unwrap();
    let peak = (2.0 * std::f64::consts::PI).sqrt();
    for (xi, c) in spec.frequencies().into_iter().zip(spec.coefficients()) {
        let exact = peak * (-xi * xi / 2.0).exp();
        assert!((c - exact).norm() < 1e-12 * peak, "xi = {xi}");
    }
}

#[test]
fn spectral_derivative_of_a_gaussian() {
    let f = SampledField::from_fn(grid(), |x| Complex64::new((-x * x).exp(), 0.0)).unwrap();
    let d = spectral_derivative(&f).unwrap();
    let exact = SampledField::from_fn(grid(), |x| Complex64::new(-2.0 * x * (-x * x).exp(), 0.0)).unwrap();
    assert!(d.sub(&exact).unwrap().max_abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip_and_plancherel(seed in 0u64..1000) {
        let f = data(seed);
        let spec = forward_fourier(&f).unwrap();
        let back = inverse_fourier(&spec).unwrap();
        prop_assert!(back.sub(&f).unwrap().max_abs() < 1e-12 * f.max_abs().max(1.0));
        // ||f^||_{L^2_xi}^2 = 2 pi ||f||_{L^2_x}^2 for F f = int e^{-ix xi} f.
        let ratio = spec.l2_norm() / f.l2_norm();
        prop_assert!((ratio - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn free_propagator_is_a_unitary_group(seed in 0u64..1000, s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let f = data(seed);
        let a = free_propagate(&free_propagate(&f, s, PhaseSign::Plus).unwrap(), t, PhaseSign::Plus).unwrap();
        let b = free_propagate(&f, s + t, PhaseSign::Plus).unwrap();
        prop_assert!(a.sub(&b).unwrap().max_abs() < 1e-10);
        prop_assert!((a.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
        let back = free_propagate(&b, s + t, PhaseSign::Minus).unwrap();
        prop_assert!(back.sub(&f).unwrap().max_abs() < 1e-10);
    }
}
