use dispersive_lab::data::{random_data, DataProfile};
use dispersive_lab::gauge::{gauge_forward, gauge_inverse, gauge_phase, gauge_lipschitz_ensemble, gauge_lipschitz_probe};
use dispersive_lab::spectral::{SampledField, SpaceGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> SpaceGrid {
    SpaceGrid::new(60.0, 512).unwrap()
}

#[test]
fn phase_of_a_gaussian_matches_the_error_function_integral() {
    // |f|^2 = e^{-x^2}: the phase is sqrt(pi)/2 at x = 0 and sqrt(pi) at the right edge.
    let f = SampledField::from_fn(grid(), |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
    let phase = gauge_phase(&f).unwrap();
    let half = std::f64::consts::PI.sqrt() / 2.0;
    let mid = grid().points() / 2;
    assert!((phase.values[mid] - half).abs() < 1e-10);
    assert!((phase.values[grid().points() - 1] - 2.0 * half).abs() < 1e-10);
    assert!((phase.total - 2.0 * half).abs() < 1e-10);
    let g = gauge_forward(&f).unwrap();
    assert!((g.values()[mid].arg() + half).abs() < 1e-10);
}

#[test]
fn boundary_mass_is_rejected() {
    let f = SampledField::from_fn(grid(), |_| Complex64::new(1.0, 0.0)).unwrap();
    assert!(gauge_forward(&f).is_err());
}

#[test]
fn ensemble_is_deterministic_and_finite() {
    let prof = DataProfile::gaussian(1.0);
    let a = gauge_lipschitz_ensemble(&prof, 6, 5, grid(), 0.5, 2.0, 1.0).unwrap();
    let b = gauge_lipschitz_ensemble(&prof, 6, 5, grid(), 0.5, 2.0, 1.0).unwrap();
    assert_eq!(a, b);
    assert!(a.max_ratio.is_finite() && a.max_ratio > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_keeps_modulus_and_inverts(seed in 0u64..500, amp in 0.1f64..3.0) {
        let f = random_data(&DataProfile::from_tag("bump", amp, 0.0, 0.6).unwrap(), seed, grid()).unwrap();
        let g = gauge_forward(&f).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            prop_assert!((a.norm() - b.norm()).abs() < 1e-12 * amp.max(1.0));
        }
        prop_assert!(gauge_inverse(&g).unwrap().sub(&f).unwrap().max_abs() < 1e-12 * amp.max(1.0));
    }

    #[test]
    fn probe_is_symmetric(seed in 0u64..500) {
        let prof = DataProfile::gaussian(0.5);
        let u = random_data(&prof, seed, grid()).unwrap();
        let v = random_data(&prof, seed + 1000, grid()).unwrap();
        let a = gauge_lipschitz_probe(&u, &v, 0.5, 2.0).unwrap();
        let b = gauge_lipschitz_probe(&v, &u, 0.5, 2.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}
