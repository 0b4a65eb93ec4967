use dispersive_lab::data::{random_data, DataProfile, ProfileKind};
use dispersive_lab::globalizer::{
    check_growth_r, growth_experiment, iterate_vw, predicted_growth_exponent, split_data, splitting_bounds_check,
    stepwidth, StepRule,
};
use dispersive_lab::solvers::SolverConfig;
use dispersive_lab::spectral::{forward_fourier, SampledField, SpaceGrid};
use proptest::prelude::*;

fn grid() -> SpaceGrid {
    SpaceGrid::new(64.0, 512).unwrap()
}

fn power_law(amp: f64, seed: u64) -> SampledField {
    random_data(&DataProfile::new(ProfileKind::PowerLaw { beta: 0.6, cutoff: 30.0 }, amp), seed, grid()).unwrap()
}

/// Power-law data resolved inside the solver band.
fn resolved(seed: u64) -> SampledField {
    let g = SpaceGrid::new(64.0, 1024).unwrap();
    random_data(&DataProfile::new(ProfileKind::PowerLaw { beta: 0.6, cutoff: 30.0 }, 1.0), seed, g).unwrap()
}

#[test]
fn stepwidth_rule() {
    assert_eq!(stepwidth(0.0, 0.25, 0.01).unwrap(), f64::INFINITY);
    assert!((stepwidth(1.0, 0.25, 0.01).unwrap() - 0.25).abs() < 1e-15);
    assert!((stepwidth(2.0, 1.0, 0.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
    assert!(stepwidth(2.0, 1.0, 0.01).unwrap() < stepwidth(1.5, 1.0, 0.01).unwrap());
    assert!(stepwidth(-1.0, 1.0, 0.01).is_err());
    assert!(stepwidth(1.0, 0.0, 0.01).is_err());
}

#[test]
fn growth_exponent_formula() {
    assert_eq!(predicted_growth_exponent(2.0).unwrap(), 0.0);
    // r = 1.75: r' = 7/3, exponent (1/3) / (2/3) = 1/2.
    assert!((predicted_growth_exponent(1.75).unwrap() - 0.5).abs() < 1e-12);
    assert!(check_growth_r(5.0 / 3.0).is_err());
    assert!(check_growth_r(2.1).is_err());
}

#[test]
fn free_data_have_no_nonlinear_part_at_time_zero() {
    let g = SpaceGrid::new(128.0, 1024).unwrap();
    let u0 = random_data(&DataProfile::new(ProfileKind::PowerLaw { beta: 0.6, cutoff: 10.0 }, 0.05), 2, g).unwrap();
    let rep = growth_experiment(&u0, 2.0, 20.0, &SolverConfig::new(1e-2, 1).unwrap()).unwrap();
    assert_eq!(rep.times[0], 0.0);
    assert!(rep.values[0] < 1e-14);
    assert!(rep.fit_points >= 5);
}

#[test]
fn small_data_correction_scales_cubically() {
    let g = SpaceGrid::new(128.0, 1024).unwrap();
    let cfg = SolverConfig::new(1e-2, 1).unwrap();
    let z = |amp: f64| {
        let u0 = random_data(&DataProfile::new(ProfileKind::PowerLaw { beta: 0.6, cutoff: 10.0 }, amp), 2, g).unwrap();
        growth_experiment(&u0, 2.0, 20.0, &cfg).unwrap().value_at(1.0)
    };
    let ratio = z(2e-2) / z(1e-2);
    assert!((ratio - 8.0).abs() < 0.05, "{ratio}");
}

#[test]
fn data_beyond_the_dealias_band_are_rejected() {
    let u0 = random_data(&DataProfile::new(ProfileKind::PowerLaw { beta: 0.6, cutoff: 40.0 }, 1.0), 1, grid()).unwrap();
    assert!(growth_experiment(&u0, 2.0, 20.0, &SolverConfig::new(1e-2, 1).unwrap()).is_err());
}

#[test]
fn vw_bookkeeping_reassembles_the_solution() {
    let u0 = resolved(1);
    let rep = iterate_vw(&u0, 8.0, 2.0, 1.0, &SolverConfig::new(1e-3, 1).unwrap(), StepRule::default()).unwrap();
    assert!(rep.sum_error < 1e-12, "{}", rep.sum_error);
    assert!(!rep.steps.is_empty());
    assert!(rep.u_gt_norm <= rep.u_gt_bound * (1.0 + 1e-12));
    let end = rep.steps.iter().map(|s| s.width).sum::<f64>();
    assert!((end - 1.0).abs() < 1e-9);
    for s in &rep.steps {
        assert!((s.increment - (s.v_restart - s.v_start)).abs() < 1e-15);
        assert!(s.width > 0.0);
    }
}

#[test]
fn raising_the_threshold_shrinks_the_first_increment() {
    let u0 = resolved(1);
    let cfg = SolverConfig::new(1e-3, 1).unwrap();
    let first = |n: f64| iterate_vw(&u0, n, 2.0, 0.5, &cfg, StepRule::default()).unwrap().steps[0].increment.abs();
    let (a, b) = (first(4.0), first(16.0));
    assert!(b < a, "{a} {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn split_partitions_the_spectrum(seed in 0u64..500, n in 0.5f64..20.0) {
        let u0 = power_law(2.0, seed);
        let s = split_data(&u0, n).unwrap();
        let full = forward_fourier(&u0).unwrap();
        for ((a, b), c) in s.le_spectrum.coefficients().iter().zip(s.gt_spectrum.coefficients()).zip(full.coefficients()) {
            prop_assert!(a.norm() == 0.0 || b.norm() == 0.0);
            prop_assert_eq!(a + b, *c);
            prop_assert!(a.norm() <= 1.0 / n);
        }
        let sum = s.u_le.add(&s.u_gt).unwrap();
        prop_assert!(sum.sub(&u0).unwrap().max_abs() < 1e-12 * u0.max_abs());
    }

    #[test]
    fn splitting_bounds_hold(seed in 0u64..500, n in 0.5f64..20.0, r in 1.3f64..2.0, t in 0.0f64..1.0) {
        let rho = 1.05 + t * (r - 1.05);
        let b = splitting_bounds_check(&power_law(2.0, seed), n, r, rho).unwrap();
        prop_assert!(b.small_ratio <= 1.0 + 1e-6);
        prop_assert!(b.large_ratio <= 1.0 + 1e-6);
    }
}
