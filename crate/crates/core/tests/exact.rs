use dispersive_lab::exact::{
    check_dnls_ladder, check_nls_ladder, illposed_dnls_experiment, illposed_nls_experiment, nls_soliton,
    DnlsFamilyParams, NlsSolitonParams,
};
use dispersive_lab::spectral::SpaceGrid;
use proptest::prelude::*;

#[test]
fn soliton_mass_matches_the_closed_form() {
    let g = SpaceGrid::new(80.0, 2048).unwrap();
    for (n, w) in [(0.0, 1.0), (2.0, 0.5), (-1.0, 2.0)] {
        let p = NlsSolitonParams::new(n, w).unwrap();
        let m = nls_soliton(&p, g, 0.3).unwrap().mass();
        assert!((m / p.mass() - 1.0).abs() < 1e-10, "N = {n}, omega = {w}");
    }
    assert!(NlsSolitonParams::new(0.0, 0.0).is_err());
}

#[test]
fn derivative_family_parameters() {
    let p = DnlsFamilyParams::new(1.0, 1.0).unwrap();
    assert!((p.gamma() - 3f64.sqrt()).abs() < 1e-15);
    assert!((p.alpha() - 0.5).abs() < 1e-15);
    assert!(DnlsFamilyParams::new(2.0, 1.0).is_err());
    assert!(DnlsFamilyParams::new(-1.0, 1.0).is_err());
}

#[test]
fn ladders_reject_exponents_outside_their_range() {
    let ns = [20.0, 40.0];
    assert!(check_nls_ladder(-0.2, 2.0, 1.0, &ns, 50.0).is_ok());
    assert!(check_nls_ladder(0.1, 2.0, 1.0, &ns, 50.0).is_err());
    assert!(check_nls_ladder(-0.6, 2.0, 1.0, &ns, 50.0).is_err());
    assert!(check_dnls_ladder(0.4, 2.0, 1.0, &ns, 10.0).is_ok());
    assert!(check_dnls_ladder(0.5, 2.0, 1.0, &ns, 10.0).is_err());
    assert!(check_nls_ladder(-0.2, 2.0, 0.0, &ns, 50.0).is_err());
    assert!(check_nls_ladder(-0.2, 2.0, 1.0, &[], 50.0).is_err());
}

#[test]
fn dnls_ladder_rows_share_alpha_and_keep_a_floor() {
    let tab = illposed_dnls_experiment(0.4, 2.0, 1.0, &[20.0, 40.0, 80.0], 10.0).unwrap();
    assert_eq!(tab.rows.len(), 3);
    let d = tab.data_distances();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    let sol = tab.solution_distances();
    assert!(sol.iter().all(|&s| s >= 0.5 * sol[0]));
    for r in &tab.rows {
        assert!((r.alpha - r.alpha_prime).abs() < 1e-12);
    }
}

#[test]
fn nls_ladder_rows_are_sorted_and_reproducible() {
    let a = illposed_nls_experiment(-0.2, 2.0, 1.0, &[80.0, 20.0, 40.0], 50.0).unwrap();
    let b = illposed_nls_experiment(-0.2, 2.0, 1.0, &[20.0, 40.0, 80.0], 50.0).unwrap();
    assert_eq!(a, b);
    assert!(a.rows.windows(2).all(|w| w[0].n < w[1].n));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn soliton_modulus_travels_at_twice_the_frequency(n in -2.0f64..2.0, w in 0.5f64..2.0, t in 0.0f64..1.0, x in -5.0f64..5.0) {
        let p = NlsSolitonParams::new(n, w).unwrap();
        let moved = p.value(x + 2.0 * n * t, t).norm();
        prop_assert!((moved - p.value(x, 0.0).norm()).abs() < 1e-12);
    }

    #[test]
    fn derivative_family_modulus_is_a_travelling_wave(n in 0.0f64..1.5, t in 0.0f64..1.0, x in -5.0f64..5.0) {
        let p = DnlsFamilyParams::new(n, 1.0).unwrap();
        let moved = p.value(x + n * t, t).norm();
        prop_assert!((moved - p.value(x, 0.0).norm()).abs() < 1e-12);
    }
}
