use dispersive_lab::exact::{dnls_family, nls_soliton, DnlsFamilyParams, NlsSolitonParams};
use dispersive_lab::solvers::{
    equation_rhs, pde_residual, solve, solve_dnls_via_gauge, EquationId, Scheme, SolverConfig, Trajectory,
};
use dispersive_lab::spectral::{free_propagate, PhaseSign, SampledField, SpaceGrid};
use num_complex::Complex64;

fn grid() -> SpaceGrid {
    SpaceGrid::new(64.0, 512).unwrap()
}

#[test]
fn zero_data_stays_zero() {
    let u0 = SampledField::zeros(grid());
    let tr = solve(&u0, EquationId::Nls101, &SolverConfig::new(1e-2, 10).unwrap()).unwrap();
    assert_eq!(tr.last().max_abs(), 0.0);
}

#[test]
fn tiny_data_follow_the_free_flow() {
    let u0 = SampledField::from_fn(grid(), |x| Complex64::new(1e-6 * (-x * x).exp(), 0.0)).unwrap();
    let tr = solve(&u0, EquationId::Nls101, &SolverConfig::to_horizon(0.5, 1e-2).unwrap()).unwrap();
    let free = free_propagate(&u0, 0.5, PhaseSign::Plus).unwrap();
    assert!(tr.last().sub(&free).unwrap().l2_norm() < 1e-15);
}

#[test]
fn lie_splitting_is_first_order_and_strang_second() {
    let p = NlsSolitonParams::new(1.0, 1.0).unwrap();
    let (u0, exact) = (nls_soliton(&p, grid(), 0.0).unwrap(), nls_soliton(&p, grid(), 0.25).unwrap());
    let err = |dt: f64, scheme: Scheme| {
        let cfg = SolverConfig::to_horizon(0.25, dt).unwrap().with_scheme(scheme);
        solve(&u0, EquationId::Nls101, &cfg).unwrap().last().sub(&exact).unwrap().l2_norm()
    };
    let lie = err(2e-3, Scheme::Lie) / err(1e-3, Scheme::Lie);
    let strang = err(2e-3, Scheme::Strang) / err(1e-3, Scheme::Strang);
    assert!((1.7..2.3).contains(&lie), "{lie}");
    assert!((3.5..4.5).contains(&strang), "{strang}");
}

#[test]
fn save_times_are_honoured() {
    let p = NlsSolitonParams::new(0.0, 1.0).unwrap();
    let u0 = nls_soliton(&p, grid(), 0.0).unwrap();
    let cfg = SolverConfig::to_horizon(0.2, 1e-3).unwrap().with_uniform_saves(5).unwrap();
    let tr = solve(&u0, EquationId::Nls101, &cfg).unwrap();
    assert_eq!(tr.times.len(), 5);
    for (t, snap) in tr.times.iter().zip(&tr.snapshots) {
        let exact = nls_soliton(&p, grid(), *t).unwrap();
        assert!(snap.sub(&exact).unwrap().l2_norm() < 1e-5, "t = {t}");
    }
}

#[test]
fn exact_families_have_small_residuals() {
    let g = SpaceGrid::new(64.0, 1024).unwrap();
    let h = 1e-3;
    let times: Vec<f64> = (0..7).map(|k| k as f64 * h).collect();
    let p = NlsSolitonParams::new(0.5, 1.5).unwrap();
    let snaps = times.iter().map(|&t| nls_soliton(&p, g, t).unwrap()).collect();
    let tr = Trajectory::from_snapshots(times.clone(), snaps).unwrap();
    assert!(pde_residual(&tr, EquationId::Nls101).unwrap() < 1e-6);
    // The NLS soliton does not solve the derivative equation.
    assert!(pde_residual(&tr, EquationId::Dnls109).unwrap() > 1e-2);
    let q = DnlsFamilyParams::new(1.0, 1.0).unwrap();
    let snaps = times.iter().map(|&t| dnls_family(&q, g, t).unwrap()).collect();
    let tr = Trajectory::from_snapshots(times, snaps).unwrap();
    assert!(pde_residual(&tr, EquationId::Dnls109).unwrap() < 1e-6);
}

#[test]
fn gauge_pipeline_and_direct_solve_agree() {
    let g = SpaceGrid::new(64.0, 1024).unwrap();
    let q = DnlsFamilyParams::new(0.0, 1.0).unwrap();
    let u0 = dnls_family(&q, g, 0.0).unwrap();
    let cfg = SolverConfig::to_horizon(0.05, 1.25e-4).unwrap();
    let a = solve_dnls_via_gauge(&u0, &cfg).unwrap();
    let b = solve(&u0, EquationId::Dnls109, &cfg).unwrap();
    let exact = dnls_family(&q, g, 0.05).unwrap();
    assert!(a.last().sub(&exact).unwrap().l2_norm() < 1e-4);
    assert!(a.last().sub(b.last()).unwrap().l2_norm() < 1e-4);
    assert!(a.relative_mass_drift() < 1e-8);
}

#[test]
fn rhs_of_the_cubic_equation() {
    let u = SampledField::from_fn(grid(), |x| Complex64::new((-x * x).exp(), 0.0)).unwrap();
    let rhs = equation_rhs(&u, EquationId::Nls101).unwrap();
    // i u_xx + i |u|^2 u at x = 0 with u = e^{-x^2}: i(-2) + i.
    let mid = grid().points() / 2;
    assert!(grid().x(mid).abs() < 1e-12);
    assert!((rhs.values()[mid] - Complex64::new(0.0, -1.0)).norm() < 1e-8);
}

#[test]
fn bad_configs_are_rejected() {
    assert!(SolverConfig::new(0.0, 10).is_err());
    assert!(SolverConfig::new(f64::NAN, 10).is_err());
    assert!(SolverConfig::to_horizon(-1.0, 1e-3).is_err());
    assert!("euler".parse::<Scheme>().is_err());
    assert_eq!("lie".parse::<Scheme>().unwrap(), Scheme::Lie);
}
