//! The named pipelines, their documented keys, and their CSV schemas.

use std::f64::consts::PI;

use dispersive_lab::data::{random_data_stream, DataProfile, ProfileKind};
use dispersive_lab::estimates::{
    check_bilinear_identity_with, ensemble_sup_ratio_with, trilinear_fft_route, trilinear_quadrature_with,
    EstimateId, EstimateTag, FftRouteSetup, Harness, IdentitySetup, QuadratureOptions,
};
use dispersive_lab::exact::{
    check_dnls_ladder, check_nls_ladder, illposed_dnls_experiment, illposed_nls_experiment, nls_soliton,
    NlsSolitonParams, SeparationTable,
};
use dispersive_lab::gauge::{gauge_forward, gauge_inverse, gauge_lipschitz_ensemble};
use dispersive_lab::globalizer::{
    check_growth_r, check_splitting_exponents, growth_experiment, iterate_vw, splitting_bounds_check, stepwidth,
    StepRule, BAND_LEAK_LIMIT,
};
use dispersive_lab::norms::{dual, FourierLebesgueSpec};
use dispersive_lab::solvers::{dealias_leakage, solve, EquationId, Scheme, SolverConfig};
use dispersive_lab::spectral::{inverse_fourier, SampledField, SpaceGrid, SpectralField};
use dispersive_lab::{LabError, Result};
use num_complex::Complex64;

use crate::config::{key, ConfigError, Default as D, ExperimentConfig, KeySpec, Kind as K};
use crate::csvout::{Cell, Table};

/// Files produced by a pipeline, in write order.
pub type Outputs = Vec<(String, Table)>;

/// A validated pipeline waiting to run.
pub type Plan = Box<dyn FnOnce() -> Result<Outputs> + Send>;

/// A named experiment.
pub struct ExperimentSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub keys: &'static [KeySpec],
    prepare: fn(&ExperimentConfig) -> Result<Plan>,
}

impl ExperimentSpec {
    /// Check key names and types, then every module precondition, without computing anything.
    pub fn plan(&self, cfg: &ExperimentConfig) -> std::result::Result<Plan, PlanError> {
        cfg.check_keys(self.name, self.keys)?;
        Ok((self.prepare)(cfg)?)
    }
}

/// Why a configuration cannot run.
#[derive(Debug, thiserror::Error)]
pub enum PlanError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Lab(#[from] LabError),
}

fn invalid(name: &'static str, reason: impl Into<String>) -> LabError {
    LabError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

fn count(cfg: &ExperimentConfig, k: &'static str, default: u64) -> Result<usize> {
    let v = cfg.int(k, default);
    if v == 0 {
        return Err(invalid(k, "must be at least 1"));
    }
    usize::try_from(v).map_err(|_| invalid(k, "too large"))
}

const PROFILE_KEYS: [KeySpec; 4] = [
    key("profile", K::Text, D::Text("gaussian"), "data profile: gaussian, bump, modulated-bump, white-spectrum, power-law, soliton-like"),
    key("amplitude", K::Float, D::Float(1.0), "profile amplitude"),
    key("modulation", K::Float, D::Float(1.0), "modulation frequency of modulated profiles"),
    key("beta", K::Float, D::Float(0.6), "power-law exponent"),
];

fn profile(cfg: &ExperimentConfig, default_tag: &str) -> Result<DataProfile> {
    let mut p = DataProfile::from_tag(
        &cfg.text("profile", default_tag),
        cfg.float("amplitude", 1.0),
        cfg.float("modulation", 1.0),
        cfg.float("beta", 0.6),
    )?;
    if let (ProfileKind::PowerLaw { beta, .. }, Some(cutoff)) = (p.kind, cfg.float_opt("cutoff")) {
        p.kind = ProfileKind::PowerLaw { beta, cutoff };
    }
    // Drawing once on a tiny lattice runs the profile's own validation.
    random_data_stream(&p, 0, 0, SpaceGrid::new(1.0, 2)?)?;
    Ok(p)
}

fn grid(cfg: &ExperimentConfig, length: f64, points: u64) -> Result<SpaceGrid> {
    SpaceGrid::new(cfg.float("length", length), count(cfg, "points", points)?)
}

// verify-bilinear

const BILINEAR_KEYS: &[KeySpec] = &[
    key("length", K::Float, D::Float(64.0 * PI), "box length L"),
    key("points", K::Int, D::Int(1024), "lattice points n"),
    key("span", K::Float, D::Float(50.0), "time window length T_w"),
    key("count", K::Int, D::Int(1024), "time samples m"),
    key("p", K::Float, D::Float(2.0), "exponent p of I^{1/p}"),
    PROFILE_KEYS[0],
    PROFILE_KEYS[1],
    PROFILE_KEYS[2],
    PROFILE_KEYS[3],
    key("threshold", K::Float, D::Float(0.1), "compare where rhs > threshold * max rhs"),
    key("min_abs_xi", K::Float, D::Float(0.5), "compare where |xi| >= min_abs_xi"),
];

/// Spectral indicator of `[a, b]`, endpoints included up to lattice roundoff.
pub fn spectral_indicator(grid: SpaceGrid, a: f64, b: f64) -> Result<SampledField> {
    let tol = 1e-9 * grid.dxi();
    let spec = SpectralField::from_fn(grid, |xi| {
        Complex64::new(if xi >= a - tol && xi <= b + tol { 1.0 } else { 0.0 }, 0.0)
    })?;
    inverse_fourier(&spec)
}

fn prepare_bilinear(cfg: &ExperimentConfig) -> Result<Plan> {
    let grid = grid(cfg, 64.0 * PI, 1024)?;
    let span = cfg.float("span", 50.0);
    let setup = IdentitySetup {
        span,
        count: count(cfg, "count", 1024)?,
        flat: 0.3 * span,
        ramp: 0.19 * span,
        threshold: cfg.float("threshold", 0.1),
        min_abs_xi: cfg.float("min_abs_xi", 0.5),
    };
    setup.window()?.check_fits(&setup.times()?)?;
    let p = cfg.float("p", 2.0);
    if !(p.is_finite() && p > 1.0) {
        return Err(invalid("p", format!("must lie in (1, inf), got {p}")));
    }
    let (u0, v0) = if cfg.text("profile", "gaussian") == "indicator" {
        (spectral_indicator(grid, -1.0, 1.0)?, spectral_indicator(grid, -0.5, 1.5)?)
    } else {
        let prof = profile(cfg, "gaussian")?;
        (random_data_stream(&prof, cfg.seed(), 0, grid)?, random_data_stream(&prof, cfg.seed(), 1, grid)?)
    };
    Ok(Box::new(move || {
        let rep = check_bilinear_identity_with(&u0, &v0, p, &setup)?;
        let mut t = Table::new(vec!["xi", "lhs", "rhs", "fitted_c", "rel_dev"]);
        for i in (0..rep.xi.len()).filter(|&i| rep.compared[i]) {
            t.push(vec![rep.xi[i].into(), rep.lhs[i].into(), rep.rhs[i].into(), rep.fitted_c.into(), rep.rel_dev(i).into()]);
        }
        Ok(vec![("verify-bilinear.csv".into(), t)])
    }))
}

// verify-trilinear

const TRILINEAR_KEYS: &[KeySpec] = &[
    key("length", K::Float, D::Float(1024.0), "box length L"),
    key("points", K::Int, D::Int(4096), "lattice points n"),
    key("span", K::Float, D::Float(200.0), "time window length T_w"),
    key("count", K::Int, D::Int(4096), "time samples m"),
    key("xi_list", K::FloatList, D::Floats(&[-1.0, -0.5, 0.0, 0.5, 1.0]), "probe frequencies xi"),
    key("tau_list", K::FloatList, D::Floats(&[-3.0, -1.5, 0.25, 1.0, 2.5]), "probe frequencies tau"),
    key("min_gap", K::Float, D::Float(0.5), "skip probes with |tau + xi^2| < min_gap"),
];

fn prepare_trilinear(cfg: &ExperimentConfig) -> Result<Plan> {
    let span = cfg.float("span", 200.0);
    let setup = FftRouteSetup {
        length: cfg.float("length", 1024.0),
        points: count(cfg, "points", 4096)?,
        span,
        count: count(cfg, "count", 4096)?,
        flat: 0.3 * span,
        ramp: 0.175 * span,
    };
    let grid = setup.grid()?;
    let (times, window) = (setup.times()?, setup.window()?);
    window.check_fits(&times)?;
    let gap = cfg.float("min_gap", 0.5);
    let probes: Vec<(f64, f64)> = cfg
        .floats("xi_list", &[-1.0, -0.5, 0.0, 0.5, 1.0])
        .into_iter()
        .flat_map(|xi| cfg.floats("tau_list", &[-3.0, -1.5, 0.25, 1.0, 2.5]).into_iter().map(move |tau| (xi, tau)))
        .filter(|(xi, tau)| (tau + xi * xi).abs() >= gap)
        .collect();
    if probes.is_empty() {
        return Err(invalid("xi_list", "no probe clears min_gap"));
    }
    let prof = DataProfile::gaussian(1.0);
    let seed = cfg.seed();
    let (u0, v0, w0) = (
        random_data_stream(&prof, seed, 0, grid)?,
        random_data_stream(&prof, seed, 1, grid)?,
        random_data_stream(&prof, seed, 2, grid)?,
    );
    Ok(Box::new(move || {
        let fft = trilinear_fft_route(&u0, &v0, &w0, times, window, &probes)?;
        let opts = QuadratureOptions::default();
        let mut t = Table::new(vec!["xi", "tau", "quad_re", "quad_im", "fft_re", "fft_im", "rel_err"]);
        for ((xi, tau), f) in fft {
            let q = trilinear_quadrature_with(&u0, &v0, &w0, xi, tau, &opts)?.value;
            let err = (f - q).norm() / q.norm();
            t.push(vec![xi.into(), tau.into(), q.re.into(), q.im.into(), f.re.into(), f.im.into(), err.into()]);
        }
        Ok(vec![("verify-trilinear.csv".into(), t)])
    }))
}

// estimate-sweep

const ESTIMATE_KEYS: &[KeySpec] = &[
    key("estimate", K::Text, D::Text("FS102"), "estimate tag"),
    key("trials", K::Int, D::Int(100), "ensemble size"),
    key("refine", K::Int, D::Int(1), "refinement factor of the baseline harness"),
    key("rungs", K::Int, D::Int(3), "resolution ladder rungs for the argmax trial"),
    PROFILE_KEYS[0],
    PROFILE_KEYS[1],
    PROFILE_KEYS[2],
    PROFILE_KEYS[3],
    key("p", K::Float, D::Derived("estimate menu"), "exponent p"),
    key("q", K::Float, D::Derived("estimate menu"), "exponent q"),
    key("r", K::Float, D::Derived("estimate menu"), "exponent r"),
    key("r0", K::Float, D::Derived("estimate menu"), "exponent r0"),
    key("r1", K::Float, D::Derived("estimate menu"), "exponent r1"),
    key("r2", K::Float, D::Derived("estimate menu"), "exponent r2"),
    key("s", K::Float, D::Derived("estimate menu"), "regularity s"),
    key("b", K::Float, D::Derived("estimate menu"), "modulation exponent b"),
    key("b1", K::Float, D::Derived("estimate menu"), "modulation exponent b1"),
    key("b2", K::Float, D::Derived("estimate menu"), "modulation exponent b2"),
    key("b_prime", K::Float, D::Derived("estimate menu"), "modulation exponent b'"),
    key("rho", K::Float, D::Derived("estimate menu"), "exponent rho"),
    key("rho0", K::Float, D::Derived("estimate menu"), "exponent rho0"),
    key("eps", K::Float, D::Derived("estimate menu"), "offset standing in for 0+"),
];

fn prepare_estimate(cfg: &ExperimentConfig) -> Result<Plan> {
    let tag: EstimateTag = cfg.text("estimate", "FS102").parse()?;
    let mut id = EstimateId::new(tag);
    let pm = &mut id.params;
    for (k, slot) in [
        ("p", &mut pm.p),
        ("q", &mut pm.q),
        ("r", &mut pm.r),
        ("r0", &mut pm.r0),
        ("r1", &mut pm.r1),
        ("r2", &mut pm.r2),
        ("s", &mut pm.s),
        ("b", &mut pm.b),
        ("b1", &mut pm.b1),
        ("b2", &mut pm.b2),
        ("b_prime", &mut pm.b_prime),
        ("rho", &mut pm.rho),
        ("rho0", &mut pm.rho0),
        ("eps", &mut pm.eps),
    ] {
        if let Some(v) = cfg.float_opt(k) {
            *slot = v;
        }
    }
    id.check_hypotheses()?;
    let trials = count(cfg, "trials", 100)?;
    let refine = count(cfg, "refine", 1)?;
    let rungs = count(cfg, "rungs", 3)?;
    let prof = profile(cfg, "gaussian")?;
    let harness = Harness::baseline().refined(refine);
    let seed = cfg.seed();
    Ok(Box::new(move || {
        let rep = ensemble_sup_ratio_with(&id, trials, seed, &prof, &harness, rungs)?;
        let mut t = Table::new(vec!["kind", "trial", "ratio"]);
        for (k, r) in rep.ratios.iter().enumerate() {
            match r {
                Some(r) => t.push(vec!["trial".into(), k.into(), (*r).into()]),
                None => t.push(vec!["failed".into(), k.into(), f64::NAN.into()]),
            }
        }
        t.push(vec!["max".into(), rep.argmax.into(), rep.max_ratio.into()]);
        t.push(vec!["min".into(), Cell::Empty, rep.min_ratio().into()]);
        t.push(vec!["mean".into(), Cell::Empty, rep.mean_ratio().into()]);
        for (n, r) in &rep.ladder {
            t.push(vec!["ladder".into(), (*n).into(), (*r).into()]);
        }
        t.push(vec!["ladder_drift".into(), Cell::Empty, rep.ladder_drift().into()]);
        Ok(vec![("estimate-sweep.csv".into(), t)])
    }))
}

// soliton-oracle

const SOLITON_KEYS: &[KeySpec] = &[
    key("length", K::Float, D::Float(64.0), "box length L"),
    key("points", K::Int, D::Int(512), "lattice points n"),
    key("n_soliton", K::Float, D::Float(0.0), "soliton speed parameter N"),
    key("omega", K::Float, D::Float(1.0), "soliton width parameter omega"),
    key("horizon", K::Float, D::Float(0.5), "final time"),
    key("dt", K::Float, D::Float(2e-3), "coarsest time step"),
    key("levels", K::Int, D::Int(4), "number of halvings of dt"),
    key("scheme", K::Text, D::Text("strang"), "splitting scheme: strang or lie"),
];

fn prepare_soliton(cfg: &ExperimentConfig) -> Result<Plan> {
    let grid = grid(cfg, 64.0, 512)?;
    let params = NlsSolitonParams::new(cfg.float("n_soliton", 0.0), cfg.float("omega", 1.0))?;
    let horizon = cfg.float("horizon", 0.5);
    let dt = cfg.float("dt", 2e-3);
    let levels = count(cfg, "levels", 4)?;
    let scheme: Scheme = cfg.text("scheme", "strang").parse()?;
    let configs = (0..levels)
        .map(|k| Ok(SolverConfig::to_horizon(horizon, dt / 2f64.powi(k as i32))?.with_scheme(scheme)))
        .collect::<Result<Vec<_>>>()?;
    let u0 = nls_soliton(&params, grid, 0.0)?;
    let exact = nls_soliton(&params, grid, horizon)?;
    Ok(Box::new(move || {
        let mut t = Table::new(vec!["dt", "error", "ratio", "mass_drift"]);
        let mut prev: Option<f64> = None;
        for c in configs {
            let traj = solve(&u0, EquationId::Nls101, &c)?;
            let err = traj.last().sub(&exact)?.l2_norm();
            let ratio = prev.map_or(f64::NAN, |p| p / err);
            t.push(vec![c.dt.into(), err.into(), ratio.into(), traj.relative_mass_drift().into()]);
            prev = Some(err);
        }
        Ok(vec![("soliton-oracle.csv".into(), t)])
    }))
}

// gauge-roundtrip

const GAUGE_KEYS: &[KeySpec] = &[
    key("length", K::Float, D::Float(60.0), "box length L"),
    key("points", K::Int, D::Int(1024), "lattice points n"),
    key("pairs", K::Int, D::Int(50), "ensemble pairs"),
    PROFILE_KEYS[0],
    PROFILE_KEYS[1],
    PROFILE_KEYS[2],
    PROFILE_KEYS[3],
    key("s", K::Float, D::Float(0.5), "regularity of the Fourier-Lebesgue ball"),
    key("r", K::Float, D::Float(2.0), "exponent of the Fourier-Lebesgue ball"),
    key("radius", K::Float, D::Float(1.0), "ball radius"),
];

fn prepare_gauge(cfg: &ExperimentConfig) -> Result<Plan> {
    let grid = grid(cfg, 60.0, 1024)?;
    let pairs = count(cfg, "pairs", 50)?;
    let prof = profile(cfg, "gaussian")?;
    let (s, r, radius) = (cfg.float("s", 0.5), cfg.float("r", 2.0), cfg.float("radius", 1.0));
    FourierLebesgueSpec::new(s, r)?;
    if !(0.5..=1.0).contains(&s) {
        return Err(invalid("s", format!("probe covers s in [1/2, 1], got {s}")));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid("radius", "must be finite and > 0"));
    }
    let seed = cfg.seed();
    Ok(Box::new(move || {
        let ens = gauge_lipschitz_ensemble(&prof, pairs, seed, grid, s, r, radius)?;
        let mut t = Table::new(vec!["pair", "modulus_error", "roundtrip_error", "lipschitz_ratio"]);
        for (k, ratio) in ens.ratios.iter().enumerate() {
            let f = random_data_stream(&prof, seed, 2 * k as u64, grid)?;
            let g = gauge_forward(&f)?;
            let modulus = f.values().iter().zip(g.values()).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max);
            let back = gauge_inverse(&g)?.sub(&f)?.max_abs();
            t.push(vec![k.into(), modulus.into(), back.into(), (*ratio).into()]);
        }
        Ok(vec![("gauge-roundtrip.csv".into(), t)])
    }))
}

// illposed-nls, illposed-dnls

const NLS_LADDER_KEYS: &[KeySpec] = &[
    key("s", K::Float, D::Float(-0.2), "regularity s"),
    key("r", K::Float, D::Float(2.0), "exponent r"),
    key("t_final", K::Float, D::Float(1.0), "final time T"),
    key("c", K::Float, D::Float(50.0), "offset constant C"),
    key("n_list", K::FloatList, D::Floats(&[20.0, 40.0, 80.0, 160.0]), "frequencies N"),
];

const DNLS_LADDER_KEYS: &[KeySpec] = &[
    key("s", K::Float, D::Float(0.4), "regularity s"),
    key("r", K::Float, D::Float(2.0), "exponent r"),
    key("t_final", K::Float, D::Float(1.0), "final time T"),
    key("c", K::Float, D::Float(10.0), "offset constant C"),
    key("n_list", K::FloatList, D::Floats(&[20.0, 40.0, 80.0, 160.0]), "frequencies N"),
];

fn separation_table(tab: &SeparationTable) -> Table {
    let mut t = Table::new(vec![
        "n",
        "n_prime",
        "omega",
        "omega_prime",
        "width",
        "width_prime",
        "alpha",
        "alpha_prime",
        "data_distance",
        "solution_distance",
        "separation",
        "flagged",
        "length",
        "points",
    ]);
    for r in &tab.rows {
        t.push(vec![
            r.n.into(),
            r.n_prime.into(),
            r.omega.into(),
            r.omega_prime.into(),
            r.width.into(),
            r.width_prime.into(),
            r.alpha.into(),
            r.alpha_prime.into(),
            r.data_distance.into(),
            r.solution_distance.into(),
            r.separation.into(),
            r.flagged.into(),
            r.length.into(),
            r.points.into(),
        ]);
    }
    t
}

fn ladder_args(cfg: &ExperimentConfig, s: f64, c: f64) -> (f64, f64, f64, Vec<f64>, f64) {
    (
        cfg.float("s", s),
        cfg.float("r", 2.0),
        cfg.float("t_final", 1.0),
        cfg.floats("n_list", &[20.0, 40.0, 80.0, 160.0]),
        cfg.float("c", c),
    )
}

fn prepare_illposed_nls(cfg: &ExperimentConfig) -> Result<Plan> {
    let (s, r, t, ns, c) = ladder_args(cfg, -0.2, 50.0);
    check_nls_ladder(s, r, t, &ns, c)?;
    Ok(Box::new(move || {
        let tab = illposed_nls_experiment(s, r, t, &ns, c)?;
        Ok(vec![("illposed-nls.csv".into(), separation_table(&tab))])
    }))
}

fn prepare_illposed_dnls(cfg: &ExperimentConfig) -> Result<Plan> {
    let (s, r, t, ns, c) = ladder_args(cfg, 0.4, 10.0);
    check_dnls_ladder(s, r, t, &ns, c)?;
    Ok(Box::new(move || {
        let tab = illposed_dnls_experiment(s, r, t, &ns, c)?;
        Ok(vec![("illposed-dnls.csv".into(), separation_table(&tab))])
    }))
}

// globalize

const GLOBALIZE_KEYS: &[KeySpec] = &[
    key("length", K::Float, D::Float(64.0), "box length L"),
    key("points", K::Int, D::Int(1024), "lattice points n"),
    key("profile", K::Text, D::Text("power-law"), "data profile"),
    PROFILE_KEYS[1],
    PROFILE_KEYS[2],
    PROFILE_KEYS[3],
    key("cutoff", K::Float, D::Float(30.0), "spectral cutoff of the power-law profile"),
    key("threshold", K::Float, D::Float(8.0), "splitting threshold N"),
    key("r", K::Float, D::Float(2.0), "data exponent r"),
    key("rho", K::Float, D::Float(1.5), "exponent rho of the small-part bound"),
    key("horizon", K::Float, D::Float(2.0), "final time"),
    key("dt", K::Float, D::Float(1e-3), "time step"),
    key("rule_c", K::Float, D::Float(0.25), "stepwidth constant c"),
    key("eps", K::Float, D::Float(0.01), "stepwidth 0+ offset"),
];

fn prepare_globalize(cfg: &ExperimentConfig) -> Result<Plan> {
    let grid = grid(cfg, 64.0, 1024)?;
    let prof = with_default_cutoff(cfg, profile(cfg, "power-law")?, 30.0);
    let n = cfg.float("threshold", 8.0);
    if !(n.is_finite() && n > 0.0) {
        return Err(invalid("threshold", format!("must be finite and > 0, got {n}")));
    }
    let (r, rho) = (cfg.float("r", 2.0), cfg.float("rho", 1.5));
    check_growth_r(r)?;
    check_splitting_exponents(r, rho)?;
    let rule = StepRule {
        c: cfg.float("rule_c", 0.25),
        eps: cfg.float("eps", 0.01),
    };
    stepwidth(1.0, rule.c, rule.eps)?;
    let horizon = cfg.float("horizon", 2.0);
    let solver = SolverConfig::to_horizon(horizon, cfg.float("dt", 1e-3))?;
    let u0 = random_data_stream(&prof, cfg.seed(), 0, grid)?;
    Ok(Box::new(move || {
        let b = splitting_bounds_check(&u0, n, r, rho)?;
        let mut bounds = Table::new(vec![
            "threshold",
            "r",
            "rho",
            "data_norm",
            "small_lhs",
            "small_rhs",
            "small_ratio",
            "large_lhs",
            "large_rhs",
            "large_ratio",
            "large_lhs_x",
        ]);
        bounds.push(vec![
            b.threshold.into(),
            b.r.into(),
            b.rho.into(),
            b.data_norm.into(),
            b.small_lhs.into(),
            b.small_rhs.into(),
            b.small_ratio.into(),
            b.large_lhs.into(),
            b.large_rhs.into(),
            b.large_ratio.into(),
            b.large_lhs_x.into(),
        ]);
        let rep = iterate_vw(&u0, n, r, horizon, &solver, rule)?;
        let mut steps =
            Table::new(vec!["start", "width", "v_start", "v_end", "y_norm", "v_restart", "increment", "w_end"]);
        for s in &rep.steps {
            steps.push(vec![
                s.start.into(),
                s.width.into(),
                s.v_start.into(),
                s.v_end.into(),
                s.y_norm.into(),
                s.v_restart.into(),
                s.increment.into(),
                s.w_end.into(),
            ]);
        }
        let mut summary = Table::new(vec!["u_le_norm", "u_gt_norm", "u_gt_bound", "steps", "sum_error"]);
        summary.push(vec![
            rep.u_le_norm.into(),
            rep.u_gt_norm.into(),
            rep.u_gt_bound.into(),
            rep.steps.len().into(),
            rep.sum_error.into(),
        ]);
        Ok(vec![
            ("globalize-bounds.csv".into(), bounds),
            ("globalize-steps.csv".into(), steps),
            ("globalize-summary.csv".into(), summary),
        ])
    }))
}

fn with_default_cutoff(cfg: &ExperimentConfig, mut p: DataProfile, cutoff: f64) -> DataProfile {
    if let (ProfileKind::PowerLaw { beta, .. }, None) = (p.kind, cfg.float_opt("cutoff")) {
        p.kind = ProfileKind::PowerLaw { beta, cutoff };
    }
    p
}

// growth

const GROWTH_KEYS: &[KeySpec] = &[
    key("length", K::Float, D::Float(1024.0), "box length L"),
    key("points", K::Int, D::Int(8192), "lattice points n"),
    key("profile", K::Text, D::Text("power-law"), "data profile"),
    PROFILE_KEYS[1],
    PROFILE_KEYS[2],
    key("beta", K::Float, D::Derived("1/r' + 0.1"), "power-law exponent"),
    key("cutoff", K::Float, D::Float(10.0), "spectral cutoff of the power-law profile"),
    key("r", K::Float, D::Float(2.0), "data exponent r"),
    key("horizon", K::Float, D::Float(20.0), "final time"),
    key("dt", K::Float, D::Float(2e-3), "time step"),
];

/// Power-law exponent used when `beta` is not set: `1/r' + 0.1`.
pub fn growth_beta(r: f64) -> f64 {
    1.0 / dual(r) + 0.1
}

fn prepare_growth(cfg: &ExperimentConfig) -> Result<Plan> {
    let grid = grid(cfg, 1024.0, 8192)?;
    let r = cfg.float("r", 2.0);
    check_growth_r(r)?;
    let mut prof = profile(cfg, "power-law")?;
    if let ProfileKind::PowerLaw { .. } = prof.kind {
        prof.kind = ProfileKind::PowerLaw {
            beta: cfg.float_opt("beta").unwrap_or(growth_beta(r)),
            cutoff: cfg.float("cutoff", 10.0),
        };
    }
    let horizon = cfg.float("horizon", 20.0);
    let solver = SolverConfig::to_horizon(horizon, cfg.float("dt", 2e-3))?;
    let u0 = random_data_stream(&prof, cfg.seed(), 0, grid)?;
    let leak = dealias_leakage(&u0);
    if leak > BAND_LEAK_LIMIT {
        return Err(invalid("cutoff", format!("data reach beyond the 2/3 band ({leak:e} of the peak)")));
    }
    Ok(Box::new(move || {
        let rep = growth_experiment(&u0, r, horizon, &solver)?;
        let mut values = Table::new(vec!["t", "z_norm"]);
        for (t, v) in rep.times.iter().zip(&rep.values) {
            values.push(vec![(*t).into(), (*v).into()]);
        }
        let mut summary = Table::new(vec![
            "r",
            "predicted",
            "slope",
            "fit_points",
            "fit_start",
            "fit_end",
            "horizon",
            "data_mass",
            "mass_drift",
        ]);
        summary.push(vec![
            rep.r.into(),
            rep.predicted.into(),
            rep.slope.into(),
            rep.fit_points.into(),
            rep.fit_window.0.into(),
            rep.fit_window.1.into(),
            rep.horizon.into(),
            rep.data_mass.into(),
            rep.mass_drift.into(),
        ]);
        Ok(vec![("growth.csv".into(), values), ("growth-summary.csv".into(), summary)])
    }))
}

/// Every experiment, in the order `list-experiments` prints them.
pub const EXPERIMENTS: &[ExperimentSpec] = &[
    ExperimentSpec {
        name: "verify-bilinear",
        summary: "bilinear identity: L^{p'}_tau norm of F I^{1/p}(uv) against the spectral convolution",
        keys: BILINEAR_KEYS,
        prepare: prepare_bilinear,
    },
    ExperimentSpec {
        name: "verify-trilinear",
        summary: "trilinear transform: adaptive quadrature against the simulated space-time FFT",
        keys: TRILINEAR_KEYS,
        prepare: prepare_trilinear,
    },
    ExperimentSpec {
        name: "estimate-sweep",
        summary: "ensemble of lhs/rhs ratios for one estimate",
        keys: ESTIMATE_KEYS,
        prepare: prepare_estimate,
    },
    ExperimentSpec {
        name: "soliton-oracle",
        summary: "split-step solve of the cubic equation against the exact soliton, halving dt",
        keys: SOLITON_KEYS,
        prepare: prepare_soliton,
    },
    ExperimentSpec {
        name: "gauge-roundtrip",
        summary: "gauge transform modulus and round-trip errors with the Lipschitz probe",
        keys: GAUGE_KEYS,
        prepare: prepare_gauge,
    },
    ExperimentSpec {
        name: "illposed-nls",
        summary: "separation ladder of boosted cubic solitons",
        keys: NLS_LADDER_KEYS,
        prepare: prepare_illposed_nls,
    },
    ExperimentSpec {
        name: "illposed-dnls",
        summary: "separation ladder of the derivative-equation family",
        keys: DNLS_LADDER_KEYS,
        prepare: prepare_illposed_dnls,
    },
    ExperimentSpec {
        name: "globalize",
        summary: "splitting bounds and the stepwise rough/smooth bookkeeping",
        keys: GLOBALIZE_KEYS,
        prepare: prepare_globalize,
    },
    ExperimentSpec {
        name: "growth",
        summary: "growth of ||u(t) - e^{it d^2} u0|| for rough power-law data",
        keys: GROWTH_KEYS,
        prepare: prepare_growth,
    },
];

pub fn find(name: &str) -> std::result::Result<&'static ExperimentSpec, ConfigError> {
    EXPERIMENTS.iter().find(|e| e.name == name).ok_or_else(|| ConfigError::UnknownExperiment {
        name: name.to_string(),
        valid: EXPERIMENTS.iter().map(|e| e.name).collect::<Vec<_>>().join(", "),
    })
}
