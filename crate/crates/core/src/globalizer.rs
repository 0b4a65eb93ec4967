//! Fourier-threshold splitting of rough data, the norm bounds of the two parts,
//! the stepwidth rule, and the long-time growth of `z(t) = u(t) - e^{it d^2} u0`
//! for the cubic equation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::norms::{dual, fourier_lebesgue_norm_of_spectrum, FourierLebesgueSpec};
use crate::solvers::{dealias_leakage, solve, EquationId, SolverConfig};
use crate::spectral::{forward_fourier, free_propagate, inverse_fourier, PhaseSign, SampledField, SpectralField};
use crate::util::linear_fit;

/// Default `eps` standing in for the `0+` in exponents.
pub const DEFAULT_EPS: f64 = 0.01;

/// Largest spectral modulus outside the 2/3 band, relative to the peak, accepted by
/// [`growth_experiment`].
pub const BAND_LEAK_LIMIT: f64 = 1e-12;

/// Fit window for the growth slope.
pub const GROWTH_FIT_WINDOW: (f64, f64) = (1.0, 20.0);

/// `u0 = u_le + u_gt` with `u_le^ = u0^ 1{|u0^| <= 1/N}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitResult {
    pub u_le: SampledField,
    pub u_gt: SampledField,
    pub threshold: f64,
    /// Exact lattice spectra of the two parts; each coefficient of `u0^` lands in exactly one.
    pub le_spectrum: SpectralField,
    pub gt_spectrum: SpectralField,
}

fn check_threshold(n: f64) -> Result<()> {
    if !(n.is_finite() && n > 0.0) {
        return Err(LabError::param("N", format!("threshold must be finite and > 0, got {n}")));
    }
    Ok(())
}

fn threshold_spectrum(spec: &SpectralField, n: f64) -> Result<(SpectralField, SpectralField)> {
    let zero = Complex64::new(0.0, 0.0);
    let small = |c: &Complex64| c.norm() <= 1.0 / n;
    let le = spec.coefficients().iter().map(|c| if small(c) { *c } else { zero }).collect();
    let gt = spec.coefficients().iter().map(|c| if small(c) { zero } else { *c }).collect();
    Ok((SpectralField::new(*spec.grid(), le)?, SpectralField::new(*spec.grid(), gt)?))
}

/// Split `u0` by the modulus of its spectrum at level `1/N`.
pub fn split_data(u0: &SampledField, n: f64) -> Result<SplitResult> {
    check_threshold(n)?;
    let spec = forward_fourier(u0)?;
    let (le_spectrum, gt_spectrum) = threshold_spectrum(&spec, n)?;
    Ok(SplitResult {
        u_le: inverse_fourier(&le_spectrum)?,
        u_gt: inverse_fourier(&gt_spectrum)?,
        threshold: n,
        le_spectrum,
        gt_spectrum,
    })
}

/// Both sides of the two splitting bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplittingBounds {
    pub threshold: f64,
    pub r: f64,
    pub rho: f64,
    /// `||u0||_{L^r^}`, i.e. `||u0^||_{L^{r'}}`.
    pub data_norm: f64,
    /// `||u_le||_{L^rho^}` against `||u0||^{r'/rho'} N^{r'/rho' - 1}`.
    pub small_lhs: f64,
    pub small_rhs: f64,
    pub small_ratio: f64,
    /// `||u_gt^||_{L^2_xi}` against `||u0||^{r'/2} N^{r'/2 - 1}`.
    pub large_lhs: f64,
    pub large_rhs: f64,
    pub large_ratio: f64,
    /// `||u_gt||_{L^2_x} = ||u_gt^||_{L^2_xi} / sqrt(2 pi)` under our transform convention.
    pub large_lhs_x: f64,
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Hypotheses `1 < rho <= r <= 2` of the splitting bounds.
pub fn check_splitting_exponents(r: f64, rho: f64) -> Result<()> {
    if !(r > 1.0 && r <= 2.0) {
        return Err(LabError::Hypothesis {
            estimate: "splitting bounds",
            inequality: format!("1 < r <= 2 fails for r = {r}"),
        });
    }
    if !(rho > 1.0 && rho <= r) {
        return Err(LabError::Hypothesis {
            estimate: "splitting bounds",
            inequality: format!("1 < rho <= r fails for rho = {rho}, r = {r}"),
        });
    }
    Ok(())
}

/// Evaluate the convexity bound for `u_le` and the Chebyshev bound for `u_gt`.
pub fn splitting_bounds_check(u0: &SampledField, n: f64, r: f64, rho: f64) -> Result<SplittingBounds> {
    check_threshold(n)?;
    check_splitting_exponents(r, rho)?;
    let split = split_data(u0, n)?;
    let spec = forward_fourier(u0)?;
    let (rd, rhod) = (dual(r), dual(rho));
    let data_norm = fourier_lebesgue_norm_of_spectrum(&spec, FourierLebesgueSpec::new(0.0, r)?);
    let small_lhs = fourier_lebesgue_norm_of_spectrum(&split.le_spectrum, FourierLebesgueSpec::new(0.0, rho)?);
    let small_rhs = data_norm.powf(rd / rhod) * n.powf(rd / rhod - 1.0);
    let large_lhs = split.gt_spectrum.l2_norm();
    let large_rhs = data_norm.powf(rd / 2.0) * n.powf(rd / 2.0 - 1.0);
    Ok(SplittingBounds {
        threshold: n,
        r,
        rho,
        data_norm,
        small_lhs,
        small_rhs,
        small_ratio: ratio(small_lhs, small_rhs),
        large_lhs,
        large_rhs,
        large_ratio: ratio(large_lhs, large_rhs),
        large_lhs_x: split.u_gt.l2_norm(),
    })
}

/// Local existence time `c * mass^{-(4 + eps)}` for data whose rough part has `L^2` norm `mass`.
/// Zero mass needs no steps and returns `+inf`.
pub fn stepwidth(mass: f64, c: f64, eps: f64) -> Result<f64> {
    if !(mass.is_finite() && mass >= 0.0) {
        return Err(LabError::param("mass", format!("must be finite and >= 0, got {mass}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(LabError::param("c", format!("must be finite and > 0, got {c}")));
    }
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(LabError::param("eps", format!("must be finite and >= 0, got {eps}")));
    }
    if mass == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(c * mass.powf(-(4.0 + eps)))
}

/// Exponent `(r' - 2) / (10 - 4 r')` bounding the growth of `||z(t)||_{L^2}`.
pub fn predicted_growth_exponent(r: f64) -> Result<f64> {
    check_growth_r(r)?;
    let rd = dual(r);
    Ok((rd - 2.0) / (10.0 - 4.0 * rd))
}

/// Hypothesis `5/3 < r <= 2` of the growth bound.
pub fn check_growth_r(r: f64) -> Result<()> {
    if !(r > 5.0 / 3.0 && r <= 2.0) {
        return Err(LabError::Hypothesis {
            estimate: "growth bound",
            inequality: format!("5/3 < r <= 2 fails for r = {r}"),
        });
    }
    Ok(())
}

/// `||z(t_j)||_{L^2}` along a solve and its log-log tail slope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Slope of `log ||z||` against `log <t>` over `fit_window`.
    pub slope: f64,
    pub fit_points: usize,
    pub fit_window: (f64, f64),
    pub predicted: f64,
    pub r: f64,
    pub horizon: f64,
    pub data_mass: f64,
    pub mass_drift: f64,
    pub config: SolverConfig,
}

impl GrowthReport {
    /// Refit the tail slope on another window.
    pub fn refit(&self, window: (f64, f64)) -> Result<Self> {
        let (slope, fit_points) = tail_slope(&self.times, &self.values, window)?;
        Ok(Self {
            slope,
            fit_points,
            fit_window: window,
            ..self.clone()
        })
    }

    /// `||z||` at the save nearest to `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = (0..self.times.len())
            .min_by(|&a, &b| (self.times[a] - t).abs().total_cmp(&(self.times[b] - t).abs()))
            .unwrap_or(0);
        self.values[k]
    }
}

fn tail_slope(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<(f64, usize)> {
    let (x, y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 - 1e-12 && **t <= window.1 + 1e-12)
        .map(|(t, v)| ((1.0 + t * t).sqrt().ln(), v.ln()))
        .unzip();
    if x.len() < 5 {
        return Err(LabError::Insufficient(format!(
            "the growth fit needs at least 5 saves in [{}, {}], found {}",
            window.0,
            window.1,
            x.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(LabError::Insufficient("||z|| vanishes inside the fit window".into()));
    }
    Ok((linear_fit(&x, &y)?.0, x.len()))
}

/// Save times: the origin plus 64 geometrically spaced points ending at `horizon`.
fn growth_save_times(horizon: f64) -> Vec<f64> {
    let first = (horizon / 1000.0).min(0.01);
    let count = 64;
    let ratio = (horizon / first).powf(1.0 / (count - 1) as f64);
    std::iter::once(0.0)
        .chain((0..count).map(|k| if k + 1 == count { horizon } else { first * ratio.powi(k as i32) }))
        .collect()
}

/// Solve the cubic equation to `horizon` with the step and scheme of `cfg` and track `z`.
pub fn growth_experiment(u0: &SampledField, r: f64, horizon: f64, cfg: &SolverConfig) -> Result<GrowthReport> {
    check_growth_r(r)?;
    let predicted = predicted_growth_exponent(r)?;
    // the first dealiased step would strip such modes and z would record them as growth
    let leak = dealias_leakage(u0);
    if cfg.dealias && leak > BAND_LEAK_LIMIT {
        return Err(LabError::param(
            "u0",
            format!("spectrum reaches beyond the 2/3 band ({leak:e} of the peak, limit {BAND_LEAK_LIMIT:e})"),
        ));
    }
    let run = SolverConfig::to_horizon(horizon, cfg.dt)?
        .with_scheme(cfg.scheme)
        .with_dealias(cfg.dealias)
        .with_save_times(growth_save_times(horizon))?;
    let traj = solve(u0, EquationId::Nls101, &run)?;
    let values = traj
        .times
        .iter()
        .zip(&traj.snapshots)
        .map(|(t, u)| Ok(u.sub(&free_propagate(u0, *t, PhaseSign::Plus)?)?.l2_norm()))
        .collect::<Result<Vec<f64>>>()?;
    let fit_window = (GROWTH_FIT_WINDOW.0, GROWTH_FIT_WINDOW.1.min(horizon));
    let all_zero = values.iter().all(|v| *v == 0.0);
    let (slope, fit_points) = if all_zero {
        (0.0, 0)
    } else {
        tail_slope(&traj.times, &values, fit_window)?
    };
    Ok(GrowthReport {
        slope,
        fit_points,
        fit_window,
        predicted,
        r,
        horizon: run.horizon(),
        data_mass: u0.mass(),
        mass_drift: traj.relative_mass_drift(),
        times: traj.times,
        values,
        config: run,
    })
}

/// Constant and `0+` of the stepwidth rule used by [`iterate_vw`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepRule {
    pub c: f64,
    pub eps: f64,
}

impl Default for StepRule {
    fn default() -> Self {
        Self { c: 0.25, eps: DEFAULT_EPS }
    }
}

/// One local step of the rough/smooth bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VwStep {
    pub start: f64,
    pub width: f64,
    /// `||v(0)||` at the start of the step.
    pub v_start: f64,
    /// `||v(delta)||` before the restart.
    pub v_end: f64,
    /// `||y(delta)||` with `y(delta) = w(delta) - e^{i delta d^2} w(0)`.
    pub y_norm: f64,
    /// `||v(delta) + y(delta)||`, the rough data of the next step.
    pub v_restart: f64,
    /// `v_restart - v_start`.
    pub increment: f64,
    /// `||w(delta)||`.
    pub w_end: f64,
}

/// Ledger of [`iterate_vw`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VwReport {
    pub threshold: f64,
    pub r: f64,
    pub rule: StepRule,
    pub u_le_norm: f64,
    pub u_gt_norm: f64,
    /// `||u0||_{L^r^}^{r'/2} N^{r'/2 - 1}`, the a priori size of the rough part (spectral `L^2`).
    pub u_gt_bound: f64,
    pub steps: Vec<VwStep>,
    /// Step boundaries, starting at 0.
    pub times: Vec<f64>,
    pub v_norms: Vec<f64>,
    pub w_norms: Vec<f64>,
    /// Largest `||v + w - u_ref||` over the boundaries, with `u_ref` one uninterrupted solve.
    pub sum_error: f64,
}

/// Evolve the rough part by the cubic equation in steps of the stepwidth rule; the
/// smooth part is `w = u - v`, and each restart moves the nonlinear part `y` of `w` into `v`.
pub fn iterate_vw(
    u0: &SampledField,
    n: f64,
    r: f64,
    horizon: f64,
    cfg: &SolverConfig,
    rule: StepRule,
) -> Result<VwReport> {
    check_growth_r(r)?;
    let split = split_data(u0, n)?;
    let spec = forward_fourier(u0)?;
    let rd = dual(r);
    let data_norm = fourier_lebesgue_norm_of_spectrum(&spec, FourierLebesgueSpec::new(0.0, r)?);
    let dt = SolverConfig::to_horizon(horizon, cfg.dt)?.dt;
    let total = (horizon / dt).round() as usize;
    let local = |u: &SampledField, steps: usize| -> Result<SampledField> {
        let c = SolverConfig::new(dt, steps)?.with_scheme(cfg.scheme).with_dealias(cfg.dealias);
        Ok(solve(u, EquationId::Nls101, &c)?.last().clone())
    };

    let mut steps = Vec::new();
    let mut times = vec![0.0];
    let mut v_norms = vec![split.u_gt.l2_norm()];
    let mut w_norms = vec![split.u_le.l2_norm()];
    let mut pieces = Vec::new();
    let mut v = split.u_gt.clone();
    let mut u = u0.clone();
    let mut done = 0usize;
    while done < total {
        let delta = stepwidth(v.l2_norm(), rule.c, rule.eps)?;
        let k = if delta.is_finite() { ((delta / dt).floor() as usize).clamp(1, total - done) } else { total - done };
        let width = k as f64 * dt;
        let w0 = u.sub(&v)?;
        let v_end = local(&v, k)?;
        let u_end = local(&u, k)?;
        let w_end = u_end.sub(&v_end)?;
        let y = w_end.sub(&free_propagate(&w0, width, PhaseSign::Plus)?)?;
        let v_next = v_end.add(&y)?;
        steps.push(VwStep {
            start: done as f64 * dt,
            width,
            v_start: v.l2_norm(),
            v_end: v_end.l2_norm(),
            y_norm: y.l2_norm(),
            v_restart: v_next.l2_norm(),
            increment: v_next.l2_norm() - v.l2_norm(),
            w_end: w_end.l2_norm(),
        });
        done += k;
        times.push(done as f64 * dt);
        v_norms.push(v_end.l2_norm());
        w_norms.push(w_end.l2_norm());
        pieces.push(v_end.add(&w_end)?);
        v = v_next;
        u = u_end;
    }

    let reference = SolverConfig::new(dt, total)?
        .with_scheme(cfg.scheme)
        .with_dealias(cfg.dealias)
        .with_save_times(times.clone())?;
    let reference = solve(u0, EquationId::Nls101, &reference)?;
    let sum_error = pieces
        .iter()
        .zip(&reference.snapshots[1..])
        .map(|(a, b)| Ok(a.sub(b)?.l2_norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    Ok(VwReport {
        threshold: n,
        r,
        rule,
        u_le_norm: split.u_le.l2_norm(),
        u_gt_norm: split.u_gt.l2_norm(),
        u_gt_bound: data_norm.powf(rd / 2.0) * n.powf(rd / 2.0 - 1.0),
        steps,
        times,
        v_norms,
        w_norms,
        sum_error,
    })
}
