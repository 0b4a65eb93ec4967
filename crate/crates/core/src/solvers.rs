//! Split-step Fourier integrators for cubic NLS, the gauged DNLS and DNLS.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{LabError, Result};
use crate::gauge::{gauge_forward, gauge_inverse};
use crate::spectral::fft::{forward_in_place, inverse_in_place};
use crate::spectral::{spectral_derivative, spectral_second_derivative, SampledField, SpaceGrid};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative mass change in one step that aborts a solve.
pub const BLOW_UP_DRIFT: f64 = 0.1;

/// Spectral tail, relative to the peak, above which data count as under-resolved.
pub const TAIL_LIMIT: f64 = 1e-10;

/// The evolution equation; the tag fixes the nonlinear step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquationId {
    /// `i u_t + u_xx + |u|^2 u = 0`.
    #[serde(rename = "NLS101")]
    Nls101,
    /// `i v_t + v_xx + i v^2 conj(v)_x + |v|^4 v / 2 = 0`.
    #[serde(rename = "GDNLS110")]
    Gdnls110,
    /// `i u_t + u_xx = i (|u|^2 u)_x`.
    #[serde(rename = "DNLS109")]
    Dnls109,
}

impl EquationId {
    pub fn name(self) -> &'static str {
        match self {
            EquationId::Nls101 => "NLS101",
            EquationId::Gdnls110 => "GDNLS110",
            EquationId::Dnls109 => "DNLS109",
        }
    }

    fn has_derivative(self) -> bool {
        !matches!(self, EquationId::Nls101)
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NLS101" => Ok(EquationId::Nls101),
            "GDNLS110" => Ok(EquationId::Gdnls110),
            "DNLS109" => Ok(EquationId::Dnls109),
            _ => Err(LabError::param("equation", format!("unknown equation `{s}`; expected NLS101, GDNLS110 or DNLS109"))),
        }
    }
}

/// Operator splitting order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Half linear step, nonlinear step, half linear step.
    #[default]
    Strang,
    /// Linear step then nonlinear step.
    Lie,
}

impl FromStr for Scheme {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strang" => Ok(Scheme::Strang),
            "lie" => Ok(Scheme::Lie),
            _ => Err(LabError::param("scheme", format!("unknown scheme `{s}`; expected strang or lie"))),
        }
    }
}

/// Time stepping and output schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    /// 2/3 truncation of every nonlinear step.
    pub dealias: bool,
    /// Requested output times; each is served by the nearest step.
    pub save_times: Vec<f64>,
}

impl SolverConfig {
    /// Strang steps with dealiasing, saving the initial and final states.
    pub fn new(dt: f64, steps: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(LabError::param("dt", format!("must be finite and > 0, got {dt}")));
        }
        if steps == 0 {
            return Err(LabError::param("steps", "need at least one step"));
        }
        Ok(Self {
            dt,
            steps,
            scheme: Scheme::Strang,
            dealias: true,
            save_times: vec![0.0, dt * steps as f64],
        })
    }

    /// `steps` chosen so that `dt * steps` is exactly `horizon`, with `dt` at most `max_dt`.
    pub fn to_horizon(horizon: f64, max_dt: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0 && max_dt.is_finite() && max_dt > 0.0) {
            return Err(LabError::param("horizon", "horizon and dt must be finite and > 0"));
        }
        let steps = (horizon / max_dt - 1e-9).ceil().max(1.0) as usize;
        Self::new(horizon / steps as f64, steps)
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    pub fn with_save_times(mut self, times: Vec<f64>) -> Result<Self> {
        let end = self.horizon();
        if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= -1e-12 && **t <= end * (1.0 + 1e-12))) {
            return Err(LabError::param("save_times", format!("{t} lies outside [0, {end}]")));
        }
        self.save_times = times;
        Ok(self)
    }

    /// `count` equally spaced outputs including both ends.
    pub fn with_uniform_saves(self, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(LabError::param("save_times", "need at least two uniform saves"));
        }
        let end = self.horizon();
        let times = (0..count).map(|k| end * k as f64 / (count - 1) as f64).collect();
        self.with_save_times(times)
    }

    /// Step indices serving the requested outputs, sorted and without repeats.
    fn save_steps(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .save_times
            .iter()
            .map(|t| ((t / self.dt).round() as usize).min(self.steps))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }
}

/// Saved states of a solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<SampledField>,
    /// `||u(t)||^2_{L^2}` at each save.
    pub mass: Vec<f64>,
    /// Largest relative mass change over a single step.
    pub max_step_drift: f64,
    pub warnings: Vec<String>,
    pub config: Option<SolverConfig>,
    pub equation: Option<EquationId>,
}

impl Trajectory {
    /// Wrap externally produced snapshots, for instance samples of a closed form.
    pub fn from_snapshots(times: Vec<f64>, snapshots: Vec<SampledField>) -> Result<Self> {
        if times.len() != snapshots.len() {
            return Err(LabError::ShapeMismatch(format!("{} times for {} snapshots", times.len(), snapshots.len())));
        }
        if snapshots.windows(2).any(|w| w[0].grid() != w[1].grid()) {
            return Err(LabError::ShapeMismatch("snapshots on different grids".into()));
        }
        let mass = snapshots.iter().map(SampledField::mass).collect();
        Ok(Self {
            times,
            snapshots,
            mass,
            max_step_drift: 0.0,
            warnings: Vec::new(),
            config: None,
            equation: None,
        })
    }

    pub fn last(&self) -> &SampledField {
        self.snapshots.last().expect("trajectories are never empty")
    }

    /// Largest `| m(t) - m(0) | / m(0)` over the saves, zero for zero data.
    pub fn relative_mass_drift(&self) -> f64 {
        let m0 = self.mass[0];
        if m0 == 0.0 {
            return 0.0;
        }
        self.mass.iter().map(|m| (m - m0).abs() / m0).fold(0.0, f64::max)
    }

    /// Snapshot nearest to `t`.
    pub fn at(&self, t: f64) -> &SampledField {
        let k = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(k, _)| k)
            .unwrap_or(0);
        &self.snapshots[k]
    }

    pub fn map_snapshots(&self, f: impl Fn(&SampledField) -> Result<SampledField>) -> Result<Self> {
        let snapshots = self.snapshots.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mass: snapshots.iter().map(SampledField::mass).collect(),
            snapshots,
            ..self.clone()
        })
    }
}

/// Wavenumbers in FFT storage order; the Nyquist slot is negative.
fn fft_wavenumbers(grid: &SpaceGrid) -> Vec<f64> {
    let n = grid.points();
    let dk = grid.dxi();
    (0..n)
        .map(|j| {
            let k = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
            k as f64 * dk
        })
        .collect()
}

struct Stepper {
    eq: EquationId,
    k: Vec<f64>,
    /// Modes kept by the 2/3 rule (all modes when dealiasing is off).
    keep: Vec<bool>,
    /// Modes with a well-defined derivative: the Nyquist slot is dropped.
    deriv: Vec<bool>,
    dealias: bool,
    n: usize,
}

impl Stepper {
    fn new(grid: &SpaceGrid, eq: EquationId, dealias: bool) -> Self {
        let n = grid.points();
        let k = fft_wavenumbers(grid);
        let keep = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j } else { n - j };
                !dealias || 3 * m < n
            })
            .collect();
        let deriv = (0..n).map(|j| j != n / 2).collect();
        Self {
            eq,
            k,
            keep,
            deriv,
            dealias,
            n,
        }
    }

    fn linear(&self, u: &mut [Complex64], h: f64) {
        forward_in_place(u);
        for (c, k) in u.iter_mut().zip(&self.k) {
            *c *= Complex64::from_polar(1.0, -h * k * k);
        }
        inverse_in_place(u);
        let s = 1.0 / self.n as f64;
        u.iter_mut().for_each(|z| *z *= s);
    }

    fn filter(&self, u: &mut [Complex64]) {
        forward_in_place(u);
        for (c, keep) in u.iter_mut().zip(&self.keep) {
            if !keep {
                *c = ZERO;
            }
        }
        inverse_in_place(u);
        let s = 1.0 / self.n as f64;
        u.iter_mut().for_each(|z| *z *= s);
    }

    /// `d/dx` of `g`, truncated to the kept modes.
    fn derivative(&self, mut g: Vec<Complex64>) -> Vec<Complex64> {
        forward_in_place(&mut g);
        let s = 1.0 / self.n as f64;
        for (j, c) in g.iter_mut().enumerate() {
            *c = if self.keep[j] && self.deriv[j] { *c * Complex64::new(0.0, self.k[j] * s) } else { ZERO };
        }
        inverse_in_place(&mut g);
        g
    }

    /// Derivative part of the right-hand side.
    fn derivative_term(&self, u: &[Complex64]) -> Vec<Complex64> {
        match self.eq {
            EquationId::Dnls109 => self.derivative(u.iter().map(|z| z * z.norm_sqr()).collect()),
            EquationId::Gdnls110 => {
                let bar_x = self.derivative(u.iter().map(|z| z.conj()).collect());
                u.iter().zip(bar_x).map(|(z, d)| -(z * z) * d).collect()
            }
            EquationId::Nls101 => vec![ZERO; u.len()],
        }
    }

    /// Exact flow of the local phase rotation over time `h`.
    fn rotate(&self, u: &mut [Complex64], h: f64) {
        match self.eq {
            EquationId::Nls101 => u.iter_mut().for_each(|z| *z *= Complex64::from_polar(1.0, h * z.norm_sqr())),
            EquationId::Gdnls110 => u
                .iter_mut()
                .for_each(|z| *z *= Complex64::from_polar(1.0, 0.5 * h * z.norm_sqr().powi(2))),
            EquationId::Dnls109 => {}
        }
    }

    /// Explicit midpoint step for the derivative part.
    fn rk2(&self, u: &mut [Complex64], h: f64) {
        let k1 = self.derivative_term(u);
        let mid: Vec<Complex64> = u.iter().zip(&k1).map(|(a, b)| a + b * (0.5 * h)).collect();
        let k2 = self.derivative_term(&mid);
        u.iter_mut().zip(k2).for_each(|(a, b)| *a += b * h);
    }

    /// Symmetric nonlinear step: half rotation, derivative step, half rotation.
    fn nonlinear(&self, u: &mut [Complex64], h: f64) {
        if self.eq.has_derivative() {
            self.rotate(u, 0.5 * h);
            self.rk2(u, h);
            self.rotate(u, 0.5 * h);
        } else {
            self.rotate(u, h);
        }
        if self.dealias {
            self.filter(u);
        }
    }

    fn step(&self, u: &mut [Complex64], dt: f64, scheme: Scheme) {
        match scheme {
            Scheme::Strang => {
                self.linear(u, 0.5 * dt);
                self.nonlinear(u, dt);
                self.linear(u, 0.5 * dt);
            }
            Scheme::Lie => {
                self.linear(u, dt);
                self.nonlinear(u, dt);
            }
        }
    }
}

fn lattice_mass(u: &[Complex64], dx: f64) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx
}

/// Largest spectral modulus in the outer tenth of the band, relative to the peak.
pub fn spectral_tail(u0: &SampledField) -> f64 {
    let n = u0.grid().points();
    let mut buf = u0.values().to_vec();
    forward_in_place(&mut buf);
    let peak = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let tail = buf
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            let m = if *j < n / 2 { *j } else { n - j };
            10 * m >= 4 * n
        })
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    tail / peak
}

/// Largest spectral modulus outside the 2/3 band, relative to the peak.
pub fn dealias_leakage(u0: &SampledField) -> f64 {
    let n = u0.grid().points();
    let mut buf = u0.values().to_vec();
    forward_in_place(&mut buf);
    let peak = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let outside = buf
        .iter()
        .enumerate()
        .filter(|(j, _)| 3 * (*j).min(n - j) >= n)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    outside / peak
}

/// Integrate `eq` from `u0` with the schedule in `cfg`.
pub fn solve(u0: &SampledField, eq: EquationId, cfg: &SolverConfig) -> Result<Trajectory> {
    let grid = *u0.grid();
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) || cfg.steps == 0 {
        return Err(LabError::param("dt", "solver needs dt > 0 and at least one step"));
    }
    let tail = spectral_tail(u0);
    if tail > TAIL_LIMIT {
        return Err(LabError::param(
            "u0",
            format!("under-resolved: spectral tail is {tail:e} of the peak (limit {TAIL_LIMIT:e})"),
        ));
    }
    let mut warnings = Vec::new();
    let kmax = grid.max_frequency();
    if cfg.dt * kmax * kmax > std::f64::consts::PI {
        let msg = format!("dt * max|xi|^2 = {:.3} exceeds pi", cfg.dt * kmax * kmax);
        log::warn!("{eq}: {msg}");
        warnings.push(msg);
    }
    if eq.has_derivative() && !cfg.dealias {
        let msg = "derivative nonlinearity integrated without dealiasing".to_string();
        log::warn!("{eq}: {msg}");
        warnings.push(msg);
    }
    let stepper = Stepper::new(&grid, eq, cfg.dealias);
    let dx = grid.dx();
    let saves = cfg.save_steps();
    let mut u = u0.values().to_vec();
    let mut times = Vec::with_capacity(saves.len());
    let mut snapshots = Vec::with_capacity(saves.len());
    let mut mass = Vec::with_capacity(saves.len());
    let mut next = 0;
    let mut m = lattice_mass(&u, dx);
    let mut max_step_drift: f64 = 0.0;
    for step in 0..=cfg.steps {
        if step > 0 {
            stepper.step(&mut u, cfg.dt, cfg.scheme);
            let m_new = lattice_mass(&u, dx);
            if !m_new.is_finite() {
                return Err(LabError::BlowUp { step, drift: f64::INFINITY });
            }
            if m > 0.0 {
                let drift = (m_new - m).abs() / m;
                max_step_drift = max_step_drift.max(drift);
                if drift > BLOW_UP_DRIFT {
                    return Err(LabError::BlowUp { step, drift });
                }
            }
            m = m_new;
        }
        while next < saves.len() && saves[next] == step {
            times.push(step as f64 * cfg.dt);
            snapshots.push(SampledField::new(grid, u.clone())?);
            mass.push(m);
            next += 1;
        }
    }
    Ok(Trajectory {
        times,
        snapshots,
        mass,
        max_step_drift,
        warnings,
        config: Some(cfg.clone()),
        equation: Some(eq),
    })
}

/// DNLS through the gauge: solve the gauged equation from `G u0` and map every snapshot back.
pub fn solve_dnls_via_gauge(u0: &SampledField, cfg: &SolverConfig) -> Result<Trajectory> {
    let v0 = gauge_forward(u0)?;
    let traj = solve(&v0, EquationId::Gdnls110, cfg)?;
    let mut out = traj.map_snapshots(gauge_inverse)?;
    out.equation = Some(EquationId::Dnls109);
    Ok(out)
}

/// `u_t` demanded by the equation, with spectral derivatives and no truncation.
pub fn equation_rhs(u: &SampledField, eq: EquationId) -> Result<SampledField> {
    let lin = spectral_second_derivative(u)?.scaled(I);
    let nl = match eq {
        EquationId::Nls101 => SampledField::new(*u.grid(), u.values().iter().map(|z| I * z * z.norm_sqr()).collect())?,
        EquationId::Dnls109 => spectral_derivative(&SampledField::new(
            *u.grid(),
            u.values().iter().map(|z| z * z.norm_sqr()).collect(),
        )?)?,
        EquationId::Gdnls110 => {
            let bar_x = spectral_derivative(&u.conj())?;
            let vals = u
                .values()
                .iter()
                .zip(bar_x.values())
                .map(|(z, d)| -(z * z) * d + I * z * (0.5 * z.norm_sqr().powi(2)))
                .collect();
            SampledField::new(*u.grid(), vals)?
        }
    };
    lin.add(&nl)
}

/// Largest scaled residual `||u_t - rhs(u)|| / (||u_t|| + ||rhs(u)||)` over interior snapshots.
///
/// Time derivatives use the five-point stencil when at least five equally spaced snapshots
/// are present and the three-point stencil otherwise.
pub fn pde_residual(traj: &Trajectory, eq: EquationId) -> Result<f64> {
    let k = traj.snapshots.len();
    if k < 3 {
        return Err(LabError::param("snapshots", format!("need at least 3 for time differences, got {k}")));
    }
    let h = traj.times[1] - traj.times[0];
    if !(h > 0.0) || traj.times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) {
        return Err(LabError::param("snapshots", "save times must be equally spaced and increasing"));
    }
    let s = &traj.snapshots;
    let (lo, hi) = if k >= 5 { (2, k - 2) } else { (1, k - 1) };
    let mut worst: f64 = 0.0;
    for j in lo..hi {
        let ut = if k >= 5 {
            s[j - 2]
                .sub(&s[j - 1].scaled(Complex64::new(8.0, 0.0)))?
                .add(&s[j + 1].scaled(Complex64::new(8.0, 0.0)))?
                .sub(&s[j + 2])?
                .scaled(Complex64::new(1.0 / (12.0 * h), 0.0))
        } else {
            s[j + 1].sub(&s[j - 1])?.scaled(Complex64::new(1.0 / (2.0 * h), 0.0))
        };
        let rhs = equation_rhs(&s[j], eq)?;
        let scale = ut.l2_norm() + rhs.l2_norm();
        if scale > 0.0 {
            worst = worst.max(ut.sub(&rhs)?.l2_norm() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> SpaceGrid {
        SpaceGrid::new(40.0, 256).unwrap()
    }

    #[test]
    fn zero_data_stay_zero() {
        let z = SampledField::zeros(grid());
        let cfg = SolverConfig::new(1e-3, 50).unwrap().with_uniform_saves(6).unwrap();
        for eq in [EquationId::Nls101, EquationId::Gdnls110, EquationId::Dnls109] {
            let t = solve(&z, eq, &cfg).unwrap();
            assert_eq!(t.snapshots.len(), 6);
            assert!(t.snapshots.iter().all(|s| s.max_abs() == 0.0));
            assert_eq!(pde_residual(&t, eq).unwrap(), 0.0);
        }
    }

    #[test]
    fn saves_are_served_by_the_nearest_step() {
        let cfg = SolverConfig::new(0.1, 10).unwrap().with_save_times(vec![0.0, 0.26, 0.5, 1.0]).unwrap();
        let t = solve(&SampledField::zeros(grid()), EquationId::Nls101, &cfg).unwrap();
        let expect = [0.0, 0.3, 0.5, 1.0];
        for (a, b) in t.times.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(SolverConfig::new(0.1, 10).unwrap().with_save_times(vec![2.0]).is_err());
    }

    #[test]
    fn under_resolved_data_are_rejected() {
        let g = grid();
        let spike = SampledField::from_fn(g, |x| Complex64::new(if x.abs() < 0.1 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let cfg = SolverConfig::new(1e-3, 1).unwrap();
        assert!(matches!(solve(&spike, EquationId::Nls101, &cfg), Err(LabError::InvalidParameter { name: "u0", .. })));
    }

    #[test]
    fn growing_data_trip_the_guard() {
        let g = grid();
        let big = SampledField::from_fn(g, |x| Complex64::new(8.0 * (-x * x).exp(), 0.0)).unwrap();
        let cfg = SolverConfig::new(0.05, 400).unwrap();
        let err = solve(&big, EquationId::Dnls109, &cfg).unwrap_err();
        assert!(err.is_numerical_guard(), "{err}");
    }

    #[test]
    fn equation_tags_parse() {
        for eq in [EquationId::Nls101, EquationId::Gdnls110, EquationId::Dnls109] {
            assert_eq!(eq.name().parse::<EquationId>().unwrap(), eq);
        }
        assert!("KdV".parse::<EquationId>().is_err());
    }
}
