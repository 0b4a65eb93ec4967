//! The bilinear identity behind the `I^{1/p}(uv)` estimate.
//!
//! For `u = e^{it d^2} u0` and `v = e^{-it d^2} v0` the space-time transform of
//! `I^{1/p}(uv)` is a pointwise expression in the data spectra, and its
//! `L^{p'}_tau` norm at fixed `xi` is a constant times `|u0^|^{p'} * |v0^|^{p'}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::norms::dual;
use crate::spectral::{
    forward_fourier, free_evolution, spacetime_transform, ApplyMultiplier, MultiplierSpec, PhaseSign, SampledField,
    SpaceGrid, SpacetimeSpectrum, SpectralField, TimeGrid, WindowSpec,
};

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(LabError::param("p", format!("must lie in (1, inf), got {p}")));
    }
    Ok(())
}

/// Closed form `1/2 |xi|^{-1/p'} u0^(xi/2 - tau/(2 xi)) v0^(xi/2 + tau/(2 xi))` of
/// `F I^{1/p}(uv)(xi, tau)`, with data spectra linearly interpolated.
pub fn bilinear_closed_form(u0: &SampledField, v0: &SampledField, p: f64, xi: f64, tau: f64) -> Result<Complex64> {
    check_p(p)?;
    if xi == 0.0 || !xi.is_finite() || !tau.is_finite() {
        return Err(LabError::param("xi", "the closed form needs finite (xi, tau) with xi != 0"));
    }
    let (a, b) = (forward_fourier(u0)?, forward_fourier(v0)?);
    Ok(closed_form_from_spectra(&a, &b, p, xi, tau))
}

pub(crate) fn closed_form_from_spectra(a: &SpectralField, b: &SpectralField, p: f64, xi: f64, tau: f64) -> Complex64 {
    let shift = tau / (2.0 * xi);
    a.interpolate_linear(0.5 * xi - shift) * b.interpolate_linear(0.5 * xi + shift) * (0.5 * xi.abs().powf(-1.0 / dual(p)))
}

/// Time lattice, window and comparison region for [`check_bilinear_identity_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentitySetup {
    pub span: f64,
    pub count: usize,
    /// Flat part and ramp of the plateau window centred at `t = 0`.
    pub flat: f64,
    pub ramp: f64,
    /// Compare only where `rhs > threshold * max rhs`.
    pub threshold: f64,
    /// Compare only where `|xi| >= min_abs_xi`; near `xi = 0` the product decays
    /// in time like `e^{-(t xi)^2}` and no finite window captures it.
    pub min_abs_xi: f64,
}

impl IdentitySetup {
    /// `T_w = 50`, `m = 1024`.
    pub fn baseline() -> Self {
        Self {
            span: 50.0,
            count: 1024,
            flat: 15.0,
            ramp: 9.5,
            threshold: 0.1,
            min_abs_xi: 0.5,
        }
    }

    /// Twice the window length at the same time step.
    ///
    /// Leakage from the finite window dominates the discretization error, so refinement
    /// lengthens the window; data should be resampled on a box of twice the length to match.
    pub fn refined(&self) -> Self {
        Self {
            span: 2.0 * self.span,
            count: 2 * self.count,
            flat: 2.0 * self.flat,
            ramp: 2.0 * self.ramp,
            ..*self
        }
    }

    pub fn times(&self) -> Result<TimeGrid> {
        TimeGrid::centered(self.span, self.count)
    }

    pub fn window(&self) -> Result<WindowSpec> {
        WindowSpec::plateau(0.0, self.flat, self.ramp)
    }
}

/// Pointwise comparison of `lhs(xi)` and `rhs(xi)` with a single fitted constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub p: f64,
    pub xi: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Lattice points that enter the fit.
    pub compared: Vec<bool>,
    pub fitted_c: f64,
    /// Constant predicted by the transform convention, `2^{1-p'}`.
    pub predicted_c: f64,
    pub max_rel_dev: f64,
    /// Largest `|F_x(uv)(xi, t)|` on the window ramps relative to its peak, over compared `xi`.
    pub truncation: f64,
    /// Set when the time signal is still sizeable on the ramps.
    pub window_flag: bool,
}

impl IdentityReport {
    pub fn rel_dev(&self, i: usize) -> f64 {
        if self.compared[i] {
            (self.lhs[i] / (self.fitted_c * self.rhs[i]) - 1.0).abs()
        } else {
            f64::NAN
        }
    }
}

/// `(|a|^{p'} * |b|^{p'})(xi_i)` on the lattice.
pub(crate) fn lattice_power_convolution(a: &SpectralField, b: &SpectralField, exponent: f64) -> Vec<f64> {
    let n = a.grid().points();
    let half = (n / 2) as i64;
    let pa: Vec<f64> = a.coefficients().iter().map(|z| z.norm().powf(exponent)).collect();
    let pb: Vec<f64> = b.coefficients().iter().map(|z| z.norm().powf(exponent)).collect();
    let dxi = a.grid().dxi();
    (0..n as i64)
        .map(|i| {
            // xi_i - xi_j sits at centered index i - j + n/2
            let lo = (i + half - (n as i64 - 1)).max(0);
            let hi = (i + half).min(n as i64 - 1);
            (lo..=hi).map(|j| pa[j as usize] * pb[(i - j + half) as usize]).sum::<f64>() * dxi
        })
        .collect()
}

/// Run the comparison on the baseline time setup.
pub fn check_bilinear_identity(u0: &SampledField, v0: &SampledField, p: f64) -> Result<IdentityReport> {
    check_bilinear_identity_with(u0, v0, p, &IdentitySetup::baseline())
}

/// Windowed space-time spectrum of `I^{1/p}(uv)`.
pub fn bilinear_spectrum(u0: &SampledField, v0: &SampledField, p: f64, setup: &IdentitySetup) -> Result<SpacetimeSpectrum> {
    check_p(p)?;
    if u0.grid() != v0.grid() {
        return Err(LabError::ShapeMismatch("u0 and v0 live on different grids".into()));
    }
    let times = setup.times()?;
    let u = free_evolution(u0, times, PhaseSign::Plus)?;
    let v = free_evolution(v0, times, PhaseSign::Minus)?;
    let spec = spacetime_transform(&u.mul(&v)?, setup.window()?)?;
    spec.apply_multiplier(&MultiplierSpec::riesz(1.0 / p))
}

pub fn check_bilinear_identity_with(
    u0: &SampledField,
    v0: &SampledField,
    p: f64,
    setup: &IdentitySetup,
) -> Result<IdentityReport> {
    let pd = dual(p);
    let spec = bilinear_spectrum(u0, v0, p, setup)?;
    let grid: SpaceGrid = *u0.grid();
    let n = grid.points();
    let dtau = spec.times().dtau();
    let lhs: Vec<f64> = spec
        .coefficients()
        .rows()
        .into_iter()
        .map(|row| row.iter().map(|z| z.norm().powf(pd)).sum::<f64>() * dtau)
        .collect();
    let (a, b) = (forward_fourier(u0)?, forward_fourier(v0)?);
    let rhs = lattice_power_convolution(&a, &b, pd);
    let peak = rhs.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(LabError::Insufficient("right-hand side vanishes identically".into()));
    }
    let xi = grid.frequencies();
    let compared: Vec<bool> = (0..n)
        .map(|i| rhs[i] > setup.threshold * peak && xi[i].abs() >= setup.min_abs_xi)
        .collect();
    let ratios: Vec<f64> = (0..n).filter(|&i| compared[i]).map(|i| lhs[i] / rhs[i]).collect();
    if ratios.is_empty() {
        return Err(LabError::Insufficient("no lattice point passes the comparison threshold".into()));
    }
    let fitted_c = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let max_rel_dev = ratios.iter().map(|r| (r / fitted_c - 1.0).abs()).fold(0.0, f64::max);
    let truncation = ramp_truncation(u0, v0, setup, &compared)?;
    Ok(IdentityReport {
        p,
        xi,
        lhs,
        rhs,
        compared,
        fitted_c,
        predicted_c: 2f64.powf(1.0 - pd),
        max_rel_dev,
        truncation,
        window_flag: truncation > 1e-2,
    })
}

/// How much of `F_x(uv)(xi, t)` survives at the start of the ramps, `|t| = flat`.
fn ramp_truncation(u0: &SampledField, v0: &SampledField, setup: &IdentitySetup, compared: &[bool]) -> Result<f64> {
    let grid = *u0.grid();
    let edge = TimeGrid::new(-setup.flat, 4.0 * setup.flat, 2)?;
    let u = free_evolution(u0, edge, PhaseSign::Plus)?;
    let v = free_evolution(v0, edge, PhaseSign::Minus)?;
    let at_zero = forward_fourier(&u0.mul(v0)?)?;
    let mut worst = 0.0f64;
    for l in 0..2 {
        let prod = forward_fourier(&u.slice(l).mul(&v.slice(l))?)?;
        for i in 0..grid.points() {
            let base = at_zero.coefficients()[i].norm();
            if compared[i] && base > 0.0 {
                worst = worst.max(prod.coefficients()[i].norm() / base);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_rejects_zero_frequency_and_respects_support() {
        let g = SpaceGrid::new(64.0, 256).unwrap();
        let box1 = SpectralField::from_fn(g, |xi| Complex64::new(if xi.abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let u0 = crate::spectral::inverse_fourier(&box1).unwrap();
        assert!(bilinear_closed_form(&u0, &u0, 2.0, 0.0, 1.0).is_err());
        // xi/2 - tau/(2xi) = -1.5 lies outside [-1, 1]; only round-trip roundoff remains.
        assert!(bilinear_closed_form(&u0, &u0, 2.0, 1.0, 4.0).unwrap().norm() < 1e-20);
        let zero = SampledField::zeros(g);
        assert_eq!(bilinear_closed_form(&zero, &u0, 2.0, 1.0, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn indicator_convolution_is_a_triangle() {
        let g = SpaceGrid::new(64.0 * PI, 1024).unwrap();
        let ind = SpectralField::from_fn(g, |xi| Complex64::new(if xi.abs() <= 1.0 + 1e-9 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let conv = lattice_power_convolution(&ind, &ind, 2.0);
        let dxi = g.dxi();
        for (i, c) in conv.iter().enumerate() {
            let xi = g.xi(i);
            let expect = (2.0 - xi.abs() + dxi).max(0.0);
            assert!((c - expect).abs() < 1e-9, "xi={xi} {c} {expect}");
        }
    }
}
