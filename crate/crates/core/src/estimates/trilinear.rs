//! The trilinear space-time transform of `u v w` with `u = e^{it d^2} u0`,
//! `v = e^{it d^2} v0`, `w = e^{-it d^2} w0`, by three independent routes.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::spectral::{
    forward_fourier, forward_unchecked, inverse_unchecked, propagate_spectrum, PhaseSign, SampledField, SpaceGrid,
    SpectralField, TimeGrid, WindowSpec,
};
use crate::util::adaptive_simpson;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Controls for the one-dimensional quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    /// Largest spectral step accepted; coarser data is zero-padded in space.
    pub max_dxi: f64,
    /// Half-width of the excluded band around `xi_1 = xi`, in units of the spectral step.
    pub exclusion_steps: f64,
    /// Absolute tolerance of the adaptive rule.
    pub tol: f64,
    /// Initial panels of the adaptive rule.
    pub pieces: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            max_dxi: 0.02,
            exclusion_steps: 2.0,
            tol: 1e-11,
            pieces: 64,
        }
    }
}

/// Lattice and long plateau window for the simulated route.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FftRouteSetup {
    pub length: f64,
    pub points: usize,
    pub span: f64,
    pub count: usize,
    pub flat: f64,
    pub ramp: f64,
}

impl FftRouteSetup {
    /// `L = 1024`, `n = m = 4096`, `T_w = 200` with a 60 + 35 plateau.
    pub fn baseline() -> Self {
        Self {
            length: 1024.0,
            points: 4096,
            span: 200.0,
            count: 4096,
            flat: 60.0,
            ramp: 35.0,
        }
    }

    /// Box, window and sample counts all doubled.
    pub fn refined(&self) -> Self {
        Self {
            length: 2.0 * self.length,
            points: 2 * self.points,
            span: 2.0 * self.span,
            count: 2 * self.count,
            flat: 2.0 * self.flat,
            ramp: 2.0 * self.ramp,
        }
    }

    pub fn grid(&self) -> Result<SpaceGrid> {
        SpaceGrid::new(self.length, self.points)
    }

    pub fn times(&self) -> Result<TimeGrid> {
        TimeGrid::centered(self.span, self.count)
    }

    pub fn window(&self) -> Result<WindowSpec> {
        WindowSpec::plateau(0.0, self.flat, self.ramp)
    }
}

/// Quadrature value together with what the exclusion left out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrilinearValue {
    pub xi: f64,
    pub tau: f64,
    pub value: Complex64,
    /// Half-width `eta` of the excluded band `|xi - xi_1| < eta`.
    pub eta: f64,
    /// `2 eta` times the largest sampled integrand modulus inside the band.
    pub excluded_bound: f64,
}

/// Spectra of the three factors on a common lattice with step at most `max_dxi`.
#[derive(Clone, Debug)]
pub struct TripleSpectra {
    u: SpectralField,
    v: SpectralField,
    w: SpectralField,
}

fn check_triple(u0: &SampledField, v0: &SampledField, w0: &SampledField) -> Result<()> {
    if u0.grid() != v0.grid() || u0.grid() != w0.grid() {
        return Err(LabError::ShapeMismatch("the three factors live on different grids".into()));
    }
    Ok(())
}

/// Embed `f` in a box `factor` times longer, filling with zeros.
fn zero_pad(f: &SampledField, factor: usize) -> SampledField {
    let g = f.grid();
    let n = g.points();
    let big = SpaceGrid::new(g.length() * factor as f64, n * factor).expect("padded grid is valid");
    let offset = (factor - 1) * n / 2;
    let mut values = vec![ZERO; n * factor];
    values[offset..offset + n].copy_from_slice(f.values());
    SampledField::new(big, values).expect("padding keeps values finite")
}

impl TripleSpectra {
    pub fn new(u0: &SampledField, v0: &SampledField, w0: &SampledField, max_dxi: f64) -> Result<Self> {
        check_triple(u0, v0, w0)?;
        if !(max_dxi > 0.0 && max_dxi.is_finite()) {
            return Err(LabError::param("max_dxi", "must be finite and > 0"));
        }
        let dxi = u0.grid().dxi();
        let factor = if dxi > max_dxi { (dxi / max_dxi).ceil() as usize } else { 1 };
        let spec = |f: &SampledField| -> Result<SpectralField> {
            if factor > 1 {
                forward_fourier(&zero_pad(f, factor))
            } else {
                forward_fourier(f)
            }
        };
        Ok(Self {
            u: spec(u0)?,
            v: spec(v0)?,
            w: spec(w0)?,
        })
    }

    pub fn dxi(&self) -> f64 {
        self.u.grid().dxi()
    }

    fn band(&self) -> f64 {
        self.u.grid().max_frequency()
    }

    /// Integrand in `xi_1` at fixed `(xi, tau)`, singular at `xi_1 = xi`.
    fn integrand(&self, xi: f64, tau: f64, xi1: f64) -> Complex64 {
        let d = xi - xi1;
        if d == 0.0 {
            return ZERO;
        }
        let a = self.u.interpolate_cubic(xi1);
        if a == ZERO {
            return ZERO;
        }
        let x = (xi * xi - 2.0 * xi * xi1 - tau) / (2.0 * d);
        a * self.v.interpolate_cubic(x) * self.w.interpolate_cubic(d - x) / (4.0 * PI * d.abs())
    }

    /// Adaptive quadrature over `xi_1`, omitting `|xi - xi_1| < eta`.
    pub fn quadrature(&self, xi: f64, tau: f64, opts: &QuadratureOptions) -> TrilinearValue {
        let eta = opts.exclusion_steps * self.dxi();
        let band = self.band();
        let f = |s: f64| self.integrand(xi, tau, s);
        let (lo, hi) = ((xi - eta).min(band), (xi + eta).max(-band));
        let value = adaptive_simpson(&f, -band, lo, opts.tol, opts.pieces)
            + adaptive_simpson(&f, hi, band, opts.tol, opts.pieces);
        let samples = 64;
        let peak = (1..samples)
            .map(|k| xi - eta + 2.0 * eta * k as f64 / samples as f64)
            .filter(|s| *s != xi)
            .map(|s| f(s).norm())
            .fold(0.0, f64::max);
        TrilinearValue {
            xi,
            tau,
            value,
            eta,
            excluded_bound: 2.0 * eta * peak,
        }
    }
}

/// `F(uvw)(xi, tau)` by one-dimensional quadrature of the closed form with default options.
pub fn trilinear_quadrature(
    u0: &SampledField,
    v0: &SampledField,
    w0: &SampledField,
    xi: f64,
    tau: f64,
) -> Result<Complex64> {
    Ok(trilinear_quadrature_with(u0, v0, w0, xi, tau, &QuadratureOptions::default())?.value)
}

pub fn trilinear_quadrature_with(
    u0: &SampledField,
    v0: &SampledField,
    w0: &SampledField,
    xi: f64,
    tau: f64,
    opts: &QuadratureOptions,
) -> Result<TrilinearValue> {
    if !(xi.is_finite() && tau.is_finite()) {
        return Err(LabError::param("xi", "probe point must be finite"));
    }
    Ok(TripleSpectra::new(u0, v0, w0, opts.max_dxi)?.quadrature(xi, tau, opts))
}

/// Brute-force alternative: the lattice double sum over `(xi_1, xi_2)` against a Gaussian
/// of width `width` standing in for the delta on the resonance surface.
pub fn trilinear_brute_force(
    u0: &SampledField,
    v0: &SampledField,
    w0: &SampledField,
    xi: f64,
    tau: f64,
    width: f64,
) -> Result<Complex64> {
    check_triple(u0, v0, w0)?;
    if !(width > 0.0 && width.is_finite()) {
        return Err(LabError::param("width", "delta width must be finite and > 0"));
    }
    let (u, v, w) = (forward_fourier(u0)?, forward_fourier(v0)?, forward_fourier(w0)?);
    let grid = *u0.grid();
    let dxi = grid.dxi();
    let norm = 1.0 / (width * (2.0 * PI).sqrt());
    let sum: Complex64 = (0..grid.points())
        .into_par_iter()
        .map(|i| {
            let a = u.coefficients()[i];
            if a == ZERO {
                return ZERO;
            }
            let x1 = grid.xi(i);
            let mut acc = ZERO;
            for (j, b) in v.coefficients().iter().enumerate() {
                let x2 = grid.xi(j);
                let x3 = xi - x1 - x2;
                let phase = tau + x1 * x1 + x2 * x2 - x3 * x3;
                let g = (-0.5 * (phase / width).powi(2)).exp();
                if g < 1e-300 {
                    continue;
                }
                acc += b * w.interpolate_cubic(x3) * g;
            }
            a * acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(sum * (norm * dxi * dxi / (2.0 * PI)))
}

/// `F(uvw)` by simulation: the product is formed on the space lattice at every time sample,
/// transformed in space, and the windowed time integral is taken at each probe.
///
/// At lattice frequencies this is the corresponding bin of the full space-time transform;
/// only the probed spatial columns are kept. Probes are snapped to the nearest lattice `xi`,
/// and the snapped points are returned with the values.
pub fn trilinear_fft_route(
    u0: &SampledField,
    v0: &SampledField,
    w0: &SampledField,
    times: TimeGrid,
    window: WindowSpec,
    probes: &[(f64, f64)],
) -> Result<Vec<((f64, f64), Complex64)>> {
    check_triple(u0, v0, w0)?;
    window.check_fits(&times)?;
    let grid = *u0.grid();
    let columns: Vec<usize> = probes
        .iter()
        .map(|&(xi, _)| {
            grid.nearest_index(xi)
                .ok_or_else(|| LabError::param("probes", format!("xi = {xi} lies outside the spectral band")))
        })
        .collect::<Result<_>>()?;
    let (u, v, w) = (forward_fourier(u0)?, forward_fourier(v0)?, forward_fourier(w0)?);
    // Row l holds the probed columns of the spatial transform of the product at t_l.
    let rows: Vec<Vec<Complex64>> = (0..times.count())
        .into_par_iter()
        .map(|l| {
            let t = times.t(l);
            let weight = window.profile(t);
            if weight == 0.0 {
                return vec![ZERO; columns.len()];
            }
            let evolve = |s: &SpectralField, sign: PhaseSign| {
                let mut s = s.clone();
                propagate_spectrum(&mut s, t, sign);
                inverse_unchecked(grid, s.coefficients()).into_values()
            };
            let mut prod = evolve(&u, PhaseSign::Plus);
            let vt = evolve(&v, PhaseSign::Plus);
            let wt = evolve(&w, PhaseSign::Minus);
            for ((p, b), c) in prod.iter_mut().zip(&vt).zip(&wt) {
                *p *= b * c * weight;
            }
            let spec = forward_unchecked(grid, prod);
            columns.iter().map(|&i| spec.coefficients()[i]).collect()
        })
        .collect();
    let dt = times.dt();
    Ok(probes
        .iter()
        .zip(&columns)
        .enumerate()
        .map(|(k, (&(_, tau), &i))| {
            let value: Complex64 = rows
                .iter()
                .enumerate()
                .map(|(l, row)| row[k] * Complex64::from_polar(dt, -tau * times.t(l)))
                .sum();
            ((grid.xi(i), tau), value)
        })
        .collect())
}
