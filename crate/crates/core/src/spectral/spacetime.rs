use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fft::{fft_slot, forward_in_place, inverse_in_place, signed_index};
use super::field::{forward_unchecked, inverse_unchecked, propagate_spectrum, SampledField};
use super::grid::{SpaceGrid, TimeGrid};
use super::PhaseSign;
use crate::error::{LabError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex samples on the lattice `(x_j, t_l)`, stored with shape `(n, m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeField {
    grid: SpaceGrid,
    times: TimeGrid,
    values: Array2<Complex64>,
}

impl SpacetimeField {
    pub fn new(grid: SpaceGrid, times: TimeGrid, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (grid.points(), times.count()) {
            return Err(LabError::ShapeMismatch(format!(
                "values have shape {:?}, lattice is ({}, {})",
                values.dim(),
                grid.points(),
                times.count()
            )));
        }
        if let Some(index) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LabError::NonFinite { what: "space-time field", index });
        }
        Ok(Self { grid, times, values })
    }

    pub fn zeros(grid: SpaceGrid, times: TimeGrid) -> Self {
        Self {
            grid,
            times,
            values: Array2::zeros((grid.points(), times.count())),
        }
    }

    pub fn from_fn(grid: SpaceGrid, times: TimeGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let values = Array2::from_shape_fn((grid.points(), times.count()), |(j, l)| f(grid.x(j), times.t(l)));
        Self::new(grid, times, values)
    }

    pub(crate) fn from_raw(grid: SpaceGrid, times: TimeGrid, values: Array2<Complex64>) -> Self {
        Self { grid, times, values }
    }

    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    /// Samples at time index `l` as a spatial field.
    pub fn slice(&self, l: usize) -> SampledField {
        SampledField::from_raw(self.grid, self.values.column(l).to_vec())
    }

    pub fn conj(&self) -> Self {
        Self::from_raw(self.grid, self.times, self.values.mapv(|z| z.conj()))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_raw(self.grid, self.times, self.values.mapv(|z| z * c))
    }

    /// Multiply every sample by `g(t)`.
    pub fn modulated_in_time(&self, g: impl Fn(f64) -> Complex64) -> Self {
        let mut values = self.values.clone();
        for (l, mut col) in values.columns_mut().into_iter().enumerate() {
            let w = g(self.times.t(l));
            col.mapv_inplace(|z| z * w);
        }
        Self::from_raw(self.grid, self.times, values)
    }

    fn same_lattice(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.times != other.times {
            return Err(LabError::ShapeMismatch("fields live on different lattices".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_lattice(other)?;
        Ok(Self::from_raw(self.grid, self.times, &self.values * &other.values))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_lattice(other)?;
        Ok(Self::from_raw(self.grid, self.times, &self.values + &other.values))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_lattice(other)?;
        Ok(Self::from_raw(self.grid, self.times, &self.values - &other.values))
    }

    /// Pointwise map, e.g. to build nonlinear expressions of one field.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_raw(self.grid, self.times, self.values.mapv(f))
    }

    /// `(sum |f|^2 dx dt)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx() * self.times.dt()).sqrt()
    }
}

/// Smooth time cut-off applied before the space-time transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WindowSpec {
    None,
    /// `psi((t - center) / delta)`: one on `|t - center| <= delta`, zero beyond `2 delta`.
    SmoothCutoff { center: f64, delta: f64 },
    /// One on `|t - center| <= flat`, smooth descent to zero over a further `ramp`.
    Plateau { center: f64, flat: f64, ramp: f64 },
}

fn h(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth step from 1 at `s <= 0` to 0 at `s >= 1`.
fn descent(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let a = h(1.0 - s);
        a / (a + h(s))
    }
}

/// The reference bump `psi`: one on `[-1, 1]`, supported in `[-2, 2]`.
pub(crate) fn bump(t: f64) -> f64 {
    descent(t.abs() - 1.0)
}

impl WindowSpec {
    pub fn smooth(center: f64, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) || !center.is_finite() {
            return Err(LabError::param("delta", format!("window half-width must be finite and > 0, got {delta}")));
        }
        Ok(WindowSpec::SmoothCutoff { center, delta })
    }

    pub fn plateau(center: f64, flat: f64, ramp: f64) -> Result<Self> {
        if !(flat.is_finite() && flat >= 0.0 && ramp.is_finite() && ramp > 0.0) || !center.is_finite() {
            return Err(LabError::param("ramp", "plateau needs flat >= 0 and ramp > 0"));
        }
        Ok(WindowSpec::Plateau { center, flat, ramp })
    }

    /// Profile value at time `t`, always in `[0, 1]`.
    pub fn profile(&self, t: f64) -> f64 {
        match *self {
            WindowSpec::None => 1.0,
            WindowSpec::SmoothCutoff { center, delta } => bump((t - center) / delta),
            WindowSpec::Plateau { center, flat, ramp } => descent(((t - center).abs() - flat) / ramp),
        }
    }

    /// Closed support `[a, b]`, or `None` for the trivial window.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            WindowSpec::None => None,
            WindowSpec::SmoothCutoff { center, delta } => Some((center - 2.0 * delta, center + 2.0 * delta)),
            WindowSpec::Plateau { center, flat, ramp } => Some((center - flat - ramp, center + flat + ramp)),
        }
    }

    /// Rejects windows whose support does not fit in the time span.
    pub fn check_fits(&self, times: &TimeGrid) -> Result<()> {
        if let Some((a, b)) = self.support() {
            let tol = 1e-9 * times.span();
            if a < times.start() - tol || b > times.end() + tol {
                return Err(LabError::param(
                    "window",
                    format!(
                        "support [{a}, {b}] exceeds the time span [{}, {}]",
                        times.start(),
                        times.end()
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Space-time spectrum `F f(xi_i, tau_l)` with the window that was applied.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeSpectrum {
    grid: SpaceGrid,
    times: TimeGrid,
    coefficients: Array2<Complex64>,
    window: WindowSpec,
}

impl SpacetimeSpectrum {
    /// Wrap given coefficients; used for synthetic spectra.
    pub fn from_parts(
        grid: SpaceGrid,
        times: TimeGrid,
        coefficients: Array2<Complex64>,
        window: WindowSpec,
    ) -> Result<Self> {
        let field = SpacetimeField::new(grid, times, coefficients)?;
        Ok(Self {
            grid,
            times,
            coefficients: field.values,
            window,
        })
    }

    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn window(&self) -> &WindowSpec {
        &self.window
    }

    pub fn coefficients(&self) -> &Array2<Complex64> {
        &self.coefficients
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coefficients
    }

    pub fn xi(&self, i: usize) -> f64 {
        self.grid.xi(i)
    }

    pub fn tau(&self, l: usize) -> f64 {
        self.times.tau(l)
    }

    /// Area of one dual cell, `dxi * dtau`.
    pub fn cell(&self) -> f64 {
        self.grid.dxi() * self.times.dtau()
    }

    /// `(sum |F|^2 dxi dtau)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.coefficients.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell()).sqrt()
    }

    /// Coefficient at the lattice point nearest to `(xi, tau)`.
    pub fn nearest(&self, xi: f64, tau: f64) -> Option<Complex64> {
        Some(self.coefficients[[self.grid.nearest_index(xi)?, self.times.nearest_index(tau)?]])
    }
}

fn transpose(src: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; src.len()];
    out.par_chunks_mut(rows).enumerate().for_each(|(c, chunk)| {
        for (r, z) in chunk.iter_mut().enumerate() {
            *z = src[r * cols + c];
        }
    });
    out
}

/// Window in `t`, then the two-dimensional transform with kernel `e^{-i(x xi + t tau)}`.
pub fn spacetime_transform(f: &SpacetimeField, w: WindowSpec) -> Result<SpacetimeSpectrum> {
    w.check_fits(&f.times)?;
    let (n, m) = (f.grid.points(), f.times.count());
    let profile: Vec<f64> = (0..m).map(|l| w.profile(f.times.t(l))).collect();

    let mut rows: Vec<Complex64> = f.values.iter().copied().collect();
    rows.par_chunks_mut(m).for_each(|row| {
        for (z, p) in row.iter_mut().zip(&profile) {
            *z *= p;
        }
        forward_in_place(row);
    });
    let mut cols = transpose(&rows, n, m);
    drop(rows);
    cols.par_chunks_mut(n).for_each(forward_in_place);

    let dx = f.grid.dx();
    let dt = f.times.dt();
    let t0 = f.times.start();
    let time_phase: Vec<Complex64> = (0..m)
        .map(|l| Complex64::from_polar(dx * dt, -t0 * f.times.tau(l)))
        .collect();
    let coefficients = Array2::from_shape_fn((n, m), |(i, l)| {
        let k = signed_index(i, n);
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        cols[fft_slot(l, m) * n + fft_slot(i, n)] * time_phase[l] * sign
    });
    Ok(SpacetimeSpectrum {
        grid: f.grid,
        times: f.times,
        coefficients,
        window: w,
    })
}

/// Inverse of [`spacetime_transform`]; returns the windowed field.
pub fn inverse_spacetime_transform(spec: &SpacetimeSpectrum) -> SpacetimeField {
    let (n, m) = (spec.grid.points(), spec.times.count());
    let t0 = spec.times.start();
    let scale = 1.0 / (spec.grid.length() * spec.times.span());
    let mut cols = vec![ZERO; n * m];
    for ((i, l), c) in spec.coefficients.indexed_iter() {
        let k = signed_index(i, n);
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        cols[fft_slot(l, m) * n + fft_slot(i, n)] = c * Complex64::from_polar(sign * scale, t0 * spec.times.tau(l));
    }
    cols.par_chunks_mut(n).for_each(inverse_in_place);
    let mut rows = transpose(&cols, m, n);
    rows.par_chunks_mut(m).for_each(inverse_in_place);
    let values = Array2::from_shape_vec((n, m), rows).expect("shape matches");
    SpacetimeField::from_raw(spec.grid, spec.times, values)
}

/// Sample `t -> e^{i sign t d_x^2} u0` on the time lattice.
pub fn free_evolution(u0: &SampledField, times: TimeGrid, sign: PhaseSign) -> Result<SpacetimeField> {
    let grid = *u0.grid();
    let base = forward_unchecked(grid, u0.values().to_vec());
    let (n, m) = (grid.points(), times.count());
    let mut cols = vec![ZERO; n * m];
    cols.par_chunks_mut(n).enumerate().for_each(|(l, col)| {
        let mut spec = base.clone();
        propagate_spectrum(&mut spec, times.t(l), sign);
        col.copy_from_slice(inverse_unchecked(grid, spec.coefficients()).values());
    });
    let rows = transpose(&cols, m, n);
    SpacetimeField::new(grid, times, Array2::from_shape_vec((n, m), rows).expect("shape matches"))
}
