use num_complex::Complex64;

use super::fft::{fft_slot, forward_in_place, inverse_in_place, signed_index};
use super::grid::SpaceGrid;
use super::PhaseSign;
use crate::error::{LabError, Result};

fn check_finite(what: &'static str, values: &[Complex64]) -> Result<()> {
    match values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        Some(index) => Err(LabError::NonFinite { what, index }),
        None => Ok(()),
    }
}

#[inline]
fn parity_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Complex samples of a function of `x` on a [`SpaceGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    grid: SpaceGrid,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: SpaceGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(LabError::ShapeMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.points()
            )));
        }
        check_finite("sampled field", &values)?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpaceGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.points()],
        }
    }

    pub fn from_fn(grid: SpaceGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..grid.points()).map(|j| f(grid.x(j))).collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_raw(grid: SpaceGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.points());
        Self { grid, values }
    }

    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `(sum |f|^2 dx)^{1/2}` on the periodic box.
    pub fn l2_norm(&self) -> f64 {
        self.mass().sqrt()
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|z| z * c).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|z| z.conj()).collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(LabError::ShapeMismatch("fields live on different grids".into()));
        }
        Ok(Self::from_raw(
            self.grid,
            self.values.iter().zip(&other.values).map(|(a, b)| op(*a, *b)).collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// `||self - other||_{L^2} / ||other||_{L^2}`; absolute distance when `other` vanishes.
    pub fn relative_l2_distance(&self, other: &Self) -> Result<f64> {
        let d = self.sub(other)?.l2_norm();
        let base = other.l2_norm();
        Ok(if base > 0.0 { d / base } else { d })
    }
}

/// Spectral coefficients approximating `F f(xi) = int e^{-i x xi} f(x) dx`,
/// stored in increasing order of `xi` (index 0 is the Nyquist mode).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: SpaceGrid,
    coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: SpaceGrid, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.points() {
            return Err(LabError::ShapeMismatch(format!(
                "{} coefficients for a grid of {} points",
                coefficients.len(),
                grid.points()
            )));
        }
        check_finite("spectral field", &coefficients)?;
        Ok(Self { grid, coefficients })
    }

    pub fn from_fn(grid: SpaceGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let c = (0..grid.points()).map(|i| f(grid.xi(i))).collect();
        Self::new(grid, c)
    }

    pub(crate) fn from_raw(grid: SpaceGrid, coefficients: Vec<Complex64>) -> Self {
        Self { grid, coefficients }
    }

    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.grid.frequencies()
    }

    /// Linear interpolation between lattice points, zero outside the band.
    pub fn interpolate_linear(&self, xi: f64) -> Complex64 {
        let n = self.grid.points();
        let pos = xi / self.grid.dxi() + (n / 2) as f64;
        if !(pos >= 0.0 && pos <= (n - 1) as f64) {
            return Complex64::new(0.0, 0.0);
        }
        let i = (pos.floor() as usize).min(n - 2);
        let w = pos - i as f64;
        self.coefficients[i] * (1.0 - w) + self.coefficients[i + 1] * w
    }

    /// Four-point Lagrange interpolation, zero outside the band.
    pub fn interpolate_cubic(&self, xi: f64) -> Complex64 {
        let n = self.grid.points();
        let pos = xi / self.grid.dxi() + (n / 2) as f64;
        if !(pos >= 1.0 && pos <= (n - 2) as f64) {
            return self.interpolate_linear(xi);
        }
        let i = (pos.floor() as usize).clamp(1, n - 3);
        let s = pos - i as f64;
        let c = &self.coefficients;
        let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        c[i - 1] * w0 + c[i] * w1 + c[i + 1] * w2 + c[i + 2] * w3
    }

    /// `(int |F|^2 dxi)^{1/2}` by the lattice sum.
    pub fn l2_norm(&self) -> f64 {
        (self.coefficients.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dxi()).sqrt()
    }
}

/// Discrete approximation of `int e^{-i x xi} f(x) dx` on the lattice `xi_k = 2 pi k / L`,
/// including the `dx` weight and the phase of the left endpoint `-L/2`.
pub fn forward_fourier(f: &SampledField) -> Result<SpectralField> {
    check_finite("sampled field", &f.values)?;
    Ok(forward_unchecked(f.grid, f.values.clone()))
}

pub(crate) fn forward_unchecked(grid: SpaceGrid, mut buf: Vec<Complex64>) -> SpectralField {
    let n = grid.points();
    forward_in_place(&mut buf);
    let dx = grid.dx();
    let coefficients = (0..n)
        .map(|i| buf[fft_slot(i, n)] * (dx * parity_sign(signed_index(i, n))))
        .collect();
    SpectralField::from_raw(grid, coefficients)
}

/// Exact inverse of [`forward_fourier`]: `f(x) = (2 pi)^{-1} sum_k F_k e^{i x xi_k} dxi`.
pub fn inverse_fourier(spectrum: &SpectralField) -> Result<SampledField> {
    if spectrum.coefficients.len() != spectrum.grid.points() {
        return Err(LabError::ShapeMismatch("coefficient count differs from grid".into()));
    }
    check_finite("spectral field", &spectrum.coefficients)?;
    Ok(inverse_unchecked(spectrum.grid, &spectrum.coefficients))
}

pub(crate) fn inverse_unchecked(grid: SpaceGrid, coefficients: &[Complex64]) -> SampledField {
    let n = grid.points();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, c) in coefficients.iter().enumerate() {
        buf[fft_slot(i, n)] = c * parity_sign(signed_index(i, n));
    }
    inverse_in_place(&mut buf);
    let scale = 1.0 / grid.length();
    for z in buf.iter_mut() {
        *z *= scale;
    }
    SampledField::from_raw(grid, buf)
}

/// Free Schrödinger evolution. `PhaseSign::Plus` is the group `e^{it d_x^2}`, whose
/// coefficient factor under our transform convention is `e^{-it xi^2}`; `Minus`
/// is `e^{-it d_x^2}`.
pub fn free_propagate(u0: &SampledField, t: f64, sign: PhaseSign) -> Result<SampledField> {
    if !t.is_finite() {
        return Err(LabError::param("t", "must be finite"));
    }
    let mut spec = forward_fourier(u0)?;
    propagate_spectrum(&mut spec, t, sign);
    Ok(inverse_unchecked(spec.grid, &spec.coefficients))
}

pub(crate) fn propagate_spectrum(spec: &mut SpectralField, t: f64, sign: PhaseSign) {
    let grid = spec.grid;
    for (i, c) in spec.coefficients.iter_mut().enumerate() {
        let xi = grid.xi(i);
        *c *= Complex64::from_polar(1.0, -sign.factor() * t * xi * xi);
    }
}

/// Spectral `d/dx` with the unpaired Nyquist mode removed.
pub fn spectral_derivative(f: &SampledField) -> Result<SampledField> {
    let mut spec = forward_fourier(f)?;
    let grid = spec.grid;
    for (i, c) in spec.coefficients.iter_mut().enumerate() {
        *c *= Complex64::new(0.0, grid.xi(i));
    }
    spec.coefficients[0] = Complex64::new(0.0, 0.0);
    Ok(inverse_unchecked(grid, &spec.coefficients))
}

/// Spectral `d^2/dx^2`.
pub fn spectral_second_derivative(f: &SampledField) -> Result<SampledField> {
    let mut spec = forward_fourier(f)?;
    let grid = spec.grid;
    for (i, c) in spec.coefficients.iter_mut().enumerate() {
        let xi = grid.xi(i);
        *c *= -xi * xi;
    }
    Ok(inverse_unchecked(grid, &spec.coefficients))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_field_has_zero_spectrum() {
        let g = SpaceGrid::new(10.0, 32).unwrap();
        let s = forward_fourier(&SampledField::zeros(g)).unwrap();
        assert!(s.coefficients().iter().all(|z| z.norm() == 0.0));
        let back = inverse_fourier(&s).unwrap();
        assert!(back.values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn lattice_mode_is_a_single_spike_of_height_l() {
        let g = SpaceGrid::new(12.0, 64).unwrap();
        let i1 = 32 + 3;
        let xi1 = g.xi(i1);
        let f = SampledField::from_fn(g, |x| Complex64::from_polar(1.0, xi1 * x)).unwrap();
        let s = forward_fourier(&f).unwrap();
        for (i, z) in s.coefficients().iter().enumerate() {
            if i == i1 {
                assert!((z - c(12.0)).norm() < 1e-12);
            } else {
                assert!(z.norm() < 1e-12);
            }
        }
        let back = inverse_fourier(&s).unwrap();
        assert!(back.relative_l2_distance(&f).unwrap() < 1e-13);
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let g = SpaceGrid::new(48.0, 512).unwrap();
        let f = SampledField::from_fn(g, |x| c((-x * x / 2.0).exp())).unwrap();
        let s = forward_fourier(&f).unwrap();
        for (i, z) in s.coefficients().iter().enumerate() {
            let xi = g.xi(i);
            if xi.abs() <= 10.0 {
                let exact = (2.0 * PI).sqrt() * (-xi * xi / 2.0).exp();
                let err = (z - c(exact)).norm();
                // relative to the peak everywhere, pointwise where roundoff allows
                assert!(err <= 1e-8 * (2.0 * PI).sqrt(), "xi={xi} err={err}");
                if exact > 1e-6 {
                    assert!(err <= 1e-8 * exact, "xi={xi} err={err}");
                }
            }
        }
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = SpaceGrid::new(1.0, 4).unwrap();
        let mut v = vec![c(0.0); 4];
        v[2] = c(f64::NAN);
        assert!(matches!(SampledField::new(g, v), Err(LabError::NonFinite { index: 2, .. })));
    }

    #[test]
    fn derivative_of_a_sine() {
        let g = SpaceGrid::new(2.0 * PI, 32).unwrap();
        let f = SampledField::from_fn(g, |x| c((3.0 * x).sin())).unwrap();
        let d = spectral_derivative(&f).unwrap();
        let exact = SampledField::from_fn(g, |x| c(3.0 * (3.0 * x).cos())).unwrap();
        assert!(d.sub(&exact).unwrap().max_abs() < 1e-12);
        let d2 = spectral_second_derivative(&f).unwrap();
        let exact2 = f.scaled(c(-9.0));
        assert!(d2.sub(&exact2).unwrap().max_abs() < 1e-11);
    }
}
