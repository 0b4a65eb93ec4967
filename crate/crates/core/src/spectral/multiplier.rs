use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::spacetime::SpacetimeSpectrum;
use super::{japanese, PhaseSign};
use crate::error::{LabError, Result};

/// Fourier multipliers used by the estimates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MultiplierSpec {
    /// `|xi|^s`. For `s < 0` the value at `xi = 0` must be supplied.
    Riesz { exponent: f64, zero_mode: Option<f64> },
    /// `<xi>^s`.
    Bessel { exponent: f64 },
    /// `<tau + xi^2>^b` for `Plus`, `<tau - xi^2>^b` for `Minus`. Space-time only.
    Modulation { exponent: f64, sign: PhaseSign },
    /// `e^{-i sign t xi^2}`, the coefficient factor of the free group.
    Phase { time: f64, sign: PhaseSign },
}

impl MultiplierSpec {
    pub fn riesz(exponent: f64) -> Self {
        let zero_mode = (exponent < 0.0).then_some(0.0);
        MultiplierSpec::Riesz { exponent, zero_mode }
    }

    pub fn bessel(exponent: f64) -> Self {
        MultiplierSpec::Bessel { exponent }
    }

    fn validate(&self) -> Result<()> {
        let finite = match *self {
            MultiplierSpec::Riesz { exponent, zero_mode } => {
                if exponent < 0.0 && zero_mode.is_none() {
                    return Err(LabError::UndefinedMultiplier(format!(
                        "riesz exponent {exponent} < 0 needs a zero-mode rule"
                    )));
                }
                exponent.is_finite() && zero_mode.is_none_or(f64::is_finite)
            }
            MultiplierSpec::Bessel { exponent } | MultiplierSpec::Modulation { exponent, .. } => exponent.is_finite(),
            MultiplierSpec::Phase { time, .. } => time.is_finite(),
        };
        if finite {
            Ok(())
        } else {
            Err(LabError::param("multiplier", "exponent and zero-mode value must be finite"))
        }
    }

    /// Symbol as a function of `xi` alone; `None` for modulation weights.
    fn spatial_value(&self, xi: f64) -> Option<Complex64> {
        match *self {
            MultiplierSpec::Riesz { exponent, zero_mode } => Some(Complex64::new(
                if xi == 0.0 {
                    if exponent > 0.0 {
                        0.0
                    } else if exponent == 0.0 {
                        1.0
                    } else {
                        zero_mode.unwrap_or(0.0)
                    }
                } else {
                    xi.abs().powf(exponent)
                },
                0.0,
            )),
            MultiplierSpec::Bessel { exponent } => Some(Complex64::new(japanese(xi).powf(exponent), 0.0)),
            MultiplierSpec::Phase { time, sign } => Some(Complex64::from_polar(1.0, -sign.factor() * time * xi * xi)),
            MultiplierSpec::Modulation { .. } => None,
        }
    }

    /// Symbol at a space-time frequency.
    pub fn value(&self, xi: f64, tau: f64) -> Complex64 {
        match *self {
            MultiplierSpec::Modulation { exponent, sign } => {
                Complex64::new(japanese(tau + sign.factor() * xi * xi).powf(exponent), 0.0)
            }
            _ => self.spatial_value(xi).unwrap_or(Complex64::new(1.0, 0.0)),
        }
    }
}

/// Pointwise multiplication of spectral coefficients by a symbol.
pub trait ApplyMultiplier: Sized {
    fn apply_multiplier(&self, m: &MultiplierSpec) -> Result<Self>;
}

impl ApplyMultiplier for SpectralField {
    fn apply_multiplier(&self, m: &MultiplierSpec) -> Result<Self> {
        m.validate()?;
        let grid = *self.grid();
        let mut out = self.clone();
        for (i, c) in out.coefficients_mut().iter_mut().enumerate() {
            let v = m.spatial_value(grid.xi(i)).ok_or_else(|| {
                LabError::param("multiplier", "modulation weights need a space-time spectrum")
            })?;
            *c *= v;
        }
        Ok(out)
    }
}

impl ApplyMultiplier for SpacetimeSpectrum {
    fn apply_multiplier(&self, m: &MultiplierSpec) -> Result<Self> {
        m.validate()?;
        let grid = *self.grid();
        let times = *self.times();
        let mut out = self.clone();
        for ((i, l), c) in out.coefficients_mut().indexed_iter_mut() {
            *c *= m.value(grid.xi(i), times.tau(l));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_fourier, SampledField, SpaceGrid};
    use std::f64::consts::PI;

    fn gaussian_spectrum() -> SpectralField {
        let g = SpaceGrid::new(40.0, 256).unwrap();
        let f = SampledField::from_fn(g, |x| Complex64::new((-x * x).exp(), 0.3 * x * (-x * x).exp())).unwrap();
        forward_fourier(&f).unwrap()
    }

    #[test]
    fn bessel_zero_is_identity() {
        let s = gaussian_spectrum();
        assert_eq!(s.apply_multiplier(&MultiplierSpec::bessel(0.0)).unwrap(), s);
    }

    #[test]
    fn bessel_inverse_pair_round_trips() {
        let s = gaussian_spectrum();
        let there = s.apply_multiplier(&MultiplierSpec::bessel(1.7)).unwrap();
        let back = there.apply_multiplier(&MultiplierSpec::bessel(-1.7)).unwrap();
        for (a, b) in back.coefficients().iter().zip(s.coefficients()) {
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn riesz_one_scales_a_mode_at_two() {
        let g = SpaceGrid::new(2.0 * PI, 16).unwrap();
        let i2 = g.nearest_index(2.0).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); 16];
        c[i2] = Complex64::new(1.5, -0.5);
        let s = SpectralField::new(g, c).unwrap();
        let out = s.apply_multiplier(&MultiplierSpec::riesz(1.0)).unwrap();
        assert!((out.coefficients()[i2] - Complex64::new(3.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn negative_riesz_without_rule_is_rejected() {
        let s = gaussian_spectrum();
        let m = MultiplierSpec::Riesz { exponent: -0.5, zero_mode: None };
        assert!(matches!(s.apply_multiplier(&m), Err(LabError::UndefinedMultiplier(_))));
        assert!(s.apply_multiplier(&MultiplierSpec::riesz(-0.5)).is_ok());
    }

    #[test]
    fn modulation_needs_time_frequency() {
        let s = gaussian_spectrum();
        let m = MultiplierSpec::Modulation { exponent: 0.5, sign: PhaseSign::Plus };
        assert!(s.apply_multiplier(&m).is_err());
    }
}
