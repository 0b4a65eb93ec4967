//! Deterministic random data factory.
//!
//! Every profile is a continuum function of `x` (or of `xi` for the spectral
//! profiles) whose random parameters are drawn from a ChaCha8 stream. The
//! generator is counter based and platform independent, so `(profile, seed,
//! stream)` fixes the function and any grid merely samples it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::spectral::{inverse_fourier, japanese, SampledField, SpaceGrid, SpectralField};

/// Shape family of generated data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `e^{i theta} e^{-x^2 / (2 sigma^2)}`, random phase and width.
    Gaussian,
    /// Smooth compactly supported bump with random centre and width.
    Bump,
    /// Bump times `e^{i kappa x}`; `kappa` is the modulation frequency.
    ModulatedBump,
    /// Random complex amplitudes on an even comb of frequencies in `|xi| <= band`,
    /// each carried by a Gaussian envelope of width 3.
    WhiteSpectrum { band: f64 },
    /// Zero-phase spectrum `<xi>^{-beta}` with a smooth cut at `|xi| = cutoff`.
    PowerLaw { beta: f64, cutoff: f64 },
    /// `sech(x - x0) e^{i kappa x}`, random centre and speed.
    SolitonLike,
}

/// Profile plus amplitude and modulation frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataProfile {
    pub kind: ProfileKind,
    pub amplitude: f64,
    pub modulation: f64,
}

impl DataProfile {
    pub fn new(kind: ProfileKind, amplitude: f64) -> Self {
        Self {
            kind,
            amplitude,
            modulation: 0.0,
        }
    }

    pub fn gaussian(amplitude: f64) -> Self {
        Self::new(ProfileKind::Gaussian, amplitude)
    }

    pub fn with_modulation(mut self, modulation: f64) -> Self {
        self.modulation = modulation;
        self
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            ProfileKind::Gaussian => "gaussian",
            ProfileKind::Bump => "bump",
            ProfileKind::ModulatedBump => "modulated-bump",
            ProfileKind::WhiteSpectrum { .. } => "white-spectrum",
            ProfileKind::PowerLaw { .. } => "power-law",
            ProfileKind::SolitonLike => "soliton-like",
        }
    }

    /// Parse the textual tag used in configuration files.
    pub fn from_tag(tag: &str, amplitude: f64, modulation: f64, beta: f64) -> Result<Self> {
        let kind = match tag {
            "gaussian" => ProfileKind::Gaussian,
            "bump" => ProfileKind::Bump,
            "modulated-bump" => ProfileKind::ModulatedBump,
            "white-spectrum" => ProfileKind::WhiteSpectrum { band: 4.0 },
            "power-law" => ProfileKind::PowerLaw { beta, cutoff: 40.0 },
            "soliton-like" => ProfileKind::SolitonLike,
            other => {
                return Err(LabError::param(
                    "profile",
                    format!(
                        "unknown profile `{other}`; expected gaussian, bump, modulated-bump, white-spectrum, power-law or soliton-like"
                    ),
                ))
            }
        };
        Ok(Self {
            kind,
            amplitude,
            modulation,
        })
    }

    fn validate(&self) -> Result<()> {
        if !self.amplitude.is_finite() || !self.modulation.is_finite() {
            return Err(LabError::param("amplitude", "amplitude and modulation must be finite"));
        }
        match self.kind {
            ProfileKind::WhiteSpectrum { band } if !(band > 0.0 && band.is_finite()) => {
                Err(LabError::param("band", "white-spectrum band must be > 0"))
            }
            ProfileKind::PowerLaw { beta, cutoff } if !(beta.is_finite() && cutoff > 0.0 && cutoff.is_finite()) => {
                Err(LabError::param("beta", "power-law needs finite beta and a positive cutoff"))
            }
            _ => Ok(()),
        }
    }
}

/// The generator behind every draw: ChaCha8 keyed by `seed`, on stream `stream`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn smooth_bump(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - y * y)).exp()
    }
}

/// Smooth cut equal to one for `|xi| <= 0.8 c` and zero beyond `c`.
fn spectral_taper(xi: f64, cutoff: f64) -> f64 {
    let s = (xi.abs() / cutoff - 0.8) / 0.2;
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / (1.0 - s)).exp();
        a / (a + (-1.0 / s).exp())
    }
}

/// Draw a field from `(profile, seed)` on stream 0.
pub fn random_data(profile: &DataProfile, seed: u64, grid: SpaceGrid) -> Result<SampledField> {
    random_data_stream(profile, seed, 0, grid)
}

/// Draw a field from `(profile, seed, stream)`; distinct streams are independent.
pub fn random_data_stream(profile: &DataProfile, seed: u64, stream: u64, grid: SpaceGrid) -> Result<SampledField> {
    profile.validate()?;
    let mut rng = rng_for(seed, stream);
    let a = profile.amplitude;
    let kappa = profile.modulation;
    match profile.kind {
        ProfileKind::Gaussian => {
            let theta = rng.random_range(0.0..2.0 * PI);
            let sigma = rng.random_range(0.75..1.5);
            let phase = Complex64::from_polar(a, theta);
            SampledField::from_fn(grid, |x| phase * (-x * x / (2.0 * sigma * sigma)).exp())
        }
        ProfileKind::Bump | ProfileKind::ModulatedBump => {
            let theta = rng.random_range(0.0..2.0 * PI);
            let centre = rng.random_range(-2.0..2.0);
            let width = rng.random_range(2.0..4.0);
            let k = if matches!(profile.kind, ProfileKind::ModulatedBump) { kappa } else { 0.0 };
            SampledField::from_fn(grid, |x| {
                Complex64::from_polar(a * smooth_bump((x - centre) / width), theta + k * x)
            })
        }
        ProfileKind::WhiteSpectrum { band } => {
            let modes = 8usize;
            let coeffs: Vec<Complex64> = (0..=2 * modes)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im) / ((2 * modes + 1) as f64).sqrt()
                })
                .collect();
            let step = band / modes as f64;
            SampledField::from_fn(grid, |x| {
                let envelope = (-x * x / 18.0).exp();
                let sum: Complex64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * Complex64::from_polar(1.0, (j as f64 - modes as f64) * step * x))
                    .sum();
                sum * (a * envelope)
            })
        }
        ProfileKind::PowerLaw { beta, cutoff } => {
            let spec = SpectralField::from_fn(grid, |xi| {
                Complex64::new(a * japanese(xi).powf(-beta) * spectral_taper(xi, cutoff), 0.0)
            })?;
            inverse_fourier(&spec)
        }
        ProfileKind::SolitonLike => {
            let centre = rng.random_range(-2.0..2.0);
            let speed = rng.random_range(-2.0..2.0);
            SampledField::from_fn(grid, |x| Complex64::from_polar(a / (x - centre).cosh(), (speed + kappa) * x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bits() {
        let g = SpaceGrid::new(40.0, 128).unwrap();
        for tag in ["gaussian", "bump", "modulated-bump", "white-spectrum", "power-law", "soliton-like"] {
            let p = DataProfile::from_tag(tag, 1.3, 2.0, 0.6).unwrap();
            let a = random_data(&p, 7, g).unwrap();
            let b = random_data(&p, 7, g).unwrap();
            assert_eq!(a.values(), b.values(), "{tag}");
        }
        let p = DataProfile::gaussian(1.0);
        assert_ne!(
            random_data_stream(&p, 7, 1, g).unwrap().values(),
            random_data_stream(&p, 7, 2, g).unwrap().values()
        );
    }

    #[test]
    fn gaussian_peak_equals_amplitude() {
        let g = SpaceGrid::new(40.0, 256).unwrap();
        let f = random_data(&DataProfile::gaussian(2.5), 11, g).unwrap();
        assert!((f.max_abs() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn unknown_tag_is_rejected() {
        assert!(DataProfile::from_tag("triangle", 1.0, 0.0, 0.0).is_err());
    }
}
