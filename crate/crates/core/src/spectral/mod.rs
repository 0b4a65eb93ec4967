//! Grids, Fourier transforms in space and space-time, Fourier multipliers and
//! the free Schrödinger group.
//!
//! Convention: `F f(xi) = int e^{-i x xi} f(x) dx` on the box `[-L/2, L/2)`, and
//! the same kernel `e^{-i t tau}` in time. Coefficients are stored in increasing
//! frequency order, so index 0 always holds the unpaired Nyquist mode.

pub(crate) mod fft;
mod field;
mod grid;
mod multiplier;
mod spacetime;

pub use field::{
    forward_fourier, free_propagate, inverse_fourier, spectral_derivative, spectral_second_derivative,
    SampledField, SpectralField,
};
pub use grid::{SpaceGrid, TimeGrid};
pub use multiplier::{ApplyMultiplier, MultiplierSpec};
pub use spacetime::{
    free_evolution, inverse_spacetime_transform, spacetime_transform, SpacetimeField, SpacetimeSpectrum,
    WindowSpec,
};

pub(crate) use field::{forward_unchecked, inverse_unchecked, propagate_spectrum};

use serde::{Deserialize, Serialize};

/// Orientation of the free group or of the modulation weight.
///
/// `Plus` selects `e^{it d_x^2}` and the weight `<tau + xi^2>`, whose spectra live
/// on `tau = -xi^2`. `Minus` selects `e^{-it d_x^2}` and `<tau - xi^2>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    pub fn factor(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            PhaseSign::Plus => PhaseSign::Minus,
            PhaseSign::Minus => PhaseSign::Plus,
        }
    }
}

/// `<xi> = (1 + xi^2)^{1/2}`.
#[inline]
pub fn japanese(xi: f64) -> f64 {
    (1.0 + xi * xi).sqrt()
}
