//! Spectral laboratory for multilinear space-time Fourier estimates of the free
//! Schrödinger group, Fourier-Lebesgue and restriction norms, the DNLS gauge
//! transform, explicit soliton families and a data-splitting globalization scheme.

pub mod error;
pub mod spectral;

pub use error::{LabError, Result};
pub mod norms;
pub mod util;
pub mod data;
pub mod estimates;
pub mod gauge;
pub mod solvers;
pub mod exact;
pub mod globalizer;
