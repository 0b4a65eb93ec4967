//! The gauge transform `G f = e^{-i Phi} f` with `Phi(x) = int_{-inf}^x |f|^2`, its inverse,
//! and Lipschitz probes in Fourier-Lebesgue spaces.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{random_data_stream, DataProfile};
use crate::error::{LabError, Result};
use crate::norms::{fourier_lebesgue_norm, FourierLebesgueSpec};
use crate::spectral::{spectral_derivative, SampledField, SpaceGrid};

/// `|f|` at the left edge, relative to the peak, above which the lower limit is not faithful.
pub const LEFT_DECAY_LIMIT: f64 = 1e-8;

/// Default power in the Lipschitz bound.
pub const DEFAULT_ALPHA: f64 = 5.0;

/// Cumulative mass from the left edge.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePhase {
    pub values: Vec<f64>,
    /// Lattice mass `sum |f|^2 dx`, the limit of the phase at `+inf`.
    pub total: f64,
}

fn check_left_decay(f: &SampledField) -> Result<()> {
    let peak = f.max_abs();
    if peak == 0.0 {
        return Ok(());
    }
    let measured = f.values()[0].norm() / peak;
    if measured > LEFT_DECAY_LIMIT {
        return Err(LabError::BoundaryDecay {
            measured,
            limit: LEFT_DECAY_LIMIT,
        });
    }
    Ok(())
}

/// `Phi` by the cumulative trapezoid rule with its first Euler-Maclaurin end correction
/// `-dx^2 (g'(x) - g'(x_0)) / 12`, `g = |f|^2`, which lifts the rule from second to fourth order.
pub fn gauge_phase(f: &SampledField) -> Result<GaugePhase> {
    check_left_decay(f)?;
    let dx = f.grid().dx();
    let density = SampledField::new(*f.grid(), f.values().iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect())?;
    let slope = spectral_derivative(&density)?;
    let g0 = slope.values()[0].re;
    let mut acc = 0.0;
    let mut prev = density.values()[0].re;
    let values = density
        .values()
        .iter()
        .zip(slope.values())
        .enumerate()
        .map(|(j, (g, dg))| {
            if j > 0 {
                acc += 0.5 * dx * (prev + g.re);
            }
            prev = g.re;
            acc - dx * dx * (dg.re - g0) / 12.0
        })
        .collect();
    Ok(GaugePhase { values, total: f.mass() })
}

fn rotate(f: &SampledField, sign: f64) -> Result<SampledField> {
    let phase = gauge_phase(f)?;
    let values = f
        .values()
        .iter()
        .zip(&phase.values)
        .map(|(z, p)| z * Complex64::from_polar(1.0, sign * p))
        .collect();
    SampledField::new(*f.grid(), values)
}

/// `G f = e^{-i Phi} f`.
pub fn gauge_forward(f: &SampledField) -> Result<SampledField> {
    rotate(f, -1.0)
}

/// `G^{-1} f = e^{+i Phi} f`; `Phi` depends only on `|f|`, which `G` preserves.
pub fn gauge_inverse(f: &SampledField) -> Result<SampledField> {
    rotate(f, 1.0)
}

/// `||Gu - Gv|| / ((1 + ||u|| + ||v||)^{alpha + 1} ||u - v||)` in `H^r_s` with `alpha = 5`.
pub fn gauge_lipschitz_probe(u: &SampledField, v: &SampledField, s: f64, r: f64) -> Result<f64> {
    gauge_lipschitz_probe_with(u, v, s, r, DEFAULT_ALPHA)
}

pub fn gauge_lipschitz_probe_with(u: &SampledField, v: &SampledField, s: f64, r: f64, alpha: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&s) {
        return Err(LabError::param("s", format!("probe covers s in [1/2, 1], got {s}")));
    }
    if !(r > 1.0 && r <= 2.0) {
        return Err(LabError::param("r", format!("probe covers r in (1, 2], got {r}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(LabError::param("alpha", "must be finite and >= 0"));
    }
    let spec = FourierLebesgueSpec::new(s, r)?;
    let diff = fourier_lebesgue_norm(&u.sub(v)?, spec)?;
    if diff == 0.0 {
        return Err(LabError::param("v", "u = v makes the difference quotient 0/0"));
    }
    let (nu, nv) = (fourier_lebesgue_norm(u, spec)?, fourier_lebesgue_norm(v, spec)?);
    let num = fourier_lebesgue_norm(&gauge_forward(u)?.sub(&gauge_forward(v)?)?, spec)?;
    Ok(num / ((1.0 + nu + nv).powf(alpha + 1.0) * diff))
}

/// Ensemble of the probe over pairs drawn from the ball of radius `radius` in `H^r_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzEnsemble {
    pub s: f64,
    pub r: f64,
    pub alpha: f64,
    pub radius: f64,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// Pair `k` uses streams `2k` and `2k + 1`; each member is rescaled to a norm drawn in
/// `(0, radius]` so the pair lies in the ball. The draws do not depend on the grid.
pub fn gauge_lipschitz_ensemble(
    profile: &DataProfile,
    pairs: usize,
    seed: u64,
    grid: SpaceGrid,
    s: f64,
    r: f64,
    radius: f64,
) -> Result<LipschitzEnsemble> {
    use rand::Rng;
    if pairs == 0 {
        return Err(LabError::param("pairs", "need at least one pair"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(LabError::param("radius", "must be finite and > 0"));
    }
    let spec = FourierLebesgueSpec::new(s, r)?;
    let member = |stream: u64| -> Result<SampledField> {
        let f = random_data_stream(profile, seed, stream, grid)?;
        let target = radius * crate::data::rng_for(seed ^ 0x9e37_79b9_7f4a_7c15, stream).random_range(0.05..1.0);
        let norm = fourier_lebesgue_norm(&f, spec)?;
        Ok(f.scaled(Complex64::new(target / norm, 0.0)))
    };
    let ratios = (0..pairs as u64)
        .into_par_iter()
        .map(|k| gauge_lipschitz_probe(&member(2 * k)?, &member(2 * k + 1)?, s, r))
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(LipschitzEnsemble {
        s,
        r,
        alpha: DEFAULT_ALPHA,
        radius,
        ratios,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(grid: SpaceGrid) -> SampledField {
        SampledField::from_fn(grid, |x| Complex64::new((-x * x).exp(), 0.3 * x * (-x * x).exp())).unwrap()
    }

    #[test]
    fn zero_field_is_fixed() {
        let g = SpaceGrid::new(20.0, 64).unwrap();
        let z = SampledField::zeros(g);
        assert_eq!(gauge_forward(&z).unwrap(), z);
        assert_eq!(gauge_inverse(&z).unwrap(), z);
    }

    #[test]
    fn phase_is_monotone_and_ends_at_the_mass() {
        let g = SpaceGrid::new(30.0, 512).unwrap();
        let f = bump(g);
        let p = gauge_phase(&f).unwrap();
        assert!(p.values.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        assert_eq!(p.values[0], 0.0);
        assert!((p.values.last().unwrap() - p.total).abs() < 1e-10);
    }

    #[test]
    fn unit_mass_bump_turns_by_one_radian() {
        let g = SpaceGrid::new(30.0, 512).unwrap();
        let f = bump(g);
        let f = f.scaled(Complex64::new(1.0 / f.l2_norm(), 0.0));
        let gf = gauge_forward(&f).unwrap();
        let j = g.points() - 1;
        // Far right the field is tiny; compare phases where it is still resolvable.
        let k = (0..g.points()).rev().find(|&k| f.values()[k].norm() > 1e-6).unwrap();
        let turn = (gf.values()[k] / f.values()[k]).arg();
        assert!((turn + 1.0).abs() < 1e-8, "phase {turn}");
        assert!(j >= k);
    }

    #[test]
    fn undecayed_data_are_rejected() {
        let g = SpaceGrid::new(10.0, 64).unwrap();
        let f = SampledField::from_fn(g, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(gauge_forward(&f), Err(LabError::BoundaryDecay { .. })));
    }

    #[test]
    fn identical_pair_is_rejected() {
        let g = SpaceGrid::new(20.0, 128).unwrap();
        let f = bump(g);
        assert!(gauge_lipschitz_probe(&f, &f, 0.5, 2.0).is_err());
        assert!(gauge_lipschitz_probe(&f, &f.scaled(Complex64::new(0.5, 0.0)), 0.2, 2.0).is_err());
    }
}
