//! Gain from localizing in time: `||psi_delta f||_{X_{0,b'}} / ||f||_{X_{0,b}}` against `delta`.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::norms::{dual, xsb_norm, XsbSpec};
use crate::spectral::{
    free_evolution, spacetime_transform, PhaseSign, SampledField, SpacetimeField, TimeGrid, WindowSpec,
};
use crate::util::log_log_slope;

fn check_regime(r: f64, b: f64, b_prime: f64) -> Result<()> {
    if !(r.is_finite() && r > 1.0) {
        return Err(LabError::param("r", format!("exponent must lie in (1, inf), got {r}")));
    }
    let upper = 1.0 / r > b && b >= b_prime && b_prime >= 0.0;
    let lower = 0.0 >= b && b >= b_prime && b_prime > -1.0 / dual(r);
    if !(upper || lower) {
        return Err(LabError::param(
            "b",
            format!("(b, b') = ({b}, {b_prime}) needs 1/r > b >= b' >= 0 or 0 >= b >= b' > -1/r' with r = {r}"),
        ));
    }
    Ok(())
}

/// The ratio for each `delta`.
pub fn time_localization_ratios(f: &SpacetimeField, r: f64, b: f64, b_prime: f64, deltas: &[f64]) -> Result<Vec<f64>> {
    check_regime(r, b, b_prime)?;
    let whole = xsb_norm(&spacetime_transform(f, WindowSpec::None)?, XsbSpec::new(0.0, b, r, PhaseSign::Plus)?)?;
    if !(whole > 0.0) {
        return Err(LabError::Insufficient("f has zero norm".into()));
    }
    let spec = XsbSpec::new(0.0, b_prime, r, PhaseSign::Plus)?;
    deltas
        .iter()
        .map(|&delta| {
            let window = WindowSpec::smooth(0.0, delta)?;
            window.check_fits(f.times())?;
            let localized = spacetime_transform(f, window)?;
            Ok(xsb_norm(&localized, spec)? / whole)
        })
        .collect()
}

/// Log-log slope of [`time_localization_ratios`] in `delta`.
pub fn time_localization_slope(f: &SpacetimeField, r: f64, b: f64, b_prime: f64, deltas: &[f64]) -> Result<f64> {
    if deltas.len() < 3 {
        return Err(LabError::param("deltas", format!("need at least 3 deltas, got {}", deltas.len())));
    }
    let ratios = time_localization_ratios(f, r, b, b_prime, deltas)?;
    log_log_slope(deltas, &ratios)
}

/// `psi(t) |t|^a e^{it d^2} u0` with `a = b - 1/r + eta`: a free solution carrying a time
/// profile that lies in the `b` scale with only `eta` to spare.
///
/// The grid should avoid `t = 0` when `a < 0`; use a start offset by half a step.
pub fn marginal_trajectory(u0: &SampledField, times: TimeGrid, r: f64, b: f64, eta: f64) -> Result<SpacetimeField> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(LabError::param("eta", "margin must be finite and > 0"));
    }
    let a = b - 1.0 / r + eta;
    let cutoff = WindowSpec::smooth(0.0, 0.2 * times.span())?;
    cutoff.check_fits(&times)?;
    let f = free_evolution(u0, times, PhaseSign::Plus)?;
    Ok(f.modulated_in_time(|t| {
        let g = if t == 0.0 { 0.0 } else { cutoff.profile(t) * t.abs().powf(a) };
        Complex64::new(g, 0.0)
    }))
}
