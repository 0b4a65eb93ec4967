//! Small numerical helpers shared by the experiment modules.

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// Least-squares line through `(x, y)`; returns `(slope, intercept)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(LabError::ShapeMismatch(format!("{} abscissae, {} ordinates", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(LabError::Insufficient("a line fit needs at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(LabError::Insufficient("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Slope of `log y` against `log x`. All values must be positive.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(LabError::param("log-log fit", "all values must be finite and positive"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    Ok(linear_fit(&lx, &ly)?.0)
}

fn simpson_step(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of a complex integrand on `[a, b]`.
///
/// The interval is first cut into `pieces` panels so that narrow features are
/// not skipped by the initial coarse sample.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, pieces: usize) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    let panel_tol = tol / pieces as f64;
    (0..pieces)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == pieces { b } else { lo + h };
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (fa + fm * 4.0 + fb) * ((hi - lo) / 6.0);
            simpson_step(f, lo, hi, fa, fm, fb, whole, panel_tol, 40)
        })
        .sum()
}
