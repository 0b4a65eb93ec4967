//! Fourier-Lebesgue, mixed space-time, restriction (`X^r_{s,b}`) and plain
//! Lebesgue norms, all evaluated by lattice sums.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::{
    forward_fourier, japanese, PhaseSign, SampledField, SpacetimeField, SpacetimeSpectrum, SpectralField,
};

/// Dual exponent `p' = p / (p - 1)`.
pub fn dual(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(LabError::param(name, format!("exponent must lie in (1, inf), got {p}")));
    }
    Ok(())
}

/// `||<xi>^s u^||_{L^{r'}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierLebesgueSpec {
    pub s: f64,
    pub r: f64,
}

impl FourierLebesgueSpec {
    pub fn new(s: f64, r: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(LabError::param("s", "regularity must be finite"));
        }
        check_exponent("r", r)?;
        Ok(Self { s, r })
    }

    /// Same space, specified through the dual exponent `r'`.
    pub fn from_dual(s: f64, r_dual: f64) -> Result<Self> {
        check_exponent("r'", r_dual)?;
        Self::new(s, dual(r_dual))
    }

    pub fn r_dual(&self) -> f64 {
        dual(self.r)
    }
}

/// Time exponent `p` inside, space exponent `q` outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedNormSpec {
    pub q: f64,
    pub p: f64,
}

impl MixedNormSpec {
    pub fn new(q: f64, p: f64) -> Result<Self> {
        check_exponent("q", q)?;
        check_exponent("p", p)?;
        Ok(Self { q, p })
    }

    /// The diagonal case `q = p`.
    pub fn diagonal(p: f64) -> Result<Self> {
        Self::new(p, p)
    }
}

/// Weight `<xi>^s <tau +- xi^2>^b` in `L^{r'}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XsbSpec {
    pub s: f64,
    pub b: f64,
    pub r: f64,
    pub sign: PhaseSign,
}

impl XsbSpec {
    pub fn new(s: f64, b: f64, r: f64, sign: PhaseSign) -> Result<Self> {
        if !(s.is_finite() && b.is_finite()) {
            return Err(LabError::param("s, b", "must be finite"));
        }
        check_exponent("r", r)?;
        Ok(Self { s, b, r, sign })
    }

    pub fn r_dual(&self) -> f64 {
        dual(self.r)
    }
}

/// `(int (int |f|^{p_x} dx)^{p_t/p_x} dt)^{1/p_t}` in physical space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LebesgueSpacetimeSpec {
    pub px: f64,
    pub pt: f64,
}

impl LebesgueSpacetimeSpec {
    pub fn new(px: f64, pt: f64) -> Result<Self> {
        for (name, p) in [("p_x", px), ("p_t", pt)] {
            if !(p.is_finite() && p >= 1.0) {
                return Err(LabError::param(name, format!("exponent must be finite and >= 1, got {p}")));
            }
        }
        Ok(Self { px, pt })
    }

    pub fn single(p: f64) -> Result<Self> {
        Self::new(p, p)
    }
}

/// Any of the norms above.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormSpec {
    FourierLebesgue(FourierLebesgueSpec),
    Mixed(MixedNormSpec),
    Xsb(XsbSpec),
    Lebesgue(LebesgueSpacetimeSpec),
}

/// Fourier-Lebesgue norm of a spectrum already on the lattice.
pub fn fourier_lebesgue_norm_of_spectrum(f: &SpectralField, spec: FourierLebesgueSpec) -> f64 {
    let rd = spec.r_dual();
    let grid = f.grid();
    let sum: f64 = f
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| japanese(grid.xi(i)).powf(spec.s * rd) * c.norm().powf(rd))
        .sum();
    (sum * grid.dxi()).powf(1.0 / rd)
}

pub fn fourier_lebesgue_norm(u: &SampledField, spec: FourierLebesgueSpec) -> Result<f64> {
    Ok(fourier_lebesgue_norm_of_spectrum(&forward_fourier(u)?, spec))
}

/// Row-wise `int |F(xi, tau)|^{p'} w(xi, tau) dtau`, collected in index order.
fn row_integrals(f: &SpacetimeSpectrum, exponent: f64, weight: impl Fn(f64, f64) -> f64 + Sync) -> Vec<f64> {
    let coeffs = f.coefficients();
    let dtau = f.times().dtau();
    (0..f.grid().points())
        .into_par_iter()
        .map(|i| {
            let xi = f.xi(i);
            coeffs
                .row(i)
                .iter()
                .enumerate()
                .map(|(l, c)| weight(xi, f.tau(l)) * c.norm().powf(exponent))
                .sum::<f64>()
                * dtau
        })
        .collect()
}

pub fn mixed_norm(f: &SpacetimeSpectrum, spec: MixedNormSpec) -> Result<f64> {
    let (qd, pd) = (dual(spec.q), dual(spec.p));
    let rows = row_integrals(f, pd, |_, _| 1.0);
    let sum: f64 = rows.iter().map(|v| v.powf(qd / pd)).sum();
    Ok((sum * f.grid().dxi()).powf(1.0 / qd))
}

/// `L^{p'}` norm of the whole spectrum, the diagonal mixed norm computed in one pass.
pub fn diagonal_norm(f: &SpacetimeSpectrum, p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    let pd = dual(p);
    let sum: f64 = f.coefficients().iter().map(|c| c.norm().powf(pd)).sum();
    Ok((sum * f.cell()).powf(1.0 / pd))
}

pub fn xsb_norm(f: &SpacetimeSpectrum, spec: XsbSpec) -> Result<f64> {
    let rd = spec.r_dual();
    let sg = spec.sign.factor();
    let rows = row_integrals(f, rd, |xi, tau| {
        japanese(xi).powf(spec.s * rd) * japanese(tau + sg * xi * xi).powf(spec.b * rd)
    });
    Ok((rows.iter().sum::<f64>() * f.grid().dxi()).powf(1.0 / rd))
}

pub fn lebesgue_spacetime_norm(f: &SpacetimeField, spec: LebesgueSpacetimeSpec) -> Result<f64> {
    let (dx, dt) = (f.grid().dx(), f.times().dt());
    let values = f.values();
    let per_time: Vec<f64> = (0..f.times().count())
        .into_par_iter()
        .map(|l| values.column(l).iter().map(|z| z.norm().powf(spec.px)).sum::<f64>() * dx)
        .collect();
    let sum: f64 = per_time.iter().map(|v| v.powf(spec.pt / spec.px)).sum();
    Ok((sum * dt).powf(1.0 / spec.pt))
}

/// `(int |f|^p dx)^{1/p}` on the periodic box.
pub fn lebesgue_norm(f: &SampledField, p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(LabError::param("p", format!("exponent must be finite and >= 1, got {p}")));
    }
    let sum: f64 = f.values().iter().map(|z| z.norm().powf(p)).sum();
    Ok((sum * f.grid().dx()).powf(1.0 / p))
}

/// Evaluate a tagged norm on whichever representation it needs.
pub fn evaluate(spec: &NormSpec, field: &SpacetimeField, spectrum: &SpacetimeSpectrum) -> Result<f64> {
    match *spec {
        NormSpec::Mixed(m) => mixed_norm(spectrum, m),
        NormSpec::Xsb(x) => xsb_norm(spectrum, x),
        NormSpec::Lebesgue(l) => lebesgue_spacetime_norm(field, l),
        NormSpec::FourierLebesgue(_) => Err(LabError::param(
            "norm",
            "Fourier-Lebesgue norms act on spatial fields, not space-time fields",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{inverse_fourier, spacetime_transform, SpaceGrid, TimeGrid, WindowSpec};
    use ndarray::Array2;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn indicator_spectrum_has_unit_norm() {
        // dxi = 1/64, so [0, 1) holds exactly 64 lattice points
        let g = SpaceGrid::new(128.0 * PI, 512).unwrap();
        let spec = SpectralField::from_fn(g, |xi| c(if (0.0..1.0 - 1e-12).contains(&xi) { 1.0 } else { 0.0 })).unwrap();
        let u = inverse_fourier(&spec).unwrap();
        for r in [1.1, 1.5, 2.0, 3.0, 10.0] {
            let v = fourier_lebesgue_norm(&u, FourierLebesgueSpec::new(0.0, r).unwrap()).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "r={r} v={v}");
        }
    }

    #[test]
    fn plancherel_at_r_two() {
        let g = SpaceGrid::new(40.0, 256).unwrap();
        let u = SampledField::from_fn(g, |x| Complex64::new((-x * x).exp(), x * (-x * x / 2.0).exp())).unwrap();
        let v = fourier_lebesgue_norm(&u, FourierLebesgueSpec::new(0.0, 2.0).unwrap()).unwrap();
        let direct = u.l2_norm();
        assert!(((v / (2.0 * PI).sqrt()) - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn dual_bookkeeping_is_consistent() {
        let a = FourierLebesgueSpec::new(0.3, 1.6).unwrap();
        let b = FourierLebesgueSpec::from_dual(0.3, a.r_dual()).unwrap();
        assert!((a.r - b.r).abs() < 1e-12);
        assert!((1.0 / a.r + 1.0 / a.r_dual() - 1.0).abs() < 1e-15);
        assert!(FourierLebesgueSpec::new(0.0, 1.0).is_err());
    }

    #[test]
    fn separable_spectrum_factorizes() {
        let g = SpaceGrid::new(30.0, 64).unwrap();
        let tg = TimeGrid::from_zero(12.0, 32).unwrap();
        let a = |xi: f64| (-xi * xi / 3.0).exp();
        let b = |tau: f64| 1.0 / (1.0 + tau * tau);
        let coeffs = Array2::from_shape_fn((64, 32), |(i, l)| c(a(g.xi(i)) * b(tg.tau(l))));
        let f = SpacetimeSpectrum::from_parts(g, tg, coeffs, WindowSpec::None).unwrap();
        let spec = MixedNormSpec::new(1.5, 2.5).unwrap();
        let (qd, pd) = (dual(1.5), dual(2.5));
        let na = (g.frequencies().iter().map(|&x| a(x).powf(qd)).sum::<f64>() * g.dxi()).powf(1.0 / qd);
        let nb = (tg.frequencies().iter().map(|&t| b(t).powf(pd)).sum::<f64>() * tg.dtau()).powf(1.0 / pd);
        let v = mixed_norm(&f, spec).unwrap();
        assert!((v - na * nb).abs() < 1e-12 * v);
        let diag = mixed_norm(&f, MixedNormSpec::diagonal(1.7).unwrap()).unwrap();
        assert!((diag - diagonal_norm(&f, 1.7).unwrap()).abs() < 1e-12 * diag);
        let x0 = xsb_norm(&f, XsbSpec::new(0.0, 0.0, 1.7, PhaseSign::Plus).unwrap()).unwrap();
        assert!((x0 - diag).abs() < 1e-12 * diag);
        let x1 = xsb_norm(&f, XsbSpec::new(0.0, 0.4, 1.7, PhaseSign::Plus).unwrap()).unwrap();
        assert!(x1 > x0);
    }

    #[test]
    fn constant_field_lebesgue_norm() {
        let g = SpaceGrid::new(3.0, 16).unwrap();
        let tg = TimeGrid::from_zero(2.0, 8).unwrap();
        let f = SpacetimeField::from_fn(g, tg, |_, _| Complex64::new(0.0, -2.0)).unwrap();
        for p in [1.0, 2.0, 3.5] {
            let v = lebesgue_spacetime_norm(&f, LebesgueSpacetimeSpec::single(p).unwrap()).unwrap();
            assert!((v - 2.0 * 6f64.powf(1.0 / p)).abs() < 1e-12);
        }
        // Plancherel against the unwindowed transform
        let h = SpacetimeField::from_fn(g, tg, |x, t| c((-x * x).exp() * (1.0 + t.cos()))).unwrap();
        let s = spacetime_transform(&h, WindowSpec::None).unwrap();
        let l2 = lebesgue_spacetime_norm(&h, LebesgueSpacetimeSpec::single(2.0).unwrap()).unwrap();
        assert!((2.0 * PI * l2 - s.l2_norm()).abs() < 1e-10 * s.l2_norm());
    }
}
