//! One LHS/RHS ratio per multilinear estimate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::bilinear::IdentitySetup;
use crate::error::{LabError, Result};
use crate::norms::{
    diagonal_norm, dual, fourier_lebesgue_norm, lebesgue_spacetime_norm, mixed_norm, xsb_norm, FourierLebesgueSpec,
    LebesgueSpacetimeSpec, MixedNormSpec, XsbSpec,
};
use crate::spectral::{
    free_evolution, spacetime_transform, spectral_derivative, ApplyMultiplier, MultiplierSpec, PhaseSign,
    SampledField, SpaceGrid, SpacetimeField, SpacetimeSpectrum, TimeGrid, WindowSpec,
};

/// Which estimate a ratio refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateTag {
    FS102,
    LEM1,
    COR1,
    LEM2,
    COR2,
    COR3,
    EQ298,
    LEM30,
    LEM31,
    L50i,
    L50ii,
    L50iii,
    LEM52,
}

impl EstimateTag {
    pub const ALL: [EstimateTag; 13] = [
        EstimateTag::FS102,
        EstimateTag::LEM1,
        EstimateTag::COR1,
        EstimateTag::LEM2,
        EstimateTag::COR2,
        EstimateTag::COR3,
        EstimateTag::EQ298,
        EstimateTag::LEM30,
        EstimateTag::LEM31,
        EstimateTag::L50i,
        EstimateTag::L50ii,
        EstimateTag::L50iii,
        EstimateTag::LEM52,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimateTag::FS102 => "FS102",
            EstimateTag::LEM1 => "LEM1",
            EstimateTag::COR1 => "COR1",
            EstimateTag::LEM2 => "LEM2",
            EstimateTag::COR2 => "COR2",
            EstimateTag::COR3 => "COR3",
            EstimateTag::EQ298 => "EQ298",
            EstimateTag::LEM30 => "LEM30",
            EstimateTag::LEM31 => "LEM31",
            EstimateTag::L50i => "L50i",
            EstimateTag::L50ii => "L50ii",
            EstimateTag::L50iii => "L50iii",
            EstimateTag::LEM52 => "LEM52",
        }
    }

    /// Number of functions the estimate takes.
    pub fn arity(self) -> usize {
        match self {
            EstimateTag::FS102 => 1,
            EstimateTag::LEM1 | EstimateTag::COR1 | EstimateTag::LEM52 => 2,
            EstimateTag::LEM31 => 5,
            _ => 3,
        }
    }

    /// Estimates stated for free solutions with data on the right-hand side.
    pub fn takes_free_data(self) -> bool {
        matches!(
            self,
            EstimateTag::FS102 | EstimateTag::LEM1 | EstimateTag::LEM2 | EstimateTag::COR2
        )
    }
}

impl fmt::Display for EstimateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimateTag {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        EstimateTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = EstimateTag::ALL.iter().map(|t| t.name()).collect();
                LabError::param("estimate", format!("unknown estimate `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

/// Exponents of one instantiation. Fields an estimate does not use are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub s: f64,
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
    pub b_prime: f64,
    pub rho: f64,
    pub rho0: f64,
    /// The `0+` offset.
    pub eps: f64,
}

const EPS: f64 = 0.05;

/// A tagged estimate with its exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateId {
    pub tag: EstimateTag,
    pub params: EstimateParams,
}

fn hyp(tag: EstimateTag, ok: bool, inequality: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(LabError::Hypothesis {
            estimate: tag.name(),
            inequality: inequality(),
        })
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs() + b.abs())
}

impl EstimateId {
    /// The default point of the exponent menu for `tag`.
    pub fn new(tag: EstimateTag) -> Self {
        let base = EstimateParams {
            p: 2.0,
            q: 2.0,
            r: 2.0,
            r0: 2.0,
            r1: 2.0,
            r2: 2.0,
            s: 0.0,
            b: 0.5 + EPS,
            b1: 0.5 + EPS,
            b2: 0.5 + EPS,
            b_prime: 0.0,
            rho: 1.5,
            rho0: 1.5,
            eps: EPS,
        };
        let params = match tag {
            EstimateTag::FS102 => base,
            EstimateTag::LEM1 => EstimateParams {
                p: 3.0,
                q: 1.5,
                ..base
            },
            EstimateTag::COR1 => EstimateParams {
                p: 3.0,
                q: 1.5,
                b1: 0.5 + EPS,
                b2: 0.5 + EPS,
                ..base
            },
            EstimateTag::LEM2 => EstimateParams {
                q: 2.0,
                p: 1.0 / 0.7,
                r0: 1.0 / 0.35,
                r1: 4.0 / 3.0,
                r2: 1.25,
                ..base
            },
            EstimateTag::COR2 | EstimateTag::COR3 => EstimateParams { p: 1.5, q: 2.0, ..base },
            EstimateTag::EQ298 => EstimateParams {
                b: 0.51,
                b_prime: 0.0,
                ..base
            },
            EstimateTag::LEM30 => EstimateParams {
                s: 0.5,
                b: 0.51,
                b_prime: -0.25,
                ..base
            },
            EstimateTag::LEM31 => EstimateParams { s: 0.5, b: 0.51, ..base },
            EstimateTag::L50i => EstimateParams { rho: 1.5, ..base },
            EstimateTag::L50ii => EstimateParams { rho: 1.6, b: 0.45, ..base },
            EstimateTag::L50iii => EstimateParams {
                rho0: 1.5,
                rho: 1.25,
                b: 0.25,
                ..base
            },
            EstimateTag::LEM52 => {
                let rho = 1.5;
                EstimateParams {
                    rho,
                    rho0: 1.0 / (0.25 + 0.5 / rho),
                    ..base
                }
            }
        };
        Self { tag, params }
    }

    pub fn with_params(tag: EstimateTag, params: EstimateParams) -> Self {
        Self { tag, params }
    }

    /// Check the hypotheses of the underlying statement, naming the first failure.
    pub fn check_hypotheses(&self) -> Result<()> {
        let t = self.tag;
        let EstimateParams {
            p,
            q,
            r,
            r0,
            r1,
            r2,
            s,
            b,
            b1,
            b2,
            b_prime,
            rho,
            rho0,
            eps,
        } = self.params;
        let finite = [p, q, r, r0, r1, r2, s, b, b1, b2, b_prime, rho, rho0, eps].iter().all(|v| v.is_finite());
        hyp(t, finite, || "all exponents finite".into())?;
        hyp(t, eps > 0.0, || format!("eps = {eps} > 0"))?;
        match t {
            EstimateTag::FS102 => hyp(t, r > 4.0 / 3.0, || format!("r = {r} > 4/3")),
            EstimateTag::LEM1 | EstimateTag::COR1 => {
                hyp(t, q > 1.0, || format!("q = {q} > 1"))?;
                hyp(t, q <= r1 && q <= r2, || format!("q = {q} <= r1 = {r1}, r2 = {r2}"))?;
                hyp(t, r1 <= p && r2 <= p, || format!("r1 = {r1}, r2 = {r2} <= p = {p}"))?;
                hyp(t, close(1.0 / p + 1.0 / q, 1.0 / r1 + 1.0 / r2), || {
                    format!("1/p + 1/q = {} equals 1/r1 + 1/r2 = {}", 1.0 / p + 1.0 / q, 1.0 / r1 + 1.0 / r2)
                })?;
                if t == EstimateTag::COR1 {
                    hyp(t, b1 > 1.0 / r1 && b2 > 1.0 / r2, || {
                        format!("b1 = {b1} > 1/r1 = {}, b2 = {b2} > 1/r2 = {}", 1.0 / r1, 1.0 / r2)
                    })?;
                }
                Ok(())
            }
            EstimateTag::LEM2 => {
                hyp(t, q > 1.0, || format!("q = {q} > 1"))?;
                hyp(t, [p, r0, r1, r2].iter().all(|v| *v > 1.0), || "p, r0, r1, r2 > 1".into())?;
                let (i1, i2, ip) = (1.0 / dual(r1), 1.0 / dual(r2), 1.0 / dual(p));
                hyp(t, i1 > 0.0 && i2 > 0.0 && i1 < ip && i2 < ip, || {
                    format!("0 < 1/r1' = {i1}, 1/r2' = {i2} < 1/p' = {ip}")
                })?;
                hyp(t, ip < (1.0 / r0).min(i1 + i2), || {
                    format!("1/p' = {ip} < min(1/r0, 1/r1' + 1/r2') = {}", (1.0 / r0).min(i1 + i2))
                })?;
                hyp(t, close(1.0 / r0 + 1.0 / r1 + 1.0 / r2, 1.0 / q + 2.0 / p), || {
                    format!(
                        "1/r0 + 1/r1 + 1/r2 = {} equals 1/q + 2/p = {}",
                        1.0 / r0 + 1.0 / r1 + 1.0 / r2,
                        1.0 / q + 2.0 / p
                    )
                })
            }
            EstimateTag::COR2 | EstimateTag::COR3 => {
                hyp(t, p > 1.0 && q > 1.0, || format!("p = {p}, q = {q} > 1"))?;
                hyp(t, dual(p) > q || close(p, q), || format!("p' = {} > q = {q} or p = q", dual(p)))
            }
            EstimateTag::EQ298 => {
                hyp(t, r > 1.0, || format!("r = {r} > 1"))?;
                hyp(t, b_prime <= 0.0, || format!("b' = {b_prime} <= 0"))?;
                hyp(t, b > 1.0 / r, || format!("b = {b} > 1/r = {}", 1.0 / r))
            }
            EstimateTag::LEM30 | EstimateTag::LEM31 => {
                hyp(t, r > 1.0, || format!("r = {r} > 1"))?;
                hyp(t, s >= 0.5, || format!("s = {s} >= 1/2"))?;
                hyp(t, b > 1.0 / r, || format!("b = {b} > 1/r = {}", 1.0 / r))?;
                if t == EstimateTag::LEM30 {
                    hyp(t, b_prime <= -0.5 / dual(r), || {
                        format!("b' = {b_prime} <= -1/(2r') = {}", -0.5 / dual(r))
                    })?;
                }
                Ok(())
            }
            EstimateTag::L50i => hyp(t, rho > 1.0 && rho <= 2.0, || format!("2 >= rho = {rho} > 1")),
            EstimateTag::L50ii => {
                hyp(t, rho > 4.0 / 3.0 && rho <= 2.0, || format!("2 >= rho = {rho} > 4/3"))?;
                let bound = 0.5 / dual(rho) + 0.25;
                hyp(t, b > bound, || format!("b = {b} > 1/(2 rho') + 1/4 = {bound}"))
            }
            EstimateTag::L50iii => {
                hyp(t, rho0 > 4.0 / 3.0, || format!("rho0 = {rho0} > 4/3"))?;
                hyp(t, rho > 1.0 && rho <= 4.0 / 3.0, || format!("4/3 >= rho = {rho} > 1"))?;
                let bound = 1.5 / dual(rho) + 1.0 / rho0 - 0.75;
                hyp(t, bound >= 0.0, || format!("3/(2 rho') + 1/rho0 - 3/4 = {bound} >= 0"))?;
                hyp(t, b > bound, || format!("b = {b} > 3/(2 rho') + 1/rho0 - 3/4 = {bound}"))
            }
            EstimateTag::LEM52 => {
                hyp(t, rho > 1.0 && rho <= 2.0, || format!("2 >= rho = {rho} > 1"))?;
                hyp(t, close(1.0 / rho0, 0.25 + 0.5 / rho), || {
                    format!("1/rho0 = {} equals 1/4 + 1/(2 rho) = {}", 1.0 / rho0, 0.25 + 0.5 / rho)
                })
            }
        }
    }
}

/// Lattice and window on which ratios are evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Harness {
    pub grid: SpaceGrid,
    pub times: TimeGrid,
    pub window: WindowSpec,
}

impl Harness {
    pub fn new(grid: SpaceGrid, times: TimeGrid, window: WindowSpec) -> Result<Self> {
        window.check_fits(&times)?;
        Ok(Self { grid, times, window })
    }

    /// `L = 40`, `n = m = 256`, `t in [-2, 2)`, cut-off `psi(t)` with `delta = 1`.
    pub fn baseline() -> Self {
        Self {
            grid: SpaceGrid::new(40.0, 256).expect("valid grid"),
            times: TimeGrid::centered(4.0, 256).expect("valid time grid"),
            window: WindowSpec::SmoothCutoff { center: 0.0, delta: 1.0 },
        }
    }

    /// The long plateau window of a bilinear identity setup, on `grid`.
    pub fn from_identity(grid: SpaceGrid, setup: &IdentitySetup) -> Result<Self> {
        Self::new(grid, setup.times()?, setup.window()?)
    }

    /// Same box and time span, `factor` times more points in both directions.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            grid: self.grid.refined(factor),
            times: self.times.refined(factor),
            window: self.window,
        }
    }

    /// Half-width of the window, the `delta` of the restricted spaces.
    pub fn delta(&self) -> f64 {
        match self.window {
            WindowSpec::SmoothCutoff { delta, .. } => delta,
            WindowSpec::Plateau { flat, .. } => flat,
            WindowSpec::None => 0.5 * self.times.span(),
        }
    }

    fn profile(&self) -> impl Fn(f64) -> Complex64 + '_ {
        move |t| Complex64::new(self.window.profile(t), 0.0)
    }

    /// Windowed free trajectory `psi(t) e^{it d^2} u0`, the default extension of data into `X`.
    pub fn windowed_free(&self, u0: &SampledField) -> Result<SpacetimeField> {
        Ok(free_evolution(u0, self.times, PhaseSign::Plus)?.modulated_in_time(self.profile()))
    }
}

/// A ratio input: initial data, or a space-time function for the restriction-norm estimates.
#[derive(Clone, Debug, PartialEq)]
pub enum EstimateInput {
    Data(SampledField),
    Trajectory(SpacetimeField),
}

impl EstimateInput {
    fn data(&self, tag: EstimateTag) -> Result<&SampledField> {
        match self {
            EstimateInput::Data(f) => Ok(f),
            EstimateInput::Trajectory(_) => Err(LabError::param(
                "inputs",
                format!("{tag} is stated for free solutions and takes initial data"),
            )),
        }
    }

    fn trajectory(&self, h: &Harness) -> Result<SpacetimeField> {
        match self {
            EstimateInput::Data(f) => h.windowed_free(f),
            EstimateInput::Trajectory(f) => {
                if f.grid() != &h.grid || f.times() != &h.times {
                    return Err(LabError::ShapeMismatch("trajectory lattice differs from the harness".into()));
                }
                Ok(f.clone())
            }
        }
    }
}

fn fl(u0: &SampledField, r: f64) -> Result<f64> {
    fourier_lebesgue_norm(u0, FourierLebesgueSpec::new(0.0, r)?)
}

fn spectrum(f: &SpacetimeField) -> Result<SpacetimeSpectrum> {
    spacetime_transform(f, WindowSpec::None)
}

fn x_norm(f: &SpacetimeField, s: f64, b: f64, r: f64) -> Result<f64> {
    xsb_norm(&spectrum(f)?, XsbSpec::new(s, b, r, PhaseSign::Plus)?)
}

fn free(u0: &SampledField, h: &Harness, sign: PhaseSign) -> Result<SpacetimeField> {
    free_evolution(u0, h.times, sign)
}

/// `d/dx` applied to every time slice.
fn x_derivative(f: &SpacetimeField) -> Result<SpacetimeField> {
    let mut values = f.values().clone();
    for (l, mut col) in values.columns_mut().into_iter().enumerate() {
        let d = spectral_derivative(&f.slice(l))?;
        col.iter_mut().zip(d.values()).for_each(|(a, b)| *a = *b);
    }
    SpacetimeField::new(*f.grid(), *f.times(), values)
}

/// The cubic cross terms `2|v|^2 w + v^2 conj(w) + 2 v |w|^2 + w^2 conj(v) + |w|^2 w`.
pub fn cross_terms(v: &SpacetimeField, w: &SpacetimeField) -> Result<SpacetimeField> {
    if v.grid() != w.grid() || v.times() != w.times() {
        return Err(LabError::ShapeMismatch("v and w live on different lattices".into()));
    }
    let vals = ndarray::Zip::from(v.values()).and(w.values()).map_collect(|&a, &c| {
        let (na, nc) = (a.norm_sqr(), c.norm_sqr());
        c * (2.0 * na) + a * a * c.conj() + a * (2.0 * nc) + c * c * a.conj() + c * nc
    });
    SpacetimeField::new(*v.grid(), *v.times(), vals)
}

/// LHS / RHS of the estimate on the given inputs.
pub fn estimate_ratio(id: &EstimateId, inputs: &[EstimateInput], h: &Harness) -> Result<f64> {
    let (lhs, rhs) = estimate_sides(id, inputs, h)?;
    if !(rhs > 0.0) {
        return Err(LabError::Insufficient(format!("{} right-hand side vanishes", id.tag)));
    }
    Ok(lhs / rhs)
}

/// Both sides of the estimate, without forming the ratio.
pub fn estimate_sides(id: &EstimateId, inputs: &[EstimateInput], h: &Harness) -> Result<(f64, f64)> {
    id.check_hypotheses()?;
    let tag = id.tag;
    if inputs.len() != tag.arity() {
        return Err(LabError::param(
            "inputs",
            format!("{tag} takes {} functions, got {}", tag.arity(), inputs.len()),
        ));
    }
    let e = id.params;
    let prof = h.profile();
    match tag {
        EstimateTag::FS102 => {
            let u0 = inputs[0].data(tag)?;
            let u = free(u0, h, PhaseSign::Plus)?.modulated_in_time(&prof);
            let lhs = lebesgue_spacetime_norm(&u, LebesgueSpacetimeSpec::single(3.0 * e.r)?)?;
            Ok((lhs, fl(u0, e.r)?))
        }
        EstimateTag::LEM1 => {
            let (u0, v0) = (inputs[0].data(tag)?, inputs[1].data(tag)?);
            let prod = free(u0, h, PhaseSign::Plus)?.mul(&free(v0, h, PhaseSign::Minus)?)?;
            let spec = spacetime_transform(&prod, h.window)?.apply_multiplier(&MultiplierSpec::riesz(1.0 / e.p))?;
            let lhs = mixed_norm(&spec, MixedNormSpec::new(e.q, e.p)?)?;
            Ok((lhs, fl(u0, e.r1)? * fl(v0, e.r2)?))
        }
        EstimateTag::COR1 => {
            let u = inputs[0].trajectory(h)?;
            let v = inputs[1].trajectory(h)?;
            let spec = spectrum(&u.mul(&v.conj())?)?.apply_multiplier(&MultiplierSpec::riesz(1.0 / e.p))?;
            let lhs = mixed_norm(&spec, MixedNormSpec::new(e.q, e.p)?)?;
            Ok((lhs, x_norm(&u, 0.0, e.b1, e.r1)? * x_norm(&v, 0.0, e.b2, e.r2)?))
        }
        EstimateTag::LEM2 | EstimateTag::COR2 => {
            let (u0, v0, w0) = (inputs[0].data(tag)?, inputs[1].data(tag)?, inputs[2].data(tag)?);
            let prod = free(u0, h, PhaseSign::Plus)?
                .mul(&free(v0, h, PhaseSign::Plus)?)?
                .mul(&free(w0, h, PhaseSign::Minus)?)?;
            let lhs = mixed_norm(&spacetime_transform(&prod, h.window)?, MixedNormSpec::new(e.q, e.p)?)?;
            let rhs = if tag == EstimateTag::LEM2 {
                fl(u0, e.r0)? * fl(v0, e.r1)? * fl(w0, e.r2)?
            } else {
                fl(u0, e.q)? * fl(v0, e.p)? * fl(w0, e.p)?
            };
            Ok((lhs, rhs))
        }
        EstimateTag::COR3 => {
            let (u, v, w) = (inputs[0].trajectory(h)?, inputs[1].trajectory(h)?, inputs[2].trajectory(h)?);
            let prod = u.mul(&v)?.mul(&w.conj())?;
            let lhs = mixed_norm(&spectrum(&prod)?, MixedNormSpec::new(e.q, e.p)?)?;
            let rhs = x_norm(&u, 0.0, 1.0 / e.q + e.eps, e.q)?
                * x_norm(&v, 0.0, 1.0 / e.p + e.eps, e.p)?
                * x_norm(&w, 0.0, 1.0 / e.p + e.eps, e.p)?;
            Ok((lhs, rhs))
        }
        EstimateTag::EQ298 => {
            let (u, v, w) = (inputs[0].trajectory(h)?, inputs[1].trajectory(h)?, inputs[2].trajectory(h)?);
            let prod = u.mul(&v)?.mul(&w.conj())?;
            let lhs = x_norm(&prod, 0.0, e.b_prime, e.r)?;
            let rhs = x_norm(&u, 0.0, e.b, e.r)? * x_norm(&v, 0.0, e.b, e.r)? * x_norm(&w, 0.0, e.b, e.r)?;
            Ok((lhs, rhs))
        }
        EstimateTag::LEM30 => {
            let (u1, u2, u3) = (inputs[0].trajectory(h)?, inputs[1].trajectory(h)?, inputs[2].trajectory(h)?);
            let prod = u1.mul(&u2)?.mul(&x_derivative(&u3.conj())?)?;
            let lhs = x_norm(&prod, e.s, e.b_prime, e.r)?;
            let rhs = x_norm(&u1, e.s, e.b, e.r)? * x_norm(&u2, e.s, e.b, e.r)? * x_norm(&u3, e.s, e.b, e.r)?;
            Ok((lhs, rhs))
        }
        EstimateTag::LEM31 => {
            let us = inputs.iter().map(|i| i.trajectory(h)).collect::<Result<Vec<_>>>()?;
            let prod = us[0].mul(&us[1])?.mul(&us[2])?.mul(&us[3].conj())?.mul(&us[4].conj())?;
            let spec = spectrum(&prod)?.apply_multiplier(&MultiplierSpec::bessel(e.s))?;
            let lhs = diagonal_norm(&spec, e.r)?;
            let mut rhs = 1.0;
            for u in &us {
                rhs *= x_norm(u, e.s, e.b, e.r)?;
            }
            Ok((lhs, rhs))
        }
        EstimateTag::L50i | EstimateTag::L50ii | EstimateTag::L50iii => {
            let (f, g, hh) = (inputs[0].trajectory(h)?, inputs[1].trajectory(h)?, inputs[2].trajectory(h)?);
            let prod = f.mul(&g)?.mul(&hh.conj())?;
            let lhs = diagonal_norm(&spectrum(&prod)?, e.rho)?;
            let half = 0.5 + e.eps;
            let rhs = match tag {
                EstimateTag::L50i => x_norm(&f, 0.0, half, 2.0)? * x_norm(&g, 0.0, half, 2.0)? * x_norm(&hh, 0.0, half, e.rho)?,
                EstimateTag::L50ii => {
                    let bb = 1.0 / e.rho + e.eps;
                    x_norm(&f, 0.0, bb, e.rho)? * x_norm(&g, 0.0, bb, e.rho)? * x_norm(&hh, 0.0, e.b, 2.0)?
                }
                _ => {
                    let bb = 1.0 / e.rho0 + e.eps;
                    x_norm(&f, 0.0, e.b, 2.0)? * x_norm(&g, 0.0, bb, e.rho0)? * x_norm(&hh, 0.0, bb, e.rho0)?
                }
            };
            Ok((lhs, rhs))
        }
        EstimateTag::LEM52 => {
            let (v, w) = (inputs[0].trajectory(h)?, inputs[1].trajectory(h)?);
            let lhs = x_norm(&cross_terms(&v, &w)?, 0.0, -0.5 + e.eps, 2.0)?;
            let v_half = x_norm(&v, 0.0, 0.5 + e.eps, 2.0)?;
            let w_rho = x_norm(&w, 0.0, 1.0 / e.rho + e.eps, e.rho)?;
            let w_rho0 = x_norm(&w, 0.0, 1.0 / e.rho0 + e.eps, e.rho0)?;
            let power = (0.25 + 0.5 / dual(e.rho) - e.eps).max(0.0);
            let rhs = (h.delta().powf(power) * v_half * v_half + v_half * w_rho + w_rho0 * w_rho0) * w_rho;
            Ok((lhs, rhs))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_menu_satisfies_every_hypothesis() {
        for tag in EstimateTag::ALL {
            EstimateId::new(tag).check_hypotheses().unwrap_or_else(|e| panic!("{tag}: {e}"));
        }
    }

    #[test]
    fn violated_hypotheses_name_the_inequality() {
        let mut id = EstimateId::new(EstimateTag::LEM1);
        id.params.q = 2.5;
        let err = id.check_hypotheses().unwrap_err().to_string();
        assert!(err.contains("LEM1") && err.contains("q = 2.5"), "{err}");
        let mut fs = EstimateId::new(EstimateTag::FS102);
        fs.params.r = 1.2;
        assert!(matches!(fs.check_hypotheses(), Err(LabError::Hypothesis { estimate: "FS102", .. })));
    }

    #[test]
    fn tags_round_trip_through_text() {
        for tag in EstimateTag::ALL {
            assert_eq!(tag.name().parse::<EstimateTag>().unwrap(), tag);
        }
        assert!("LEM9".parse::<EstimateTag>().is_err());
    }
}
