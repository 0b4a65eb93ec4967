//! Closed-form solution families: the boosted NLS soliton and the two-parameter DNLS
//! family, with the separation experiments built on them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::norms::{dual, fourier_lebesgue_norm, FourierLebesgueSpec};
use crate::spectral::{SampledField, SpaceGrid};

/// Edge magnitude, relative to the peak, above which a sampled family is reported as truncated.
pub const EDGE_DECAY_LIMIT: f64 = 1e-8;

/// The factor instantiating "much larger than" in the disjointness criterion.
pub const SEPARATION_FACTOR: f64 = 10.0;

/// `f(x) = sqrt(2) sech(x)`, the profile solving `f'' - f + f^3 = 0`.
pub fn nls_profile(x: f64) -> f64 {
    std::f64::consts::SQRT_2 / x.cosh()
}

/// Parameters of `u_{N,omega}(x, t) = e^{-it(N^2 - omega^2) + iNx} omega f(omega (x - 2Nt))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NlsSolitonParams {
    pub n: f64,
    pub omega: f64,
}

impl NlsSolitonParams {
    pub fn new(n: f64, omega: f64) -> Result<Self> {
        if !(n.is_finite() && omega.is_finite() && omega > 0.0) {
            return Err(LabError::param("omega", format!("need finite N and omega > 0, got N = {n}, omega = {omega}")));
        }
        Ok(Self { n, omega })
    }

    /// `||u||^2_{L^2} = 4 omega`.
    pub fn mass(&self) -> f64 {
        4.0 * self.omega
    }

    pub fn value(&self, x: f64, t: f64) -> Complex64 {
        let (n, w) = (self.n, self.omega);
        Complex64::from_polar(w * nls_profile(w * (x - 2.0 * n * t)), -t * (n * n - w * w) + n * x)
    }
}

fn warn_on_edges(f: &SampledField, what: &str) {
    let peak = f.max_abs();
    if peak == 0.0 {
        return;
    }
    let v = f.values();
    let edge = v[0].norm().max(v[v.len() - 1].norm()) / peak;
    if edge > EDGE_DECAY_LIMIT {
        log::warn!("{what}: edge magnitude {edge:e} of peak exceeds {EDGE_DECAY_LIMIT:e}");
    }
}

/// Sample the soliton at time `t`.
pub fn nls_soliton(p: &NlsSolitonParams, grid: SpaceGrid, t: f64) -> Result<SampledField> {
    let f = SampledField::from_fn(grid, |x| p.value(x, t))?;
    warn_on_edges(&f, "nls soliton");
    Ok(f)
}

/// Parameters of the DNLS family; `gamma = sqrt(4 omega - N^2)`, `alpha = N / (2 sqrt(omega))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnlsFamilyParams {
    pub n: f64,
    pub omega: f64,
}

impl DnlsFamilyParams {
    pub fn new(n: f64, omega: f64) -> Result<Self> {
        if !(n.is_finite() && omega.is_finite() && n >= 0.0) {
            return Err(LabError::param("n", format!("need finite N >= 0 and omega, got N = {n}, omega = {omega}")));
        }
        if !(4.0 * omega > n * n) {
            return Err(LabError::param(
                "omega",
                format!("alpha^2 = N^2 / (4 omega) must be < 1, got N = {n}, omega = {omega}"),
            ));
        }
        Ok(Self { n, omega })
    }

    pub fn gamma(&self) -> f64 {
        (4.0 * self.omega - self.n * self.n).sqrt()
    }

    pub fn alpha(&self) -> f64 {
        self.n / (2.0 * self.omega.sqrt())
    }

    /// `F(y) = e^{i phi(y)} f(y)`.
    pub fn profile(&self, y: f64) -> Complex64 {
        let a = self.alpha();
        let phi = 3.0 * ((y.exp() + a) / (1.0 - a * a).sqrt()).atan();
        Complex64::from_polar((y.cosh() + a).powf(-0.5), phi)
    }

    pub fn value(&self, x: f64, t: f64) -> Complex64 {
        let (n, w, g) = (self.n, self.omega, self.gamma());
        let carrier = Complex64::from_polar(w.powf(-0.25) * g, 0.5 * n * x + (w - 0.5 * n * n) * t);
        carrier * self.profile(g * (x - n * t))
    }
}

/// Sample the DNLS family at time `t`.
pub fn dnls_family(p: &DnlsFamilyParams, grid: SpaceGrid, t: f64) -> Result<SampledField> {
    let f = SampledField::from_fn(grid, |x| p.value(x, t))?;
    warn_on_edges(&f, "dnls family");
    Ok(f)
}

/// One rung of a separation ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationRow {
    pub n: f64,
    pub n_prime: f64,
    pub omega: f64,
    pub omega_prime: f64,
    /// Packet scale: `omega` for NLS, `gamma` for DNLS.
    pub width: f64,
    pub width_prime: f64,
    /// Zero for NLS.
    pub alpha: f64,
    pub alpha_prime: f64,
    pub data_distance: f64,
    pub solution_distance: f64,
    /// `|N - N'| T` over the larger packet width.
    pub separation: f64,
    pub flagged: bool,
    pub length: f64,
    pub points: usize,
}

/// Distances between two family members at `t = 0` and `t = T` across an `N` ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationTable {
    pub family: String,
    pub s: f64,
    pub r: f64,
    pub t_final: f64,
    pub c: f64,
    pub rows: Vec<SeparationRow>,
}

impl SeparationTable {
    pub fn data_distances(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.data_distance).collect()
    }

    pub fn solution_distances(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.solution_distance).collect()
    }
}

/// A box holding both packets over `[0, T]` with margin, resolving wavenumbers up to `kmax`.
fn ladder_grid(travel: f64, width: f64, kmax: f64) -> Result<SpaceGrid> {
    let length = 4.0 * (travel + SEPARATION_FACTOR / width);
    let dx = 2.0 * PI / (8.0 * kmax);
    let points = ((length / dx).ceil() as usize).next_power_of_two();
    SpaceGrid::new(length, points)
}

fn check_ladder(t: f64, ns: &[f64], c: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(LabError::param("T", format!("must be finite and > 0, got {t}")));
    }
    if ns.is_empty() || ns.iter().any(|n| !(n.is_finite() && *n > 0.0)) {
        return Err(LabError::param("N_list", "need a nonempty list of positive N"));
    }
    if !c.is_finite() {
        return Err(LabError::param("C", "must be finite"));
    }
    Ok(())
}

/// Preconditions of [`illposed_nls_experiment`].
pub fn check_nls_ladder(s: f64, r: f64, t: f64, ns: &[f64], c: f64) -> Result<()> {
    if !(r.is_finite() && r > 1.0) {
        return Err(LabError::param("r", format!("need r > 1, got {r}")));
    }
    let rp = dual(r);
    if !(s > -1.0 / rp && s <= 0.0) {
        return Err(LabError::param("s", format!("need -1/r' < s <= 0, got s = {s} with 1/r' = {}", 1.0 / rp)));
    }
    check_ladder(t, ns, c)
}

/// Preconditions of [`illposed_dnls_experiment`].
pub fn check_dnls_ladder(s: f64, r: f64, t: f64, ns: &[f64], c: f64) -> Result<()> {
    if !(r.is_finite() && r > 1.0) {
        return Err(LabError::param("r", format!("need r > 1, got {r}")));
    }
    let rp = dual(r);
    if !(s < 0.5 && s > 0.5 - 1.0 / rp) {
        return Err(LabError::param("s", format!("need 1/2 > s > 1/2 - 1/r' = {}, got {s}", 0.5 - 1.0 / rp)));
    }
    check_ladder(t, ns, c)
}

fn sort_rows(mut rows: Vec<SeparationRow>) -> Vec<SeparationRow> {
    rows.sort_by(|a, b| a.n.total_cmp(&b.n));
    rows
}

/// Two boosted NLS solitons with `omega = N^{-s r'}` and `N_2 = N - (C/T) N^{s r'}`.
///
/// `s = 0` is accepted as the control run in which the mechanism switches off.
pub fn illposed_nls_experiment(s: f64, r: f64, t: f64, ns: &[f64], c: f64) -> Result<SeparationTable> {
    check_nls_ladder(s, r, t, ns, c)?;
    let rp = dual(r);
    let spec = FourierLebesgueSpec::new(s, r)?;
    let rows = ns
        .par_iter()
        .map(|&n| {
            let omega = n.powf(-s * rp);
            let n2 = n - (c / t) * n.powf(s * rp);
            let (p1, p2) = (NlsSolitonParams::new(n, omega)?, NlsSolitonParams::new(n2, omega)?);
            let kmax = n.abs().max(n2.abs()) + SEPARATION_FACTOR * omega;
            let grid = ladder_grid(2.0 * n.abs().max(n2.abs()) * t, omega, kmax)?;
            let d0 = fourier_lebesgue_norm(&nls_soliton(&p1, grid, 0.0)?.sub(&nls_soliton(&p2, grid, 0.0)?)?, spec)?;
            let d1 = fourier_lebesgue_norm(&nls_soliton(&p1, grid, t)?.sub(&nls_soliton(&p2, grid, t)?)?, spec)?;
            // Centres move at 2N, so the gap after time T is 2 |N_1 - N_2| T.
            let separation = 2.0 * (n - n2).abs() * t * omega;
            Ok(SeparationRow {
                n,
                n_prime: n2,
                omega,
                omega_prime: omega,
                width: omega,
                width_prime: omega,
                alpha: 0.0,
                alpha_prime: 0.0,
                data_distance: d0,
                solution_distance: d1,
                separation,
                flagged: separation <= SEPARATION_FACTOR,
                length: grid.length(),
                points: grid.points(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparationTable {
        family: "nls".into(),
        s,
        r,
        t_final: t,
        c,
        rows: sort_rows(rows),
    })
}

/// Two DNLS family members with `4 omega = N^2 + N^{r'(1-2s)}`, `gamma = N^{r'(1/2-s)}`,
/// `N' = N + C` and `omega'`, `gamma'` chosen so that `alpha' = alpha`.
pub fn illposed_dnls_experiment(s: f64, r: f64, t: f64, ns: &[f64], c: f64) -> Result<SeparationTable> {
    check_dnls_ladder(s, r, t, ns, c)?;
    let rp = dual(r);
    let spec = FourierLebesgueSpec::new(s, r)?;
    let rows = ns
        .par_iter()
        .map(|&n| {
            let lift = n.powf(rp * (1.0 - 2.0 * s));
            let np = n + c;
            let p = DnlsFamilyParams::new(n, 0.25 * (n * n + lift))?;
            let pp = DnlsFamilyParams::new(np, 0.25 * (np * np + lift * np * np / (n * n)))?;
            let (alpha, alpha_prime) = (p.alpha(), pp.alpha());
            if !(alpha * alpha < 1.0 && alpha_prime * alpha_prime < 1.0) {
                return Err(LabError::param("omega", format!("alpha^2 >= 1 at N = {n}")));
            }
            let (g, gp) = (p.gamma(), pp.gamma());
            let gmin = g.min(gp);
            let kmax = n.max(np) + SEPARATION_FACTOR * g.max(gp);
            let grid = ladder_grid(n.max(np) * t, gmin, kmax)?;
            let d0 = fourier_lebesgue_norm(&dnls_family(&p, grid, 0.0)?.sub(&dnls_family(&pp, grid, 0.0)?)?, spec)?;
            let d1 = fourier_lebesgue_norm(&dnls_family(&p, grid, t)?.sub(&dnls_family(&pp, grid, t)?)?, spec)?;
            let separation = (np - n).abs() * t * gmin;
            Ok(SeparationRow {
                n,
                n_prime: np,
                omega: p.omega,
                omega_prime: pp.omega,
                width: g,
                width_prime: gp,
                alpha,
                alpha_prime,
                data_distance: d0,
                solution_distance: d1,
                separation,
                flagged: separation <= SEPARATION_FACTOR,
                length: grid.length(),
                points: grid.points(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparationTable {
        family: "dnls".into(),
        s,
        r,
        t_final: t,
        c,
        rows: sort_rows(rows),
    })
}
