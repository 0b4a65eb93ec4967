use std::f64::consts::PI;

use crate::error::{LabError, Result};

/// Uniform periodic grid on `[-L/2, L/2)` with an even number of points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceGrid {
    length: f64,
    points: usize,
}

impl SpaceGrid {
    pub fn new(length: f64, points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(LabError::param("length", format!("must be finite and > 0, got {length}")));
        }
        if points < 2 || points % 2 != 0 {
            return Err(LabError::param("points", format!("must be a positive even integer, got {points}")));
        }
        Ok(Self { length, points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Spacing of the frequency lattice, `2 pi / L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.x(j)).collect()
    }

    /// Frequency at centered position `i`, i.e. `2 pi k / L` with `k = i - n/2`.
    pub fn xi(&self, i: usize) -> f64 {
        (i as f64 - (self.points / 2) as f64) * self.dxi()
    }

    /// Frequencies in increasing order, starting at the Nyquist mode `-n/2`.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.xi(i)).collect()
    }

    pub fn max_frequency(&self) -> f64 {
        (self.points / 2) as f64 * self.dxi()
    }

    /// Centered index of the lattice frequency closest to `xi`, if inside the band.
    pub fn nearest_index(&self, xi: f64) -> Option<usize> {
        let i = (xi / self.dxi()).round() as i64 + (self.points / 2) as i64;
        (0..self.points as i64).contains(&i).then_some(i as usize)
    }

    /// Same box, `factor` times more points.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            length: self.length,
            points: self.points * factor,
        }
    }
}

/// Uniform periodic time lattice `t_j = start + j * span / count`, `j < count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    start: f64,
    span: f64,
    count: usize,
}

impl TimeGrid {
    pub fn new(start: f64, span: f64, count: usize) -> Result<Self> {
        if !(span.is_finite() && span > 0.0) || !start.is_finite() {
            return Err(LabError::param("span", format!("must be finite and > 0, got {span}")));
        }
        if count < 2 || count % 2 != 0 {
            return Err(LabError::param("count", format!("must be a positive even integer, got {count}")));
        }
        Ok(Self { start, span, count })
    }

    /// Lattice on `[0, span)`.
    pub fn from_zero(span: f64, count: usize) -> Result<Self> {
        Self::new(0.0, span, count)
    }

    /// Lattice on `[-span/2, span/2)`.
    pub fn centered(span: f64, count: usize) -> Result<Self> {
        Self::new(-0.5 * span, span, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn end(&self) -> f64 {
        self.start + self.span
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dt(&self) -> f64 {
        self.span / self.count as f64
    }

    pub fn t(&self, j: usize) -> f64 {
        self.start + j as f64 * self.dt()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.t(j)).collect()
    }

    pub fn dtau(&self) -> f64 {
        2.0 * PI / self.span
    }

    /// Dual frequency at centered position `l`.
    pub fn tau(&self, l: usize) -> f64 {
        (l as f64 - (self.count / 2) as f64) * self.dtau()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.count).map(|l| self.tau(l)).collect()
    }

    pub fn nearest_index(&self, tau: f64) -> Option<usize> {
        let l = (tau / self.dtau()).round() as i64 + (self.count / 2) as i64;
        (0..self.count as i64).contains(&l).then_some(l as usize)
    }

    pub fn refined(&self, factor: usize) -> Self {
        Self {
            start: self.start,
            span: self.span,
            count: self.count * factor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_is_consistent() {
        let g = SpaceGrid::new(10.0, 64).unwrap();
        assert!((g.dx() * 64.0 - 10.0).abs() < 1e-14);
        let xi = g.frequencies();
        assert!(xi.windows(2).all(|w| w[1] > w[0]));
        // symmetric about zero apart from the Nyquist mode
        for i in 1..64 {
            assert!((xi[i] + xi[64 - i]).abs() < 1e-12);
        }
        assert!((xi[32]).abs() < 1e-15);
    }

    #[test]
    fn rejects_odd_or_empty_grids() {
        assert!(SpaceGrid::new(1.0, 7).is_err());
        assert!(SpaceGrid::new(1.0, 0).is_err());
        assert!(SpaceGrid::new(-1.0, 8).is_err());
        assert!(TimeGrid::new(0.0, 0.0, 8).is_err());
    }

    #[test]
    fn nearest_index_roundtrip() {
        let g = SpaceGrid::new(2.0 * PI * 4.0, 128).unwrap();
        let i = g.nearest_index(0.5).unwrap();
        assert!((g.xi(i) - 0.5).abs() < 1e-12);
        assert!(g.nearest_index(1e6).is_none());
    }
}
