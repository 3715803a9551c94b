//! Scan surfaces, sampling grids, and pattern simulation.
//!
//! A scan surface is a parameterization sigma: D -> R^n of a minimal
//! complete set: every direction of R^n is hit by exactly one scalar
//! multiple (the Ewald sphere misses the directions in its tangent plane,
//! which is the physically measured set). Patterns sample |phi_{P,sigma(t)}
//! (lambda)| on a grid over D together with the rescaled field
//! psi_lambda(t) = ||sigma(t)|| |phi| / lambda.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{ft_polytope, Wavevector};
use crate::geometry::Polytope;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Semicircle2d,
    Hemisphere3d,
    Ewald3d,
}

/// A parameterized scan surface with fixed radius.
///
/// Domains: semicircle [0, pi); hemisphere [0, pi) x [0, pi) covering the
/// half sphere y >= 0; Ewald sphere of radius r touching a coordinate
/// hyperplane at the origin (default x3 = 0, configurable through `axis`),
/// parameterized over [0, pi/2) x [0, 2 pi) minus the origin.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScanSurface {
    pub kind: SurfaceKind,
    /// Sphere radius; directions are radius independent and psi carries the
    /// ||sigma(t)|| factor, so 1 is a safe default.
    pub radius: f64,
    /// Index of the coordinate hyperplane the Ewald sphere touches.
    pub axis: usize,
}

impl ScanSurface {
    pub fn new(kind: SurfaceKind) -> Self {
        ScanSurface {
            kind,
            radius: 1.0,
            axis: 2,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::Validation("surface radius must be positive".into()));
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn with_axis(mut self, axis: usize) -> Result<Self> {
        if axis > 2 {
            return Err(Error::Validation("ewald axis must be 0, 1 or 2".into()));
        }
        self.axis = axis;
        Ok(self)
    }

    /// Ambient dimension of sigma(t).
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            SurfaceKind::Semicircle2d => 2,
            _ => 3,
        }
    }

    /// Number of parameters of D.
    pub fn param_dim(&self) -> usize {
        match self.kind {
            SurfaceKind::Semicircle2d => 1,
            _ => 2,
        }
    }

    /// Half-open parameter ranges of D.
    pub fn domain(&self) -> Vec<(f64, f64)> {
        use std::f64::consts::PI;
        match self.kind {
            SurfaceKind::Semicircle2d => vec![(0.0, PI)],
            SurfaceKind::Hemisphere3d => vec![(0.0, PI), (0.0, PI)],
            SurfaceKind::Ewald3d => vec![(0.0, PI / 2.0), (0.0, 2.0 * PI)],
        }
    }

    /// Axes on which the sampled modulus field continues periodically. The
    /// semicircle axis wraps with period pi because sigma(t + pi) = -sigma(t)
    /// and |F(-s)| = |F(s)|; the Ewald azimuth wraps with period 2 pi.
    pub fn periodic_axes(&self) -> Vec<bool> {
        match self.kind {
            SurfaceKind::Semicircle2d => vec![true],
            SurfaceKind::Hemisphere3d => vec![false, false],
            SurfaceKind::Ewald3d => vec![false, true],
        }
    }

    /// sigma(t). Fails for t outside D.
    pub fn sigma(&self, t: &[f64]) -> Result<Wavevector> {
        let dom = self.domain();
        if t.len() != dom.len() {
            return Err(Error::Validation(format!(
                "surface takes {} parameters, got {}",
                dom.len(),
                t.len()
            )));
        }
        for (x, (lo, hi)) in t.iter().zip(&dom) {
            if !(x >= lo && x < hi) {
                return Err(Error::Validation(format!(
                    "parameter {} outside [{}, {})",
                    x, lo, hi
                )));
            }
        }
        let r = self.radius;
        Ok(match self.kind {
            SurfaceKind::Semicircle2d => DVector::from_vec(vec![r * t[0].cos(), r * t[0].sin()]),
            SurfaceKind::Hemisphere3d => DVector::from_vec(vec![
                r * t[0].sin() * t[1].cos(),
                r * t[0].sin() * t[1].sin(),
                r * t[0].cos(),
            ]),
            SurfaceKind::Ewald3d => {
                let c = 2.0 * r * t[0].cos();
                let dir = [t[0].sin() * t[1].cos(), t[0].sin() * t[1].sin(), t[0].cos()];
                // Cyclic shift so the polar direction lands on `axis`.
                let mut v = vec![0.0; 3];
                v[self.axis] = c * dir[2];
                v[(self.axis + 1) % 3] = c * dir[0];
                v[(self.axis + 2) % 3] = c * dir[1];
                DVector::from_vec(v)
            }
        })
    }

    /// Parameter of the representative of +-s on the surface, or None when
    /// no scalar multiple of s meets it (s = 0, or the Ewald tangent plane).
    pub fn fold_direction(&self, s: &DVector<f64>) -> Option<Vec<f64>> {
        use std::f64::consts::PI;
        let norm = s.norm();
        if norm == 0.0 || s.len() != self.ambient_dim() {
            return None;
        }
        match self.kind {
            SurfaceKind::Semicircle2d => {
                let mut a = s[1].atan2(s[0]);
                if a < 0.0 {
                    a += PI;
                }
                if a >= PI {
                    a -= PI;
                }
                Some(vec![a])
            }
            SurfaceKind::Hemisphere3d => {
                let mut d = s / norm;
                let flip =
                    d[1] < 0.0 || (d[1] == 0.0 && (d[0] < 0.0 || (d[0] == 0.0 && d[2] < 0.0)));
                if flip {
                    d = -d;
                }
                let t1 = d[2].clamp(-1.0, 1.0).acos();
                let t2 = if t1.sin().abs() < 1e-15 {
                    0.0
                } else {
                    d[1].atan2(d[0]).clamp(0.0, PI)
                };
                Some(vec![t1.min(PI - f64::EPSILON), t2.min(PI - f64::EPSILON)])
            }
            SurfaceKind::Ewald3d => {
                let mut d = s / norm;
                let za = d[self.axis];
                if za == 0.0 {
                    return None;
                }
                if za < 0.0 {
                    d = -d;
                }
                let t1 = d[self.axis].clamp(-1.0, 1.0).acos();
                if t1 >= PI / 2.0 {
                    return None;
                }
                let x = d[(self.axis + 1) % 3];
                let y = d[(self.axis + 2) % 3];
                let mut t2 = y.atan2(x);
                if t2 < 0.0 {
                    t2 += 2.0 * PI;
                }
                Some(vec![t1, t2.rem_euclid(2.0 * PI)])
            }
        }
    }
}

/// A uniform half-open sampling grid: axis i carries `counts[i]` points
/// t_k = lo + k (hi - lo) / counts[i], k < counts[i].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Grid {
    counts: Vec<usize>,
    ranges: Vec<(f64, f64)>,
}

impl Grid {
    pub fn new(counts: Vec<usize>, ranges: Vec<(f64, f64)>) -> Result<Self> {
        if counts.is_empty() || counts.len() != ranges.len() {
            return Err(Error::Validation("grid axes mismatch".into()));
        }
        for &c in &counts {
            if c < 2 {
                return Err(Error::Validation(
                    "grid needs at least 2 samples per axis".into(),
                ));
            }
        }
        for &(lo, hi) in &ranges {
            if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Validation(
                    "grid range must be a finite interval".into(),
                ));
            }
        }
        Ok(Grid { counts, ranges })
    }

    /// Default resolution over the full domain: 512 for the semicircle,
    /// 256 x 256 for the two-parameter surfaces.
    pub fn default_for(surface: &ScanSurface) -> Grid {
        let ranges = surface.domain();
        let counts = match surface.param_dim() {
            1 => vec![512],
            _ => vec![256, 256],
        };
        Grid { counts, ranges }
    }

    /// Like `default_for` with a custom per-axis resolution.
    pub fn with_counts(surface: &ScanSurface, counts: Vec<usize>) -> Result<Grid> {
        if counts.len() != surface.param_dim() {
            return Err(Error::Validation(format!(
                "surface needs {} grid axes",
                surface.param_dim()
            )));
        }
        Grid::new(counts, surface.domain())
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    pub fn axes(&self) -> usize {
        self.counts.len()
    }

    /// Total number of sample points.
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn step(&self, axis: usize) -> f64 {
        let (lo, hi) = self.ranges[axis];
        (hi - lo) / self.counts[axis] as f64
    }

    /// Multi-index of a row-major flat index (last axis fastest).
    pub fn unflatten(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.counts.len()];
        let mut rem = flat;
        for axis in (0..self.counts.len()).rev() {
            idx[axis] = rem % self.counts[axis];
            rem /= self.counts[axis];
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for (axis, &i) in idx.iter().enumerate() {
            flat = flat * self.counts[axis] + i;
        }
        flat
    }

    /// Parameter coordinates of a multi-index.
    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(axis, &i)| self.ranges[axis].0 + i as f64 * self.step(axis))
            .collect()
    }
}

/// Sampled pattern: |phi| and psi over a grid, row major.
#[derive(Clone, Debug)]
pub struct Pattern {
    pub surface: ScanSurface,
    pub grid: Grid,
    pub lambda: f64,
    abs_phi: Vec<f64>,
    psi: Vec<f64>,
}

impl Pattern {
    /// Assembles a pattern from raw stored fields; used by the readers.
    pub fn from_parts(
        surface: ScanSurface,
        grid: Grid,
        lambda: f64,
        abs_phi: Vec<f64>,
        psi: Vec<f64>,
    ) -> Result<Self> {
        if abs_phi.len() != grid.len() || psi.len() != grid.len() {
            return Err(Error::Validation("pattern length mismatch".into()));
        }
        if lambda <= 0.0 {
            return Err(Error::Validation("wavelength must be positive".into()));
        }
        if abs_phi
            .iter()
            .chain(psi.iter())
            .any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(Error::Validation(
                "pattern values must be finite and >= 0".into(),
            ));
        }
        Ok(Pattern {
            surface,
            grid,
            lambda,
            abs_phi,
            psi,
        })
    }

    pub fn abs_phi(&self) -> &[f64] {
        &self.abs_phi
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }
}

/// Samples |phi_{P,sigma(t)}(lambda)| and psi_lambda(t) over the grid.
///
/// psi is derived from the stored |phi| value, so recomputing it from the
/// pattern is bit exact. Grid evaluation is chunked across threads when the
/// `parallel` feature is on; assembly order is deterministic either way.
pub fn simulate_pattern(
    p: &Polytope,
    surface: &ScanSurface,
    grid: &Grid,
    lambda: f64,
) -> Result<Pattern> {
    if surface.ambient_dim() != p.dim() {
        return Err(Error::Validation(format!(
            "surface lives in dimension {}, polytope in {}",
            surface.ambient_dim(),
            p.dim()
        )));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Validation("wavelength must lie in (0, 1]".into()));
    }
    if grid.axes() != surface.param_dim() {
        return Err(Error::Validation(
            "grid axes do not match the surface".into(),
        ));
    }
    let dom = surface.domain();
    for (axis, &(lo, hi)) in grid.ranges().iter().enumerate() {
        if lo < dom[axis].0 - 1e-12 || hi > dom[axis].1 + 1e-12 {
            return Err(Error::Validation(format!(
                "grid range on axis {} exceeds the surface domain",
                axis
            )));
        }
    }

    let eval = |flat: usize| -> Result<(f64, f64)> {
        let idx = grid.unflatten(flat);
        let t = grid.point(&idx);
        let sigma = surface.sigma(&t)?;
        let s_scaled = &sigma / lambda;
        let value = ft_polytope(p, &s_scaled)?;
        let abs_phi = value.norm();
        let psi = sigma.norm() * abs_phi / lambda;
        Ok((abs_phi, psi))
    };

    #[cfg(feature = "parallel")]
    let values: Vec<(f64, f64)> = (0..grid.len())
        .into_par_iter()
        .map(eval)
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let values: Vec<(f64, f64)> = (0..grid.len()).map(eval).collect::<Result<_>>()?;

    let (abs_phi, psi) = values.into_iter().unzip();
    Pattern::from_parts(*surface, grid.clone(), lambda, abs_phi, psi)
}
