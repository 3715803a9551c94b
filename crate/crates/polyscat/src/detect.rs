//! Peak extraction: Pattern -> FacetIndicatorSet.
//!
//! Both methods threshold strict local maxima of psi against theta. The
//! smoothing method locates peaks on a box-filtered copy of the field; the
//! clustering method takes raw maxima and merges those with small mutual
//! parameter distance. Peak heights are always read from the raw field at
//! the located maximum, since smoothing biases amplitudes and the raw height
//! is the facet measure estimate.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::scan::{Grid, Pattern};

/// Two entries closer than this in |cos angle| violate the facet-generic
/// assumption (parallel or antiparallel facet normals).
pub const TOL_FACET_GENERIC: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectionMethod {
    Smooth,
    Cluster,
}

#[derive(Clone, Debug)]
pub struct DetectionConfig {
    pub method: DetectionMethod,
    /// Peak threshold, same units as facet measure. Must be positive and is
    /// meant to sit below the smallest expected facet measure.
    pub theta: f64,
    /// Box filter width in cells (odd). 1 disables smoothing.
    pub window: usize,
    /// Single-linkage radius in parameter units; None selects 3 cells.
    pub cluster_radius: Option<f64>,
}

impl DetectionConfig {
    pub fn smooth(theta: f64) -> Self {
        DetectionConfig {
            method: DetectionMethod::Smooth,
            theta,
            window: 5,
            cluster_radius: None,
        }
    }

    pub fn cluster(theta: f64) -> Self {
        DetectionConfig {
            method: DetectionMethod::Cluster,
            theta,
            window: 5,
            cluster_radius: None,
        }
    }

    fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.theta > 0.0) || !self.theta.is_finite() {
            return Err(Error::Validation("theta must be positive".into()));
        }
        if self.window % 2 == 0 {
            return Err(Error::Validation("smoothing window must be odd".into()));
        }
        if let Some(count) = grid.counts().iter().min() {
            if self.window >= *count {
                return Err(Error::Validation(format!(
                    "smoothing window {} must be below the grid size {}",
                    self.window, count
                )));
            }
        }
        if let Some(r) = self.cluster_radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::Validation("cluster radius must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct IndicatorEntry {
    pub normal: DVector<f64>,
    pub area: f64,
}

/// Detected (or exact) facet indicator set: unit normals with measures.
#[derive(Clone, Debug)]
pub struct FacetIndicatorSet {
    dim: usize,
    entries: Vec<IndicatorEntry>,
}

impl FacetIndicatorSet {
    pub fn new(dim: usize, entries: Vec<IndicatorEntry>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Validation(
                "indicator sets need dimension >= 2".into(),
            ));
        }
        for e in &entries {
            if e.normal.len() != dim {
                return Err(Error::Validation(
                    "indicator normal has wrong dimension".into(),
                ));
            }
            if (e.normal.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Validation(
                    "indicator normals must be unit vectors".into(),
                ));
            }
            if !(e.area > 0.0) || !e.area.is_finite() {
                return Err(Error::Validation("indicator areas must be positive".into()));
            }
        }
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let dot = entries[i].normal.dot(&entries[j].normal);
                if dot.abs() > 1.0 - TOL_FACET_GENERIC {
                    return Err(Error::Validation(format!(
                        "entries {} and {} have parallel or antiparallel normals; \
                         input is not facet-generic",
                        i, j
                    )));
                }
            }
        }
        Ok(FacetIndicatorSet { dim, entries })
    }

    /// Exact indicator of a polytope, bypassing the scan pipeline.
    pub fn from_polytope(p: &crate::geometry::Polytope) -> Result<Self> {
        let entries = p
            .facet_data()
            .iter()
            .map(|f| IndicatorEntry {
                normal: f.normal.clone(),
                area: f.area,
            })
            .collect();
        FacetIndicatorSet::new(p.dim(), entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[IndicatorEntry] {
        &self.entries
    }

    /// Number of detected facets.
    pub fn f(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.entries.iter().map(|e| e.area).sum()
    }
}

/// True when the field continues periodically across the ends of `axis`:
/// the surface is periodic there and the grid spans the full period.
fn axis_wraps(pattern: &Pattern, axis: usize) -> bool {
    if !pattern.surface.periodic_axes()[axis] {
        return false;
    }
    let (dlo, dhi) = pattern.surface.domain()[axis];
    let (glo, ghi) = pattern.grid.ranges()[axis];
    let period = dhi - dlo;
    ghi - glo >= period - 1.5 * pattern.grid.step(axis)
}

/// Separable box filter; wrapping axes convolve cyclically, the rest
/// truncate at the boundary and renormalize by the in-range count.
fn box_smooth(pattern: &Pattern, window: usize) -> Vec<f64> {
    let grid = &pattern.grid;
    let mut field = pattern.psi().to_vec();
    if window <= 1 {
        return field;
    }
    let half = (window / 2) as isize;
    for axis in 0..grid.axes() {
        let wraps = axis_wraps(pattern, axis);
        let count = grid.counts()[axis] as isize;
        let mut out = vec![0.0; field.len()];
        for flat in 0..field.len() {
            let idx = grid.unflatten(flat);
            let mut sum = 0.0;
            let mut used = 0usize;
            for off in -half..=half {
                let raw = idx[axis] as isize + off;
                let k = if wraps {
                    raw.rem_euclid(count)
                } else if (0..count).contains(&raw) {
                    raw
                } else {
                    continue;
                };
                let mut nidx = idx.clone();
                nidx[axis] = k as usize;
                sum += field[grid.flatten(&nidx)];
                used += 1;
            }
            out[flat] = sum / used as f64;
        }
        field = out;
    }
    field
}

/// Flat indices of strict local maxima over the Moore neighborhood, with
/// wrap-aware neighbor lookup on periodic full-span axes.
fn strict_local_maxima(field: &[f64], pattern: &Pattern) -> Vec<usize> {
    let grid = &pattern.grid;
    let axes = grid.axes();
    let wraps: Vec<bool> = (0..axes).map(|a| axis_wraps(pattern, a)).collect();
    let mut result = Vec::new();
    'cells: for flat in 0..field.len() {
        let idx = grid.unflatten(flat);
        let mut offsets = vec![-1isize; axes];
        loop {
            if offsets.iter().any(|&o| o != 0) {
                let mut nidx = vec![0usize; axes];
                let mut in_range = true;
                for a in 0..axes {
                    let count = grid.counts()[a] as isize;
                    let raw = idx[a] as isize + offsets[a];
                    if wraps[a] {
                        nidx[a] = raw.rem_euclid(count) as usize;
                    } else if (0..count).contains(&raw) {
                        nidx[a] = raw as usize;
                    } else {
                        in_range = false;
                        break;
                    }
                }
                if in_range && field[grid.flatten(&nidx)] >= field[flat] {
                    continue 'cells;
                }
            }
            // Advance the offset odometer.
            let mut a = 0;
            loop {
                if a == axes {
                    // All neighbors checked.
                    result.push(flat);
                    continue 'cells;
                }
                if offsets[a] < 1 {
                    offsets[a] += 1;
                    break;
                }
                offsets[a] = -1;
                a += 1;
            }
        }
    }
    result
}

fn entry_at(pattern: &Pattern, flat: usize) -> Result<IndicatorEntry> {
    let t = pattern.grid.point(&pattern.grid.unflatten(flat));
    let sigma = pattern.surface.sigma(&t)?;
    let norm = sigma.norm();
    if norm == 0.0 {
        return Err(Error::Validation(
            "peak at a degenerate surface point".into(),
        ));
    }
    Ok(IndicatorEntry {
        normal: sigma / norm,
        area: pattern.psi()[flat],
    })
}

/// Peak extraction on the box-smoothed field. Locations come from the
/// smoothed field; heights from the raw field at those locations.
pub fn detect_smooth(pattern: &Pattern, cfg: &DetectionConfig) -> Result<FacetIndicatorSet> {
    if cfg.method != DetectionMethod::Smooth {
        return Err(Error::Validation("config method is not smooth".into()));
    }
    cfg.validate(&pattern.grid)?;
    let smoothed = box_smooth(pattern, cfg.window);
    let mut entries = Vec::new();
    for flat in strict_local_maxima(&smoothed, pattern) {
        if smoothed[flat] > cfg.theta {
            entries.push(entry_at(pattern, flat)?);
        }
    }
    FacetIndicatorSet::new(pattern.surface.ambient_dim(), entries)
}

/// Peak extraction by single-linkage clustering of raw thresholded maxima.
/// Linkage distance is unwrapped Euclidean in parameter space, so antipodal
/// detections at a periodic seam stay separate and are flagged by the
/// facet-generic check instead of being silently merged.
pub fn detect_cluster(pattern: &Pattern, cfg: &DetectionConfig) -> Result<FacetIndicatorSet> {
    if cfg.method != DetectionMethod::Cluster {
        return Err(Error::Validation("config method is not cluster".into()));
    }
    cfg.validate(&pattern.grid)?;
    let grid = &pattern.grid;
    let radius = cfg
        .cluster_radius
        .unwrap_or_else(|| 3.0 * (0..grid.axes()).map(|a| grid.step(a)).fold(0.0, f64::max));
    let psi = pattern.psi();
    let candidates: Vec<usize> = strict_local_maxima(psi, pattern)
        .into_iter()
        .filter(|&flat| psi[flat] > cfg.theta)
        .collect();
    let points: Vec<Vec<f64>> = candidates
        .iter()
        .map(|&flat| grid.point(&grid.unflatten(flat)))
        .collect();

    // Single linkage via union-find.
    let mut parent: Vec<usize> = (0..candidates.len()).collect();
    fn root(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            let d2: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2.sqrt() <= radius {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    // Representative per cluster: the raw-psi argmax, ties to the lower index.
    let mut reps: Vec<Option<usize>> = vec![None; candidates.len()];
    for i in 0..candidates.len() {
        let r = root(&mut parent, i);
        let better = match reps[r] {
            None => true,
            Some(best) => psi[candidates[i]] > psi[candidates[best]],
        };
        if better {
            reps[r] = Some(i);
        }
    }
    let mut entries = Vec::new();
    for rep in reps.into_iter().flatten() {
        entries.push(entry_at(pattern, candidates[rep])?);
    }
    FacetIndicatorSet::new(pattern.surface.ambient_dim(), entries)
}

/// Dispatch on the configured method.
pub fn detect(pattern: &Pattern, cfg: &DetectionConfig) -> Result<FacetIndicatorSet> {
    match cfg.method {
        DetectionMethod::Smooth => detect_smooth(pattern, cfg),
        DetectionMethod::Cluster => detect_cluster(pattern, cfg),
    }
}
