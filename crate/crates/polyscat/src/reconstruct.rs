//! Inversion of facet indicator sets.
//!
//! Pipeline: resolve_signs enumerates Minkowski-feasible sign assignments,
//! each survivor yields an EGI; simplices invert exactly through the
//! closed-form construction, polygons chain their EGI, and 3D polytopes are
//! fitted by derivative-free descent on support parameters. All routes meet
//! in halfspaces_to_vertices, the vertex enumerator.

use nalgebra::{DMatrix, DVector};

use crate::detect::FacetIndicatorSet;
use crate::error::{Error, Result};
use crate::geometry::{factorial, Polytope, Simplex};
use crate::linalg;

/// Closure tolerance for exact (synthetic) indicator input.
pub const TOL_SIGNS_EXACT: f64 = 1e-9;
/// Closure tolerance for indicator sets read off a sampled pattern.
pub const TOL_SIGNS_DETECTED: f64 = 1e-2;
/// Sign enumeration is 2^(f-1); refuse beyond this.
const MAX_SIGN_FACETS: usize = 30;
/// Hard bound on EGI closure defect for the 3D fit, relative to total area.
const MAX_CLOSURE_DEFECT_3D: f64 = 0.10;

// ---------------------------------------------------------------------------
// Halfspace systems and vertex enumeration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
}

#[derive(Clone, Debug)]
pub struct HalfspaceRow {
    pub normal: DVector<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl HalfspaceRow {
    pub fn le(normal: DVector<f64>, rhs: f64) -> Self {
        HalfspaceRow {
            normal,
            relation: Relation::Le,
            rhs,
        }
    }

    pub fn ge(normal: DVector<f64>, rhs: f64) -> Self {
        HalfspaceRow {
            normal,
            relation: Relation::Ge,
            rhs,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HalfspaceSystem {
    dim: usize,
    rows: Vec<HalfspaceRow>,
}

impl HalfspaceSystem {
    pub fn new(dim: usize, rows: Vec<HalfspaceRow>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Validation(
                "halfspace systems need dimension >= 2".into(),
            ));
        }
        for row in &rows {
            if row.normal.len() != dim {
                return Err(Error::Validation(
                    "halfspace normal has wrong dimension".into(),
                ));
            }
            if row.normal.norm() < 1e-12 || !row.rhs.is_finite() {
                return Err(Error::Validation("degenerate halfspace row".into()));
            }
        }
        Ok(HalfspaceSystem { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HalfspaceRow] {
        &self.rows
    }
}

/// All k-subsets of 0..f in lexicographic order. Sizes stay tiny here.
fn subsets(f: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, f: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for j in start..=f - need {
            cur.push(j);
            rec(j + 1, f, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= f {
        rec(0, f, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Vertex enumeration by n-subset intersection, adequate for small systems.
/// Rows that end up with fewer than n incident vertices are redundant and
/// dropped, so adding a redundant row does not change the output.
pub fn halfspaces_to_vertices(system: &HalfspaceSystem) -> Result<Polytope> {
    let n = system.dim();
    let f = system.rows().len();
    // All-<= form with unit normals, so slacks are uniform.
    let mut normals: Vec<DVector<f64>> = Vec::with_capacity(f);
    let mut rhs: Vec<f64> = Vec::with_capacity(f);
    for row in system.rows() {
        let scale = row.normal.norm();
        let sign = match row.relation {
            Relation::Le => 1.0,
            Relation::Ge => -1.0,
        };
        normals.push(sign / scale * &row.normal);
        rhs.push(sign * row.rhs / scale);
    }
    if f < n {
        return Err(Error::Infeasible {
            message: "fewer halfspaces than dimensions: region unbounded".into(),
            residual: f64::INFINITY,
        });
    }
    if linalg::rank(&normals, 1e-10) < n {
        return Err(Error::Infeasible {
            message: "halfspace normals do not span: region unbounded".into(),
            residual: f64::INFINITY,
        });
    }
    // Recession ray check: a pointed unbounded region has an extreme ray with
    // n-1 active constraints; scan their nullspace directions. Spanning above
    // rules out regions containing a line, so this is exhaustive.
    for subset in subsets(f, n - 1) {
        let active: Vec<DVector<f64>> = subset.iter().map(|&j| normals[j].clone()).collect();
        if let Some(d) = linalg::hyperplane_normal(&active) {
            for dir in [&d, &(-&d)] {
                if normals.iter().all(|nj| nj.dot(dir) <= 1e-12) {
                    return Err(Error::Infeasible {
                        message: "region is unbounded along a recession ray".into(),
                        residual: f64::INFINITY,
                    });
                }
            }
        }
    }

    // Candidate vertices from n-subsets.
    let mut candidates: Vec<DVector<f64>> = Vec::new();
    for combo in subsets(f, n) {
        let a = DMatrix::from_fn(n, n, |r, c| normals[combo[r]][c]);
        let b = DVector::from_fn(n, |r, _| rhs[combo[r]]);
        if let Some(x) = linalg::solve(&a, &b) {
            let consistent = combo
                .iter()
                .all(|&j| (normals[j].dot(&x) - rhs[j]).abs() <= 1e-7 * (1.0 + x.norm()));
            let feasible = (0..f).all(|j| normals[j].dot(&x) <= rhs[j] + 1e-9 * (1.0 + x.norm()));
            if consistent && feasible {
                candidates.push(x);
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::Infeasible {
            message: "halfspace region is empty".into(),
            residual: f64::INFINITY,
        });
    }
    let scale = 1.0 + candidates.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // Dedupe, then order deterministically.
    let mut vertices: Vec<DVector<f64>> = Vec::new();
    for c in candidates {
        if !vertices.iter().any(|v| (v - &c).norm() <= 1e-7 * scale) {
            vertices.push(c);
        }
    }
    vertices.sort_by(|a, b| {
        for i in 0..n {
            match a[i].total_cmp(&b[i]) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    if vertices.len() < n + 1 {
        return Err(Error::Infeasible {
            message: "halfspace region is not full-dimensional".into(),
            residual: f64::INFINITY,
        });
    }

    // Facet incidence per row; redundant rows drop out.
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for j in 0..f {
        let on: Vec<usize> = (0..vertices.len())
            .filter(|&v| (normals[j].dot(&vertices[v]) - rhs[j]).abs() <= 1e-7 * scale)
            .collect();
        if on.len() < n {
            continue;
        }
        facets.push(order_facet(&vertices, on, &normals[j], n)?);
    }
    let vertex_rows: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| v.iter().cloned().collect())
        .collect();
    Polytope::new(n, vertex_rows, facets)
}

/// Orders a facet's vertex list for the Polytope constructor: 2D edges point
/// counterclockwise for their outward normal, 3D rings sort by angle around
/// the facet centroid, higher dimensions must already be simplices.
fn order_facet(
    vertices: &[DVector<f64>],
    on: Vec<usize>,
    outward: &DVector<f64>,
    n: usize,
) -> Result<Vec<usize>> {
    match n {
        2 => {
            if on.len() != 2 {
                return Err(Error::Validation(
                    "2d facet with more than two vertices".into(),
                ));
            }
            let e = &vertices[on[1]] - &vertices[on[0]];
            // Outward normal of a ccw edge is the edge rotated by -90 degrees.
            if e[1] * outward[0] - e[0] * outward[1] >= 0.0 {
                Ok(vec![on[0], on[1]])
            } else {
                Ok(vec![on[1], on[0]])
            }
        }
        3 => {
            let c = crate::geometry::vertex_centroid(
                &on.iter().map(|&i| vertices[i].clone()).collect::<Vec<_>>(),
            );
            // In-plane right-handed basis (u, w, outward).
            let seed = (0..3)
                .min_by(|&a, &b| outward[a].abs().total_cmp(&outward[b].abs()))
                .unwrap();
            let mut u = DVector::zeros(3);
            u[seed] = 1.0;
            u -= outward[seed] * outward;
            u /= u.norm();
            let w = linalg::cross3(outward, &u);
            let mut ring = on;
            ring.sort_by(|&a, &b| {
                let da = &vertices[a] - &c;
                let db = &vertices[b] - &c;
                let aa = w.dot(&da).atan2(u.dot(&da));
                let ab = w.dot(&db).atan2(u.dot(&db));
                aa.total_cmp(&ab)
            });
            Ok(ring)
        }
        _ => {
            if on.len() != n {
                return Err(Error::Validation(
                    "facets above dimension 3 must be simplices".into(),
                ));
            }
            Ok(on)
        }
    }
}

// ---------------------------------------------------------------------------
// Simplex reconstruction
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ReconstructedSimplex {
    pub simplex: Simplex,
    /// Largest relative deviation between the input areas and the areas of
    /// the reconstructed simplex, matched by unsigned normal.
    pub area_residual: f64,
}

/// Exact inversion for f = n + 1: determinant sign tests pick the relations,
/// the area product fixes the scale, and the halfspace route makes wrong
/// sign decisions fail loudly as empty or unbounded regions. Input normal
/// signs are irrelevant; output is unique up to translation and reflection.
pub fn reconstruct_simplex(indicator: &FacetIndicatorSet) -> Result<ReconstructedSimplex> {
    let n = indicator.dim();
    let f = indicator.f();
    if f != n + 1 {
        return Err(Error::Validation(format!(
            "simplex reconstruction needs {} facets in dimension {}, got {}",
            n + 1,
            n,
            f
        )));
    }
    // Entry with the largest area leads, for conditioning of 1/A_0.
    let mut order: Vec<usize> = (0..f).collect();
    let lead = (0..f)
        .max_by(|&a, &b| {
            indicator.entries()[a]
                .area
                .total_cmp(&indicator.entries()[b].area)
        })
        .unwrap();
    order.retain(|&k| k != lead);
    order.insert(0, lead);
    let normals: Vec<&DVector<f64>> = order
        .iter()
        .map(|&k| &indicator.entries()[k].normal)
        .collect();
    let areas: Vec<f64> = order.iter().map(|&k| indicator.entries()[k].area).collect();

    // N_j drops column j, keeping ascending order of the rest.
    let det_of = |j: usize| -> f64 {
        let cols: Vec<DVector<f64>> = (0..f)
            .filter(|&k| k != j)
            .map(|k| normals[k].clone())
            .collect();
        linalg::det(&DMatrix::from_columns(&cols))
    };
    let det0 = det_of(0);
    if det0.abs() < 1e-12 {
        return Err(Error::Singular(
            "facet normals are not in general position".into(),
        ));
    }
    let mut rows = Vec::with_capacity(f);
    let mut area_product = 1.0;
    for j in 1..=n {
        let detj = det_of(j);
        if detj.abs() < 1e-12 {
            return Err(Error::Singular(
                "facet normals are not in general position".into(),
            ));
        }
        let sign = if j % 2 == 1 {
            det0 / detj
        } else {
            -det0 / detj
        };
        // Positive n_j . v_j puts the opposite vertex on the positive side.
        let relation = if sign > 0.0 {
            Relation::Ge
        } else {
            Relation::Le
        };
        rows.push(HalfspaceRow {
            normal: normals[j].clone(),
            relation,
            rhs: 0.0,
        });
        area_product *= areas[j];
    }
    let a = (factorial(n - 1) * det0.abs() * area_product).powf(1.0 / (n - 1) as f64) / areas[0];
    rows.insert(0, HalfspaceRow::le(normals[0].clone(), a));

    let polytope = halfspaces_to_vertices(&HalfspaceSystem::new(n, rows)?)?;
    if polytope.vertices().len() != n + 1 {
        return Err(Error::Infeasible {
            message: "sign resolution did not produce a simplex".into(),
            residual: f64::INFINITY,
        });
    }
    let vertex_rows: Vec<Vec<f64>> = polytope
        .vertices()
        .iter()
        .map(|v| v.iter().cloned().collect())
        .collect();
    let simplex = Simplex::new(n, vertex_rows)?;

    // Consistency: forward areas must reproduce the input.
    let forward = simplex.to_polytope()?;
    let mut residual: f64 = 0.0;
    for entry in indicator.entries() {
        let best = forward
            .facet_data()
            .iter()
            .max_by(|x, y| {
                x.normal
                    .dot(&entry.normal)
                    .abs()
                    .total_cmp(&y.normal.dot(&entry.normal).abs())
            })
            .unwrap();
        residual = residual.max((best.area - entry.area).abs() / entry.area);
    }
    if residual > 0.5 {
        return Err(Error::Infeasible {
            message: "input is not a facet-indicator set of any simplex".into(),
            residual,
        });
    }
    Ok(ReconstructedSimplex {
        simplex,
        area_residual: residual,
    })
}

/// Hausdorff distance between vertex sets after centroid alignment,
/// minimized over global reflection. Zero for congruent simplices.
pub fn simplex_alignment_distance(a: &Simplex, b: &Simplex) -> f64 {
    let ca = a.centroid();
    let cb = b.centroid();
    let va: Vec<DVector<f64>> = a.vertices().iter().map(|v| v - &ca).collect();
    let mut best = f64::INFINITY;
    for refl in [1.0, -1.0] {
        let vb: Vec<DVector<f64>> = b.vertices().iter().map(|v| refl * (v - &cb)).collect();
        let mut h: f64 = 0.0;
        for x in &va {
            h = h.max(
                vb.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min),
            );
        }
        for y in &vb {
            h = h.max(
                va.iter()
                    .map(|x| (x - y).norm())
                    .fold(f64::INFINITY, f64::min),
            );
        }
        best = best.min(h);
    }
    best
}

// ---------------------------------------------------------------------------
// Sign resolution
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct SignAssignment {
    epsilon: Vec<i8>,
    /// Closure defect of this assignment relative to the total area.
    pub residual: f64,
}

impl SignAssignment {
    pub fn epsilon(&self) -> &[i8] {
        &self.epsilon
    }
}

/// Enumerates all 2^(f-1) sign patterns (first sign fixed to +1, quotienting
/// global reflection) and keeps those whose area-weighted normals close up.
pub fn resolve_signs(indicator: &FacetIndicatorSet, tol: f64) -> Result<Vec<SignAssignment>> {
    let n = indicator.dim();
    let f = indicator.f();
    if f == 0 {
        return Err(Error::Validation("empty indicator set".into()));
    }
    if f > MAX_SIGN_FACETS {
        return Err(Error::Validation(format!(
            "sign enumeration supports at most {} facets, got {}",
            MAX_SIGN_FACETS, f
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Validation("sign tolerance must be positive".into()));
    }
    // Spanning is sign-independent; check once.
    let normals: Vec<DVector<f64>> = indicator
        .entries()
        .iter()
        .map(|e| e.normal.clone())
        .collect();
    if linalg::rank(&normals, 1e-10) < n {
        return Err(Error::Validation(
            "indicator normals do not span the ambient space".into(),
        ));
    }
    let total: f64 = indicator.total_area();
    let weighted: Vec<DVector<f64>> = indicator
        .entries()
        .iter()
        .map(|e| e.area * &e.normal)
        .collect();
    let mut survivors = Vec::new();
    let mut best = f64::INFINITY;
    for mask in 0u64..(1u64 << (f - 1)) {
        let mut sum = weighted[0].clone();
        for j in 1..f {
            if mask >> (j - 1) & 1 == 0 {
                sum += &weighted[j];
            } else {
                sum -= &weighted[j];
            }
        }
        let residual = sum.norm() / total;
        best = best.min(residual);
        if residual <= tol {
            let epsilon: Vec<i8> = (0..f)
                .map(|j| {
                    if j == 0 || mask >> (j - 1) & 1 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .collect();
            survivors.push(SignAssignment { epsilon, residual });
        }
    }
    if survivors.is_empty() {
        return Err(Error::Infeasible {
            message: format!(
                "no sign assignment closes within {:.1e} of the total area",
                tol
            ),
            residual: best,
        });
    }
    survivors.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    Ok(survivors)
}

// ---------------------------------------------------------------------------
// EGI
// ---------------------------------------------------------------------------

/// Extended Gaussian image: area-weighted outward normals that close up and
/// span the ambient space.
#[derive(Clone, Debug)]
pub struct Egi {
    dim: usize,
    vectors: Vec<DVector<f64>>,
}

impl Egi {
    /// `tol_closure` is absolute; None selects 1e-6 times the total length.
    pub fn new(vectors: Vec<DVector<f64>>, tol_closure: Option<f64>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Validation("EGI needs at least one vector".into()));
        }
        let dim = vectors[0].len();
        if dim < 2 || vectors.iter().any(|m| m.len() != dim) {
            return Err(Error::Validation(
                "EGI vectors have mismatched dimensions".into(),
            ));
        }
        if vectors.iter().any(|m| m.norm() < 1e-15) {
            return Err(Error::Validation("EGI vectors must be nonzero".into()));
        }
        let total: f64 = vectors.iter().map(|m| m.norm()).sum();
        let tol = tol_closure.unwrap_or(1e-6 * total);
        let mut sum = DVector::zeros(dim);
        for m in &vectors {
            sum += m;
        }
        if sum.norm() > tol {
            return Err(Error::Validation(format!(
                "EGI closure defect {:.3e} exceeds tolerance {:.3e}",
                sum.norm(),
                tol
            )));
        }
        if linalg::rank(&vectors, 1e-10) < dim {
            return Err(Error::Validation("EGI vectors do not span".into()));
        }
        Ok(Egi { dim, vectors })
    }

    /// Applies a sign assignment to an indicator set.
    pub fn from_indicator(
        indicator: &FacetIndicatorSet,
        assignment: &SignAssignment,
        tol_closure: Option<f64>,
    ) -> Result<Self> {
        if assignment.epsilon().len() != indicator.f() {
            return Err(Error::Validation("sign assignment length mismatch".into()));
        }
        let vectors = indicator
            .entries()
            .iter()
            .zip(assignment.epsilon())
            .map(|(e, &s)| f64::from(s) * e.area * &e.normal)
            .collect();
        Egi::new(vectors, tol_closure)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    pub fn f(&self) -> usize {
        self.vectors.len()
    }

    pub fn closure_defect(&self) -> f64 {
        let mut sum = DVector::zeros(self.dim);
        for m in &self.vectors {
            sum += m;
        }
        sum.norm()
    }

    pub fn total_area(&self) -> f64 {
        self.vectors.iter().map(|m| m.norm()).sum()
    }
}

// ---------------------------------------------------------------------------
// 2D chaining
// ---------------------------------------------------------------------------

/// Chains the edges in normal-angle order; the closure residual is spread
/// equally over all edges before the vertices are emitted, and the polygon
/// is centered at its vertex centroid.
pub fn reconstruct_polygon_2d(egi: &Egi) -> Result<Polytope> {
    if egi.dim() != 2 {
        return Err(Error::Validation("polygon chaining needs a 2d EGI".into()));
    }
    let f = egi.f();
    if f < 3 {
        return Err(Error::Validation("a polygon needs at least 3 edges".into()));
    }
    let mut ms: Vec<DVector<f64>> = egi.vectors().to_vec();
    ms.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
    // Edge vector of outward normal m is m rotated by +90 degrees.
    let mut edges: Vec<DVector<f64>> = ms.iter().map(|m| linalg::rot90(m)).collect();
    let mut defect = DVector::zeros(2);
    for e in &edges {
        defect += e;
    }
    for e in &mut edges {
        *e -= &defect / f as f64;
    }
    let mut vertices = Vec::with_capacity(f);
    let mut p = DVector::zeros(2);
    for e in edges.iter().take(f - 1) {
        vertices.push(p.clone());
        p += e;
    }
    vertices.push(p);
    let centroid = crate::geometry::vertex_centroid(&vertices);
    let rows: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| vec![v[0] - centroid[0], v[1] - centroid[1]])
        .collect();
    let facets = (0..f).map(|k| vec![k, (k + 1) % f]).collect();
    Polytope::new(2, rows, facets)
}

// ---------------------------------------------------------------------------
// 3D support fitting
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct FitOptions {
    /// Stop when the summed squared area error falls this low.
    pub objective_tol: f64,
    pub max_sweeps: usize,
    pub initial_step: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            objective_tol: 1e-18,
            max_sweeps: 10_000,
            initial_step: 0.25,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolytopeFit {
    pub polytope: Polytope,
    /// Final summed squared area error.
    pub objective: f64,
}

/// Fits support parameters h so that the facet areas of the intersection of
/// {x : n_j . x <= h_j} match the EGI weights, by coordinate descent with
/// step halving. Moves that lose a facet or empty the region are rejected.
/// Stalling above tolerance returns the best iterate with its objective.
pub fn reconstruct_polytope_3d(egi: &Egi, opts: &FitOptions) -> Result<PolytopeFit> {
    if egi.dim() != 3 {
        return Err(Error::Validation("support fitting needs a 3d EGI".into()));
    }
    if egi.closure_defect() > MAX_CLOSURE_DEFECT_3D * egi.total_area() {
        return Err(Error::Validation(format!(
            "EGI closure defect {:.3e} exceeds {:.0}% of total area",
            egi.closure_defect(),
            100.0 * MAX_CLOSURE_DEFECT_3D
        )));
    }
    if !(opts.initial_step > 0.0) || !(opts.objective_tol >= 0.0) {
        return Err(Error::Validation("invalid fit options".into()));
    }
    let f = egi.f();
    let normals: Vec<DVector<f64>> = egi.vectors().iter().map(|m| m / m.norm()).collect();
    let targets: Vec<f64> = egi.vectors().iter().map(|m| m.norm()).collect();

    let evaluate = |h: &[f64]| -> Option<(f64, Polytope)> {
        let rows = normals
            .iter()
            .zip(h)
            .map(|(n, &hj)| HalfspaceRow::le(n.clone(), hj))
            .collect();
        let system = HalfspaceSystem::new(3, rows).ok()?;
        let p = halfspaces_to_vertices(&system).ok()?;
        let mut objective = 0.0;
        for (n, &target) in normals.iter().zip(&targets) {
            let area = p
                .facet_data()
                .iter()
                .find(|fd| fd.normal.dot(n) > 1.0 - 1e-12)
                .map(|fd| fd.area)?;
            objective += (area - target) * (area - target);
        }
        Some((objective, p))
    };

    let mut h = vec![1.0; f];
    let (mut objective, mut best_poly) = evaluate(&h).ok_or_else(|| {
        Error::Validation("initial support values degenerate: some facet is absent at h = 1".into())
    })?;
    let mut step = opts.initial_step;
    for _ in 0..opts.max_sweeps {
        if objective <= opts.objective_tol {
            break;
        }
        let mut improved = false;
        for j in 0..f {
            for delta in [step, -step] {
                let mut candidate = h.clone();
                candidate[j] += delta;
                if let Some((obj, poly)) = evaluate(&candidate) {
                    if obj < objective {
                        h = candidate;
                        objective = obj;
                        best_poly = poly;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
    }
    let centroid = best_poly.centroid();
    let polytope = best_poly.translate(&(-centroid));
    Ok(PolytopeFit {
        polytope,
        objective,
    })
}
