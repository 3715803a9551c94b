//! Convex polytopes with validated facet structure.
//!
//! A [`Polytope`] stores vertices plus facet incidence lists and derives unit
//! outward normals, facet measures and anchor points once at construction.
//! Facet orientation is supplied by the input ordering (counterclockwise for
//! n = 2, counterclockwise seen from outside for n = 3) and verified rather
//! than recomputed, so malformed inputs fail loudly. All tolerances scale
//! with the polytope diameter, which keeps the checks unit free.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// Relative tolerance for coplanarity, support and incidence checks.
pub const TOL_GEOMETRY: f64 = 1e-9;

/// Two facets count as parallel when |n_i . n_j| exceeds 1 - TOL_PARALLEL_GAP.
pub const TOL_PARALLEL_GAP: f64 = 1e-9;

/// Derived facet quantities; not stored in the input representation.
#[derive(Clone, Debug)]
pub struct Facet {
    /// Unit outward normal n_F.
    pub normal: DVector<f64>,
    /// Positive (n-1)-dimensional measure A_F; edge length for n = 2.
    pub area: f64,
    /// Anchor point p_F, fixed as the first vertex of the facet.
    pub anchor: DVector<f64>,
    /// Indices into the owning polytope's vertex list.
    pub vertex_indices: Vec<usize>,
}

/// An n-dimensional convex polytope, n >= 2.
///
/// For n >= 4 only simplices (n+1 vertices, facets of exactly n vertices)
/// are supported; the exact transforms cover n = 2 and n = 3.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<DVector<f64>>,
    facets: Vec<Vec<usize>>,
    facet_data: Vec<Facet>,
    diameter: f64,
    volume: f64,
}

impl Polytope {
    /// Validates and builds a polytope from raw vertex coordinates and facet
    /// incidence lists.
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>, facets: Vec<Vec<usize>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Validation("polytope dimension must be >= 2".into()));
        }
        if vertices.len() < dim + 1 {
            return Err(Error::Validation(format!(
                "need at least {} vertices in dimension {}",
                dim + 1,
                dim
            )));
        }
        let vertices: Vec<DVector<f64>> = vertices
            .into_iter()
            .map(|v| {
                if v.len() != dim {
                    return Err(Error::Validation(format!(
                        "vertex has {} coordinates, expected {}",
                        v.len(),
                        dim
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Validation("non-finite vertex coordinate".into()));
                }
                Ok(DVector::from_vec(v))
            })
            .collect::<Result<_>>()?;
        if dim >= 4 && vertices.len() != dim + 1 {
            return Err(Error::Validation(
                "dimensions >= 4 support simplices only".into(),
            ));
        }
        if facets.is_empty() {
            return Err(Error::Validation("polytope has no facets".into()));
        }

        let diameter = max_pairwise_distance(&vertices);
        if diameter <= 0.0 {
            return Err(Error::Validation("all vertices coincide".into()));
        }
        let centroid = vertex_centroid(&vertices);

        let mut facet_data = Vec::with_capacity(facets.len());
        for idx in &facets {
            facet_data.push(derive_facet(dim, &vertices, idx, diameter, &centroid)?);
        }

        let tol = TOL_GEOMETRY * diameter;
        for (f, facet) in facet_data.iter().enumerate() {
            for (vi, v) in vertices.iter().enumerate() {
                let offset = facet.normal.dot(&(v - &facet.anchor));
                if offset > tol {
                    return Err(Error::Validation(format!(
                        "facet {} does not support the polytope: vertex {} lies outside by {:.3e}",
                        f, vi, offset
                    )));
                }
                // A vertex on the facet hyperplane must be part of the facet,
                // otherwise the stored incidence is incomplete.
                if offset.abs() <= tol && !facet.vertex_indices.contains(&vi) {
                    return Err(Error::Validation(format!(
                        "vertex {} lies on the hyperplane of facet {} but is not listed in it",
                        vi, f
                    )));
                }
            }
        }

        // Convex position: every vertex sits on at least n facet hyperplanes
        // whose normals span R^n, i.e. it is an extreme point.
        for vi in 0..vertices.len() {
            let active: Vec<DVector<f64>> = facet_data
                .iter()
                .filter(|facet| facet.vertex_indices.contains(&vi))
                .map(|facet| facet.normal.clone())
                .collect();
            if active.len() < dim || linalg::rank(&active, 1e-9) < dim {
                return Err(Error::Validation(format!(
                    "vertex {} is not an extreme point (fewer than {} independent facets meet there)",
                    vi, dim
                )));
            }
        }

        let volume = signed_volume(dim, &vertices, &facets, &centroid)?;
        if volume <= 1e-15 * diameter.powi(dim as i32) {
            return Err(Error::Validation(format!(
                "polytope volume {:.3e} is not positive",
                volume
            )));
        }

        Ok(Polytope {
            dim,
            vertices,
            facets,
            facet_data,
            diameter,
            volume,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Derived facet data, one entry per stored facet.
    pub fn facet_data(&self) -> &[Facet] {
        &self.facet_data
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Volume computed by triangulation at construction time.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Average of the vertices; strictly interior for convex polytopes.
    pub fn centroid(&self) -> DVector<f64> {
        vertex_centroid(&self.vertices)
    }

    /// True iff no two facet normals are parallel within 1e-9.
    pub fn is_facet_generic(&self) -> bool {
        for i in 0..self.facet_data.len() {
            for j in (i + 1)..self.facet_data.len() {
                let d = self.facet_data[i].normal.dot(&self.facet_data[j].normal);
                if d.abs() > 1.0 - TOL_PARALLEL_GAP {
                    return false;
                }
            }
        }
        true
    }

    /// Triangulates into simplices: a fan from polygon vertex 0 for n = 2, a
    /// centroid cone over facet fans for n = 3, and the identity for simplex
    /// inputs. Simplex volumes sum to `volume()`.
    pub fn triangulate(&self) -> Result<Vec<Simplex>> {
        if self.vertices.len() == self.dim + 1 {
            let verts = self.vertices.iter().map(|v| v.clone()).collect();
            return Ok(vec![Simplex::from_vectors(self.dim, verts)?]);
        }
        match self.dim {
            2 => {
                let mut out = Vec::new();
                for facet in &self.facets {
                    let (a, b) = (facet[0], facet[1]);
                    if a == 0 || b == 0 {
                        continue;
                    }
                    out.push(Simplex::from_vectors(
                        2,
                        vec![
                            self.vertices[0].clone(),
                            self.vertices[a].clone(),
                            self.vertices[b].clone(),
                        ],
                    )?);
                }
                Ok(out)
            }
            3 => {
                let c = self.centroid();
                let mut out = Vec::new();
                for facet in &self.facets {
                    for k in 1..facet.len() - 1 {
                        out.push(Simplex::from_vectors(
                            3,
                            vec![
                                c.clone(),
                                self.vertices[facet[0]].clone(),
                                self.vertices[facet[k]].clone(),
                                self.vertices[facet[k + 1]].clone(),
                            ],
                        )?);
                    }
                }
                Ok(out)
            }
            _ => Err(Error::Validation(
                "triangulation beyond simplices is unsupported for n >= 4".into(),
            )),
        }
    }

    /// The translate P + t.
    pub fn translate(&self, t: &DVector<f64>) -> Polytope {
        let vertices = self
            .vertices
            .iter()
            .map(|v| (v + t).iter().copied().collect())
            .collect();
        Polytope::new(self.dim, vertices, self.facets.clone())
            .expect("translation preserves validity")
    }

    /// The reflection -P. Negation reverses ring orientation only in odd
    /// dimensions (det(-I) = (-1)^n), so facet lists are reversed exactly
    /// then.
    pub fn reflect(&self) -> Polytope {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| -x).collect())
            .collect();
        let facets = if self.dim % 2 == 1 {
            self.facets
                .iter()
                .map(|f| f.iter().rev().copied().collect())
                .collect()
        } else {
            self.facets.clone()
        };
        Polytope::new(self.dim, vertices, facets).expect("reflection preserves validity")
    }
}

/// A nondegenerate simplex: exactly n+1 affinely independent vertices.
#[derive(Clone, Debug)]
pub struct Simplex {
    dim: usize,
    vertices: Vec<DVector<f64>>,
}

impl Simplex {
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        let vertices = vertices
            .into_iter()
            .map(|v| {
                if v.len() != dim {
                    return Err(Error::Validation(format!(
                        "vertex has {} coordinates, expected {}",
                        v.len(),
                        dim
                    )));
                }
                Ok(DVector::from_vec(v))
            })
            .collect::<Result<_>>()?;
        Simplex::from_vectors(dim, vertices)
    }

    pub fn from_vectors(dim: usize, vertices: Vec<DVector<f64>>) -> Result<Self> {
        if dim < 1 {
            return Err(Error::Validation("simplex dimension must be >= 1".into()));
        }
        if vertices.len() != dim + 1 {
            return Err(Error::Validation(format!(
                "simplex in dimension {} needs {} vertices, got {}",
                dim,
                dim + 1,
                vertices.len()
            )));
        }
        let s = Simplex { dim, vertices };
        if s.det_t().abs() <= 1e-12 {
            return Err(Error::Validation(
                "simplex vertices are affinely dependent".into(),
            ));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    /// The edge matrix T with columns v_j - v_0.
    pub fn matrix_t(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = (1..=self.dim)
            .map(|j| &self.vertices[j] - &self.vertices[0])
            .collect();
        DMatrix::from_columns(&cols)
    }

    pub fn det_t(&self) -> f64 {
        linalg::det(&self.matrix_t())
    }

    /// vol(S) = |det T| / n!.
    pub fn volume(&self) -> f64 {
        self.det_t().abs() / factorial(self.dim)
    }

    pub fn centroid(&self) -> DVector<f64> {
        vertex_centroid(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        max_pairwise_distance(&self.vertices)
    }

    /// Converts to a full polytope; facet vertex orders are chosen to satisfy
    /// the outward orientation convention.
    pub fn to_polytope(&self) -> Result<Polytope> {
        let n = self.dim;
        let centroid = self.centroid();
        let mut facets = Vec::with_capacity(n + 1);
        for omit in 0..=n {
            let mut idx: Vec<usize> = (0..=n).filter(|&k| k != omit).collect();
            let pts: Vec<&DVector<f64>> = idx.iter().map(|&k| &self.vertices[k]).collect();
            let diffs: Vec<DVector<f64>> = (1..n).map(|k| pts[k] - pts[0]).collect();
            let mut normal = linalg::hyperplane_normal(&diffs)
                .ok_or_else(|| Error::Validation("degenerate simplex facet".into()))?;
            if normal.dot(&(pts[0] - &centroid)) < 0.0 {
                normal = -normal;
            }
            match n {
                2 => {
                    let e = pts[1] - pts[0];
                    // Outward normal must be the edge direction rotated by -90.
                    if e[1] * normal[0] - e[0] * normal[1] < 0.0 {
                        idx.swap(0, 1);
                    }
                }
                3 => {
                    let c = linalg::cross3(&(pts[1] - pts[0]), &(pts[2] - pts[0]));
                    if c.dot(&normal) < 0.0 {
                        idx.swap(1, 2);
                    }
                }
                _ => {}
            }
            facets.push(idx);
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect();
        Polytope::new(n, vertices, facets)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn vertex_centroid(vertices: &[DVector<f64>]) -> DVector<f64> {
    let mut c = DVector::zeros(vertices[0].len());
    for v in vertices {
        c += v;
    }
    c / vertices.len() as f64
}

fn max_pairwise_distance(vertices: &[DVector<f64>]) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            best = best.max((&vertices[i] - &vertices[j]).norm());
        }
    }
    best
}

fn derive_facet(
    dim: usize,
    vertices: &[DVector<f64>],
    idx: &[usize],
    diameter: f64,
    centroid: &DVector<f64>,
) -> Result<Facet> {
    for &i in idx {
        if i >= vertices.len() {
            return Err(Error::Validation(format!(
                "facet vertex index {} out of range",
                i
            )));
        }
    }
    let mut seen = idx.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != idx.len() {
        return Err(Error::Validation("facet lists a vertex twice".into()));
    }
    let tol = TOL_GEOMETRY * diameter;

    match dim {
        2 => {
            if idx.len() != 2 {
                return Err(Error::Validation(
                    "2d facet must be an edge of 2 vertices".into(),
                ));
            }
            let a = &vertices[idx[0]];
            let b = &vertices[idx[1]];
            let e = b - a;
            let len = e.norm();
            if len <= 1e-12 * diameter {
                return Err(Error::Validation("degenerate zero-length edge".into()));
            }
            // For a ccw boundary the outward normal is the edge rotated by -90 degrees.
            let normal = DVector::from_vec(vec![e[1] / len, -e[0] / len]);
            Ok(Facet {
                normal,
                area: len,
                anchor: a.clone(),
                vertex_indices: idx.to_vec(),
            })
        }
        3 => {
            if idx.len() < 3 {
                return Err(Error::Validation(
                    "3d facet needs at least 3 vertices".into(),
                ));
            }
            // Newell normal: robust for any planar polygon given in order.
            let mut nvec = DVector::zeros(3);
            for k in 0..idx.len() {
                let p = &vertices[idx[k]];
                let q = &vertices[idx[(k + 1) % idx.len()]];
                nvec += linalg::cross3(p, q);
            }
            let norm = nvec.norm();
            let area = 0.5 * norm;
            if area <= 1e-12 * diameter * diameter {
                return Err(Error::Validation("degenerate zero-area facet".into()));
            }
            let normal = nvec / norm;
            let anchor = vertices[idx[0]].clone();
            for &i in idx {
                if normal.dot(&(&vertices[i] - &anchor)).abs() > tol {
                    return Err(Error::Validation(format!(
                        "facet vertices are not coplanar (vertex {})",
                        i
                    )));
                }
            }
            // Reject reflex or self-crossing vertex orders.
            let m = idx.len();
            for k in 0..m {
                let a = &vertices[idx[k]];
                let b = &vertices[idx[(k + 1) % m]];
                let c = &vertices[idx[(k + 2) % m]];
                let cr = linalg::cross3(&(b - a), &(c - b));
                if cr.dot(&normal) < -tol * diameter {
                    return Err(Error::Validation(
                        "facet vertices are not in counterclockwise convex order".into(),
                    ));
                }
            }
            Ok(Facet {
                normal,
                area,
                anchor,
                vertex_indices: idx.to_vec(),
            })
        }
        _ => {
            if idx.len() != dim {
                return Err(Error::Validation(
                    "facets in dimension >= 4 must be simplices".into(),
                ));
            }
            let pts: Vec<&DVector<f64>> = idx.iter().map(|&i| &vertices[i]).collect();
            let diffs: Vec<DVector<f64>> = (1..dim).map(|k| pts[k] - pts[0]).collect();
            let mut normal = linalg::hyperplane_normal(&diffs)
                .ok_or_else(|| Error::Validation("degenerate facet hyperplane".into()))?;
            let off = normal.dot(&(pts[0] - centroid));
            if off.abs() <= tol {
                return Err(Error::Validation(
                    "cannot orient facet normal away from the centroid".into(),
                ));
            }
            if off < 0.0 {
                normal = -normal;
            }
            // (n-1)-measure of the simplex facet via the Gram determinant.
            let g = DMatrix::from_columns(&diffs);
            let gram = g.transpose() * &g;
            let area = linalg::det(&gram).max(0.0).sqrt() / factorial(dim - 1);
            if area <= 1e-12 * diameter.powi(dim as i32 - 1) {
                return Err(Error::Validation("degenerate zero-measure facet".into()));
            }
            Ok(Facet {
                normal,
                area,
                anchor: pts[0].clone(),
                vertex_indices: idx.to_vec(),
            })
        }
    }
}

fn signed_volume(
    dim: usize,
    vertices: &[DVector<f64>],
    facets: &[Vec<usize>],
    centroid: &DVector<f64>,
) -> Result<f64> {
    match dim {
        2 => {
            let mut acc = 0.0;
            for facet in facets {
                let a = &vertices[facet[0]] - centroid;
                let b = &vertices[facet[1]] - centroid;
                acc += 0.5 * (a[0] * b[1] - a[1] * b[0]);
            }
            Ok(acc)
        }
        3 => {
            let mut acc = 0.0;
            for facet in facets {
                let f0 = &vertices[facet[0]] - centroid;
                for k in 1..facet.len() - 1 {
                    let f1 = &vertices[facet[k]] - centroid;
                    let f2 = &vertices[facet[k + 1]] - centroid;
                    acc += linalg::cross3(&f1, &f2).dot(&f0) / 6.0;
                }
            }
            Ok(acc)
        }
        _ => {
            let cols: Vec<DVector<f64>> = (1..vertices.len())
                .map(|j| &vertices[j] - &vertices[0])
                .collect();
            let m = DMatrix::from_columns(&cols);
            Ok(linalg::det(&m).abs() / factorial(dim))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn unit_triangle() -> Polytope {
        Polytope::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    fn unit_cube() -> Polytope {
        let v = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        let f = vec![
            vec![0, 3, 2, 1],
            vec![4, 5, 6, 7],
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
        ];
        Polytope::new(3, v, f).unwrap()
    }

    #[test]
    fn unit_triangle_facets() {
        let p = unit_triangle();
        let f = p.facet_data();
        assert_relative_eq!(f[0].area, 1.0, max_relative = 1e-12);
        assert_relative_eq!(f[1].area, 2f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(f[2].area, 1.0, max_relative = 1e-12);
        assert_relative_eq!(f[0].normal[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(f[0].normal[1], -1.0, epsilon = 1e-12);
        let r = 0.5f64.sqrt();
        assert_relative_eq!(f[1].normal[0], r, epsilon = 1e-12);
        assert_relative_eq!(f[1].normal[1], r, epsilon = 1e-12);
        assert_relative_eq!(f[2].normal[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(f[2].normal[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn volumes() {
        assert_relative_eq!(unit_triangle().volume(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(unit_cube().volume(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn regular_tetrahedron_areas() {
        // Edge length 1.
        let a = 1.0 / 3f64.sqrt();
        let p = Simplex::new(
            3,
            vec![
                vec![a, a, a],
                vec![a, -a, -a],
                vec![-a, a, -a],
                vec![-a, -a, a],
            ],
        )
        .unwrap();
        // This tetrahedron has edge length sqrt(8/3); rescale to edge 1.
        let s = 1.0 / (8f64 / 3.0).sqrt();
        let verts: Vec<Vec<f64>> = p
            .vertices()
            .iter()
            .map(|v| v.iter().map(|x| x * s).collect())
            .collect();
        let p = Simplex::new(3, verts).unwrap().to_polytope().unwrap();
        for f in p.facet_data() {
            assert_relative_eq!(f.area, 3f64.sqrt() / 4.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn facet_generic_flags() {
        assert!(!unit_cube().is_facet_generic());
        assert!(unit_triangle().is_facet_generic());
    }

    #[test]
    fn perturbed_octahedron_is_facet_generic() {
        let p = octahedron_with_apex(vec![0.1, 0.0, 1.0]);
        // Independent pairwise check against the op under test.
        let f = p.facet_data();
        let mut any_parallel = false;
        for i in 0..f.len() {
            for j in (i + 1)..f.len() {
                if f[i].normal.dot(&f[j].normal).abs() > 1.0 - 1e-9 {
                    any_parallel = true;
                }
            }
        }
        assert!(!any_parallel);
        assert!(p.is_facet_generic());
        // The unperturbed octahedron has four parallel facet pairs.
        assert!(!octahedron_with_apex(vec![0.0, 0.0, 1.0]).is_facet_generic());
    }

    pub(crate) fn octahedron_with_apex(apex: Vec<f64>) -> Polytope {
        let v = vec![
            vec![1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, -1.0, 0.0],
            apex,
            vec![0.0, 0.0, -1.0],
        ];
        let f = vec![
            vec![0, 2, 4],
            vec![2, 1, 4],
            vec![1, 3, 4],
            vec![3, 0, 4],
            vec![2, 0, 5],
            vec![1, 2, 5],
            vec![3, 1, 5],
            vec![0, 3, 5],
        ];
        Polytope::new(3, v, f).unwrap()
    }

    #[test]
    fn triangulate_square() {
        let p = Polytope::new(
            2,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap();
        let t = p.triangulate().unwrap();
        assert_eq!(t.len(), 2);
        let total: f64 = t.iter().map(|s| s.volume()).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn triangulate_simplex_is_identity() {
        let s = Simplex::new(
            3,
            vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
        )
        .unwrap();
        let p = s.to_polytope().unwrap();
        let t = p.triangulate().unwrap();
        assert_eq!(t.len(), 1);
        assert_relative_eq!(t[0].volume(), p.volume(), max_relative = 1e-12);
    }

    #[test]
    fn triangulation_additivity_3d() {
        let p = octahedron_with_apex(vec![0.1, 0.0, 1.0]);
        let t = p.triangulate().unwrap();
        let total: f64 = t.iter().map(|s| s.volume()).sum();
        assert_relative_eq!(total, p.volume(), max_relative = 1e-9);
    }

    #[test]
    fn simplex_volume_matches_det_formula() {
        let s = Simplex::new(
            3,
            vec![
                vec![0.2, -0.1, 0.4],
                vec![1.1, 0.3, -0.2],
                vec![-0.5, 0.9, 0.1],
                vec![0.3, 0.2, 1.2],
            ],
        )
        .unwrap();
        let p = s.to_polytope().unwrap();
        assert_relative_eq!(p.volume(), s.det_t().abs() / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn minkowski_closure_on_fixtures() {
        for p in [
            unit_triangle(),
            unit_cube(),
            octahedron_with_apex(vec![0.1, 0.0, 1.0]),
        ] {
            let mut sum = DVector::zeros(p.dim());
            let mut total = 0.0;
            for f in p.facet_data() {
                sum += f.area * &f.normal;
                total += f.area;
            }
            assert!(
                sum.norm() <= 1e-9 * total,
                "closure residual {}",
                sum.norm()
            );
        }
    }

    #[test]
    fn translation_and_reflection() {
        let p = octahedron_with_apex(vec![0.1, 0.0, 1.0]);
        let t = DVector::from_vec(vec![0.7, -1.3, 2.0]);
        let q = p.translate(&t);
        for (a, b) in p.facet_data().iter().zip(q.facet_data()) {
            assert_relative_eq!(a.area, b.area, max_relative = 1e-12);
            assert!((&a.normal - &b.normal).norm() < 1e-12);
            assert!(((&a.anchor + &t) - &b.anchor).norm() < 1e-12);
        }
        let r = p.reflect();
        for (a, b) in p.facet_data().iter().zip(r.facet_data()) {
            assert_relative_eq!(a.area, b.area, max_relative = 1e-12);
            assert!((&a.normal + &b.normal).norm() < 1e-12);
        }

        // Even dimension: negation alone already flips the normals.
        let tri = unit_triangle();
        let rt = tri.reflect();
        for (a, b) in tri.facet_data().iter().zip(rt.facet_data()) {
            assert_relative_eq!(a.area, b.area, max_relative = 1e-12);
            assert!((&a.normal + &b.normal).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        // Clockwise edge: inward normal fails the support check.
        assert!(Polytope::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1, 0], vec![1, 2], vec![2, 0]],
        )
        .is_err());
        // Non-convex quadrilateral.
        assert!(Polytope::new(
            2,
            vec![
                vec![0.0, 0.0],
                vec![2.0, 0.0],
                vec![0.5, 0.5],
                vec![0.0, 2.0]
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .is_err());
        // Out-of-range index.
        assert!(Polytope::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![0, 1], vec![1, 5], vec![2, 0]],
        )
        .is_err());
        // Degenerate simplex.
        assert!(Simplex::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]],).is_err());
    }
}
