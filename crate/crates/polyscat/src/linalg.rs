//! Small dense linear algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};

pub(crate) fn det(m: &DMatrix<f64>) -> f64 {
    m.determinant()
}

/// Solves a x = b for square a, or returns None when a is singular.
pub(crate) fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    a.clone().lu().solve(b)
}

pub(crate) fn cross3(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Rotates a 2-vector by +90 degrees: (x, y) -> (-y, x).
pub(crate) fn rot90(v: &DVector<f64>) -> DVector<f64> {
    DVector::from_vec(vec![-v[1], v[0]])
}

/// Unit normal of the hyperplane spanned by the given difference vectors.
///
/// `diffs` must hold n-1 vectors of R^n; the normal is the left singular
/// vector for the smallest singular value. Returns None when the vectors do
/// not span an (n-1)-dimensional subspace.
pub(crate) fn hyperplane_normal(diffs: &[DVector<f64>]) -> Option<DVector<f64>> {
    let n = diffs.first()?.len();
    if diffs.len() != n - 1 {
        return None;
    }
    let m = DMatrix::from_columns(diffs);
    let svd = m.svd(true, false);
    let sv = &svd.singular_values;
    // Rank must be exactly n-1: all n-1 singular values well above zero.
    let scale = sv[0];
    if scale == 0.0 || sv[sv.len() - 1] <= 1e-12 * scale {
        return None;
    }
    let u = svd.u?;
    // u holds n-1 columns spanning the range; the normal completes the basis.
    // Recover it by projecting out the range from a seed vector.
    for seed in 0..n {
        let mut v = DVector::zeros(n);
        v[seed] = 1.0;
        for c in 0..u.ncols() {
            let col = u.column(c);
            let proj = col.dot(&v);
            v -= proj * DVector::from_column_slice(col.as_slice());
        }
        let norm = v.norm();
        if norm > 1e-6 {
            return Some(v / norm);
        }
    }
    None
}

/// Rank of a set of vectors, relative to the largest singular value.
pub(crate) fn rank(vectors: &[DVector<f64>], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(vectors);
    let sv = m.singular_values();
    let scale = sv[0];
    if scale == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * scale).count()
}
