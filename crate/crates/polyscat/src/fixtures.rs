//! Reference polytopes for tests, examples and the CLI fixture generator.
//!
//! The hexagon and the deformed octahedron are tuned for the detection
//! pipeline at lambda = 0.01 on the default grids: facet-generic with all
//! folded normals well separated, and facet measures balanced enough that
//! no sidelobe of a large facet climbs over a 0.3 * min-measure threshold.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Polytope, Simplex};

pub fn unit_triangle() -> Polytope {
    Polytope::new(
        2,
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    )
    .expect("static fixture")
}

pub fn unit_square() -> Polytope {
    Polytope::new(
        2,
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .expect("static fixture")
}

pub fn unit_cube() -> Polytope {
    let vertices = (0..8)
        .map(|i| vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
        .collect();
    let facets = vec![
        vec![0, 4, 6, 2], // x = 0
        vec![1, 3, 7, 5], // x = 1
        vec![0, 1, 5, 4], // y = 0
        vec![2, 6, 7, 3], // y = 1
        vec![0, 2, 3, 1], // z = 0
        vec![4, 5, 7, 6], // z = 1
    ];
    Polytope::new(3, vertices, facets).expect("static fixture")
}

/// Irregular convex hexagon with edge lengths in [2.0, 2.5] (ratio 1.25)
/// and folded edge-normal directions pairwise at least 0.22 rad apart. Size,
/// placement and length balance are tuned so that on a 512-point semicircle
/// scan at lambda = 0.01 both peak extraction methods see exactly six maxima
/// above 0.3 * min edge length, with >10% threshold margin on every
/// interference ripple and sidelobe.
pub fn sample_hexagon() -> Polytope {
    let vertices = vec![
        vec![1.1073, 0.1469],
        vec![0.7483, 1.7785],
        vec![-0.8977, 2.0656],
        vec![-2.0875, 0.3648],
        vec![-1.2083, -1.5156],
        vec![0.4937, -1.4072],
    ];
    let facets = (0..6).map(|k| vec![k, (k + 1) % 6]).collect();
    Polytope::new(2, vertices, facets).expect("static fixture")
}

/// Regular tetrahedron with the given edge length, centered at the origin.
/// Its four facet normals are (+-1, +-1, +-1)/sqrt(3) patterns, all far from
/// the hemisphere parameterization boundary.
pub fn regular_tetrahedron(edge: f64) -> Polytope {
    let s = edge / (2.0 * std::f64::consts::SQRT_2);
    let vertices = vec![
        vec![s, s, s],
        vec![s, -s, -s],
        vec![-s, s, -s],
        vec![-s, -s, s],
    ];
    let facets = vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]];
    Polytope::new(3, vertices, facets).expect("static fixture")
}

/// Octahedron with vertices pushed off the coordinate axes so that no two of
/// the eight facet normals are parallel or antiparallel: folded normals are
/// pairwise >= 0.26 rad apart, facet areas within a factor 1.30, and every
/// normal keeps a safe margin from the hemisphere parameterization seams.
/// The shape is additionally tuned so that at lambda = 0.01 the interference
/// bias on every psi peak stays below 2.5% of the facet area and both peak
/// extraction methods find exactly eight maxima above 0.4 * min area on the
/// default hemisphere grids.
pub fn deformed_octahedron() -> Polytope {
    let vertices = vec![
        vec![0.9914, -0.0981, 0.1781],  // +x
        vec![-1.0467, 0.1774, 0.0388],  // -x
        vec![-0.0472, 1.0964, -0.1656], // +y
        vec![0.0189, -1.2459, -0.2033], // -y
        vec![-0.1382, -0.1395, 1.0298], // +z
        vec![0.0488, -0.1812, -0.8733], // -z
    ];
    // One triangle per sign octant; vertex order flips with octant parity to
    // keep the normals outward.
    let facets = vec![
        vec![0, 2, 4], // (+,+,+)
        vec![0, 5, 2], // (+,+,-)
        vec![0, 4, 3], // (+,-,+)
        vec![0, 3, 5], // (+,-,-)
        vec![1, 4, 2], // (-,+,+)
        vec![1, 2, 5], // (-,+,-)
        vec![1, 3, 4], // (-,-,+)
        vec![1, 5, 3], // (-,-,-)
    ];
    Polytope::new(3, vertices, facets).expect("static fixture")
}

/// Random convex polygon with `f` edges: draws outward normal directions
/// (pairwise gaps bounded away from 0 and pi), draws edge lengths, projects
/// them onto the Minkowski closure constraint, and chains the edges.
pub fn random_polygon(seed: u64, f: usize) -> Result<Polytope> {
    if f < 3 {
        return Err(Error::Validation("polygon needs at least 3 edges".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(2).wrapping_add(1));
    let tau = 2.0 * std::f64::consts::PI;
    'outer: for _ in 0..256 {
        // Sorted normal angles with comfortable mutual gaps.
        let mut angles: Vec<f64> = (0..f).map(|_| rng.random_range(0.0..tau)).collect();
        angles.sort_by(f64::total_cmp);
        for k in 0..f {
            let next = if k + 1 == f {
                angles[0] + tau
            } else {
                angles[k + 1]
            };
            let gap = next - angles[k];
            if gap < 0.08 || gap > std::f64::consts::PI - 0.08 {
                continue 'outer;
            }
        }
        let lengths: Vec<f64> = (0..f).map(|_| rng.random_range(0.6..1.0)).collect();
        // Least-norm correction enforcing sum of length * normal = 0.
        let mut rx = 0.0;
        let mut ry = 0.0;
        for k in 0..f {
            rx += lengths[k] * angles[k].cos();
            ry += lengths[k] * angles[k].sin();
        }
        // Gram matrix of the two constraint rows.
        let (mut gxx, mut gxy, mut gyy) = (0.0, 0.0, 0.0);
        for a in &angles {
            gxx += a.cos() * a.cos();
            gxy += a.cos() * a.sin();
            gyy += a.sin() * a.sin();
        }
        let det = gxx * gyy - gxy * gxy;
        if det.abs() < 1e-9 {
            continue;
        }
        let mx = (gyy * rx - gxy * ry) / det;
        let my = (gxx * ry - gxy * rx) / det;
        let corrected: Vec<f64> = (0..f)
            .map(|k| lengths[k] - mx * angles[k].cos() - my * angles[k].sin())
            .collect();
        if corrected.iter().any(|l| *l < 0.15) {
            continue;
        }
        // Chain the edges counterclockwise.
        let mut vertices = vec![vec![0.0, 0.0]];
        let (mut x, mut y) = (0.0, 0.0);
        for k in 0..f - 1 {
            x += corrected[k] * -angles[k].sin();
            y += corrected[k] * angles[k].cos();
            vertices.push(vec![x, y]);
        }
        let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / f as f64;
        let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / f as f64;
        for v in &mut vertices {
            v[0] -= cx;
            v[1] -= cy;
        }
        let facets = (0..f).map(|k| vec![k, (k + 1) % f]).collect();
        if let Ok(p) = Polytope::new(2, vertices, facets) {
            return Ok(p);
        }
    }
    Err(Error::Validation(format!(
        "no valid random polygon with {} edges after 256 draws",
        f
    )))
}

/// Random nondegenerate n-simplex with vertices in [-1, 1]^n and
/// |det T| >= 0.1 where T collects the edge vectors from vertex 0.
pub fn random_simplex(seed: u64, dim: usize) -> Result<Simplex> {
    if !(2..=4).contains(&dim) {
        return Err(Error::Validation(
            "simplex fixtures cover dimensions 2 to 4".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(2).wrapping_add(7));
    for _ in 0..512 {
        let vertices: Vec<Vec<f64>> = (0..=dim)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        if let Ok(s) = Simplex::new(dim, vertices) {
            if s.det_t().abs() >= 0.1 {
                return Ok(s);
            }
        }
    }
    Err(Error::Validation(
        "no well conditioned random simplex found".into(),
    ))
}

/// Random bounded 3-polytope with exactly `f` facets and support values in
/// [0.8, 1.2]. Normals are jittered, randomly rotated Fibonacci-sphere
/// directions, so the normal set always spans well and the body stays
/// compact; purely uniform normal draws have long-tailed diameters (random
/// tetrahedra routinely exceed diameter 20). Draws are rejected until no
/// facet is redundant and the diameter is moderate.
pub fn random_polytope_3d(seed: u64, f: usize) -> Result<Polytope> {
    if !(4..=14).contains(&f) {
        return Err(Error::Validation("3d fixtures cover 4 to 14 facets".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(2).wrapping_add(13));
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    'draw: for _ in 0..256 {
        let rot = nalgebra::Rotation3::from_euler_angles(
            rng.random_range(0.0..std::f64::consts::TAU),
            rng.random_range(0.0..std::f64::consts::TAU),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let mut normals: Vec<DVector<f64>> = Vec::with_capacity(f);
        for i in 0..f {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / f as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            let base = nalgebra::Vector3::new(r * phi.cos(), r * phi.sin(), z);
            let jitter = nalgebra::Vector3::new(
                rng.random_range(-0.25..0.25),
                rng.random_range(-0.25..0.25),
                rng.random_range(-0.25..0.25),
            );
            let n = (rot * (base + jitter)).normalize();
            let n = DVector::from_iterator(3, n.iter().cloned());
            // Folded separation keeps the fixture facet-generic with margin.
            if !normals.iter().all(|m| m.dot(&n).abs() < 0.97) {
                continue 'draw;
            }
            normals.push(n);
        }
        let rows = normals
            .iter()
            .map(|n| crate::reconstruct::HalfspaceRow::le(n.clone(), rng.random_range(0.8..1.2)))
            .collect();
        let system = match crate::reconstruct::HalfspaceSystem::new(3, rows) {
            Ok(s) => s,
            Err(_) => continue,
        };
        match crate::reconstruct::halfspaces_to_vertices(&system) {
            // The diameter cap rejects the rare draw whose jitter still
            // lines up; a regular tetrahedron at unit support distance
            // already has diameter 4.9, so the cap cannot be much tighter.
            Ok(p) if p.facets().len() == f && p.is_facet_generic() && p.diameter() <= 6.0 => {
                return Ok(p)
            }
            _ => continue,
        }
    }
    Err(Error::Validation(
        "no valid random 3d polytope found".into(),
    ))
}

/// Indicator set admitting two sign assignments: the union of two triangle
/// EGIs. Either triangle's signs flip jointly, so the same unsigned data is
/// realized by two genuinely different hexagons.
pub fn ambiguous_hexagon_indicator() -> crate::detect::FacetIndicatorSet {
    let triangle = |angles: [f64; 3]| -> Vec<(DVector<f64>, f64)> {
        let n: Vec<DVector<f64>> = angles
            .iter()
            .map(|&t| DVector::from_vec(vec![t.cos(), t.sin()]))
            .collect();
        // Positive lengths closing the triangle, first length fixed to 1.
        let a = nalgebra::DMatrix::from_columns(&[n[1].clone(), n[2].clone()]);
        let sol = a.lu().solve(&(-&n[0])).expect("spanning pair");
        assert!(sol[0] > 0.0 && sol[1] > 0.0);
        vec![
            (n[0].clone(), 1.0),
            (n[1].clone(), sol[0]),
            (n[2].clone(), sol[1]),
        ]
    };
    let entries = triangle([0.2, 2.0, 4.2])
        .into_iter()
        .chain(triangle([1.1, 3.0, 5.3]))
        .map(|(normal, area)| crate::detect::IndicatorEntry { normal, area })
        .collect();
    crate::detect::FacetIndicatorSet::new(2, entries).expect("static fixture")
}
