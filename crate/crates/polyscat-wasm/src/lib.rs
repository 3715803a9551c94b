//! Browser bindings for the 2d pipeline. Three operations, all JSON string
//! in / JSON string out so the page needs no generated types: fetch a shape,
//! sample its psi curve on the semicircle, and run the full
//! simulate -> detect -> reconstruct loop.
//!
//! Build for the web with
//! `wasm-pack build crates/polyscat-wasm --target web --out-dir ../../www/pkg`.
//! The crate also compiles natively so the bindings are testable off-browser.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use polyscat::detect::{detect, DetectionConfig, FacetIndicatorSet};
use polyscat::fixtures;
use polyscat::geometry::Polytope;
use polyscat::io;
use polyscat::reconstruct::{reconstruct_polygon_2d, resolve_signs, Egi};
use polyscat::scan::{simulate_pattern, Grid, Pattern, ScanSurface, SurfaceKind};

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Named shapes for the demo page. `seed` and `facets` only matter for the
/// random polygon.
#[wasm_bindgen]
pub fn fixture_json(name: &str, seed: u64, facets: usize) -> Result<String, String> {
    let p = match name {
        "triangle" => fixtures::unit_triangle(),
        "square" => fixtures::unit_square(),
        "hexagon" => fixtures::sample_hexagon(),
        "random" => fixtures::random_polygon(seed, facets.clamp(3, 12)).map_err(fail)?,
        other => return Err(format!("unknown fixture '{}'", other)),
    };
    io::polytope_to_json(&p).map_err(fail)
}

#[derive(Serialize)]
struct Curve {
    t: Vec<f64>,
    psi: Vec<f64>,
}

fn semicircle_pattern(p: &Polytope, lambda: f64, cells: usize) -> Result<Pattern, String> {
    let surface = ScanSurface::new(SurfaceKind::Semicircle2d);
    let grid = Grid::with_counts(&surface, vec![cells]).map_err(fail)?;
    simulate_pattern(p, &surface, &grid, lambda).map_err(fail)
}

/// psi over the semicircle: `{"t": [...], "psi": [...]}`.
#[wasm_bindgen]
pub fn psi_curve(poly_json: &str, lambda: f64, cells: usize) -> Result<String, String> {
    let p = io::polytope_from_json(poly_json).map_err(fail)?;
    let pattern = semicircle_pattern(&p, lambda, cells)?;
    let t = (0..pattern.grid.len())
        .map(|flat| pattern.grid.point(&pattern.grid.unflatten(flat))[0])
        .collect();
    serde_json::to_string(&Curve {
        t,
        psi: pattern.psi().to_vec(),
    })
    .map_err(fail)
}

#[derive(Serialize)]
struct Detection {
    t: f64,
    angle: f64,
    area: f64,
}

#[derive(Serialize)]
struct Roundtrip {
    theta: f64,
    detections: Vec<Detection>,
    /// Vertex rings centered at their centroids, one per feasible sign
    /// assignment (usually one).
    original: Vec<Vec<f64>>,
    reconstructed: Vec<Vec<Vec<f64>>>,
}

fn centered_ring(p: &Polytope) -> Vec<Vec<f64>> {
    let c = p.centroid();
    // 2d facet rows chain the boundary; emit vertices in facet order.
    let mut order: Vec<usize> = Vec::new();
    let mut at = 0usize;
    for _ in 0..p.vertices().len() {
        order.push(at);
        let next = p
            .facets()
            .iter()
            .find(|f| f[0] == at)
            .map(|f| f[1])
            .unwrap_or(at);
        at = next;
    }
    order
        .into_iter()
        .map(|i| {
            let v = &p.vertices()[i];
            vec![v[0] - c[0], v[1] - c[1]]
        })
        .collect()
}

/// Full 2d loop. `theta_frac` thresholds peaks at that fraction of the
/// largest psi value; every feasible reconstruction is returned.
#[wasm_bindgen]
pub fn roundtrip_2d(
    poly_json: &str,
    lambda: f64,
    cells: usize,
    theta_frac: f64,
) -> Result<String, String> {
    if !(theta_frac > 0.0 && theta_frac < 1.0) {
        return Err("theta_frac must lie in (0, 1)".into());
    }
    let p = io::polytope_from_json(poly_json).map_err(fail)?;
    if p.dim() != 2 {
        return Err("the demo loop is 2d only".into());
    }
    let pattern = semicircle_pattern(&p, lambda, cells)?;
    let peak = pattern.psi().iter().cloned().fold(0.0, f64::max);
    let theta = theta_frac * peak;
    let ind = detect(&pattern, &DetectionConfig::smooth(theta)).map_err(fail)?;
    if ind.is_empty() {
        return Err("no peaks above the threshold".into());
    }
    let detections = describe(&ind);

    let mut reconstructed = Vec::new();
    // Noisy detections rarely close tightly; 5% of the total area keeps the
    // demo forgiving while the library default stays strict.
    if let Ok(assignments) = resolve_signs(&ind, 5e-2) {
        for a in &assignments {
            let egi = match Egi::from_indicator(&ind, a, Some(0.1 * ind.total_area())) {
                Ok(egi) => egi,
                Err(_) => continue,
            };
            if let Ok(rec) = reconstruct_polygon_2d(&egi) {
                reconstructed.push(centered_ring(&rec));
            }
        }
    }
    serde_json::to_string(&Roundtrip {
        theta,
        detections,
        original: centered_ring(&p),
        reconstructed,
    })
    .map_err(fail)
}

fn describe(ind: &FacetIndicatorSet) -> Vec<Detection> {
    ind.entries()
        .iter()
        .map(|e| {
            let angle = e.normal[1].atan2(e.normal[0]);
            Detection {
                t: angle.rem_euclid(std::f64::consts::PI),
                angle,
                area: e.area,
            }
        })
        .collect()
}
