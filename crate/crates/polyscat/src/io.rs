//! File interchange: polytope and indicator JSON, pattern CSV with a JSON
//! sidecar, OBJ and SVG exports.
//!
//! Numbers round-trip exactly: JSON and CSV floats are written in shortest
//! form that parses back to the same f64, so written patterns reload bit
//! identical and repeated runs produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::detect::{FacetIndicatorSet, IndicatorEntry};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::scan::{Grid, Pattern, ScanSurface};
use nalgebra::DVector;

// ---------------------------------------------------------------------------
// Polytope JSON: {"dim": n, "vertices": [[..],..], "facets": [[i,..],..]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PolytopeDoc {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Vec<usize>>,
}

pub fn polytope_to_json(p: &Polytope) -> Result<String> {
    let doc = PolytopeDoc {
        dim: p.dim(),
        vertices: p
            .vertices()
            .iter()
            .map(|v| v.iter().cloned().collect())
            .collect(),
        facets: p.facets().to_vec(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parses and fully revalidates; malformed geometry is rejected here.
pub fn polytope_from_json(text: &str) -> Result<Polytope> {
    let doc: PolytopeDoc = serde_json::from_str(text)?;
    Polytope::new(doc.dim, doc.vertices, doc.facets)
}

pub fn write_polytope(path: &Path, p: &Polytope) -> Result<()> {
    fs::write(path, polytope_to_json(p)?)?;
    Ok(())
}

pub fn read_polytope(path: &Path) -> Result<Polytope> {
    polytope_from_json(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Indicator JSON: {"dim": n, "entries": [{"normal": [..], "area": a}, ..]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct IndicatorEntryDoc {
    normal: Vec<f64>,
    area: f64,
}

#[derive(Serialize, Deserialize)]
struct IndicatorDoc {
    dim: usize,
    entries: Vec<IndicatorEntryDoc>,
}

pub fn indicator_to_json(ind: &FacetIndicatorSet) -> Result<String> {
    let doc = IndicatorDoc {
        dim: ind.dim(),
        entries: ind
            .entries()
            .iter()
            .map(|e| IndicatorEntryDoc {
                normal: e.normal.iter().cloned().collect(),
                area: e.area,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn indicator_from_json(text: &str) -> Result<FacetIndicatorSet> {
    let doc: IndicatorDoc = serde_json::from_str(text)?;
    let entries = doc
        .entries
        .into_iter()
        .map(|e| IndicatorEntry {
            normal: DVector::from_vec(e.normal),
            area: e.area,
        })
        .collect();
    FacetIndicatorSet::new(doc.dim, entries)
}

pub fn write_indicator(path: &Path, ind: &FacetIndicatorSet) -> Result<()> {
    fs::write(path, indicator_to_json(ind)?)?;
    Ok(())
}

pub fn read_indicator(path: &Path) -> Result<FacetIndicatorSet> {
    indicator_from_json(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Pattern CSV + sidecar
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PatternMeta {
    lambda: f64,
    surface: ScanSurface,
    grid: Grid,
}

/// Sidecar lives next to the CSV with `.meta.json` appended to the full
/// file name.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    csv_path.with_file_name(name)
}

/// Header is `t1[,t2],abs_phi,psi`; rows run row-major over the grid.
pub fn pattern_to_csv(pattern: &Pattern) -> String {
    let axes = pattern.grid.axes();
    let mut out = String::new();
    out.push_str(if axes == 1 {
        "t1,abs_phi,psi\n"
    } else {
        "t1,t2,abs_phi,psi\n"
    });
    for flat in 0..pattern.grid.len() {
        let idx = pattern.grid.unflatten(flat);
        let t = pattern.grid.point(&idx);
        for coord in t.iter() {
            out.push_str(&format!("{},", coord));
        }
        out.push_str(&format!(
            "{},{}\n",
            pattern.abs_phi()[flat],
            pattern.psi()[flat]
        ));
    }
    out
}

pub fn write_pattern(csv_path: &Path, pattern: &Pattern) -> Result<()> {
    fs::write(csv_path, pattern_to_csv(pattern))?;
    let meta = PatternMeta {
        lambda: pattern.lambda,
        surface: pattern.surface,
        grid: pattern.grid.clone(),
    };
    fs::write(sidecar_path(csv_path), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

pub fn read_pattern(csv_path: &Path) -> Result<Pattern> {
    let meta: PatternMeta = serde_json::from_str(&fs::read_to_string(sidecar_path(csv_path))?)?;
    let text = fs::read_to_string(csv_path)?;
    let axes = meta.grid.axes();
    let expected_header = if axes == 1 {
        "t1,abs_phi,psi"
    } else {
        "t1,t2,abs_phi,psi"
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == expected_header => {}
        other => {
            return Err(Error::Parse(format!(
                "expected pattern header '{}', found {:?}",
                expected_header, other
            )))
        }
    }
    let mut abs_phi = Vec::with_capacity(meta.grid.len());
    let mut psi = Vec::with_capacity(meta.grid.len());
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != axes + 2 {
            return Err(Error::Parse(format!(
                "row {}: expected {} fields, found {}",
                lineno + 2,
                axes + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}: {}", lineno + 2, e)))
        };
        abs_phi.push(parse(fields[axes])?);
        psi.push(parse(fields[axes + 1])?);
    }
    if abs_phi.len() != meta.grid.len() {
        return Err(Error::Parse(format!(
            "pattern has {} rows, grid expects {}",
            abs_phi.len(),
            meta.grid.len()
        )));
    }
    Pattern::from_parts(meta.surface, meta.grid, meta.lambda, abs_phi, psi)
}

// ---------------------------------------------------------------------------
// OBJ / SVG exports
// ---------------------------------------------------------------------------

/// Wavefront OBJ with one face per facet ring; 3D only.
pub fn polytope_to_obj(p: &Polytope) -> Result<String> {
    if p.dim() != 3 {
        return Err(Error::Validation("OBJ export is for 3d polytopes".into()));
    }
    let mut out = String::new();
    for v in p.vertices() {
        out.push_str(&format!("v {} {} {}\n", v[0], v[1], v[2]));
    }
    for facet in p.facets() {
        out.push('f');
        for &i in facet {
            out.push_str(&format!(" {}", i + 1));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_obj(path: &Path, p: &Polytope) -> Result<()> {
    fs::write(path, polytope_to_obj(p)?)?;
    Ok(())
}

/// Walks the directed edge list into a boundary ring.
fn polygon_ring(p: &Polytope) -> Result<Vec<usize>> {
    let mut succ = vec![usize::MAX; p.vertices().len()];
    for e in p.facets() {
        succ[e[0]] = e[1];
    }
    let mut ring = Vec::with_capacity(p.vertices().len());
    let mut at = p.facets()[0][0];
    for _ in 0..p.vertices().len() {
        ring.push(at);
        at = succ[at];
        if at == usize::MAX {
            return Err(Error::Validation("polygon boundary is not closed".into()));
        }
    }
    if at != ring[0] {
        return Err(Error::Validation(
            "polygon boundary is not a single cycle".into(),
        ));
    }
    Ok(ring)
}

/// SVG polyline of the polygon boundary; 2D only. The y axis is flipped so
/// the drawing matches mathematical orientation.
pub fn polygon_to_svg(p: &Polytope) -> Result<String> {
    if p.dim() != 2 {
        return Err(Error::Validation(
            "SVG polygon export is for 2d polytopes".into(),
        ));
    }
    let ring = polygon_ring(p)?;
    let xs: Vec<f64> = p.vertices().iter().map(|v| v[0]).collect();
    let ys: Vec<f64> = p.vertices().iter().map(|v| v[1]).collect();
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = 760.0 / span;
    let mut points = String::new();
    for &i in &ring {
        let px = 20.0 + (xs[i] - x0) * scale;
        let py = 20.0 + (y1 - ys[i]) * scale;
        points.push_str(&format!("{:.4},{:.4} ", px, py));
    }
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 {:.4}\">\n\
         <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n\
         </svg>\n",
        40.0 + (y1 - y0) * scale,
        points.trim_end()
    ))
}

/// SVG polyline of psi over a one-axis grid, the 2D scan readout.
pub fn psi_curve_to_svg(pattern: &Pattern) -> Result<String> {
    if pattern.grid.axes() != 1 {
        return Err(Error::Validation(
            "psi curve export needs a one-axis grid".into(),
        ));
    }
    let n = pattern.grid.len();
    let (lo, hi) = pattern.grid.ranges()[0];
    let peak = pattern.psi().iter().cloned().fold(0.0, f64::max).max(1e-12);
    let mut points = String::new();
    for flat in 0..n {
        let t = pattern.grid.point(&pattern.grid.unflatten(flat))[0];
        let px = 40.0 + (t - lo) / (hi - lo) * 720.0;
        let py = 380.0 - pattern.psi()[flat] / peak * 340.0;
        points.push_str(&format!("{:.4},{:.4} ", px, py));
    }
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 400\">\n\
         <line x1=\"40\" y1=\"380\" x2=\"760\" y2=\"380\" stroke=\"black\"/>\n\
         <line x1=\"40\" y1=\"40\" x2=\"40\" y2=\"380\" stroke=\"black\"/>\n\
         <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n\
         </svg>\n",
        points.trim_end()
    ))
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}
