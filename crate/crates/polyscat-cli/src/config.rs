//! Argument and configuration plumbing.
//!
//! Every pipeline option can come from a flag or from a JSON config file
//! given with `--config`; when both supply a value the flag wins. Values
//! absent from both fall back to the defaults documented on the flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use polyscat::detect::{DetectionConfig, DetectionMethod};
use polyscat::reconstruct::TOL_SIGNS_DETECTED;
use polyscat::scan::{Grid, ScanSurface, SurfaceKind};

use crate::commands::Exit;

pub const DEFAULT_LAMBDA: f64 = 0.01;
pub const DEFAULT_THETA: f64 = 0.1;

#[derive(Parser)]
#[command(
    name = "polyscat",
    version,
    about = "Scattering patterns of convex polytopes: simulate, detect peaks, reconstruct shapes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sample |phi| and psi over a scan grid; writes CSV plus a .meta.json sidecar.
    Simulate(SimulateArgs),
    /// Extract facet normals and measures from a stored pattern.
    Detect(DetectArgs),
    /// Rebuild a polytope from a facet indicator file.
    Reconstruct(ReconstructArgs),
    /// Run simulate -> detect -> reconstruct in memory and report the errors.
    Roundtrip(RoundtripArgs),
    /// Emit a built-in or seeded random input as JSON.
    Fixture(FixtureArgs),
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Polytope JSON input.
    #[arg(long)]
    pub poly: PathBuf,
    /// Also write the psi curve as an SVG (one-parameter scans only).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args)]
pub struct DetectArgs {
    /// Pattern CSV input (the .meta.json sidecar must sit next to it).
    #[arg(long)]
    pub pattern: PathBuf,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args)]
pub struct ReconstructArgs {
    /// Facet indicator JSON input.
    #[arg(long)]
    pub indicator: PathBuf,
    /// Also export the result as Wavefront OBJ (3d only).
    #[arg(long)]
    pub obj: Option<PathBuf>,
    /// Also export the result as an SVG outline (2d only).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args)]
pub struct RoundtripArgs {
    /// Polytope JSON input; ground truth for the error report.
    #[arg(long)]
    pub poly: PathBuf,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Args)]
pub struct FixtureArgs {
    /// One of: triangle, square, hexagon, cube, tetrahedron, octahedron,
    /// polygon, polytope3d, simplex, ambiguous-indicator.
    #[arg(long)]
    pub name: String,
    /// Facet count for the polygon / polytope3d generators.
    #[arg(long)]
    pub facets: Option<usize>,
    /// Dimension for the simplex generator (2 to 4).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Edge length for the tetrahedron.
    #[arg(long)]
    pub edge: Option<f64>,
    #[command(flatten)]
    pub common: CommonOpts,
}

/// Options shared by the pipeline stages. Each one may instead come from the
/// `--config` JSON file; an explicit flag wins over the file.
#[derive(Args)]
pub struct CommonOpts {
    /// Wavelength in (0, 1]. Default 0.01.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Scan surface: semicircle, hemisphere or ewald. Default matches the
    /// input dimension (semicircle for 2d, hemisphere for 3d).
    #[arg(long)]
    pub surface: Option<String>,
    /// Surface radius. Default 1.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Coordinate hyperplane the Ewald sphere touches (0, 1 or 2). Default 2.
    #[arg(long)]
    pub axis: Option<usize>,
    /// Grid cells per axis, e.g. 512 or 256x256. Default 512 (one-parameter
    /// scans) or 256x256.
    #[arg(long)]
    pub grid: Option<String>,
    /// Peak extraction method: smooth or cluster. Default smooth.
    #[arg(long)]
    pub method: Option<String>,
    /// Peak threshold in facet-measure units. Default 0.1; `roundtrip`
    /// defaults to 0.4 times the smallest true facet measure instead.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Box-filter window for the smooth method (odd). Default 5.
    #[arg(long)]
    pub window: Option<usize>,
    /// Relative closure tolerance for the sign search. Default 1e-2.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the random fixture generators. Default 1.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path. Defaults: pattern.csv, indicator.json, reconstructed.json;
    /// `fixture` prints to stdout when no path is given.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON file supplying defaults for any option above (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Config-file counterpart of `CommonOpts`; every field optional.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda: Option<f64>,
    pub surface: Option<String>,
    pub radius: Option<f64>,
    pub axis: Option<usize>,
    pub grid: Option<String>,
    pub method: Option<String>,
    pub theta: Option<f64>,
    pub window: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

/// Fully resolved options for one run. `surface`, `grid`, `theta` and
/// `output` stay optional here because their defaults depend on the input
/// (dimension, surface kind, true facet measures, subcommand).
pub struct RunConfig {
    pub lambda: f64,
    pub surface: Option<String>,
    pub radius: f64,
    pub axis: Option<usize>,
    pub grid: Option<Vec<usize>>,
    pub method: DetectionMethod,
    pub theta: Option<f64>,
    pub window: usize,
    pub tol: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Merges flags over the optional config file; flags win.
    pub fn resolve(opts: &CommonOpts) -> Result<RunConfig, Exit> {
        let file: FileConfig = match &opts.config {
            None => FileConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Exit::new(5, format!("config {}: {}", path.display(), e)))?;
                serde_json::from_str(&text)
                    .map_err(|e| Exit::new(5, format!("config {}: {}", path.display(), e)))?
            }
        };
        let grid = match opts.grid.clone().or(file.grid) {
            None => None,
            Some(text) => Some(parse_grid(&text)?),
        };
        let method = match opts
            .method
            .clone()
            .or(file.method)
            .unwrap_or_else(|| "smooth".into())
            .as_str()
        {
            "smooth" => DetectionMethod::Smooth,
            "cluster" => DetectionMethod::Cluster,
            other => return Err(Exit::new(2, format!("unknown method '{}'", other))),
        };
        Ok(RunConfig {
            lambda: opts.lambda.or(file.lambda).unwrap_or(DEFAULT_LAMBDA),
            surface: opts.surface.clone().or(file.surface),
            radius: opts.radius.or(file.radius).unwrap_or(1.0),
            axis: opts.axis.or(file.axis),
            grid,
            method,
            theta: opts.theta.or(file.theta),
            window: opts.window.or(file.window).unwrap_or(5),
            tol: opts.tol.or(file.tol).unwrap_or(TOL_SIGNS_DETECTED),
            seed: opts.seed.or(file.seed).unwrap_or(1),
            output: opts.output.clone().or(file.output),
        })
    }

    /// Scan surface for an input of dimension `dim`.
    pub fn surface_for(&self, dim: usize) -> Result<ScanSurface, Exit> {
        let name = match &self.surface {
            Some(name) => name.clone(),
            None => match dim {
                2 => "semicircle".into(),
                _ => "hemisphere".into(),
            },
        };
        let kind = match name.as_str() {
            "semicircle" => SurfaceKind::Semicircle2d,
            "hemisphere" => SurfaceKind::Hemisphere3d,
            "ewald" => SurfaceKind::Ewald3d,
            other => return Err(Exit::new(2, format!("unknown surface '{}'", other))),
        };
        let mut surface = ScanSurface::new(kind)
            .with_radius(self.radius)
            .map_err(|e| Exit::new(2, e.to_string()))?;
        if let Some(axis) = self.axis {
            surface = surface
                .with_axis(axis)
                .map_err(|e| Exit::new(2, e.to_string()))?;
        }
        Ok(surface)
    }

    pub fn grid_for(&self, surface: &ScanSurface) -> Result<Grid, Exit> {
        match &self.grid {
            None => Ok(Grid::default_for(surface)),
            Some(counts) => {
                Grid::with_counts(surface, counts.clone()).map_err(|e| Exit::new(2, e.to_string()))
            }
        }
    }

    pub fn detection_config(&self, theta: f64) -> DetectionConfig {
        DetectionConfig {
            method: self.method,
            theta,
            window: self.window,
            cluster_radius: None,
        }
    }
}

/// `512` or `256x256`.
pub fn parse_grid(text: &str) -> Result<Vec<usize>, Exit> {
    text.split('x')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Exit::new(2, format!("bad grid spec '{}'", text)))
        })
        .collect()
}
