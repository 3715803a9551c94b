//! Subcommand implementations.
//!
//! Exit codes: 0 success, 2 validation, 3 empty detection, 4 infeasible
//! reconstruction, 5 I/O or file-format trouble. Library errors are mapped
//! onto those classes and carry a stage label so `roundtrip` failures name
//! the stage that broke.

use std::path::{Path, PathBuf};

use polyscat::detect::{detect, FacetIndicatorSet};
use polyscat::fixtures;
use polyscat::geometry::Polytope;
use polyscat::io;
use polyscat::reconstruct::{
    reconstruct_polygon_2d, reconstruct_polytope_3d, reconstruct_simplex, resolve_signs,
    simplex_alignment_distance, Egi, FitOptions,
};
use polyscat::scan::{simulate_pattern, Pattern};
use polyscat::Error;

use crate::config::{
    Cli, Command, DetectArgs, FixtureArgs, ReconstructArgs, RoundtripArgs, RunConfig, SimulateArgs,
};

/// Failure with its process exit code.
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl Exit {
    pub fn new(code: i32, message: impl Into<String>) -> Exit {
        Exit {
            code,
            message: message.into(),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::Singular(_) | Error::TolUnreachable { .. } => 2,
        Error::Infeasible { .. } => 4,
        Error::Io(_) | Error::Json(_) | Error::Parse(_) => 5,
    }
}

/// Stage-labels a library error and picks its exit code.
fn stage<T>(label: &str, r: polyscat::Result<T>) -> Result<T, Exit> {
    r.map_err(|e| Exit::new(exit_code(&e), format!("{}: {}", label, e)))
}

pub fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Detect(args) => cmd_detect(&args),
        Command::Reconstruct(args) => cmd_reconstruct(&args),
        Command::Roundtrip(args) => cmd_roundtrip(&args),
        Command::Fixture(args) => cmd_fixture(&args),
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn simulate_from(cfg: &RunConfig, p: &Polytope) -> Result<Pattern, Exit> {
    let surface = cfg.surface_for(p.dim())?;
    let grid = cfg.grid_for(&surface)?;
    stage("simulate", simulate_pattern(p, &surface, &grid, cfg.lambda))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Exit> {
    let cfg = RunConfig::resolve(&args.common)?;
    let p = stage("read polytope", io::read_polytope(&args.poly))?;
    let pattern = simulate_from(&cfg, &p)?;
    let out = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("pattern.csv"));
    stage("write pattern", io::write_pattern(&out, &pattern))?;
    println!(
        "wrote {} rows to {} (sidecar {})",
        pattern.grid.len(),
        out.display(),
        io::sidecar_path(&out).display()
    );
    if let Some(svg) = &args.svg {
        let text = stage("render svg", io::psi_curve_to_svg(&pattern))?;
        stage("write svg", std::fs::write(svg, text).map_err(Error::from))?;
        println!("wrote psi curve to {}", svg.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

fn detect_from(cfg: &RunConfig, pattern: &Pattern, theta: f64) -> Result<FacetIndicatorSet, Exit> {
    let ind = stage("detect", detect(pattern, &cfg.detection_config(theta)))?;
    if ind.is_empty() {
        return Err(Exit::new(
            3,
            format!("detect: no peaks above theta = {}", theta),
        ));
    }
    Ok(ind)
}

fn cmd_detect(args: &DetectArgs) -> Result<(), Exit> {
    let cfg = RunConfig::resolve(&args.common)?;
    let pattern = stage("read pattern", io::read_pattern(&args.pattern))?;
    let ind = detect_from(
        &cfg,
        &pattern,
        cfg.theta.unwrap_or(crate::config::DEFAULT_THETA),
    )?;
    let out = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("indicator.json"));
    stage("write indicator", io::write_indicator(&out, &ind))?;
    println!("detected {} facets -> {}", ind.f(), out.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// reconstruct
// ---------------------------------------------------------------------------

/// `poly.json` -> `poly_2.json` for solution 2 of several; the single
/// solution keeps the plain path.
fn suffixed(path: &Path, index: usize, count: usize) -> PathBuf {
    if count <= 1 || index == 0 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let name = match path.extension() {
        Some(ext) => format!("{}_{}.{}", stem, index + 1, ext.to_string_lossy()),
        None => format!("{}_{}", stem, index + 1),
    };
    path.with_file_name(name)
}

/// Dispatches by facet count and dimension; returns every feasible solution.
fn reconstruct_from(cfg: &RunConfig, ind: &FacetIndicatorSet) -> Result<Vec<Polytope>, Exit> {
    let n = ind.dim();
    if ind.f() == n + 1 {
        let rec = stage("reconstruct simplex", reconstruct_simplex(ind))?;
        println!(
            "simplex reconstruction, area residual {:.3e}",
            rec.area_residual
        );
        return Ok(vec![stage("assemble simplex", rec.simplex.to_polytope())?]);
    }
    let assignments = stage("sign search", resolve_signs(ind, cfg.tol))?;
    if assignments.len() > 1 {
        println!("{} feasible sign assignments", assignments.len());
    }
    let mut solutions = Vec::new();
    for a in &assignments {
        let egi = stage(
            "assemble EGI",
            Egi::from_indicator(ind, a, Some(cfg.tol * ind.total_area())),
        )?;
        match n {
            2 => solutions.push(stage("chain polygon", reconstruct_polygon_2d(&egi))?),
            3 => {
                let fit = stage(
                    "fit supports",
                    reconstruct_polytope_3d(&egi, &FitOptions::default()),
                )?;
                println!("support fit objective {:.3e}", fit.objective);
                solutions.push(fit.polytope);
            }
            _ => {
                return Err(Exit::new(
                    2,
                    format!(
                        "no reconstruction for {} facets in dimension {}",
                        ind.f(),
                        n
                    ),
                ))
            }
        }
    }
    Ok(solutions)
}

fn cmd_reconstruct(args: &ReconstructArgs) -> Result<(), Exit> {
    let cfg = RunConfig::resolve(&args.common)?;
    let ind = stage("read indicator", io::read_indicator(&args.indicator))?;
    let solutions = reconstruct_from(&cfg, &ind)?;
    let out = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("reconstructed.json"));
    for (k, p) in solutions.iter().enumerate() {
        let path = suffixed(&out, k, solutions.len());
        stage("write polytope", io::write_polytope(&path, p))?;
        println!(
            "wrote solution {} of {} -> {}",
            k + 1,
            solutions.len(),
            path.display()
        );
        if let Some(obj) = &args.obj {
            let path = suffixed(obj, k, solutions.len());
            stage("write obj", io::write_obj(&path, p))?;
        }
        if let Some(svg) = &args.svg {
            let path = suffixed(svg, k, solutions.len());
            let text = stage("render svg", io::polygon_to_svg(p))?;
            stage(
                "write svg",
                std::fs::write(&path, text).map_err(Error::from),
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// roundtrip
// ---------------------------------------------------------------------------

fn cmd_roundtrip(args: &RoundtripArgs) -> Result<(), Exit> {
    let cfg = RunConfig::resolve(&args.common)?;
    let truth = stage("read polytope", io::read_polytope(&args.poly))?;
    let pattern = simulate_from(&cfg, &truth)?;

    let min_area = truth
        .facet_data()
        .iter()
        .map(|f| f.area)
        .fold(f64::INFINITY, f64::min);
    let theta = cfg.theta.unwrap_or(0.4 * min_area);
    let ind = detect_from(&cfg, &pattern, theta)?;
    println!(
        "detected {} facets (true {}) at theta = {:.4}",
        ind.f(),
        truth.facets().len(),
        theta
    );

    // Per-facet report against the best-aligned detection.
    for (j, facet) in truth.facet_data().iter().enumerate() {
        let best = ind
            .entries()
            .iter()
            .max_by(|a, b| {
                let da = a.normal.dot(&facet.normal).abs();
                let db = b.normal.dot(&facet.normal).abs();
                da.total_cmp(&db)
            })
            .expect("nonempty by detect_from");
        let angle = best.normal.dot(&facet.normal).abs().clamp(-1.0, 1.0).acos();
        println!(
            "facet {}: area {:.6} detected {:.6} ({:+.2}%), normal off by {:.4} rad",
            j,
            facet.area,
            best.area,
            100.0 * (best.area - facet.area) / facet.area,
            angle
        );
    }

    let solutions = reconstruct_from(&cfg, &ind)?;
    let rec = &solutions[0];
    if truth.facets().len() == truth.dim() + 1 && ind.f() == truth.dim() + 1 {
        // Both are simplices: report the aligned vertex error.
        let t = stage("triangulate truth", truth.triangulate())?;
        let r = stage("triangulate result", rec.triangulate())?;
        let dist = simplex_alignment_distance(&t[0], &r[0]);
        println!(
            "aligned vertex error {:.3e} ({:.4}% of diameter)",
            dist,
            100.0 * dist / truth.diameter()
        );
    }
    println!("roundtrip ok: {} solution(s)", solutions.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// fixture
// ---------------------------------------------------------------------------

enum FixtureKind {
    Poly(Polytope),
    Indicator(FacetIndicatorSet),
}

fn cmd_fixture(args: &FixtureArgs) -> Result<(), Exit> {
    let cfg = RunConfig::resolve(&args.common)?;
    let facets = args.facets;
    let made = match args.name.as_str() {
        "triangle" => FixtureKind::Poly(fixtures::unit_triangle()),
        "square" => FixtureKind::Poly(fixtures::unit_square()),
        "hexagon" => FixtureKind::Poly(fixtures::sample_hexagon()),
        "cube" => FixtureKind::Poly(fixtures::unit_cube()),
        "tetrahedron" => FixtureKind::Poly(fixtures::regular_tetrahedron(args.edge.unwrap_or(1.0))),
        "octahedron" => FixtureKind::Poly(fixtures::deformed_octahedron()),
        "polygon" => FixtureKind::Poly(stage(
            "generate polygon",
            fixtures::random_polygon(cfg.seed, facets.unwrap_or(6)),
        )?),
        "polytope3d" => FixtureKind::Poly(stage(
            "generate polytope",
            fixtures::random_polytope_3d(cfg.seed, facets.unwrap_or(6)),
        )?),
        "simplex" => {
            let s = stage(
                "generate simplex",
                fixtures::random_simplex(cfg.seed, args.dim.unwrap_or(3)),
            )?;
            FixtureKind::Poly(stage("assemble simplex", s.to_polytope())?)
        }
        "ambiguous-indicator" => FixtureKind::Indicator(fixtures::ambiguous_hexagon_indicator()),
        other => return Err(Exit::new(2, format!("unknown fixture '{}'", other))),
    };
    let text = match &made {
        FixtureKind::Poly(p) => stage("serialize", io::polytope_to_json(p))?,
        FixtureKind::Indicator(ind) => stage("serialize", io::indicator_to_json(ind))?,
    };
    match &cfg.output {
        None => println!("{}", text),
        Some(path) => {
            stage(
                "write fixture",
                std::fs::write(path, text).map_err(Error::from),
            )?;
            println!("wrote {} -> {}", args.name, path.display());
        }
    }
    Ok(())
}
