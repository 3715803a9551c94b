//! The bindings compile natively; these tests drive them exactly as the
//! page does, through JSON strings.

use polyscat_wasm::{fixture_json, psi_curve, roundtrip_2d};

#[derive(serde::Deserialize)]
struct Curve {
    t: Vec<f64>,
    psi: Vec<f64>,
}

#[derive(serde::Deserialize)]
struct Detection {
    t: f64,
    area: f64,
}

#[derive(serde::Deserialize)]
struct Roundtrip {
    theta: f64,
    detections: Vec<Detection>,
    original: Vec<Vec<f64>>,
    reconstructed: Vec<Vec<Vec<f64>>>,
}

#[test]
fn curve_has_one_sample_per_cell() {
    let poly = fixture_json("hexagon", 0, 0).unwrap();
    let curve: Curve = serde_json::from_str(&psi_curve(&poly, 0.01, 256).unwrap()).unwrap();
    assert_eq!(curve.t.len(), 256);
    assert_eq!(curve.psi.len(), 256);
    assert!(curve.t.windows(2).all(|w| w[0] < w[1]));
    assert!(curve.psi.iter().all(|v| v.is_finite() && *v >= 0.0));
}

#[test]
fn hexagon_loop_recovers_the_shape() {
    let poly = fixture_json("hexagon", 0, 0).unwrap();
    let out: Roundtrip =
        serde_json::from_str(&roundtrip_2d(&poly, 0.01, 512, 0.3).unwrap()).unwrap();
    assert!(out.theta > 0.0);
    assert_eq!(out.detections.len(), 6);
    assert!(out
        .detections
        .iter()
        .all(|d| (0.0..std::f64::consts::PI).contains(&d.t) && d.area > 0.0));
    assert_eq!(out.original.len(), 6);
    // At the forgiving demo tolerance a second near-closing assignment may
    // survive; the best-residual solution comes first.
    assert!(!out.reconstructed.is_empty());
    // Every reconstructed vertex sits near some original vertex (both rings
    // are centered, detection noise is a few percent here).
    let diam = 4.2;
    for v in &out.reconstructed[0] {
        let nearest = out
            .original
            .iter()
            .map(|w| ((v[0] - w[0]).powi(2) + (v[1] - w[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest <= 0.05 * diam, "vertex off by {}", nearest);
    }
}

#[test]
fn random_fixture_is_seed_stable() {
    let a = fixture_json("random", 11, 7).unwrap();
    let b = fixture_json("random", 11, 7).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, fixture_json("random", 12, 7).unwrap());
}

#[test]
fn errors_surface_as_messages() {
    assert!(fixture_json("dodecahedron", 0, 0).is_err());
    assert!(psi_curve("not json", 0.01, 64).is_err());
    let poly = fixture_json("triangle", 0, 0).unwrap();
    assert!(roundtrip_2d(&poly, 0.01, 64, 1.5).is_err());
}
