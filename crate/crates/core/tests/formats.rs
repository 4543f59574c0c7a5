use harmonia::defect::HarmonicCertificate;
use harmonia::domain::DiskDomain;
use harmonia::error::Error;
use harmonia::fixtures;
use harmonia::gauss::{Direction, Hyperplane};
use harmonia::nochka::{compute_nochka_weights, verify_nochka_properties, NochkaWeights};
use harmonia::poly::ComplexPoly;
use harmonia::surface::HarmonicImmersion;
use num_complex::Complex64;

const ENNEPER: &str = r#"{
    "dimension": 3,
    "phi": [[[0.5, 0], [0, 0], [-0.5, 0]], [[0, 0.5], [0, 0], [0, 0.5]], [[0, 0], [1, 0]]],
    "domain": {"center": [0, 0], "radius": 1, "grid_resolution": 33}
}"#;

#[test]
fn surface_config_loads_and_round_trips() {
    let s: HarmonicImmersion = serde_json::from_str(ENNEPER).unwrap();
    assert_eq!(s, fixtures::enneper(DiskDomain::unit(33)));
    assert!(s.hopf_poly().is_zero());
    let back: HarmonicImmersion = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
}

#[test]
fn surface_config_rejects_bad_input() {
    let wrong_dim = ENNEPER.replace("\"dimension\": 3", "\"dimension\": 4");
    assert!(serde_json::from_str::<HarmonicImmersion>(&wrong_dim).is_err());
    let bad_radius = ENNEPER.replace("\"radius\": 1", "\"radius\": -1");
    assert!(serde_json::from_str::<HarmonicImmersion>(&bad_radius).is_err());
    let zero = r#"{"dimension": 2, "phi": [[], []], "domain": {"center": [0, 0], "radius": 1, "grid_resolution": 9}}"#;
    assert!(serde_json::from_str::<HarmonicImmersion>(zero).is_err());
}

#[test]
fn hyperplanes_read_as_linear_forms() {
    // z_0 + i z_1 = 0 contains the point (1, i)
    let planes: Vec<Hyperplane> =
        serde_json::from_str(r#"[{"normal": [[1, 0], [0, 1]]}, {"normal": [[2, 0], [0, 0]]}]"#).unwrap();
    let i = Complex64::new(0.0, 1.0);
    assert!(planes[0].pair(&[Complex64::new(1.0, 0.0), i]).norm() < 1e-15);
    assert_eq!(planes[1].normal(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let text = serde_json::to_string(&planes).unwrap();
    let again: Vec<Hyperplane> = serde_json::from_str(&text).unwrap();
    // normalizing an already unit vector may move the last bit
    for (a, b) in again.iter().zip(&planes) {
        assert!(a.normal().iter().zip(b.normal()).all(|(x, y)| (x - y).norm() < 1e-15));
    }
    assert!(serde_json::from_str::<Vec<Hyperplane>>(r#"[{"normal": [[0, 0], [0, 0]]}]"#).is_err());
}

#[test]
fn directions_normalize_on_load() {
    let d: Vec<Direction> = serde_json::from_str("[[3, 0, 4], [0, 0, 2]]").unwrap();
    assert_eq!(d[0].as_array(), [0.6, 0.0, 0.8]);
    assert_eq!(d[1].as_array(), [0.0, 0.0, 1.0]);
    assert!(serde_json::from_str::<Vec<Direction>>("[[0, 0, 0]]").is_err());
}

#[test]
fn weights_and_certificates_round_trip() {
    let planes: Vec<Hyperplane> = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0], [1.0, 2.0, 3.0]]
        .iter()
        .map(|v| Hyperplane::from_real(v).unwrap())
        .collect();
    let w = compute_nochka_weights(&planes, 2).unwrap();
    let json = serde_json::to_value(&w).unwrap();
    assert_eq!(json["n"], 2);
    assert_eq!(json["k"], 2);
    let back: NochkaWeights = serde_json::from_value(json).unwrap();
    assert!(verify_nochka_properties(&back, &planes).all_pass());

    let cert: HarmonicCertificate =
        serde_json::from_str(r#"{"c": 0.5, "g": [[0, 0], [1, 0]], "hre": [[-1, 0]]}"#).unwrap();
    assert_eq!(cert.g, ComplexPoly::z());
    assert!((cert.eval(Complex64::new(0.25, 0.0)) - (0.5 * 0.25f64.ln() - 1.0)).abs() < 1e-15);
}

#[test]
fn errors_render_readably() {
    let e = Error::TooFewPlanes { q: 3, n: 2, k: 2 };
    assert!(!e.to_string().is_empty());
}
