use std::path::Path;

use harmonia::defect::HarmonicCertificate;
use harmonia::domain::DiskDomain;
use harmonia::gauss::{Direction, Hyperplane};
use harmonia::nochka::NochkaWeights;
use harmonia::poly::ComplexPoly;
use harmonia::surface::HarmonicImmersion;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::Failure;

/// Domain used for curve configs that do not name one.
const DEFAULT_CURVE_RESOLUTION: usize = 33;

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed {what} {}: {e}", path.display())))
}

fn regrid(domain: DiskDomain, grid: Option<usize>) -> Result<DiskDomain, Failure> {
    match grid {
        Some(n) => Ok(domain.with_resolution(n)?),
        None => Ok(domain),
    }
}

pub fn surface(path: &Path, grid: Option<usize>) -> Result<HarmonicImmersion, Failure> {
    let s: HarmonicImmersion = read_json(path, "surface config")?;
    let domain = regrid(*s.domain(), grid)?;
    Ok(s.with_domain(domain)?)
}

pub fn planes(path: &Path) -> Result<Vec<Hyperplane>, Failure> {
    let planes: Vec<Hyperplane> = read_json(path, "hyperplane set")?;
    if planes.is_empty() {
        return Err(Failure::Input(format!("hyperplane set {} is empty", path.display())));
    }
    Ok(planes)
}

pub fn directions(path: &Path) -> Result<Vec<Direction>, Failure> {
    read_json(path, "direction set")
}

pub fn weights(path: &Path) -> Result<NochkaWeights, Failure> {
    read_json(path, "weights file")
}

#[derive(Debug, Deserialize)]
pub struct CertificateEntry {
    pub plane: usize,
    pub eta: f64,
    pub mu: HarmonicCertificate,
}

pub fn certificates(path: &Path) -> Result<Vec<CertificateEntry>, Failure> {
    read_json(path, "certificate list")
}

#[derive(Deserialize)]
struct CurveConfig {
    curve: Vec<ComplexPoly>,
    domain: Option<DiskDomain>,
}

/// A curve config, or the Gauss map `phi` of a surface config.
pub fn curve(path: &Path, grid: Option<usize>) -> Result<(Vec<ComplexPoly>, DiskDomain), Failure> {
    let value: serde_json::Value = read_json(path, "curve config")?;
    let malformed = |e: serde_json::Error| Failure::Input(format!("malformed curve config {}: {e}", path.display()));
    let (curve, domain) = if value.get("curve").is_some() {
        let c: CurveConfig = serde_json::from_value(value).map_err(malformed)?;
        (c.curve, c.domain.unwrap_or_else(|| DiskDomain::unit(DEFAULT_CURVE_RESOLUTION)))
    } else {
        let s: HarmonicImmersion = serde_json::from_value(value).map_err(malformed)?;
        (s.phi().to_vec(), *s.domain())
    };
    if curve.len() < 2 {
        return Err(Failure::Input(format!("curve in {} needs at least two components", path.display())));
    }
    Ok((curve, regrid(domain, grid)?))
}
