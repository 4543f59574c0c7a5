//! Defects of hyperplanes for polynomial curves, modified defects certified by
//! harmonic weights, and the constants and metrics that feed the final length
//! argument.

mod certificate;
mod field;

pub use certificate::{check_certificate, modified_defect_bound, CertificateReport, H2Trace, HarmonicCertificate};
pub use field::{
    dsigma_field, pseudo_metric_curvature_check, radial_length, radial_lengths, xi_field, CurvatureCheckReport,
    Density, PseudoMetricField, RadialLength, XiField,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::{general_position_check, reduced_representation, Hyperplane};
use crate::nochka::NochkaWeights;
use crate::poly::ComplexPoly;

/// Constants of the final metric construction.
///
/// `n` is the dimension of the ambient space of the surface, so the weights
/// belong to hyperplanes in `(n - 1)`-subgeneral position in `P^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectConfig {
    pub q: usize,
    pub n: usize,
    pub k: usize,
    pub eta: Vec<f64>,
    #[serde(rename = "N")]
    pub big_n: f64,
    pub weights: NochkaWeights,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub tau: f64,
    pub kappa: f64,
}

impl DefectConfig {
    /// `2q / N`.
    pub fn x(&self) -> f64 {
        2.0 * self.q as f64 / self.big_n
    }

    /// `N Lambda (1 - tau)`.
    pub fn blowup_denominator(&self) -> f64 {
        self.big_n * self.lambda * (1.0 - self.tau)
    }

    /// `sum_j w_j (1 - eta_j)`.
    pub fn weighted_excess(&self) -> f64 {
        weighted_excess(&self.weights.omega, &self.eta)
    }
}

fn weighted_excess(omega: &[f64], eta: &[f64]) -> f64 {
    omega.iter().zip(eta).map(|(w, e)| w * (1.0 - e)).sum()
}

/// Left and right sides of the hypothesis `sum (1 - eta_j) > (2n-k-1)(k/2+1)`.
pub fn defect_hypothesis(n: usize, k: usize, eta: &[f64]) -> (f64, f64) {
    let lhs: f64 = eta.iter().map(|e| 1.0 - e).sum();
    let rhs = (2.0 * n as f64 - k as f64 - 1.0) * (k as f64 / 2.0 + 1.0);
    (lhs, rhs)
}

/// Picks `N` at the midpoint of its admissible window and derives
/// `Lambda`, `tau` and `kappa`.
pub fn build_defect_config(q: usize, n: usize, k: usize, eta: &[f64], weights: &NochkaWeights) -> Result<DefectConfig> {
    if k == 0 || n < k + 1 {
        return Err(Error::ConfigInvalid(format!("need 1 <= k <= n - 1, got n = {n}, k = {k}")));
    }
    if eta.len() != q || weights.q() != q {
        return Err(Error::ConfigInvalid(format!("q = {q} but {} eta values and {} weights", eta.len(), weights.q())));
    }
    if weights.k != k || weights.n + 1 != n {
        return Err(Error::ConfigInvalid(format!(
            "weights are for (n, k) = ({}, {}), expected ({}, {k})",
            weights.n,
            weights.k,
            n - 1
        )));
    }
    if let Some(e) = eta.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
        return Err(Error::ConfigInvalid(format!("eta values must be finite and >= 0, got {e}")));
    }
    let (lhs, rhs) = defect_hypothesis(n, k, eta);
    if !(lhs > rhs) {
        return Err(Error::HypothesisFailed { lhs, rhs });
    }

    let kf = k as f64;
    let k1sq = (kf + 1.0) * (kf + 1.0);
    let s2: f64 = (0..=k).map(|s| (s * s) as f64).sum();
    let excess = weighted_excess(&weights.omega, eta);
    let a = excess - (kf / 2.0 + 1.0) * (kf + 1.0);
    if !(a > 0.0) {
        return Err(Error::ConfigInvalid(format!("weighted excess margin {a} is not positive")));
    }
    let lo = a / (2.0 / q as f64 + k1sq + s2);
    let hi = a / (k1sq + s2);
    let x = 0.5 * (lo + hi);
    let big_n = 2.0 * q as f64 / x;
    let lambda = excess - (kf + 1.0) - x * k1sq;
    let tau = (kf * (kf + 1.0) / 2.0 + x * s2) / lambda;
    let kappa = 1.0 / (1..=k).map(|u| u as f64 + x * (u * u) as f64).sum::<f64>();
    let cfg = DefectConfig { q, n, k, eta: eta.to_vec(), big_n, weights: weights.clone(), lambda, tau, kappa };
    let d = cfg.blowup_denominator();
    if !(lambda > 0.0 && tau > 0.0 && tau < 1.0 && d > 0.0 && d < 4.0) {
        return Err(Error::ConfigInvalid(format!(
            "constants out of range: Lambda = {lambda}, tau = {tau}, N Lambda (1 - tau) = {d}"
        )));
    }
    Ok(cfg)
}

/// `1 - deg <F, a> / deg F` for a polynomial curve.
pub fn classical_defect_polynomial(curve: &[ComplexPoly], plane: &Hyperplane) -> Result<f64> {
    let reduced = reduced_representation(curve)?;
    let d = reduced.iter().filter_map(ComplexPoly::degree).max().unwrap_or(0);
    if d == 0 {
        return Err(Error::PreconditionFailed("curve is constant".into()));
    }
    if plane.ambient_dim() != reduced.len() {
        return Err(Error::DimensionMismatch { expected: reduced.len(), got: plane.ambient_dim() });
    }
    let g = plane.pairing_poly(&reduced);
    let dg = g.degree().ok_or(Error::DegenerateCurve)?;
    Ok(1.0 - dg as f64 / d as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectRow {
    pub index: usize,
    pub delta: f64,
    pub method: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub rows: Vec<DefectRow>,
    pub sum: f64,
    pub bound: f64,
    pub general_position: bool,
    pub holds: bool,
}

impl DefectReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("hyperplane,delta,method\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.index, r.delta, r.method));
        }
        out
    }
}

/// Classical defects of every plane and the check `sum delta <= k + 1`.
pub fn defect_relation_check(curve: &[ComplexPoly], planes: &[Hyperplane]) -> Result<DefectReport> {
    let dim = curve.len();
    let rows = planes
        .iter()
        .enumerate()
        .map(|(index, p)| Ok(DefectRow { index, delta: classical_defect_polynomial(curve, p)?, method: "degree" }))
        .collect::<Result<Vec<_>>>()?;
    let sum: f64 = rows.iter().map(|r| r.delta).sum();
    let bound = dim as f64;
    let general_position = planes.len() >= dim && general_position_check(planes, dim)?;
    Ok(DefectReport { holds: sum <= bound + 1e-12, rows, sum, bound, general_position })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cp(v: &[f64]) -> ComplexPoly {
        ComplexPoly::from_real(v)
    }

    fn unit_weights(q: usize, n: usize, k: usize) -> NochkaWeights {
        NochkaWeights { omega: vec![1.0; q], theta: 1.0, n, k }
    }

    #[test]
    fn classical_examples() {
        let line = [cp(&[1.0]), cp(&[0.0, 1.0])];
        let h = |v: &[f64]| Hyperplane::from_real(v).unwrap();
        assert_eq!(classical_defect_polynomial(&line, &h(&[1.0, 0.0])).unwrap(), 1.0);
        assert_eq!(classical_defect_polynomial(&line, &h(&[0.0, 1.0])).unwrap(), 0.0);
        let conic = [cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])];
        assert_eq!(classical_defect_polynomial(&conic, &h(&[0.0, 0.0, 1.0])).unwrap(), 0.0);

        let planes = [h(&[1.0, 0.0]), h(&[0.0, 1.0]), h(&[1.0, 1.0])];
        let r = defect_relation_check(&line, &planes).unwrap();
        assert_eq!(r.rows.iter().map(|r| r.delta).collect::<Vec<_>>(), vec![1.0, 0.0, 0.0]);
        assert!(r.holds && r.general_position && r.sum == 1.0 && r.bound == 2.0);
    }

    #[test]
    fn config_for_line_with_seven_planes() {
        let cfg = build_defect_config(7, 2, 1, &[0.0; 7], &unit_weights(7, 1, 1)).unwrap();
        assert!(cfg.tau > 0.0 && cfg.tau < 1.0);
        let d = cfg.blowup_denominator();
        assert!(d > 0.0 && d < 4.0);
        // Lambda and kappa by their defining formulas
        let x = cfg.x();
        assert!((cfg.lambda - (7.0 - 2.0 - 4.0 * x)).abs() < 1e-12);
        assert!((cfg.kappa - 1.0 / (1.0 + x)).abs() < 1e-12);
        assert!((cfg.tau - (1.0 + x) / cfg.lambda).abs() < 1e-12);
    }

    #[test]
    fn hypothesis_failure() {
        let err = build_defect_config(7, 2, 1, &[1.0; 7], &unit_weights(7, 1, 1)).unwrap_err();
        assert_eq!(err, Error::HypothesisFailed { lhs: 0.0, rhs: 3.0 });
    }

    #[test]
    fn nondegenerate_hypothesis_arithmetic() {
        for n in 2..7usize {
            let (_, rhs) = defect_hypothesis(n, n - 1, &[]);
            assert!((rhs - (n * (n + 1)) as f64 / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_curve_rejected() {
        let c = [ComplexPoly::constant(Complex64::new(1.0, 0.0)), cp(&[2.0])];
        let h = Hyperplane::from_real(&[1.0, 0.0]).unwrap();
        assert!(classical_defect_polynomial(&c, &h).is_err());
    }
}
