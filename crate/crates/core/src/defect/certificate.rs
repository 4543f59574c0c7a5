use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::derived::nondegeneracy_rank;
use crate::domain::DiskDomain;
use crate::error::{Error, Result};
use crate::gauss::{reduced_representation, Hyperplane};
use crate::linalg;
use crate::poly::ComplexPoly;

/// Number of dyadic circles probed around each zero.
const H2_LEVELS: usize = 12;
/// Circle maxima may increase by at most this much after the warm-up levels.
const H2_TOL: f64 = 1e-3;
const H2_WARMUP: usize = 4;
const CIRCLE_SAMPLES: usize = 64;
const SAME_ZERO_TOL: f64 = 1e-6;

/// The weight `mu(z) = c log|g(z)| + Re hre(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicCertificate {
    pub c: f64,
    pub g: ComplexPoly,
    pub hre: ComplexPoly,
}

impl HarmonicCertificate {
    /// `mu = 0`.
    pub fn zero() -> Self {
        Self { c: 0.0, g: ComplexPoly::constant(Complex64::new(1.0, 0.0)), hre: ComplexPoly::zero() }
    }

    pub fn log_modulus(c: f64, g: ComplexPoly) -> Self {
        Self { c, g, hre: ComplexPoly::zero() }
    }

    /// `log|g| - log M` where `M` bounds `|g|` on the closed disk, so that the
    /// weight is nonpositive there.
    pub fn normalized_log_modulus(g: ComplexPoly, domain: &DiskDomain) -> Self {
        let reach = domain.center().norm() + domain.radius();
        let bound: f64 = g.coeffs().iter().enumerate().map(|(i, a)| a.norm() * reach.powi(i as i32)).sum();
        let shift = ComplexPoly::constant(Complex64::new(-bound.max(f64::MIN_POSITIVE).ln(), 0.0));
        Self { c: 1.0, g, hre: shift }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        let harmonic = self.hre.eval(z).re;
        if self.c == 0.0 {
            harmonic
        } else {
            self.c * self.g.eval(z).norm().ln() + harmonic
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct H2Trace {
    pub zero: [f64; 2],
    pub order: usize,
    pub circle_maxima: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub accepted: bool,
    pub h1_pass: bool,
    /// `max (mu - eta log |F|)` over the samples.
    pub h1_worst: f64,
    pub h2: Vec<H2Trace>,
    pub reasons: Vec<String>,
}

/// Checks condition (*) for `mu` against the hyperplane `H`.
pub fn check_certificate(
    curve: &[ComplexPoly],
    plane: &Hyperplane,
    eta: f64,
    mu: &HarmonicCertificate,
    domain: &DiskDomain,
) -> Result<CertificateReport> {
    if !(eta >= 0.0) {
        return Err(Error::InvalidInput(format!("eta must be >= 0, got {eta}")));
    }
    let reduced = reduced_representation(curve)?;
    if plane.ambient_dim() != reduced.len() {
        return Err(Error::DimensionMismatch { expected: reduced.len(), got: plane.ambient_dim() });
    }
    let k = nondegeneracy_rank(&reduced)?;
    let pairing = plane.pairing_poly(&reduced);
    if pairing.is_zero() {
        return Err(Error::DegenerateCurve);
    }
    let zeros = pairing.roots_in_domain(domain)?;
    let mut reasons = Vec::new();

    let mut weight_zeros = Vec::new();
    if mu.c != 0.0 {
        if mu.g.is_zero() {
            reasons.push("weight uses log|g| with g identically zero".into());
        } else {
            weight_zeros = mu.g.roots_in_domain(domain)?;
        }
        if mu.c < 0.0 && !weight_zeros.is_empty() {
            reasons.push("negative coefficient on log|g| makes mu tend to +infinity".into());
        }
        for (w, _) in &weight_zeros {
            if !zeros.iter().any(|(z, _)| (z - w).norm() < SAME_ZERO_TOL) {
                reasons.push(format!("mu is singular at {w}, which is not a zero of <F, a>"));
            }
        }
    }

    let h1_worst = domain
        .closed_samples()
        .into_iter()
        .map(|z| {
            let v: Vec<Complex64> = reduced.iter().map(|p| p.eval(z)).collect();
            let m = mu.eval(z);
            if m == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                m - eta * linalg::norm(&v).ln()
            }
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let h1_pass = !h1_worst.is_nan() && h1_worst <= 1e-9;
    if !h1_pass {
        reasons.push(format!("(H1) fails: mu exceeds eta log|F| by {h1_worst:e}"));
    }

    let singular: Vec<Complex64> = zeros.iter().chain(&weight_zeros).map(|r| r.0).collect();
    let h2: Vec<H2Trace> = zeros
        .iter()
        .map(|&(z0, order)| {
            let gap =
                singular.iter().map(|s| (s - z0).norm()).filter(|&d| d > SAME_ZERO_TOL).fold(domain.radius(), f64::min);
            let r0 = 0.5 * gap;
            let m = order.min(k) as f64;
            let circle_maxima: Vec<f64> = (1..=H2_LEVELS)
                .map(|level| {
                    let r = r0 * 0.5f64.powi(level as i32);
                    (0..CIRCLE_SAMPLES)
                        .map(|i| {
                            let t = std::f64::consts::TAU * (i as f64 + 0.5) / CIRCLE_SAMPLES as f64;
                            mu.eval(z0 + Complex64::from_polar(r, t))
                        })
                        .fold(f64::NEG_INFINITY, f64::max)
                        - m * r.ln()
                })
                .collect();
            let finite = circle_maxima.iter().all(|v| !v.is_nan() && *v < f64::INFINITY);
            let settles = circle_maxima[H2_WARMUP - 1..].windows(2).all(|w| w[1] <= w[0] + H2_TOL);
            H2Trace { zero: [z0.re, z0.im], order, circle_maxima, pass: finite && settles }
        })
        .collect();
    for t in h2.iter().filter(|t| !t.pass) {
        reasons.push(format!("(H2) fails at {:?}: mu - min(nu, k) log|z - z0| grows on shrinking circles", t.zero));
    }
    Ok(CertificateReport { accepted: reasons.is_empty(), h1_pass, h1_worst, h2, reasons })
}

/// `1 - min{eta : accepted}`, or `0` when no certificate is accepted.
pub fn modified_defect_bound(
    curve: &[ComplexPoly],
    plane: &Hyperplane,
    certificates: &[(f64, HarmonicCertificate)],
    domain: &DiskDomain,
) -> Result<f64> {
    let mut best: Option<f64> = None;
    for (eta, mu) in certificates {
        if check_certificate(curve, plane, *eta, mu, domain)?.accepted {
            best = Some(best.map_or(*eta, |b: f64| b.min(*eta)));
        }
    }
    Ok(best.map_or(0.0, |e| (1.0 - e).max(0.0)))
}
