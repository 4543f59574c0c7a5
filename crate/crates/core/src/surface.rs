//! Harmonic immersions `X: D -> R^n` given by their holomorphic derivative
//! `phi = dX/dz`, with pointwise metric data, quasiconformality and the two
//! Gauss curvatures (of the Klotz metric and of the induced metric).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::DiskDomain;
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// Points with `|phi|^4 - |h|^2 < DEGENERACY_REL * |phi|^4` are treated as
/// singular.
pub const DEGENERACY_REL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceConfig", into = "SurfaceConfig")]
pub struct HarmonicImmersion {
    phi: Vec<ComplexPoly>,
    dphi: Vec<ComplexPoly>,
    domain: DiskDomain,
}

/// On-disk surface description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceConfig {
    pub dimension: usize,
    pub phi: Vec<ComplexPoly>,
    pub domain: DiskDomain,
}

impl TryFrom<SurfaceConfig> for HarmonicImmersion {
    type Error = Error;
    fn try_from(c: SurfaceConfig) -> Result<Self> {
        if c.dimension != c.phi.len() {
            return Err(Error::DimensionMismatch { expected: c.dimension, got: c.phi.len() });
        }
        HarmonicImmersion::new(c.phi, c.domain)
    }
}

impl From<HarmonicImmersion> for SurfaceConfig {
    fn from(s: HarmonicImmersion) -> Self {
        Self { dimension: s.phi.len(), phi: s.phi, domain: s.domain }
    }
}

/// First fundamental form and related quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSample {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// Hopf differential coefficient `sum phi_k^2`.
    pub h: Complex64,
    pub phi_norm_sq: f64,
    pub jacobian: f64,
    pub grad_norm_sq: f64,
}

impl MetricSample {
    /// `ds^2` applied to the tangent vector `(du, dv)`.
    pub fn induced_form(&self, du: f64, dv: f64) -> f64 {
        self.e * du * du + 2.0 * self.f * du * dv + self.g * dv * dv
    }

    /// Klotz metric `2 |phi|^2 |dz|^2` applied to `(du, dv)`.
    pub fn klotz_form(&self, du: f64, dv: f64) -> f64 {
        2.0 * self.phi_norm_sq * (du * du + dv * dv)
    }

    /// Eigenvalues `(min, max)` of the first fundamental form.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.e + self.g);
        let rad = (0.25 * (self.e - self.g).powi(2) + self.f * self.f).sqrt();
        (mean - rad, mean + rad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub k_klotz: f64,
    pub k_induced: f64,
}

/// Outcome of the pointwise curvature-ratio bound `|K_Gamma / K_ds2| >= (2K/(K^2+1))^4`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub qc_constant: f64,
    pub bound: f64,
    pub min_ratio: f64,
    pub argmin: [f64; 2],
    pub checked: usize,
    pub skipped: usize,
    /// `min_ratio - bound`; nonnegative when the bound holds everywhere.
    pub margin: f64,
    pub holds: bool,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn herm(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Bilinear cross product on `C^3`.
pub fn cross(a: &[Complex64], b: &[Complex64]) -> [Complex64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn conj_vec(a: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|x| x.conj()).collect()
}

impl HarmonicImmersion {
    /// Builds an immersion and checks `|phi|^2 > 0` on the grid.
    pub fn new(phi: Vec<ComplexPoly>, domain: DiskDomain) -> Result<Self> {
        if phi.len() < 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: phi.len() });
        }
        let dphi = phi.iter().map(ComplexPoly::derivative).collect();
        let s = Self { phi, dphi, domain };
        if let Some(p) = s.domain.grid().into_iter().find(|p| s.phi_norm_sq(p.z) == 0.0) {
            return Err(Error::DegeneratePoint(p.z));
        }
        Ok(s)
    }

    pub fn dimension(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[ComplexPoly] {
        &self.phi
    }

    pub fn domain(&self) -> &DiskDomain {
        &self.domain
    }

    pub fn with_domain(&self, domain: DiskDomain) -> Result<Self> {
        Self::new(self.phi.clone(), domain)
    }

    pub fn phi_at(&self, z: Complex64) -> Vec<Complex64> {
        self.phi.iter().map(|p| p.eval(z)).collect()
    }

    pub fn dphi_at(&self, z: Complex64) -> Vec<Complex64> {
        self.dphi.iter().map(|p| p.eval(z)).collect()
    }

    pub fn phi_norm_sq(&self, z: Complex64) -> f64 {
        norm_sq(&self.phi_at(z))
    }

    /// Hopf differential coefficient `h = phi . phi` as a polynomial.
    pub fn hopf_poly(&self) -> ComplexPoly {
        self.phi.iter().fold(ComplexPoly::zero(), |acc, p| &acc + &(p * p))
    }

    /// Position `x_k = 2 Re int phi_k dz`, based at the domain center.
    pub fn position(&self, z: Complex64) -> Vec<f64> {
        let base = self.domain.center();
        self.phi.iter().map(|p| 2.0 * p.antiderivative(base).eval(z).re).collect()
    }

    fn require_dim3(&self) -> Result<()> {
        if self.dimension() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: self.dimension() });
        }
        Ok(())
    }

    /// `|phi|^4 - |h|^2`, or `DegeneratePoint` when it is negligible.
    fn conformal_gap(&self, z: Complex64, phi: &[Complex64]) -> Result<f64> {
        let n2 = norm_sq(phi);
        let h = dot(phi, phi);
        let gap = n2 * n2 - h.norm_sqr();
        if n2 == 0.0 || gap < DEGENERACY_REL * n2 * n2 {
            return Err(Error::DegeneratePoint(z));
        }
        Ok(gap)
    }

    pub fn metric_sample(&self, z: Complex64) -> Result<MetricSample> {
        let phi = self.phi_at(z);
        let phi_norm_sq = norm_sq(&phi);
        if phi_norm_sq == 0.0 {
            return Err(Error::DegeneratePoint(z));
        }
        let h = dot(&phi, &phi);
        // X_u = phi + conj(phi) = 2 Re phi, X_v = i (phi - conj(phi)) = -2 Im phi
        let (mut e, mut f, mut g) = (0.0, 0.0, 0.0);
        for p in &phi {
            let xu = 2.0 * p.re;
            let xv = -2.0 * p.im;
            e += xu * xu;
            f += xu * xv;
            g += xv * xv;
        }
        let gap = (phi_norm_sq * phi_norm_sq - h.norm_sqr()).max(0.0);
        Ok(MetricSample { e, f, g, h, phi_norm_sq, jacobian: 2.0 * gap.sqrt(), grad_norm_sq: e + g })
    }

    /// Unit normal `X_u x X_v / |X_u x X_v|` in `R^3`.
    pub fn unit_normal(&self, z: Complex64) -> Result<[f64; 3]> {
        self.require_dim3()?;
        let phi = self.phi_at(z);
        self.conformal_gap(z, &phi)?;
        let xu: Vec<f64> = phi.iter().map(|p| 2.0 * p.re).collect();
        let xv: Vec<f64> = phi.iter().map(|p| -2.0 * p.im).collect();
        let n = [xu[1] * xv[2] - xu[2] * xv[1], xu[2] * xv[0] - xu[0] * xv[2], xu[0] * xv[1] - xu[1] * xv[0]];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        Ok([n[0] / len, n[1] / len, n[2] / len])
    }

    /// The complex form `i (conj(phi) x phi) / sqrt(|phi|^4 - |h|^2)` of the unit normal.
    pub fn unit_normal_complex_form(&self, z: Complex64) -> Result<[Complex64; 3]> {
        self.require_dim3()?;
        let phi = self.phi_at(z);
        let gap = self.conformal_gap(z, &phi)?;
        let c = cross(&conj_vec(&phi), &phi);
        let s = Complex64::i() / gap.sqrt();
        Ok([c[0] * s, c[1] * s, c[2] * s])
    }

    /// Gauss curvature of the Klotz metric `2|phi|^2|dz|^2`.
    pub fn curvature_klotz(&self, z: Complex64) -> Result<f64> {
        let phi = self.phi_at(z);
        let dphi = self.dphi_at(z);
        let n2 = norm_sq(&phi);
        if n2 == 0.0 {
            return Err(Error::DegeneratePoint(z));
        }
        let num = norm_sq(&dphi) * n2 - herm(&dphi, &phi).norm_sqr();
        Ok(-num.max(0.0) / (n2 * n2 * n2))
    }

    /// Gauss curvature of the induced metric (surfaces in `R^3`).
    pub fn curvature_induced(&self, z: Complex64) -> Result<f64> {
        self.require_dim3()?;
        let phi = self.phi_at(z);
        let gap = self.conformal_gap(z, &phi)?;
        let dphi = self.dphi_at(z);
        let triple = dot(&cross(&conj_vec(&phi), &phi), &dphi);
        Ok(-triple.norm_sqr() / (gap * gap))
    }

    pub fn curvature_sample(&self, z: Complex64) -> Result<CurvatureSample> {
        Ok(CurvatureSample { k_klotz: self.curvature_klotz(z)?, k_induced: self.curvature_induced(z)? })
    }

    /// Pointwise dilatation `K(z) = lambda + sqrt(lambda^2 - 1)` with
    /// `lambda = |phi|^2 / sqrt(|phi|^4 - |h|^2)`.
    pub fn pointwise_qc(&self, z: Complex64) -> Result<f64> {
        let phi = self.phi_at(z);
        let n2 = norm_sq(&phi);
        let h = dot(&phi, &phi).norm();
        if n2 == 0.0 || h >= n2 {
            return Err(Error::NotQuasiconformal(z));
        }
        // lambda - 1 computed without cancellation: n2 - sqrt(n2^2 - h^2) = h^2 / (n2 + sqrt(..))
        let root = ((n2 - h) * (n2 + h)).sqrt();
        let lambda = n2 / root;
        let lm1 = h * h / (root * (n2 + root));
        Ok(lambda + (lm1 * (lambda + 1.0)).sqrt())
    }

    /// Smallest `K` making the immersion K-quasiconformal on the closed disk,
    /// estimated as the maximum of the pointwise dilatation over the grid and
    /// a ring of boundary samples.
    pub fn qc_constant(&self) -> Result<f64> {
        self.domain.closed_samples().par_iter().map(|&z| self.pointwise_qc(z)).try_reduce(|| 1.0, |a, b| Ok(a.max(b)))
    }

    /// `|(|phi'|^2 |phi|^2 - |<phi', phi>|^2) - |phi' x phi|^2|`, zero by the
    /// complex Lagrange identity.
    pub fn lagrange_residual(&self, z: Complex64) -> Result<f64> {
        self.require_dim3()?;
        let phi = self.phi_at(z);
        let dphi = self.dphi_at(z);
        let lhs = norm_sq(&dphi) * norm_sq(&phi) - herm(&dphi, &phi).norm_sqr();
        let rhs = norm_sq(&cross(&dphi, &phi));
        Ok((lhs - rhs).abs())
    }

    /// Checks `|K_Gamma| / |K_ds2| >= (2K/(K^2+1))^4` on the closed-disk samples.
    pub fn curvature_ratio_bound_check(&self) -> Result<RatioReport> {
        self.require_dim3()?;
        let k = self.qc_constant()?;
        let bound = (2.0 * k / (k * k + 1.0)).powi(4);
        let samples = self.domain.closed_samples();
        let results: Vec<Option<(f64, Complex64)>> = samples
            .par_iter()
            .map(|&z| {
                let c = self.curvature_sample(z).ok()?;
                if c.k_induced == 0.0 {
                    return None;
                }
                Some((c.k_klotz.abs() / c.k_induced.abs(), z))
            })
            .collect();
        let skipped = results.iter().filter(|r| r.is_none()).count();
        let (min_ratio, argmin) =
            results.iter().flatten().copied().fold((f64::INFINITY, Complex64::new(0.0, 0.0)), |acc, r| {
                if r.0 < acc.0 {
                    r
                } else {
                    acc
                }
            });
        let margin = min_ratio - bound;
        Ok(RatioReport {
            qc_constant: k,
            bound,
            min_ratio,
            argmin: [argmin.re, argmin.im],
            checked: samples.len() - skipped,
            skipped,
            margin,
            holds: margin >= -1e-9,
        })
    }

    /// One CSV row per grid point:
    /// `z_re,z_im,E,F,G,h_re,h_im,k_klotz,k_induced`.
    pub fn grid_csv(&self) -> Result<String> {
        let mut out = String::from("z_re,z_im,E,F,G,h_re,h_im,k_klotz,k_induced\n");
        let rows: Vec<Result<String>> = self
            .domain
            .grid()
            .par_iter()
            .map(|p| {
                let m = self.metric_sample(p.z)?;
                let kk = self.curvature_klotz(p.z)?;
                let ki = if self.dimension() == 3 { self.curvature_induced(p.z)?.to_string() } else { String::new() };
                Ok(format!("{},{},{},{},{},{},{},{},{}\n", p.z.re, p.z.im, m.e, m.f, m.g, m.h.re, m.h.im, kk, ki))
            })
            .collect();
        for r in rows {
            out.push_str(&r?);
        }
        Ok(out)
    }
}
