//! Conformal pseudo-metrics sampled on a disk: the `xi` density, the metric
//! `Omega = xi^{2 kappa}` built from it, the length metric `d sigma`, and a
//! few reference fields used to validate the numerics.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{DefectConfig, HarmonicCertificate};
use crate::derived::DerivedCurve;
use crate::domain::DiskDomain;
use crate::error::{Error, Result};
use crate::gauss::Hyperplane;
use crate::poly::ComplexPoly;

/// How the stored value relates to the metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Density {
    /// The value is `Omega` in `Omega |dz|^2`; lengths use `sqrt(Omega)`.
    Area,
    /// The value is the length element itself, `ds = Omega |dz|`.
    Length,
}

type LogFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

/// A nonnegative conformal density on a disk, stored through its logarithm.
#[derive(Clone)]
pub struct PseudoMetricField {
    label: String,
    domain: DiskDomain,
    density: Density,
    log_fn: LogFn,
    singular: Vec<Complex64>,
}

impl fmt::Debug for PseudoMetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PseudoMetricField")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("density", &self.density)
            .field("singular", &self.singular)
            .finish()
    }
}

impl PseudoMetricField {
    /// `log_fn` returns the log of the density (`-inf` where it vanishes).
    /// `singular` lists points where the density may blow up or lose
    /// smoothness; line integrals split there.
    pub fn from_log_fn(
        label: impl Into<String>,
        domain: DiskDomain,
        density: Density,
        log_fn: impl Fn(Complex64) -> f64 + Send + Sync + 'static,
        singular: Vec<Complex64>,
    ) -> Self {
        Self { label: label.into(), domain, density, log_fn: Arc::new(log_fn), singular }
    }

    /// The Poincare metric `(2R / (R^2 - |z - c|^2))^2 |dz|^2` of the disk.
    pub fn poincare(domain: DiskDomain) -> Self {
        let (c, r) = (domain.center(), domain.radius());
        Self::from_log_fn(
            "poincare",
            domain,
            Density::Area,
            move |z| {
                let gap = r * r - (z - c).norm_sqr();
                if gap <= 0.0 {
                    f64::INFINITY
                } else {
                    2.0 * (2.0 * r / gap).ln()
                }
            },
            Vec::new(),
        )
    }

    pub fn constant(domain: DiskDomain, density: Density, value: f64) -> Self {
        let l = value.ln();
        Self::from_log_fn("constant", domain, density, move |_| l, Vec::new())
    }

    /// `|z - center|^exponent`.
    pub fn power(domain: DiskDomain, center: Complex64, exponent: f64, density: Density) -> Self {
        Self::from_log_fn("power", domain, density, move |z| exponent * (z - center).norm().ln(), vec![center])
    }

    /// The same field with every length multiplied by `factor`.
    pub fn scaled_length(&self, factor: f64) -> Self {
        let shift = match self.density {
            Density::Area => 2.0 * factor.ln(),
            Density::Length => factor.ln(),
        };
        let inner = self.log_fn.clone();
        Self {
            label: format!("{} x{factor}", self.label),
            domain: self.domain,
            density: self.density,
            log_fn: Arc::new(move |z| inner(z) + shift),
            singular: self.singular.clone(),
        }
    }

    pub fn with_domain(&self, domain: DiskDomain) -> Self {
        Self { domain, ..self.clone() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &DiskDomain {
        &self.domain
    }

    pub fn density(&self) -> Density {
        self.density
    }

    pub fn singular_points(&self) -> &[Complex64] {
        &self.singular
    }

    pub fn log_value(&self, z: Complex64) -> f64 {
        (self.log_fn)(z)
    }

    pub fn value(&self, z: Complex64) -> f64 {
        self.log_value(z).exp()
    }

    /// Log of the area density `Omega` in `Omega |dz|^2`.
    pub fn log_area(&self, z: Complex64) -> f64 {
        match self.density {
            Density::Area => self.log_value(z),
            Density::Length => 2.0 * self.log_value(z),
        }
    }

    /// Length element per unit `|dz|`.
    pub fn length_element(&self, z: Complex64) -> f64 {
        match self.density {
            Density::Area => (0.5 * self.log_value(z)).exp(),
            Density::Length => self.value(z),
        }
    }

    /// Values on the masked grid, in grid order.
    pub fn grid_values(&self) -> Vec<(Complex64, f64)> {
        self.domain.grid().into_par_iter().map(|p| (p.z, self.value(p.z))).collect()
    }
}

/// The `xi` density attached to a curve, its hyperplanes and weights.
#[derive(Debug, Clone)]
pub struct XiField {
    curve: DerivedCurve,
    planes: Vec<Hyperplane>,
    certificates: Vec<HarmonicCertificate>,
    cfg: DefectConfig,
    domain: DiskDomain,
}

fn restricted_planes(curve: &DerivedCurve, planes: &[Hyperplane], cfg: &DefectConfig) -> Result<Vec<Hyperplane>> {
    if curve.k() != cfg.k {
        return Err(Error::ConfigInvalid(format!("curve spans P^{} but config has k = {}", curve.k(), cfg.k)));
    }
    if planes.len() != cfg.q {
        return Err(Error::ConfigInvalid(format!("{} hyperplanes for q = {}", planes.len(), cfg.q)));
    }
    planes.iter().map(|p| curve.restrict(p)).collect()
}

/// Builds the `xi` density for a curve, `q` hyperplanes and one harmonic
/// weight per hyperplane.
pub fn xi_field(
    curve: &[ComplexPoly],
    planes: &[Hyperplane],
    cfg: &DefectConfig,
    certificates: &[HarmonicCertificate],
    domain: &DiskDomain,
) -> Result<XiField> {
    let derived = DerivedCurve::new(curve)?;
    let restricted = restricted_planes(&derived, planes, cfg)?;
    if certificates.len() != cfg.q {
        return Err(Error::ConfigInvalid(format!("{} weights for q = {}", certificates.len(), cfg.q)));
    }
    Ok(XiField {
        curve: derived,
        planes: restricted,
        certificates: certificates.to_vec(),
        cfg: cfg.clone(),
        domain: *domain,
    })
}

impl XiField {
    pub fn config(&self) -> &DefectConfig {
        &self.cfg
    }

    /// `log xi(z)`, or `-inf` on the excluded set where some `phi_s` vanishes.
    pub fn log_xi(&self, z: Complex64) -> f64 {
        let cfg = &self.cfg;
        let (k, x, n) = (cfg.k, cfg.x(), cfg.big_n);
        let norms: Vec<f64> = (0..=k).map(|s| self.curve.derived_norm_sq(s, z).expect("stage within range")).collect();
        if norms.iter().any(|&v| v <= 0.0) {
            return f64::NEG_INFINITY;
        }
        let mut acc = cfg.lambda * 0.5 * norms[0].ln()
            + (1.0 + x) * 0.5 * norms[k].ln()
            + 2.0 * x * norms[..k].iter().map(|v| 0.5 * v.ln()).sum::<f64>();
        let values: Vec<Complex64> = self.curve.basis().iter().map(|p| p.eval(z)).collect();
        for ((plane, mu), w) in self.planes.iter().zip(&self.certificates).zip(&cfg.weights.omega) {
            let g = plane.pair(&values).norm();
            if g == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += w * (mu.eval(z) - g.ln());
            for (s, norm) in norms.iter().enumerate().take(k) {
                let phi = self.curve.contracted_in_basis(s, plane, z) / norm;
                if phi <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                acc -= (n - phi.ln()).ln();
            }
        }
        acc
    }

    pub fn xi(&self, z: Complex64) -> f64 {
        self.log_xi(z).exp()
    }

    fn zero_set(&self) -> Vec<Complex64> {
        self.planes
            .iter()
            .filter_map(|p| p.pairing_poly(self.curve.basis()).roots().ok())
            .flatten()
            .map(|r| r.0)
            .collect()
    }

    /// `xi` itself, as an area density.
    pub fn xi_density(&self) -> PseudoMetricField {
        let me = self.clone();
        PseudoMetricField::from_log_fn("xi", self.domain, Density::Area, move |z| me.log_xi(z), self.zero_set())
    }

    /// `Omega = xi^{2 kappa}`, zero on the excluded set.
    pub fn omega(&self) -> PseudoMetricField {
        let me = self.clone();
        let e = 2.0 * self.cfg.kappa;
        PseudoMetricField::from_log_fn("omega", self.domain, Density::Area, move |z| e * me.log_xi(z), self.zero_set())
    }

    /// Smallest ratio `(1/4) Lap log xi / xi^{2 kappa}` over the grid, the
    /// empirical constant `d_k`.
    pub fn empirical_dk(&self) -> f64 {
        pseudo_metric_curvature_check(&self.omega()).min_ratio / (2.0 * self.cfg.kappa)
    }
}

/// The length metric `d sigma` used in the final length argument.
pub fn dsigma_field(
    curve: &[ComplexPoly],
    planes: &[Hyperplane],
    cfg: &DefectConfig,
    certificates: &[HarmonicCertificate],
    domain: &DiskDomain,
) -> Result<PseudoMetricField> {
    let derived = DerivedCurve::new(curve)?;
    let restricted = restricted_planes(&derived, planes, cfg)?;
    if certificates.len() != cfg.q {
        return Err(Error::ConfigInvalid(format!("{} weights for q = {}", certificates.len(), cfg.q)));
    }
    let k = cfg.k;
    let all: Vec<usize> = (0..=k).collect();
    let top = derived.wronskian_of(&all).clone();
    let pairings: Vec<ComplexPoly> = restricted.iter().map(|p| p.pairing_poly(derived.basis())).collect();
    let mut firsts: Vec<ComplexPoly> = Vec::new();
    for plane in &restricted {
        for s in 0..k {
            let comp = derived
                .contracted_components(s, plane)?
                .into_iter()
                .find(|p| !p.trim_relative(1e-12).is_zero())
                .ok_or_else(|| Error::ConfigInvalid(format!("stage {s} contraction vanishes identically")))?;
            firsts.push(comp);
        }
    }

    let mut singular = Vec::new();
    for p in std::iter::once(&top).chain(&pairings).chain(&firsts).chain(certificates.iter().map(|c| &c.g)) {
        if p.degree().unwrap_or(0) > 0 {
            singular.extend(p.roots()?.into_iter().map(|r| r.0));
        }
    }

    let x = cfg.x();
    let power = 1.0 / ((1.0 - cfg.tau) * cfg.lambda);
    let omega = cfg.weights.omega.clone();
    let small = 4.0 / cfg.big_n;
    let certs = certificates.to_vec();
    let log_fn = move |z: Complex64| {
        let mut acc = -(1.0 + x) * top.eval(z).norm().ln();
        for ((g, mu), w) in pairings.iter().zip(&certs).zip(&omega) {
            acc += w * (g.eval(z).norm().ln() - mu.eval(z));
        }
        acc -= small * firsts.iter().map(|p| p.eval(z).norm().ln()).sum::<f64>();
        power * acc
    };
    Ok(PseudoMetricField::from_log_fn("dsigma", *domain, Density::Length, log_fn, singular))
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureCheckReport {
    /// `min (1/4) Lap log Omega / Omega` over usable grid points.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub points: usize,
    /// `sup Omega ((R^2 - |z|^2) / 2R)^2` on the grid.
    pub schwarz_sup: f64,
    /// The same supremum after one refinement of the grid.
    pub schwarz_sup_refined: f64,
    pub refinement_change: f64,
    pub stable: bool,
}

fn schwarz_sup(field: &PseudoMetricField, domain: &DiskDomain) -> f64 {
    let (c, r) = (domain.center(), domain.radius());
    domain
        .grid()
        .into_par_iter()
        .map(|p| {
            let w = (r * r - (p.z - c).norm_sqr()) / (2.0 * r);
            let v = (field.log_area(p.z) + 2.0 * w.ln()).exp();
            if v.is_finite() {
                v
            } else {
                f64::NEG_INFINITY
            }
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Five-point Laplacian of `log Omega` against `Omega` at the grid points,
/// and the Ahlfors-Schwarz supremum with its stability under refinement.
pub fn pseudo_metric_curvature_check(field: &PseudoMetricField) -> CurvatureCheckReport {
    let domain = *field.domain();
    let (c, r) = (domain.center(), domain.radius());
    let ratios: Vec<f64> = domain
        .grid()
        .into_par_iter()
        .filter_map(|p| {
            let z = p.z;
            let h = (1e-3 * r).min(0.05 * (r - (z - c).norm()));
            let centre = field.log_area(z);
            let around = [
                field.log_area(z + h),
                field.log_area(z - h),
                field.log_area(z + Complex64::new(0.0, h)),
                field.log_area(z - Complex64::new(0.0, h)),
            ];
            if !centre.is_finite() || around.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let lap = (around.iter().sum::<f64>() - 4.0 * centre) / (h * h);
            let ratio = 0.25 * lap / centre.exp();
            ratio.is_finite().then_some(ratio)
        })
        .collect();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let coarse = schwarz_sup(field, &domain);
    let fine_domain = domain.with_resolution(2 * domain.grid_resolution() - 1).expect("refined resolution is valid");
    let fine = schwarz_sup(field, &fine_domain);
    let refinement_change = (fine - coarse).abs() / coarse.abs().max(f64::MIN_POSITIVE);
    CurvatureCheckReport {
        min_ratio,
        max_ratio,
        points: ratios.len(),
        schwarz_sup: coarse,
        schwarz_sup_refined: fine,
        refinement_change,
        stable: coarse.is_finite() && fine.is_finite() && refinement_change <= 0.05,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialLength {
    Finite { length: f64 },
    Divergent { t: f64, exponent: Option<f64>, reason: String },
}

impl RadialLength {
    pub fn is_finite(&self) -> bool {
        matches!(self, RadialLength::Finite { .. })
    }
}

/// Partial sums beyond this count as divergence.
pub const DIVERGENCE_CAP: f64 = 1e9;
/// Power-law exponents at or below `-1 + EXPONENT_SLACK` are not integrable.
const EXPONENT_SLACK: f64 = 1e-3;
/// Distance, relative to the segment, at which singular ends are cut off.
const END_CUTOFF: f64 = 1e-6;

struct NonFinite(f64);

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> std::result::Result<f64, NonFinite> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    if !flm.is_finite() {
        return Err(NonFinite(lm));
    }
    if !frm.is_finite() {
        return Err(NonFinite(rm));
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> std::result::Result<f64, NonFinite> {
    // split into pieces first so that narrow features are not missed
    let pieces = 64;
    let mut total = 0.0;
    for i in 0..pieces {
        let lo = a + (b - a) * i as f64 / pieces as f64;
        let hi = a + (b - a) * (i + 1) as f64 / pieces as f64;
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        for (v, t) in [(fa, lo), (fm, 0.5 * (lo + hi)), (fb, hi)] {
            if !v.is_finite() {
                return Err(NonFinite(t));
            }
        }
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson(f, lo, hi, fa, fm, fb, whole, 1e-10 * whole.abs().max(1e-12), 48)?;
    }
    Ok(total)
}

/// Fits `f(end + side * d) ~ C d^p` for small `d` and returns `(p, tail)`
/// where `tail` integrates the fit over `(0, eps)`.
fn end_behaviour(f: &dyn Fn(f64) -> f64, end: f64, side: f64, eps: f64) -> Option<(f64, f64)> {
    let samples: Vec<(f64, f64)> = (0..9)
        .map(|i| {
            let d = eps * 0.5f64.powi(i);
            (d.ln(), f(end + side * d))
        })
        .collect();
    if samples.iter().any(|s| !s.1.is_finite()) {
        return None;
    }
    let v0 = samples[0].1;
    if samples.iter().all(|s| s.1 <= 0.0) {
        return Some((f64::INFINITY, 0.0));
    }
    if samples.iter().any(|s| s.1 <= 0.0) {
        return Some((0.0, v0 * eps));
    }
    // least-squares slope of log f against log d over the finest levels
    let pts: Vec<(f64, f64)> = samples[4..].iter().map(|&(x, v)| (x, v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let p = sxy / sxx;
    Some((p, if p > -1.0 { v0 * eps / (p + 1.0) } else { f64::INFINITY }))
}

/// Length of the ray `{c + t R e^{i angle} : 0 <= t < 1}` in the field's metric.
pub fn radial_length(field: &PseudoMetricField, angle: f64) -> RadialLength {
    let d = field.domain();
    let (c, r) = (d.center(), d.radius());
    let dir = Complex64::from_polar(1.0, angle);
    let f = move |t: f64| field.length_element(c + dir * (t * r)) * r;

    let mut breaks: Vec<f64> = field
        .singular_points()
        .iter()
        .filter_map(|p| {
            let w = (p - c) * dir.conj() / r;
            (w.im.abs() <= 1e-9 && w.re >= 0.0 && w.re < 1.0).then_some(w.re)
        })
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let start_singular = breaks.first().is_some_and(|&b| b < 1e-12);
    let mut nodes = vec![0.0];
    nodes.extend(breaks.into_iter().filter(|&b| b >= 1e-12));
    nodes.push(1.0);

    let mut total = 0.0;
    for (i, w) in nodes.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let eps = END_CUTOFF * (b - a);
        let sing_a = i > 0 || start_singular;
        let lo = if sing_a { a + eps } else { a };
        let hi = b - eps;
        for (end, side, active) in [(a, 1.0, sing_a), (b, -1.0, true)] {
            if !active {
                continue;
            }
            match end_behaviour(&f, end, side, eps) {
                None => {
                    return RadialLength::Divergent {
                        t: end,
                        exponent: None,
                        reason: "density is not finite next to a singular point".into(),
                    }
                }
                Some((p, _)) if p <= -1.0 + EXPONENT_SLACK => {
                    return RadialLength::Divergent {
                        t: end,
                        exponent: Some(p),
                        reason: "non-integrable power singularity".into(),
                    }
                }
                Some((_, tail)) => total += tail,
            }
        }
        match integrate(&f, lo, hi) {
            Ok(v) => total += v,
            Err(NonFinite(t)) => {
                return RadialLength::Divergent { t, exponent: None, reason: "density is not finite".into() }
            }
        }
        if total > DIVERGENCE_CAP {
            return RadialLength::Divergent { t: b, exponent: None, reason: "partial sum exceeds cap".into() };
        }
    }
    RadialLength::Finite { length: total }
}

/// [`radial_length`] for several angles in parallel.
pub fn radial_lengths(field: &PseudoMetricField, angles: &[f64]) -> Vec<RadialLength> {
    angles.par_iter().map(|&a| radial_length(field, a)).collect()
}
