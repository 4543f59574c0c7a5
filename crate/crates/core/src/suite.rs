//! The verification suite: fourteen numbered criteria, each a seeded,
//! self-contained check with a numeric tolerance. The CLI `verify` command
//! and the acceptance test both run these.

use std::f64::consts::{SQRT_2, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::defect::{
    build_defect_config, check_certificate, defect_hypothesis, defect_relation_check, dsigma_field,
    modified_defect_bound, pseudo_metric_curvature_check, radial_length, xi_field, Density, HarmonicCertificate,
    PseudoMetricField, RadialLength,
};
use crate::derived::{wronskian, wronskian_reparam_check, DerivedCurve};
use crate::domain::DiskDomain;
use crate::error::{Error, Result};
use crate::fixtures::{self, random_poly, random_subgeneral_planes};
use crate::gauss::{angle_sandwich_check, Direction, Hyperplane};
use crate::geodesy::{curvature_estimate_scan, distance_to_boundary, metric_comparison_check, MetricKind};
use crate::linalg::combinations;
use crate::nochka::{
    compute_nochka_weights, divisor_inequality_check, product_inequality_check, verify_nochka_properties,
};
use crate::poly::ComplexPoly;
use crate::surface::HarmonicImmersion;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub suite: &'static str,
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 14] = [
    Criterion { id: 1, suite: "surface", title: "Lagrange identity on random data" },
    Criterion { id: 2, suite: "surface", title: "harmonic-graph fixture" },
    Criterion { id: 3, suite: "surface", title: "Enneper fixture" },
    Criterion { id: 4, suite: "geodesy", title: "curvature and distance comparison chain" },
    Criterion { id: 5, suite: "gauss", title: "angle sandwich" },
    Criterion { id: 6, suite: "derived", title: "Fubini-Study Laplacian identity" },
    Criterion { id: 7, suite: "derived", title: "Wronskian reparametrization rule" },
    Criterion { id: 8, suite: "nochka", title: "Nochka weights and their inequalities" },
    Criterion { id: 9, suite: "defect", title: "classical defect relation" },
    Criterion { id: 10, suite: "defect", title: "certificate checker" },
    Criterion { id: 11, suite: "defect", title: "constant windows" },
    Criterion { id: 12, suite: "defect", title: "pseudo-metric checks" },
    Criterion { id: 13, suite: "geodesy", title: "grid geodesics" },
    Criterion { id: 14, suite: "geodesy", title: "curvature-estimate scan" },
];

/// Names accepted by `--only`, in addition to criterion numbers.
pub const SUITES: [&str; 6] = ["surface", "gauss", "derived", "nochka", "defect", "geodesy"];

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub suite: &'static str,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} [{}] {}: {} ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.suite,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

/// Criteria selected by `only`: a suite name, a criterion number, or everything.
pub fn select(only: Option<&str>) -> Result<Vec<Criterion>> {
    match only {
        None | Some("all") => Ok(CRITERIA.to_vec()),
        Some(name) => {
            if let Ok(id) = name.parse::<u8>() {
                return CRITERIA
                    .iter()
                    .find(|c| c.id == id)
                    .map(|c| vec![*c])
                    .ok_or_else(|| Error::InvalidInput(format!("no criterion numbered {id}")));
            }
            if !SUITES.contains(&name) {
                return Err(Error::InvalidInput(format!(
                    "unknown suite {name:?}; expected one of {} or 1-14",
                    SUITES.join(", ")
                )));
            }
            Ok(CRITERIA.iter().filter(|c| c.suite == name).copied().collect())
        }
    }
}

pub fn run(only: Option<&str>, seed: u64) -> Result<Vec<Outcome>> {
    Ok(select(only)?.into_iter().map(|c| run_criterion(c, seed)).collect())
}

pub fn run_criterion(c: Criterion, seed: u64) -> Outcome {
    let start = Instant::now();
    // each criterion gets its own stream so that --only reproduces a full run
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c.id as u64));
    let result = match c.id {
        1 => lagrange(&mut rng),
        2 => harmonic_graph_fixture(),
        3 => enneper_fixture(&mut rng),
        4 => comparison_chain(seed),
        5 => sandwich(&mut rng),
        6 => fubini_study(),
        7 => reparametrization(&mut rng),
        8 => nochka(&mut rng),
        9 => classical_defects(&mut rng),
        10 => certificates(),
        11 => constant_windows(&mut rng),
        12 => pseudo_metrics(),
        13 => geodesics(),
        14 => curvature_scan(),
        _ => Err(Error::InvalidInput(format!("no criterion numbered {}", c.id))),
    };
    let (pass, detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome { id: c.id, suite: c.suite, title: c.title, pass, detail, seconds: start.elapsed().as_secs_f64() }
}

type Check = Result<(bool, String)>;

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point_in_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn random_direction<R: Rng>(rng: &mut R) -> Direction {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return Direction::new(v).expect("nonzero");
        }
    }
}

fn lagrange<R: Rng>(rng: &mut R) -> Check {
    let start = Instant::now();
    let domain = DiskDomain::unit(8);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for _ in 0..100 {
        let phi: Vec<ComplexPoly> = (0..3)
            .map(|_| {
                let d = rng.gen_range(0..=5);
                random_poly(rng, d)
            })
            .collect();
        let s = HarmonicImmersion::new(phi, domain)?;
        for _ in 0..100 {
            let p = point_in_disk(rng, 1.0);
            let scale = s.phi_norm_sq(p) * s.dphi_at(p).iter().map(|x| x.norm_sqr()).sum::<f64>();
            if scale == 0.0 {
                continue;
            }
            worst = worst.max(s.lagrange_residual(p)? / scale);
            points += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((worst < 1e-12 && secs < 1.0, format!("max relative residual {worst:.2e} at {points} points in {secs:.3}s")))
}

fn harmonic_graph_fixture() -> Check {
    let s = fixtures::harmonic_graph(DiskDomain::unit(65));
    let h_exact = s.hopf_poly().coeffs() == [z(0.0, 0.0), z(0.0, 0.0), z(1.0, 0.0)];
    let k = s.qc_constant()?;
    let kg0 = s.curvature_klotz(z(0.0, 0.0))?;
    let kd0 = s.curvature_induced(z(0.0, 0.0))?;
    let bound = (2.0 * k / (k * k + 1.0)).powi(4);
    let mut ratio_err: f64 = 0.0;
    for i in 0..64 {
        let p = Complex64::from_polar(1.0, TAU * i as f64 / 64.0);
        let ratio = s.curvature_klotz(p)?.abs() / s.curvature_induced(p)?.abs();
        ratio_err = ratio_err.max((ratio - 25.0 / 27.0).abs());
    }
    let pass = h_exact
        && (k - 5f64.sqrt()).abs() <= 1e-9
        && (kg0 + 4.0).abs() <= 1e-9
        && (kd0 + 4.0).abs() <= 1e-9
        && ratio_err <= 1e-9
        && 25.0 / 27.0 >= bound
        && (bound - 25.0 / 81.0).abs() <= 1e-9;
    Ok((
        pass,
        format!(
            "h = z^2 exact: {h_exact}; K = {k:.12}; K_Gamma(0) = {kg0}; K_ds2(0) = {kd0}; \
             ratio error on |z| = 1 {ratio_err:.1e}; bound {bound:.12}"
        ),
    ))
}

fn enneper_fixture<R: Rng>(rng: &mut R) -> Check {
    let s = fixtures::enneper(DiskDomain::unit(65));
    let h_zero = s.hopf_poly().coeffs().iter().all(|c| *c == z(0.0, 0.0));
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = point_in_disk(rng, 1.0);
        let exact = -4.0 / (1.0 + p.norm_sqr()).powi(4);
        worst = worst.max((s.curvature_klotz(p)? - exact).abs());
    }
    let k = s.qc_constant()?;
    Ok((
        h_zero && worst <= 1e-9 && (k - 1.0).abs() <= 1e-12,
        format!("h = 0 exact: {h_zero}; max K_Gamma error {worst:.1e} at 1000 points; K = {k}"),
    ))
}

fn comparison_chain(seed: u64) -> Check {
    let domain = DiskDomain::unit(65);
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, s) in [
        ("graph", fixtures::harmonic_graph(domain)),
        ("enneper", fixtures::enneper(domain)),
        ("flat", fixtures::flat_plane(domain)),
    ] {
        let r = s.curvature_ratio_bound_check()?;
        let margin = if r.checked == 0 { 0.0 } else { r.margin };
        pass &= r.holds || r.checked == 0;
        if name == "flat" {
            detail.push(format!("{name}: K_ds2 = 0 at all {} points", r.skipped));
            continue;
        }
        let c = metric_comparison_check(&s, 100, seed)?;
        pass &= c.distance_holds;
        detail.push(format!(
            "{name}: curvature margin {margin:.3e} over {} points, max d - sqrt2 d_Gamma = {:.3e}",
            r.checked, c.max_distance_excess
        ));
    }
    Ok((pass, detail.join("; ")))
}

fn sandwich<R: Rng>(rng: &mut R) -> Check {
    let domain = DiskDomain::unit(33);
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, s) in [("graph", fixtures::harmonic_graph(domain)), ("enneper", fixtures::enneper(domain))] {
        let k = s.qc_constant()?;
        let mut slack = f64::INFINITY;
        let mut spread: f64 = 0.0;
        for _ in 0..100 {
            let r = angle_sandwich_check(&s, k, point_in_disk(rng, 1.0), &random_direction(rng))?;
            pass &= r.holds;
            slack = slack.min((r.middle - r.lower).min(r.upper - r.middle));
            spread = spread.max(r.upper - r.lower);
        }
        if name == "enneper" {
            pass &= spread <= 1e-10;
        }
        detail.push(format!("{name}: K = {k:.6}, min slack {slack:.2e}, max width {spread:.2e}"));
    }
    Ok((pass, detail.join("; ")))
}

fn fubini_study() -> Check {
    let start = Instant::now();
    let line = DerivedCurve::new(&fixtures::line_curve())?;
    let r = line.fs_laplacian_identity_check(0, &DiskDomain::unit(33), 1e-3)?;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        r.max_rel_error < 1e-4 && secs < 1.0,
        format!("max relative error {:.2e} at {} points in {secs:.3}s", r.max_rel_error, r.points),
    ))
}

fn reparametrization<R: Rng>(rng: &mut R) -> Check {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for _ in 0..20 {
        let size = rng.gen_range(2..=4);
        let curve: Vec<ComplexPoly> = (0..size)
            .map(|_| {
                let d = rng.gen_range(0..=6);
                random_poly(rng, d)
            })
            .collect();
        let a = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
        let b = z(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let r = wronskian_reparam_check(&curve, a, b)?;
        let scale = r.lhs.max_norm().max(1.0);
        worst = worst.max(r.max_coeff_diff / scale);
        pass &= r.holds;
    }
    Ok((pass, format!("20 pairs, max relative coefficient difference {worst:.2e}")))
}

fn nochka<R: Rng>(rng: &mut R) -> Check {
    let start = Instant::now();

    let mut unit_err: f64 = 0.0;
    for _ in 0..10 {
        let k = rng.gen_range(1..=3);
        let q = rng.gen_range(k + 2..=8);
        let planes = random_subgeneral_planes(rng, q, k, k)
            .ok_or_else(|| Error::Infeasible("no general-position sample".into()))?;
        let w = compute_nochka_weights(&planes, k)?;
        let e = w.omega.iter().map(|o| (o - 1.0).abs()).fold((w.theta - 1.0).abs(), f64::max);
        unit_err = unit_err.max(e);
    }

    let mut instances = 0;
    let mut bullet_failures = 0;
    let mut pool = Vec::new();
    while instances < 30 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(k..=k + 2);
        let lo = 2 * n - k + 2;
        if lo > 12 {
            continue;
        }
        let q = rng.gen_range(lo..=12);
        let Some(planes) = random_subgeneral_planes(rng, q, n, k) else { continue };
        let w = compute_nochka_weights(&planes, n)?;
        if !verify_nochka_properties(&w, &planes).all_pass() {
            bullet_failures += 1;
        }
        pool.push((planes, w));
        instances += 1;
    }

    let mut witnesses = 0;
    for _ in 0..100 {
        let (planes, w) = &pool[rng.gen_range(0..pool.len())];
        let e: Vec<f64> = (0..planes.len()).map(|_| rng.gen_range(1.01..50.0)).collect();
        let size = rng.gen_range(1..=w.n + 1);
        let subsets = combinations(planes.len(), size);
        let subset = &subsets[rng.gen_range(0..subsets.len())];
        if product_inequality_check(w, planes, &e, subset).is_ok() {
            witnesses += 1;
        }
    }

    let triple = [ComplexPoly::constant(z(1.0, 0.0)), ComplexPoly::z(), ComplexPoly::monomial(z(1.0, 0.0), 3)];
    let triple_planes: Vec<Hyperplane> =
        [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 1.0], [1.0, -2.0, 3.0]]
            .iter()
            .map(|v| Hyperplane::from_real(v))
            .collect::<Result<_>>()?;
    let tw = compute_nochka_weights(&triple_planes, 2)?;
    let tr = divisor_inequality_check(&triple, &triple_planes, &tw, &DiskDomain::unit(8))?;
    let triple_margin =
        tr.points.iter().find(|p| p.z[0].abs() < 1e-9 && p.z[1].abs() < 1e-9).map(|p| p.margin).unwrap_or(f64::NAN);
    let mut divisor_pass = usize::from(tr.pass && (triple_margin - (1.0 - tw.omega[0])).abs() < 1e-9);
    let mut divisor_runs = 1;
    let mut zeros_seen = tr.points.len();
    let disk = DiskDomain::new(z(0.0, 0.0), 2.0, 8)?;
    while divisor_runs < 50 {
        let (planes, w) = &pool[rng.gen_range(0..pool.len())];
        let dim = w.k + 1;
        let curve: Vec<ComplexPoly> = (0..dim)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                random_poly(rng, d)
            })
            .collect();
        if wronskian(&curve).is_zero() {
            continue;
        }
        let r = divisor_inequality_check(&curve, planes, w, &disk)?;
        zeros_seen += r.points.len();
        divisor_pass += usize::from(r.pass);
        divisor_runs += 1;
    }

    let secs = start.elapsed().as_secs_f64();
    let pass = unit_err <= 1e-9 && bullet_failures == 0 && witnesses == 100 && divisor_pass == 50 && secs < 30.0;
    Ok((
        pass,
        format!(
            "general position: max |w - 1|, |theta - 1| = {unit_err:.1e}; bullets failed on {bullet_failures}/30 \
             subgeneral instances; witnesses {witnesses}/100; divisor inequality {divisor_pass}/50 \
             ({zeros_seen} zeros, triple-zero margin {triple_margin:.6}); {secs:.1}s"
        ),
    ))
}

fn classical_defects<R: Rng>(rng: &mut R) -> Check {
    let mut passed = 0;
    let mut max_sum: f64 = 0.0;
    let mut runs = 0;
    while runs < 20 {
        let k = rng.gen_range(1..=3);
        let degrees: Vec<usize> = (0..=k).map(|_| rng.gen_range(0..=4)).collect();
        let curve: Vec<ComplexPoly> = degrees.iter().map(|&d| random_poly(rng, d)).collect();
        if wronskian(&curve).is_zero() {
            continue;
        }
        // coordinate planes drop the degree whenever a component is short
        let mut planes: Vec<Hyperplane> = (0..=k)
            .map(|i| {
                let mut e = vec![0.0; k + 1];
                e[i] = 1.0;
                Hyperplane::from_real(&e)
            })
            .collect::<Result<_>>()?;
        let q = rng.gen_range(k + 1..=8);
        while planes.len() < q {
            let v: Vec<Complex64> = (0..=k).map(|_| z(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            planes.push(Hyperplane::from_normal(&v)?);
        }
        let r = defect_relation_check(&curve, &planes)?;
        if !r.general_position {
            continue;
        }
        max_sum = max_sum.max(r.sum / r.bound);
        passed += usize::from(r.holds);
        runs += 1;
    }
    Ok((passed == 20, format!("{passed}/20 curves satisfy the relation; largest sum / (k + 1) = {max_sum:.3}")))
}

fn certificates() -> Check {
    let d = DiskDomain::unit(33);
    let line = fixtures::line_curve();
    let h = Hyperplane::from_real(&[0.0, 1.0])?;
    let full = check_certificate(&line, &h, 0.0, &HarmonicCertificate::log_modulus(1.0, ComplexPoly::z()), &d)?;
    let half = check_certificate(&line, &h, 0.0, &HarmonicCertificate::log_modulus(0.5, ComplexPoly::z()), &d)?;
    let omitted = Hyperplane::from_real(&[1.0, 0.0])?;
    let delta = modified_defect_bound(&line, &omitted, &[(0.0, HarmonicCertificate::zero())], &d)?;
    Ok((
        full.accepted && !half.accepted && delta == 1.0,
        format!(
            "log|z| accepted: {}; (1/2) log|z| accepted: {}; omitted plane defect {delta}",
            full.accepted, half.accepted
        ),
    ))
}

fn constant_windows<R: Rng>(rng: &mut R) -> Check {
    let mut good = 0;
    let mut detail = String::new();
    let mut worst_tau: f64 = 0.0;
    let mut worst_d: f64 = 0.0;
    let mut tries = 0;
    while good < 50 && tries < 10_000 {
        tries += 1;
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(k + 1..=k + 2);
        let rhs = (2 * n - k - 1) as f64 * (k as f64 / 2.0 + 1.0);
        let q_min = (rhs.floor() as usize + 1).max(2 * (n - 1) + 2 - k);
        if q_min > 12 {
            continue;
        }
        let q = rng.gen_range(q_min..=12);
        // scale eta so that the hypothesis holds with room to spare
        let room = (q as f64 - rhs) / q as f64;
        let eta: Vec<f64> = (0..q).map(|_| rng.gen_range(0.0..room * 0.95)).collect();
        let (lhs, _) = defect_hypothesis(n, k, &eta);
        if lhs <= rhs {
            continue;
        }
        let Some(planes) = random_subgeneral_planes(rng, q, n - 1, k) else { continue };
        let w = compute_nochka_weights(&planes, n - 1)?;
        match build_defect_config(q, n, k, &eta, &w) {
            Ok(cfg) => {
                let d = cfg.blowup_denominator();
                if cfg.tau > 0.0 && cfg.tau < 1.0 && d > 0.0 && d < 4.0 {
                    good += 1;
                    worst_tau = worst_tau.max(cfg.tau);
                    worst_d = worst_d.max(d);
                } else {
                    detail = format!("out of window at (q, n, k) = ({q}, {n}, {k})");
                    break;
                }
            }
            Err(e) => {
                detail = format!("(q, n, k) = ({q}, {n}, {k}): {e}");
                break;
            }
        }
    }

    let mut rejected = 0;
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let n = k + 1;
        let q = 2 * (n - 1) + 2 - k + rng.gen_range(0..3);
        let rhs = (2 * n - k - 1) as f64 * (k as f64 / 2.0 + 1.0);
        // every 1 - eta_j at most rhs / q, so the hypothesis fails
        let eta: Vec<f64> = (0..q).map(|_| 1.0 - rng.gen_range(0.0..=(rhs / q as f64).min(1.0))).collect();
        let planes = random_subgeneral_planes(rng, q, n - 1, k).ok_or_else(|| Error::Infeasible("no sample".into()))?;
        let w = compute_nochka_weights(&planes, n - 1)?;
        if matches!(build_defect_config(q, n, k, &eta, &w), Err(Error::HypothesisFailed { .. })) {
            rejected += 1;
        }
    }
    Ok((
        good == 50 && rejected == 20,
        format!(
            "{good}/50 tuples in window (max tau {worst_tau:.4}, max N Lambda (1 - tau) {worst_d:.4}); \
             {rejected}/20 violations rejected{}",
            if detail.is_empty() { String::new() } else { format!("; first failure {detail}") }
        ),
    ))
}

fn pseudo_metrics() -> Check {
    let poincare = pseudo_metric_curvature_check(&PseudoMetricField::poincare(DiskDomain::unit(65)));
    let schwarz_ok = (poincare.schwarz_sup - 1.0).abs() <= 1e-6 && poincare.stable;

    let xi = |res: usize| -> Result<f64> {
        let d = fixtures::line_domain(res);
        let (curve, planes, cfg, certs) = fixtures::line_defect_setup(&d);
        Ok(xi_field(&curve, &planes, &cfg, &certs, &d)?.empirical_dk())
    };
    let (coarse, fine) = (xi(33)?, xi(65)?);
    let dk_ok = coarse > 0.0 && fine > 0.0 && (coarse - fine).abs() / coarse < 0.1;

    let exponent = PseudoMetricField::power(DiskDomain::unit(9), z(0.5, 0.0), -1.5, Density::Length);
    let diverges = !radial_length(&exponent, 0.0).is_finite();
    let d = fixtures::line_domain(9);
    let (curve, planes, cfg, certs) = fixtures::line_defect_setup(&d);
    let ds = dsigma_field(&curve, &planes, &cfg, &certs, &d)?;
    let finite = match radial_length(&ds, 0.0) {
        RadialLength::Finite { length } => Some(length),
        RadialLength::Divergent { .. } => None,
    };
    Ok((
        schwarz_ok && dk_ok && diverges && finite.is_some(),
        format!(
            "Poincare sup {:.9}; d_k {coarse:.4e} -> {fine:.4e}; exponent fixture diverges: {diverges}; \
             d sigma ray length {}",
            poincare.schwarz_sup,
            finite.map_or("divergent".to_string(), |l| format!("{l:.6}"))
        ),
    ))
}

fn geodesics() -> Check {
    let origin = z(0.0, 0.0);
    let flat = distance_to_boundary(&fixtures::flat_plane(DiskDomain::unit(512)), MetricKind::Induced, origin)?;
    let oracle = 3f64.sqrt() / 2.0 + SQRT_2.asinh() / (2.0 * SQRT_2);
    let gamma = distance_to_boundary(&fixtures::harmonic_graph(DiskDomain::unit(512)), MetricKind::Klotz, origin)?;
    let mut monotone = true;
    let mut chain = Vec::new();
    // resolutions 2^m + 1 give nested lattices, and both probe points are nodes of all of them
    for kind in [MetricKind::Induced, MetricKind::Klotz] {
        for p in [origin, z(0.5, 0.25)] {
            let mut prev = f64::INFINITY;
            for res in [65, 129, 257] {
                let d = distance_to_boundary(&fixtures::harmonic_graph(DiskDomain::unit(res)), kind, p)?;
                monotone &= d <= prev * 1.005;
                prev = d;
                chain.push(format!("{d:.5}"));
            }
        }
    }
    let pass = (flat - 1.0).abs() <= 0.03 && (gamma / oracle - 1.0).abs() <= 0.03 && monotone;
    Ok((pass, format!("flat d(0) = {flat:.5}; Gamma d(0) = {gamma:.5} vs {oracle:.5}; refinement {}", chain.join(" "))))
}

fn curvature_scan() -> Check {
    let dirs = fixtures::near_equator_directions();
    let coarse = curvature_estimate_scan(&fixtures::harmonic_graph(DiskDomain::unit(65)), &dirs)?;
    let fine = curvature_estimate_scan(&fixtures::harmonic_graph(DiskDomain::unit(129)), &dirs)?;
    let flat = curvature_estimate_scan(&fixtures::flat_plane(DiskDomain::unit(65)), &dirs)?;
    let change = (fine.sup_induced - coarse.sup_induced).abs() / coarse.sup_induced;
    let pass = coarse.sup_induced.is_finite() && coarse.sup_induced > 0.0 && change < 0.1 && flat.sup_induced == 0.0;
    Ok((
        pass,
        format!(
            "C = {:.5} at res 65, {:.5} at res 129 (change {:.2}%); Gamma side {:.5}; flat {}",
            coarse.sup_induced,
            fine.sup_induced,
            100.0 * change,
            fine.sup_klotz,
            flat.sup_induced
        ),
    ))
}
