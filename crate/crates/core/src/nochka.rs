//! Nochka weights for hyperplanes in `n`-subgeneral position in `C^{k+1}`,
//! together with checkers for their defining properties and for the two
//! inequalities they are used for.
//!
//! With `u = 1/theta`, the identity `q - 2n + k - 1 = theta (sum w - k - 1)` is
//! linear in `(w, u)`. Every constraint on the weights is then linear, and the
//! weights come from one linear program that maximizes the smallest weight.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::derived::wronskian;
use crate::domain::DiskDomain;
use crate::error::{Error, Result};
use crate::gauss::Hyperplane;
use crate::linalg::{self, combinations};
use crate::poly::ComplexPoly;

/// Slack allowed when checking the weight properties.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NochkaWeights {
    pub omega: Vec<f64>,
    pub theta: f64,
    pub n: usize,
    pub k: usize,
}

impl NochkaWeights {
    pub fn q(&self) -> usize {
        self.omega.len()
    }

    /// Lower and upper ends of the admissible `theta` interval.
    pub fn theta_window(n: usize, k: usize) -> (f64, f64) {
        let k1 = (k + 1) as f64;
        ((n + 1) as f64 / k1, (2 * n + 1 - k) as f64 / k1)
    }
}

fn rank_of_subset(planes: &[Hyperplane], idx: &[usize]) -> usize {
    let rows: Vec<Vec<Complex64>> = idx.iter().map(|&i| planes[i].normal().to_vec()).collect();
    linalg::rank(&rows)
}

fn ambient_of(planes: &[Hyperplane]) -> Result<usize> {
    let dim = planes.first().map(Hyperplane::ambient_dim).ok_or(Error::TooFew { needed: 1, got: 0 })?;
    if let Some(p) = planes.iter().find(|p| p.ambient_dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.ambient_dim() });
    }
    Ok(dim)
}

/// Every subset of size at most `n + 1` whose normals are linearly dependent,
/// paired with its rank.
fn dependent_subsets(planes: &[Hyperplane], n: usize) -> Vec<(Vec<usize>, usize)> {
    let q = planes.len();
    (2..=(n + 1).min(q))
        .flat_map(|size| combinations(q, size))
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|idx| {
            let r = rank_of_subset(planes, &idx);
            (r < idx.len()).then_some((idx, r))
        })
        .collect()
}

/// Checks that every `n + 1` of the normals span `C^{k+1}`.
pub fn check_subgeneral_position(planes: &[Hyperplane], n: usize) -> Result<()> {
    let dim = ambient_of(planes)?;
    let size = (n + 1).min(planes.len());
    let bad = combinations(planes.len(), size).into_par_iter().find_first(|idx| rank_of_subset(planes, idx) < dim);
    match bad {
        Some(subset) => Err(Error::NotSubgeneralPosition { n, subset }),
        None => Ok(()),
    }
}

pub fn compute_nochka_weights(planes: &[Hyperplane], n: usize) -> Result<NochkaWeights> {
    let dim = ambient_of(planes)?;
    let k = dim - 1;
    let q = planes.len();
    if n < k {
        return Err(Error::InvalidInput(format!("subgeneral index n = {n} is below k = {k}")));
    }
    if q <= 2 * n + 1 - k {
        return Err(Error::TooFewPlanes { q, n, k });
    }
    check_subgeneral_position(planes, n)?;

    let c = (q + k) as f64 - (2 * n + 1) as f64;
    let (theta_lo, theta_hi) = NochkaWeights::theta_window(n, k);
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let t = lp.add_var(1.0, (0.0, 1.0));
    let u = lp.add_var(0.0, (1.0 / theta_hi, 1.0 / theta_lo));
    let w: Vec<_> = (0..q).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    for &wj in &w {
        lp.add_constraint([(wj, 1.0), (t, -1.0)], ComparisonOp::Ge, 0.0);
        lp.add_constraint([(wj, 1.0), (u, -1.0)], ComparisonOp::Le, 0.0);
    }
    let mut sum: Vec<_> = w.iter().map(|&wj| (wj, 1.0)).collect();
    sum.push((u, -c));
    lp.add_constraint(sum, ComparisonOp::Eq, (k + 1) as f64);
    for (idx, r) in dependent_subsets(planes, n) {
        lp.add_constraint(idx.iter().map(|&j| (w[j], 1.0)), ComparisonOp::Le, r as f64);
    }
    let sol = lp.solve().map_err(|e| Error::Infeasible(format!("weight program: {e}")))?;
    if sol[t] <= CHECK_TOL {
        return Err(Error::Infeasible("no strictly positive weights".into()));
    }
    let omega: Vec<f64> = w.iter().map(|&wj| sol[wj].clamp(0.0, 1.0)).collect();
    // take theta from the identity so that it holds to rounding error
    let theta = c / (omega.iter().sum::<f64>() - (k + 1) as f64);
    Ok(NochkaWeights { omega, theta, n, k })
}

#[derive(Debug, Clone, Serialize)]
pub struct BulletResult {
    pub bullet: u8,
    pub pass: bool,
    /// Largest violation found, zero when the bullet holds exactly.
    pub worst_violation: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NochkaReport {
    pub bullets: Vec<BulletResult>,
    /// Subsets failing bullet 4.
    pub failing_subsets: Vec<Vec<usize>>,
}

impl NochkaReport {
    pub fn all_pass(&self) -> bool {
        self.bullets.iter().all(|b| b.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bullet,pass,worst_violation,detail\n");
        for b in &self.bullets {
            out.push_str(&format!("{},{},{:e},\"{}\"\n", b.bullet, b.pass, b.worst_violation, b.detail));
        }
        out
    }
}

pub fn verify_nochka_properties(w: &NochkaWeights, planes: &[Hyperplane]) -> NochkaReport {
    let q = w.q();
    let (n, k, theta) = (w.n, w.k, w.theta);
    let mut bullets = Vec::with_capacity(4);

    let b1 = w
        .omega
        .iter()
        .map(|&o| if o <= 0.0 { 1.0 - o * theta } else { (o * theta - 1.0).max(0.0) })
        .fold(0.0, f64::max);
    let positive = w.omega.iter().all(|&o| o > 0.0);
    bullets.push(BulletResult {
        bullet: 1,
        pass: positive && b1 <= CHECK_TOL,
        worst_violation: b1,
        detail: "0 < omega*theta <= 1".into(),
    });

    let lhs = q as f64 + k as f64 - 1.0 - 2.0 * n as f64;
    let rhs = theta * (w.omega.iter().sum::<f64>() - k as f64 - 1.0);
    let b2 = (lhs - rhs).abs();
    bullets.push(BulletResult {
        bullet: 2,
        pass: b2 <= CHECK_TOL,
        worst_violation: b2,
        detail: format!("q-2n+k-1 = {lhs}, theta*(sum-k-1) = {rhs}"),
    });

    let (lo, hi) = NochkaWeights::theta_window(n, k);
    let b3 = (lo - theta).max(theta - hi).max(0.0);
    bullets.push(BulletResult {
        bullet: 3,
        pass: b3 <= CHECK_TOL,
        worst_violation: b3,
        detail: format!("{lo} <= theta = {theta} <= {hi}"),
    });

    let dims_ok = planes.len() == q;
    let subsets: Vec<Vec<usize>> = (1..=(n + 1).min(q)).flat_map(|size| combinations(q, size)).collect();
    let violations: Vec<(Vec<usize>, f64)> = if dims_ok {
        subsets
            .into_par_iter()
            .filter_map(|idx| {
                let s: f64 = idx.iter().map(|&j| w.omega[j]).sum();
                let excess = s - rank_of_subset(planes, &idx) as f64;
                (excess > CHECK_TOL).then_some((idx, excess))
            })
            .collect()
    } else {
        Vec::new()
    };
    let b4 = violations.iter().map(|v| v.1).fold(0.0, f64::max);
    bullets.push(BulletResult {
        bullet: 4,
        pass: dims_ok && violations.is_empty(),
        worst_violation: b4,
        detail: if dims_ok {
            format!("{} subsets exceed their span dimension", violations.len())
        } else {
            format!("{} weights for {} hyperplanes", q, planes.len())
        },
    });

    NochkaReport { bullets, failing_subsets: violations.into_iter().map(|v| v.0).collect() }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductReport {
    pub subset: Vec<usize>,
    pub witness: Vec<usize>,
    /// `sum_{j in B} omega_j log E_j`.
    pub log_lhs: f64,
    /// `sum_{j in B_1} log E_j`.
    pub log_rhs: f64,
}

/// Searches the bases `B_1` of `span{a_j : j in B}` drawn from `B` for one with
/// `prod_B E_j^{omega_j} <= prod_{B_1} E_j`, returning the best one.
pub fn product_inequality_check(
    w: &NochkaWeights,
    planes: &[Hyperplane],
    e: &[f64],
    subset: &[usize],
) -> Result<ProductReport> {
    if subset.is_empty() || subset.len() > w.n + 1 {
        return Err(Error::InvalidInput(format!("subset size {} outside 1..={}", subset.len(), w.n + 1)));
    }
    if e.len() != planes.len() || w.q() != planes.len() {
        return Err(Error::DimensionMismatch { expected: planes.len(), got: e.len().min(w.q()) });
    }
    if let Some(&bad) = subset.iter().find(|&&j| j >= planes.len() || !(e[j] > 1.0)) {
        return Err(Error::InvalidInput(format!("index {bad} is out of range or has E <= 1")));
    }
    let log_lhs: f64 = subset.iter().map(|&j| w.omega[j] * e[j].ln()).sum();
    let r = rank_of_subset(planes, subset);
    let best = combinations(subset.len(), r)
        .into_iter()
        .map(|pick| pick.into_iter().map(|p| subset[p]).collect::<Vec<usize>>())
        .filter(|b1| rank_of_subset(planes, b1) == r)
        .map(|b1| {
            let s: f64 = b1.iter().map(|&j| e[j].ln()).sum();
            (b1, s)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1));
    match best {
        Some((witness, log_rhs)) if log_lhs <= log_rhs + CHECK_TOL * log_rhs.abs().max(1.0) => {
            Ok(ProductReport { subset: subset.to_vec(), witness, log_lhs, log_rhs })
        }
        _ => Err(Error::NoWitness(subset.to_vec())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisorPoint {
    pub z: [f64; 2],
    pub nu_w: usize,
    pub nu: Vec<usize>,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisorReport {
    pub points: Vec<DivisorPoint>,
    pub min_margin: f64,
    pub pass: bool,
}

/// Clusters closer than this are treated as one zero.
const ZERO_MERGE_TOL: f64 = 1e-6;

/// At every zero `z0` in the domain of some `<F, a_j>`, checks
/// `nu_W - sum w_j nu_j + sum w_j min(nu_j, k) >= 0`.
pub fn divisor_inequality_check(
    curve: &[ComplexPoly],
    planes: &[Hyperplane],
    w: &NochkaWeights,
    domain: &DiskDomain,
) -> Result<DivisorReport> {
    let dim = ambient_of(planes)?;
    if curve.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: curve.len() });
    }
    if w.q() != planes.len() {
        return Err(Error::DimensionMismatch { expected: planes.len(), got: w.q() });
    }
    let k = dim - 1;
    let wr = wronskian(curve);
    if wr.trim_relative(1e-12).is_zero() {
        return Err(Error::DegenerateCurve);
    }
    let zeros: Vec<Vec<(Complex64, usize)>> = planes
        .iter()
        .map(|p| {
            let g = p.pairing_poly(curve);
            if g.is_zero() {
                return Err(Error::DegenerateCurve);
            }
            g.roots_in_domain(domain)
        })
        .collect::<Result<_>>()?;

    let mut sites: Vec<Complex64> = Vec::new();
    for &(z, _) in zeros.iter().flatten() {
        if !sites.iter().any(|s| (s - z).norm() < ZERO_MERGE_TOL) {
            sites.push(z);
        }
    }
    let points: Vec<DivisorPoint> = sites
        .into_iter()
        .map(|z0| {
            let nu: Vec<usize> = zeros
                .iter()
                .map(|list| list.iter().filter(|(z, _)| (z - z0).norm() < ZERO_MERGE_TOL).map(|r| r.1).sum())
                .collect();
            let nu_w = wr.order_at(z0, 1e-8);
            let margin = nu_w as f64 - nu.iter().zip(&w.omega).map(|(&v, &o)| o * (v - v.min(k)) as f64).sum::<f64>();
            DivisorPoint { z: [z0.re, z0.im], nu_w, nu, margin }
        })
        .collect();
    let min_margin = points.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
    Ok(DivisorReport { pass: min_margin >= -CHECK_TOL, points, min_margin })
}
