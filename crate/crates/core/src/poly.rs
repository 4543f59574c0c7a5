//! Dense univariate polynomials with complex coefficients.
//!
//! Coefficients are stored in ascending powers of `z`. The stored form is
//! canonical: the highest stored coefficient is nonzero, and the zero
//! polynomial has no coefficients at all.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::DiskDomain;
use crate::error::{Error, Result};

/// Relative threshold below which Euclidean remainders are treated as zero.
pub const GCD_REL_TOL: f64 = 1e-10;
/// Roots closer than this are merged into one root of higher multiplicity.
pub const ROOT_CLUSTER_TOL: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![ZERO, ONE])
    }

    pub fn monomial(c: Complex64, power: usize) -> Self {
        let mut coeffs = vec![ZERO; power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    /// Monic polynomial with the given roots (repeated entries give multiplicity).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::constant(ONE), |acc, &r| &acc * &Self::new(vec![-r, ONE]))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Largest coefficient modulus.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at `base`.
    pub fn antiderivative(&self, base: Complex64) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(i, &c)| c / (i as f64 + 1.0)));
        let p = Self::new(coeffs);
        let shift = p.eval(base);
        &p - &Self::constant(shift)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(&lead) => self.scale(lead.inv()),
            None => Self::zero(),
        }
    }

    /// Drops top coefficients with modulus at most `tol`.
    pub fn trim(&self, tol: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= tol) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Drops top coefficients that are negligible relative to the largest one.
    pub fn trim_relative(&self, rel: f64) -> Self {
        self.trim(rel * self.max_norm())
    }

    /// Polynomial long division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(n) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n < d {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = divisor.leading().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; n - d + 1];
        for i in (0..=n - d).rev() {
            let c = rem[i + d] * lead_inv;
            quot[i] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
            rem[i + d] = ZERO;
        }
        rem.truncate(d);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// `p(a z + b)`.
    pub fn compose_affine(&self, a: Complex64, b: Complex64) -> Self {
        let lin = Self::new(vec![b, a]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, &c| &(&acc * &lin) + &Self::constant(c))
    }

    /// Order of vanishing at `z0`: the number of leading Taylor coefficients at
    /// `z0` that are negligible relative to the largest one.
    pub fn order_at(&self, z0: Complex64, rel_tol: f64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.compose_affine(ONE, z0);
        let tol = rel_tol * shifted.max_norm();
        shifted.coeffs.iter().position(|c| c.norm() > tol).unwrap_or(0)
    }

    /// Newton steps toward a simple root of `self`.
    fn polish(&self, mut z: Complex64, steps: usize) -> Complex64 {
        let dp = self.derivative();
        for _ in 0..steps {
            let d = dp.eval(z);
            if d == ZERO {
                break;
            }
            let step = self.eval(z) / d;
            if !step.is_finite() {
                break;
            }
            z -= step;
        }
        z
    }

    /// Eigenvalues of the companion matrix, each refined by Newton.
    fn simple_roots(&self) -> Vec<Complex64> {
        let m = self.monic();
        self.eigen_roots().into_iter().map(|r| m.polish(r, 2)).collect()
    }

    /// Raw eigenvalues of the companion matrix.
    fn eigen_roots(&self) -> Vec<Complex64> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        match d {
            0 => Vec::new(),
            1 => vec![-self.coeffs[0] / self.coeffs[1]],
            _ => {
                let m = self.monic();
                let comp = DMatrix::<Complex64>::from_fn(d, d, |i, j| {
                    if j == d - 1 {
                        -m.coeffs[i]
                    } else if i == j + 1 {
                        ONE
                    } else {
                        ZERO
                    }
                });
                let eig = comp.schur().eigenvalues().expect("complex Schur form is triangular");
                eig.iter().copied().collect()
            }
        }
    }

    /// Square-free decomposition `p = c * prod_i f_i^i` by Yun's algorithm.
    /// Returns `(multiplicity, factor)` pairs with nonconstant factors.
    pub fn squarefree_factors(&self) -> Result<Vec<(usize, Self)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.monic();
        let dp = p.derivative();
        if dp.is_zero() {
            return Ok(Vec::new());
        }
        let a0 = gcd(&p, &dp)?;
        let mut b = p.div_rem(&a0)?.0;
        let c = dp.div_rem(&a0)?.0;
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = if d.trim_relative(GCD_REL_TOL).is_zero() { b.monic() } else { gcd(&b, &d)? };
            if a.degree().unwrap_or(0) > 0 {
                out.push((i, a.clone()));
            }
            b = b.div_rem(&a)?.0;
            let c = d.div_rem(&a)?.0;
            d = &c - &b.derivative();
            i += 1;
            if i > self.coeffs.len() {
                break;
            }
        }
        Ok(out)
    }

    /// All complex roots with multiplicities.
    pub fn roots(&self) -> Result<Vec<(Complex64, usize)>> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Ok(Vec::new());
        }
        let factors = self.squarefree_factors()?;
        let counted: usize = factors.iter().map(|(m, f)| m * f.degree().unwrap_or(0)).sum();
        let mut raw: Vec<(Complex64, usize)> = if counted == deg {
            factors.iter().flat_map(|(m, f)| f.simple_roots().into_iter().map(move |r| (r, *m))).collect()
        } else {
            // the numerical gcd lost track of the factorization
            cluster_by_order(self, self.eigen_roots())
        };
        Ok(cluster_roots(&mut raw))
    }

    /// Roots in the closed disk of `domain`, with multiplicities.
    pub fn roots_in_domain(&self, domain: &DiskDomain) -> Result<Vec<(Complex64, usize)>> {
        Ok(self.roots()?.into_iter().filter(|(r, _)| domain.contains_closed(*r)).collect())
    }
}

/// Radius within which eigenvalues may belong to one multiple root. A root of
/// multiplicity `m` scatters by roughly `eps^(1/m)`.
const SPREAD_TOL: f64 = 1e-3;
/// Taylor coefficients below this fraction of the largest count as zero when
/// confirming a multiplicity.
const ORDER_REL_TOL: f64 = 1e-10;

/// Groups eigenvalues scattered around multiple roots. A group of `m` nearby
/// values is merged only when the polynomial vanishes to order `m` at their
/// mean, so distinct close roots stay apart.
fn cluster_by_order(p: &ComplexPoly, mut raw: Vec<Complex64>) -> Vec<(Complex64, usize)> {
    let mut out = Vec::new();
    while let Some(seed) = raw.pop() {
        raw.sort_by(|a, b| (a - seed).norm().total_cmp(&(b - seed).norm()));
        let near = raw.iter().take_while(|r| (*r - seed).norm() <= SPREAD_TOL * (1.0 + seed.norm())).count();
        let merged = (1..=near).rev().find_map(|m| {
            let centre = (seed + raw[..m].iter().sum::<Complex64>()) / (m + 1) as f64;
            (p.order_at(centre, ORDER_REL_TOL) > m).then_some((m, centre))
        });
        match merged {
            Some((m, centre)) => {
                out.push((centre, m + 1));
                raw.drain(..m);
            }
            None => out.push((p.polish(seed, 2), 1)),
        }
    }
    out
}

fn cluster_roots(raw: &mut [(Complex64, usize)]) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    raw.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    for &(r, m) in raw.iter() {
        match out.iter_mut().find(|(c, _)| (c - r).norm() <= ROOT_CLUSTER_TOL * (1.0 + r.norm())) {
            Some(entry) => {
                let total = entry.1 + m;
                entry.0 = (entry.0 * entry.1 as f64 + r * m as f64) / total as f64;
                entry.1 = total;
            }
            None => out.push((r, m)),
        }
    }
    out
}

/// Monic greatest common divisor by the Euclidean algorithm with relative
/// zero tests on each remainder.
pub fn gcd(p: &ComplexPoly, q: &ComplexPoly) -> Result<ComplexPoly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::BothZero);
    }
    let normalize = |x: &ComplexPoly| {
        let n = x.max_norm();
        if n == 0.0 {
            ComplexPoly::zero()
        } else {
            x.scale(Complex64::new(1.0 / n, 0.0))
        }
    };
    let (mut a, mut b) = (normalize(p), normalize(q));
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        // a and b both have unit max-norm, so this is relative to the inputs
        let r = r.trim(GCD_REL_TOL);
        a = b;
        b = normalize(&r);
    }
    Ok(a.monic())
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexPoly{:?}", self.coeffs)
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).copied().unwrap_or(ZERO) + rhs.coeffs.get(i).copied().unwrap_or(ZERO))
                .collect(),
        )
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        self + &(-rhs)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_evaluation() {
        let p = ComplexPoly::from_real(&[1.0, 2.0]);
        assert_eq!(p.eval(c(0.0, 1.0)), c(1.0, 2.0));
        let sq = ComplexPoly::from_real(&[0.0, 0.0, 1.0]);
        assert!((sq.eval(c(1.0, 1.0)) - c(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(ComplexPoly::zero().eval(c(3.0, -1.0)), ZERO);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            ComplexPoly::from_real(&[0.0, 0.0, 0.0, 1.0]).derivative(),
            ComplexPoly::from_real(&[0.0, 0.0, 3.0])
        );
        assert!(ComplexPoly::from_real(&[5.0]).derivative().is_zero());
        assert_eq!(ComplexPoly::from_real(&[1.0, 2.0, 1.0]).derivative(), ComplexPoly::from_real(&[2.0, 2.0]));
    }

    #[test]
    fn canonical_form_trims_zeros() {
        let p = ComplexPoly::from_real(&[1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(ComplexPoly::from_real(&[0.0]).degree(), None);
    }

    #[test]
    fn gcd_examples() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        let q = ComplexPoly::from_real(&[-1.0, 1.0]);
        let g = gcd(&p, &q).unwrap();
        assert!((&g - &q).max_norm() < 1e-12);

        let g = gcd(&ComplexPoly::z(), &ComplexPoly::from_real(&[1.0, 1.0])).unwrap();
        assert!((&g - &ComplexPoly::from_real(&[1.0])).max_norm() < 1e-12);

        let i = c(0.0, 1.0);
        let p = ComplexPoly::from_roots(&[i, i, c(-2.0, 0.0)]);
        let q = ComplexPoly::from_roots(&[i, c(3.0, 0.0)]);
        let g = gcd(&p, &q).unwrap();
        assert!((&g - &ComplexPoly::from_roots(&[i])).max_norm() < 1e-12);

        assert_eq!(gcd(&ComplexPoly::zero(), &ComplexPoly::zero()), Err(Error::BothZero));
    }

    #[test]
    fn gcd_with_zero_operand_is_monic_other() {
        let q = ComplexPoly::from_real(&[2.0, 4.0]);
        let g = gcd(&ComplexPoly::zero(), &q).unwrap();
        assert!((&g - &ComplexPoly::from_real(&[0.5, 1.0])).max_norm() < 1e-15);
    }

    #[test]
    fn roots_in_unit_disk() {
        let d = DiskDomain::unit(16);
        let p = ComplexPoly::from_real(&[-0.25, 0.0, 1.0]);
        let mut r = p.roots_in_domain(&d).unwrap();
        r.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - c(-0.5, 0.0)).norm() < 1e-12 && r[0].1 == 1);
        assert!((r[1].0 - c(0.5, 0.0)).norm() < 1e-12 && r[1].1 == 1);

        let half_i = c(0.0, 0.5);
        let p = ComplexPoly::from_roots(&[half_i, half_i, half_i]);
        let r = p.roots_in_domain(&d).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 3);
        assert!((r[0].0 - half_i).norm() < 1e-10);

        let p = ComplexPoly::from_real(&[4.0, 0.0, 1.0]);
        assert!(p.roots_in_domain(&d).unwrap().is_empty());

        assert_eq!(ComplexPoly::zero().roots_in_domain(&d), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn affine_composition() {
        let p = ComplexPoly::from_real(&[1.0, 0.0, 1.0]);
        let q = p.compose_affine(c(2.0, 0.0), c(1.0, 0.0));
        // (2z+1)^2 + 1 = 4z^2 + 4z + 2
        assert_eq!(q, ComplexPoly::from_real(&[2.0, 4.0, 4.0]));
    }

    #[test]
    fn order_of_vanishing() {
        let p = ComplexPoly::from_roots(&[c(0.5, 0.0), c(0.5, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p.order_at(c(0.5, 0.0), 1e-10), 2);
        assert_eq!(p.order_at(c(0.0, 0.0), 1e-10), 0);
    }

    #[test]
    fn json_roundtrip_format() {
        let p = ComplexPoly::new(vec![c(1.0, -2.0), c(0.0, 3.0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1.0,-2.0],[0.0,3.0]]");
        let back: ComplexPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
