//! Wronskians and the derived curves `F_s` of a polynomial curve in `P^k`.
//!
//! A [`DerivedCurve`] first divides out common zeros, then drops linearly
//! dependent components so that the remaining basis is nondegenerate in
//! `P^k`. Hyperplanes of the ambient space are restricted to that basis before
//! any contracted norm is evaluated.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::domain::DiskDomain;
use crate::error::{Error, Result};
use crate::gauss::{reduced_representation, Hyperplane};
use crate::linalg::{self, combinations};
use crate::poly::ComplexPoly;

/// Relative tolerance for comparing polynomial identities coefficientwise.
pub const IDENTITY_REL_TOL: f64 = 1e-10;

fn coefficient_matrix(phi: &[ComplexPoly]) -> Vec<Vec<Complex64>> {
    let width = phi.iter().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
    phi.iter()
        .map(|p| {
            let mut row = p.coeffs().to_vec();
            row.resize(width, Complex64::new(0.0, 0.0));
            row
        })
        .collect()
}

/// `r - 1` where `r` is the rank of the coefficient matrix.
pub fn nondegeneracy_rank(phi: &[ComplexPoly]) -> Result<usize> {
    if phi.iter().all(ComplexPoly::is_zero) {
        return Err(Error::AllZero);
    }
    Ok(linalg::rank(&coefficient_matrix(phi)) - 1)
}

/// Determinants of the derivative matrix for every subset of `fs`, indexed by
/// bitmask. The subset keeps the original order of `fs`.
fn wronskian_table(fs: &[ComplexPoly]) -> Vec<ComplexPoly> {
    let m = fs.len();
    let derivs: Vec<Vec<ComplexPoly>> = (0..m).map(|r| fs.iter().map(|f| f.nth_derivative(r)).collect()).collect();
    let mut table = vec![ComplexPoly::zero(); 1 << m];
    table[0] = ComplexPoly::constant(Complex64::new(1.0, 0.0));
    for mask in 1usize..(1 << m) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = ComplexPoly::zero();
        // expand along the last row; column position of c within the mask
        for (pos, c) in (0..m).filter(|c| mask & (1 << c) != 0).enumerate() {
            let minor = &table[mask & !(1 << c)];
            if minor.is_zero() || derivs[row][c].is_zero() {
                continue;
            }
            let term = &derivs[row][c] * minor;
            acc = if (row + pos).is_multiple_of(2) { &acc + &term } else { &acc - &term };
        }
        table[mask] = acc;
    }
    table
}

/// `W(f_0, ..., f_s)`, expanded symbolically.
pub fn wronskian(fs: &[ComplexPoly]) -> ComplexPoly {
    if fs.is_empty() {
        return ComplexPoly::constant(Complex64::new(1.0, 0.0));
    }
    wronskian_table(fs).pop().expect("nonempty table")
}

/// Outcome of comparing `W_z` with `W_w(w(z)) a^{s(s+1)/2}` for `w = a z + b`.
#[derive(Debug, Clone, Serialize)]
pub struct ReparamReport {
    pub lhs: ComplexPoly,
    pub rhs: ComplexPoly,
    pub max_coeff_diff: f64,
    pub holds: bool,
}

pub fn wronskian_reparam_check(fs: &[ComplexPoly], a: Complex64, b: Complex64) -> Result<ReparamReport> {
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("reparametrization needs a != 0".into()));
    }
    let lhs = wronskian(fs);
    // f(z) = g(w) with g(w) = f((w - b)/a)
    let inv = a.inv();
    let gs: Vec<ComplexPoly> = fs.iter().map(|f| f.compose_affine(inv, -b * inv)).collect();
    let s = fs.len().saturating_sub(1);
    let rhs = wronskian(&gs).compose_affine(a, b).scale(a.powu((s * (s + 1) / 2) as u32));
    let max_coeff_diff = (&lhs - &rhs).max_norm();
    let scale = lhs.max_norm().max(rhs.max_norm()).max(f64::MIN_POSITIVE);
    Ok(ReparamReport { holds: max_coeff_diff <= IDENTITY_REL_TOL * scale, lhs, rhs, max_coeff_diff })
}

/// The Wronskians of one stage, keyed by sorted index tuples.
#[derive(Debug, Clone, Serialize)]
pub struct DerivedCurveData {
    pub s: usize,
    pub wronskians: BTreeMap<Vec<usize>, ComplexPoly>,
}

/// A reduced, linearly nondegenerate curve in `P^k` with all its Wronskians.
#[derive(Debug, Clone)]
pub struct DerivedCurve {
    basis: Vec<ComplexPoly>,
    /// `phi_i = sum_m expansion[i][m] basis_m` for every original component.
    expansion: Vec<Vec<Complex64>>,
    table: Vec<ComplexPoly>,
}

impl DerivedCurve {
    pub fn new(phi: &[ComplexPoly]) -> Result<Self> {
        let reduced = reduced_representation(phi)?;
        let rows = coefficient_matrix(&reduced);
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..rows.len() {
            let mut trial: Vec<Vec<Complex64>> = chosen.iter().map(|&j| rows[j].clone()).collect();
            trial.push(rows[i].clone());
            if linalg::rank(&trial) == trial.len() {
                chosen.push(i);
            }
        }
        let width = rows[0].len();
        let b = DMatrix::from_fn(width, chosen.len(), |r, c| rows[chosen[c]][r]);
        let svd = b.svd(true, true);
        let expansion = rows
            .iter()
            .map(|row| {
                let rhs = DVector::from_column_slice(row);
                let x = svd.solve(&rhs, 1e-12).map_err(|e| Error::InvalidInput(e.to_string()))?;
                Ok(x.iter().copied().collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        let basis: Vec<ComplexPoly> = chosen.iter().map(|&i| reduced[i].clone()).collect();
        let table = wronskian_table(&basis);
        Ok(Self { basis, expansion, table })
    }

    /// Projective dimension of the image span.
    pub fn k(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn basis(&self) -> &[ComplexPoly] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.expansion.len()
    }

    fn check_stage(&self, s: usize) -> Result<()> {
        if s > self.k() {
            return Err(Error::StageOutOfRange { stage: s, max: self.k() });
        }
        Ok(())
    }

    fn mask(idx: &[usize]) -> usize {
        idx.iter().fold(0, |m, &i| m | (1 << i))
    }

    /// `W(f_{i_0}, ..., f_{i_s})` for a sorted index tuple of the basis.
    pub fn wronskian_of(&self, idx: &[usize]) -> &ComplexPoly {
        &self.table[Self::mask(idx)]
    }

    pub fn stage_data(&self, s: usize) -> Result<DerivedCurveData> {
        self.check_stage(s)?;
        let wronskians = combinations(self.basis.len(), s + 1)
            .into_iter()
            .map(|idx| {
                let w = self.wronskian_of(&idx).clone();
                (idx, w)
            })
            .collect();
        Ok(DerivedCurveData { s, wronskians })
    }

    /// Restriction of an ambient hyperplane to the span of the basis.
    pub fn restrict(&self, plane: &Hyperplane) -> Result<Hyperplane> {
        if plane.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: plane.ambient_dim() });
        }
        let c = plane.coefficients();
        let restricted: Vec<Complex64> =
            (0..self.basis.len()).map(|m| c.iter().zip(&self.expansion).map(|(ci, row)| ci * row[m]).sum()).collect();
        if linalg::norm(&restricted) <= 1e-12 {
            return Err(Error::DegenerateCurve);
        }
        Hyperplane::from_linear(&restricted)
    }

    /// `|F_s(z)|^2`: sum of `|W|^2` over all `(s+1)`-subsets.
    pub fn derived_norm_sq(&self, s: usize, z: Complex64) -> Result<f64> {
        self.check_stage(s)?;
        Ok(self.stage_norm_sq(s, z))
    }

    fn stage_norm_sq(&self, s: usize, z: Complex64) -> f64 {
        combinations(self.basis.len(), s + 1).iter().map(|idx| self.wronskian_of(idx).eval(z).norm_sqr()).sum()
    }

    /// `|F_s(H)|^2`, the norm of the interior product of `F_s` with the
    /// restricted unit normal.
    pub fn contracted_norm_sq(&self, s: usize, plane: &Hyperplane, z: Complex64) -> Result<f64> {
        self.check_stage(s)?;
        let restricted = self.restrict(plane)?;
        Ok(self.contracted_in_basis(s, &restricted, z))
    }

    /// As [`Self::contracted_norm_sq`] for a hyperplane already expressed in the
    /// basis coordinates (see [`Self::restrict`]). `s` must not exceed `k`.
    pub fn contracted_in_basis(&self, s: usize, restricted: &Hyperplane, z: Complex64) -> f64 {
        let a = restricted.coefficients();
        let m = self.basis.len();
        combinations(m, s)
            .iter()
            .map(|idx| {
                let mut inner = Complex64::new(0.0, 0.0);
                for (t, w) in self.contraction_terms(idx) {
                    inner += a[t] * w * self.wronskian_of(&w_index(idx, t)).eval(z);
                }
                inner.norm_sqr()
            })
            .sum()
    }

    /// `(t, sign)` pairs such that `W(f_t, f_I) = sign * W(sorted(I + t))`.
    fn contraction_terms(&self, idx: &[usize]) -> Vec<(usize, f64)> {
        (0..self.basis.len())
            .filter(|t| !idx.contains(t))
            .map(|t| {
                let before = idx.iter().filter(|&&i| i < t).count();
                (t, if before % 2 == 0 { 1.0 } else { -1.0 })
            })
            .collect()
    }

    /// Components of `F_s(H)` as polynomials, one per `s`-subset in
    /// lexicographic order, for a hyperplane in basis coordinates.
    pub fn contracted_components(&self, s: usize, restricted: &Hyperplane) -> Result<Vec<ComplexPoly>> {
        self.check_stage(s)?;
        let a = restricted.coefficients();
        Ok(combinations(self.basis.len(), s)
            .iter()
            .map(|idx| {
                self.contraction_terms(idx).into_iter().fold(ComplexPoly::zero(), |acc, (t, sign)| {
                    &acc + &self.wronskian_of(&w_index(idx, t)).scale(a[t] * sign)
                })
            })
            .collect())
    }

    /// `phi_s(H)(z) = |F_s(H)|^2 / |F_s|^2`.
    pub fn phi_s(&self, s: usize, plane: &Hyperplane, z: Complex64) -> Result<f64> {
        let full = self.derived_norm_sq(s, z)?;
        if full == 0.0 {
            return Err(Error::IndeterminatePoint(z));
        }
        Ok(self.contracted_norm_sq(s, plane, z)? / full)
    }

    /// Compares the five-point Laplacian `(1/4) Lap log |F_s|^2` with
    /// `|F_{s-1}|^2 |F_{s+1}|^2 / |F_s|^4` at the grid points of `domain`.
    pub fn fs_laplacian_identity_check(&self, s: usize, domain: &DiskDomain, step: f64) -> Result<LaplacianReport> {
        if self.k() == 0 || s + 1 > self.k() {
            return Err(Error::StageOutOfRange { stage: s, max: self.k().saturating_sub(1) });
        }
        let log_norm = |z: Complex64| self.stage_norm_sq(s, z).ln();
        let mut max_rel_error: f64 = 0.0;
        let mut points = 0;
        for p in domain.grid() {
            let z = p.z;
            let mid = self.stage_norm_sq(s, z);
            if mid <= 1e-12 {
                continue;
            }
            let lap = (log_norm(z + step)
                + log_norm(z - step)
                + log_norm(z + Complex64::new(0.0, step))
                + log_norm(z - Complex64::new(0.0, step))
                - 4.0 * mid.ln())
                / (step * step);
            let lower = if s == 0 { 1.0 } else { self.stage_norm_sq(s - 1, z) };
            let analytic = lower * self.stage_norm_sq(s + 1, z) / (mid * mid);
            let rel = (0.25 * lap - analytic).abs() / analytic.abs().max(1e-300);
            max_rel_error = max_rel_error.max(rel);
            points += 1;
        }
        Ok(LaplacianReport { s, step, points, max_rel_error })
    }
}

fn w_index(idx: &[usize], t: usize) -> Vec<usize> {
    let mut full = idx.to_vec();
    full.push(t);
    full.sort_unstable();
    full
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LaplacianReport {
    pub s: usize,
    pub step: f64,
    pub points: usize,
    pub max_rel_error: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cp(v: &[f64]) -> ComplexPoly {
        ComplexPoly::from_real(v)
    }

    fn close(p: &ComplexPoly, q: &ComplexPoly) -> bool {
        (p - q).max_norm() < 1e-12
    }

    #[test]
    fn wronskian_examples() {
        assert!(close(&wronskian(&[cp(&[1.0]), cp(&[0.0, 1.0])]), &cp(&[1.0])));
        assert!(close(&wronskian(&[cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])]), &cp(&[0.0, 0.0, 1.0])));
        assert!(close(&wronskian(&[cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])]), &cp(&[2.0])));
        // swapping two functions flips the sign
        assert!(close(&wronskian(&[cp(&[0.0, 1.0]), cp(&[1.0])]), &cp(&[-1.0])));
    }

    #[test]
    fn wronskian_matches_numeric_determinant() {
        let fs = [cp(&[1.0, 2.0, 0.0, 1.0]), cp(&[0.0, -1.0, 3.0]), cp(&[2.0, 0.0, 0.0, 0.0, 1.0])];
        let w = wronskian(&fs);
        let z = c(0.3, -0.7);
        let rows: Vec<Vec<Complex64>> =
            (0..3).map(|r| fs.iter().map(|f| f.nth_derivative(r).eval(z)).collect()).collect();
        assert!((w.eval(z) - linalg::det(&rows)).norm() < 1e-10);
    }

    #[test]
    fn derived_norm_examples() {
        let line = DerivedCurve::new(&[cp(&[1.0]), cp(&[0.0, 1.0])]).unwrap();
        assert!((line.derived_norm_sq(1, c(0.7, 0.2)).unwrap() - 1.0).abs() < 1e-15);
        assert!((line.derived_norm_sq(0, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let conic = DerivedCurve::new(&[cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])]).unwrap();
        assert!((conic.derived_norm_sq(2, c(-1.3, 0.4)).unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(conic.derived_norm_sq(3, c(0.0, 0.0)), Err(Error::StageOutOfRange { .. })));
    }

    #[test]
    fn contracted_examples() {
        let conic = DerivedCurve::new(&[cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])]).unwrap();
        let h = Hyperplane::from_real(&[1.0, 0.0, 0.0]).unwrap();
        let z = c(0.4, -0.3);
        let got = conic.contracted_norm_sq(1, &h, z).unwrap();
        assert!((got - (1.0 + 4.0 * z.norm_sqr())).abs() < 1e-12);

        let line = DerivedCurve::new(&[cp(&[1.0]), cp(&[0.0, 1.0])]).unwrap();
        let h = Hyperplane::from_real(&[0.0, 1.0]).unwrap();
        assert!((line.contracted_norm_sq(0, &h, c(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((line.phi_s(0, &h, c(1.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        let h0 = Hyperplane::from_real(&[1.0, 0.0]).unwrap();
        assert!((line.phi_s(0, &h0, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let hz = Hyperplane::from_normal(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!((line.contracted_norm_sq(1, &hz, c(2.0, 1.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contracted_components_match_norm() {
        let conic = DerivedCurve::new(&[cp(&[1.0, 1.0]), cp(&[0.0, 1.0, 2.0]), cp(&[0.0, 0.0, 1.0, 1.0])]).unwrap();
        let h = conic.restrict(&Hyperplane::from_normal(&[c(0.3, 0.1), c(-1.0, 0.5), c(0.2, 0.0)]).unwrap()).unwrap();
        let z = c(0.2, -0.6);
        for s in 0..=2 {
            let comps = conic.contracted_components(s, &h).unwrap();
            let direct: f64 = comps.iter().map(|p| p.eval(z).norm_sqr()).sum();
            assert!((direct - conic.contracted_in_basis(s, &h, z)).abs() < 1e-10 * direct.max(1.0));
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(nondegeneracy_rank(&[cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])]).unwrap(), 2);
        assert_eq!(nondegeneracy_rank(&[cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[1.0, 1.0])]).unwrap(), 1);
        assert_eq!(nondegeneracy_rank(&[cp(&[1.0]), cp(&[2.0]), cp(&[3.0])]).unwrap(), 0);
        assert_eq!(nondegeneracy_rank(&[ComplexPoly::zero()]), Err(Error::AllZero));
    }

    #[test]
    fn degenerate_curve_is_reduced() {
        // (1, z, 1 + z) lives in a line of P^2
        let d = DerivedCurve::new(&[cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[1.0, 1.0])]).unwrap();
        assert_eq!(d.k(), 1);
        // z_0 + z_1 - z_2 contains the whole curve
        let h = Hyperplane::from_real(&[1.0, 1.0, -1.0]).unwrap();
        assert_eq!(d.restrict(&h), Err(Error::DegenerateCurve));
        // z_2 = 0 restricts to 1 + w_1 on the basis (1, z)
        let h = Hyperplane::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let r = d.restrict(&h).unwrap();
        let s = 0.5f64.sqrt();
        assert!((r.coefficients()[0] - c(s, 0.0)).norm() < 1e-12);
        assert!((r.coefficients()[1] - c(s, 0.0)).norm() < 1e-12);
        let z = c(0.3, 0.1);
        let expected = (z + 1.0).norm_sqr() / 2.0 / (1.0 + z.norm_sqr());
        assert!((d.phi_s(0, &h, z).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn reparametrization_examples() {
        let r = wronskian_reparam_check(&[cp(&[1.0]), cp(&[0.0, 1.0])], c(2.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(r.holds && close(&r.lhs, &cp(&[1.0])));
        let conic = [cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])];
        assert!(wronskian_reparam_check(&conic, c(2.0, 0.0), c(0.0, 0.0)).unwrap().holds);
        let r = wronskian_reparam_check(&conic, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(r.max_coeff_diff, 0.0);
        assert!(wronskian_reparam_check(&conic, c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn laplacian_identity_line() {
        let line = DerivedCurve::new(&[cp(&[1.0]), cp(&[0.0, 1.0])]).unwrap();
        let r = line.fs_laplacian_identity_check(0, &DiskDomain::unit(11), 1e-3).unwrap();
        assert!(r.points > 0 && r.max_rel_error < 1e-4, "{r:?}");
        assert!(line.fs_laplacian_identity_check(1, &DiskDomain::unit(11), 1e-3).is_err());
    }

    #[test]
    fn laplacian_identity_conic_at_origin() {
        let conic = DerivedCurve::new(&[cp(&[1.0]), cp(&[0.0, 1.0]), cp(&[0.0, 0.0, 1.0])]).unwrap();
        let d = DiskDomain::new(c(0.0, 0.0), 0.1, 3).unwrap();
        let r = conic.fs_laplacian_identity_check(1, &d, 1e-3).unwrap();
        assert!(r.max_rel_error < 1e-3, "{r:?}");
    }
}
