//! The generalized Gauss map `[phi_1 : ... : phi_n]`, hyperplane targets and
//! the comparison between the classical normal and the generalized map.
//!
//! Hyperplanes store a unit *Hermitian* normal `a`, and the pairing with a
//! curve is `<F, a> = sum F_k conj(a_k)`, so `|<F, a>| / |F|` is the
//! Fubini-Study distance. Hyperplanes written as linear equations
//! `c_0 z_0 + ... + c_k z_k = 0` are converted with [`Hyperplane::from_linear`],
//! which stores `a = conj(c) / |c|`. The JSON loader reads linear coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::DiskDomain;
use crate::error::{Error, Result};
use crate::linalg::{self, combinations};
use crate::poly::{gcd, ComplexPoly};
use crate::surface::HarmonicImmersion;

/// Determinant threshold for general-position and coplanarity tests.
pub const DET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct HyperplaneRepr {
    normal: Vec<[f64; 2]>,
}

impl Serialize for Hyperplane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HyperplaneRepr { normal: self.coefficients().iter().map(|c| [c.re, c.im]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hyperplane {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = HyperplaneRepr::deserialize(d)?;
        let coeffs: Vec<Complex64> = r.normal.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        Hyperplane::from_linear(&coeffs).map_err(serde::de::Error::custom)
    }
}

impl Hyperplane {
    /// Hyperplane with the given Hermitian normal (normalized here).
    pub fn from_normal(normal: &[Complex64]) -> Result<Self> {
        let n = linalg::norm(normal);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("hyperplane normal must be nonzero".into()));
        }
        Ok(Self { normal: normal.iter().map(|c| c / n).collect() })
    }

    /// Hyperplane `sum c_k z_k = 0`.
    pub fn from_linear(coeffs: &[Complex64]) -> Result<Self> {
        let conj: Vec<Complex64> = coeffs.iter().map(|c| c.conj()).collect();
        Self::from_normal(&conj)
    }

    pub fn from_real(normal: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = normal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_normal(&v)
    }

    pub fn normal(&self) -> &[Complex64] {
        &self.normal
    }

    /// Linear-equation coefficients `c = conj(a)`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.normal.iter().map(|c| c.conj()).collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.normal.len()
    }

    /// `<v, a>` for a point `v` of `C^n`.
    pub fn pair(&self, v: &[Complex64]) -> Complex64 {
        v.iter().zip(&self.normal).map(|(x, a)| x * a.conj()).sum()
    }

    /// `<F, a>` as a polynomial, with top coefficients that cancel to
    /// rounding level removed.
    pub fn pairing_poly(&self, curve: &[ComplexPoly]) -> ComplexPoly {
        let scale: f64 = curve.iter().map(ComplexPoly::max_norm).fold(0.0, f64::max);
        curve
            .iter()
            .zip(&self.normal)
            .fold(ComplexPoly::zero(), |acc, (f, a)| &acc + &f.scale(a.conj()))
            .trim(1e-13 * scale)
    }
}

/// A unit vector of `R^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction([f64; 3]);

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Direction::new(v)
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        d.0
    }
}

impl Direction {
    /// Normalizes `v`; zero vectors are rejected.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("direction must be nonzero".into()));
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, v: &[f64; 3]) -> f64 {
        self.0[0] * v[0] + self.0[1] * v[1] + self.0[2] * v[2]
    }
}

/// Divides all components by their common polynomial factor.
pub fn reduced_representation(phi: &[ComplexPoly]) -> Result<Vec<ComplexPoly>> {
    let nonzero: Vec<&ComplexPoly> = phi.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return Err(Error::AllZero);
    };
    let mut g = first.monic();
    for p in &nonzero[1..] {
        if g.degree() == Some(0) {
            break;
        }
        g = gcd(&g, p)?;
    }
    if g.degree() == Some(0) {
        return Ok(phi.to_vec());
    }
    phi.iter().map(|p| Ok(p.div_rem(&g)?.0)).collect()
}

/// Fubini-Study distance `|<F(z), a>| / |F(z)|` from the curve point to `H`.
pub fn hyperplane_distance(curve: &[ComplexPoly], plane: &Hyperplane, z: Complex64) -> Result<f64> {
    if curve.len() != plane.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: plane.ambient_dim(), got: curve.len() });
    }
    let v: Vec<Complex64> = curve.iter().map(|p| p.eval(z)).collect();
    let n = linalg::norm(&v);
    if n == 0.0 {
        return Err(Error::IndeterminatePoint(z));
    }
    Ok((plane.pair(&v).norm() / n).min(1.0))
}

/// Whether `<F, a>` has no zero in the closed domain.
pub fn omits_hyperplane(curve: &[ComplexPoly], plane: &Hyperplane, domain: &DiskDomain) -> Result<bool> {
    if curve.len() != plane.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: plane.ambient_dim(), got: curve.len() });
    }
    let p = plane.pairing_poly(curve);
    if p.is_zero() {
        return Err(Error::DegenerateCurve);
    }
    Ok(p.roots_in_domain(domain)?.is_empty())
}

/// `H_d = {d_1 z_1 + d_2 z_2 + d_3 z_3 = 0}`.
pub fn direction_to_hyperplane(d: &Direction) -> Hyperplane {
    Hyperplane::from_real(&d.as_array()).expect("unit direction")
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SandwichReport {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Evaluates both sides of
/// `(K^2+1)/(2K^2) r <= (1 - (n.b)^2)/2 <= (K^2+1)/2 r`, `r = |phi.b|^2/|phi|^2`.
pub fn angle_sandwich_check(
    surface: &HarmonicImmersion,
    k: f64,
    z: Complex64,
    b: &Direction,
) -> Result<SandwichReport> {
    let n = surface.unit_normal(z)?;
    let phi = surface.phi_at(z);
    let bb = b.as_array();
    let pb: Complex64 = phi.iter().zip(bb).map(|(p, x)| p * x).sum();
    let ratio = pb.norm_sqr() / phi.iter().map(|p| p.norm_sqr()).sum::<f64>();
    let nb = b.dot(&n);
    let middle = (1.0 - nb * nb) / 2.0;
    let lower = (k * k + 1.0) / (2.0 * k * k) * ratio;
    let upper = (k * k + 1.0) / 2.0 * ratio;
    let tol = 1e-12;
    Ok(SandwichReport { lower, middle, upper, holds: lower <= middle + tol && middle <= upper + tol })
}

/// Every `ambient`-subset of normals is linearly independent.
pub fn general_position_check(planes: &[Hyperplane], ambient: usize) -> Result<bool> {
    if planes.len() < ambient {
        return Err(Error::TooFew { needed: ambient, got: planes.len() });
    }
    if let Some(p) = planes.iter().find(|p| p.ambient_dim() != ambient) {
        return Err(Error::DimensionMismatch { expected: ambient, got: p.ambient_dim() });
    }
    Ok(combinations(planes.len(), ambient).iter().all(|idx| {
        let rows: Vec<Vec<Complex64>> = idx.iter().map(|&i| planes[i].normal.clone()).collect();
        linalg::normalized_det(&rows).norm() > DET_TOL
    }))
}

/// Triples of directions lying in a common plane through the origin.
pub fn three_in_plane_check(dirs: &[Direction]) -> Vec<[usize; 3]> {
    combinations(dirs.len(), 3)
        .into_iter()
        .filter(|t| {
            let [a, b, c] = [dirs[t[0]].0, dirs[t[1]].0, dirs[t[2]].0];
            let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]);
            det.abs() <= DET_TOL
        })
        .map(|t| [t[0], t[1], t[2]])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cp(v: &[f64]) -> ComplexPoly {
        ComplexPoly::from_real(v)
    }

    #[test]
    fn reduced_representation_examples() {
        let r = reduced_representation(&[cp(&[0.0, 0.0, 1.0]), cp(&[0.0, 0.0, 0.0, 1.0])]).unwrap();
        assert!((&r[0] - &cp(&[1.0])).max_norm() < 1e-12);
        assert!((&r[1] - &cp(&[0.0, 1.0])).max_norm() < 1e-12);

        let r = reduced_representation(&[cp(&[0.0, -1.0, 1.0]), cp(&[0.0, 1.0, 1.0])]).unwrap();
        assert!((&r[0] - &cp(&[-1.0, 1.0])).max_norm() < 1e-12);
        assert!((&r[1] - &cp(&[1.0, 1.0])).max_norm() < 1e-12);

        let r = reduced_representation(&[cp(&[1.0]), cp(&[0.0, 1.0])]).unwrap();
        assert_eq!(r, vec![cp(&[1.0]), cp(&[0.0, 1.0])]);

        assert_eq!(reduced_representation(&[ComplexPoly::zero()]), Err(Error::AllZero));
    }

    #[test]
    fn distance_examples() {
        let f = [cp(&[1.0]), cp(&[0.0]), cp(&[0.0])];
        let h = Hyperplane::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!((hyperplane_distance(&f, &h, c(0.3, 0.0)).unwrap() - 1.0).abs() < 1e-15);

        let f = [cp(&[1.0]), cp(&[1.0])];
        let h = Hyperplane::from_real(&[1.0, -1.0]).unwrap();
        assert!(hyperplane_distance(&f, &h, c(0.0, 0.0)).unwrap() < 1e-15);

        let f = [cp(&[1.0]), cp(&[0.0, 1.0])];
        let h = Hyperplane::from_real(&[0.0, 1.0]).unwrap();
        let d = hyperplane_distance(&f, &h, c(1.0, 0.0)).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);

        let f = [cp(&[0.0, 1.0]), cp(&[0.0, 2.0])];
        assert_eq!(hyperplane_distance(&f, &h, c(0.0, 0.0)), Err(Error::IndeterminatePoint(c(0.0, 0.0))));
    }

    #[test]
    fn omission_examples() {
        let d = DiskDomain::unit(8);
        let g = fixtures::harmonic_graph(d);
        let h = Hyperplane::from_linear(&[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let p = h.pairing_poly(g.phi());
        assert_eq!(p.degree(), Some(0));
        assert!((p.eval(c(0.4, 0.4)) - c(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(omits_hyperplane(g.phi(), &h, &d).unwrap());

        let h = Hyperplane::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert!(!omits_hyperplane(g.phi(), &h, &d).unwrap());

        let e = fixtures::enneper(d);
        let h = Hyperplane::from_linear(&[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        let p = h.pairing_poly(e.phi());
        assert_eq!(p.degree(), Some(0));
        assert!((p.eval(c(0.0, 0.0)).norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(omits_hyperplane(e.phi(), &h, &d).unwrap());

        // (1/2, -i/2, z) against the linear form z_1 - i z_2 pairs to zero
        let h = Hyperplane::from_linear(&[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(omits_hyperplane(g.phi(), &h, &d), Err(Error::DegenerateCurve));
    }

    #[test]
    fn hyperplane_json_reads_linear_coefficients() {
        let h: Hyperplane = serde_json::from_str(r#"{"normal":[[1,0],[0,1],[0,0]]}"#).unwrap();
        let s = 0.5f64.sqrt();
        assert!((h.normal()[1] - c(0.0, -s)).norm() < 1e-15);
        assert!((h.coefficients()[1] - c(0.0, s)).norm() < 1e-15);
        assert!(serde_json::from_str::<Hyperplane>(r#"{"normal":[[0,0],[0,0]]}"#).is_err());
    }

    #[test]
    fn direction_embedding() {
        for v in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [1.0, 1.0, 1.0]] {
            let d = Direction::new(v).unwrap();
            let h = direction_to_hyperplane(&d);
            for k in 0..3 {
                assert!((h.normal()[k] - c(d.as_array()[k], 0.0)).norm() < 1e-15);
            }
        }
        assert!(Direction::new([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let d = DiskDomain::unit(8);
        let flat = fixtures::flat_plane(d);
        let r = angle_sandwich_check(&flat, 1.0, c(0.0, 0.0), &Direction::new([0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!(r.lower.abs() < 1e-15 && r.middle.abs() < 1e-15 && r.upper.abs() < 1e-15);
        let r = angle_sandwich_check(&flat, 1.0, c(0.0, 0.0), &Direction::new([1.0, 0.0, 0.0]).unwrap()).unwrap();
        assert!((r.middle - 0.5).abs() < 1e-15 && (r.lower - 0.5).abs() < 1e-15 && r.holds);

        let g = fixtures::harmonic_graph(d);
        let r = angle_sandwich_check(&g, 5f64.sqrt(), c(0.5, 0.0), &Direction::new([0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!(r.holds && r.lower < r.middle && r.middle < r.upper);
    }

    #[test]
    fn general_position_examples() {
        let mut planes: Vec<Hyperplane> = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]]
            .iter()
            .map(|v| Hyperplane::from_real(v).unwrap())
            .collect();
        assert!(general_position_check(&planes, 3).unwrap());
        planes.push(planes[0].clone());
        assert!(!general_position_check(&planes, 3).unwrap());
        assert!(matches!(general_position_check(&planes[..2], 3), Err(Error::TooFew { .. })));
    }

    #[test]
    fn coplanar_triples() {
        let e: Vec<Direction> = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
            .into_iter()
            .map(|v| Direction::new(v).unwrap())
            .collect();
        assert!(three_in_plane_check(&e).is_empty());
        let bad: Vec<Direction> = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]]
            .into_iter()
            .map(|v| Direction::new(v).unwrap())
            .collect();
        assert_eq!(three_in_plane_check(&bad), vec![[0, 1, 2]]);
        assert!(three_in_plane_check(&fixtures::near_equator_directions()).is_empty());
    }
}
