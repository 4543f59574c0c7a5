//! Reference surfaces and target families used by the verification suites,
//! the CLI defaults and the tests.

use num_complex::Complex64;
use rand::Rng;

use crate::defect::{build_defect_config, DefectConfig, HarmonicCertificate};
use crate::domain::DiskDomain;
use crate::gauss::{Direction, Hyperplane};
use crate::nochka::{check_subgeneral_position, compute_nochka_weights};
use crate::poly::ComplexPoly;
use crate::surface::HarmonicImmersion;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `phi = (1/2, -i/2, z)`: the harmonic graph `(u, v, u^2 - v^2)`.
pub fn harmonic_graph(domain: DiskDomain) -> HarmonicImmersion {
    let phi = vec![ComplexPoly::constant(c(0.5, 0.0)), ComplexPoly::constant(c(0.0, -0.5)), ComplexPoly::z()];
    HarmonicImmersion::new(phi, domain).expect("harmonic graph is regular")
}

/// Enneper's surface, `phi = ((1 - z^2)/2, i(1 + z^2)/2, z)`.
pub fn enneper(domain: DiskDomain) -> HarmonicImmersion {
    let phi = vec![
        ComplexPoly::new(vec![c(0.5, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]),
        ComplexPoly::new(vec![c(0.0, 0.5), c(0.0, 0.0), c(0.0, 0.5)]),
        ComplexPoly::z(),
    ];
    HarmonicImmersion::new(phi, domain).expect("Enneper surface is regular")
}

/// The flat plane `phi = (1/2, -i/2, 0)`.
pub fn flat_plane(domain: DiskDomain) -> HarmonicImmersion {
    let phi = vec![ComplexPoly::constant(c(0.5, 0.0)), ComplexPoly::constant(c(0.0, -0.5)), ComplexPoly::zero()];
    HarmonicImmersion::new(phi, domain).expect("plane is regular")
}

/// Seven directions on the latitude circle at height `0.1` (before
/// normalization). No three are coplanar with the origin, and on the unit disk
/// the normal of [`harmonic_graph`] (which stays in the cap `n_3 >= 1/sqrt 5`)
/// avoids all of them and their antipodes.
pub fn near_equator_directions() -> Vec<Direction> {
    (0..7)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / 7.0;
            Direction::new([t.cos(), t.sin(), 0.1]).expect("nonzero")
        })
        .collect()
}

/// `{(+-1, +-1, 1)/sqrt 3, e1, e2, e3}`, which contains coplanar triples.
pub fn cube_directions() -> Vec<Direction> {
    let mut d: Vec<Direction> = [[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [-1.0, -1.0, 1.0]]
        .into_iter()
        .map(|v| Direction::new(v).expect("nonzero"))
        .collect();
    for v in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        d.push(Direction::new(v).expect("nonzero"));
    }
    d
}

/// The line `F = (1, z)` in `P^1`.
pub fn line_curve() -> Vec<ComplexPoly> {
    vec![ComplexPoly::constant(c(1.0, 0.0)), ComplexPoly::z()]
}

/// Seven hyperplanes of `P^1` whose pairings with [`line_curve`] vanish at
/// `0.25 e^{i pi (2j + 1) / 7}`, none on the positive real axis.
pub fn line_planes() -> Vec<Hyperplane> {
    (0..7)
        .map(|j| {
            let root = Complex64::from_polar(0.25, std::f64::consts::PI * (2 * j + 1) as f64 / 7.0);
            Hyperplane::from_linear(&[-root, c(1.0, 0.0)]).expect("nonzero")
        })
        .collect()
}

/// The disk `|z| <= 1/2` used with [`line_planes`]. On it every pairing has
/// modulus below one.
pub fn line_domain(grid_resolution: usize) -> DiskDomain {
    DiskDomain::new(c(0.0, 0.0), 0.5, grid_resolution).expect("valid disk")
}

/// Everything needed to build the metrics of the final length argument for
/// [`line_curve`] and [`line_planes`]: surface dimension `n = 2`, `eta = 0`,
/// and the weights `log |<F, a_j>| - log M_j`.
pub fn line_defect_setup(
    domain: &DiskDomain,
) -> (Vec<ComplexPoly>, Vec<Hyperplane>, DefectConfig, Vec<HarmonicCertificate>) {
    let curve = line_curve();
    let planes = line_planes();
    let weights = compute_nochka_weights(&planes, 1).expect("general position");
    let cfg = build_defect_config(planes.len(), 2, 1, &vec![0.0; planes.len()], &weights).expect("hypothesis holds");
    let certs =
        planes.iter().map(|p| HarmonicCertificate::normalized_log_modulus(p.pairing_poly(&curve), domain)).collect();
    (curve, planes, cfg, certs)
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Polynomial of exact degree `degree` with coefficients in the unit square.
pub fn random_poly<R: Rng>(rng: &mut R, degree: usize) -> ComplexPoly {
    let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| random_complex(rng)).collect();
    if coeffs[degree].norm() < 0.1 {
        coeffs[degree] = c(1.0, 0.0);
    }
    ComplexPoly::new(coeffs)
}

/// `q` hyperplanes of `P^k` in `n`-subgeneral position. When `n > k` some
/// normals are repeated, so the family is usually not in general position.
/// Gives up after a bounded number of draws.
pub fn random_subgeneral_planes<R: Rng>(rng: &mut R, q: usize, n: usize, k: usize) -> Option<Vec<Hyperplane>> {
    for _ in 0..200 {
        let mut normals: Vec<Vec<Complex64>> = Vec::with_capacity(q);
        while normals.len() < q {
            if n > k && !normals.is_empty() && rng.gen_bool(0.3) {
                let pick = normals[rng.gen_range(0..normals.len())].clone();
                normals.push(pick);
            } else {
                normals.push((0..=k).map(|_| random_complex(rng)).collect());
            }
        }
        let planes: Vec<Hyperplane> = normals.iter().filter_map(|v| Hyperplane::from_normal(v).ok()).collect();
        if planes.len() == q && check_subgeneral_position(&planes, n).is_ok() {
            return Some(planes);
        }
    }
    None
}
