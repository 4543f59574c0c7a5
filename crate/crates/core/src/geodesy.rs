//! Distances to the boundary of the parameter disk under the induced metric
//! `ds^2` or the Klotz metric, computed by Dijkstra on a 16-neighbour grid
//! graph, plus the comparisons and curvature scans built on them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{DiskDomain, GridPoint};
use crate::error::{Error, Result};
use crate::gauss::{direction_to_hyperplane, omits_hyperplane, three_in_plane_check, Direction};
use crate::surface::HarmonicImmersion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Induced,
    Klotz,
}

/// Axis, diagonal and knight moves.
const STENCIL: [(i64, i64); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (2, 1),
    (-1, 2),
    (-2, 1),
    (1, -2),
    (2, -1),
    (-1, -2),
    (-2, -1),
];

/// Quadrature nodes used for the radial stubs of boundary nodes.
const STUB_NODES: usize = 8;

fn segment_length(s: &HarmonicImmersion, kind: MetricKind, a: Complex64, b: Complex64) -> Result<f64> {
    let d = b - a;
    let m = s.metric_sample(0.5 * (a + b))?;
    let q = match kind {
        MetricKind::Induced => m.induced_form(d.re, d.im),
        MetricKind::Klotz => m.klotz_form(d.re, d.im),
    };
    Ok(q.max(0.0).sqrt())
}

/// Masked grid nodes with weighted edges to their stencil neighbours.
#[derive(Debug, Clone)]
pub struct GridGraph {
    kind: MetricKind,
    domain: DiskDomain,
    nodes: Vec<GridPoint>,
    edges: Vec<Vec<(u32, f64)>>,
    /// Initial distance of boundary nodes, `None` for interior nodes.
    boundary: Vec<Option<f64>>,
}

/// Neighbours with edge weights, and the boundary stub length if any.
type NodeEntry = (Vec<(u32, f64)>, Option<f64>);

/// Builds the edge-weighted grid graph of the surface's domain.
pub fn discretize_metric(s: &HarmonicImmersion, kind: MetricKind) -> Result<GridGraph> {
    let domain = *s.domain();
    let n = domain.grid_resolution();
    let nodes = domain.grid();
    let mut index = vec![u32::MAX; n * n];
    for (i, p) in nodes.iter().enumerate() {
        index[p.iy * n + p.ix] = i as u32;
    }
    let lookup = |ix: i64, iy: i64| -> Option<u32> {
        if ix < 0 || iy < 0 || ix >= n as i64 || iy >= n as i64 {
            return None;
        }
        let id = index[iy as usize * n + ix as usize];
        (id != u32::MAX).then_some(id)
    };
    let (c, r) = (domain.center(), domain.radius());
    let built: Vec<Result<NodeEntry>> = nodes
        .par_iter()
        .map(|p| {
            let mut adj = Vec::with_capacity(STENCIL.len());
            let mut exits = false;
            for (dx, dy) in STENCIL {
                match lookup(p.ix as i64 + dx, p.iy as i64 + dy) {
                    Some(j) => adj.push((j, segment_length(s, kind, p.z, nodes[j as usize].z)?)),
                    None => exits = true,
                }
            }
            let stub = if exits {
                let off = p.z - c;
                let rim = if off.norm() > 0.0 { c + off * (r / off.norm()) } else { c + r };
                let mut len = 0.0;
                for i in 0..STUB_NODES {
                    let a = p.z + (rim - p.z) * (i as f64 / STUB_NODES as f64);
                    let b = p.z + (rim - p.z) * ((i + 1) as f64 / STUB_NODES as f64);
                    len += segment_length(s, kind, a, b)?;
                }
                Some(len)
            } else {
                None
            };
            Ok((adj, stub))
        })
        .collect();
    let mut edges = Vec::with_capacity(nodes.len());
    let mut boundary = Vec::with_capacity(nodes.len());
    for b in built {
        let (adj, stub) = b?;
        edges.push(adj);
        boundary.push(stub);
    }
    Ok(GridGraph { kind, domain, nodes, edges, boundary })
}

impl GridGraph {
    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn nodes(&self) -> &[GridPoint] {
        &self.nodes
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.boundary[node].is_some()
    }

    /// Weight of the edge from `node` along stencil move `(dx, dy)`, if present.
    pub fn edge_weight(&self, node: usize, dx: i64, dy: i64) -> Option<f64> {
        let p = self.nodes[node];
        self.edges[node].iter().find_map(|&(j, w)| {
            let q = self.nodes[j as usize];
            (q.ix as i64 - p.ix as i64 == dx && q.iy as i64 - p.iy as i64 == dy).then_some(w)
        })
    }

    pub fn nearest_node(&self, z: Complex64) -> usize {
        self.nodes
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.z - z).norm_sqr().total_cmp(&(b.1.z - z).norm_sqr()))
            .map(|(i, _)| i)
            .expect("grid is nonempty")
    }

    /// Multi-source Dijkstra from the boundary nodes, each starting at the
    /// length of its radial stub to the rim.
    pub fn boundary_distances(&self) -> GeodesicField {
        #[derive(PartialEq)]
        struct Item(f64, u32);
        impl Eq for Item {}
        impl Ord for Item {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0)
            }
        }
        impl PartialOrd for Item {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut heap = BinaryHeap::new();
        for (i, b) in self.boundary.iter().enumerate() {
            if let Some(d0) = b {
                dist[i] = *d0;
                heap.push(Item(*d0, i as u32));
            }
        }
        while let Some(Item(d, u)) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            for &(v, w) in &self.edges[u as usize] {
                let nd = d + w;
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    heap.push(Item(nd, v));
                }
            }
        }
        GeodesicField {
            kind: self.kind,
            domain: self.domain,
            points: self.nodes.iter().map(|p| p.z).collect(),
            distances: dist,
            boundary: self.boundary.iter().map(Option::is_some).collect(),
        }
    }
}

/// Grid distances to the boundary circle.
#[derive(Debug, Clone, Serialize)]
pub struct GeodesicField {
    pub kind: MetricKind,
    #[serde(skip)]
    pub domain: DiskDomain,
    #[serde(skip)]
    pub points: Vec<Complex64>,
    pub distances: Vec<f64>,
    #[serde(skip)]
    pub boundary: Vec<bool>,
}

impl GeodesicField {
    pub fn resolution(&self) -> usize {
        self.domain.grid_resolution()
    }

    /// Distance at the grid node nearest to `z`.
    pub fn at(&self, z: Complex64) -> f64 {
        let i = self
            .points
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).norm_sqr().total_cmp(&(b.1 - z).norm_sqr()))
            .map(|(i, _)| i)
            .expect("grid is nonempty");
        self.distances[i]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("z_re,z_im,d\n");
        for (z, d) in self.points.iter().zip(&self.distances) {
            out.push_str(&format!("{},{},{}\n", z.re, z.im, d));
        }
        out
    }
}

/// Distance from `p` to the boundary of the domain under `kind`.
pub fn distance_to_boundary(s: &HarmonicImmersion, kind: MetricKind, p: Complex64) -> Result<f64> {
    if !s.domain().in_mask(p) {
        return Err(Error::PreconditionFailed(format!("{p} is not an interior point")));
    }
    Ok(discretize_metric(s, kind)?.boundary_distances().at(p))
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub qc_constant: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Extremes of `ds^2 / Gamma` over sampled points and directions.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub sandwich_holds: bool,
    pub distance_samples: usize,
    /// `max (d - sqrt(2) d_Gamma)` over the sampled nodes.
    pub max_distance_excess: f64,
    pub distance_holds: bool,
}

/// Checks `2/(K^2+1) Gamma <= ds^2 <= 2K^2/(K^2+1) Gamma` on sampled
/// points and directions, and `d <= sqrt(2) d_Gamma` on `samples` random nodes.
pub fn metric_comparison_check(s: &HarmonicImmersion, samples: usize, seed: u64) -> Result<ComparisonReport> {
    let k = s.qc_constant()?;
    let lower_bound = 2.0 / (k * k + 1.0);
    let upper_bound = 2.0 * k * k / (k * k + 1.0);
    let ratios: Vec<Result<(f64, f64)>> = s
        .domain()
        .closed_samples()
        .into_par_iter()
        .map(|z| {
            let m = s.metric_sample(z)?;
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for i in 0..32 {
                let t = std::f64::consts::PI * i as f64 / 32.0;
                let r = m.induced_form(t.cos(), t.sin()) / m.klotz_form(t.cos(), t.sin());
                lo = lo.min(r);
                hi = hi.max(r);
            }
            Ok((lo, hi))
        })
        .collect();
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    for r in ratios {
        let (lo, hi) = r?;
        min_ratio = min_ratio.min(lo);
        max_ratio = max_ratio.max(hi);
    }
    let tol = 1e-9;
    let sandwich_holds = min_ratio >= lower_bound - tol && max_ratio <= upper_bound + tol;

    let d = discretize_metric(s, MetricKind::Induced)?.boundary_distances();
    let dg = discretize_metric(s, MetricKind::Klotz)?.boundary_distances();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, d.distances.len(), samples.min(d.distances.len()));
    let max_distance_excess = picks
        .iter()
        .map(|i| d.distances[i] - std::f64::consts::SQRT_2 * dg.distances[i])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ComparisonReport {
        qc_constant: k,
        lower_bound,
        upper_bound,
        min_ratio,
        max_ratio,
        sandwich_holds,
        distance_samples: picks.len(),
        max_distance_excess,
        distance_holds: max_distance_excess <= 1e-9,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub resolution: usize,
    /// `sup |K_ds2| d^2` over interior nodes.
    pub sup_induced: f64,
    pub argmax_induced: [f64; 2],
    /// `sup |K_Gamma| d_Gamma^2` over interior nodes.
    pub sup_klotz: f64,
    pub argmax_klotz: [f64; 2],
}

/// Empirical constant `C` in `|K(p)| <= C / d(p)^2` for a surface whose
/// normal omits seven directions.
pub fn curvature_estimate_scan(s: &HarmonicImmersion, dirs: &[Direction]) -> Result<ScanReport> {
    if s.dimension() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: s.dimension() });
    }
    if dirs.len() != 7 {
        return Err(Error::PreconditionFailed(format!("need 7 directions, got {}", dirs.len())));
    }
    if let Some(t) = three_in_plane_check(dirs).first() {
        return Err(Error::PreconditionFailed(format!("directions {t:?} lie in a common plane")));
    }
    for (i, d) in dirs.iter().enumerate() {
        if !omits_hyperplane(s.phi(), &direction_to_hyperplane(d), s.domain())? {
            return Err(Error::PreconditionFailed(format!(
                "the normal attains direction {i} {:?} or its antipode",
                d.as_array()
            )));
        }
    }
    let d = discretize_metric(s, MetricKind::Induced)?.boundary_distances();
    let dg = discretize_metric(s, MetricKind::Klotz)?.boundary_distances();
    let rows: Vec<Result<(f64, f64, Complex64)>> = d
        .points
        .par_iter()
        .enumerate()
        .filter(|(i, _)| !d.boundary[*i])
        .map(|(i, &z)| {
            let ki = s.curvature_induced(z)?.abs() * d.distances[i].powi(2);
            let kg = s.curvature_klotz(z)?.abs() * dg.distances[i].powi(2);
            Ok((ki, kg, z))
        })
        .collect();
    let mut report = ScanReport {
        resolution: d.resolution(),
        sup_induced: 0.0,
        argmax_induced: [0.0, 0.0],
        sup_klotz: 0.0,
        argmax_klotz: [0.0, 0.0],
    };
    for r in rows {
        let (ki, kg, z) = r?;
        if ki > report.sup_induced {
            report.sup_induced = ki;
            report.argmax_induced = [z.re, z.im];
        }
        if kg > report.sup_klotz {
            report.sup_klotz = kg;
            report.argmax_klotz = [z.re, z.im];
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn flat_axis_edges_equal_step() {
        let d = DiskDomain::unit(21);
        let g = discretize_metric(&fixtures::flat_plane(d), MetricKind::Induced).unwrap();
        let centre = g.nearest_node(c(0.0, 0.0));
        assert!((g.edge_weight(centre, 1, 0).unwrap() - d.step()).abs() < 1e-14);
        assert!((g.edge_weight(centre, 0, 1).unwrap() - d.step()).abs() < 1e-14);
        assert!((g.edge_weight(centre, 1, 2).unwrap() - 5f64.sqrt() * d.step()).abs() < 1e-14);
    }

    #[test]
    fn klotz_edges_scale_conformally() {
        let d = DiskDomain::unit(21);
        let g = discretize_metric(&fixtures::harmonic_graph(d), MetricKind::Klotz).unwrap();
        let node = g.nearest_node(c(0.5, 0.0));
        let p = g.nodes()[node].z;
        let mid = p + 0.5 * d.step();
        let expected = (1.0 + 2.0 * mid.norm_sqr()).sqrt() * d.step();
        assert!((g.edge_weight(node, 1, 0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn induced_edges_anisotropic() {
        let d = DiskDomain::unit(21);
        let g = discretize_metric(&fixtures::harmonic_graph(d), MetricKind::Induced).unwrap();
        let node = g.nearest_node(c(0.5, 0.0));
        let (a, b) = (g.edge_weight(node, 1, 0).unwrap(), g.edge_weight(node, 0, 1).unwrap());
        assert!((a - b).abs() > 1e-3, "{a} {b}");
    }

    #[test]
    fn flat_distances() {
        let s = fixtures::flat_plane(DiskDomain::unit(129));
        let f = discretize_metric(&s, MetricKind::Induced).unwrap().boundary_distances();
        assert!((f.at(c(0.0, 0.0)) - 1.0).abs() < 0.03, "{}", f.at(c(0.0, 0.0)));
        assert!((f.at(c(0.5, 0.0)) - 0.5).abs() < 0.03 * 0.5);
        assert!(distance_to_boundary(&s, MetricKind::Induced, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn klotz_distance_of_graph_fixture() {
        // radial integral of sqrt(1 + 2 r^2) from 0 to 1
        let oracle = 3f64.sqrt() / 2.0 + 2f64.sqrt().asinh() / (2.0 * 2f64.sqrt());
        let s = fixtures::harmonic_graph(DiskDomain::unit(129));
        let d = distance_to_boundary(&s, MetricKind::Klotz, c(0.0, 0.0)).unwrap();
        assert!((d / oracle - 1.0).abs() < 0.03, "{d} vs {oracle}");
    }

    #[test]
    fn refinement_is_monotone() {
        let mut prev = f64::INFINITY;
        for res in [33, 65, 129] {
            let s = fixtures::harmonic_graph(DiskDomain::unit(res));
            let d = distance_to_boundary(&s, MetricKind::Induced, c(0.0, 0.0)).unwrap();
            assert!(d <= prev * 1.005, "res {res}: {d} after {prev}");
            prev = d;
        }
    }

    #[test]
    fn comparison_on_conformal_surface() {
        let s = fixtures::enneper(DiskDomain::unit(33));
        let r = metric_comparison_check(&s, 100, 7).unwrap();
        assert!(r.sandwich_holds && r.distance_holds);
        assert!((r.min_ratio - 1.0).abs() < 1e-9 && (r.max_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scan_preconditions() {
        let d = DiskDomain::unit(17);
        let s = fixtures::harmonic_graph(d);
        assert!(matches!(curvature_estimate_scan(&s, &fixtures::cube_directions()), Err(Error::PreconditionFailed(_))));
        let flat = curvature_estimate_scan(&fixtures::flat_plane(d), &fixtures::near_equator_directions()).unwrap();
        assert_eq!(flat.sup_induced, 0.0);
        let r = curvature_estimate_scan(&s, &fixtures::near_equator_directions()).unwrap();
        assert!(r.sup_induced.is_finite() && r.sup_induced > 0.0);
    }
}
