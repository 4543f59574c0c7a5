use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid points are kept within this fraction of the radius.
pub const MASK_FRACTION: f64 = 0.999;

/// A closed disk in the z-plane with a Cartesian sampling grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiskDomainRepr", into = "DiskDomainRepr")]
pub struct DiskDomain {
    center: Complex64,
    radius: f64,
    grid_resolution: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct DiskDomainRepr {
    center: [f64; 2],
    radius: f64,
    grid_resolution: usize,
}

impl TryFrom<DiskDomainRepr> for DiskDomain {
    type Error = Error;
    fn try_from(r: DiskDomainRepr) -> Result<Self> {
        DiskDomain::new(Complex64::new(r.center[0], r.center[1]), r.radius, r.grid_resolution)
    }
}

impl From<DiskDomain> for DiskDomainRepr {
    fn from(d: DiskDomain) -> Self {
        Self { center: [d.center.re, d.center.im], radius: d.radius, grid_resolution: d.grid_resolution }
    }
}

/// A masked grid node: integer indices into the bounding-square lattice and
/// the corresponding point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub ix: usize,
    pub iy: usize,
    pub z: Complex64,
}

impl DiskDomain {
    pub fn new(center: Complex64, radius: f64, grid_resolution: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
        }
        if grid_resolution < 2 {
            return Err(Error::InvalidInput(format!("grid_resolution must be at least 2, got {grid_resolution}")));
        }
        Ok(Self { center, radius, grid_resolution })
    }

    /// Unit disk about the origin.
    pub fn unit(grid_resolution: usize) -> Self {
        Self::new(Complex64::new(0.0, 0.0), 1.0, grid_resolution).expect("valid unit disk")
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid_resolution(&self) -> usize {
        self.grid_resolution
    }

    pub fn with_resolution(&self, grid_resolution: usize) -> Result<Self> {
        Self::new(self.center, self.radius, grid_resolution)
    }

    /// Lattice spacing of the bounding-square grid.
    pub fn step(&self) -> f64 {
        2.0 * self.radius / (self.grid_resolution - 1) as f64
    }

    pub fn contains_closed(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + 1e-12)
    }

    /// Whether `z` passes the grid mask `|z - center| <= 0.999 R`.
    pub fn in_mask(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= MASK_FRACTION * self.radius
    }

    /// Lattice point `(ix, iy)` of the bounding square, masked or not.
    pub fn lattice_point(&self, ix: usize, iy: usize) -> Complex64 {
        let h = self.step();
        self.center + Complex64::new(-self.radius + ix as f64 * h, -self.radius + iy as f64 * h)
    }

    /// Masked grid points in row-major order (`iy` outer).
    pub fn grid(&self) -> Vec<GridPoint> {
        let n = self.grid_resolution;
        let mut pts = Vec::new();
        for iy in 0..n {
            for ix in 0..n {
                let z = self.lattice_point(ix, iy);
                if self.in_mask(z) {
                    pts.push(GridPoint { ix, iy, z });
                }
            }
        }
        pts
    }

    /// `count` equally spaced points on the boundary circle.
    pub fn boundary_ring(&self, count: usize) -> Vec<Complex64> {
        (0..count)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / count as f64;
                self.center + Complex64::from_polar(self.radius, t)
            })
            .collect()
    }

    /// Grid points together with a boundary ring of `4 * grid_resolution`
    /// points, i.e. a sampling of the closed disk.
    pub fn closed_samples(&self) -> Vec<Complex64> {
        let mut pts: Vec<Complex64> = self.grid().into_iter().map(|p| p.z).collect();
        pts.extend(self.boundary_ring(4 * self.grid_resolution));
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(DiskDomain::new(Complex64::new(0.0, 0.0), 0.0, 10).is_err());
        assert!(DiskDomain::new(Complex64::new(0.0, 0.0), 1.0, 1).is_err());
    }

    #[test]
    fn grid_inside_mask() {
        let d = DiskDomain::new(Complex64::new(0.5, -0.25), 2.0, 33).unwrap();
        let g = d.grid();
        assert!(!g.is_empty());
        assert!(g.iter().all(|p| (p.z - d.center()).norm() <= 0.999 * 2.0));
        // center lies on the odd lattice
        assert!(g.iter().any(|p| (p.z - d.center()).norm() < 1e-12));
    }

    #[test]
    fn json_shape() {
        let d: DiskDomain = serde_json::from_str(r#"{"center":[0,1],"radius":2,"grid_resolution":5}"#).unwrap();
        assert_eq!(d.center(), Complex64::new(0.0, 1.0));
        assert!(serde_json::from_str::<DiskDomain>(r#"{"center":[0,1],"radius":-2,"grid_resolution":5}"#).is_err());
    }
}
