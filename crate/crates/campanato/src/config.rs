//! Bundled grid parameters with the defaults used by the verification suites.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{ArcFamily, CircleGrid, DiskGrid, RadialGrid, WGrid};

/// Minimum angular nodes inside a boundary arc before a family layer is kept.
pub const ARC_MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Uniform circle nodes.
    pub circle_n: usize,
    /// Approximate radial nodes per boundary window.
    pub radial_j: usize,
    /// Deepest dyadic arc generation 2^-k requested for suprema.
    pub arc_depth: u32,
    /// Radial truncation: nothing is ever evaluated with 1 - |z| < delta_min
    /// on boundary-weighted integrals.
    pub delta_min: f64,
    /// Dyadic radii 1 - 2^-k, k = 1..=w_depth, for suprema over the disk.
    pub w_depth: u32,
    pub w_angles: usize,
    /// Disk quadrature shape.
    pub disk_angles: usize,
    pub disk_depth: u32,
    pub disk_gauss: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            circle_n: 256,
            radial_j: 64,
            arc_depth: 10,
            delta_min: 1e-4,
            w_depth: 10,
            w_angles: 64,
            disk_angles: 256,
            disk_depth: 20,
            disk_gauss: 4,
        }
    }
}

impl GridConfig {
    /// Doubled accuracy everywhere: used for convergence and stability
    /// columns. Scale ranges (delta_min, disk depth) stay fixed; resolution
    /// within them doubles.
    pub fn refined(&self) -> GridConfig {
        GridConfig {
            circle_n: self.circle_n * 2,
            radial_j: self.radial_j * 2,
            arc_depth: self.arc_depth + 1,
            delta_min: self.delta_min,
            w_depth: self.w_depth + 1,
            w_angles: self.w_angles * 2,
            disk_angles: self.disk_angles * 2,
            disk_depth: self.disk_depth,
            disk_gauss: (self.disk_gauss * 2).min(8),
        }
    }

    pub fn circle(&self) -> Result<CircleGrid> {
        CircleGrid::new(self.circle_n, self.delta_min)
    }

    /// Arc family for boundary seminorms; depth is capped so every arc holds
    /// at least [`ARC_MIN_NODES`] circle nodes.
    pub fn boundary_arcs(&self) -> ArcFamily {
        ArcFamily::dyadic(self.circle_n, self.arc_depth, ARC_MIN_NODES)
    }

    /// Arc family for Carleson boxes over the disk grid's angular columns.
    /// Kept at full depth: box masses weight angular cells fractionally.
    pub fn box_arcs(&self) -> ArcFamily {
        ArcFamily::dyadic(self.disk_angles, self.arc_depth, 0)
    }

    pub fn radial(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.radial_j, self.delta_min)
    }

    pub fn disk(&self) -> Result<DiskGrid> {
        DiskGrid::new(self.disk_angles, self.disk_depth, self.disk_gauss)
    }

    pub fn wgrid(&self) -> Result<WGrid> {
        WGrid::dyadic(self.w_depth, self.w_angles)
    }
}
