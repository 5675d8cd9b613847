//! Quadrature grids for the circle, radial segments, and the disk.
//!
//! Circle integrals use the uniform trapezoid rule, which is spectrally
//! accurate for periodic integrands. Radial and disk integrals use
//! Gauss-Legendre panels on geometrically graded breakpoints: dyadic toward
//! the boundary so Carleson boxes align with panel edges, and dyadic toward
//! the origin so logarithmic kernels are resolved. Panel quadrature keeps the
//! disk mass exact (the radial density 2r is linear) where a graded trapezoid
//! rule would miss the 1e-10 mass and 1e-6 log-moment targets.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;

// Gauss-Legendre nodes and weights on [-1, 1].
const GL2: [(f64, f64); 2] = [(-0.5773502691896257, 1.0), (0.5773502691896257, 1.0)];
const GL4: [(f64, f64); 4] = [
    (-0.8611363115940526, 0.34785484513745385),
    (-0.33998104358485626, 0.6521451548625461),
    (0.33998104358485626, 0.6521451548625461),
    (0.8611363115940526, 0.34785484513745385),
];
const GL8: [(f64, f64); 8] = [
    (-0.9602898564975363, 0.10122853629037626),
    (-0.7966664774136267, 0.22238103445337448),
    (-0.525532409916329, 0.3137066458778873),
    (-0.1834346424956498, 0.362683783378362),
    (0.1834346424956498, 0.362683783378362),
    (0.525532409916329, 0.3137066458778873),
    (0.7966664774136267, 0.22238103445337448),
    (0.9602898564975363, 0.10122853629037626),
];

pub(crate) fn gauss_rule(points: usize) -> &'static [(f64, f64)] {
    if points <= 2 {
        &GL2
    } else if points <= 4 {
        &GL4
    } else {
        &GL8
    }
}

/// Uniform nodes e^(2 pi i k / n) carrying the normalized arclength measure
/// |dz| / (2 pi), so each node weighs 1/n.
#[derive(Debug, Clone)]
pub struct CircleGrid {
    n: usize,
    delta_min: f64,
}

impl CircleGrid {
    pub fn new(n: usize, delta_min: f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::Resolution(format!("circle grid needs n >= 8, got {n}")));
        }
        if !(delta_min > 0.0 && delta_min < 0.5) {
            return Err(Error::InvalidSpec(format!(
                "delta_min must lie in (0, 0.5), got {delta_min}"
            )));
        }
        Ok(CircleGrid { n, delta_min })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn delta_min(&self) -> f64 {
        self.delta_min
    }

    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n as f64
    }

    pub fn node(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.theta(k))
    }

    /// Radius at which `f` can be sampled on the whole circle: 1 for variants
    /// with pointwise boundary values, 1 - delta_min otherwise.
    pub fn eval_radius(&self, f: &FunctionSpec) -> f64 {
        if f.is_boundary_singular() {
            1.0 - self.delta_min
        } else {
            1.0
        }
    }

    /// Samples f over the grid at its boundary evaluation radius.
    pub fn sample(&self, f: &FunctionSpec) -> Result<Vec<Complex64>> {
        let r = self.eval_radius(f);
        (0..self.n)
            .map(|k| f.evaluate(Complex64::from_polar(r, self.theta(k))))
            .collect()
    }
}

/// Boundary arc with center angle in radians and length normalized so that
/// the full circle has length 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub center: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(center: f64, length: f64) -> Result<Self> {
        if !center.is_finite() || !(length > 0.0 && length <= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "arc needs finite center and length in (0, 1], got ({center}, {length})"
            )));
        }
        Ok(Arc { center, length })
    }

    pub fn full() -> Self {
        Arc { center: 0.0, length: 1.0 }
    }

    pub fn half_angle(&self) -> f64 {
        PI * self.length
    }

    fn relative(&self, theta: f64) -> f64 {
        let mut d = (theta - self.center).rem_euclid(TAU);
        if d >= PI {
            d -= TAU;
        }
        d
    }

    /// Membership is half-open: relative angle in [-pi L, pi L).
    pub fn contains(&self, theta: f64) -> bool {
        if self.length >= 1.0 {
            return true;
        }
        let d = self.relative(theta);
        -self.half_angle() <= d && d < self.half_angle()
    }

    /// Fraction of the angular cell [theta - w/2, theta + w/2) covered by the
    /// arc; exact for constant densities regardless of grid alignment.
    pub fn cell_overlap(&self, theta: f64, cell_width: f64) -> f64 {
        if self.length >= 1.0 {
            return 1.0;
        }
        let h = self.half_angle();
        let d = self.relative(theta);
        let seg = |x: f64| -> f64 {
            let lo = (x - cell_width / 2.0).max(-h);
            let hi = (x + cell_width / 2.0).min(h);
            (hi - lo).max(0.0)
        };
        let covered = seg(d) + seg(d - TAU) + seg(d + TAU);
        (covered / cell_width).clamp(0.0, 1.0)
    }
}

/// One dyadic generation of arcs: common length 2^-depth, centers on the
/// angular grid.
#[derive(Debug, Clone)]
pub struct ArcLayer {
    pub depth: u32,
    pub length: f64,
    pub centers: Vec<usize>,
}

/// Dyadic arc family over an angular grid of `circle_n` nodes.
#[derive(Debug, Clone)]
pub struct ArcFamily {
    pub circle_n: usize,
    pub layers: Vec<ArcLayer>,
}

impl ArcFamily {
    /// Lengths 2^-k for k = 0..=max_depth. Layers whose arcs would contain
    /// fewer than `min_nodes` angular nodes are dropped, so the family is
    /// always resolvable on its grid. Pass min_nodes = 0 to keep every depth
    /// (Carleson boxes weight angular cells fractionally and tolerate arcs
    /// thinner than one cell).
    pub fn dyadic(circle_n: usize, max_depth: u32, min_nodes: usize) -> Self {
        let mut layers = vec![ArcLayer { depth: 0, length: 1.0, centers: vec![0] }];
        for depth in 1..=max_depth {
            let length = 0.5f64.powi(depth as i32);
            if min_nodes > 0 && (circle_n as f64 * length) < min_nodes as f64 {
                break;
            }
            layers.push(ArcLayer { depth, length, centers: (0..circle_n).collect() });
        }
        ArcFamily { circle_n, layers }
    }

    pub fn theta(&self, center_idx: usize) -> f64 {
        TAU * center_idx as f64 / self.circle_n as f64
    }

    pub fn arc(&self, layer: &ArcLayer, center_idx: usize) -> Arc {
        Arc { center: self.theta(center_idx), length: layer.length }
    }

    pub fn min_length(&self) -> f64 {
        self.layers.last().map(|l| l.length).unwrap_or(1.0)
    }

    pub fn arc_count(&self) -> usize {
        self.layers.iter().map(|l| l.centers.len()).sum()
    }
}

/// Composite Gauss integrator for inner integrals over [1 - h, 1 - delta_min]
/// with nodes geometrically graded toward the boundary.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    panels: usize,
    gauss: usize,
    delta_min: f64,
}

impl RadialGrid {
    /// `j` is the approximate node count per window (panels = j / 4, 4-point
    /// Gauss each).
    pub fn new(j: usize, delta_min: f64) -> Result<Self> {
        if j < 8 {
            return Err(Error::Resolution(format!("radial grid needs j >= 8, got {j}")));
        }
        if !(delta_min > 0.0 && delta_min < 0.5) {
            return Err(Error::InvalidSpec(format!(
                "delta_min must lie in (0, 0.5), got {delta_min}"
            )));
        }
        Ok(RadialGrid { panels: (j / 4).max(2), gauss: 4, delta_min })
    }

    pub fn delta_min(&self) -> f64 {
        self.delta_min
    }

    /// Integral of g over r in [1 - h, 1 - delta_min]; g receives (r, 1 - r).
    /// The gap [1 - delta_min, 1) is truncated uniformly for every window.
    pub fn integrate_to_boundary(
        &self,
        h: f64,
        mut g: impl FnMut(f64, f64) -> f64,
    ) -> Result<f64> {
        if !(h > 0.0 && h <= 1.0) {
            return Err(Error::InvalidSpec(format!("window height must lie in (0, 1], got {h}")));
        }
        if h <= self.delta_min {
            return Err(Error::Resolution(format!(
                "window height {h} is below the radial cutoff {}",
                self.delta_min
            )));
        }
        let rule = gauss_rule(self.gauss);
        // Work in t = 1 - r, integrating from t = delta_min up to t = h.
        let ratio = (h / self.delta_min).powf(1.0 / self.panels as f64);
        let mut total = 0.0;
        let mut t_lo = self.delta_min;
        for m in 0..self.panels {
            let t_hi = if m + 1 == self.panels { h } else { t_lo * ratio };
            let mid = 0.5 * (t_lo + t_hi);
            let half = 0.5 * (t_hi - t_lo);
            for &(x, w) in rule {
                let t = mid + x * half;
                total += w * half * g(1.0 - t, t);
            }
            t_lo = t_hi;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RadialNode {
    pub r: f64,
    /// 1 - r computed without cancellation; trustworthy down to 2^-60.
    pub one_minus_r: f64,
    /// Weight for integrals against 2 r dr on [0, 1].
    pub weight: f64,
}

/// Tensor polar grid carrying the normalized area measure dA (total mass 1).
///
/// Radial panels have dyadic breakpoints 2^-depth, ..., 1/2 toward the origin
/// and 1/2, 3/4, ..., 1 - 2^-depth, 1 toward the boundary, each carrying a
/// Gauss rule, so all nodes are interior and Carleson boxes of dyadic height
/// align with panel edges.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    angles: usize,
    depth: u32,
    gauss: usize,
    radial: Vec<RadialNode>,
    unit: Vec<Complex64>,
}

impl DiskGrid {
    pub fn new(angles: usize, depth: u32, gauss: usize) -> Result<Self> {
        if angles < 8 {
            return Err(Error::Resolution(format!("disk grid needs >= 8 angles, got {angles}")));
        }
        if !(2..=60).contains(&depth) {
            return Err(Error::InvalidSpec(format!("disk depth must lie in 2..=60, got {depth}")));
        }
        let rule = gauss_rule(gauss);
        let mut breaks: Vec<f64> = vec![0.0];
        for k in (1..=depth).rev() {
            breaks.push(0.5f64.powi(k as i32));
        }
        for k in 2..=depth {
            breaks.push(1.0 - 0.5f64.powi(k as i32));
        }
        breaks.push(1.0);
        let mut radial = Vec::with_capacity((breaks.len() - 1) * rule.len());
        for win in breaks.windows(2) {
            let (a, b) = (win[0], win[1]);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            // 1 - mid from the dyadic endpoints, exactly.
            let omr_mid = 0.5 * ((1.0 - a) + (1.0 - b));
            for &(x, w) in rule {
                let r = mid + x * half;
                radial.push(RadialNode {
                    r,
                    one_minus_r: omr_mid - x * half,
                    weight: w * half * 2.0 * r,
                });
            }
        }
        let unit = (0..angles)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / angles as f64))
            .collect();
        Ok(DiskGrid { angles, depth, gauss: rule.len(), radial, unit })
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Points of the Gauss rule each panel carries.
    pub fn gauss(&self) -> usize {
        self.gauss
    }

    pub fn radial(&self) -> &[RadialNode] {
        &self.radial
    }

    pub fn node_count(&self) -> usize {
        self.angles * self.radial.len()
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.angles as f64
    }

    pub fn unit(&self, j: usize) -> Complex64 {
        self.unit[j]
    }

    pub fn angular_weight(&self) -> f64 {
        1.0 / self.angles as f64
    }

    pub fn cell_width(&self) -> f64 {
        TAU / self.angles as f64
    }

    /// Doubles the dyadic depth, adding resolution next to the boundary and
    /// the origin without touching existing scales. This is the refinement
    /// used to classify Carleson masses as bounded or divergent.
    pub fn deepened(&self) -> DiskGrid {
        DiskGrid::new(self.angles, (self.depth * 2).min(60), self.gauss).expect("valid by construction")
    }

    /// Accuracy refinement: doubled angles, next Gauss order, same scales.
    pub fn refined(&self) -> DiskGrid {
        DiskGrid::new(self.angles * 2, self.depth, self.gauss * 2).expect("valid by construction")
    }

    /// First radial index with r > 1 - h.
    pub fn suffix_start(&self, h: f64) -> usize {
        self.radial.partition_point(|node| node.one_minus_r >= h)
    }

    pub fn total_weight(&self) -> f64 {
        let radial: f64 = self.radial.iter().map(|n| n.weight).sum();
        radial
    }

    /// Integral against the normalized area measure; f receives (z, node).
    pub fn integrate(&self, mut f: impl FnMut(Complex64, &RadialNode) -> f64) -> f64 {
        let aw = self.angular_weight();
        let mut total = 0.0;
        for node in &self.radial {
            let mut ring = 0.0;
            for &u in &self.unit {
                ring += f(u * node.r, node);
            }
            total += node.weight * aw * ring;
        }
        total
    }

    /// Fallible variant of [`DiskGrid::integrate`].
    pub fn try_integrate(
        &self,
        mut f: impl FnMut(Complex64, &RadialNode) -> Result<f64>,
    ) -> Result<f64> {
        let aw = self.angular_weight();
        let mut total = 0.0;
        for node in &self.radial {
            let mut ring = 0.0;
            for &u in &self.unit {
                ring += f(u * node.r, node)?;
            }
            total += node.weight * aw * ring;
        }
        Ok(total)
    }
}

/// Evaluation points for suprema over the disk: the origin plus circles of
/// radius 1 - 2^-k.
#[derive(Debug, Clone)]
pub struct WGrid {
    pub points: Vec<Complex64>,
}

impl WGrid {
    pub fn dyadic(depth: u32, angles: usize) -> Result<Self> {
        if depth == 0 || angles < 4 {
            return Err(Error::Resolution(format!(
                "w-grid needs depth >= 1 and >= 4 angles, got ({depth}, {angles})"
            )));
        }
        let mut points = vec![Complex64::new(0.0, 0.0)];
        for k in 1..=depth {
            let r = 1.0 - 0.5f64.powi(k as i32);
            for j in 0..angles {
                points.push(Complex64::from_polar(r, TAU * j as f64 / angles as f64));
            }
        }
        Ok(WGrid { points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_weights_sum_to_one() {
        let g = CircleGrid::new(256, 1e-4).unwrap();
        let total: f64 = (0..g.len()).map(|_| g.weight()).sum();
        assert_eq!(total, 1.0);
        for k in 0..g.len() {
            assert!((g.node(k).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn circle_eval_radius_backs_off_for_singular_variants() {
        let g = CircleGrid::new(64, 1e-4).unwrap();
        assert_eq!(g.eval_radius(&FunctionSpec::Monomial { n: 2 }), 1.0);
        assert_eq!(g.eval_radius(&FunctionSpec::LogKernel), 1.0 - 1e-4);
    }

    #[test]
    fn disk_mass_is_one() {
        for gauss in [4, 8] {
            let g = DiskGrid::new(64, 20, gauss).unwrap();
            assert!(
                (g.total_weight() - 1.0).abs() < 1e-10,
                "gauss {gauss}: mass {}",
                g.total_weight()
            );
        }
    }

    #[test]
    fn disk_log_moment_matches_closed_form() {
        // integral of log(1/|w|) dA = 1/2
        let g = DiskGrid::new(32, 20, 4).unwrap();
        let v = g.integrate(|_z, node| -node.r.ln());
        assert!((v - 0.5).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn disk_polynomial_moment() {
        // integral of (1 - |w|^2) dA = 1/2
        let g = DiskGrid::new(32, 10, 4).unwrap();
        let v = g.integrate(|_z, node| node.one_minus_r * (1.0 + node.r));
        assert!((v - 0.5).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn disk_nodes_are_interior_and_consistent() {
        let g = DiskGrid::new(16, 20, 4).unwrap();
        for node in g.radial() {
            assert!(node.r > 0.0 && node.r < 1.0);
            assert!((node.one_minus_r - (1.0 - node.r)).abs() < 1e-14);
            assert!(node.one_minus_r > 0.0);
        }
    }

    #[test]
    fn disk_suffix_start_aligns_with_dyadic_heights() {
        let g = DiskGrid::new(16, 12, 4).unwrap();
        for k in 1..=12u32 {
            let h = 0.5f64.powi(k as i32);
            let s = g.suffix_start(h);
            assert!(g.radial()[s..].iter().all(|n| n.one_minus_r < h));
            assert!(g.radial()[..s].iter().all(|n| n.one_minus_r >= h));
            // the tail mass equals integral of 2r over [1-h, 1]
            let tail: f64 = g.radial()[s..].iter().map(|n| n.weight).sum();
            let exact = 1.0 - (1.0 - h) * (1.0 - h);
            assert!((tail - exact).abs() < 1e-12, "depth {k}: {tail} vs {exact}");
        }
    }

    #[test]
    fn radial_window_integrates_linear_weight_exactly() {
        let g = RadialGrid::new(64, 1e-4).unwrap();
        for h in [1.0, 0.5, 0.03125] {
            let got = g.integrate_to_boundary(h, |_r, t| t).unwrap();
            let exact = 0.5 * (h * h - 1e-8);
            assert!((got - exact).abs() < 1e-12 * h.max(1e-2), "h {h}: {got} vs {exact}");
        }
    }

    #[test]
    fn radial_window_rejects_unresolvable_heights() {
        let g = RadialGrid::new(64, 1e-4).unwrap();
        assert!(g.integrate_to_boundary(5e-5, |_r, _t| 1.0).is_err());
    }

    #[test]
    fn arc_membership_is_half_open_and_wraps() {
        let a = Arc::new(0.0, 0.25).unwrap();
        assert!(a.contains(-PI / 4.0));
        assert!(!a.contains(PI / 4.0));
        assert!(a.contains(0.0));
        let wrapped = Arc::new(TAU - 0.01, 0.25).unwrap();
        assert!(wrapped.contains(0.1));
        assert!(wrapped.contains(TAU - 0.1));
        assert!(!wrapped.contains(PI));
    }

    #[test]
    fn arc_cell_overlap_recovers_exact_length() {
        let n = 96;
        let cw = TAU / n as f64;
        for &(center, length) in
            &[(0.0, 0.5), (0.3, 0.125), (6.1, 0.7), (3.3, 0.011), (1.0, 1.0), (0.05, 0.0003)]
        {
            let a = Arc::new(center, length).unwrap();
            let total: f64 =
                (0..n).map(|j| a.cell_overlap(TAU * j as f64 / n as f64, cw) / n as f64).sum();
            assert!((total - length).abs() < 1e-12, "arc ({center}, {length}): {total}");
        }
    }

    #[test]
    fn arc_family_respects_resolution_floor() {
        let fam = ArcFamily::dyadic(256, 10, 8);
        assert_eq!(fam.layers.last().unwrap().depth, 5); // 256 * 2^-5 = 8 nodes
        let unbounded = ArcFamily::dyadic(256, 10, 0);
        assert_eq!(unbounded.layers.last().unwrap().depth, 10);
    }

    #[test]
    fn wgrid_contains_origin_and_dyadic_radii() {
        let g = WGrid::dyadic(10, 64).unwrap();
        assert_eq!(g.points.len(), 1 + 10 * 64);
        assert_eq!(g.points[0], Complex64::new(0.0, 0.0));
        assert!((g.points[1].norm() - 0.5).abs() < 1e-15);
        assert!((g.points.last().unwrap().norm() - (1.0 - 0.5f64.powi(10))).abs() < 1e-15);
    }
}
