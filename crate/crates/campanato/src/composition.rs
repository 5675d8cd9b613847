//! Composition with analytic self-maps: the counting-function norm formula,
//! its exact identities, the splitting inequality, the three boundedness
//! criteria, and the interleaved lacunary pair with its certification.

use num_complex::Complex64;
use serde::Serialize;

use crate::counting::{nevanlinna_of, preimages};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::grid::{ArcFamily, CircleGrid, DiskGrid, RadialGrid, WGrid};
use crate::mobius::MobiusMap;
use crate::seminorm::{
    layer_window, Flag, IndexParams, SeminormReport, Witness, ZERO_SEMINORM,
};
use crate::selfmap::SelfMapSpec;

use std::f64::consts::TAU;

/// Boundary sample count for Hardy means of self-maps; a power of two large
/// enough that every polynomial family we build is alias-free.
const SELFMAP_NORM_SAMPLES: usize = 4096;

/// Values at the origin below this count as exactly zero for the
/// centered-map preconditions.
pub const ORIGIN_TOLERANCE: f64 = 1e-12;

/// The counting bound ratio is reported over nodes with 1 - |z| above this
/// edge: closer in, the root-refinement residual (1e-10) is no longer
/// negligible against log(1/|z|) and the ratio measures solver noise.
pub const BOUND_EDGE: f64 = 1e-4;

/// Disk grid used to certify lacunary pairs (angles, dyadic depth).
const CERTIFY_ANGLES: usize = 512;
const CERTIFY_DEPTH: u32 = 30;

/// A pair certifies only when the grid minimum of the derivative weight
/// exceeds this fraction of the grid maximum.
pub const CERTIFY_FLOOR: f64 = 0.01;

/// Composition norm via the counting-function identity.
#[derive(Debug, Clone, Serialize)]
pub struct StantonReport {
    pub value: f64,
    /// Area measure of nodes excluded because the counting function is
    /// infinite there, or |f|^{p-2} is singular (p < 2 at a zero of f).
    pub skipped_mass: f64,
}

/// `(|f(phi(0))|^p + (p^2/2) int |f|^{p-2} |f'|^2 N(phi, .) dA)^{1/p}`.
///
/// Equals the Hardy p-norm of `f∘phi`; the integrand's counting factor is
/// computed node-by-node from the preimage solver.  Integrable log
/// singularities of N sit at isolated points, so skipping the (rare) nodes
/// where N is infinite biases the quadrature by at most the skipped mass
/// times a bounded integrand factor, and that mass is reported.
pub fn stanton_norm(
    f: &FunctionSpec,
    phi: &SelfMapSpec,
    p: f64,
    grid: &DiskGrid,
) -> Result<StantonReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Precondition(format!(
            "composition norm needs p >= 1, got {p}"
        )));
    }
    f.validate()?;
    phi.certify()?;
    let head = f.evaluate(phi.at_origin()?)?.norm().powf(p);
    let aw = grid.angular_weight();
    let mut integral = 0.0;
    let mut skipped = 0.0;
    for node in grid.radial() {
        for j in 0..grid.angles() {
            let w = grid.unit(j) * node.r;
            let weight = node.weight * aw;
            let pre = preimages(phi, w)?;
            if pre.points.is_empty() {
                continue;
            }
            let counting = match nevanlinna_of(&pre) {
                Ok(v) => v,
                Err(Error::InfiniteValue(_)) => {
                    skipped += weight;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if counting == 0.0 {
                continue;
            }
            let slope = f.derivative_at(w)?.norm_sqr();
            let factor = if p == 2.0 {
                1.0
            } else {
                let m = f.evaluate(w)?.norm();
                if m == 0.0 {
                    if p > 2.0 {
                        continue;
                    }
                    skipped += weight;
                    continue;
                }
                m.powf(p - 2.0)
            };
            integral += weight * factor * slope * counting;
        }
    }
    Ok(StantonReport {
        value: (head + 0.5 * p * p * integral).powf(1.0 / p),
        skipped_mass: skipped,
    })
}

/// Exact-identity diagnostics for a centered self-map (`phi(0) = 0`).
#[derive(Debug, Clone, Serialize)]
pub struct CountingChecks {
    /// Squared Hardy-2 norm of the map by boundary sampling.
    pub norm_sq: f64,
    /// Twice the disk integral of the counting function.
    pub counting_integral: f64,
    /// Absolute difference of the two — zero in exact arithmetic.
    pub identity_gap: f64,
    /// Max over nodes 0.5 < |z| < 1 - BOUND_EDGE of
    /// N(phi, z) / ((4/log 2) norm_sq log(1/|z|)); at most 1 in exact
    /// arithmetic.
    pub bound_ratio: f64,
    #[serde(with = "crate::serde_complex")]
    pub bound_witness: Complex64,
    pub skipped_mass: f64,
}

/// Runs both counting-function estimates for a centered self-map: the
/// squared-norm identity and the pointwise logarithmic bound.
pub fn counting_checks(phi: &SelfMapSpec, grid: &DiskGrid) -> Result<CountingChecks> {
    phi.certify()?;
    if phi.at_origin()?.norm() > ORIGIN_TOLERANCE {
        return Err(Error::Precondition(
            "counting checks need a map with phi(0) = 0".into(),
        ));
    }
    let norm_sq = boundary_mean_sq(phi)?;
    let bound_scale = (4.0 / std::f64::consts::LN_2) * norm_sq;
    let aw = grid.angular_weight();
    let mut integral = 0.0;
    let mut skipped = 0.0;
    let mut bound_ratio = 0.0;
    let mut bound_witness = Complex64::new(0.0, 0.0);
    for node in grid.radial() {
        let in_window = node.r > 0.5 && node.one_minus_r > BOUND_EDGE;
        for j in 0..grid.angles() {
            let w = grid.unit(j) * node.r;
            let pre = preimages(phi, w)?;
            if pre.points.is_empty() {
                continue;
            }
            let counting = match nevanlinna_of(&pre) {
                Ok(v) => v,
                Err(Error::InfiniteValue(_)) => {
                    skipped += node.weight * aw;
                    continue;
                }
                Err(e) => return Err(e),
            };
            integral += 2.0 * node.weight * aw * counting;
            if in_window && counting > 0.0 {
                // log(1/|z|) = -log r, strictly positive in the window.
                let ratio = counting / (bound_scale * -node.r.ln());
                if ratio > bound_ratio {
                    bound_ratio = ratio;
                    bound_witness = w;
                }
            }
        }
    }
    Ok(CountingChecks {
        norm_sq,
        counting_integral: integral,
        identity_gap: (norm_sq - integral).abs(),
        bound_ratio,
        bound_witness,
        skipped_mass: skipped,
    })
}

/// Mean of |phi|^2 over equispaced boundary samples — exact for polynomial
/// variants below the alias degree, and for inner variants (|phi| = 1).
fn boundary_mean_sq(phi: &SelfMapSpec) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..SELFMAP_NORM_SAMPLES {
        let z = Complex64::from_polar(1.0, TAU * k as f64 / SELFMAP_NORM_SAMPLES as f64);
        acc += phi.evaluate(z)?.norm_sqr();
    }
    Ok(acc / SELFMAP_NORM_SAMPLES as f64)
}

/// Mean of |phi|^p over the same samples, for the splitting denominator.
fn boundary_norm_p(phi: &SelfMapSpec, p: f64) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..SELFMAP_NORM_SAMPLES {
        let z = Complex64::from_polar(1.0, TAU * k as f64 / SELFMAP_NORM_SAMPLES as f64);
        acc += phi.evaluate(z)?.norm().powf(p);
    }
    Ok((acc / SELFMAP_NORM_SAMPLES as f64).powf(1.0 / p))
}

/// Ratio in the Hardy-norm splitting inequality for centered maps.
#[derive(Debug, Clone, Serialize)]
pub struct SplittingReport {
    /// Hardy p-norm of f∘phi by circle pullback.
    pub composed: f64,
    /// Hardy p-norm of f.
    pub outer_norm: f64,
    /// Hardy p-norm of phi.
    pub inner_norm: f64,
    /// composed / (outer_norm * inner_norm^{2/p}).
    pub ratio: f64,
}

/// `hardy(f∘phi, p) / (hardy(f, p) * hardy(phi, p)^{2/p})` for f(0) = 0,
/// phi(0) = 0, p >= 2.  The subordination bound says this is O(1).
pub fn splitting_ratio(
    f: &FunctionSpec,
    phi: &SelfMapSpec,
    p: f64,
    grid: &CircleGrid,
) -> Result<SplittingReport> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::Precondition(format!(
            "splitting ratio needs p >= 2, got {p}"
        )));
    }
    f.validate()?;
    phi.certify()?;
    if f.evaluate(Complex64::new(0.0, 0.0))?.norm() > ORIGIN_TOLERANCE {
        return Err(Error::Precondition("splitting ratio needs f(0) = 0".into()));
    }
    if phi.at_origin()?.norm() > ORIGIN_TOLERANCE {
        return Err(Error::Precondition("splitting ratio needs phi(0) = 0".into()));
    }
    // phi(0) = 0 keeps |phi(rho zeta)| <= rho, so a singular f still sees
    // arguments strictly inside its domain.
    let rho = grid.eval_radius(f);
    let mut acc = 0.0;
    for k in 0..grid.len() {
        let arg = phi.evaluate(grid.node(k) * rho)?;
        acc += grid.weight() * f.evaluate(arg)?.norm().powf(p);
    }
    let composed = acc.powf(1.0 / p);
    let outer_norm = crate::seminorm::hardy_norm(f, p, grid)?;
    let inner_norm = boundary_norm_p(phi, p)?;
    if outer_norm <= ZERO_SEMINORM || inner_norm <= ZERO_SEMINORM {
        return Err(Error::Degenerate(
            "splitting ratio needs both factors nonvanishing".into(),
        ));
    }
    Ok(SplittingReport {
        composed,
        outer_norm,
        inner_norm,
        ratio: composed / (outer_norm * inner_norm.powf(2.0 / p)),
    })
}

/// Möbius-shift boundedness criterion: with q = 2 fixed,
///
/// `sup_w (1-|w|^2)^{(1-lambda)/2} / (1-|phi(w)|^2)^{(1-eta)/p}
///        * || sigma_{phi(w)} ∘ phi ∘ sigma_w ||_{H^2}`.
///
/// The inner norm is a circle-grid mean; the supremum runs over the w-grid.
pub fn mobius_composition_criterion(
    phi: &SelfMapSpec,
    p: f64,
    eta: f64,
    lambda: f64,
    wgrid: &WGrid,
    cgrid: &CircleGrid,
) -> Result<SeminormReport> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::Precondition(format!(
            "criterion fixes q = 2 <= p, got p = {p}"
        )));
    }
    for (name, v) in [("eta", eta), ("lambda", lambda)] {
        if !(v > 0.0 && v < 2.0) {
            return Err(Error::Precondition(format!(
                "criterion needs {name} in (0, 2), got {v}"
            )));
        }
    }
    phi.certify()?;
    let mut best = 0.0f64;
    let mut witness = Witness::None;
    for &w in &wgrid.points {
        let w_abs = w.norm();
        let omw2 = (1.0 - w_abs) * (1.0 + w_abs);
        let omp2 = phi.one_minus_abs_sq(w, omw2)?;
        if omp2 <= 0.0 {
            return Err(Error::Resolution(format!(
                "map image touches the boundary at w = {w} within rounding"
            )));
        }
        let inner = MobiusMap::new(w)?;
        let outer = MobiusMap::new(phi.evaluate(w)?)?;
        let mut mean = 0.0;
        for k in 0..cgrid.len() {
            let pulled = outer.apply(phi.evaluate(inner.apply(cgrid.node(k))?)?)?;
            mean += cgrid.weight() * pulled.norm_sqr();
        }
        let value =
            omw2.powf(0.5 * (1.0 - lambda)) / omp2.powf((1.0 - eta) / p) * mean.sqrt();
        if value > best {
            best = value;
            witness = Witness::Point { z: w };
        }
    }
    let mut flags = vec![];
    if best <= ZERO_SEMINORM {
        flags.push(Flag::Degenerate);
    }
    Ok(SeminormReport {
        value: best,
        witness,
        regime: IndexParams::new(2.0, lambda)?.regime(),
        flags,
    })
}

/// Derivative-weight boundedness criterion:
/// `sup_w (1-|w|^2)^alpha |phi'(w)| / (1-|phi(w)|^2)^{(p+1-eta)/p}`.
pub fn bloch_composition_criterion(
    phi: &SelfMapSpec,
    alpha: f64,
    p: f64,
    eta: f64,
    grid: &DiskGrid,
) -> Result<SeminormReport> {
    check_criterion_indices(alpha, p, eta)?;
    phi.certify()?;
    let exponent = (p + 1.0 - eta) / p;
    let mut best = 0.0f64;
    let mut witness = Witness::None;
    for node in grid.radial() {
        let omr2 = node.one_minus_r * (1.0 + node.r);
        let head = omr2.powf(alpha);
        for j in 0..grid.angles() {
            let w = grid.unit(j) * node.r;
            let omp2 = phi.one_minus_abs_sq(w, omr2)?;
            if omp2 <= 0.0 {
                return Err(Error::Resolution(format!(
                    "map image touches the boundary at w = {w} within rounding"
                )));
            }
            let value = head * phi.derivative_at(w)?.norm() / omp2.powf(exponent);
            if value > best {
                best = value;
                witness = Witness::Point { z: w };
            }
        }
    }
    let mut flags = vec![];
    if best <= ZERO_SEMINORM {
        flags.push(Flag::Degenerate);
    }
    Ok(SeminormReport {
        value: best,
        witness,
        regime: IndexParams::new(p, eta)?.regime(),
        flags,
    })
}

/// Radial derivative-mean boundedness criterion:
///
/// `max_I (h^{-eta} * (1/N) sum_{zeta in I}
///         (int_{1-h}^1 |phi'(r zeta)|^2 (1-r)^{1-2 alpha} dr)^{p/2})^{1/p}`.
///
/// The weight (1-r)^{1-2 alpha} is integrable only for alpha < 1; above
/// that the criterion integral diverges for every nonconstant map.
pub fn paley_composition_criterion(
    phi: &SelfMapSpec,
    alpha: f64,
    p: f64,
    eta: f64,
    arcs: &ArcFamily,
    rgrid: &RadialGrid,
) -> Result<SeminormReport> {
    check_criterion_indices(alpha, p, eta)?;
    if alpha >= 1.0 {
        return Err(Error::SingularWeight(format!(
            "radial weight exponent 1 - 2 alpha = {} is not integrable",
            1.0 - 2.0 * alpha
        )));
    }
    phi.certify()?;
    let n = arcs.circle_n;
    let weight_exp = 1.0 - 2.0 * alpha;
    let mut best = 0.0f64;
    let mut witness = Witness::None;
    for layer in &arcs.layers {
        let h = layer.length;
        // Radial mean per angular node, then p/2-power.
        let mut powered = Vec::with_capacity(n);
        for k in 0..n {
            let zeta = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
            let mut slip: Option<Error> = None;
            let inner = rgrid.integrate_to_boundary(h, |r, t| {
                match phi.derivative_at(zeta * r) {
                    Ok(d) => d.norm_sqr() * t.powf(weight_exp),
                    Err(e) => {
                        slip.get_or_insert(e);
                        0.0
                    }
                }
            })?;
            if let Some(e) = slip {
                return Err(e);
            }
            powered.push(inner.powf(0.5 * p));
        }
        let window = layer_window(n, h);
        let mut sum: f64 = (0..window.count)
            .map(|i| powered[(window.start + i) % n])
            .sum();
        let scale = h.powf(-eta) / n as f64;
        for &center in &layer.centers {
            let value = (sum.max(0.0) * scale).powf(1.0 / p);
            if value > best {
                best = value;
                witness = Witness::Arc {
                    center: arcs.theta(center),
                    length: h,
                };
            }
            // Slide the membership window by one node per center step.
            let leaving = (window.start + center) % n;
            let entering = (window.start + window.count + center) % n;
            sum += powered[entering] - powered[leaving];
        }
    }
    let mut flags = vec![];
    if best <= ZERO_SEMINORM {
        flags.push(Flag::Degenerate);
        witness = Witness::None;
    }
    Ok(SeminormReport {
        value: best,
        witness,
        regime: IndexParams::new(p, eta)?.regime(),
        flags,
    })
}

fn check_criterion_indices(alpha: f64, p: f64, eta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Precondition(format!(
            "criterion needs alpha > 0, got {alpha}"
        )));
    }
    if !(p >= 1.0 && p.is_finite() && eta > 0.0 && eta < 1.0 + p) {
        return Err(Error::Precondition(format!(
            "criterion needs p >= 1 and eta in (0, 1 + p), got ({p}, {eta})"
        )));
    }
    Ok(())
}

/// Interleaved lacunary pair whose combined derivative weight is bounded
/// above and below.
#[derive(Debug, Clone, Serialize)]
pub struct BlochPair {
    pub f1: FunctionSpec,
    pub f2: FunctionSpec,
    /// Gap base used by both series.
    pub base: u32,
    /// Grid extrema of (1-|z|^2)^{2 alpha} (|f1'|^2 + |f2'|^2).
    pub weight_min: f64,
    pub weight_max: f64,
}

impl BlochPair {
    pub fn floor_ratio(&self) -> f64 {
        self.weight_min / self.weight_max
    }
}

/// Builds the pair for a weight exponent and certifies the two-sided bound
/// on a fine disk grid.
///
/// Gaps are n_k = base^k for one series and base^{k + 1/2} for the other,
/// with coefficients n_k^{alpha - 1}: each series alone peaks near the
/// radii 1 - 1/n_k and — having an analytic derivative — dips to zero
/// somewhere between its peaks; the half-phase copy peaks exactly at those
/// handover radii.
///
/// The base balances two failure modes.  Too small, and neighbouring terms
/// are comparable at the peak radii (the off-peak tail carries weight
/// ~ 1/(base^alpha - 1)), so the two derivatives can cancel at a common
/// point; too large, and the weight sags at the handover radii by a factor
/// ~ base^{-alpha/4}.  A grid sweep over base x alpha put the certified
/// floor past 0.09 of the peak for every alpha in [0.3, 2] with
/// base = 4^{1/alpha} clamped to [16, 64], and that rule is frozen here.
pub fn bloch_pair(alpha: f64) -> Result<BlochPair> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Precondition(format!(
            "lacunary pair needs alpha > 0, got {alpha}"
        )));
    }
    let base = 4f64.powf(1.0 / alpha).ceil().clamp(16.0, 64.0) as u32;
    let f1 = FunctionSpec::Lacunary { base, alpha, phase: 0.0 };
    let f2 = FunctionSpec::Lacunary { base, alpha, phase: 0.5 };
    let grid = DiskGrid::new(CERTIFY_ANGLES, CERTIFY_DEPTH, 4)?;
    let (weight_min, weight_max) = pair_weight_extrema(&f1, &f2, alpha, &grid)?;
    if weight_min <= CERTIFY_FLOOR * weight_max {
        return Err(Error::Certification(format!(
            "derivative weight dips to {weight_min:.3e} against a peak of \
             {weight_max:.3e} (alpha = {alpha}, base = {base})"
        )));
    }
    Ok(BlochPair { f1, f2, base, weight_min, weight_max })
}

/// Grid extrema of the combined derivative weight
/// (1-|z|^2)^{2 alpha} (|f'|^2 + |g'|^2); pass the same function twice to
/// probe a single series (the negative control).
pub fn pair_weight_extrema(
    f: &FunctionSpec,
    g: &FunctionSpec,
    alpha: f64,
    grid: &DiskGrid,
) -> Result<(f64, f64)> {
    f.validate()?;
    g.validate()?;
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for node in grid.radial() {
        let omr2 = node.one_minus_r * (1.0 + node.r);
        let head = omr2.powf(2.0 * alpha);
        for j in 0..grid.angles() {
            let z = grid.unit(j) * node.r;
            let w = head * (f.derivative_at(z)?.norm_sqr() + g.derivative_at(z)?.norm_sqr());
            min = min.min(w);
            max = max.max(w);
        }
    }
    Ok((min, max))
}
