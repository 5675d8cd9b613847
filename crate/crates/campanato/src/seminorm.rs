//! Oscillation seminorms on the disk and their grid discretizations.
//!
//! All seminorms here share one report shape: the discretized supremum, the
//! arc or point where it was attained, the index regime the parameters fall
//! in, and qualitative flags (bounded/divergent growth across depths,
//! degenerate zero values).  Suprema over arcs run over a dyadic family via
//! sliding windows, so a full sweep costs about twice the work of the
//! finest layer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::grid::{Arc, ArcFamily, CircleGrid, DiskGrid, RadialGrid, WGrid};
use crate::mobius::MobiusMap;

/// Values at or below this are treated as a vanishing seminorm (the exact
/// zero of a constant function, up to accumulated rounding).
pub const ZERO_SEMINORM: f64 = 1e-12;

/// Consecutive per-depth growth above this factor marks a seminorm as
/// divergent; bounded seminorms settle toward flat layer maxima while
/// out-of-regime ones grow geometrically.
pub const DIVERGENCE_GROWTH: f64 = 1.10;

/// Integrability and oscillation indices `(p, eta)` shared by every seminorm
/// in this module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IndexParamsRaw", into = "IndexParamsRaw")]
pub struct IndexParams {
    p: f64,
    eta: f64,
}

#[derive(Serialize, Deserialize)]
struct IndexParamsRaw {
    p: f64,
    eta: f64,
}

impl TryFrom<IndexParamsRaw> for IndexParams {
    type Error = Error;

    fn try_from(raw: IndexParamsRaw) -> Result<Self> {
        IndexParams::new(raw.p, raw.eta)
    }
}

impl From<IndexParams> for IndexParamsRaw {
    fn from(params: IndexParams) -> Self {
        IndexParamsRaw {
            p: params.p,
            eta: params.eta,
        }
    }
}

impl IndexParams {
    pub fn new(p: f64, eta: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "integrability index p must be >= 1, got {p}"
            )));
        }
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "oscillation index eta must be >= 0, got {eta}"
            )));
        }
        Ok(IndexParams { p, eta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Derivative-growth exponent `(p + 1 - eta) / p` matching these indices:
    /// the space embeds in the weighted Bloch class with this weight power.
    pub fn alpha(&self) -> f64 {
        (self.p + 1.0 - self.eta) / self.p
    }

    /// Classical space the indices correspond to.
    pub fn regime(&self) -> Regime {
        let eta = self.eta;
        if eta == 0.0 {
            Regime::Hardy
        } else if eta < 1.0 - 1e-12 {
            Regime::Morrey
        } else if eta <= 1.0 + 1e-12 {
            Regime::Bmoa
        } else if eta <= 1.0 + self.p + 1e-12 {
            Regime::Lipschitz
        } else {
            Regime::ConstantsOnly
        }
    }
}

/// Classical function space determined by `(p, eta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Regime {
    /// `eta = 0`: the Hardy space H^p.
    Hardy,
    /// `0 < eta < 1`: Morrey-type spaces.
    Morrey,
    /// `eta = 1`: analytic functions of bounded mean oscillation.
    Bmoa,
    /// `1 < eta <= 1 + p`: Lipschitz classes of order (eta - 1)/p.
    Lipschitz,
    /// `eta > 1 + p`: only constants have a finite seminorm.
    ConstantsOnly,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Regime::Hardy => "HARDY",
            Regime::Morrey => "MORREY",
            Regime::Bmoa => "BMOA",
            Regime::Lipschitz => "LIPSCHITZ",
            Regime::ConstantsOnly => "CONSTANTS-ONLY",
        };
        f.write_str(name)
    }
}

/// Qualitative outcome markers attached to reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Flag {
    /// Layer maxima settled; the discretized supremum is trustworthy.
    Bounded,
    /// Layer maxima kept growing by more than [`DIVERGENCE_GROWTH`] per
    /// depth; the true supremum is likely infinite.
    Divergent,
    /// The value vanished (constant input or an excluded comparison).
    Degenerate,
    /// The integrand was singular on part of the domain and was truncated.
    Singular,
    /// Some quadrature mass had to be skipped around non-integrable points.
    SkippedMass,
    /// The parameters fall outside the regime the quantity is designed for;
    /// the number is reported anyway.
    OutsideRegime,
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Flag::Bounded => "BOUNDED",
            Flag::Divergent => "DIVERGENT",
            Flag::Degenerate => "DEGENERATE",
            Flag::Singular => "SINGULAR",
            Flag::SkippedMass => "SKIPPED-MASS",
            Flag::OutsideRegime => "OUTSIDE-REGIME",
        };
        f.write_str(name)
    }
}

/// Where a discretized supremum was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A boundary arc, by center angle and normalized length.
    Arc { center: f64, length: f64 },
    /// A point of the disk.
    Point {
        #[serde(with = "crate::serde_complex")]
        z: Complex64,
    },
    /// No witness applies (degenerate value).
    None,
}

/// Result of a seminorm sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SeminormReport {
    /// Discretized supremum.
    pub value: f64,
    /// Arc or point attaining it.
    pub witness: Witness,
    /// Index regime of the parameters used.
    pub regime: Regime,
    /// Qualitative markers; always contains Bounded or Divergent.
    pub flags: Vec<Flag>,
}

impl SeminormReport {
    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }
}

/// Hardy norm `((1/N) sum |f(zeta_k)|^p)^{1/p}` over the circle grid, with
/// boundary-singular functions sampled just inside the circle.
pub fn hardy_norm(f: &FunctionSpec, p: f64, grid: &CircleGrid) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidSpec(format!("hardy norm needs p >= 1, got {p}")));
    }
    f.validate()?;
    let samples = grid.sample(f)?;
    let mean: f64 = samples.iter().map(|v| pow_abs(v.norm(), p)).sum::<f64>() * grid.weight();
    Ok(mean.powf(1.0 / p))
}

/// Mean-oscillation seminorm: the supremum over dyadic arcs `I` of
/// `(|I|^{-eta} * (1/N) * sum_{zeta in I} |f(zeta) - mean_I f|^p)^{1/p}`.
pub fn campanato_seminorm(
    f: &FunctionSpec,
    params: IndexParams,
    arcs: &ArcFamily,
    grid: &CircleGrid,
) -> Result<SeminormReport> {
    if grid.len() != arcs.circle_n {
        return Err(Error::Precondition(format!(
            "arc family is indexed on {} nodes but the grid has {}",
            arcs.circle_n,
            grid.len()
        )));
    }
    f.validate()?;
    let samples = grid.sample(f)?;
    campanato_seminorm_from_samples(&samples, params, arcs)
}

/// Same sweep on caller-provided boundary samples (one per angular node of
/// the arc family's grid, in angular order).
pub fn campanato_seminorm_from_samples(
    samples: &[Complex64],
    params: IndexParams,
    arcs: &ArcFamily,
) -> Result<SeminormReport> {
    let n = arcs.circle_n;
    if samples.len() != n {
        return Err(Error::Precondition(format!(
            "got {} samples for an arc family on {} nodes",
            samples.len(),
            n
        )));
    }
    // Prefix sums over the doubled sample array make circular window sums
    // O(1) each.
    let mut prefix = Vec::with_capacity(2 * n + 1);
    prefix.push(Complex64::new(0.0, 0.0));
    for k in 0..2 * n {
        prefix.push(prefix[k] + samples[k % n]);
    }

    let mut best = 0.0f64;
    let mut witness = Witness::None;
    let mut layer_maxima = Vec::with_capacity(arcs.layers.len());
    for layer in &arcs.layers {
        let window = layer_window(n, layer.length);
        if window.count == 0 {
            continue;
        }
        let h_pow = layer.length.powf(-params.eta);
        let mut layer_max = 0.0f64;
        for &center in &layer.centers {
            let start = (window.start + center) % n;
            let sum = prefix[start + window.count] - prefix[start];
            let mean = sum / window.count as f64;
            let mut osc = 0.0;
            for j in start..start + window.count {
                osc += pow_abs((samples[j % n] - mean).norm(), params.p);
            }
            let value = (h_pow * osc / n as f64).powf(1.0 / params.p);
            if value > layer_max {
                layer_max = value;
            }
            if value > best {
                best = value;
                witness = Witness::Arc {
                    center: arcs.theta(center),
                    length: layer.length,
                };
            }
        }
        layer_maxima.push(layer_max);
    }

    Ok(finish_report(best, witness, params.regime(), &layer_maxima, vec![]))
}

/// Invariant seminorm `sup_w (1-|w|^2)^{(1-eta)/p} * ||f o sigma_w - f(w)||_p`
/// over a grid of disk points, with the inner mean taken over the circle
/// grid.  Designed for `0 < eta < 2`; outside that range the sweep still runs
/// but the report is flagged.
pub fn mobius_seminorm(
    f: &FunctionSpec,
    params: IndexParams,
    wgrid: &WGrid,
    grid: &CircleGrid,
) -> Result<SeminormReport> {
    f.validate()?;
    let exponent = (1.0 - params.eta) / params.p;
    let rho = grid.eval_radius(f);
    let mut extra = vec![];
    if !(params.eta > 0.0 && params.eta < 2.0) {
        extra.push(Flag::OutsideRegime);
    }
    if rho < 1.0 {
        extra.push(Flag::Singular);
    }

    let mut best = 0.0f64;
    let mut witness = Witness::None;
    // Track the maximum per dyadic radius of |w| so divergence in w shows up
    // the same way arc-depth divergence does.
    let mut shell_maxima: Vec<f64> = vec![];
    let mut current_norm = -1.0f64;
    for &w in &wgrid.points {
        let map = MobiusMap::new(w)?;
        let fw = f.evaluate(w)?;
        let factor = (1.0 - w.norm_sqr()).powf(exponent);
        let mut mean = 0.0;
        for k in 0..grid.len() {
            let boundary = map.apply(grid.node(k))?;
            let value = f.evaluate(boundary * rho)?;
            mean += pow_abs((value - fw).norm(), params.p);
        }
        mean *= grid.weight();
        let value = factor * mean.powf(1.0 / params.p);
        if (w.norm() - current_norm).abs() > 1e-12 {
            shell_maxima.push(value);
            current_norm = w.norm();
        } else if let Some(last) = shell_maxima.last_mut() {
            *last = last.max(value);
        }
        if value > best {
            best = value;
            witness = Witness::Point { z: w };
        }
    }

    Ok(finish_report(best, witness, params.regime(), &shell_maxima, extra))
}

/// Which square-function weight `lp_star_seminorm` integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStarVariant {
    /// Weight `(1 - r)` against `|f'|^2` — the analytic square function.
    Analytic,
    /// Weight `2 (1 - r^2)` against `|f'|^2`, i.e. the gradient of the
    /// harmonic extension: `|grad Pf|^2 = 2 |f'|^2` for analytic `f`.
    Harmonic,
}

/// Square-function seminorm: the supremum over dyadic arcs of
/// `(h^{-eta} * (1/N) * sum_{zeta in I} (int_{1-h}^{1-delta}
/// |f'(r zeta)|^2 w(r) dr)^{p/2})^{1/p}`.
pub fn lp_star_seminorm(
    f: &FunctionSpec,
    params: IndexParams,
    variant: LpStarVariant,
    arcs: &ArcFamily,
    radial: &RadialGrid,
) -> Result<SeminormReport> {
    f.validate()?;
    let n = arcs.circle_n;
    let mut best = 0.0f64;
    let mut witness = Witness::None;
    let mut layer_maxima = Vec::with_capacity(arcs.layers.len());
    let mut powed = vec![0.0f64; n];
    for layer in &arcs.layers {
        let h = layer.length;
        // Inner radial integral per angular node, then a sliding window sum.
        for (j, slot) in powed.iter_mut().enumerate() {
            let zeta = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
            let mut failure = None;
            let inner = radial.integrate_to_boundary(h, |r, t| {
                match f.derivative_at(zeta * r) {
                    Ok(d) => {
                        let weight = match variant {
                            LpStarVariant::Analytic => t,
                            LpStarVariant::Harmonic => 2.0 * t * (1.0 + r),
                        };
                        d.norm_sqr() * weight
                    }
                    Err(err) => {
                        failure = Some(err);
                        0.0
                    }
                }
            })?;
            if let Some(err) = failure {
                return Err(err);
            }
            *slot = inner.powf(params.p / 2.0);
        }
        let mut prefix = Vec::with_capacity(2 * n + 1);
        prefix.push(0.0f64);
        for k in 0..2 * n {
            prefix.push(prefix[k] + powed[k % n]);
        }
        let window = layer_window(n, h);
        if window.count == 0 {
            continue;
        }
        let h_pow = h.powf(-params.eta);
        let mut layer_max = 0.0f64;
        for &center in &layer.centers {
            let start = (window.start + center) % n;
            let outer = (prefix[start + window.count] - prefix[start]) / n as f64;
            let value = (h_pow * outer).powf(1.0 / params.p);
            if value > layer_max {
                layer_max = value;
            }
            if value > best {
                best = value;
                witness = Witness::Arc {
                    center: arcs.theta(center),
                    length: h,
                };
            }
        }
        layer_maxima.push(layer_max);
    }

    Ok(finish_report(best, witness, params.regime(), &layer_maxima, vec![]))
}

/// Weighted derivative supremum `sup_z (1 - |z|^2)^alpha |f'(z)|` over the
/// disk grid.
pub fn bloch_norm(f: &FunctionSpec, alpha: f64, disk: &DiskGrid) -> Result<SeminormReport> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "bloch weight exponent must be positive, got {alpha}"
        )));
    }
    f.validate()?;
    let mut best = 0.0f64;
    let mut witness = Witness::None;
    // Maxima per radial level, outermost last, for the divergence check.
    let mut level_maxima: Vec<f64> = vec![];
    let mut current_r = -1.0f64;
    for node in disk.radial() {
        let weight = (node.one_minus_r * (1.0 + node.r)).powf(alpha);
        if node.r != current_r {
            level_maxima.push(0.0);
            current_r = node.r;
        }
        for j in 0..disk.angles() {
            let z = disk.unit(j) * node.r;
            let value = weight * f.derivative_at(z)?.norm();
            if value > best {
                best = value;
                witness = Witness::Point { z };
            }
            if let Some(last) = level_maxima.last_mut() {
                if value > *last {
                    *last = value;
                }
            }
        }
    }
    // A regime is not meaningful for a bare weighted sup; report the closest
    // match (alpha relates to (p, eta) by alpha = (p + 1 - eta)/p, and any
    // alpha > 0 realizes some valid pair, e.g. p = 1, eta = 2 - alpha).
    let params = IndexParams::new(1.0, (2.0 - alpha).max(0.0))?;
    Ok(finish_report(best, witness, params.regime(), &level_maxima, vec![]))
}

/// Pairwise comparison of two seminorm sweeps over one family of functions.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    /// Ratio numerator/denominator per family member, degenerate pairs
    /// excluded.
    pub ratios: Vec<f64>,
    /// Members where both seminorms vanished (constants).
    pub excluded: usize,
    pub min: f64,
    pub max: f64,
    /// max / min — the observed equivalence constant spread.
    pub spread: f64,
}

/// Compares two seminorms across a family: `numerators[i]` and
/// `denominators[i]` are the two seminorm values for member `i`.
///
/// Members where both vanish (constants) are excluded; a member where only
/// one vanishes is a degeneracy error, since no equivalence constant can
/// cover it.
pub fn equivalence_report(numerators: &[f64], denominators: &[f64]) -> Result<RatioReport> {
    if numerators.len() != denominators.len() || numerators.is_empty() {
        return Err(Error::Precondition(format!(
            "ratio report needs matching nonempty value lists, got {} and {}",
            numerators.len(),
            denominators.len()
        )));
    }
    let mut ratios = Vec::with_capacity(numerators.len());
    let mut excluded = 0usize;
    for (&a, &b) in numerators.iter().zip(denominators) {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
            return Err(Error::Precondition(format!(
                "seminorm values must be finite and nonnegative, got {a} and {b}"
            )));
        }
        let a_zero = a <= ZERO_SEMINORM;
        let b_zero = b <= ZERO_SEMINORM;
        match (a_zero, b_zero) {
            (true, true) => excluded += 1,
            (false, false) => ratios.push(a / b),
            _ => {
                return Err(Error::Degenerate(format!(
                    "one seminorm vanishes while the other is {}; no equivalence constant exists",
                    if a_zero { b } else { a }
                )))
            }
        }
    }
    if ratios.is_empty() {
        return Err(Error::Degenerate(
            "every family member had vanishing seminorms".into(),
        ));
    }
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0f64, f64::max);
    Ok(RatioReport {
        ratios,
        excluded,
        min,
        max,
        spread: max / min,
    })
}

fn pow_abs(base: f64, p: f64) -> f64 {
    if p == 2.0 {
        base * base
    } else if p == 1.0 {
        base
    } else {
        base.powf(p)
    }
}

pub(crate) struct LayerWindow {
    pub(crate) start: usize,
    pub(crate) count: usize,
}

/// Indices of angular nodes inside the arc of the given length centered at
/// node 0, as a circular range starting at `start`.  Membership for other
/// centers is the same window rotated, which keeps every center's node count
/// identical (grid and centers share the same equispaced angles).
pub(crate) fn layer_window(n: usize, length: f64) -> LayerWindow {
    let arc = Arc { center: 0.0, length };
    let members: Vec<bool> = (0..n)
        .map(|j| arc.contains(TAU * j as f64 / n as f64))
        .collect();
    let count = members.iter().filter(|&&m| m).count();
    if count == n {
        return LayerWindow { start: 0, count };
    }
    let start = (0..n)
        .find(|&j| members[j] && !members[(j + n - 1) % n])
        .unwrap_or(0);
    LayerWindow { start, count }
}

fn finish_report(
    value: f64,
    witness: Witness,
    regime: Regime,
    layer_maxima: &[f64],
    mut extra: Vec<Flag>,
) -> SeminormReport {
    let mut flags = vec![growth_flag(layer_maxima)];
    if value <= ZERO_SEMINORM {
        flags.push(Flag::Degenerate);
    }
    flags.append(&mut extra);
    let witness = if value <= ZERO_SEMINORM { Witness::None } else { witness };
    SeminormReport {
        value,
        witness,
        regime,
        flags,
    }
}

/// Bounded unless the last two depth-to-depth growth factors both exceed
/// [`DIVERGENCE_GROWTH`].
fn growth_flag(layer_maxima: &[f64]) -> Flag {
    if layer_maxima.len() >= 3 {
        let k = layer_maxima.len();
        let (a, b, c) = (layer_maxima[k - 3], layer_maxima[k - 2], layer_maxima[k - 1]);
        if a > ZERO_SEMINORM
            && b > a * DIVERGENCE_GROWTH
            && c > b * DIVERGENCE_GROWTH
        {
            return Flag::Divergent;
        }
    }
    Flag::Bounded
}
