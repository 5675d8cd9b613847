//! Preimage enumeration and the logarithmic counting function of a disk
//! self-map.
//!
//! The counting function at a target `w` sums `log(1/|z|)` over the
//! solutions of `phi(z) = w` inside the disk, with multiplicity.  Solutions
//! come from closed forms where the map allows it and from the companion
//! eigensolver otherwise.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots;
use crate::selfmap::SelfMapSpec;

/// Accepted defect `|phi(z) - w|` for a returned preimage.
pub const PREIMAGE_RESIDUAL: f64 = 1e-8;

/// Preimages closer to the origin than this make the counting function
/// numerically infinite.
pub const ORIGIN_CUTOFF: f64 = 1e-12;

/// Preimages must stay this far inside the unit circle to count; boundary
/// solutions contribute nothing to the counting function anyway.
const BOUNDARY_CUTOFF: f64 = 1e-12;

/// One solution of `phi(z) = w`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PreimagePoint {
    #[serde(with = "crate::serde_complex")]
    pub z: Complex64,
    pub multiplicity: u32,
}

/// All solutions of `phi(z) = w` in the open disk.
#[derive(Debug, Clone, Serialize)]
pub struct Preimages {
    pub points: Vec<PreimagePoint>,
    /// Two solution clusters nearly coincide; multiplicities may be split
    /// arbitrarily between them.
    pub conditioning_warning: bool,
}

impl Preimages {
    pub fn total_multiplicity(&self) -> u32 {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    fn empty() -> Self {
        Preimages {
            points: vec![],
            conditioning_warning: false,
        }
    }
}

/// Solves `phi(z) = w` for `|w| < 1`, returning every solution in the open
/// disk with its multiplicity.
pub fn preimages(phi: &SelfMapSpec, w: Complex64) -> Result<Preimages> {
    phi.validate()?;
    if !w.re.is_finite() || !w.im.is_finite() || w.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "preimages are enumerated for targets strictly inside the disk, got |w| = {}",
            w.norm()
        )));
    }
    let raw = match phi {
        SelfMapSpec::Mobius { map } => {
            // The automorphism is an involution: the unique solution is
            // sigma_a(w) itself.
            vec![map.apply(w)?]
        }
        SelfMapSpec::Polynomial { coeffs } => {
            let mut shifted = coeffs.clone();
            shifted[0] -= w;
            polynomial_preimages(&shifted)?
        }
        SelfMapSpec::Blaschke { zeros, rotation } => {
            // rotation * prod (a_j - z) - w * prod (1 - conj(a_j) z) = 0.
            let mut numerator = vec![*rotation];
            let mut denominator = vec![Complex64::new(1.0, 0.0)];
            for &a in zeros {
                numerator = convolve(&numerator, &[a, Complex64::new(-1.0, 0.0)]);
                denominator = convolve(&denominator, &[Complex64::new(1.0, 0.0), -a.conj()]);
            }
            let coeffs: Vec<Complex64> = numerator
                .iter()
                .zip(&denominator)
                .map(|(n, d)| n - w * d)
                .collect();
            roots::polynomial_roots(&coeffs)?
        }
        SelfMapSpec::Scaled { c, inner } => {
            // c * inner(z) = w has solutions only when w/c is back inside
            // the disk; otherwise w misses the image entirely.
            if w.norm() >= *c {
                return Ok(Preimages::empty());
            }
            let inner_set = preimages(inner, w / *c)?;
            return Ok(inner_set);
        }
    };

    let set = roots::cluster(raw);
    let mut points = Vec::with_capacity(set.clusters.len());
    for cl in set.clusters {
        if cl.z.norm() >= 1.0 - BOUNDARY_CUTOFF {
            continue;
        }
        let residual = (phi.evaluate(cl.z)? - w).norm();
        if residual > PREIMAGE_RESIDUAL {
            return Err(Error::Convergence(format!(
                "candidate preimage {} misses the target by {residual:.3e}",
                cl.z
            )));
        }
        points.push(PreimagePoint {
            z: cl.z,
            multiplicity: cl.multiplicity,
        });
    }
    Ok(Preimages {
        points,
        conditioning_warning: set.conditioning_warning,
    })
}

/// Roots of an explicit polynomial, with closed forms for the shapes that
/// dominate the workload (the solver runs once per quadrature node).
fn polynomial_preimages(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut d = coeffs.len() - 1;
    while d > 0 && coeffs[d].norm() == 0.0 {
        d -= 1;
    }
    if d == 0 {
        // Constant shifted polynomial: either no solutions or the constant
        // map, which validation already excluded.
        return Ok(vec![]);
    }
    let body = &coeffs[..=d];
    // Binomial c_d z^d + c_0: the d-th roots of -c_0/c_d.
    if d >= 3 && body[1..d].iter().all(|c| c.norm() == 0.0) {
        let target = -body[0] / body[d];
        if target.norm() == 0.0 {
            return Ok(vec![Complex64::new(0.0, 0.0); d]);
        }
        let radius = target.norm().powf(1.0 / d as f64);
        let angle = target.arg() / d as f64;
        return Ok((0..d)
            .map(|k| {
                Complex64::from_polar(
                    radius,
                    angle + std::f64::consts::TAU * k as f64 / d as f64,
                )
            })
            .collect());
    }
    roots::polynomial_roots(body)
}

fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Logarithmic counting function `N(phi, w) = sum log(1/|z_j|)` over the
/// preimages of `w`, with multiplicity.
///
/// Errors with an infinite-value failure when a preimage sits at the origin
/// (that is, when `w = phi(0)`), where the counting function blows up.
pub fn nevanlinna(phi: &SelfMapSpec, w: Complex64) -> Result<f64> {
    let set = preimages(phi, w)?;
    nevanlinna_of(&set)
}

/// The counting value of an already-enumerated preimage set.
pub fn nevanlinna_of(set: &Preimages) -> Result<f64> {
    let mut total = 0.0;
    for p in &set.points {
        let r = p.z.norm();
        if r <= ORIGIN_CUTOFF {
            return Err(Error::InfiniteValue(format!(
                "counting function diverges: preimage at |z| = {r:.3e}"
            )));
        }
        total += p.multiplicity as f64 * (1.0 / r).ln();
    }
    Ok(total)
}

/// One evaluation of the counting function, packaged for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct CountingSample {
    #[serde(with = "crate::serde_complex")]
    pub w: Complex64,
    pub value: f64,
    pub preimage_count: u32,
    pub conditioning_warning: bool,
}

/// Evaluates the counting function and keeps the preimage diagnostics.
pub fn counting_sample(phi: &SelfMapSpec, w: Complex64) -> Result<CountingSample> {
    let set = preimages(phi, w)?;
    let value = nevanlinna_of(&set)?;
    Ok(CountingSample {
        w,
        value,
        preimage_count: set.total_multiplicity(),
        conditioning_warning: set.conditioning_warning,
    })
}
