//! Roots of complex polynomials.
//!
//! The solver follows the classical route: build the companion matrix, run
//! the shifted QR iteration on its Hessenberg form, then polish each
//! eigenvalue with Newton steps on the original polynomial and cluster
//! near-coincident roots into multiplicities.  Degrees one and two are
//! dispatched to closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots closer than this are merged into one cluster with summed
/// multiplicity.  A double root perturbs under rounding by about the square
/// root of the residual tolerance, so the radius sits well above that.
pub const CLUSTER_RADIUS: f64 = 1e-7;

/// Distinct clusters closer than this trigger a conditioning warning: the
/// separation is too small to trust the computed multiplicities.
pub const CONDITIONING_RADIUS: f64 = 1e-6;

/// Accepted polished residual, relative to the coefficient scale.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// A root with the multiplicity of its cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub z: Complex64,
    pub multiplicity: u32,
}

/// All roots of a polynomial, clustered by proximity.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub clusters: Vec<RootCluster>,
    /// True when two distinct clusters nearly touch; counts may be split
    /// arbitrarily between them.
    pub conditioning_warning: bool,
}

impl RootSet {
    /// Total root count with multiplicity.
    pub fn degree(&self) -> u32 {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }
}

/// All complex roots of `sum coeffs[k] z^k`, repeated by multiplicity and in
/// no particular order.
///
/// Exactly-zero leading coefficients are trimmed (they carry no roots);
/// exactly-zero trailing coefficients become roots at the origin.  A zero or
/// constant polynomial is an invalid input for root extraction.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    for c in coeffs {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidSpec("polynomial coefficients must be finite".into()));
        }
    }
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1] == Complex64::new(0.0, 0.0) {
        hi -= 1;
    }
    if hi <= 1 {
        return Err(Error::InvalidSpec(
            "cannot extract roots of a constant polynomial".into(),
        ));
    }
    let mut lo = 0;
    while coeffs[lo] == Complex64::new(0.0, 0.0) {
        lo += 1;
    }
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    let body = &coeffs[lo..hi];
    match body.len() {
        0 | 1 => {}
        2 => roots.push(-body[0] / body[1]),
        3 => roots.extend(quadratic_roots(body[0], body[1], body[2])),
        _ => {
            let monic: Vec<Complex64> = body[..body.len() - 1]
                .iter()
                .map(|c| c / body[body.len() - 1])
                .collect();
            let raw = companion_eigenvalues(&monic)?;
            let scale: f64 = coeffs.iter().map(|c| c.norm()).sum::<f64>().max(1.0);
            for z0 in raw {
                let z = newton_polish(coeffs, z0);
                let residual = horner(coeffs, z).norm();
                if residual > RESIDUAL_TOLERANCE * scale * z.norm().max(1.0).powi(hi as i32 - 1) {
                    return Err(Error::Convergence(format!(
                        "root candidate {z} kept residual {residual:.3e} after polishing"
                    )));
                }
                roots.push(z);
            }
        }
    }
    Ok(roots)
}

/// Roots clustered into multiplicities.
pub fn clustered_roots(coeffs: &[Complex64]) -> Result<RootSet> {
    let roots = polynomial_roots(coeffs)?;
    Ok(cluster(roots))
}

/// Greedy proximity clustering with representative at the cluster mean; for
/// a true m-fold root the mean cancels the leading perturbation terms.
pub fn cluster(mut roots: Vec<Complex64>) -> RootSet {
    let mut clusters: Vec<RootCluster> = Vec::new();
    while let Some(seed) = roots.pop() {
        let mut members = vec![seed];
        // Grow the cluster until stable: membership within CLUSTER_RADIUS of
        // the running mean.
        loop {
            let mean = members.iter().sum::<Complex64>() / members.len() as f64;
            let before = members.len();
            let mut i = 0;
            while i < roots.len() {
                if (roots[i] - mean).norm() <= CLUSTER_RADIUS {
                    members.push(roots.swap_remove(i));
                } else {
                    i += 1;
                }
            }
            if members.len() == before {
                break;
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        clusters.push(RootCluster {
            z: mean,
            multiplicity: members.len() as u32,
        });
    }
    let mut warning = false;
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            if (clusters[i].z - clusters[j].z).norm() < CONDITIONING_RADIUS {
                warning = true;
            }
        }
    }
    RootSet {
        clusters,
        conditioning_warning: warning,
    }
}

/// Numerically stable quadratic formula: the larger root by the classical
/// formula, the smaller via the product relation c0/(c2 q).
fn quadratic_roots(c0: Complex64, c1: Complex64, c2: Complex64) -> [Complex64; 2] {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // Choose the sign that avoids cancellation in -c1 ∓ disc.
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() {
        -0.5 * (c1 + disc)
    } else {
        -0.5 * (c1 - disc)
    };
    if q.norm() == 0.0 {
        // c1 = disc = 0: pure square, both roots at the midpoint.
        let z = -c1 / (2.0 * c2);
        return [z, z];
    }
    [q / c2, c0 / q]
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn horner_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * k as f64;
    }
    acc
}

/// A few Newton steps from an already-good eigenvalue estimate; returns the
/// iterate with the smallest residual seen.
fn newton_polish(coeffs: &[Complex64], start: Complex64) -> Complex64 {
    let mut z = start;
    let mut best = start;
    let mut best_residual = horner(coeffs, start).norm();
    for _ in 0..60 {
        let value = horner(coeffs, z);
        let slope = horner_derivative(coeffs, z);
        if slope.norm() < 1e-300 {
            break;
        }
        let step = value / slope;
        z -= step;
        let residual = horner(coeffs, z).norm();
        if residual < best_residual {
            best_residual = residual;
            best = z;
        }
        if step.norm() < 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    best
}

/// Givens rotation (c real, s complex) with c^2 + |s|^2 = 1 mapping
/// (a, b) to (r, 0).
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0), a);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn, Complex64::new(bn, 0.0));
    }
    let scale = an.hypot(bn);
    let c = an / scale;
    let phase = a / an;
    let s = phase * b.conj() / scale;
    let r = phase * scale;
    (c, s, r)
}

/// Eigenvalues of the companion matrix of the monic polynomial
/// `z^d + sum monic[k] z^k` by the implicit single-shift QR iteration.
fn companion_eigenvalues(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = monic.len();
    let zero = Complex64::new(0.0, 0.0);
    // Row-major Hessenberg matrix: subdiagonal of ones, last column of
    // negated coefficients.
    let mut h = vec![zero; d * d];
    for i in 1..d {
        h[i * d + i - 1] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        h[i * d + d - 1] -= monic[i];
    }

    let mut eigenvalues = Vec::with_capacity(d);
    let mut hi = d - 1;
    let mut stuck = 0usize;
    let mut total = 0usize;
    let budget = 60 * d.max(4);
    loop {
        // Deflate at negligible subdiagonal entries.
        let mut lo = 0;
        for i in (1..=hi).rev() {
            let off = h[i * d + i - 1].norm();
            let local = h[(i - 1) * d + i - 1].norm() + h[i * d + i].norm();
            if off <= f64::EPSILON * local.max(1e-300) {
                h[i * d + i - 1] = zero;
                lo = i;
                break;
            }
        }
        if lo == hi {
            eigenvalues.push(h[hi * d + hi]);
            if hi == 0 || eigenvalues.len() == d {
                break;
            }
            hi -= 1;
            stuck = 0;
            continue;
        }
        if hi == 0 {
            eigenvalues.push(h[0]);
            break;
        }

        total += 1;
        stuck += 1;
        if total > budget {
            return Err(Error::Convergence(format!(
                "companion QR did not converge within {budget} sweeps (degree {d})"
            )));
        }
        let shift = if stuck % 16 == 0 {
            // Exceptional shift breaks symmetric stalls.
            h[hi * d + hi] + h[hi * d + hi - 1].norm() * Complex64::new(0.75, 0.4375)
        } else {
            wilkinson_shift(&h, d, hi)
        };

        for i in lo..=hi {
            h[i * d + i] -= shift;
        }
        // QR sweep: left rotations chase the subdiagonal, then apply their
        // adjoints on the right (RQ), preserving Hessenberg form.
        let mut rotations = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s, r) = givens(h[i * d + i], h[(i + 1) * d + i]);
            h[i * d + i] = r;
            h[(i + 1) * d + i] = zero;
            for j in i + 1..d {
                let top = h[i * d + j];
                let bot = h[(i + 1) * d + j];
                h[i * d + j] = c * top + s * bot;
                h[(i + 1) * d + j] = -s.conj() * top + c * bot;
            }
            rotations.push((c, s));
        }
        for (i, &(c, s)) in rotations.iter().enumerate() {
            let col = lo + i;
            let last = (col + 2).min(hi + 1);
            for row in 0..last {
                let left = h[row * d + col];
                let right = h[row * d + col + 1];
                h[row * d + col] = c * left + s.conj() * right;
                h[row * d + col + 1] = -s * left + c * right;
            }
        }
        for i in lo..=hi {
            h[i * d + i] += shift;
        }
    }
    Ok(eigenvalues)
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(h: &[Complex64], d: usize, hi: usize) -> Complex64 {
    let a = h[(hi - 1) * d + hi - 1];
    let b = h[(hi - 1) * d + hi];
    let c = h[hi * d + hi - 1];
    let e = h[hi * d + hi];
    let half = 0.5 * (a - e);
    let disc = (half * half + b * c).sqrt();
    let lam1 = e + half + disc;
    let lam2 = e + half - disc;
    if (lam1 - e).norm() < (lam2 - e).norm() {
        lam1
    } else {
        lam2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Expand prod (z - r_j) into coefficients.
    fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut coeffs = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        coeffs
    }

    fn assert_multiset_close(mut got: Vec<Complex64>, want: &[Complex64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for &w in want {
            let (idx, dist) = got
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist < tol, "no root near {w}, closest at distance {dist}");
            got.swap_remove(idx);
        }
    }

    #[test]
    fn rejects_constants_and_nonfinite() {
        assert!(polynomial_roots(&[c(1.0, 0.0)]).is_err());
        assert!(polynomial_roots(&[]).is_err());
        assert!(polynomial_roots(&[c(f64::NAN, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn linear_and_quadratic_closed_forms() {
        let roots = polynomial_roots(&[c(-0.6, 0.0), c(2.0, 0.0)]).unwrap();
        assert_multiset_close(roots, &[c(0.3, 0.0)], 1e-15);
        // (z - 0.5)(z + 0.25 i) = z^2 + (0.25i - 0.5) z - 0.125 i
        let want = [c(0.5, 0.0), c(0.0, -0.25)];
        let coeffs = poly_from_roots(&want);
        let roots = polynomial_roots(&coeffs).unwrap();
        assert_multiset_close(roots, &want, 1e-14);
    }

    #[test]
    fn trailing_zeros_become_origin_roots() {
        // z^2 (z - 0.5): coefficients [0, 0, -0.5, 1]
        let coeffs = [c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0), c(1.0, 0.0)];
        let set = clustered_roots(&coeffs).unwrap();
        assert_eq!(set.degree(), 3);
        let origin = set
            .clusters
            .iter()
            .find(|cl| cl.z.norm() < 1e-12)
            .expect("origin cluster");
        assert_eq!(origin.multiplicity, 2);
        assert!(!set.conditioning_warning);
    }

    #[test]
    fn scaled_roots_of_unity_recovered() {
        // z^12 - 0.9^12: roots on the circle of radius 0.9.
        let mut coeffs = vec![c(0.0, 0.0); 13];
        coeffs[0] = c(-(0.9f64.powi(12)), 0.0);
        coeffs[12] = c(1.0, 0.0);
        let roots = polynomial_roots(&coeffs).unwrap();
        let want: Vec<Complex64> = (0..12)
            .map(|k| Complex64::from_polar(0.9, 2.0 * std::f64::consts::PI * k as f64 / 12.0))
            .collect();
        assert_multiset_close(roots, &want, 1e-9);
    }

    #[test]
    fn double_root_clusters_with_multiplicity_two() {
        let want = [c(0.3, 0.1), c(0.3, 0.1), c(-0.4, 0.0), c(0.0, 0.7)];
        let coeffs = poly_from_roots(&want);
        let set = clustered_roots(&coeffs).unwrap();
        let double = set
            .clusters
            .iter()
            .find(|cl| (cl.z - c(0.3, 0.1)).norm() < 1e-6)
            .expect("double root cluster");
        assert_eq!(double.multiplicity, 2);
        assert_eq!(set.degree(), 4);
    }

    #[test]
    fn nearby_but_distinct_roots_warn() {
        let want = [c(0.5, 0.0), c(0.5 + 3e-7, 0.0), c(-0.2, 0.4)];
        let coeffs = poly_from_roots(&want);
        let set = clustered_roots(&coeffs).unwrap();
        // Separation 3e-7 exceeds the cluster radius but sits below the
        // conditioning radius.
        assert!(set.conditioning_warning || set.clusters.len() == 2);
    }

    #[test]
    fn high_degree_random_style_polynomial() {
        // Deterministic pseudo-random roots inside the disk.
        let want: Vec<Complex64> = (0..25)
            .map(|k| {
                let angle = 2.399963 * k as f64; // golden-angle spacing
                Complex64::from_polar(0.15 + 0.8 * ((k * 7 % 25) as f64 / 25.0), angle)
            })
            .collect();
        let coeffs = poly_from_roots(&want);
        let roots = polynomial_roots(&coeffs).unwrap();
        assert_multiset_close(roots, &want, 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn recovers_well_separated_roots(
            seeds in proptest::collection::vec((0.05f64..0.92, 0.0f64..1.0), 1..7)
        ) {
            // Spread the angles far apart to keep the roots well separated.
            let roots: Vec<Complex64> = seeds
                .iter()
                .enumerate()
                .map(|(k, &(r, jitter))| {
                    let angle =
                        2.0 * std::f64::consts::PI * (k as f64 + 0.35 * jitter) / seeds.len() as f64;
                    Complex64::from_polar(r, angle)
                })
                .collect();
            let coeffs = poly_from_roots(&roots);
            let got = polynomial_roots(&coeffs).unwrap();
            assert_multiset_close(got, &roots, 2e-7);
        }
    }
}
