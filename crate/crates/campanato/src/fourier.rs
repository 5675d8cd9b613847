//! Boundary Fourier series and the projections built from them.
//!
//! A [`FourierSeries`] is a trigonometric polynomial on the unit circle,
//! stored by its coefficients `c_n` for `n = -m..=m`.  From it we build the
//! harmonic (Poisson) extension into the disk, the analytic (Szego)
//! projection, and the harmonic conjugate.  All three are exact coefficient
//! operations for trigonometric polynomials, which makes them usable as
//! ground truth when testing sampled variants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::grid::{Arc, CircleGrid};

/// Minimum number of grid nodes an arc must contain before its sample mean
/// is considered meaningful.
pub const ARC_MEAN_MIN_NODES: usize = 8;

/// A trigonometric polynomial `sum_{n=-m}^{m} c_n e^{i n theta}` on the unit
/// circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FourierSeriesRaw", into = "FourierSeriesRaw")]
pub struct FourierSeries {
    /// Coefficients in order `c_{-m}, ..., c_{-1}, c_0, c_1, ..., c_m`.
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FourierSeriesRaw {
    #[serde(with = "crate::serde_complex::vec")]
    coeffs: Vec<Complex64>,
}

impl TryFrom<FourierSeriesRaw> for FourierSeries {
    type Error = Error;

    fn try_from(raw: FourierSeriesRaw) -> Result<Self> {
        FourierSeries::new(raw.coeffs)
    }
}

impl From<FourierSeries> for FourierSeriesRaw {
    fn from(series: FourierSeries) -> Self {
        FourierSeriesRaw {
            coeffs: series.coeffs,
        }
    }
}

impl FourierSeries {
    /// Builds a series from coefficients listed from `c_{-m}` up to `c_m`.
    /// The length must be odd so that a central `c_0` exists.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() % 2 == 0 {
            return Err(Error::InvalidSpec(format!(
                "fourier coefficient list must have odd length 2m+1, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidSpec(
                "fourier coefficients must be finite".into(),
            ));
        }
        Ok(FourierSeries { coeffs })
    }

    /// Builds a series from the analytic coefficients `a_n` (n >= 0) and the
    /// anti-analytic coefficients `b_n` (n >= 1, for `e^{-i n theta}`).
    pub fn from_parts(analytic: &[Complex64], anti: &[Complex64]) -> Result<Self> {
        let m = analytic.len().max(anti.len() + 1).max(1) - 1;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * m + 1];
        for (n, &a) in analytic.iter().enumerate() {
            coeffs[m + n] = a;
        }
        for (k, &b) in anti.iter().enumerate() {
            coeffs[m - (k + 1)] = b;
        }
        FourierSeries::new(coeffs)
    }

    /// Highest frequency `m` present in the coefficient table.
    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// Coefficient `c_n`, zero outside the stored range.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let m = self.degree() as i64;
        if n < -m || n > m {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + m) as usize]
        }
    }

    /// Value `sum c_n e^{i n theta}` on the circle.
    pub fn eval_boundary(&self, theta: f64) -> Complex64 {
        let m = self.degree() as i64;
        let mut sum = Complex64::new(0.0, 0.0);
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let n = idx as i64 - m;
            sum += c * Complex64::from_polar(1.0, n as f64 * theta);
        }
        sum
    }

    /// Coefficients `c_0, c_1, ..., c_m` of the analytic part.
    pub fn analytic_coeffs(&self) -> Vec<Complex64> {
        let m = self.degree();
        self.coeffs[m..].to_vec()
    }

    /// Coefficients `c_{-1}, c_{-2}, ..., c_{-m}` of the anti-analytic part.
    pub fn anti_coeffs(&self) -> Vec<Complex64> {
        let m = self.degree();
        (1..=m).map(|k| self.coeffs[m - k]).collect()
    }

    /// The harmonic extension as a pair of power series in `z` and
    /// `conj(z)`.
    pub fn harmonic_extension(&self) -> HarmonicPoly {
        HarmonicPoly {
            analytic: self.analytic_coeffs(),
            anti: self.anti_coeffs(),
        }
    }
}

/// Harmonic polynomial `sum a_n z^n + sum_{n>=1} b_n conj(z)^n` on the closed
/// disk.  This is the exact form of the Poisson extension of a trigonometric
/// polynomial, and supports the coefficient-level algebra used to check the
/// projection identity.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPoly {
    /// Coefficients of `z^n`, `n = 0, 1, ...`.
    pub analytic: Vec<Complex64>,
    /// Coefficients of `conj(z)^n`, `n = 1, 2, ...`.
    pub anti: Vec<Complex64>,
}

impl HarmonicPoly {
    /// Evaluates the polynomial at a point of the closed disk.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        horner(&self.analytic, z) + zb * horner(&self.anti, zb)
    }

    /// Multiplies every coefficient by a complex scalar.
    pub fn scale(&self, c: Complex64) -> HarmonicPoly {
        HarmonicPoly {
            analytic: self.analytic.iter().map(|a| c * a).collect(),
            anti: self.anti.iter().map(|b| c * b).collect(),
        }
    }

    /// Coefficientwise sum, padding the shorter side with zeros.
    pub fn add(&self, other: &HarmonicPoly) -> HarmonicPoly {
        HarmonicPoly {
            analytic: add_padded(&self.analytic, &other.analytic),
            anti: add_padded(&self.anti, &other.anti),
        }
    }

    /// Largest coefficient magnitude by which the two polynomials differ.
    pub fn max_coeff_distance(&self, other: &HarmonicPoly) -> f64 {
        let mut worst: f64 = 0.0;
        let pairs = self.analytic.len().max(other.analytic.len());
        for n in 0..pairs {
            let a = self.analytic.get(n).copied().unwrap_or_default();
            let b = other.analytic.get(n).copied().unwrap_or_default();
            worst = worst.max((a - b).norm());
        }
        let pairs = self.anti.len().max(other.anti.len());
        for n in 0..pairs {
            let a = self.anti.get(n).copied().unwrap_or_default();
            let b = other.anti.get(n).copied().unwrap_or_default();
            worst = worst.max((a - b).norm());
        }
        worst
    }
}

fn add_padded(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|n| {
            a.get(n).copied().unwrap_or_default() + b.get(n).copied().unwrap_or_default()
        })
        .collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Poisson extension of a trigonometric polynomial, evaluated exactly:
/// `P f (r e^{i t}) = sum c_n r^{|n|} e^{i n t}`.
pub fn poisson_extension(series: &FourierSeries, z: Complex64) -> Result<Complex64> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "poisson extension point |z| = {} lies outside the closed disk",
            z.norm()
        )));
    }
    Ok(series.harmonic_extension().eval(z))
}

/// Poisson extension computed from boundary samples by the discrete Poisson
/// integral `(1/N) sum f(zeta_k) (1-|z|^2)/|zeta_k - z|^2`.
///
/// The kernel concentrates on an angular scale of `1 - |z|`, so the grid only
/// resolves it when several nodes fall under the peak; we require
/// `1 - |z| >= 8/N` and return a resolution error otherwise.
pub fn poisson_extension_samples(
    samples: &[Complex64],
    grid: &CircleGrid,
    z: Complex64,
) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(Error::Precondition(format!(
            "sample count {} does not match grid size {}",
            samples.len(),
            grid.len()
        )));
    }
    let r = z.norm();
    if 1.0 - r < 8.0 / grid.len() as f64 {
        return Err(Error::Resolution(format!(
            "poisson kernel at |z| = {r} is narrower than the {}-node circle grid resolves",
            grid.len()
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &value) in samples.iter().enumerate() {
        let zeta = grid.node(k);
        let kernel = (1.0 - z.norm_sqr()) / (zeta - z).norm_sqr();
        sum += value * kernel;
    }
    Ok(sum * grid.weight())
}

/// Analytic (Szego) projection: keeps the coefficients `c_n`, `n >= 0`, and
/// packages them as a polynomial in `z`.
pub fn szego_project(series: &FourierSeries) -> FunctionSpec {
    FunctionSpec::Polynomial {
        coeffs: series.analytic_coeffs(),
    }
}

/// Harmonic conjugate on the coefficient level: `c_n -> -i sign(n) c_n`.
/// The conjugate of a real trigonometric polynomial is the boundary trace of
/// the conjugate harmonic function vanishing at the origin.
pub fn conjugate_function(series: &FourierSeries) -> FourierSeries {
    let m = series.degree() as i64;
    let coeffs = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let n = idx as i64 - m;
            let sign = match n.cmp(&0) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.0,
                std::cmp::Ordering::Less => -1.0,
            };
            Complex64::new(0.0, -sign) * c
        })
        .collect();
    FourierSeries { coeffs }
}

/// Mean of boundary samples over the nodes contained in an arc.
///
/// Errors with a resolution failure when the arc holds fewer than
/// [`ARC_MEAN_MIN_NODES`] nodes, since a near-empty mean says nothing about
/// the underlying average.
pub fn arc_mean(samples: &[Complex64], grid: &CircleGrid, arc: &Arc) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(Error::Precondition(format!(
            "sample count {} does not match grid size {}",
            samples.len(),
            grid.len()
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    for (k, &value) in samples.iter().enumerate() {
        if arc.contains(grid.theta(k)) {
            sum += value;
            count += 1;
        }
    }
    if count < ARC_MEAN_MIN_NODES {
        return Err(Error::Resolution(format!(
            "arc of length {} holds {count} grid nodes; at least {ARC_MEAN_MIN_NODES} required",
            arc.length
        )));
    }
    Ok(sum / count as f64)
}

/// Recovers Fourier coefficients `c_n`, `|n| <= max_degree`, from equispaced
/// boundary samples by the discrete Fourier transform.  Exact (to rounding)
/// when the samples come from a trigonometric polynomial of degree below
/// `grid.len() - max_degree`.
pub fn series_from_samples(
    samples: &[Complex64],
    grid: &CircleGrid,
    max_degree: usize,
) -> Result<FourierSeries> {
    if samples.len() != grid.len() {
        return Err(Error::Precondition(format!(
            "sample count {} does not match grid size {}",
            samples.len(),
            grid.len()
        )));
    }
    if 2 * max_degree + 1 > grid.len() {
        return Err(Error::Resolution(format!(
            "cannot resolve degree {max_degree} from {} samples",
            grid.len()
        )));
    }
    let n_grid = grid.len();
    let m = max_degree as i64;
    let mut coeffs = Vec::with_capacity(2 * max_degree + 1);
    for n in -m..=m {
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, &value) in samples.iter().enumerate() {
            sum += value * Complex64::from_polar(1.0, -(n as f64) * grid.theta(k));
        }
        coeffs.push(sum / n_grid as f64);
    }
    FourierSeries::new(coeffs)
}
