//! Closed-form analytic test functions on the unit disk.
//!
//! Every variant evaluates itself and its complex derivative exactly (up to
//! rounding and series truncation far below quadrature error); no numerical
//! differentiation happens on the production path. The serialized form tags
//! each variant with `"type"` and writes complex scalars as `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::MobiusMap;

/// Hard cap on lacunary partial sums; the underflow cut always fires first
/// for |z| <= 1 - LACUNARY_EVAL_EDGE (gap exponents stay below 7.5e17,
/// reached by base 2 at term 60).
const LACUNARY_MAX_TERMS: usize = 96;

/// A lacunary series has no boundary extension, so evaluation stops where
/// f64 stops resolving 1 - |z|: a few ulps below 1.  Deep grids legitimately
/// ask for radii ~1e-14 from the boundary, and the truncated sum is still
/// exact there.
const LACUNARY_EVAL_EDGE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// z^n (n = 0 is the constant 1).
    Monomial { n: u32 },
    /// coeffs[k] multiplies z^k.
    Polynomial {
        #[serde(with = "crate::serde_complex::vec")]
        coeffs: Vec<Complex64>,
    },
    /// 1 / (1 - conj(b) z) with |b| < 1.
    CauchyKernel {
        #[serde(with = "crate::serde_complex")]
        b: Complex64,
    },
    /// (1 - |b|^2)^((p + eta - 1)/p) / (1 - conj(b) z); the normalized kernel
    /// family used to probe index (p, eta) behaviour near the boundary.
    ScaledCauchy {
        #[serde(with = "crate::serde_complex")]
        b: Complex64,
        p: f64,
        eta: f64,
    },
    /// log(1/(1 - z)), principal branch; singular at z = 1.
    LogKernel,
    /// Gap series sum_k n_k^(alpha - 1) z^(n_k) with n_k = round(base^(k + phase)).
    /// phase in [0, 1) interleaves two copies at geometric midpoints.
    Lacunary { base: u32, alpha: f64, phase: f64 },
    /// outer composed with sigma_w; evaluated by pullback.
    MobiusPullback {
        inner: MobiusMap,
        outer: Box<FunctionSpec>,
    },
    Sum { terms: Vec<FunctionSpec> },
    Scale {
        #[serde(with = "crate::serde_complex")]
        c: Complex64,
        inner: Box<FunctionSpec>,
    },
}

impl FunctionSpec {
    pub fn constant(c: Complex64) -> Self {
        FunctionSpec::Polynomial { coeffs: vec![c] }
    }

    /// Parameter-domain check, recursive over sub-specs. Evaluation assumes
    /// this has passed.
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::Monomial { .. } | FunctionSpec::LogKernel => Ok(()),
            FunctionSpec::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::InvalidSpec("polynomial needs coefficients".into()));
                }
                if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                    return Err(Error::InvalidSpec("polynomial coefficients must be finite".into()));
                }
                Ok(())
            }
            FunctionSpec::CauchyKernel { b } => {
                if b.norm() >= 1.0 {
                    return Err(Error::InvalidSpec(format!(
                        "cauchy kernel needs |b| < 1, got {}",
                        b.norm()
                    )));
                }
                Ok(())
            }
            FunctionSpec::ScaledCauchy { b, p, eta } => {
                if b.norm() >= 1.0 {
                    return Err(Error::InvalidSpec(format!(
                        "scaled cauchy kernel needs |b| < 1, got {}",
                        b.norm()
                    )));
                }
                if !(*p >= 1.0) || !eta.is_finite() || *eta < 0.0 {
                    return Err(Error::InvalidSpec(
                        "scaled cauchy kernel needs p >= 1 and eta >= 0".into(),
                    ));
                }
                Ok(())
            }
            FunctionSpec::Lacunary { base, alpha, phase } => {
                if *base < 2 {
                    return Err(Error::InvalidSpec("lacunary base must be >= 2".into()));
                }
                if !alpha.is_finite() {
                    return Err(Error::InvalidSpec("lacunary exponent must be finite".into()));
                }
                if !(0.0..1.0).contains(phase) {
                    return Err(Error::InvalidSpec("lacunary phase must lie in [0, 1)".into()));
                }
                Ok(())
            }
            FunctionSpec::MobiusPullback { outer, .. } => outer.validate(),
            FunctionSpec::Sum { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidSpec("sum needs at least one term".into()));
                }
                terms.iter().try_for_each(|t| t.validate())
            }
            FunctionSpec::Scale { c, inner } => {
                if !c.re.is_finite() || !c.im.is_finite() {
                    return Err(Error::InvalidSpec("scale factor must be finite".into()));
                }
                inner.validate()
            }
        }
    }

    /// True when boundary values cannot be taken pointwise on the whole
    /// circle, so norms must retreat to radius 1 - delta_min.
    pub fn is_boundary_singular(&self) -> bool {
        match self {
            FunctionSpec::LogKernel | FunctionSpec::Lacunary { .. } => true,
            FunctionSpec::MobiusPullback { outer, .. } => outer.is_boundary_singular(),
            FunctionSpec::Sum { terms } => terms.iter().any(|t| t.is_boundary_singular()),
            FunctionSpec::Scale { inner, .. } => inner.is_boundary_singular(),
            _ => false,
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        check_disk_point(z)?;
        match self {
            FunctionSpec::Monomial { n } => Ok(z.powu(*n)),
            FunctionSpec::Polynomial { coeffs } => Ok(horner(coeffs, z)),
            FunctionSpec::CauchyKernel { b } => {
                let den = 1.0 - b.conj() * z;
                if den.norm() < 1e-14 {
                    return Err(Error::Domain("cauchy kernel pole reached".into()));
                }
                Ok(1.0 / den)
            }
            FunctionSpec::ScaledCauchy { b, p, eta } => {
                let den = 1.0 - b.conj() * z;
                if den.norm() < 1e-14 {
                    return Err(Error::Domain("cauchy kernel pole reached".into()));
                }
                Ok(scaled_cauchy_factor(*b, *p, *eta) / den)
            }
            FunctionSpec::LogKernel => {
                let den = 1.0 - z;
                if den.norm() < 1e-12 {
                    return Err(Error::Domain("log kernel singular at z = 1".into()));
                }
                Ok(-den.ln())
            }
            FunctionSpec::Lacunary { base, alpha, phase } => {
                if z.norm() >= 1.0 - LACUNARY_EVAL_EDGE {
                    return Err(Error::Domain(
                        "lacunary series has no pointwise boundary values".into(),
                    ));
                }
                Ok(lacunary_sum(*base, *alpha, *phase, z, false))
            }
            FunctionSpec::MobiusPullback { inner, outer } => outer.evaluate(inner.apply(z)?),
            FunctionSpec::Sum { terms } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in terms {
                    acc += t.evaluate(z)?;
                }
                Ok(acc)
            }
            FunctionSpec::Scale { c, inner } => Ok(c * inner.evaluate(z)?),
        }
    }

    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        check_disk_point(z)?;
        match self {
            FunctionSpec::Monomial { n } => {
                if *n == 0 {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    Ok(*n as f64 * z.powu(*n - 1))
                }
            }
            FunctionSpec::Polynomial { coeffs } => Ok(horner_derivative(coeffs, z)),
            FunctionSpec::CauchyKernel { b } => {
                let den = 1.0 - b.conj() * z;
                if den.norm() < 1e-14 {
                    return Err(Error::Domain("cauchy kernel pole reached".into()));
                }
                Ok(b.conj() / (den * den))
            }
            FunctionSpec::ScaledCauchy { b, p, eta } => {
                let den = 1.0 - b.conj() * z;
                if den.norm() < 1e-14 {
                    return Err(Error::Domain("cauchy kernel pole reached".into()));
                }
                Ok(scaled_cauchy_factor(*b, *p, *eta) * b.conj() / (den * den))
            }
            FunctionSpec::LogKernel => {
                let den = 1.0 - z;
                if den.norm() < 1e-12 {
                    return Err(Error::Domain("log kernel singular at z = 1".into()));
                }
                Ok(1.0 / den)
            }
            FunctionSpec::Lacunary { base, alpha, phase } => {
                if z.norm() >= 1.0 - LACUNARY_EVAL_EDGE {
                    return Err(Error::Domain(
                        "lacunary series has no pointwise boundary values".into(),
                    ));
                }
                Ok(lacunary_sum(*base, *alpha, *phase, z, true))
            }
            FunctionSpec::MobiusPullback { inner, outer } => {
                Ok(outer.derivative_at(inner.apply(z)?)? * inner.derivative(z)?)
            }
            FunctionSpec::Sum { terms } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in terms {
                    acc += t.derivative_at(z)?;
                }
                Ok(acc)
            }
            FunctionSpec::Scale { c, inner } => Ok(c * inner.derivative_at(z)?),
        }
    }
}

pub fn evaluate(f: &FunctionSpec, z: Complex64) -> Result<Complex64> {
    f.evaluate(z)
}

pub fn derivative_at(f: &FunctionSpec, z: Complex64) -> Result<Complex64> {
    f.derivative_at(z)
}

fn check_disk_point(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("evaluation point must be finite".into()));
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "evaluation point outside closed disk: |z| = {}",
            z.norm()
        )));
    }
    Ok(())
}

fn scaled_cauchy_factor(b: Complex64, p: f64, eta: f64) -> f64 {
    (1.0 - b.norm_sqr()).powf((p + eta - 1.0) / p)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn horner_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + k as f64 * c;
    }
    acc
}

/// Gap exponents n_k = round(base^(k + phase)), strictly increasing since
/// base >= 2; stored as f64 because gaps overflow u64 long after the series
/// terms underflow.
pub(crate) fn lacunary_gaps(base: u32, phase: f64) -> impl Iterator<Item = f64> {
    let b = base as f64;
    (0..LACUNARY_MAX_TERMS).map(move |k| b.powf(k as f64 + phase).round().max(1.0))
}

fn lacunary_sum(base: u32, alpha: f64, phase: f64, z: Complex64, derivative: bool) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        // Every gap is >= 1, so f(0) = 0; f'(0) picks up a gap-1 term if present.
        if derivative {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in lacunary_gaps(base, phase) {
                if n == 1.0 {
                    acc += Complex64::new(n.powf(alpha), 0.0);
                } else {
                    break;
                }
            }
            return acc;
        }
        return Complex64::new(0.0, 0.0);
    }
    let log_z = z.ln();
    let neg_log_r = -r.ln(); // >= ~1e-15 by the caller's domain check
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = f64::NAN;
    for n in lacunary_gaps(base, phase) {
        if n == prev {
            continue;
        }
        prev = n;
        if n * neg_log_r > 745.0 {
            break;
        }
        let term = if derivative {
            // n^(alpha - 1) * n * z^(n - 1)
            Complex64::new(n.powf(alpha), 0.0) * ((n - 1.0) * log_z).exp()
        } else {
            Complex64::new(n.powf(alpha - 1.0), 0.0) * (n * log_z).exp()
        };
        acc += term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_and_polynomial_agree() {
        let m = FunctionSpec::Monomial { n: 3 };
        let p = FunctionSpec::Polynomial {
            coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        };
        let z = c(0.3, -0.5);
        assert!((m.evaluate(z).unwrap() - p.evaluate(z).unwrap()).norm() < 1e-15);
        assert!((m.derivative_at(z).unwrap() - p.derivative_at(z).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn log_kernel_matches_series() {
        // -ln(1 - z) = sum z^n / n
        let z = c(0.4, 0.2);
        let series: Complex64 = (1..200).map(|n| z.powu(n) / n as f64).sum();
        let f = FunctionSpec::LogKernel;
        assert!((f.evaluate(z).unwrap() - series).norm() < 1e-14);
    }

    #[test]
    fn log_kernel_rejects_singularity() {
        assert!(FunctionSpec::LogKernel.evaluate(c(1.0, 0.0)).is_err());
        // but the rest of the circle is fine
        assert!(FunctionSpec::LogKernel.evaluate(c(-1.0, 0.0)).is_ok());
    }

    #[test]
    fn lacunary_matches_direct_sum() {
        // base 4, phase 0, alpha 1: gaps 1, 4, 16, 64, ... with unit coefficients
        let f = FunctionSpec::Lacunary { base: 4, alpha: 1.0, phase: 0.0 };
        let z = c(0.6, 0.1);
        let mut exact = Complex64::new(0.0, 0.0);
        for k in 0..10u32 {
            exact += z.powu(4u32.pow(k));
        }
        assert!((f.evaluate(z).unwrap() - exact).norm() < 1e-13);
    }

    #[test]
    fn lacunary_phase_shifts_gaps() {
        // base 16, phase 0.5: gaps 4, 64, 1024, ...
        let f = FunctionSpec::Lacunary { base: 16, alpha: 1.0, phase: 0.5 };
        let z = c(0.5, 0.0);
        let exact = z.powu(4) + z.powu(64) + z.powu(1024);
        assert!((f.evaluate(z).unwrap() - exact).norm() < 1e-15);
    }

    #[test]
    fn lacunary_rejects_boundary() {
        let f = FunctionSpec::Lacunary { base: 2, alpha: 1.0, phase: 0.0 };
        assert!(f.evaluate(c(1.0, 0.0)).is_err());
        assert!(f.evaluate(Complex64::from_polar(1.0 - 1e-4, 2.0)).is_ok());
    }

    #[test]
    fn pullback_evaluates_by_composition() {
        let inner = MobiusMap::new(c(0.5, 0.0)).unwrap();
        let outer = FunctionSpec::Monomial { n: 2 };
        let f = FunctionSpec::MobiusPullback { inner, outer: Box::new(outer) };
        let z = c(0.2, 0.3);
        let expect = inner.apply(z).unwrap().powu(2);
        assert!((f.evaluate(z).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn rejects_points_outside_disk() {
        let f = FunctionSpec::Monomial { n: 1 };
        assert!(f.evaluate(c(1.1, 0.0)).is_err());
        assert!(f.evaluate(c(f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn validate_catches_bad_parameters() {
        assert!(FunctionSpec::CauchyKernel { b: c(1.0, 0.0) }.validate().is_err());
        assert!(FunctionSpec::Lacunary { base: 1, alpha: 1.0, phase: 0.0 }.validate().is_err());
        assert!(FunctionSpec::Lacunary { base: 4, alpha: 1.0, phase: 1.0 }.validate().is_err());
        assert!(FunctionSpec::Polynomial { coeffs: vec![] }.validate().is_err());
        assert!(FunctionSpec::Sum { terms: vec![] }.validate().is_err());
        assert!(FunctionSpec::ScaledCauchy { b: c(0.5, 0.0), p: 0.5, eta: 1.0 }.validate().is_err());
    }

    #[test]
    fn serde_round_trip_with_tagged_type() {
        let f = FunctionSpec::Scale {
            c: c(2.0, -1.0),
            inner: Box::new(FunctionSpec::CauchyKernel { b: c(0.5, 0.25) }),
        };
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"type\":\"scale\""));
        assert!(json.contains("\"type\":\"cauchy_kernel\""));
        let back: FunctionSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    fn leaf_spec() -> impl Strategy<Value = FunctionSpec> {
        prop_oneof![
            (0u32..8).prop_map(|n| FunctionSpec::Monomial { n }),
            proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6).prop_map(|cs| {
                FunctionSpec::Polynomial {
                    coeffs: cs.into_iter().map(|(re, im)| c(re, im)).collect(),
                }
            }),
            (-0.85..0.85f64, -0.3..0.3f64)
                .prop_map(|(re, im)| FunctionSpec::CauchyKernel { b: c(re, im) }),
            (-0.8..0.8f64, 1.0..4.0f64, 0.0..2.0f64)
                .prop_map(|(re, p, eta)| FunctionSpec::ScaledCauchy { b: c(re, 0.1), p, eta }),
            Just(FunctionSpec::LogKernel),
            (prop_oneof![Just(2u32), Just(4), Just(16)], 0.25..1.5f64, prop_oneof![Just(0.0), Just(0.5)])
                .prop_map(|(base, alpha, phase)| FunctionSpec::Lacunary { base, alpha, phase }),
        ]
    }

    fn composite_spec() -> impl Strategy<Value = FunctionSpec> {
        leaf_spec().prop_flat_map(|leaf| {
            prop_oneof![
                Just(leaf.clone()),
                ((-0.7..0.7f64, -0.7..0.7f64), Just(leaf.clone())).prop_filter_map(
                    "mobius center inside disk",
                    |((re, im), outer)| {
                        let w = c(re, im);
                        (w.norm() < 0.95).then(|| FunctionSpec::MobiusPullback {
                            inner: MobiusMap::new(w).unwrap(),
                            outer: Box::new(outer),
                        })
                    }
                ),
                ((-2.0..2.0f64, -2.0..2.0f64), Just(leaf.clone())).prop_map(|((re, im), inner)| {
                    FunctionSpec::Scale { c: c(re, im), inner: Box::new(inner) }
                }),
                (Just(leaf), leaf_spec()).prop_map(|(a, b)| FunctionSpec::Sum { terms: vec![a, b] }),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        /// Central differences agree with the closed-form derivative to 1e-6
        /// relative, away from singularities.
        #[test]
        fn derivative_matches_central_difference(
            f in composite_spec(),
            rho in 0.0..0.8f64,
            theta in 0.0..std::f64::consts::TAU,
        ) {
            prop_assume!(f.validate().is_ok());
            let z = Complex64::from_polar(rho, theta);
            let h = 1e-6;
            let fp = f.evaluate(z + c(h, 0.0)).unwrap();
            let fm = f.evaluate(z - c(h, 0.0)).unwrap();
            let fd_real = (fp - fm) / (2.0 * h);
            let fp_i = f.evaluate(z + c(0.0, h)).unwrap();
            let fm_i = f.evaluate(z - c(0.0, h)).unwrap();
            let fd_imag = (fp_i - fm_i) / (2.0 * h * Complex64::i());
            let d = f.derivative_at(z).unwrap();
            let scale = d.norm().max(1.0);
            prop_assert!((fd_real - d).norm() <= 1e-6 * scale,
                "real-direction fd {fd_real} vs {d}");
            prop_assert!((fd_imag - d).norm() <= 1e-6 * scale,
                "imag-direction fd {fd_imag} vs {d}");
        }

        #[test]
        fn serde_round_trips(f in composite_spec()) {
            let json = serde_json::to_string(&f).unwrap();
            let back: FunctionSpec = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
