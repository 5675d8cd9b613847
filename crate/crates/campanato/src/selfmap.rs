//! Analytic self-maps of the unit disk: the symbols of composition
//! operators.
//!
//! Every variant can be evaluated and differentiated anywhere in the closed
//! disk, knows its mapping degree (the generic preimage count), and can
//! certify the self-map property by a boundary sweep with an explicit
//! margin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::mobius::MobiusMap;

/// Number of boundary samples used by [`SelfMapSpec::certify`].
pub const CERTIFY_SAMPLES: usize = 4096;

/// Boundary modulus may exceed 1 by at most this much before certification
/// fails; covers accumulated rounding in the boundary sweep.
pub const CERTIFY_SLACK: f64 = 1e-12;

/// An analytic map of the closed unit disk into itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SelfMapSpec {
    /// Disk automorphism `sigma_a(z) = (a - z)/(1 - conj(a) z)` with
    /// `|a| < 1`.
    Mobius {
        #[serde(flatten)]
        map: MobiusMap,
    },
    /// Polynomial `sum coeffs[k] z^k`; the self-map property is checked by
    /// boundary sweep, not assumed.
    Polynomial {
        #[serde(with = "crate::serde_complex::vec")]
        coeffs: Vec<Complex64>,
    },
    /// Finite Blaschke product `rotation * prod sigma_{a_j}(z)`.
    Blaschke {
        #[serde(with = "crate::serde_complex::vec")]
        zeros: Vec<Complex64>,
        #[serde(with = "crate::serde_complex")]
        rotation: Complex64,
    },
    /// `c * inner(z)` with `0 < c <= 1`: pulls any self-map strictly inside.
    Scaled { c: f64, inner: Box<SelfMapSpec> },
}

/// Result of the boundary certification sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Certification {
    /// Largest modulus observed on the boundary sample.
    pub boundary_max: f64,
    /// `1 - boundary_max`, clamped at zero: how far inside the image stays.
    pub margin: f64,
}

impl SelfMapSpec {
    /// Convenience constructor for the automorphism case.
    pub fn mobius(a: Complex64) -> Result<Self> {
        let map = MobiusMap::new(a)?;
        if a.norm() >= 1.0 {
            return Err(Error::InvalidSpec(format!(
                "automorphism parameter must satisfy |a| < 1, got |a| = {}",
                a.norm()
            )));
        }
        Ok(SelfMapSpec::Mobius { map })
    }

    /// Structural validation of parameters (not the self-map property
    /// itself; see [`SelfMapSpec::certify`] for that).
    pub fn validate(&self) -> Result<()> {
        match self {
            SelfMapSpec::Mobius { map } => {
                if map.center().norm() >= 1.0 {
                    return Err(Error::InvalidSpec(
                        "automorphism parameter must lie strictly inside the disk".into(),
                    ));
                }
                Ok(())
            }
            SelfMapSpec::Polynomial { coeffs } => {
                if coeffs.len() < 2 || coeffs[1..].iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::InvalidSpec(
                        "polynomial self-map must be non-constant".into(),
                    ));
                }
                for c in coeffs {
                    if !c.re.is_finite() || !c.im.is_finite() {
                        return Err(Error::InvalidSpec(
                            "polynomial coefficients must be finite".into(),
                        ));
                    }
                }
                Ok(())
            }
            SelfMapSpec::Blaschke { zeros, rotation } => {
                if zeros.is_empty() {
                    return Err(Error::InvalidSpec(
                        "blaschke product needs at least one zero".into(),
                    ));
                }
                for a in zeros {
                    if !(a.norm() < 1.0) {
                        return Err(Error::InvalidSpec(format!(
                            "blaschke zero must lie strictly inside the disk, got |a| = {}",
                            a.norm()
                        )));
                    }
                }
                if (rotation.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidSpec(format!(
                        "blaschke rotation must be unimodular, got |c| = {}",
                        rotation.norm()
                    )));
                }
                Ok(())
            }
            SelfMapSpec::Scaled { c, inner } => {
                if !(*c > 0.0 && *c <= 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "scaling factor must lie in (0, 1], got {c}"
                    )));
                }
                inner.validate()
            }
        }
    }

    /// Boundary sweep establishing `sup_{|z|=1} |phi(z)| <= 1`; errors when
    /// the sweep finds a boundary point mapped outside the closed disk.
    pub fn certify(&self) -> Result<Certification> {
        self.validate()?;
        let mut boundary_max = 0.0f64;
        for k in 0..CERTIFY_SAMPLES {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / CERTIFY_SAMPLES as f64);
            boundary_max = boundary_max.max(self.evaluate(z)?.norm());
        }
        if boundary_max > 1.0 + CERTIFY_SLACK {
            return Err(Error::Domain(format!(
                "map sends the boundary to modulus {boundary_max}; not a self-map of the disk"
            )));
        }
        Ok(Certification {
            boundary_max,
            margin: (1.0 - boundary_max).max(0.0),
        })
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        check_closed_disk(z)?;
        match self {
            SelfMapSpec::Mobius { map } => map.apply(z),
            SelfMapSpec::Polynomial { coeffs } => Ok(crate::roots::horner(coeffs, z)),
            SelfMapSpec::Blaschke { zeros, rotation } => {
                let mut value = *rotation;
                for &a in zeros {
                    value *= MobiusMap::new(a)?.apply(z)?;
                }
                Ok(value)
            }
            SelfMapSpec::Scaled { c, inner } => Ok(inner.evaluate(z)? * *c),
        }
    }

    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        check_closed_disk(z)?;
        match self {
            SelfMapSpec::Mobius { map } => map.derivative(z),
            SelfMapSpec::Polynomial { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * z + c * k as f64;
                }
                Ok(acc)
            }
            SelfMapSpec::Blaschke { zeros, rotation } => {
                // Product rule, one term per factor; O(d^2) but d stays
                // small for every family we build.
                let factors: Vec<(Complex64, Complex64)> = zeros
                    .iter()
                    .map(|&a| {
                        let map = MobiusMap::new(a)?;
                        Ok((map.apply(z)?, map.derivative(z)?))
                    })
                    .collect::<Result<_>>()?;
                let mut total = Complex64::new(0.0, 0.0);
                for j in 0..factors.len() {
                    let mut term = factors[j].1;
                    for (k, factor) in factors.iter().enumerate() {
                        if k != j {
                            term *= factor.0;
                        }
                    }
                    total += term;
                }
                Ok(total * rotation)
            }
            SelfMapSpec::Scaled { c, inner } => Ok(inner.derivative_at(z)? * *c),
        }
    }

    /// Value at the origin, used by norm identities.
    pub fn at_origin(&self) -> Result<Complex64> {
        self.evaluate(Complex64::new(0.0, 0.0))
    }

    /// `1 - |phi(z)|^2`, cancellation-free where the variant allows it.
    ///
    /// Near the boundary `|phi(z)|` rounds to 1 and the naive difference
    /// loses every significant digit; Möbius, Blaschke, and scaled variants
    /// have exact product forms for the complement (e.g. one Möbius factor
    /// contributes `(1-|a|^2)(1-|z|^2)/|1 - conj(a) z|^2`).  The caller
    /// supplies `1 - |z|^2` computed the same way.  Polynomials have no such
    /// form and fall back to the direct difference.
    pub fn one_minus_abs_sq(&self, z: Complex64, one_minus_z_sq: f64) -> Result<f64> {
        match self {
            SelfMapSpec::Mobius { map } => {
                let a = map.center();
                let den = (Complex64::new(1.0, 0.0) - a.conj() * z).norm_sqr();
                if den < 1e-28 {
                    return Err(Error::Domain("mobius denominator vanished".into()));
                }
                Ok((1.0 - a.norm_sqr()) * one_minus_z_sq / den)
            }
            SelfMapSpec::Blaschke { zeros, .. } => {
                // 1 - prod s_j accumulated as acc += prod_before * (1 - s_j),
                // with each complement 1 - s_j in closed form; every term is
                // nonnegative, so nothing cancels.
                let mut acc = 0.0;
                let mut prod = 1.0;
                for &a in zeros {
                    let den = (Complex64::new(1.0, 0.0) - a.conj() * z).norm_sqr();
                    if den < 1e-28 {
                        return Err(Error::Domain("blaschke denominator vanished".into()));
                    }
                    let t = (1.0 - a.norm_sqr()) * one_minus_z_sq / den;
                    acc += prod * t;
                    prod *= 1.0 - t;
                }
                Ok(acc)
            }
            SelfMapSpec::Scaled { c, inner } => {
                Ok((1.0 - c * c) + c * c * inner.one_minus_abs_sq(z, one_minus_z_sq)?)
            }
            SelfMapSpec::Polynomial { .. } => {
                let v = self.evaluate(z)?.norm();
                Ok((1.0 - v) * (1.0 + v))
            }
        }
    }

    /// Generic preimage count: the degree of the defining equation.
    pub fn degree(&self) -> usize {
        match self {
            SelfMapSpec::Mobius { .. } => 1,
            SelfMapSpec::Polynomial { coeffs } => {
                let mut d = coeffs.len().saturating_sub(1);
                while d > 0 && coeffs[d].norm() == 0.0 {
                    d -= 1;
                }
                d
            }
            SelfMapSpec::Blaschke { zeros, .. } => zeros.len(),
            SelfMapSpec::Scaled { inner, .. } => inner.degree(),
        }
    }
}

fn check_closed_disk(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "self-maps are defined on the closed unit disk; got |z| = {}",
            z.norm()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation_catches_bad_parameters() {
        assert!(SelfMapSpec::mobius(c(1.0, 0.0)).is_err());
        assert!(SelfMapSpec::Polynomial { coeffs: vec![c(0.5, 0.0)] }
            .validate()
            .is_err());
        assert!(SelfMapSpec::Blaschke {
            zeros: vec![c(1.1, 0.0)],
            rotation: c(1.0, 0.0)
        }
        .validate()
        .is_err());
        assert!(SelfMapSpec::Blaschke {
            zeros: vec![c(0.5, 0.0)],
            rotation: c(0.5, 0.0)
        }
        .validate()
        .is_err());
        assert!(SelfMapSpec::Scaled {
            c: 1.5,
            inner: Box::new(SelfMapSpec::Polynomial {
                coeffs: vec![c(0.0, 0.0), c(1.0, 0.0)]
            })
        }
        .validate()
        .is_err());
    }

    #[test]
    fn certification_margins() {
        // z/2 keeps margin 1/2; sigma_a and Blaschke products are unimodular
        // on the boundary, margin 0.
        let halved = SelfMapSpec::Scaled {
            c: 0.5,
            inner: Box::new(SelfMapSpec::Polynomial {
                coeffs: vec![c(0.0, 0.0), c(1.0, 0.0)],
            }),
        };
        let cert = halved.certify().unwrap();
        assert!((cert.margin - 0.5).abs() < 1e-12);

        let auto = SelfMapSpec::mobius(c(0.5, 0.2)).unwrap();
        let cert = auto.certify().unwrap();
        assert!(cert.margin.abs() < 1e-12);
        assert!((cert.boundary_max - 1.0).abs() < 1e-12);

        // (z^2 + z^3)/2 maxes at exactly 1 (z = 1).
        let cubic = SelfMapSpec::Polynomial {
            coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
        };
        let cert = cubic.certify().unwrap();
        assert!((cert.boundary_max - 1.0).abs() < 1e-12);

        // 2z is not a self-map.
        let doubled = SelfMapSpec::Polynomial {
            coeffs: vec![c(0.0, 0.0), c(2.0, 0.0)],
        };
        assert!(matches!(doubled.certify(), Err(Error::Domain(_))));
    }

    #[test]
    fn blaschke_evaluation_and_degree() {
        let phi = SelfMapSpec::Blaschke {
            zeros: vec![c(0.5, 0.0), c(0.0, -0.3)],
            rotation: c(0.0, 1.0),
        };
        assert_eq!(phi.degree(), 2);
        // Vanishes at each designated zero.
        assert!(phi.evaluate(c(0.5, 0.0)).unwrap().norm() < 1e-15);
        assert!(phi.evaluate(c(0.0, -0.3)).unwrap().norm() < 1e-15);
        // Unimodular on the boundary.
        let z = Complex64::from_polar(1.0, 1.234);
        assert!((phi.evaluate(z).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let maps = vec![
            SelfMapSpec::mobius(c(0.4, -0.2)).unwrap(),
            SelfMapSpec::Polynomial {
                coeffs: vec![c(0.1, 0.0), c(0.2, 0.3), c(0.0, 0.0), c(0.25, 0.0)],
            },
            SelfMapSpec::Blaschke {
                zeros: vec![c(0.5, 0.0), c(-0.2, 0.4), c(0.0, 0.1)],
                rotation: c(1.0, 0.0),
            },
            SelfMapSpec::Scaled {
                c: 0.7,
                inner: Box::new(SelfMapSpec::Polynomial {
                    coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
                }),
            },
        ];
        let z = c(0.3, -0.25);
        let h = 1e-6;
        for phi in maps {
            let d = phi.derivative_at(z).unwrap();
            let fd_re = (phi.evaluate(z + c(h, 0.0)).unwrap()
                - phi.evaluate(z - c(h, 0.0)).unwrap())
                / (2.0 * h);
            let fd_im = (phi.evaluate(z + c(0.0, h)).unwrap()
                - phi.evaluate(z - c(0.0, h)).unwrap())
                / c(0.0, 2.0 * h);
            assert!((d - fd_re).norm() < 1e-8, "{phi:?}");
            assert!((d - fd_im).norm() < 1e-8, "{phi:?}");
        }
    }

    #[test]
    fn degree_ignores_zero_leading_coefficients() {
        let phi = SelfMapSpec::Polynomial {
            coeffs: vec![c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)],
        };
        assert_eq!(phi.degree(), 1);
    }

    #[test]
    fn serde_round_trip_all_variants() {
        let maps = vec![
            SelfMapSpec::mobius(c(0.5, -0.25)).unwrap(),
            SelfMapSpec::Polynomial {
                coeffs: vec![c(0.0, 0.0), c(0.9, 0.0)],
            },
            SelfMapSpec::Blaschke {
                zeros: vec![c(0.3, 0.3)],
                rotation: c(0.0, -1.0),
            },
            SelfMapSpec::Scaled {
                c: 0.5,
                inner: Box::new(SelfMapSpec::Polynomial {
                    coeffs: vec![c(0.0, 0.0), c(1.0, 0.0)],
                }),
            },
        ];
        for phi in maps {
            let json = serde_json::to_string(&phi).unwrap();
            let back: SelfMapSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(phi, back, "{json}");
        }
        // Tagged layout with the automorphism parameter inlined.
        let json = r#"{"type":"mobius","w":[0.5,0.0]}"#;
        let phi: SelfMapSpec = serde_json::from_str(json).unwrap();
        assert_eq!(phi, SelfMapSpec::mobius(c(0.5, 0.0)).unwrap());
    }
}
