//! Disk automorphisms of the form sigma_w(z) = (w - z) / (1 - conj(w) z).
//!
//! sigma_w swaps 0 and w and is its own inverse on the closed disk. It is the
//! only change of variable used anywhere in this crate: composed functions are
//! always evaluated by pulling points back through `apply`, never by
//! re-expanding coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MobiusMapRaw", into = "MobiusMapRaw")]
pub struct MobiusMap {
    w: Complex64,
}

#[derive(Serialize, Deserialize)]
struct MobiusMapRaw {
    #[serde(with = "crate::serde_complex")]
    w: Complex64,
}

impl TryFrom<MobiusMapRaw> for MobiusMap {
    type Error = Error;
    fn try_from(raw: MobiusMapRaw) -> Result<Self> {
        MobiusMap::new(raw.w)
    }
}

impl From<MobiusMap> for MobiusMapRaw {
    fn from(m: MobiusMap) -> Self {
        MobiusMapRaw { w: m.w }
    }
}

impl MobiusMap {
    /// Requires |w| <= 1. Maps with |w| = 1 are admitted as boundary cases but
    /// degenerate to the constant w, so most callers also insist |w| < 1.
    pub fn new(w: Complex64) -> Result<Self> {
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::InvalidSpec("mobius center must be finite".into()));
        }
        if w.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidSpec(format!(
                "mobius center must satisfy |w| <= 1, got |w| = {}",
                w.norm()
            )));
        }
        Ok(MobiusMap { w })
    }

    pub fn center(&self) -> Complex64 {
        self.w
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = 1.0 - self.w.conj() * z;
        if den.norm() < 1e-14 {
            return Err(Error::Domain(format!(
                "mobius map singular at z = {z} for center w = {}",
                self.w
            )));
        }
        Ok((self.w - z) / den)
    }

    /// d/dz sigma_w(z) = (|w|^2 - 1) / (1 - conj(w) z)^2.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let den = 1.0 - self.w.conj() * z;
        if den.norm() < 1e-14 {
            return Err(Error::Domain(format!(
                "mobius derivative singular at z = {z} for center w = {}",
                self.w
            )));
        }
        Ok(Complex64::new(self.w.norm_sqr() - 1.0, 0.0) / (den * den))
    }
}

/// Free-function form of [`MobiusMap::apply`].
pub fn mobius_apply(map: &MobiusMap, z: Complex64) -> Result<Complex64> {
    map.apply(z)
}
