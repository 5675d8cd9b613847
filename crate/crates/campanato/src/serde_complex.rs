//! Complex numbers serialize as `[re, im]` pairs.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<S: Serializer>(z: &Complex64, ser: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(ser)
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Complex64, D::Error> {
    let [re, im] = <[f64; 2]>::deserialize(de)?;
    if !re.is_finite() || !im.is_finite() {
        return Err(D::Error::custom("complex components must be finite"));
    }
    Ok(Complex64::new(re, im))
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], ser: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(de)?;
        if pairs.iter().any(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(D::Error::custom("complex components must be finite"));
        }
        Ok(pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}
