//! Exact fractions: parsing, formatting, and serde as `"a/b"` strings.

use std::str::FromStr;

use crate::{Error, Frac, Result};

/// Parses `"3/4"`, `"-1"`, or a finite decimal such as `"0.125"`.
pub fn parse_frac(s: &str) -> Result<Frac> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a fraction: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num = i64::from_str(num.trim()).map_err(|_| bad())?;
        let den = i64::from_str(den.trim()).map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Frac::new(num, den));
    }
    if let Some((int, dec)) = s.split_once('.') {
        if dec.is_empty() || dec.len() > 15 || !dec.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_val = if int.is_empty() || int == "-" { 0 } else { i64::from_str(int).map_err(|_| bad())?.abs() };
        let den = 10i64.pow(dec.len() as u32);
        let frac_val = i64::from_str(dec).map_err(|_| bad())?;
        let value = Frac::new(int_val * den + frac_val, den);
        return Ok(if neg { -value } else { value });
    }
    Ok(Frac::from_integer(i64::from_str(s).map_err(|_| bad())?))
}

pub fn format_frac(f: &Frac) -> String {
    if *f.denom() == 1 {
        f.numer().to_string()
    } else {
        format!("{}/{}", f.numer(), f.denom())
    }
}

pub fn to_f64(f: &Frac) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

pub mod serde_frac {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Frac;

    pub fn serialize<S: Serializer>(f: &Frac, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_frac(f))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Frac, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_frac(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_opt_frac {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Frac;

    pub fn serialize<S: Serializer>(f: &Option<Frac>, s: S) -> Result<S::Ok, S::Error> {
        match f {
            Some(f) => s.serialize_str(&super::format_frac(f)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Frac>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| super::parse_frac(&s).map_err(serde::de::Error::custom)).transpose()
    }
}
