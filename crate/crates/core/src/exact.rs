//! Exact rational values and their textual forms.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = Rational64;

/// Canonical `num/den` form, always with an explicit denominator.
pub fn to_fraction(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Short display form: `0`, `1`, `3/4`.
pub fn to_display(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n`, `n/d` or a finite decimal such as `0.01`.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = int
            .abs()
            .checked_mul(den)
            .and_then(|v| v.checked_add(f))
            .ok_or_else(bad)?;
        return Ok(Q::new(if neg { -mag } else { mag }, den));
    }
    Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}
