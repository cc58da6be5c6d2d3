//! Angles as exact rational multiples of π, affine families in 1/f, or tagged
//! numeric values carrying a closed-form provenance string.
//!
//! All exact quantities are expressed in units of π: the rational `2/3`
//! stands for the angle 2π/3.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational. Used for every coefficient of π.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AngleError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("angle {value} rad at f={f} is outside (0, 2π)")]
    Range { value: f64, f: u32 },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// `n/d` as a normalized rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"-p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, AngleError> {
    let err = || AngleError::Parse(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| err())?;
    let d = BigInt::from_str(den).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(n, d))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Human form of `r·π`, e.g. `2π/3`, `-π/4`, `π`, `0`.
pub fn format_pi(r: &Rat) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let n = r.numer().abs();
    let d = r.denom();
    let head = if n.is_one() { "π".to_string() } else { format!("{n}π") };
    if d.is_one() {
        format!("{sign}{head}")
    } else {
        format!("{sign}{head}/{d}")
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators: fall back to a scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// An angle, either exact `(c0 + c1/f)·π` or a numeric value with provenance.
#[derive(Clone, Debug, PartialEq)]
pub enum AngleExpr {
    Affine { c0: Rat, c1: Rat },
    Numeric { value: f64, formula: String },
}

/// Result of evaluating an angle at a concrete `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleValue {
    /// Exact value in π units, when the expression was exact.
    pub exact: Option<Rat>,
    pub radians: f64,
}

impl AngleExpr {
    pub fn constant(c0: Rat) -> Self {
        AngleExpr::Affine { c0, c1: Rat::zero() }
    }

    pub fn affine(c0: Rat, c1: Rat) -> Self {
        AngleExpr::Affine { c0, c1 }
    }

    pub fn numeric(value: f64, formula: impl Into<String>) -> Result<Self, AngleError> {
        let formula = formula.into();
        if !value.is_finite() {
            return Err(AngleError::Domain(format!("non-finite numeric angle ({formula})")));
        }
        if formula.trim().is_empty() {
            return Err(AngleError::Domain("numeric angle without provenance".into()));
        }
        Ok(AngleExpr::Numeric { value, formula })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AngleExpr::Affine { .. })
    }

    /// Exact value in π units at `f`, without range checks.
    pub fn exact_at(&self, f: u32) -> Option<Rat> {
        match self {
            AngleExpr::Affine { c0, c1 } => Some(c0 + c1 / rint(f as i64)),
            AngleExpr::Numeric { .. } => None,
        }
    }

    /// Radians at `f`, without range checks.
    pub fn radians_at(&self, f: u32) -> f64 {
        match self {
            AngleExpr::Affine { .. } => rat_to_f64(&self.exact_at(f).unwrap()) * PI,
            AngleExpr::Numeric { value, .. } => *value,
        }
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleExpr::Affine { c0, c1 } if c1.is_zero() => write!(out, "{}", format_pi(c0)),
            AngleExpr::Affine { c0, c1 } => {
                write!(out, "({} + ({})/f)π", format_rat(c0), format_rat(c1))
            }
            AngleExpr::Numeric { value, formula } => write!(out, "{value:.17} [{formula}]"),
        }
    }
}

/// Evaluates `expr` at tile count `f`.
///
/// Exact expressions keep their rational part alongside the float.
pub fn eval_angle(expr: &AngleExpr, f: u32) -> Result<AngleValue, AngleError> {
    if f < 6 || f % 2 == 1 {
        return Err(AngleError::Domain(format!("f must be even and at least 6, got {f}")));
    }
    let (exact, radians) = match expr {
        AngleExpr::Affine { .. } => {
            let e = expr.exact_at(f).unwrap();
            if !e.is_positive() || e >= rint(2) {
                return Err(AngleError::Range { value: rat_to_f64(&e) * PI, f });
            }
            let r = rat_to_f64(&e) * PI;
            (Some(e), r)
        }
        AngleExpr::Numeric { value, .. } => {
            if !(*value > 0.0 && *value < 2.0 * PI) {
                return Err(AngleError::Range { value: *value, f });
            }
            (None, *value)
        }
    };
    Ok(AngleValue { exact, radians })
}

/// Reduction of an angle for the sine equation: `sin x = sign · sin(reduced)`
/// with `reduced ∈ [0, π/2]` and `reduced = ±(x − shift·π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recalibration<T> {
    pub reduced: T,
    pub sign: i8,
    /// Multiple of π subtracted from the input.
    pub shift: i64,
    /// True when the remainder was negated, i.e. `reduced = shift·π − x`.
    pub reflected: bool,
}

/// Exact recalibration; input and output in π units.
pub fn recalibrate_exact(x: &Rat) -> Recalibration<Rat> {
    // shift = ceil(x − 1/2), so that x − shift ∈ (−1/2, 1/2].
    let half = rat(1, 2);
    let shift_big = (x - &half).ceil().to_integer();
    let shift = shift_big.to_i64().expect("angle shift fits in i64");
    let y = x - Rat::from_integer(shift_big);
    let reflected = y.is_negative();
    let parity: i8 = if shift.is_even() { 1 } else { -1 };
    let sign = if reflected { -parity } else { parity };
    Recalibration { reduced: y.abs(), sign, shift, reflected }
}

/// Numeric recalibration; input and output in radians.
pub fn recalibrate(x: f64) -> Recalibration<f64> {
    let shift = (x / PI - 0.5).ceil();
    let y = x - shift * PI;
    let shift = shift as i64;
    let reflected = y < 0.0;
    let parity: i8 = if shift.rem_euclid(2) == 0 { 1 } else { -1 };
    let sign = if reflected { -parity } else { parity };
    Recalibration { reduced: y.abs().min(PI / 2.0), sign, shift, reflected }
}

// Serialization: {"c0": "p/q", "c1": "p/q"} or {"value": x, "formula": "..."}.

#[derive(Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum AngleRepr {
    Affine { c0: String, c1: String },
    Numeric { value: f64, formula: String },
}

impl Serialize for AngleExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            AngleExpr::Affine { c0, c1 } => AngleRepr::Affine { c0: format_rat(c0), c1: format_rat(c1) },
            AngleExpr::Numeric { value, formula } => {
                AngleRepr::Numeric { value: *value, formula: formula.clone() }
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AngleExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match AngleRepr::deserialize(d)? {
            AngleRepr::Affine { c0, c1 } => Ok(AngleExpr::Affine {
                c0: parse_rat(&c0).map_err(D::Error::custom)?,
                c1: parse_rat(&c1).map_err(D::Error::custom)?,
            }),
            AngleRepr::Numeric { value, formula } => {
                AngleExpr::numeric(value, formula).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let e = AngleExpr::affine(rint(0), rint(4));
        assert_eq!(eval_angle(&e, 8).unwrap().exact, Some(rat(1, 2)));
        let g = AngleExpr::affine(rat(2, 3), rat(-2, 3));
        assert_eq!(eval_angle(&g, 10).unwrap().exact, Some(rat(3, 5)));
        let a = AngleExpr::affine(rint(1), rint(-8));
        assert_eq!(eval_angle(&a, 16).unwrap().exact, Some(rat(1, 2)));
    }

    #[test]
    fn eval_errors() {
        let e = AngleExpr::affine(rint(0), rint(4));
        assert!(matches!(eval_angle(&e, 7), Err(AngleError::Domain(_))));
        assert!(matches!(eval_angle(&e, 4), Err(AngleError::Domain(_))));
        let big = AngleExpr::constant(rint(2));
        assert!(matches!(eval_angle(&big, 8), Err(AngleError::Range { .. })));
    }

    #[test]
    fn recalibration_examples() {
        let r = recalibrate_exact(&rat(3, 4));
        assert_eq!((r.reduced.clone(), r.sign, r.reflected), (rat(1, 4), 1, true));
        let r = recalibrate_exact(&rat(-3, 10));
        assert_eq!((r.reduced.clone(), r.sign), (rat(3, 10), -1));
        let r = recalibrate_exact(&rat(13, 10));
        assert_eq!((r.reduced.clone(), r.sign, r.shift), (rat(3, 10), -1, 1));
    }

    #[test]
    fn serde_round_trip() {
        let e = AngleExpr::affine(rat(2, 3), rat(-2, 3));
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"c0":"2/3","c1":"-2/3"}"#);
        assert_eq!(serde_json::from_str::<AngleExpr>(&s).unwrap(), e);
        let n = AngleExpr::numeric(1.25, "acos(x)").unwrap();
        let s = serde_json::to_string(&n).unwrap();
        assert_eq!(serde_json::from_str::<AngleExpr>(&s).unwrap(), n);
        assert!(serde_json::from_str::<AngleExpr>(r#"{"c0":"1","c1":"0","x":1}"#).is_err());
    }

    #[test]
    fn format_pi_forms() {
        assert_eq!(format_pi(&rat(2, 3)), "2π/3");
        assert_eq!(format_pi(&rat(-1, 4)), "-π/4");
        assert_eq!(format_pi(&rint(1)), "π");
    }
}
