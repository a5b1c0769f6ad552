//! Coefficient fields: exact rationals and complex doubles.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::JetError;

/// Which coefficient field a jet lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Exact,
    Float,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Exact => f.write_str("exact"),
            Regime::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Regime::Exact),
            "float" => Ok(Regime::Float),
            other => Err(format!("unknown regime {other:?} (expected exact|float)")),
        }
    }
}

/// A real exponent `t`, either exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum Exponent {
    Rational(BigRational),
    Float(f64),
}

impl Exponent {
    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Rational(q) => rational_to_f64(q),
            Exponent::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Exponent::Rational(q) => Some(q),
            Exponent::Float(_) => None,
        }
    }
}

impl From<BigRational> for Exponent {
    fn from(q: BigRational) -> Self {
        Exponent::Rational(q)
    }
}

impl From<f64> for Exponent {
    fn from(x: f64) -> Self {
        Exponent::Float(x)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(q) => f.write_str(&format_rational(q)),
            Exponent::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Magnitude of a coefficient difference, kept exact where possible.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitude {
    Exact(BigRational),
    Float(f64),
}

impl Magnitude {
    pub fn zero(regime: Regime) -> Self {
        match regime {
            Regime::Exact => Magnitude::Exact(BigRational::zero()),
            Regime::Float => Magnitude::Float(0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Magnitude::Exact(q) => q.is_zero(),
            Magnitude::Float(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Magnitude::Exact(q) => rational_to_f64(q),
            Magnitude::Float(x) => *x,
        }
    }

    /// Exact magnitudes must vanish; float magnitudes must not exceed `tolerance`.
    pub fn within(&self, tolerance: f64) -> bool {
        match self {
            Magnitude::Exact(q) => q.is_zero(),
            Magnitude::Float(x) => *x <= tolerance,
        }
    }

    pub fn max(self, other: Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => Magnitude::Exact(a.max(b)),
            (a, b) => Magnitude::Float(a.to_f64().max(b.to_f64())),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(q) if q.is_zero() => f.write_str("0"),
            Magnitude::Exact(q) => f.write_str(&format_rational(q)),
            Magnitude::Float(x) => write!(f, "{x:e}"),
        }
    }
}

impl Serialize for Magnitude {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Magnitude::Exact(_) => serializer.serialize_str(&self.to_string()),
            Magnitude::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

/// The field a jet's coefficients live in.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + 'static
{
    const REGIME: Regime;

    fn from_rational(q: &BigRational) -> Self;

    fn from_integer(k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Nearest field element to a double (exact binary value for rationals).
    fn from_f64(x: f64) -> Self;

    fn to_complex(&self) -> Complex64;

    /// |x|, exact where the field allows it.
    fn magnitude(&self) -> Magnitude;

    /// `exp(c)` for a constant term, when it stays in the field.
    fn exp_constant(&self) -> Option<Self>;

    /// Principal `log(c)`, when it stays in the field.
    fn log_constant(&self) -> Option<Self>;

    /// The exponent as a field element.
    fn exponent(t: &Exponent) -> Result<Self, JetError>;

    /// Draw a random coefficient for test jets.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// JSON `(re, im)` pair.
    fn to_json_parts(&self) -> (Value, Value);

    fn from_json_parts(re: &Value, im: &Value) -> Result<Self, JetError>;

    /// Truncated Cauchy product over a precomputed pairing table.
    ///
    /// `pairs[i]` lists `(j, k)` such that monomial `i` times monomial `j`
    /// is monomial `k` within the cap.
    fn convolve(pairs: &[Vec<(u32, u32)>], len: usize, a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut out = vec![Self::zero(); len];
        for (i, row) in pairs.iter().enumerate() {
            if a[i].is_zero() {
                continue;
            }
            for &(j, k) in row {
                let bj = &b[j as usize];
                if bj.is_zero() {
                    continue;
                }
                out[k as usize] += &(a[i].clone() * bj.clone());
            }
        }
        out
    }
}

impl Scalar for BigRational {
    const REGIME: Regime = Regime::Exact;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn magnitude(&self) -> Magnitude {
        Magnitude::Exact(self.abs())
    }

    fn exp_constant(&self) -> Option<Self> {
        self.is_zero().then(BigRational::one)
    }

    fn log_constant(&self) -> Option<Self> {
        self.is_one().then(BigRational::zero)
    }

    fn exponent(t: &Exponent) -> Result<Self, JetError> {
        match t {
            Exponent::Rational(q) => Ok(q.clone()),
            Exponent::Float(x) => Err(JetError::FloatExponentInExactRegime(*x)),
        }
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let num: i64 = rng.random_range(-9..=9);
        let den: i64 = rng.random_range(1..=9);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_json_parts(&self) -> (Value, Value) {
        (
            Value::String(format_rational(self)),
            Value::String("0/1".to_string()),
        )
    }

    fn from_json_parts(re: &Value, im: &Value) -> Result<Self, JetError> {
        let re = json_rational(re)?;
        let im = json_rational(im)?;
        if !im.is_zero() {
            return Err(JetError::Format(
                "exact regime coefficients must be real".into(),
            ));
        }
        Ok(re)
    }

    // Scale both operands to integer vectors, convolve over BigInt, then
    // divide once per output coefficient.
    fn convolve(pairs: &[Vec<(u32, u32)>], len: usize, a: &[Self], b: &[Self]) -> Vec<Self> {
        let (la, ia) = integer_scaled(a);
        let (lb, ib) = integer_scaled(b);
        let mut acc = vec![BigInt::zero(); len];
        for (i, row) in pairs.iter().enumerate() {
            let ai = &ia[i];
            if ai.is_zero() {
                continue;
            }
            for &(j, k) in row {
                let bj = &ib[j as usize];
                if bj.is_zero() {
                    continue;
                }
                acc[k as usize] += ai * bj;
            }
        }
        let den = la * lb;
        acc.into_iter()
            .map(|num| {
                if num.is_zero() {
                    BigRational::zero()
                } else {
                    BigRational::new(num, den.clone())
                }
            })
            .collect()
    }
}

impl Scalar for Complex64 {
    const REGIME: Regime = Regime::Float;

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn from_integer(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }

    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn magnitude(&self) -> Magnitude {
        Magnitude::Float(self.norm())
    }

    fn exp_constant(&self) -> Option<Self> {
        Some(self.exp())
    }

    fn log_constant(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.ln())
    }

    fn exponent(t: &Exponent) -> Result<Self, JetError> {
        Ok(Complex64::new(t.to_f64(), 0.0))
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
    }

    fn to_json_parts(&self) -> (Value, Value) {
        (json_f64(self.re), json_f64(self.im))
    }

    fn from_json_parts(re: &Value, im: &Value) -> Result<Self, JetError> {
        Ok(Complex64::new(json_float(re)?, json_float(im)?))
    }
}

fn integer_scaled(v: &[BigRational]) -> (BigInt, Vec<BigInt>) {
    let lcm = v
        .iter()
        .filter(|q| !q.is_zero())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled = v
        .iter()
        .map(|q| {
            if q.is_zero() {
                BigInt::zero()
            } else {
                q.numer() * (&lcm / q.denom())
            }
        })
        .collect();
    (lcm, scaled)
}

fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

fn json_rational(v: &Value) -> Result<BigRational, JetError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(JetError::Format),
        Value::Number(n) => n
            .as_i64()
            .map(|k| BigRational::from_integer(BigInt::from(k)))
            .ok_or_else(|| JetError::Format(format!("non-integer number {n} in exact jet"))),
        other => Err(JetError::Format(format!("expected rational, got {other}"))),
    }
}

fn json_float(v: &Value) -> Result<f64, JetError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| JetError::Format(format!("bad number {n}"))),
        Value::String(s) => parse_rational(s)
            .map(|q| rational_to_f64(&q))
            .or_else(|_| s.parse::<f64>().map_err(|e| e.to_string()))
            .map_err(JetError::Format),
        other => Err(JetError::Format(format!("expected number, got {other}"))),
    }
}

/// `p/q` in lowest terms, always with a denominator.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p`, `p/q`, or a terminating decimal such as `-0.35`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_decimal(p)?;
        let q = parse_decimal(q)?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(p / q);
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a number: {s:?}"));
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: {s:?}"));
    }
    let num: BigInt = digits
        .parse()
        .map_err(|e| format!("not a number: {s:?} ({e})"))?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when numerator or denominator overflow f64.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_lowest_terms() {
        assert_eq!(format_rational(&rational(6, -8)), "-3/4");
        assert_eq!(format_rational(&rational(1, 1)), "1/1");
        assert_eq!(parse_rational("-3/4").unwrap(), rational(-3, 4));
        assert_eq!(parse_rational("5").unwrap(), rational(5, 1));
        assert_eq!(parse_rational("0.35").unwrap(), rational(7, 20));
        assert_eq!(parse_rational("-.5").unwrap(), rational(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn magnitude_display() {
        assert_eq!(Magnitude::Exact(BigRational::zero()).to_string(), "0");
        assert_eq!(Magnitude::Exact(rational(1, 3)).to_string(), "1/3");
        assert!(Magnitude::Float(1e-12).within(1e-10));
        assert!(!Magnitude::Exact(rational(1, 1_000_000)).within(1.0));
    }

    #[test]
    fn exact_constants_stay_rational() {
        assert_eq!(BigRational::zero().exp_constant(), Some(BigRational::one()));
        assert_eq!(rational(2, 1).exp_constant(), None);
        assert_eq!(BigRational::one().log_constant(), Some(BigRational::zero()));
        assert_eq!(rational(2, 1).log_constant(), None);
        assert!(BigRational::exponent(&Exponent::Float(0.5)).is_err());
    }

    #[test]
    fn rational_convolution_matches_generic() {
        // (1/2 + 2/3 x)(3/5 - x) in one variable, cap 2: indices 0,1,2.
        let pairs = vec![
            vec![(0, 0), (1, 1), (2, 2)],
            vec![(0, 1), (1, 2)],
            vec![(0, 2)],
        ];
        let a = vec![rational(1, 2), rational(2, 3), BigRational::zero()];
        let b = vec![rational(3, 5), rational(-1, 1), BigRational::zero()];
        let fast = BigRational::convolve(&pairs, 3, &a, &b);
        assert_eq!(
            fast,
            vec![rational(3, 10), rational(-1, 10), rational(-2, 3)]
        );
    }
}
