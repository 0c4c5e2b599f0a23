//! Exact rational labels and scale parameters.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Small exact rational used for labels and scales.
pub type Ratio64 = Ratio<i64>;

/// Arbitrary precision rational used for accumulated quantities (errors, masses, certificates).
pub type Exact = BigRational;

/// A label in `[0, 1]`, stored exactly.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GridValue(Ratio64);

impl GridValue {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom <= 0 {
            return Err(Error::InvalidValue(format!("denominator {denom} must be positive")));
        }
        Self::from_ratio(Ratio64::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio64) -> Result<Self> {
        if r < Ratio64::zero() || r > Ratio64::one() {
            return Err(Error::InvalidValue(format!("{r} lies outside [0,1]")));
        }
        Ok(GridValue(r))
    }

    pub fn zero() -> Self {
        GridValue(Ratio64::zero())
    }

    pub fn one() -> Self {
        GridValue(Ratio64::one())
    }

    pub fn ratio(self) -> Ratio64 {
        self.0
    }

    pub fn exact(self) -> Exact {
        to_exact(self.0)
    }

    pub fn to_f64(self) -> f64 {
        ratio_f64(self.0)
    }

    pub fn abs_diff(self, other: GridValue) -> Ratio64 {
        (self.0 - other.0).abs()
    }

    /// Numerator of this value over `scale`, if the value lies on that grid.
    pub fn numer_on(self, scale: i64) -> Option<i64> {
        let scaled = self.0 * Ratio64::from_integer(scale);
        scaled.is_integer().then(|| scaled.to_integer())
    }
}

impl fmt::Display for GridValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for GridValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GridValue::from_ratio(parse_ratio(s)?)
    }
}

/// A nonnegative scale such as a margin, a discretization step or a cover radius.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Scale(Ratio64);

impl Scale {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom <= 0 {
            return Err(Error::InvalidValue(format!("denominator {denom} must be positive")));
        }
        Self::from_ratio(Ratio64::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio64) -> Result<Self> {
        if r < Ratio64::zero() {
            return Err(Error::InvalidValue(format!("scale {r} is negative")));
        }
        Ok(Scale(r))
    }

    pub fn zero() -> Self {
        Scale(Ratio64::zero())
    }

    pub fn ratio(self) -> Ratio64 {
        self.0
    }

    pub fn exact(self) -> Exact {
        to_exact(self.0)
    }

    pub fn to_f64(self) -> f64 {
        ratio_f64(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn half(self) -> Scale {
        Scale(self.0 / 2)
    }

    pub fn times(self, factor: i64) -> Scale {
        Scale(self.0 * factor)
    }

    /// Scale as a label; fails above 1.
    pub fn as_value(self) -> Result<GridValue> {
        GridValue::from_ratio(self.0)
    }

    /// Numerator over `scale`; fails when the value is off that grid.
    pub fn numer_on(self, scale: i64) -> Result<i64> {
        let scaled = self.0 * Ratio64::from_integer(scale);
        if scaled.is_integer() {
            Ok(scaled.to_integer())
        } else {
            Err(Error::IncompatibleScale(format!("{} is not a multiple of 1/{scale}", self.0)))
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Scale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scale::from_ratio(parse_ratio(s)?)
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.05`.
pub fn parse_ratio(s: &str) -> Result<Ratio64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio64::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = int.abs() * den + f;
        return Ok(Ratio64::new(if negative { -mag } else { mag }, den));
    }
    s.parse::<i64>().map(Ratio64::from_integer).map_err(|_| bad())
}

pub fn to_exact(r: Ratio64) -> Exact {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn ratio_f64(r: Ratio64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn exact_f64(r: &Exact) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders an exact rational as `p/q` (or an integer).
pub fn exact_string(r: &Exact) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Smallest positive integer `L` such that every given ratio is a multiple of `1/L`.
pub fn common_denominator<I: IntoIterator<Item = Ratio64>>(items: I) -> i64 {
    items.into_iter().fold(1, |acc, r| acc.lcm(r.denom()))
}

/// Binomial coefficient as an exact integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial_u64(n: u64, k: u64) -> u64 {
    binomial(n, k).to_u64().unwrap_or(u64::MAX)
}
