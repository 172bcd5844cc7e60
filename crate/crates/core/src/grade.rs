//! Exact rational grades in `[0, 1]` and the quasi-coincidence parameter `k`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational used for every grade, threshold and derived bound.
pub type Rational = Ratio<i128>;

/// Longest accepted fractional part of a decimal literal.
const MAX_DECIMAL_DIGITS: usize = 18;

/// Parses `p/q`, an integer, or a finite decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty number".into());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in `{text}`"))?;
        let den: i128 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in `{text}`"))?;
        if den == 0 {
            return Err(format!("zero denominator in `{text}`"));
        }
        return Ok(Ratio::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("`{text}` is not a number"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("`{text}` is not a number"));
    }
    if frac_part.len() > MAX_DECIMAL_DIGITS {
        return Err(format!("`{text}` has more than {MAX_DECIMAL_DIGITS} decimal digits"));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| format!("`{text}` is out of range"))?
    };
    let den = 10i128.pow(frac_part.len() as u32);
    let value = Ratio::new(num, den);
    Ok(if negative { -value } else { value })
}

pub(crate) fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A membership value: an exact rational in `[0, 1]`, always gcd-reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade(Rational);

impl Grade {
    pub const ZERO: Grade = Grade(Ratio::new_raw(0, 1));
    pub const ONE: Grade = Grade(Ratio::new_raw(1, 1));

    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() || value > Rational::one() {
            return Err(Error::Domain(format!(
                "grade {} lies outside [0, 1]",
                format_rational(&value)
            )));
        }
        Ok(Grade(value))
    }

    /// `num / den`, reduced. Fails outside `[0, 1]` or on a zero denominator.
    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Grade::new(Ratio::new(num, den))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// Midpoint of two grades; always a grade.
    pub fn midpoint(self, other: Grade) -> Grade {
        Grade((self.0 + other.0) / Ratio::from_integer(2))
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Grade {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = parse_rational(s).map_err(Error::Domain)?;
        Grade::new(value)
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The quasi-coincidence parameter `k ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KParam(Rational);

impl KParam {
    pub const ZERO: KParam = KParam(Ratio::new_raw(0, 1));

    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() || value >= Rational::one() {
            return Err(Error::Domain(format!(
                "k = {} lies outside [0, 1)",
                format_rational(&value)
            )));
        }
        Ok(KParam(value))
    }

    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        KParam::new(Ratio::new(num, den))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    /// `(1 - k) / 2`, which always lies in `(0, 1/2]`.
    pub fn half(self) -> Grade {
        Grade((Rational::one() - self.0) / Ratio::from_integer(2))
    }
}

impl fmt::Display for KParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for KParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = parse_rational(s).map_err(Error::Domain)?;
        KParam::new(value)
    }
}

impl Serialize for KParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
