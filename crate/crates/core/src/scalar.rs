use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact fraction used on every analytic path.
pub type Rational = num_rational::Ratio<i128>;

/// Numeric type the analytic engine is generic over.
///
/// `Rational` gives exact results (zero is exactly zero); `f64` is accepted for
/// quick approximate evaluation and is what the simulator uses internally.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer is representable")
    }

    fn two() -> Self {
        Self::from_int(2)
    }

    fn half(&self) -> Self {
        self.clone() / Self::two()
    }

    fn double(&self) -> Self {
        self.clone() * Self::two()
    }

    fn is_positive_amount(&self) -> bool {
        self.is_positive()
    }

    /// Lossy conversion used for reporting and simulation.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q`, an integer, or a finite decimal such as `12.5` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let err = || Error::Parse(text.to_string());
    if text.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = i128::from_str(num.trim()).map_err(|_| err())?;
        let den = i128::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    if frac_part.len() > 30 {
        return Err(err());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer = i128::from_str(&joined).map_err(|_| err())?;
    let denom = 10i128.checked_pow(frac_part.len() as u32).ok_or_else(err)?;
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}
