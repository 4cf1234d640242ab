use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Sub};

use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::rational::{format_rational, Rational};

/// A real value together with an absolute error bound. When the value is
/// known exactly (integer counts, rounded-and-reverified coefficients) the
/// rational is carried along.
#[derive(Clone, Debug, PartialEq)]
pub struct Measured {
    pub value: f64,
    pub error: f64,
    pub exact: Option<Rational>,
}

impl Measured {
    pub fn new(value: f64, error: f64) -> Self {
        Self {
            value,
            error,
            exact: None,
        }
    }

    pub fn exact(r: Rational) -> Self {
        Self {
            value: r.to_f64().unwrap_or(f64::NAN),
            error: 0.0,
            exact: Some(r),
        }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::from_integer(0.into()))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            value: self.value * k as f64,
            error: self.error * k.unsigned_abs() as f64,
            exact: self.exact.as_ref().map(|r| r * Rational::from_integer(k.into())),
        }
    }

    /// `true` when `self` and `other` agree within the sum of their bounds
    /// plus `slack`.
    pub fn agrees_with(&self, other: &Measured, slack: f64) -> bool {
        (self.value - other.value).abs() <= self.error + other.error + slack
    }
}

impl Add for Measured {
    type Output = Measured;

    fn add(self, rhs: Measured) -> Measured {
        let exact = match (self.exact, rhs.exact) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Measured {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
            exact,
        }
    }
}

impl Sub for Measured {
    type Output = Measured;

    fn sub(self, rhs: Measured) -> Measured {
        let exact = match (self.exact, rhs.exact) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        };
        Measured {
            value: self.value - rhs.value,
            error: self.error + rhs.error,
            exact,
        }
    }
}

impl Sum for Measured {
    fn sum<I: Iterator<Item = Measured>>(iter: I) -> Measured {
        iter.fold(Measured::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Measured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{} ± {:e}", self.value, self.error),
        }
    }
}

/// `{"value", "abs_error", "exact"?}` with the exact value as a rational string.
impl Serialize for Measured {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("value", &self.value)?;
        m.serialize_entry("abs_error", &self.error)?;
        if let Some(r) = &self.exact {
            m.serialize_entry("exact", &format_rational(r))?;
        }
        m.end()
    }
}
