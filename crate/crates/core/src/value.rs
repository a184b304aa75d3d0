//! Extended rational values: the codomain of every set function in this
//! crate. A value is a finite exact rational, `+inf`, or `-inf`. Sums that
//! would combine infinities of opposite sign are rejected, never evaluated.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueError {
    #[error("ill-defined sum: +inf and -inf cannot be combined")]
    IllDefinedSum,
    #[error("cannot parse extended value from {0:?}")]
    Parse(String),
}

/// A finite exact rational, `+inf`, or `-inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedValue {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

impl ExtendedValue {
    pub fn zero() -> Self {
        ExtendedValue::Finite(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExtendedValue::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// Finite rational `numer/denom`. Panics if `denom` is zero.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        ExtendedValue::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtendedValue::Finite(r) if r.is_zero())
    }

    /// `>= 0`, with `+inf` counting as nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        match self {
            ExtendedValue::NegInfinity => false,
            ExtendedValue::Finite(r) => !r.is_negative(),
            ExtendedValue::PosInfinity => true,
        }
    }

    /// `<= 0`, with `-inf` counting as nonpositive.
    pub fn is_nonpositive(&self) -> bool {
        match self {
            ExtendedValue::NegInfinity => true,
            ExtendedValue::Finite(r) => !r.is_positive(),
            ExtendedValue::PosInfinity => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        !self.is_nonnegative()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_nonpositive()
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedValue::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Extended addition. `+inf + -inf` (in either order) is an error.
    pub fn checked_add(&self, other: &Self) -> Result<Self, ValueError> {
        use ExtendedValue::*;
        Ok(match (self, other) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (PosInfinity, NegInfinity) | (NegInfinity, PosInfinity) => {
                return Err(ValueError::IllDefinedSum)
            }
            (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
            (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ValueError> {
        self.checked_add(&other.clone().neg())
    }

    pub fn neg(self) -> Self {
        match self {
            ExtendedValue::NegInfinity => ExtendedValue::PosInfinity,
            ExtendedValue::Finite(r) => ExtendedValue::Finite(-r),
            ExtendedValue::PosInfinity => ExtendedValue::NegInfinity,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedValue::*;
        match (self, other) {
            (NegInfinity, NegInfinity) | (PosInfinity, PosInfinity) => Ordering::Equal,
            (NegInfinity, _) | (_, PosInfinity) => Ordering::Less,
            (_, NegInfinity) | (PosInfinity, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

/// Canonical text form: reduced `p/q` with the `/q` omitted when `q = 1`,
/// or `inf` / `-inf`. This is the wire format used by the CLI schemas.
impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::NegInfinity => write!(f, "-inf"),
            ExtendedValue::PosInfinity => write!(f, "inf"),
            ExtendedValue::Finite(r) => {
                if r.denom() == &BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for ExtendedValue {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "inf" | "+inf" => return Ok(ExtendedValue::PosInfinity),
            "-inf" => return Ok(ExtendedValue::NegInfinity),
            _ => {}
        }
        let bad = || ValueError::Parse(s.to_string());
        match t.split_once('/') {
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(ExtendedValue::Finite(BigRational::new(n, d)))
            }
            None => {
                let n = BigInt::from_str(t).map_err(|_| bad())?;
                Ok(ExtendedValue::Finite(BigRational::from_integer(n)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_spans_infinities() {
        let vals = [
            ExtendedValue::NegInfinity,
            ExtendedValue::from_ratio(-1, 2),
            ExtendedValue::zero(),
            ExtendedValue::from_int(3),
            ExtendedValue::PosInfinity,
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1], "{} < {}", w[0], w[1]);
        }
    }

    #[test]
    fn opposite_infinities_do_not_sum() {
        let e = ExtendedValue::PosInfinity.checked_add(&ExtendedValue::NegInfinity);
        assert_eq!(e, Err(ValueError::IllDefinedSum));
        let e = ExtendedValue::NegInfinity.checked_add(&ExtendedValue::PosInfinity);
        assert_eq!(e, Err(ValueError::IllDefinedSum));
    }

    #[test]
    fn infinity_absorbs_finite_addends() {
        let v = ExtendedValue::PosInfinity
            .checked_add(&ExtendedValue::from_int(-7))
            .unwrap();
        assert_eq!(v, ExtendedValue::PosInfinity);
    }

    #[test]
    fn display_round_trips_canonical_forms() {
        for s in ["0", "3", "-2", "1/2", "-5/3", "inf", "-inf"] {
            let v: ExtendedValue = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        // non-canonical inputs normalize
        assert_eq!("2/4".parse::<ExtendedValue>().unwrap().to_string(), "1/2");
        assert_eq!("6/3".parse::<ExtendedValue>().unwrap().to_string(), "2");
        assert_eq!("1/-2".parse::<ExtendedValue>().unwrap().to_string(), "-1/2");
        assert!("1/0".parse::<ExtendedValue>().is_err());
        assert!("a".parse::<ExtendedValue>().is_err());
    }
}
