//! Exact scalars and the extended half-line `(0, ∞]` used for edge lengths
//! and cone coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::Add;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact ordered field element.
///
/// Point equality in the moduli spaces is decided by comparing coordinates,
/// so the scalar has to be totally ordered and hashable. Floating point types
/// are deliberately excluded.
pub trait Scalar: Clone + Ord + Hash + fmt::Debug + Num + Signed + Send + Sync + 'static {
    /// The fraction `numer / denom`. Panics if `denom == 0`.
    fn from_fraction(numer: i64, denom: i64) -> Self;

    /// Exact half of `self`.
    fn half(&self) -> Self {
        self.clone() / (Self::one() + Self::one())
    }

    /// Text form `p/q` (the denominator is always written).
    fn to_text(&self) -> String;

    /// Parses `p/q` or a bare integer `p`.
    fn parse_text(s: &str) -> Option<Self>;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + Hash
        + fmt::Debug
        + fmt::Display
        + FromStr
        + FromPrimitive
        + Send
        + Sync
        + 'static,
{
    fn from_fraction(numer: i64, denom: i64) -> Self {
        let n = T::from_i64(numer).expect("numerator fits the integer type");
        let d = T::from_i64(denom).expect("denominator fits the integer type");
        Ratio::new(n, d)
    }

    fn to_text(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p = T::from_str(p.trim()).ok()?;
                let q = T::from_str(q.trim()).ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(Ratio::new(p, q))
            }
            None => T::from_str(s).ok().map(Ratio::from_integer),
        }
    }
}

/// A value in `[0, ∞]`: either a finite scalar or the symbol `∞`.
///
/// Edge lengths of tropical curves use the strictly positive part; cone
/// coordinates may also be zero. The derived order puts every finite value
/// below `∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedLength<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> ExtendedLength<S> {
    pub fn finite(value: S) -> Self {
        ExtendedLength::Finite(value)
    }

    pub fn fraction(numer: i64, denom: i64) -> Self {
        ExtendedLength::Finite(S::from_fraction(numer, denom))
    }

    pub fn integer(value: i64) -> Self {
        Self::fraction(value, 1)
    }

    pub fn zero() -> Self {
        ExtendedLength::Finite(S::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedLength::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtendedLength::Finite(v) if v.is_zero())
    }

    /// True for `∞` and for finite values `> 0`.
    pub fn is_positive(&self) -> bool {
        match self {
            ExtendedLength::Finite(v) => v.is_positive(),
            ExtendedLength::Infinite => true,
        }
    }

    pub fn as_finite(&self) -> Option<&S> {
        match self {
            ExtendedLength::Finite(v) => Some(v),
            ExtendedLength::Infinite => None,
        }
    }

    /// `self - other` for `other` finite; `∞ - q = ∞`.
    pub fn minus(&self, other: &S) -> Self {
        match self {
            ExtendedLength::Finite(v) => ExtendedLength::Finite(v.clone() - other.clone()),
            ExtendedLength::Infinite => ExtendedLength::Infinite,
        }
    }

    /// Half of the value; `∞ / 2 = ∞`.
    pub fn half(&self) -> Self {
        match self {
            ExtendedLength::Finite(v) => ExtendedLength::Finite(v.half()),
            ExtendedLength::Infinite => ExtendedLength::Infinite,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            ExtendedLength::Finite(v) => v.to_text(),
            ExtendedLength::Infinite => "inf".to_string(),
        }
    }

    pub fn parse_text(s: &str) -> Option<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            Some(ExtendedLength::Infinite)
        } else {
            S::parse_text(t).map(ExtendedLength::Finite)
        }
    }

    /// Sum of all values, with `∞` absorbing.
    pub fn sum<'a>(values: impl IntoIterator<Item = &'a Self>) -> Self
    where
        S: 'a,
    {
        values.into_iter().fold(Self::zero(), |acc, v| acc + v.clone())
    }
}

impl<S: Scalar> Add for ExtendedLength<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedLength::Finite(a), ExtendedLength::Finite(b)) => ExtendedLength::Finite(a + b),
            _ => ExtendedLength::Infinite,
        }
    }
}

impl<S: Scalar> PartialEq<S> for ExtendedLength<S> {
    fn eq(&self, other: &S) -> bool {
        matches!(self, ExtendedLength::Finite(v) if v == other)
    }
}

impl<S: Scalar> PartialOrd<S> for ExtendedLength<S> {
    fn partial_cmp(&self, other: &S) -> Option<Ordering> {
        Some(match self {
            ExtendedLength::Finite(v) => v.cmp(other),
            ExtendedLength::Infinite => Ordering::Greater,
        })
    }
}

impl<S: Scalar> fmt::Display for ExtendedLength<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<S: Scalar> From<S> for ExtendedLength<S> {
    fn from(value: S) -> Self {
        ExtendedLength::Finite(value)
    }
}
