//! Exact rational scalars and points.
//!
//! Every quantity in the crate is a [`Scalar`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. `BigRational`
//! reduces after every operation, so structural equality is numeric equality.

use std::fmt;
use std::ops::{Index, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseScalarError(pub String);

/// Parses `p/q` (sign only on `p`, `q > 0`) or a bare integer `p`.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseScalarError> {
    let err = || ParseScalarError(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    if !is_integer_literal(num, true) {
        return Err(err());
    }
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = match den {
        Some(d) => {
            if !is_integer_literal(d, false) {
                return Err(err());
            }
            let d = BigInt::from_str(d).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(BigRational::new(num, den))
}

fn is_integer_literal(s: &str, signed: bool) -> bool {
    let digits = if signed {
        s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s)
    } else {
        s
    };
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Canonical text form: `p` when the denominator is 1, otherwise `p/q`.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A point of some ambient rational space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Point(vec![Scalar::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn dot(&self, other: &[Scalar]) -> Scalar {
        debug_assert_eq!(self.dim(), other.len());
        dot(&self.0, other)
    }

    pub fn scaled(&self, factor: &Scalar) -> Point {
        Point(self.0.iter().map(|c| c * factor).collect())
    }

    /// `(x, value)`: the point with one extra trailing coordinate.
    pub fn extended(&self, value: Scalar) -> Point {
        let mut coords = self.0.clone();
        coords.push(value);
        Point(coords)
    }

    pub fn add_scaled(&mut self, other: &Point, factor: &Scalar) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b * factor;
        }
    }
}

impl Index<usize> for Point {
    type Output = Scalar;

    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl Neg for &Point {
    type Output = Point;

    fn neg(self) -> Point {
        Point(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_scalar).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ weights[i] · points[i]`; `dim` is used when the slices are empty.
pub fn combination<'a, I>(dim: usize, terms: I) -> Point
where
    I: IntoIterator<Item = (&'a Scalar, &'a Point)>,
{
    let mut acc = Point::zero(dim);
    for (weight, point) in terms {
        acc.add_scaled(point, weight);
    }
    acc
}

pub fn is_nonnegative(x: &Scalar) -> bool {
    !x.is_negative()
}
