use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{check_dims, invalid, Result};

/// A point of the Euclidean space ℝⁿ.
///
/// Coordinates are always finite and there is at least one of them.
#[derive(Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return invalid("a point needs at least one coordinate");
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return invalid(format!("coordinate {i} is not finite ({})", coords[i]));
        }
        Ok(Point(coords))
    }

    /// One-dimensional point. Panics if `x` is not finite.
    pub fn scalar(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite scalar point {x}");
        Point(vec![x])
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Point(vec![0.0; dim])
    }

    /// Builds a point from coordinates already known to be finite.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// The single coordinate of a one-dimensional point.
    pub fn as_scalar(&self) -> Option<f64> {
        (self.0.len() == 1).then(|| self.0[0])
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.0, &self.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(&self.0, &other.0)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        check_dims(dim, self.dim())
    }

    /// `a·self + b·other`.
    pub fn lin_comb(a: f64, x: &Point, b: f64, y: &Point) -> Point {
        debug_assert_eq!(x.dim(), y.dim());
        Point(x.0.iter().zip(&y.0).map(|(p, q)| a * p + b * q).collect())
    }

    pub fn scaled(&self, a: f64) -> Point {
        Point(self.0.iter().map(|c| a * c).collect())
    }

    /// Lexicographic order on coordinates (total order, NaN-free by construction).
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        lex_cmp(&self.0, &other.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::scalar(x)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = crate::Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    /// Panics on non-finite coordinates or `N == 0`.
    fn from(v: [f64; N]) -> Self {
        Point::new(v.to_vec()).expect("finite, nonempty coordinates")
    }
}

impl Add for &Point {
    type Output = Point;

    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;

    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&Point> for f64 {
    type Output = Point;

    fn mul(self, rhs: &Point) -> Point {
        rhs.scaled(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
        assert!(Point::new(vec![0.0, -2.5]).is_ok());
    }

    #[test]
    fn lexicographic_order() {
        let a = Point::from([0.0, 1.0]);
        let b = Point::from([0.0, 2.0]);
        let c = Point::from([-1.0, 5.0]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(c.lex_cmp(&a), Ordering::Less);
        assert_eq!(a.lex_cmp(&a), Ordering::Equal);
    }

    #[test]
    fn arithmetic() {
        let x = Point::from([1.0, 2.0]);
        let y = Point::from([3.0, -1.0]);
        assert_eq!(&x + &y, Point::from([4.0, 1.0]));
        assert_eq!(&x - &y, Point::from([-2.0, 3.0]));
        assert_eq!(2.0 * &x, Point::from([2.0, 4.0]));
        assert_eq!(x.dist(&y), 13f64.sqrt());
    }
}
