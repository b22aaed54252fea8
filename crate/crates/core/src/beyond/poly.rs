//! Bivariate polynomials in the chain variables `(n, n')` with real coefficients.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest total degree that can be stored.
pub const MAX_DEGREE: usize = 6;
const DIM: usize = MAX_DEGREE + 1;

/// Arithmetic shared by `f64` and [`Poly2`], so coefficient formulas can be written once
/// and evaluated either at a point or symbolically in `(n, n')`.
pub trait Ring:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn constant(c: f64) -> Self;
}

impl Ring for f64 {
    fn constant(c: f64) -> Self {
        c
    }
}

/// `Σ c_{ij} n^i n'^j` with `i + j ≤ 6`.
#[derive(Clone, Copy, PartialEq)]
pub struct Poly2 {
    c: [[f64; DIM]; DIM],
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { c: [[0.0; DIM]; DIM] }
    }

    /// The variable `n`.
    pub fn n() -> Self {
        let mut p = Self::zero();
        p.c[1][0] = 1.0;
        p
    }

    /// The variable `n'`.
    pub fn np() -> Self {
        let mut p = Self::zero();
        p.c[0][1] = 1.0;
        p
    }

    /// Coefficient of `n^i n'^j`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i < DIM && j < DIM { self.c[i][j] } else { 0.0 }
    }

    pub fn eval(&self, n: f64, np: f64) -> f64 {
        let mut acc = 0.0;
        for i in (0..DIM).rev() {
            let mut row = 0.0;
            for j in (0..DIM - i).rev() {
                row = row * np + self.c[i][j];
            }
            acc = acc * n + row;
        }
        acc
    }

    /// Nonzero terms as `(i, j, c_ij)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..DIM).flat_map(move |i| (0..DIM - i).map(move |j| (i, j, self.c[i][j]))).filter(|t| t.2 != 0.0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    /// Largest coefficient magnitude among terms of even total degree.
    pub fn even_part_norm(&self) -> f64 {
        self.terms().filter(|(i, j, _)| (i + j) % 2 == 0).map(|t| t.2.abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude among terms of odd total degree.
    pub fn odd_part_norm(&self) -> f64 {
        self.terms().filter(|(i, j, _)| (i + j) % 2 == 1).map(|t| t.2.abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude.
    pub fn norm(&self) -> f64 {
        self.terms().map(|t| t.2.abs()).fold(0.0, f64::max)
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self;
        out.c.iter_mut().flatten().for_each(|x| *x = f(*x));
        out
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:e}·n^{i}·n'^{j}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Ring for Poly2 {
    fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.c[0][0] = c;
        p
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(mut self, rhs: Poly2) -> Poly2 {
        for i in 0..DIM {
            for j in 0..DIM {
                self.c[i][j] += rhs.c[i][j];
            }
        }
        self
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        self + (-rhs)
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.map(|x| -x)
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    /// Panics if the product has a nonzero term above [`MAX_DEGREE`].
    fn mul(self, rhs: Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                assert!(i + j + k + l <= MAX_DEGREE, "polynomial degree overflow");
                out.c[i + k][j + l] += a * b;
            }
        }
        out
    }
}

impl Add<f64> for Poly2 {
    type Output = Poly2;
    fn add(mut self, rhs: f64) -> Poly2 {
        self.c[0][0] += rhs;
        self
    }
}

impl Sub<f64> for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: f64) -> Poly2 {
        self + (-rhs)
    }
}

impl Mul<f64> for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: f64) -> Poly2 {
        self.map(|x| x * rhs)
    }
}

impl Div<f64> for Poly2 {
    type Output = Poly2;
    fn div(self, rhs: f64) -> Poly2 {
        self.map(|x| x / rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_pointwise() {
        let n = Poly2::n();
        let m = Poly2::np();
        let p = (n * n - m * 2.0 + 1.5) * (n + m) * 0.5 - (m * m * m) / 4.0;
        let (x, y) = (0.3, -1.7);
        let want = (x * x - 2.0 * y + 1.5) * (x + y) * 0.5 - y * y * y / 4.0;
        assert!((p.eval(x, y) - want).abs() < 1e-14);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(Poly2::zero().degree(), None);
    }

    #[test]
    #[should_panic(expected = "degree overflow")]
    fn overflow_is_detected() {
        let n = Poly2::n();
        let n4 = n * n * n * n;
        let _ = n4 * n4;
    }

    #[test]
    fn parity_norms() {
        let n = Poly2::n();
        let p = n * n * n * 2.0 + n * Poly2::np() * 3.0;
        assert_eq!(p.odd_part_norm(), 2.0);
        assert_eq!(p.even_part_norm(), 3.0);
        assert_eq!(p.norm(), 3.0);
    }
}
