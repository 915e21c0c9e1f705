//! Dense univariate polynomials in the curve parameter `t`.
//!
//! The evolution operator integrates a strictly lower-triangular linear
//! system with polynomial data, so every solution component is again a
//! polynomial; this module supplies the exact arithmetic for that.

use crate::scalar::Scalar;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial with coefficients in ascending powers of `t`.
///
/// The zero polynomial is the empty coefficient list; trailing zero
/// coefficients are always trimmed so equality is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: F) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(k: usize, c: F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// Ascending coefficients, without trailing zeros.
    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation at `t`.
    pub fn eval(&self, t: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    /// The antiderivative vanishing at `t = 0`.
    pub fn antiderivative(&self) -> Poly<F> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(F::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.div_nat(k as u64 + 1));
        }
        Poly::from_coeffs(coeffs)
    }

    /// Derivative with respect to `t`.
    pub fn derivative(&self) -> Poly<F> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * F::from_count(k as u64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Definite integral over `[0, 1]`.
    pub fn integral_01(&self) -> F {
        let mut acc = F::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = acc + c.div_nat(k as u64 + 1);
        }
        acc
    }
}

impl<F: Scalar> Add for Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl<F: Scalar> Sub for Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        Poly {
            coeffs: self.coeffs.into_iter().map(Neg::neg).collect(),
        }
    }
}

impl<F: Scalar> Mul for Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut coeffs = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<F: Scalar> Zero for Poly<F> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Scalar> One for Poly<F> {
    fn one() -> Self {
        Poly::constant(F::one())
    }
}

impl<F: Scalar> Scalar for Poly<F> {
    fn from_count(n: u64) -> Self {
        Poly::constant(F::from_count(n))
    }

    fn div_nat(&self, n: u64) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.div_nat(n)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn poly(coeffs: &[&str]) -> Poly<Rational> {
        Poly::from_coeffs(coeffs.iter().map(|s| q(s)).collect())
    }

    #[test]
    fn eval_and_arith() {
        // (1 + t)(1 - t) = 1 - t^2
        let p = poly(&["1", "1"]) * poly(&["1", "-1"]);
        assert_eq!(p, poly(&["1", "0", "-1"]));
        assert_eq!(p.eval(&q("1/2")), q("3/4"));
    }

    #[test]
    fn antiderivative_vanishes_at_zero() {
        let p = poly(&["1", "2", "3"]);
        let ad = p.antiderivative();
        assert_eq!(ad, poly(&["0", "1", "1", "1"]));
        assert_eq!(ad.eval(&Rational::zero()), Rational::zero());
        assert_eq!(ad.derivative(), p);
        assert_eq!(p.integral_01(), q("3"));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        assert_eq!(poly(&["1", "0", "0"]).degree(), Some(0));
        assert!(poly(&["0", "0"]).is_zero());
    }
}
