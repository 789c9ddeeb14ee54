//! Dense univariate polynomials over [`Rational`].
//!
//! Coefficients are stored ascending by degree. Invariant: the coefficient
//! vector is either empty (the zero polynomial) or ends in a nonzero
//! coefficient, so equality of polynomials is equality of vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::{factorial, Rational};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// `c * x^degree`.
    pub fn monomial(c: Rational, degree: usize) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        UniPoly { coeffs }
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Ascending coefficients with no trailing zeros.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rational::from(i))
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    /// k-th derivative.
    pub fn derivative_n(&self, k: usize) -> UniPoly {
        let mut p = self.clone();
        for _ in 0..k {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// `p(x + y)` as a polynomial in x.
    pub fn shift(&self, y: &Rational) -> UniPoly {
        self.substitute_linear(&Rational::one(), y)
    }

    /// `p(c * x)`.
    pub fn scale_arg(&self, c: &Rational) -> UniPoly {
        self.substitute_linear(c, &Rational::zero())
    }

    /// Horner in the polynomial ring: `p(a*x + b)`.
    fn substitute_linear(&self, a: &Rational, b: &Rational) -> UniPoly {
        let inner = UniPoly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &UniPoly::constant(c.clone());
        }
        acc
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        // Leading coefficients are nonzero products, no trim needed.
        UniPoly { coeffs }
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// `<x>_n = x (x+1) ... (x+n-1)` expanded into coefficients.
pub fn rising_factorial_poly(n: usize) -> UniPoly {
    let mut p = UniPoly::one();
    for i in 0..n {
        let factor = UniPoly::from_coeffs(vec![Rational::from(i), Rational::one()]);
        p = &p * &factor;
    }
    p
}

/// `(x)_n = x (x-1) ... (x-n+1)` expanded into coefficients.
pub fn falling_factorial_poly(n: usize) -> UniPoly {
    let mut p = UniPoly::one();
    for i in 0..n {
        let factor = UniPoly::from_coeffs(vec![-Rational::from(i), Rational::one()]);
        p = &p * &factor;
    }
    p
}

/// Binomial coefficient polynomial `C(x, k) = (x)_k / k!`.
pub fn binom_poly(k: usize) -> UniPoly {
    falling_factorial_poly(k).scale(&Rational::one().checked_div(&factorial(k)).expect("k! > 0"))
}
