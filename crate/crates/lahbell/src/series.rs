//! Exact truncated power series in one variable t, used to verify
//! generating-function identities coefficient by coefficient.
//!
//! A series carries coefficients of t^0 ... t^order; every arithmetic result
//! is truncated back to the same order. Plain coefficients are stored;
//! [`TruncatedSeries::egf_coeff`] reads entry n as `n! * coeff(n)` for
//! checks stated about exponential generating functions.
//!
//! Binary operations require both operands to share the same order, since a
//! mixed-order sum would silently claim precision it does not have.

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Series with given plain coefficients, zero-padded or truncated to the
    /// requested order.
    pub fn from_coeffs(order: usize, coeffs: Vec<Rational>) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, Rational::zero());
        coeffs.truncate(order + 1);
        TruncatedSeries { coeffs }
    }

    /// Series whose t^n/n! coefficients are the given values, i.e. entry n
    /// is divided by n! on the way in.
    pub fn from_egf_coeffs(order: usize, egf: &[Rational]) -> Self {
        let coeffs = (0..=order)
            .map(|n| match egf.get(n) {
                Some(c) => c
                    .checked_div(&factorial(n))
                    .expect("factorial is never zero"),
                None => Rational::zero(),
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Plain coefficient of t^n.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    /// Coefficient of t^n/n!, i.e. `n! * coeff(n)`.
    pub fn egf_coeff(&self, n: usize) -> Rational {
        factorial(n) * &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check_order(&self, rhs: &Self) {
        assert_eq!(
            self.order(),
            rhs.order(),
            "series orders must match exactly"
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.check_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_order(rhs);
        let order = self.order();
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = TruncatedSeries::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `exp(f)` for a series with zero constant term, via the ODE
    /// recurrence `n g_n = sum_{j=1}^{n} j f_j g_{n-j}` from g' = f' g.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Unsupported(
                "exp of a series with nonzero constant term".into(),
            ));
        }
        let order = self.order();
        let mut g = vec![Rational::one()];
        for n in 1..=order {
            let mut acc = Rational::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc += &(Rational::from(j) * &self.coeffs[j] * &g[n - j]);
            }
            g.push(
                acc.checked_div(&Rational::from(n))
                    .expect("n is positive"),
            );
        }
        Ok(TruncatedSeries { coeffs: g })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn t(order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(order, vec![Rational::zero(), Rational::one()])
    }

    #[test]
    fn exp_of_t_has_reciprocal_factorial_coefficients() {
        let e = t(8).exp().unwrap();
        for n in 0..=8 {
            assert_eq!(
                e.coeff(n),
                &Rational::one()
                    .checked_div(&crate::rational::factorial(n))
                    .unwrap()
            );
            assert_eq!(e.egf_coeff(n), Rational::one());
        }
    }

    #[test]
    fn exp_requires_zero_constant_term() {
        assert!(TruncatedSeries::one(4).exp().is_err());
    }

    #[test]
    fn exp_turns_sums_into_products() {
        let f = TruncatedSeries::from_coeffs(
            10,
            vec![r("0"), r("1/2"), r("-2"), r("1/3")],
        );
        let g = TruncatedSeries::from_coeffs(10, vec![r("0"), r("3"), r("0"), r("-1/5"), r("7")]);
        let lhs = f.add(&g).exp().unwrap();
        let rhs = f.exp().unwrap().mul(&g.exp().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_and_its_negation_cancel() {
        let f = TruncatedSeries::from_coeffs(9, vec![r("0"), r("2"), r("0"), r("5/7")]);
        let prod = f.exp().unwrap().mul(&f.scale(&r("-1")).exp().unwrap());
        assert_eq!(prod, TruncatedSeries::one(9));
    }

    #[test]
    fn geometric_series_inverts_one_minus_t() {
        // (1 + t + t^2 + ...) * (1 - t) = 1 up to truncation
        let order = 12;
        let geo = TruncatedSeries::from_coeffs(order, vec![Rational::one(); order + 1]);
        let one_minus_t = TruncatedSeries::from_coeffs(order, vec![r("1"), r("-1")]);
        assert_eq!(geo.mul(&one_minus_t), TruncatedSeries::one(order));
    }

    #[test]
    fn egf_round_trip() {
        let egf = vec![r("1"), r("1"), r("3"), r("13")];
        let s = TruncatedSeries::from_egf_coeffs(3, &egf);
        for (n, want) in egf.iter().enumerate() {
            assert_eq!(&s.egf_coeff(n), want);
        }
    }

    #[test]
    #[should_panic(expected = "orders must match")]
    fn mixed_order_arithmetic_panics() {
        let _ = TruncatedSeries::one(3).add(&TruncatedSeries::one(4));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-9i64..9, 1i64..5).prop_map(|(n, d)| Rational::new(n, d).unwrap())
        }

        fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
            proptest::collection::vec(arb_rational(), 0..=order + 1)
                .prop_map(move |v| TruncatedSeries::from_coeffs(order, v))
        }

        proptest! {
            #[test]
            fn ring_laws(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert_eq!(a.sub(&a), TruncatedSeries::zero(6));
            }

            #[test]
            fn pow_is_repeated_mul(a in arb_series(5), k in 0usize..5) {
                let mut expect = TruncatedSeries::one(5);
                for _ in 0..k {
                    expect = expect.mul(&a);
                }
                prop_assert_eq!(a.pow(k), expect);
            }
        }
    }
}
