//! Classical combinatorial triangles and polynomial families: Lah numbers,
//! Stirling numbers of the second kind, Bell and Lah-Bell polynomials, and
//! partial/complete Bell polynomials in given arguments.
//!
//! Partial Bell polynomials have two routes on purpose. [`partial_bell`]
//! uses the convolution recurrence
//! `B(n,k) = sum_i C(n-1, i-1) x_i B(n-i, k-1)` and is the fast path;
//! [`partial_bell_oracle`] enumerates integer partitions directly and exists
//! solely as an independent cross-check of the recurrence.

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::rational::{binom_u, factorial, Rational};

/// Dense lower-triangular table of exact values, rows indexed by n and
/// columns by k with 0 <= k <= n <= max_n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriangleTable {
    rows: Vec<Vec<Rational>>,
}

impl TriangleTable {
    /// Fills rows 0..=max_n from an entry function.
    pub fn from_fn(max_n: usize, mut entry: impl FnMut(usize, usize) -> Rational) -> Self {
        let rows = (0..=max_n)
            .map(|n| (0..=n).map(|k| entry(n, k)).collect())
            .collect();
        TriangleTable { rows }
    }

    pub(crate) fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(n, row)| row.len() == n + 1));
        TriangleTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `None` outside the stored triangle.
    pub fn get(&self, n: usize, k: usize) -> Option<&Rational> {
        self.rows.get(n).and_then(|row| row.get(k))
    }

    /// Entry as a value, extending by zero for k > n.
    ///
    /// # Panics
    /// If `n > max_n`; rows are never extrapolated.
    pub fn value(&self, n: usize, k: usize) -> Rational {
        self.rows[n].get(k).cloned().unwrap_or_default()
    }

    /// Row n: the k = 0..=n entries.
    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    /// Test hook used to prove checks can fail: adds 1 to one entry.
    pub(crate) fn perturb(&mut self, n: usize, k: usize) {
        let cell = &mut self.rows[n][k];
        *cell += Rational::one();
    }
}

/// Unsigned Lah number `L(n, k) = n!/k! C(n-1, k-1)`, with `L(0,0) = 1`,
/// `L(n,0) = 0` for n >= 1, and 0 for k > n.
pub fn lah(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    if n == 0 {
        return Rational::one();
    }
    if k == 0 {
        return Rational::zero();
    }
    let ratio = factorial(n)
        .checked_div(&factorial(k))
        .expect("factorial is never zero");
    ratio * binom_u(n - 1, k - 1)
}

/// Stirling number of the second kind `S(n, k)`; 0 for k > n and for
/// (n >= 1, k = 0).
pub fn stirling2(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    stirling2_triangle(n).value(n, k)
}

/// Bell polynomial `phi_n(x) = sum_k S(n,k) x^k`.
pub fn bell_poly(n: usize) -> UniPoly {
    UniPoly::from_coeffs(stirling2_triangle(n).row(n).to_vec())
}

/// Lah-Bell polynomial `B_n(x) = sum_k L(n,k) x^k`.
pub fn lah_bell_poly(n: usize) -> UniPoly {
    UniPoly::from_coeffs((0..=n).map(|k| lah(n, k)).collect())
}

/// The triangle of `lah(n, k)` for n <= max_n.
pub fn lah_triangle(max_n: usize) -> TriangleTable {
    TriangleTable::from_fn(max_n, lah)
}

/// The triangle of `stirling2(n, k)` for n <= max_n, by the recurrence
/// `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2_triangle(max_n: usize) -> TriangleTable {
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                if k == 0 {
                    return Rational::zero();
                }
                let mut v = prev[k - 1].clone();
                if k < n {
                    v += &(&prev[k] * &Rational::from(k));
                }
                v
            })
            .collect();
        rows.push(row);
    }
    TriangleTable::from_rows(rows)
}

fn require_args(what: &'static str, needed: usize, got: usize) -> Result<()> {
    if got < needed {
        return Err(Error::NotEnoughValues { what, needed, got });
    }
    Ok(())
}

/// Number of arguments `B(n,k)` actually depends on: x_1 ... x_{n-k+1},
/// none at all in the k = 0 column.
fn partial_bell_arity(n: usize, k: usize) -> usize {
    if k == 0 || k > n {
        0
    } else {
        n - k + 1
    }
}

/// Partial Bell polynomial `B(n, k)` evaluated at `xs = (x_1, x_2, ...)`,
/// computed by the convolution recurrence. Needs `xs` to supply
/// x_1 ... x_{n-k+1}; k > n yields 0 (the generating function
/// `(sum_j x_j t^j/j!)^k / k!` has no t^n term below t^k).
pub fn partial_bell(n: usize, k: usize, xs: &[Rational]) -> Result<Rational> {
    require_args("partial Bell arguments", partial_bell_arity(n, k), xs.len())?;
    if k > n {
        return Ok(Rational::zero());
    }
    if k == 0 {
        return Ok(if n == 0 {
            Rational::one()
        } else {
            Rational::zero()
        });
    }
    // Band of the triangle reachable from (n, k): entries B(j+d, j) with
    // j <= k and d <= n-k, filled one j-row at a time.
    let width = n - k;
    let mut prev = vec![Rational::zero(); width + 1];
    prev[0] = Rational::one();
    for j in 1..=k {
        let mut cur = vec![Rational::zero(); width + 1];
        for d in 0..=width {
            let m = j + d;
            let mut acc = Rational::zero();
            for i in 1..=d + 1 {
                let sub = &prev[d + 1 - i];
                if sub.is_zero() {
                    continue;
                }
                acc += &(binom_u(m - 1, i - 1) * &xs[i - 1] * sub);
            }
            cur[d] = acc;
        }
        prev = cur;
    }
    Ok(prev[width].clone())
}

/// Same contract as [`partial_bell`], computed by brute-force enumeration of
/// all part-multiplicity vectors (k_1, ..., k_{n-k+1}) with
/// `sum k_i = k` and `sum i k_i = n`; each contributes
/// `n! / (prod k_i!) prod (x_i / i!)^{k_i}`.
pub fn partial_bell_oracle(n: usize, k: usize, xs: &[Rational]) -> Result<Rational> {
    require_args("partial Bell arguments", partial_bell_arity(n, k), xs.len())?;
    if k > n {
        return Ok(Rational::zero());
    }
    let parts = partial_bell_arity(n, k);
    let factorials: Vec<Rational> = (0..=parts).map(factorial).collect();
    let mut total = Rational::zero();
    enumerate_partitions(
        1,
        parts,
        k,
        n,
        &Rational::one(),
        xs,
        &factorials,
        &mut total,
    );
    Ok(total * factorial(n))
}

/// Depth-first choice of the multiplicity of part size `i`, carrying the
/// accumulated factor `prod (x_j/j!)^{k_j} / k_j!` for parts already fixed.
#[allow(clippy::too_many_arguments)]
fn enumerate_partitions(
    i: usize,
    parts: usize,
    count_left: usize,
    weight_left: usize,
    factor: &Rational,
    xs: &[Rational],
    factorials: &[Rational],
    total: &mut Rational,
) {
    if i > parts {
        if count_left == 0 && weight_left == 0 {
            *total += factor;
        }
        return;
    }
    let mut f = factor.clone();
    let max_mult = count_left.min(weight_left / i);
    for c in 0..=max_mult {
        if c > 0 {
            // Extends (x_i/i!)^(c-1)/(c-1)! to exponent c.
            let step = xs[i - 1]
                .checked_div(&(&factorials[i] * &Rational::from(c)))
                .expect("i! and c are positive");
            f = &f * &step;
        }
        enumerate_partitions(
            i + 1,
            parts,
            count_left - c,
            weight_left - i * c,
            &f,
            xs,
            factorials,
            total,
        );
    }
}

/// Complete Bell polynomial `B_n(x_1..x_n) = sum_{k=0}^n B(n,k)`.
pub fn complete_bell(n: usize, xs: &[Rational]) -> Result<Rational> {
    require_args("complete Bell arguments", n, xs.len())?;
    let mut acc = Rational::zero();
    for k in 0..=n {
        acc += partial_bell(n, k, xs)?;
    }
    Ok(acc)
}

/// Full triangle of `partial_bell(n, k, xs)` for n <= max_n; `xs` must
/// supply x_1 ... x_{max_n}.
pub fn partial_bell_triangle(max_n: usize, xs: &[Rational]) -> Result<TriangleTable> {
    require_args("partial Bell arguments", max_n, xs.len())?;
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for n in 1..=max_n {
        let mut row = vec![Rational::zero(); n + 1];
        for (k, cell) in row.iter_mut().enumerate().skip(1) {
            let mut acc = Rational::zero();
            for i in 1..=n - k + 1 {
                let sub = &rows[n - i][k - 1];
                if sub.is_zero() {
                    continue;
                }
                acc += &(binom_u(n - 1, i - 1) * &xs[i - 1] * sub);
            }
            *cell = acc;
        }
        rows.push(row);
    }
    Ok(TriangleTable::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{falling_factorial_poly, rising_factorial_poly, binom_poly};
    use crate::rational::binomial;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rationals(strs: &[&str]) -> Vec<Rational> {
        strs.iter().map(|s| r(s)).collect()
    }

    /// x_i = i!, the argument vector that specializes partial Bell
    /// polynomials to Lah numbers.
    fn factorial_args(len: usize) -> Vec<Rational> {
        (1..=len).map(factorial).collect()
    }

    #[test]
    fn lah_values() {
        assert_eq!(lah(3, 2), r("6"));
        assert_eq!(lah(4, 2), r("36"));
        assert_eq!(lah(0, 0), r("1"));
        assert_eq!(lah(5, 0), r("0"));
        assert_eq!(lah(2, 5), r("0"));
        for n in 0..10 {
            assert_eq!(lah(n, n), r("1"));
        }
    }

    #[test]
    fn lah_triangle_first_rows() {
        let t = lah_triangle(4);
        assert_eq!(t.row(0), rationals(&["1"]));
        assert_eq!(t.row(1), rationals(&["0", "1"]));
        assert_eq!(t.row(2), rationals(&["0", "2", "1"]));
        assert_eq!(t.row(3), rationals(&["0", "6", "6", "1"]));
        assert_eq!(t.row(4), rationals(&["0", "24", "36", "12", "1"]));
        assert_eq!(t.get(5, 0), None);
        assert_eq!(t.get(3, 4), None);
        assert_eq!(t.value(3, 4), r("0"));
    }

    #[test]
    fn stirling2_values() {
        assert_eq!(stirling2(4, 2), r("7"));
        assert_eq!(stirling2(0, 0), r("1"));
        assert_eq!(stirling2(3, 0), r("0"));
        assert_eq!(stirling2(2, 6), r("0"));
        for n in 1..10 {
            assert_eq!(stirling2(n, n), r("1"));
            assert_eq!(stirling2(n, 1), r("1"));
        }
    }

    #[test]
    fn bell_poly_small_cases() {
        assert_eq!(bell_poly(0), UniPoly::one());
        assert_eq!(bell_poly(2).coeffs(), rationals(&["0", "1", "1"]));
        assert_eq!(bell_poly(3).coeffs(), rationals(&["0", "1", "3", "1"]));
    }

    #[test]
    fn bell_numbers_are_row_sums() {
        let bell: Vec<Rational> = rationals(&["1", "1", "2", "5", "15", "52", "203"]);
        for (n, expected) in bell.iter().enumerate() {
            assert_eq!(&bell_poly(n).eval(&r("1")), expected);
        }
    }

    #[test]
    fn lah_bell_poly_small_cases() {
        assert_eq!(lah_bell_poly(0), UniPoly::one());
        assert_eq!(lah_bell_poly(2).coeffs(), rationals(&["0", "2", "1"]));
        assert_eq!(lah_bell_poly(3).coeffs(), rationals(&["0", "6", "6", "1"]));
    }

    #[test]
    fn lah_bell_numbers_are_row_sums() {
        // A000262: partitions of an n-set into ordered blocks.
        let expected = rationals(&["1", "1", "3", "13", "73", "501", "4051"]);
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(&lah_bell_poly(n).eval(&r("1")), want);
        }
    }

    #[test]
    fn partial_bell_small_cases() {
        assert_eq!(partial_bell(3, 2, &rationals(&["1", "1"])).unwrap(), r("3"));
        assert_eq!(
            partial_bell(4, 2, &rationals(&["1", "1", "1"])).unwrap(),
            r("7")
        );
        assert_eq!(partial_bell(0, 0, &[]).unwrap(), r("1"));
        assert_eq!(partial_bell(3, 0, &[]).unwrap(), r("0"));
        assert_eq!(partial_bell(2, 3, &[]).unwrap(), r("0"));
        for n in 1..8usize {
            // only partition into n singletons: x_1^n
            assert_eq!(
                partial_bell(n, n, &rationals(&["2"])).unwrap(),
                r("2").pow(n as i32).unwrap()
            );
        }
    }

    #[test]
    fn partial_bell_rejects_short_argument_lists() {
        let err = partial_bell(4, 2, &rationals(&["1", "1"])).unwrap_err();
        assert_eq!(
            err,
            Error::NotEnoughValues {
                what: "partial Bell arguments",
                needed: 3,
                got: 2
            }
        );
        assert!(partial_bell_oracle(4, 2, &rationals(&["1"])).is_err());
        assert!(complete_bell(3, &rationals(&["1", "1"])).is_err());
        assert!(partial_bell_triangle(3, &rationals(&["1", "1"])).is_err());
    }

    #[test]
    fn partial_bell_specializes_to_lah_at_factorial_arguments() {
        for n in 0..=12usize {
            for k in 0..=n {
                let xs = factorial_args(partial_bell_arity(n, k));
                assert_eq!(partial_bell(n, k, &xs).unwrap(), lah(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(
            partial_bell_oracle(4, 2, &rationals(&["1", "1", "1"])).unwrap(),
            r("7")
        );
        assert_eq!(partial_bell_oracle(0, 0, &[]).unwrap(), r("1"));
        assert_eq!(partial_bell_oracle(5, 5, &rationals(&["2"])).unwrap(), r("32"));
    }

    #[test]
    fn triangle_agrees_with_pointwise_partial_bell() {
        let xs: Vec<Rational> = (1..=8).map(|i| Rational::new(i, 3).unwrap()).collect();
        let t = partial_bell_triangle(8, &xs).unwrap();
        for n in 0..=8usize {
            for k in 0..=n {
                assert_eq!(t.value(n, k), partial_bell(n, k, &xs).unwrap());
            }
        }
    }

    #[test]
    fn complete_bell_small_cases() {
        assert_eq!(complete_bell(0, &[]).unwrap(), r("1"));
        assert_eq!(complete_bell(2, &rationals(&["1", "1"])).unwrap(), r("2"));
        assert_eq!(complete_bell(3, &rationals(&["1", "1", "1"])).unwrap(), r("5"));
    }

    #[test]
    fn rising_factorial_expands_over_falling_factorials_with_lah_weights() {
        for n in 0..=12usize {
            let mut sum = UniPoly::zero();
            for k in 0..=n {
                sum = &sum + &falling_factorial_poly(k).scale(&lah(n, k));
            }
            assert_eq!(sum, rising_factorial_poly(n), "n={n}");
        }
    }

    #[test]
    fn monomials_expand_over_falling_factorials_with_stirling_weights() {
        for n in 0..=12usize {
            let mut sum = UniPoly::zero();
            for k in 0..=n {
                sum = &sum + &falling_factorial_poly(k).scale(&stirling2(n, k));
            }
            assert_eq!(sum, UniPoly::monomial(Rational::one(), n), "n={n}");
        }
    }

    #[test]
    fn binom_poly_matches_binomial_on_integers() {
        for k in 0..=12usize {
            let p = binom_poly(k);
            for m in 0..=12usize {
                assert_eq!(p.eval(&Rational::from(m)), binomial(m, k as isize));
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-12i64..12, 1i64..6).prop_map(|(n, d)| Rational::new(n, d).unwrap())
        }

        fn arb_args(len: usize) -> impl Strategy<Value = Vec<Rational>> {
            proptest::collection::vec(arb_rational(), len)
        }

        proptest! {
            #[test]
            fn recurrence_matches_enumeration(n in 0usize..9, xs in arb_args(9)) {
                for k in 0..=n {
                    prop_assert_eq!(
                        partial_bell(n, k, &xs).unwrap(),
                        partial_bell_oracle(n, k, &xs).unwrap()
                    );
                }
            }

            #[test]
            fn graded_homogeneity(n in 0usize..8, k in 0usize..8, xs in arb_args(8), c in arb_rational()) {
                prop_assume!(k <= n);
                // x_i -> c^i x_i multiplies every monomial by c^n
                let scaled: Vec<Rational> = xs
                    .iter()
                    .enumerate()
                    .map(|(i, x)| c.pow(i as i32 + 1).unwrap() * x)
                    .collect();
                prop_assert_eq!(
                    partial_bell(n, k, &scaled).unwrap(),
                    c.pow(n as i32).unwrap() * partial_bell(n, k, &xs).unwrap()
                );
            }

            #[test]
            fn degree_homogeneity(n in 0usize..8, k in 0usize..8, xs in arb_args(8), c in arb_rational()) {
                prop_assume!(k <= n);
                // x_i -> c x_i multiplies every monomial by c^k
                let scaled: Vec<Rational> = xs.iter().map(|x| &c * x).collect();
                prop_assert_eq!(
                    partial_bell(n, k, &scaled).unwrap(),
                    c.pow(k as i32).unwrap() * partial_bell(n, k, &xs).unwrap()
                );
            }
        }
    }
}
