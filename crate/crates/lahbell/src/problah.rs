//! Lah numbers and Lah-Bell polynomials weighted by a random variable Y.
//!
//! For a moment profile holding `E[<Y>_n]`, the weighted Lah number
//! `L_Y(n, k)` is the partial Bell polynomial of those moments, and
//! `B_n(x) = sum_k L_Y(n, k) x^k` is the weighted Lah-Bell polynomial.
//! With Y = 1 these are the classical objects.
//!
//! [`ProbLahContext`] caches the full triangle eagerly and is the primary
//! computation path. The alternate routes ([`ProbLahContext::lah_alternating`],
//! [`lah_by_difference`], [`ProbLahContext::bell_poly_from_recurrence`],
//! [`ProbLahContext::dobinski`]) deliberately share nothing with the cache
//! beyond the moment profile itself; the identity suite derives its power
//! from comparing them.

use crate::classical::{partial_bell_triangle, TriangleTable};
use crate::dist::{binomial_convolve, point_mass_at_zero, DistributionSpec, MomentProfile};
use crate::error::{Error, Result};
use crate::poly::{rising_factorial_poly, UniPoly};
use crate::rational::{binom_u, factorial, Rational};

/// Enumerating the m-fold difference operator is exponential in m; above
/// this order the route refuses to run.
pub const MAX_DIFFERENCE_ORDER: usize = 6;

/// Truncation cap for the Dobinski-style series.
pub const DOBINSKI_MAX_TERMS: usize = 1000;

/// A moment profile together with the derived triangle of `L_Y(n, k)` and
/// the polynomials `B_0 ... B_{max_order}`, built eagerly because identity
/// checks revisit the same entries thousands of times. Immutable in normal
/// use; the only mutation is the fault-injection test hook.
#[derive(Clone, Debug)]
pub struct ProbLahContext {
    profile: MomentProfile,
    lah_table: TriangleTable,
    polys: Vec<UniPoly>,
}

/// Result of a truncated Dobinski-style series evaluation: the float partial
/// sum and the last term index K included (the sum ran over k = 0..=K).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DobinskiEval {
    pub value: f64,
    pub terms_used: usize,
}

impl ProbLahContext {
    pub fn new(profile: MomentProfile) -> Self {
        let table = partial_bell_triangle(profile.max_order(), profile.bell_args())
            .expect("profile supplies exactly max_order arguments");
        let polys = (0..=profile.max_order())
            .map(|n| UniPoly::from_coeffs(table.row(n).to_vec()))
            .collect();
        ProbLahContext {
            profile,
            lah_table: table,
            polys,
        }
    }

    /// Builds the profile to `max_order` and the context in one step.
    pub fn for_spec(spec: &DistributionSpec, max_order: usize) -> Result<Self> {
        Ok(ProbLahContext::new(MomentProfile::build(spec, max_order)?))
    }

    pub fn profile(&self) -> &MomentProfile {
        &self.profile
    }

    pub fn max_order(&self) -> usize {
        self.profile.max_order()
    }

    pub fn table(&self) -> &TriangleTable {
        &self.lah_table
    }

    fn ensure_order(&self, n: usize) -> Result<()> {
        if n > self.max_order() {
            return Err(Error::MomentOrder {
                requested: n,
                available: self.max_order(),
            });
        }
        Ok(())
    }

    /// `L_Y(n, k)` from the cached triangle (zero for k > n).
    pub fn lah(&self, n: usize, k: usize) -> Result<Rational> {
        self.ensure_order(n)?;
        Ok(self.lah_table.value(n, k))
    }

    /// `L_Y(n, k)` recomputed through the alternating sum
    /// `(1/k!) sum_l C(k,l) (-1)^{k-l} E[<S_l>_n]` over moments of iid
    /// sums. Shares only the moment profile with [`ProbLahContext::lah`].
    pub fn lah_alternating(&self, n: usize, k: usize) -> Result<Rational> {
        self.ensure_order(n)?;
        let mut sum_moments = point_mass_at_zero(self.max_order());
        let mut acc = Rational::zero();
        for l in 0..=k {
            if l > 0 {
                sum_moments = binomial_convolve(&sum_moments, self.profile.moments());
            }
            if sum_moments[n].is_zero() {
                continue;
            }
            let term = binom_u(k, l) * &sum_moments[n];
            if (k - l).is_multiple_of(2) {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc.checked_div(&factorial(k))
    }

    /// `B_n(x) = sum_k L_Y(n, k) x^k` from the cache.
    pub fn bell_poly(&self, n: usize) -> Result<&UniPoly> {
        self.ensure_order(n)?;
        Ok(&self.polys[n])
    }

    /// `B_{n+1}(x)` rebuilt from scratch by the moment recurrence
    /// `B_{m+1}(x) = x sum_k C(m,k) E[<Y>_{k+1}] B_{m-k}(x)`, touching no
    /// cached values.
    pub fn bell_poly_from_recurrence(&self, n: usize) -> Result<UniPoly> {
        self.ensure_order(n + 1)?;
        let moments = self.profile.moments();
        let mut built = vec![UniPoly::one()];
        for m in 0..=n {
            let mut sum = UniPoly::zero();
            for k in 0..=m {
                let weight = binom_u(m, k) * &moments[k + 1];
                if weight.is_zero() {
                    continue;
                }
                sum = &sum + &built[m - k].scale(&weight);
            }
            built.push(&UniPoly::x() * &sum);
        }
        Ok(built.pop().expect("n+2 polynomials were built"))
    }

    /// Truncated Dobinski-style series `e^{-x} sum_k x^k/k! E[<S_k>_n]`,
    /// rounded to f64 for reporting. See [`ProbLahContext::dobinski_rational`]
    /// for the underlying value and its error terms.
    pub fn dobinski(&self, n: usize, x: &Rational, abs_tol: f64) -> Result<DobinskiEval> {
        let (sum, terms_used) = self.dobinski_rational(n, x, abs_tol)?;
        Ok(DobinskiEval {
            value: sum.to_f64(),
            terms_used,
        })
    }

    /// The truncated series `e^{-x} sum_{k=0}^{K} x^k/k! E[<S_k>_n]` as an
    /// exact rational, plus K. Every term is exact except that `e^{-x}` is
    /// replaced by a rational Taylor partial sum with error below 1e-40,
    /// orders of magnitude under any tolerance in use; this keeps the
    /// comparison against exact polynomial values meaningful even where the
    /// values are too large for 1e-9 to be resolvable in f64.
    ///
    /// Truncation stops once three consecutive terms fall below `abs_tol`
    /// in absolute value (the terms decay factorially in k once k passes x,
    /// since `E[<S_k>_n]` grows only polynomially in k for fixed n).
    ///
    /// `x` must be nonnegative: convergence for negative x is unanalyzed,
    /// so it is rejected rather than guessed at.
    pub fn dobinski_rational(
        &self,
        n: usize,
        x: &Rational,
        abs_tol: f64,
    ) -> Result<(Rational, usize)> {
        self.ensure_order(n)?;
        if x.is_negative() {
            return Err(Error::Unsupported(
                "series evaluation requires x >= 0".into(),
            ));
        }
        if !abs_tol.is_finite() || abs_tol <= 0.0 {
            return Err(Error::Unsupported(
                "tolerance must be positive and finite".into(),
            ));
        }
        let tol = Rational::from_f64(abs_tol).expect("finite f64 converts exactly");
        let mut weight = exp_neg_approx(x);
        let mut sum_moments = point_mass_at_zero(self.max_order());
        let mut sum = Rational::zero();
        let mut quiet_terms = 0;
        for k in 0..=DOBINSKI_MAX_TERMS {
            if k > 0 {
                sum_moments = binomial_convolve(&sum_moments, self.profile.moments());
                weight = weight * x / Rational::from(k);
            }
            let term = &weight * &sum_moments[n];
            sum += &term;
            if term.abs() < tol {
                quiet_terms += 1;
                if quiet_terms == 3 {
                    return Ok((sum, k));
                }
            } else {
                quiet_terms = 0;
            }
        }
        Err(Error::NoConvergence {
            max_terms: DOBINSKI_MAX_TERMS,
        })
    }

    /// The k-th derivative of `B_n(x)` assembled from the table as
    /// `k! sum_j C(n,j) B_j(x) L_Y(n-j, k)` instead of by differentiation.
    /// k > n yields the zero polynomial.
    pub fn derivative_from_table(&self, n: usize, k: usize) -> Result<UniPoly> {
        self.ensure_order(n)?;
        if k > n {
            return Ok(UniPoly::zero());
        }
        let mut acc = UniPoly::zero();
        for j in 0..=n - k {
            let weight = binom_u(n, j) * self.lah_table.value(n - j, k);
            if weight.is_zero() {
                continue;
            }
            acc = &acc + &self.polys[j].scale(&weight);
        }
        Ok(acc.scale(&factorial(k)))
    }

    /// Fault-injection hook for tests and the CLI corruption flag: adds 1 to
    /// `L_Y(n, k)` in both the triangle and the cached polynomial, keeping
    /// the two caches mutually consistent so only cross-route comparisons
    /// can notice.
    ///
    /// # Panics
    /// If (n, k) is outside the stored triangle.
    pub fn corrupt_entry(&mut self, n: usize, k: usize) {
        assert!(k <= n && n <= self.max_order(), "entry outside triangle");
        self.lah_table.perturb(n, k);
        self.polys[n] = &self.polys[n] + &UniPoly::monomial(Rational::one(), k);
    }
}

/// `L_Y(n, m)` through the m-fold forward difference
/// `(1/m!) E[D_{Y_1,...,Y_m} <x>_n at x=0]`, enumerating all m-tuples from
/// the finite support of Y. Only specs with finite support qualify, and m
/// is capped at [`MAX_DIFFERENCE_ORDER`] because the tuple count is
/// |support|^m.
pub fn lah_by_difference(spec: &DistributionSpec, n: usize, m: usize) -> Result<Rational> {
    spec.validate()?;
    if m > MAX_DIFFERENCE_ORDER {
        return Err(Error::Unsupported(format!(
            "difference order {m} exceeds the enumeration cap {MAX_DIFFERENCE_ORDER}"
        )));
    }
    let support = spec.as_finite_support().ok_or_else(|| {
        Error::Unsupported(format!("difference route needs finite support, got {spec}"))
    })?;
    let mut acc = Rational::zero();
    difference_terms(
        &support,
        m,
        &rising_factorial_poly(n),
        &Rational::one(),
        &mut acc,
    );
    acc.checked_div(&factorial(m))
}

/// Rational approximation of e^{-x} by the alternating Taylor partial sum,
/// truncated once j >= x and the term drops below 10^-40. Past j = x the
/// term magnitudes decrease, so the truncation error is bounded by the
/// first omitted term and thus by 10^-40.
fn exp_neg_approx(x: &Rational) -> Rational {
    let threshold = Rational::from(10u64)
        .pow(-40)
        .expect("ten is invertible");
    let mut term = Rational::one();
    let mut sum = Rational::one();
    let mut j = 0u64;
    loop {
        j += 1;
        let jr = Rational::from(j);
        term = -(term * x) / &jr;
        sum += &term;
        if jr >= *x && term.abs() < threshold {
            return sum;
        }
    }
}

/// Recursively applies one difference per level: at each node the running
/// polynomial q becomes q(x + y) - q(x) for every support atom y, weighted
/// by that atom's probability. Leaves contribute weight * q(0).
fn difference_terms(
    support: &[(Rational, Rational)],
    depth_left: usize,
    q: &UniPoly,
    weight: &Rational,
    acc: &mut Rational,
) {
    if depth_left == 0 {
        *acc += &(weight * &q.coeff(0));
        return;
    }
    for (y, prob) in support {
        if prob.is_zero() {
            continue;
        }
        let diff = &q.shift(y) - q;
        difference_terms(support, depth_left - 1, &diff, &(weight * prob), acc);
    }
}
