//! Mechanical verification of the identity suite.
//!
//! Every check recomputes both sides of one identity through structurally
//! independent routes and compares exact rationals (one check compares a
//! truncated series against an exact value under an explicit tolerance).
//! A report carries pass/fail/not-applicable plus, on failure, the first
//! mismatching tuple with both computed values, so a red result is
//! reproducible by hand.
//!
//! Checks are labeled `T2.1` through `T2.14`. Each label is documented on
//! its [`TheoremId`] variant with the identity it verifies.

use serde::{Deserialize, Serialize};

use crate::classical::{self, partial_bell, stirling2_triangle};
use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::poly::{binom_poly, UniPoly};
use crate::problah::{lah_by_difference, ProbLahContext};
use crate::rational::{binom_u, factorial, Rational};
use crate::series::TruncatedSeries;

/// Largest difference order exercised by the `T2.2` check. The operator
/// route enumerates `|support|^m` leaves, so the check stays below the
/// general cap of [`crate::problah::MAX_DIFFERENCE_ORDER`].
const DIFFERENCE_CHECK_ORDER: usize = 4;

/// Series truncation tolerance used inside the `T2.4` check.
const DOBINSKI_TERM_TOL: f64 = 1e-12;

/// Largest n exercised by the `T2.4` check; series terms grow like
/// `(2k)^n` before the factorial weight wins, so higher n only stretches
/// the same comparison.
const DOBINSKI_CHECK_N: usize = 8;

/// Labels for the fourteen identity checks.
///
/// Variants are in suite order; [`TheoremId::ALL`] iterates them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// Alternating-sum route: `k! L_Y(n,k) = sum_l C(k,l) (-1)^{k-l} E[<S_l>_n]`.
    #[serde(rename = "T2.1")]
    T2_1,
    /// Difference-operator route: `m! L_Y(n,m) = E[Delta_{Y_1..Y_m} <x>_n | x=0]`.
    #[serde(rename = "T2.2")]
    T2_2,
    /// Exponential generating function: `sum_n B_n(x) t^n/n! = e^{x(E[M_Y(t)] - 1)}`.
    #[serde(rename = "T2.3")]
    T2_3,
    /// Dobinski-style series: `B_n(x) = e^{-x} sum_k x^k/k! E[<S_k>_n]`.
    #[serde(rename = "T2.4")]
    T2_4,
    /// Partial-Bell expansion: `B_n(x) = sum_k B_{n,k}(x E[<Y>_1], x E[<Y>_2], ...)`.
    #[serde(rename = "T2.5")]
    T2_5,
    /// Moment recurrence: `B_{n+1}(x) = x sum_k C(n,k) E[<Y>_{k+1}] B_{n-k}(x)`.
    #[serde(rename = "T2.6")]
    T2_6,
    /// Binomial convolution: `B_n(x+y) = sum_k C(n,k) B_k(x) B_{n-k}(y)`.
    #[serde(rename = "T2.7")]
    T2_7,
    /// Binomial-coefficient basis: `B_n(x) = sum_k C(x,k) k! B_{n,k}(B_1(1), ..., B_{n-k+1}(1))`.
    #[serde(rename = "T2.8")]
    T2_8,
    /// Shifted argument: `C(n,k) sum_j k^j x^j L_Y(n-k,j) = B_{n,k}-composition of (i B_{i-1}(x))`.
    #[serde(rename = "T2.9")]
    T2_9,
    /// Composition through Stirling numbers: `B_{n,k}(B_1(x), ..., B_{n-k+1}(x)) = sum_j S(j,k) L_Y(n,j) x^j`.
    #[serde(rename = "T2.10")]
    T2_10,
    /// Derivatives: `d^k/dx^k B_n(x) = k! sum_j C(n,j) B_j(x) L_Y(n-j,k)`.
    #[serde(rename = "T2.11")]
    T2_11,
    /// Poisson sum moments: `E[<S_k>_n] = B_n^L(alpha k)` with `B_n^L` the
    /// classical Lah-Bell polynomial.
    #[serde(rename = "T2.12")]
    T2_12,
    /// Poisson reduction to classical Bell polynomials:
    /// `B_n(x) = sum_k phi_k(x) alpha^k L(n,k)`.
    #[serde(rename = "T2.13")]
    T2_13,
    /// Bernoulli closed form: `L_Y(n,k) = p^k L(n,k)`, hence `B_n(x) = B_n^L(px)`.
    #[serde(rename = "T2.14")]
    T2_14,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::T2_3,
        TheoremId::T2_4,
        TheoremId::T2_5,
        TheoremId::T2_6,
        TheoremId::T2_7,
        TheoremId::T2_8,
        TheoremId::T2_9,
        TheoremId::T2_10,
        TheoremId::T2_11,
        TheoremId::T2_12,
        TheoremId::T2_13,
        TheoremId::T2_14,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2.1",
            TheoremId::T2_2 => "T2.2",
            TheoremId::T2_3 => "T2.3",
            TheoremId::T2_4 => "T2.4",
            TheoremId::T2_5 => "T2.5",
            TheoremId::T2_6 => "T2.6",
            TheoremId::T2_7 => "T2.7",
            TheoremId::T2_8 => "T2.8",
            TheoremId::T2_9 => "T2.9",
            TheoremId::T2_10 => "T2.10",
            TheoremId::T2_11 => "T2.11",
            TheoremId::T2_12 => "T2.12",
            TheoremId::T2_13 => "T2.13",
            TheoremId::T2_14 => "T2.14",
        }
    }

    /// Whether the identity's hypotheses hold for `spec`. `T2.2` needs a
    /// finite support to enumerate, `T2.12`/`T2.13` are Poisson statements,
    /// and `T2.14` is a Bernoulli statement (a constant 0 or 1 is the
    /// degenerate Bernoulli law, so it qualifies).
    pub fn applies_to(self, spec: &DistributionSpec) -> bool {
        match self {
            TheoremId::T2_2 => spec.as_finite_support().is_some(),
            TheoremId::T2_12 | TheoremId::T2_13 => {
                matches!(spec, DistributionSpec::Poisson { .. })
            }
            TheoremId::T2_14 => bernoulli_probability(spec).is_some(),
            _ => true,
        }
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Success probability when `spec` is a Bernoulli law, including the
/// degenerate constants 0 and 1.
fn bernoulli_probability(spec: &DistributionSpec) -> Option<Rational> {
    match spec {
        DistributionSpec::Bernoulli { p } => Some(p.clone()),
        DistributionSpec::Constant { c } if c.is_zero() || c.is_one() => Some(c.clone()),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl std::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "not-applicable",
        })
    }
}

/// One side of a failed comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessValue {
    /// An exact rational.
    Exact { value: Rational },
    /// A full coefficient vector, constant term first.
    Poly { coeffs: Vec<Rational> },
    /// A float from the one tolerance-based check.
    Approx { value: f64 },
}

/// First mismatching tuple of a failed check: the indices and evaluation
/// points that select the comparison, plus both computed values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Evaluation points substituted into the identity, in the order the
    /// identity mentions them (empty when the comparison is coefficientwise).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub at: Vec<Rational>,
    pub lhs: WitnessValue,
    pub rhs: WitnessValue,
}

impl Witness {
    fn exact(n: usize, k: Option<usize>, at: Vec<Rational>, lhs: Rational, rhs: Rational) -> Self {
        Witness {
            n,
            k,
            at,
            lhs: WitnessValue::Exact { value: lhs },
            rhs: WitnessValue::Exact { value: rhs },
        }
    }

    fn poly(n: usize, k: Option<usize>, lhs: &UniPoly, rhs: &UniPoly) -> Self {
        Witness {
            n,
            k,
            at: Vec::new(),
            lhs: WitnessValue::Poly {
                coeffs: lhs.coeffs().to_vec(),
            },
            rhs: WitnessValue::Poly {
                coeffs: rhs.coeffs().to_vec(),
            },
        }
    }

    fn approx(n: usize, at: Vec<Rational>, lhs: f64, rhs: f64) -> Self {
        Witness {
            n,
            k: None,
            at,
            lhs: WitnessValue::Approx { value: lhs },
            rhs: WitnessValue::Approx { value: rhs },
        }
    }
}

/// Outcome of one identity check over one distribution.
///
/// Serializes deterministically: two runs over the same inputs produce
/// byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem_id: TheoremId,
    pub spec: DistributionSpec,
    pub n_max: usize,
    pub status: CheckStatus,
    /// At most one entry: the first mismatch in sweep order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

/// Runs one check for `spec`, sweeping all indices up to `n_max`.
pub fn check(theorem: TheoremId, spec: &DistributionSpec, n_max: usize) -> Result<CheckReport> {
    let ctx = ProbLahContext::for_spec(spec, n_max)?;
    check_with_context(theorem, &ctx, n_max)
}

/// Runs the whole suite for `spec` in label order.
pub fn check_all(spec: &DistributionSpec, n_max: usize) -> Result<Vec<CheckReport>> {
    let ctx = ProbLahContext::for_spec(spec, n_max)?;
    check_all_with_context(&ctx, n_max)
}

/// Runs one check against a prebuilt context (so callers can reuse the
/// moment profile, or verify a deliberately corrupted table).
pub fn check_with_context(
    theorem: TheoremId,
    ctx: &ProbLahContext,
    n_max: usize,
) -> Result<CheckReport> {
    if n_max > ctx.max_order() {
        return Err(Error::MomentOrder {
            requested: n_max,
            available: ctx.max_order(),
        });
    }
    let spec = ctx.profile().spec().clone();
    if !theorem.applies_to(&spec) {
        return Ok(CheckReport {
            theorem_id: theorem,
            spec,
            n_max,
            status: CheckStatus::NotApplicable,
            witnesses: Vec::new(),
        });
    }
    let witness = match theorem {
        TheoremId::T2_1 => alternating_sum_route(ctx, n_max)?,
        TheoremId::T2_2 => difference_route(ctx, n_max)?,
        TheoremId::T2_3 => generating_function_route(ctx, n_max)?,
        TheoremId::T2_4 => dobinski_route(ctx, n_max)?,
        TheoremId::T2_5 => partial_bell_expansion(ctx, n_max)?,
        TheoremId::T2_6 => moment_recurrence(ctx, n_max)?,
        TheoremId::T2_7 => binomial_convolution(ctx, n_max)?,
        TheoremId::T2_8 => binomial_basis_expansion(ctx, n_max)?,
        TheoremId::T2_9 => shifted_argument_composition(ctx, n_max)?,
        TheoremId::T2_10 => stirling_composition(ctx, n_max)?,
        TheoremId::T2_11 => derivative_formula(ctx, n_max)?,
        TheoremId::T2_12 => poisson_sum_moments(ctx, n_max)?,
        TheoremId::T2_13 => poisson_classical_reduction(ctx, n_max)?,
        TheoremId::T2_14 => bernoulli_closed_form(ctx, n_max)?,
    };
    let status = if witness.is_none() {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    Ok(CheckReport {
        theorem_id: theorem,
        spec,
        n_max,
        status,
        witnesses: witness.into_iter().collect(),
    })
}

/// Runs the whole suite against a prebuilt context in label order.
pub fn check_all_with_context(ctx: &ProbLahContext, n_max: usize) -> Result<Vec<CheckReport>> {
    TheoremId::ALL
        .iter()
        .map(|&t| check_with_context(t, ctx, n_max))
        .collect()
}

/// The first `count` positive integers as rationals; the standard grid for
/// evaluating polynomial identities (a degree-n identity that holds at n+1
/// distinct points holds identically).
fn grid(count: usize) -> Vec<Rational> {
    (1..=count).map(Rational::from).collect()
}

/// T2.1: triangle route vs alternating sum, all 0 <= k <= n <= n_max.
fn alternating_sum_route(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    for n in 0..=n_max {
        for k in 0..=n {
            let lhs = ctx.lah(n, k)?;
            let rhs = ctx.lah_alternating(n, k)?;
            if lhs != rhs {
                return Ok(Some(Witness::exact(n, Some(k), Vec::new(), lhs, rhs)));
            }
        }
    }
    Ok(None)
}

/// T2.2: triangle route vs the difference-operator enumeration, with the
/// order capped at [`DIFFERENCE_CHECK_ORDER`] to bound the leaf count.
fn difference_route(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let spec = ctx.profile().spec();
    for n in 0..=n_max {
        for m in 0..=n.min(DIFFERENCE_CHECK_ORDER) {
            let lhs = ctx.lah(n, m)?;
            let rhs = lah_by_difference(spec, n, m)?;
            if lhs != rhs {
                return Ok(Some(Witness::exact(n, Some(m), Vec::new(), lhs, rhs)));
            }
        }
    }
    Ok(None)
}

/// T2.3: coefficients of `exp(x0 (M(t) - 1))` truncated at order n_max vs
/// `B_n(x0)`, for x0 on the integer grid. `M(t) - 1` has egf coefficients
/// `E[<Y>_n]` for n >= 1 and zero constant term, so the exponential is a
/// polynomial identity in t per x0.
fn generating_function_route(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let mut egf = ctx.profile().moments().to_vec();
    egf[0] = Rational::zero();
    let base = TruncatedSeries::from_egf_coeffs(n_max, &egf);
    for x0 in grid(n_max + 1) {
        let series = base.scale(&x0).exp()?;
        for n in 0..=n_max {
            let lhs = series.egf_coeff(n);
            let rhs = ctx.bell_poly(n)?.eval(&x0);
            if lhs != rhs {
                return Ok(Some(Witness::exact(n, None, vec![x0], lhs, rhs)));
            }
        }
    }
    Ok(None)
}

/// T2.4: truncated series vs exact polynomial value at x in {0, 1, 2},
/// compared in exact arithmetic against a 1e-9 tolerance (the values grow
/// past the point where 1e-9 is resolvable in f64, so the comparison
/// cannot live in floats).
fn dobinski_route(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let tol = Rational::from(10u64).pow(-9).expect("ten is invertible");
    for n in 0..=n_max.min(DOBINSKI_CHECK_N) {
        for x in [0u64, 1, 2].map(Rational::from) {
            let (series, _) = ctx.dobinski_rational(n, &x, DOBINSKI_TERM_TOL)?;
            let exact = ctx.bell_poly(n)?.eval(&x);
            if (&series - &exact).abs() > tol {
                return Ok(Some(Witness::approx(
                    n,
                    vec![x],
                    series.to_f64(),
                    exact.to_f64(),
                )));
            }
        }
    }
    Ok(None)
}

/// T2.5: `B_n(x0) = sum_k B_{n,k}(x0 E[<Y>_1], x0 E[<Y>_2], ...)` on the
/// integer grid, recomputing each composition from scratch.
fn partial_bell_expansion(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let moments = ctx.profile().moments();
    for n in 0..=n_max {
        for x0 in grid(n + 1) {
            let lhs = ctx.bell_poly(n)?.eval(&x0);
            let mut rhs = Rational::zero();
            for k in 0..=n {
                let arity = if k == 0 { 0 } else { n - k + 1 };
                let args: Vec<Rational> = (1..=arity).map(|i| &x0 * &moments[i]).collect();
                rhs += &partial_bell(n, k, &args)?;
            }
            if lhs != rhs {
                return Ok(Some(Witness::exact(n, None, vec![x0], lhs, rhs)));
            }
        }
    }
    Ok(None)
}

/// T2.6: cached `B_n` vs the same polynomial rebuilt through the moment
/// recurrence, compared coefficientwise.
fn moment_recurrence(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    for n in 1..=n_max {
        let lhs = ctx.bell_poly(n)?;
        let rhs = ctx.bell_poly_from_recurrence(n - 1)?;
        if *lhs != rhs {
            return Ok(Some(Witness::poly(n, None, lhs, &rhs)));
        }
    }
    Ok(None)
}

/// T2.7: `B_n(x+y) = sum_k C(n,k) B_k(x) B_{n-k}(y)` over the integer grid
/// squared; evaluations of the cached polynomials are precomputed per point.
fn binomial_convolution(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let points = grid(n_max + 1);
    let mut evals: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
    for j in 0..=n_max {
        let poly = ctx.bell_poly(j)?;
        evals.push(points.iter().map(|v| poly.eval(v)).collect());
    }
    for n in 0..=n_max {
        for (xi, x) in points.iter().enumerate().take(n + 1) {
            for (yi, y) in points.iter().enumerate().take(n + 1) {
                let lhs = ctx.bell_poly(n)?.eval(&(x + y));
                let mut rhs = Rational::zero();
                for k in 0..=n {
                    rhs += &(binom_u(n, k) * &evals[k][xi] * &evals[n - k][yi]);
                }
                if lhs != rhs {
                    return Ok(Some(Witness::exact(
                        n,
                        None,
                        vec![x.clone(), y.clone()],
                        lhs,
                        rhs,
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// T2.8: `B_n(x) = sum_k C(x,k) k! B_{n,k}(B_1(1), ..., B_{n-k+1}(1))`,
/// compared coefficientwise in the binomial-coefficient basis expansion.
fn binomial_basis_expansion(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let one = Rational::one();
    for n in 0..=n_max {
        let mut at_one = Vec::with_capacity(n);
        for j in 1..=n {
            at_one.push(ctx.bell_poly(j)?.eval(&one));
        }
        let mut rhs = UniPoly::zero();
        for k in 0..=n {
            let arity = if k == 0 { 0 } else { n - k + 1 };
            let weight = factorial(k) * &partial_bell(n, k, &at_one[..arity])?;
            if weight.is_zero() {
                continue;
            }
            rhs = &rhs + &binom_poly(k).scale(&weight);
        }
        let lhs = ctx.bell_poly(n)?;
        if *lhs != rhs {
            return Ok(Some(Witness::poly(n, None, lhs, &rhs)));
        }
    }
    Ok(None)
}

/// T2.9: `C(n,k) sum_j (k x0)^j L_Y(n-k, j)` vs the composition
/// `B_{n,k}(1 B_0(x0), 2 B_1(x0), ..., (n-k+1) B_{n-k}(x0))`, with x0 on a
/// grid of width n-k+1 (both sides have degree n-k in x0).
fn shifted_argument_composition(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    for n in 0..=n_max {
        for k in 0..=n {
            let width = n - k;
            let kr = Rational::from(k);
            for x0 in grid(width + 1) {
                let mut lhs = Rational::zero();
                let mut kx_pow = Rational::one();
                for j in 0..=width {
                    if j > 0 {
                        kx_pow = kx_pow * &kr * &x0;
                    }
                    lhs += &(&kx_pow * &ctx.lah(width, j)?);
                }
                lhs = lhs * binom_u(n, k);
                let arity = if k == 0 { 0 } else { width + 1 };
                let mut args = Vec::with_capacity(arity);
                for i in 1..=arity {
                    args.push(Rational::from(i) * &ctx.bell_poly(i - 1)?.eval(&x0));
                }
                let rhs = partial_bell(n, k, &args)?;
                if lhs != rhs {
                    return Ok(Some(Witness::exact(n, Some(k), vec![x0], lhs, rhs)));
                }
            }
        }
    }
    Ok(None)
}

/// T2.10: `B_{n,k}(B_1(x0), ..., B_{n-k+1}(x0)) = sum_j S(j,k) L_Y(n,j) x0^j`
/// on the integer grid, with S the Stirling numbers of the second kind.
fn stirling_composition(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let s2 = stirling2_triangle(n_max);
    for n in 0..=n_max {
        for k in 0..=n {
            for x0 in grid(n + 1) {
                let arity = if k == 0 { 0 } else { n - k + 1 };
                let mut args = Vec::with_capacity(arity);
                for j in 1..=arity {
                    args.push(ctx.bell_poly(j)?.eval(&x0));
                }
                let lhs = partial_bell(n, k, &args)?;
                let mut rhs = Rational::zero();
                let mut x_pow = x0.pow(k as i32)?;
                for j in k..=n {
                    if j > k {
                        x_pow *= &x0;
                    }
                    rhs += &(s2.value(j, k) * &ctx.lah(n, j)? * &x_pow);
                }
                if lhs != rhs {
                    return Ok(Some(Witness::exact(n, Some(k), vec![x0], lhs, rhs)));
                }
            }
        }
    }
    Ok(None)
}

/// T2.11: the k-th derivative of the cached `B_n` vs the closed form
/// `k! sum_j C(n,j) B_j(x) L_Y(n-j,k)`, compared coefficientwise.
fn derivative_formula(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    for n in 0..=n_max {
        for k in 0..=n {
            let lhs = ctx.bell_poly(n)?.derivative_n(k);
            let rhs = ctx.derivative_from_table(n, k)?;
            if lhs != rhs {
                return Ok(Some(Witness::poly(n, Some(k), &lhs, &rhs)));
            }
        }
    }
    Ok(None)
}

/// T2.12: for Poisson(alpha), `E[<S_k>_n] = B_n^L(alpha k)` with `B_n^L`
/// the classical polynomial; the left side comes from moment convolution.
fn poisson_sum_moments(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let alpha = match ctx.profile().spec() {
        DistributionSpec::Poisson { alpha } => alpha.clone(),
        _ => {
            debug_assert!(false, "gated by applies_to");
            return Ok(None);
        }
    };
    for k in 0..=n_max {
        let sums = ctx.profile().sum_moments(k);
        let point = &alpha * &Rational::from(k);
        for (n, lhs) in sums.iter().enumerate().take(n_max + 1) {
            let rhs = classical::lah_bell_poly(n).eval(&point);
            if *lhs != rhs {
                return Ok(Some(Witness::exact(
                    n,
                    Some(k),
                    Vec::new(),
                    lhs.clone(),
                    rhs,
                )));
            }
        }
    }
    Ok(None)
}

/// T2.13: for Poisson(alpha), `B_n(x) = sum_k phi_k(x) alpha^k L(n,k)` with
/// phi the classical Bell polynomials, compared coefficientwise.
fn poisson_classical_reduction(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let alpha = match ctx.profile().spec() {
        DistributionSpec::Poisson { alpha } => alpha.clone(),
        _ => {
            debug_assert!(false, "gated by applies_to");
            return Ok(None);
        }
    };
    for n in 0..=n_max {
        let mut rhs = UniPoly::zero();
        let mut alpha_pow = Rational::one();
        for k in 0..=n {
            if k > 0 {
                alpha_pow *= &alpha;
            }
            let weight = &alpha_pow * &classical::lah(n, k);
            if weight.is_zero() {
                continue;
            }
            rhs = &rhs + &classical::bell_poly(k).scale(&weight);
        }
        let lhs = ctx.bell_poly(n)?;
        if *lhs != rhs {
            return Ok(Some(Witness::poly(n, None, lhs, &rhs)));
        }
    }
    Ok(None)
}

/// T2.14: for Bernoulli(p), `L_Y(n,k) = p^k L(n,k)` entrywise, and hence
/// `B_n(x) = B_n^L(px)` coefficientwise.
fn bernoulli_closed_form(ctx: &ProbLahContext, n_max: usize) -> Result<Option<Witness>> {
    let p = match bernoulli_probability(ctx.profile().spec()) {
        Some(p) => p,
        None => {
            debug_assert!(false, "gated by applies_to");
            return Ok(None);
        }
    };
    for n in 0..=n_max {
        let mut p_pow = Rational::one();
        for k in 0..=n {
            if k > 0 {
                p_pow *= &p;
            }
            let lhs = ctx.lah(n, k)?;
            let rhs = &p_pow * &classical::lah(n, k);
            if lhs != rhs {
                return Ok(Some(Witness::exact(n, Some(k), Vec::new(), lhs, rhs)));
            }
        }
        let lhs = ctx.bell_poly(n)?;
        let rhs = classical::lah_bell_poly(n).scale_arg(&p);
        if *lhs != rhs {
            return Ok(Some(Witness::poly(n, None, lhs, &rhs)));
        }
    }
    Ok(None)
}
