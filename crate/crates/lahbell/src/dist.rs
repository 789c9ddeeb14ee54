//! Distribution descriptions and their exact rising-factorial moments.
//!
//! A [`DistributionSpec`] names a random variable Y with rational
//! parameters; [`MomentProfile::build`] turns it into the exact sequence
//! `E[<Y>_n]` up to a chosen order. Rising-factorial moments are the
//! crate's canonical basis because the series `(1/(1-t))^y = sum <y>_n t^n/n!`
//! makes every downstream formula a statement about them; power moments are
//! accepted only at the ingestion boundary via [`power_to_rising`].
//!
//! `RawRisingMoments` carries moments with no claim that a matching random
//! variable exists (the classical moment problem is not decided here); all
//! downstream identities are formal-power-series statements in the supplied
//! moments, so they hold regardless. Requesting a moment beyond the
//! supplied data is an error, never an extrapolation.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::classical::lah_bell_poly;
use crate::error::{Error, Result};
use crate::rational::{binom_u, Rational};

/// A random variable with rational parameters, fixed by one of five shapes.
///
/// The JSON form is tagged by `kind`, with rationals as `"num/den"` strings:
/// `{"kind":"poisson","alpha":"1/2"}`,
/// `{"kind":"finite_discrete","support":[["1","1/2"],["2","1/2"]]}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    /// Y = c with probability 1.
    Constant { c: Rational },
    /// P(Y=1) = p, P(Y=0) = 1-p.
    Bernoulli { p: Rational },
    /// P(Y=j) = e^{-alpha} alpha^j / j!, alpha > 0.
    Poisson { alpha: Rational },
    /// Finitely many atoms as (value, probability) pairs.
    FiniteDiscrete { support: Vec<(Rational, Rational)> },
    /// Moments given directly: entry i is E[<Y>_{i+1}].
    RawRisingMoments { moments: Vec<Rational> },
}

impl DistributionSpec {
    pub fn constant(c: Rational) -> Self {
        DistributionSpec::Constant { c }
    }

    pub fn bernoulli(p: Rational) -> Self {
        DistributionSpec::Bernoulli { p }
    }

    pub fn poisson(alpha: Rational) -> Self {
        DistributionSpec::Poisson { alpha }
    }

    pub fn finite_discrete(support: Vec<(Rational, Rational)>) -> Self {
        DistributionSpec::FiniteDiscrete { support }
    }

    pub fn raw_rising_moments(moments: Vec<Rational>) -> Self {
        DistributionSpec::RawRisingMoments { moments }
    }

    /// Checks the variant's own constraints; every consumer of a spec calls
    /// this before trusting it.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidDistribution(msg));
        match self {
            DistributionSpec::Constant { .. } => Ok(()),
            DistributionSpec::Bernoulli { p } => {
                if p.is_negative() || p > &Rational::one() {
                    return fail(format!("bernoulli p = {p} is outside [0, 1]"));
                }
                Ok(())
            }
            DistributionSpec::Poisson { alpha } => {
                if alpha.is_zero() || alpha.is_negative() {
                    return fail(format!("poisson alpha = {alpha} is not positive"));
                }
                Ok(())
            }
            DistributionSpec::FiniteDiscrete { support } => {
                if support.is_empty() {
                    return fail("finite_discrete support is empty".into());
                }
                let mut total = Rational::zero();
                for (value, prob) in support {
                    if prob.is_negative() {
                        return fail(format!("probability {prob} of value {value} is negative"));
                    }
                    total += prob;
                }
                if !total.is_one() {
                    return fail(format!("probabilities sum to {total}, not 1"));
                }
                let mut values: Vec<&Rational> = support.iter().map(|(v, _)| v).collect();
                values.sort();
                if values.windows(2).any(|w| w[0] == w[1]) {
                    return fail("support values are not distinct".into());
                }
                Ok(())
            }
            DistributionSpec::RawRisingMoments { moments } => {
                if moments.is_empty() {
                    return fail("raw_rising_moments needs at least one moment".into());
                }
                Ok(())
            }
        }
    }

    /// The atoms of Y as (value, probability) pairs, when Y has finitely
    /// many. `None` for Poisson and raw-moment specs.
    pub fn as_finite_support(&self) -> Option<Vec<(Rational, Rational)>> {
        match self {
            DistributionSpec::Constant { c } => Some(vec![(c.clone(), Rational::one())]),
            DistributionSpec::Bernoulli { p } => Some(vec![
                (Rational::zero(), Rational::one() - p),
                (Rational::one(), p.clone()),
            ]),
            DistributionSpec::FiniteDiscrete { support } => Some(support.clone()),
            DistributionSpec::Poisson { .. } | DistributionSpec::RawRisingMoments { .. } => None,
        }
    }

    /// Whether draws of Y can be simulated (everything except raw moments).
    pub fn is_sampleable(&self) -> bool {
        !matches!(self, DistributionSpec::RawRisingMoments { .. })
    }

    /// The seven-spec battery the validation suite sweeps by default.
    pub fn battery() -> Vec<DistributionSpec> {
        let half = Rational::new(1, 2).expect("2 != 0");
        let third = Rational::new(1, 3).expect("3 != 0");
        vec![
            DistributionSpec::constant(Rational::one()),
            DistributionSpec::constant(Rational::from(2u64)),
            DistributionSpec::bernoulli(half.clone()),
            DistributionSpec::bernoulli(third.clone()),
            DistributionSpec::poisson(Rational::one()),
            DistributionSpec::poisson(half),
            DistributionSpec::finite_discrete(vec![
                (Rational::one(), third.clone()),
                (Rational::from(2u64), third.clone()),
                (Rational::from(3u64), third),
            ]),
        ]
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionSpec::Constant { c } => write!(f, "constant({c})"),
            DistributionSpec::Bernoulli { p } => write!(f, "bernoulli({p})"),
            DistributionSpec::Poisson { alpha } => write!(f, "poisson({alpha})"),
            DistributionSpec::FiniteDiscrete { support } => {
                write!(f, "finite_discrete{{")?;
                for (i, (v, p)) in support.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}: {p}")?;
                }
                write!(f, "}}")
            }
            DistributionSpec::RawRisingMoments { moments } => {
                write!(f, "raw_rising_moments[")?;
                for (i, m) in moments.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// The exact moments `E[<Y>_n]` for 0 <= n <= max_order, plus the spec they
/// came from. Immutable once built; profiles never extrapolate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentProfile {
    spec: DistributionSpec,
    rising: Vec<Rational>,
}

impl MomentProfile {
    /// Computes the profile for `spec` up to `max_order`.
    ///
    /// Closed forms per variant: `<c>_n` for a constant; `n! p` for
    /// Bernoulli; the Lah-Bell polynomial at alpha for Poisson (its falling
    /// factorial moments are `alpha^k`, and the Lah triangle converts
    /// falling to rising); the probability-weighted sum of `<value>_n` for
    /// finite support.
    pub fn build(spec: &DistributionSpec, max_order: usize) -> Result<MomentProfile> {
        spec.validate()?;
        let mut rising = Vec::with_capacity(max_order + 1);
        rising.push(Rational::one());
        match spec {
            DistributionSpec::Constant { c } => {
                for n in 1..=max_order {
                    let factor = c + &Rational::from(n - 1);
                    rising.push(&rising[n - 1] * &factor);
                }
            }
            DistributionSpec::Bernoulli { p } => {
                let mut fact = Rational::one();
                for n in 1..=max_order {
                    fact *= &Rational::from(n);
                    rising.push(&fact * p);
                }
            }
            DistributionSpec::Poisson { alpha } => {
                for n in 1..=max_order {
                    rising.push(lah_bell_poly(n).eval(alpha));
                }
            }
            DistributionSpec::FiniteDiscrete { support } => {
                // partial[i] tracks <value_i>_n across orders
                let mut partial: Vec<Rational> = vec![Rational::one(); support.len()];
                for n in 1..=max_order {
                    let mut sum = Rational::zero();
                    for (i, (value, prob)) in support.iter().enumerate() {
                        partial[i] *= &(value + &Rational::from(n - 1));
                        sum += &(&partial[i] * prob);
                    }
                    rising.push(sum);
                }
            }
            DistributionSpec::RawRisingMoments { moments } => {
                if max_order > moments.len() {
                    return Err(Error::MomentOrder {
                        requested: max_order,
                        available: moments.len(),
                    });
                }
                rising.extend_from_slice(&moments[..max_order]);
            }
        }
        Ok(MomentProfile {
            spec: spec.clone(),
            rising,
        })
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    pub fn max_order(&self) -> usize {
        self.rising.len() - 1
    }

    /// `E[<Y>_n]`; errors past `max_order` rather than extrapolating.
    pub fn rising(&self, n: usize) -> Result<&Rational> {
        self.rising.get(n).ok_or(Error::MomentOrder {
            requested: n,
            available: self.max_order(),
        })
    }

    /// All moments, index n holding `E[<Y>_n]` (index 0 is 1).
    pub fn moments(&self) -> &[Rational] {
        &self.rising
    }

    /// The x_1, x_2, ... argument slice for partial Bell polynomials:
    /// moments of order 1 and up.
    pub fn bell_args(&self) -> &[Rational] {
        &self.rising[1..]
    }

    /// Moments of the iid sum S_k = Y_1 + ... + Y_k: the sequence
    /// `E[<S_k>_n]` for 0 <= n <= max_order, by k-fold binomial
    /// convolution. `k = 0` is the point mass at 0: (1, 0, 0, ...).
    pub fn sum_moments(&self, k: usize) -> Vec<Rational> {
        let mut acc = point_mass_at_zero(self.max_order());
        for _ in 0..k {
            acc = binomial_convolve(&acc, &self.rising);
        }
        acc
    }
}

/// Rising moments of the constant 0: `<0>_0 = 1`, `<0>_n = 0`.
pub(crate) fn point_mass_at_zero(max_order: usize) -> Vec<Rational> {
    let mut m = vec![Rational::zero(); max_order + 1];
    m[0] = Rational::one();
    m
}

/// Moment sequence of an independent sum: `c_n = sum_j C(n,j) a_j b_{n-j}`.
/// Valid because `(1/(1-t))^{U+V}` factorizes for independent U, V, and
/// rising moments are the EGF coefficients of that series.
pub(crate) fn binomial_convolve(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len(), "moment sequences must share max_order");
    (0..a.len())
        .map(|n| {
            let mut acc = Rational::zero();
            for j in 0..=n {
                if a[j].is_zero() || b[n - j].is_zero() {
                    continue;
                }
                acc += &(binom_u(n, j) * &a[j] * &b[n - j]);
            }
            acc
        })
        .collect()
}

/// Converts power moments `(E[Y^0], E[Y^1], ...)` to rising-factorial
/// moments of the same length via `<x>_n = sum_k c(n,k) x^k` with unsigned
/// Stirling numbers of the first kind.
pub fn power_to_rising(power_moments: &[Rational]) -> Result<Vec<Rational>> {
    match power_moments.first() {
        Some(first) if first.is_one() => {}
        _ => {
            return Err(Error::InvalidDistribution(
                "power moments must start with E[Y^0] = 1".into(),
            ))
        }
    }
    let order = power_moments.len() - 1;
    let c = stirling1_unsigned_triangle(order);
    Ok((0..=order)
        .map(|n| {
            let mut acc = Rational::zero();
            for (k, m) in power_moments.iter().enumerate().take(n + 1) {
                let coeff = &c[n][k];
                if coeff.is_zero() || m.is_zero() {
                    continue;
                }
                acc += &(coeff * m);
            }
            acc
        })
        .collect())
}

/// Unsigned Stirling numbers of the first kind by the recurrence
/// `c(n+1, k) = n c(n, k) + c(n, k-1)`; row n lists the coefficients of
/// `<x>_n` in the monomial basis.
fn stirling1_unsigned_triangle(max_n: usize) -> Vec<Vec<Rational>> {
    let mut rows = vec![vec![Rational::one()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                let mut v = if k > 0 {
                    prev[k - 1].clone()
                } else {
                    Rational::zero()
                };
                if k < n {
                    v += &(&prev[k] * &Rational::from(n - 1));
                }
                v
            })
            .collect();
        rows.push(row);
    }
    rows
}
