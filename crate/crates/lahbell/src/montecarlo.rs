//! Statistical cross-validation of the exact routes.
//!
//! Exact values of `E[<S_k>_n]` come out of moment convolution; this module
//! re-estimates them by actually drawing iid copies of Y and averaging
//! rising factorials, catching systematic errors the exact routes could
//! share. Everything is deterministic for a fixed seed: each (k, n) cell
//! draws from its own counter-derived substream, so results are identical
//! regardless of execution order or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{DistributionSpec, MomentProfile};
use crate::error::{Error, Result};

/// Guard on the number of summands: variance of `<S_k>_n` grows too fast
/// past this for interval estimates at desk-scale sample counts.
pub const MAX_SIM_K: usize = 20;

/// Guard on the rising-factorial order, for the same reason.
pub const MAX_SIM_N: usize = 10;

/// Below this many samples, interval estimates are meaningless.
pub const MIN_SAMPLES: u64 = 1000;

/// Inversion-by-sequential-search stays exact and fast only for small
/// rates; larger rates would need a different sampler.
const MAX_POISSON_RATE: f64 = 30.0;

/// Acceptance band half-width in standard errors. At four sigma a healthy
/// cell false-alarms about once in 16000 sweeps.
pub const SIGMA_BAND: f64 = 4.0;

/// A reproducible simulation setup: seed, sample count, and the law to
/// draw from. Construction validates the spec and rejects unsampleable
/// ones (raw moment lists carry no law to draw from).
#[derive(Clone, Debug)]
pub struct SimConfig {
    seed: u64,
    samples: u64,
    spec: DistributionSpec,
}

impl SimConfig {
    pub fn new(seed: u64, samples: u64, spec: DistributionSpec) -> Result<Self> {
        spec.validate()?;
        if !spec.is_sampleable() {
            return Err(Error::NotSampleable(spec.to_string()));
        }
        if samples < MIN_SAMPLES {
            return Err(Error::NotEnoughValues {
                what: "samples",
                needed: MIN_SAMPLES as usize,
                got: samples as usize,
            });
        }
        Ok(SimConfig {
            seed,
            samples,
            spec,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }
}

/// Sample mean and standard error of one estimated expectation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// One cell of a sweep: the exact value next to its estimate, the
/// z-score, and the four-sigma verdict. `ok` demands exact equality when
/// the estimator has zero variance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepCell {
    pub k: usize,
    pub n: usize,
    pub exact: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub z: f64,
    pub ok: bool,
}

/// Estimates `E[<S_k>_n]` over `cfg.samples` independent replications of
/// `S_k` = sum of k draws. Deterministic for fixed (seed, samples, spec).
pub fn estimate_sum_moment(cfg: &SimConfig, k: usize, n: usize) -> Result<Estimate> {
    if k > MAX_SIM_K {
        return Err(Error::Unsupported(format!(
            "k = {k} summands exceeds the simulation guard {MAX_SIM_K}"
        )));
    }
    if n > MAX_SIM_N {
        return Err(Error::Unsupported(format!(
            "moment order {n} exceeds the simulation guard {MAX_SIM_N}"
        )));
    }
    let sampler = Sampler::from_spec(&cfg.spec)?;
    let mut rng = cell_rng(cfg.seed, 1, k as u64, n as u64);
    let mut welford = Welford::new();
    for _ in 0..cfg.samples {
        let mut s = 0.0;
        for _ in 0..k {
            s += sampler.draw(&mut rng);
        }
        welford.push(rising_factorial_f64(s, n));
    }
    Ok(welford.estimate())
}

/// Estimates `B_n(x)` by sampling the series as a mixture: draw
/// K ~ Poisson(x), then S_K, then average `<S_K>_n`. The Poisson weight
/// on each k is exactly the series coefficient `e^{-x} x^k/k!`, so the
/// mixture expectation is the series value. Deterministic for fixed
/// (seed, samples, spec, n, x).
pub fn estimate_dobinski(cfg: &SimConfig, n: usize, x: f64) -> Result<Estimate> {
    if n > MAX_SIM_N {
        return Err(Error::Unsupported(format!(
            "moment order {n} exceeds the simulation guard {MAX_SIM_N}"
        )));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Unsupported(format!(
            "mixture sampling requires finite x >= 0, got {x}"
        )));
    }
    if x > MAX_POISSON_RATE {
        return Err(Error::Unsupported(format!(
            "x = {x} exceeds the inversion-sampler cap {MAX_POISSON_RATE}"
        )));
    }
    let sampler = Sampler::from_spec(&cfg.spec)?;
    let mut rng = cell_rng(cfg.seed, 2, n as u64, x.to_bits());
    let mut welford = Welford::new();
    for _ in 0..cfg.samples {
        let k = if x == 0.0 {
            0
        } else {
            poisson_inverse_cdf(x, rng.gen::<f64>())
        };
        let mut s = 0.0;
        for _ in 0..k {
            s += sampler.draw(&mut rng);
        }
        welford.push(rising_factorial_f64(s, n));
    }
    Ok(welford.estimate())
}

/// Runs `estimate_sum_moment` over the full (k, n) grid and joins each
/// estimate with its exact counterpart from moment convolution. Cells are
/// independent substreams, so the parallel run returns exactly what the
/// sequential one would, in row-major (k, n) order.
pub fn sweep(cfg: &SimConfig, k_max: usize, n_max: usize) -> Result<Vec<SweepCell>> {
    let profile = MomentProfile::build(&cfg.spec, n_max)?;
    let exact_by_k: Vec<Vec<f64>> = (0..=k_max)
        .map(|k| profile.sum_moments(k).iter().map(|m| m.to_f64()).collect())
        .collect();
    let cells: Vec<(usize, usize)> = (0..=k_max)
        .flat_map(|k| (0..=n_max).map(move |n| (k, n)))
        .collect();
    cells
        .into_par_iter()
        .map(|(k, n)| {
            let est = estimate_sum_moment(cfg, k, n)?;
            Ok(cell_verdict(k, n, exact_by_k[k][n], est))
        })
        .collect()
}

fn cell_verdict(k: usize, n: usize, exact: f64, est: Estimate) -> SweepCell {
    let diff = est.mean - exact;
    let (z, ok) = if est.stderr > 0.0 {
        (diff / est.stderr, diff.abs() <= SIGMA_BAND * est.stderr)
    } else if diff == 0.0 {
        (0.0, true)
    } else {
        (diff.signum() * f64::INFINITY, false)
    };
    SweepCell {
        k,
        n,
        exact,
        estimate: est.mean,
        stderr: est.stderr,
        z,
        ok,
    }
}

/// `s (s+1) ... (s+n-1)`, empty product for n = 0.
fn rising_factorial_f64(s: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..n {
        acc *= s + i as f64;
    }
    acc
}

/// Streaming mean and sum of squared deviations; numerically stable and,
/// for a constant stream, exactly zero variance.
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn new() -> Self {
        Welford {
            count: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn estimate(&self) -> Estimate {
        let n = self.count as f64;
        Estimate {
            mean: self.mean,
            stderr: (self.m2 / ((n - 1.0) * n)).sqrt(),
        }
    }
}

enum Sampler {
    Constant(f64),
    Bernoulli(f64),
    Poisson(f64),
    Finite { cumulative: Vec<f64>, values: Vec<f64> },
}

impl Sampler {
    fn from_spec(spec: &DistributionSpec) -> Result<Sampler> {
        match spec {
            DistributionSpec::Constant { c } => Ok(Sampler::Constant(c.to_f64())),
            DistributionSpec::Bernoulli { p } => Ok(Sampler::Bernoulli(p.to_f64())),
            DistributionSpec::Poisson { alpha } => {
                let rate = alpha.to_f64();
                if rate > MAX_POISSON_RATE {
                    return Err(Error::Unsupported(format!(
                        "rate {rate} exceeds the inversion-sampler cap {MAX_POISSON_RATE}"
                    )));
                }
                Ok(Sampler::Poisson(rate))
            }
            DistributionSpec::FiniteDiscrete { support } => {
                let mut cumulative = Vec::with_capacity(support.len());
                let mut values = Vec::with_capacity(support.len());
                let mut acc = 0.0;
                for (value, prob) in support {
                    acc += prob.to_f64();
                    cumulative.push(acc);
                    values.push(value.to_f64());
                }
                Ok(Sampler::Finite { cumulative, values })
            }
            DistributionSpec::RawRisingMoments { .. } => {
                Err(Error::NotSampleable(spec.to_string()))
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Sampler::Constant(c) => *c,
            Sampler::Bernoulli(p) => {
                if rng.gen::<f64>() < *p {
                    1.0
                } else {
                    0.0
                }
            }
            Sampler::Poisson(rate) => poisson_inverse_cdf(*rate, rng.gen::<f64>()) as f64,
            Sampler::Finite { cumulative, values } => {
                let u = rng.gen::<f64>();
                let idx = cumulative
                    .iter()
                    .position(|c| u < *c)
                    .unwrap_or(values.len() - 1);
                values[idx]
            }
        }
    }
}

/// Smallest j with `CDF_Poisson(rate)(j) > u`, by sequential search from 0.
/// Exact for the rates admitted by [`MAX_POISSON_RATE`]; the cutoff at 400
/// is unreachable for those rates (tail mass < 1e-200).
fn poisson_inverse_cdf(rate: f64, u: f64) -> u64 {
    let mut j = 0u64;
    let mut pmf = (-rate).exp();
    let mut cdf = pmf;
    while u >= cdf && j < 400 {
        j += 1;
        pmf *= rate / j as f64;
        cdf += pmf;
    }
    j
}

/// SplitMix64 output mixing, the standard way to turn counters into
/// well-separated stream ids.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// A ChaCha stream keyed by the seed and positioned on a substream derived
/// from (tag, a, b). Distinct cells get distinct streams of one keyed
/// generator, which is what makes the sweep order-independent.
fn cell_rng(seed: u64, tag: u64, a: u64, b: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(splitmix64(tag ^ splitmix64(a ^ splitmix64(b))));
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problah::ProbLahContext;
    use crate::rational::Rational;

    fn cfg(seed: u64, samples: u64, spec: DistributionSpec) -> SimConfig {
        SimConfig::new(seed, samples, spec).unwrap()
    }

    #[test]
    fn reruns_are_bit_identical() {
        let c = cfg(7, 2000, DistributionSpec::poisson(Rational::new(1, 2).unwrap()));
        let a = estimate_sum_moment(&c, 3, 4).unwrap();
        let b = estimate_sum_moment(&c, 3, 4).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let d1 = estimate_dobinski(&c, 2, 1.5).unwrap();
        let d2 = estimate_dobinski(&c, 2, 1.5).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn distinct_cells_use_distinct_streams() {
        let c = cfg(7, 2000, DistributionSpec::bernoulli(Rational::new(1, 2).unwrap()));
        let a = estimate_sum_moment(&c, 2, 2).unwrap();
        let b = estimate_sum_moment(&c, 2, 3).unwrap();
        assert_ne!(a.mean.to_bits(), b.mean.to_bits());
    }

    #[test]
    fn constant_specs_have_zero_stderr_and_exact_mean() {
        let c = cfg(0, 1000, DistributionSpec::constant(Rational::one()));
        let est = estimate_sum_moment(&c, 2, 2).unwrap();
        assert_eq!(est, Estimate { mean: 6.0, stderr: 0.0 });
    }

    #[test]
    fn zero_summands_give_the_point_mass_moments() {
        let c = cfg(3, 1000, DistributionSpec::bernoulli(Rational::new(1, 2).unwrap()));
        assert_eq!(
            estimate_sum_moment(&c, 0, 2).unwrap(),
            Estimate { mean: 0.0, stderr: 0.0 }
        );
        assert_eq!(
            estimate_sum_moment(&c, 0, 0).unwrap(),
            Estimate { mean: 1.0, stderr: 0.0 }
        );
    }

    #[test]
    fn poisson_single_draw_second_moment_lands_in_band() {
        let c = cfg(11, 20000, DistributionSpec::poisson(Rational::one()));
        let est = estimate_sum_moment(&c, 1, 2).unwrap();
        assert!(est.stderr > 0.0);
        assert!(
            (est.mean - 3.0).abs() <= SIGMA_BAND * est.stderr,
            "mean {} stderr {}",
            est.mean,
            est.stderr
        );
    }

    #[test]
    fn mixture_estimate_matches_polynomial_values() {
        let c = cfg(5, 40000, DistributionSpec::constant(Rational::one()));
        let est = estimate_dobinski(&c, 3, 1.0).unwrap();
        assert!((est.mean - 13.0).abs() <= SIGMA_BAND * est.stderr);

        let spec = DistributionSpec::bernoulli(Rational::new(1, 2).unwrap());
        let exact = ProbLahContext::for_spec(&spec, 2)
            .unwrap()
            .bell_poly(2)
            .unwrap()
            .eval(&Rational::one())
            .to_f64();
        let c = cfg(5, 40000, spec);
        let est = estimate_dobinski(&c, 2, 1.0).unwrap();
        assert!(est.stderr > 0.0);
        assert!(
            (est.mean - exact).abs() <= SIGMA_BAND * est.stderr,
            "mean {} vs exact {exact}",
            est.mean
        );
    }

    #[test]
    fn mixture_with_zero_rate_is_the_zeroth_summand() {
        let c = cfg(9, 1000, DistributionSpec::constant(Rational::from(2u64)));
        assert_eq!(
            estimate_dobinski(&c, 0, 0.0).unwrap(),
            Estimate { mean: 1.0, stderr: 0.0 }
        );
        assert_eq!(
            estimate_dobinski(&c, 3, 0.0).unwrap(),
            Estimate { mean: 0.0, stderr: 0.0 }
        );
    }

    #[test]
    fn sweep_matches_per_cell_calls_and_stays_in_band() {
        let spec = DistributionSpec::finite_discrete(vec![
            (Rational::one(), Rational::new(1, 3).unwrap()),
            (Rational::from(2u64), Rational::new(1, 3).unwrap()),
            (Rational::from(3u64), Rational::new(1, 3).unwrap()),
        ]);
        let c = cfg(42, 5000, spec);
        let cells = sweep(&c, 3, 4).unwrap();
        assert_eq!(cells.len(), 4 * 5);
        for cell in &cells {
            assert!(cell.ok, "cell {cell:?} out of band");
            let direct = estimate_sum_moment(&c, cell.k, cell.n).unwrap();
            assert_eq!(direct.mean.to_bits(), cell.estimate.to_bits());
            assert_eq!(direct.stderr.to_bits(), cell.stderr.to_bits());
        }
        let rerun = sweep(&c, 3, 4).unwrap();
        assert_eq!(cells, rerun);
    }

    #[test]
    fn coverage_across_seeds_is_calibrated() {
        let spec = DistributionSpec::poisson(Rational::one());
        let exact = MomentProfile::build(&spec, 3).unwrap().sum_moments(2)[3].to_f64();
        let mut hits = 0;
        for seed in 0..100 {
            let est = estimate_sum_moment(&cfg(seed, 1000, spec.clone()), 2, 3).unwrap();
            if (est.mean - exact).abs() <= SIGMA_BAND * est.stderr {
                hits += 1;
            }
        }
        assert!(hits >= 99, "only {hits}/100 runs covered the exact value");
    }

    #[test]
    fn configuration_and_guard_rejections() {
        let raw = DistributionSpec::raw_rising_moments(vec![Rational::one()]);
        assert!(matches!(
            SimConfig::new(0, 1000, raw),
            Err(Error::NotSampleable(_))
        ));
        let bern = DistributionSpec::bernoulli(Rational::new(1, 2).unwrap());
        assert!(SimConfig::new(0, 999, bern.clone()).is_err());
        let c = cfg(0, 1000, bern);
        assert!(estimate_sum_moment(&c, MAX_SIM_K + 1, 2).is_err());
        assert!(estimate_sum_moment(&c, 2, MAX_SIM_N + 1).is_err());
        assert!(estimate_dobinski(&c, 2, -1.0).is_err());
        assert!(estimate_dobinski(&c, 2, 31.0).is_err());
        let hot = cfg(0, 1000, DistributionSpec::poisson(Rational::from(31u64)));
        assert!(matches!(
            estimate_sum_moment(&hot, 1, 1),
            Err(Error::Unsupported(_))
        ));
    }
}
