//! Monte Carlo conditional p-values and the power / type I error study
//! harnesses.
//!
//! The p-value of a statistic D on observed data x is estimated as the
//! fraction of conditional resamples y (uniform compositions with the same
//! n and t) satisfying D(y) >= D(x). Studies repeat that over datasets drawn
//! from an alternative. All randomness is derived from a master seed through
//! per-unit-of-work streams, so results are bit-identical regardless of how
//! many workers run.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conditional::{sample_conditional_geometric_into, CompositionSpec};
use crate::dist::{
    BetaGeometric, Binomial, DiscreteDist, DiscreteWeibull, Geometric, NegBinomial, Poisson,
};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};
use crate::sample::Sample;
use crate::stats::{evaluate_each, evaluate_suite, TestStatisticId};

/// Default replication count for a single test (the convention used by the
/// reference p-value tables).
pub const DEFAULT_TEST_REPLICATIONS: u64 = 10_000;
/// Default replication counts for studies: 1000 inner draws per p-value and
/// 1000 outer datasets.
pub const DEFAULT_STUDY_REPLICATIONS: u64 = 1000;

/// Outcome of a single conditional test.
#[derive(Debug, Clone, Serialize)]
pub struct TestResult {
    pub statistic: TestStatisticId,
    /// Observed value of the statistic; NaN if undefined on degenerate data.
    pub observed: f64,
    /// Monte Carlo conditional p-value, extreme_count / replications.
    pub p_cond: f64,
    pub replications: u64,
    pub seed: u64,
    pub extreme_count: u64,
    /// True when t = 0: the conditional law is a point mass and the p-value
    /// is trivially 1.
    pub degenerate: bool,
    /// Resamples on which the statistic was undefined (counted as
    /// non-extreme).
    pub undefined_resamples: u64,
}

/// Conditional Monte Carlo p-value for a single statistic.
pub fn conditional_p_value(
    sample: &Sample,
    statistic: TestStatisticId,
    replications: u64,
    seed: u64,
) -> Result<TestResult> {
    let mut results = conditional_p_values(sample, &[statistic], replications, seed)?;
    Ok(results.remove(0))
}

/// Conditional Monte Carlo p-values for several statistics evaluated on the
/// same set of resamples (a paired design: each draw is shared by every
/// statistic). Parallel over draws; each draw runs on its own stream, so the
/// result does not depend on the worker count.
pub fn conditional_p_values(
    sample: &Sample,
    statistics: &[TestStatisticId],
    replications: u64,
    seed: u64,
) -> Result<Vec<TestResult>> {
    if replications == 0 {
        return Err(Error::InvalidParameter("replications must be >= 1".into()));
    }
    if sample.t() == 0 {
        return Ok(degenerate_results(sample, statistics, replications, seed));
    }
    let observed = evaluate_suite(sample, statistics)?;

    let tallies = (0..replications)
        .into_par_iter()
        .map(|draw_index| {
            let mut rng = stream_rng(seed, draw_index);
            let mut tally = Tally::new(statistics.len());
            count_draws(
                sample.n(),
                sample.t(),
                statistics,
                &observed,
                1,
                &mut tally,
                &mut rng,
            );
            tally
        })
        .reduce(|| Tally::new(statistics.len()), Tally::merge);

    Ok(collect_results(
        statistics,
        &observed,
        &tallies,
        replications,
        seed,
    ))
}

/// Sequential variant used inside study iterations (one stream for all K
/// draws).
fn conditional_p_values_sequential(
    sample: &Sample,
    statistics: &[TestStatisticId],
    observed: &[f64],
    replications: u64,
    rng: &mut StreamRng,
) -> Tally {
    let mut tally = Tally::new(statistics.len());
    count_draws(
        sample.n(),
        sample.t(),
        statistics,
        observed,
        replications,
        &mut tally,
        rng,
    );
    tally
}

#[derive(Clone)]
struct Tally {
    extreme: Vec<u64>,
    undefined: Vec<u64>,
}

impl Tally {
    fn new(len: usize) -> Self {
        Self {
            extreme: vec![0; len],
            undefined: vec![0; len],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.extreme.iter_mut().zip(&other.extreme) {
            *a += b;
        }
        for (a, b) in self.undefined.iter_mut().zip(&other.undefined) {
            *a += b;
        }
        self
    }
}

fn count_draws<R: Rng + ?Sized>(
    n: usize,
    t: u64,
    statistics: &[TestStatisticId],
    observed: &[f64],
    draws: u64,
    tally: &mut Tally,
    rng: &mut R,
) {
    let spec = CompositionSpec { n, t };
    let mut buffer = Vec::with_capacity(n);
    for _ in 0..draws {
        sample_conditional_geometric_into(spec, &mut buffer, rng);
        let resample = Sample::new(std::mem::take(&mut buffer)).expect("n >= 1");
        for (i, value) in evaluate_each(&resample, statistics).into_iter().enumerate() {
            match value {
                // Ties count as extreme: D(y) >= D(x).
                Ok(v) => {
                    if v >= observed[i] {
                        tally.extreme[i] += 1;
                    }
                }
                Err(_) => tally.undefined[i] += 1,
            }
        }
        buffer = resample.into_values();
    }
}

fn collect_results(
    statistics: &[TestStatisticId],
    observed: &[f64],
    tally: &Tally,
    replications: u64,
    seed: u64,
) -> Vec<TestResult> {
    statistics
        .iter()
        .enumerate()
        .map(|(i, &statistic)| TestResult {
            statistic,
            observed: observed[i],
            p_cond: tally.extreme[i] as f64 / replications as f64,
            replications,
            seed,
            extreme_count: tally.extreme[i],
            degenerate: false,
            undefined_resamples: tally.undefined[i],
        })
        .collect()
}

fn degenerate_results(
    sample: &Sample,
    statistics: &[TestStatisticId],
    replications: u64,
    seed: u64,
) -> Vec<TestResult> {
    statistics
        .iter()
        .map(|&statistic| TestResult {
            statistic,
            observed: crate::stats::evaluate(statistic, sample).unwrap_or(f64::NAN),
            p_cond: 1.0,
            replications,
            seed,
            extreme_count: replications,
            degenerate: true,
            undefined_resamples: 0,
        })
        .collect()
}

/// An alternative (or null) data-generating distribution for studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alternative {
    Geometric(Geometric),
    Poisson(Poisson),
    Binomial(Binomial),
    NegBinomial(NegBinomial),
    BetaGeometric(BetaGeometric),
    DiscreteWeibull(DiscreteWeibull),
}

impl Alternative {
    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Sample {
        match self {
            Alternative::Geometric(d) => d.sample_n(n, rng),
            Alternative::Poisson(d) => d.sample_n(n, rng),
            Alternative::Binomial(d) => d.sample_n(n, rng),
            Alternative::NegBinomial(d) => d.sample_n(n, rng),
            Alternative::BetaGeometric(d) => d.sample_n(n, rng),
            Alternative::DiscreteWeibull(d) => d.sample_n(n, rng),
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alternative::Geometric(d) => write!(f, "geom:{}", d.p()),
            Alternative::Poisson(d) => write!(f, "pois:{}", d.lambda()),
            Alternative::Binomial(d) => write!(f, "bin:{},{}", d.m(), d.p()),
            Alternative::NegBinomial(d) => write!(f, "nb:{},{}", d.r(), d.p()),
            Alternative::BetaGeometric(d) => match (d.alpha(), d.beta()) {
                (Some(alpha), Some(beta)) => write!(f, "bg:{alpha},{beta}"),
                _ => write!(f, "geom:{}", d.pi()),
            },
            Alternative::DiscreteWeibull(d) => write!(f, "dweibull:{},{}", d.q(), d.beta()),
        }
    }
}

impl FromStr for Alternative {
    type Err = Error;

    /// Parses the study grid names: `geom:p`, `pois:lambda`, `bin:m,p`,
    /// `nb:r,p`, `bg:alpha,beta`, `dweibull:q,beta`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("expected family:params, got '{s}'")))?;
        let parts: Vec<&str> = args.split(',').collect();
        let parse = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad number '{v}' in '{s}'")))
        };
        match (family, parts.as_slice()) {
            ("geom", [p]) => Ok(Alternative::Geometric(Geometric::new(parse(p)?)?)),
            ("pois", [lambda]) => Ok(Alternative::Poisson(Poisson::new(parse(lambda)?)?)),
            ("bin", [m, p]) => {
                let m = m.trim().parse::<u64>().map_err(|_| {
                    Error::InvalidParameter(format!("bad binomial size '{m}' in '{s}'"))
                })?;
                Ok(Alternative::Binomial(Binomial::new(m, parse(p)?)?))
            }
            ("nb", [r, p]) => {
                let r = r.trim().parse::<u64>().map_err(|_| {
                    Error::InvalidParameter(format!("bad negative binomial size '{r}' in '{s}'"))
                })?;
                Ok(Alternative::NegBinomial(NegBinomial::new(r, parse(p)?)?))
            }
            ("bg", [alpha, beta]) => Ok(Alternative::BetaGeometric(
                BetaGeometric::from_alpha_beta(parse(alpha)?, parse(beta)?)?,
            )),
            ("dweibull", [q, beta]) => Ok(Alternative::DiscreteWeibull(DiscreteWeibull::new(
                parse(q)?,
                parse(beta)?,
            )?)),
            _ => Err(Error::InvalidParameter(format!(
                "unknown alternative '{s}' (expected geom:p, pois:lambda, bin:m,p, nb:r,p, bg:alpha,beta or dweibull:q,beta)"
            ))),
        }
    }
}

/// Specification of a power or type I error study.
#[derive(Debug, Clone)]
pub struct StudySpec {
    pub alternative: Alternative,
    pub sample_size: usize,
    pub alpha: f64,
    /// Outer datasets M.
    pub outer_replications: u64,
    /// Inner conditional draws K per p-value.
    pub inner_replications: u64,
    pub statistics: Vec<TestStatisticId>,
    pub seed: u64,
}

impl StudySpec {
    pub fn new(
        alternative: Alternative,
        sample_size: usize,
        alpha: f64,
        seed: u64,
    ) -> Result<Self> {
        if sample_size == 0 {
            return Err(Error::InvalidParameter("sample size must be >= 1".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be in (0,1), got {alpha}"
            )));
        }
        Ok(Self {
            alternative,
            sample_size,
            alpha,
            outer_replications: DEFAULT_STUDY_REPLICATIONS,
            inner_replications: DEFAULT_STUDY_REPLICATIONS,
            statistics: TestStatisticId::STUDY_SUITE.to_vec(),
            seed,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.outer_replications == 0 || self.inner_replications == 0 {
            return Err(Error::InvalidParameter(
                "replication counts must be >= 1".into(),
            ));
        }
        if self.statistics.is_empty() {
            return Err(Error::InvalidParameter("no statistics requested".into()));
        }
        Ok(())
    }
}

/// Per-statistic study outcome.
#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub statistic: TestStatisticId,
    /// Fraction of datasets with p_cond <= alpha.
    pub rejection_rate: f64,
    /// Binomial Monte Carlo standard error of the rate.
    pub mc_standard_error: f64,
    pub rejections: u64,
}

/// Result of a power or type I error study.
#[derive(Debug, Clone, Serialize)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
    /// Datasets with t = 0; their p-values are 1 and never reject.
    pub degenerate_datasets: u64,
    pub outer_replications: u64,
    pub inner_replications: u64,
    pub alpha: f64,
    pub seed: u64,
}

/// The per-dataset conditional p-values of a study, before applying a
/// significance level.
#[derive(Debug, Clone)]
pub struct StudyPValues {
    /// `p_values[m][s]` is the p-value of statistic `s` on dataset `m`.
    pub p_values: Vec<Vec<f64>>,
    pub degenerate: Vec<bool>,
}

/// Run the simulation part of a study, returning every conditional p-value.
///
/// Outer iterations are distributed over the rayon pool; iteration `i` draws
/// its dataset from stream `2i` and its conditional resamples from stream
/// `2i + 1`, so the outcome is independent of scheduling. Within an
/// iteration all statistics share the same K resamples.
pub fn study_p_values(spec: &StudySpec) -> Result<StudyPValues> {
    study_p_values_with_progress(spec, |_| {})
}

/// As [`study_p_values`], invoking `progress` with the number of completed
/// outer iterations after each one finishes.
pub fn study_p_values_with_progress<P>(spec: &StudySpec, progress: P) -> Result<StudyPValues>
where
    P: Fn(u64) + Sync,
{
    spec.validate()?;
    let completed = std::sync::atomic::AtomicU64::new(0);
    let per_dataset: Vec<(Vec<f64>, bool)> = (0..spec.outer_replications)
        .into_par_iter()
        .map(|iteration| {
            let mut data_rng = stream_rng(spec.seed, 2 * iteration);
            let dataset = spec.alternative.sample_n(spec.sample_size, &mut data_rng);
            let out = if dataset.t() == 0 {
                (vec![1.0; spec.statistics.len()], true)
            } else {
                let observed = evaluate_suite(&dataset, &spec.statistics)
                    .expect("statistics defined when t > 0");
                let mut draw_rng = stream_rng(spec.seed, 2 * iteration + 1);
                let tally = conditional_p_values_sequential(
                    &dataset,
                    &spec.statistics,
                    &observed,
                    spec.inner_replications,
                    &mut draw_rng,
                );
                let p = tally
                    .extreme
                    .iter()
                    .map(|&c| c as f64 / spec.inner_replications as f64)
                    .collect();
                (p, false)
            };
            progress(1 + completed.fetch_add(1, std::sync::atomic::Ordering::Relaxed));
            out
        })
        .collect();

    Ok(StudyPValues {
        p_values: per_dataset.iter().map(|(p, _)| p.clone()).collect(),
        degenerate: per_dataset.iter().map(|(_, d)| *d).collect(),
    })
}

/// Rejection rates at the spec's significance level.
pub fn summarize_study(spec: &StudySpec, p_values: &StudyPValues) -> StudyResult {
    let m = spec.outer_replications as f64;
    let rows = spec
        .statistics
        .iter()
        .enumerate()
        .map(|(s, &statistic)| {
            let rejections = p_values
                .p_values
                .iter()
                .filter(|row| row[s] <= spec.alpha)
                .count() as u64;
            let rate = rejections as f64 / m;
            StudyRow {
                statistic,
                rejection_rate: rate,
                mc_standard_error: (rate * (1.0 - rate) / m).sqrt(),
                rejections,
            }
        })
        .collect();
    StudyResult {
        rows,
        degenerate_datasets: p_values.degenerate.iter().filter(|&&d| d).count() as u64,
        outer_replications: spec.outer_replications,
        inner_replications: spec.inner_replications,
        alpha: spec.alpha,
        seed: spec.seed,
    }
}

/// Estimate the power of each statistic against the spec's alternative.
pub fn run_power_study(spec: &StudySpec) -> Result<StudyResult> {
    let p_values = study_p_values(spec)?;
    Ok(summarize_study(spec, &p_values))
}

/// Type I error study: the power study with the null itself generating the
/// data.
pub fn run_type1_study(
    p: f64,
    sample_size: usize,
    alpha: f64,
    outer_replications: u64,
    inner_replications: u64,
    statistics: Vec<TestStatisticId>,
    seed: u64,
) -> Result<StudyResult> {
    let mut spec = StudySpec::new(
        Alternative::Geometric(Geometric::new(p)?),
        sample_size,
        alpha,
        seed,
    )?;
    spec.outer_replications = outer_replications;
    spec.inner_replications = inner_replications;
    spec.statistics = statistics;
    run_power_study(&spec)
}
