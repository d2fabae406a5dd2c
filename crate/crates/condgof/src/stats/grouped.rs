//! Grouped-count summary backing the EDF statistics.
//!
//! From a sample with t > 0 and fitted geometric p_hat = n/(t+n), this holds
//! the observed counts o_j, the fitted cell probabilities p_j = p (1-p)^j,
//! the expected counts e_j = n p_j, the cumulative deviations
//! Z_k = sum_{j<=k} (o_j - e_j) and cumulative probabilities
//! H_k = sum_{j<=k} p_j, together with the truncation bounds for the sums.

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Cell probabilities below `10^-3 / n` are treated as negligible when
/// choosing where to truncate the sums.
const NEGLIGIBLE_MASS: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct GroupedSummary {
    pub n: usize,
    pub t: u64,
    pub p_hat: f64,
    /// o_j for j = 0..=m_upper.
    pub observed: Vec<f64>,
    /// p_j = p_hat (1-p_hat)^j.
    pub cell_probability: Vec<f64>,
    /// e_j = n p_j.
    pub expected: Vec<f64>,
    /// Z_k = O_k - E_k.
    pub cumulative_deviation: Vec<f64>,
    /// H_k, strictly increasing and below 1.
    pub cumulative_probability: Vec<f64>,
    /// Largest observed value: beyond it every count is zero.
    pub m0_upper: usize,
    /// Smallest j with negligible cell mass everywhere above it.
    pub m1_upper: usize,
    /// max(m0_upper, m1_upper); the sums run up to here.
    pub m_upper: usize,
    /// Smallest observed value.
    pub m0_lower: usize,
    /// Smallest j with non-negligible cell mass.
    pub m1_lower: usize,
    /// min(m0_lower, m1_lower); the sums start here.
    pub m_lower: usize,
}

/// Truncation bounds for the statistic sums.
///
/// The upper bounds follow the definitions directly: m0 is the largest
/// observed value, m1 the smallest j with p_{j'} < 10^-3/n for every
/// j' > j. The printed lower-bound definitions are degenerate whenever a
/// zero is observed, so this takes the evident intent: m0 is the smallest
/// observed value and m1 the smallest j whose cell mass is non-negligible,
/// which makes every sum start at 0 for ordinary data. Kept in one place so
/// the reading can be revised without touching the statistics.
fn truncation_bounds(
    counts: &[u64],
    p_hat: f64,
    n: usize,
) -> (usize, usize, usize, usize, usize, usize) {
    let threshold = NEGLIGIBLE_MASS / n as f64;
    let survival = 1.0 - p_hat;

    let m0_upper = counts.len() - 1;
    let mut m1_upper = 0usize;
    let mut mass = p_hat * survival; // p_{j+1} with j = 0
    while mass >= threshold {
        m1_upper += 1;
        mass *= survival;
    }
    let m_upper = m0_upper.max(m1_upper);

    let m0_lower = counts
        .iter()
        .position(|&c| c > 0)
        .expect("sample is non-empty");
    // Cell mass decreases in j, so the smallest j with non-negligible mass
    // is 0 whenever one exists; fall back to 0 as well if p_hat itself has
    // underflowed the threshold.
    let m1_lower = 0usize;
    let m_lower = m0_lower.min(m1_lower);

    (m0_upper, m1_upper, m_upper, m0_lower, m1_lower, m_lower)
}

impl GroupedSummary {
    pub fn from_sample(sample: &Sample) -> Result<Self> {
        let t = sample.t();
        if t == 0 {
            return Err(Error::DegenerateSample);
        }
        let n = sample.n();
        let p_hat = n as f64 / (t as f64 + n as f64);
        let counts = sample.counts();
        let (m0_upper, m1_upper, m_upper, m0_lower, m1_lower, m_lower) =
            truncation_bounds(&counts, p_hat, n);

        let len = m_upper + 1;
        let mut observed = vec![0.0; len];
        for (j, &c) in counts.iter().enumerate() {
            observed[j] = c as f64;
        }
        let survival = 1.0 - p_hat;
        let mut cell_probability = Vec::with_capacity(len);
        let mut expected = Vec::with_capacity(len);
        let mut cumulative_deviation = Vec::with_capacity(len);
        let mut cumulative_probability = Vec::with_capacity(len);
        let mut mass = p_hat;
        let mut z = 0.0;
        let mut h = 0.0;
        for &o in &observed {
            cell_probability.push(mass);
            let e = n as f64 * mass;
            expected.push(e);
            z += o - e;
            cumulative_deviation.push(z);
            h += mass;
            cumulative_probability.push(h);
            mass *= survival;
        }

        Ok(Self {
            n,
            t,
            p_hat,
            observed,
            cell_probability,
            expected,
            cumulative_deviation,
            cumulative_probability,
            m0_upper,
            m1_upper,
            m_upper,
            m0_lower,
            m1_lower,
            m_lower,
        })
    }
}

/// Cramer-von Mises statistic: W^2 = (1/n) sum Z_i^2 p_i over the truncated
/// range.
pub fn w2(summary: &GroupedSummary) -> f64 {
    let mut total = 0.0;
    for i in summary.m_lower..=summary.m_upper {
        let z = summary.cumulative_deviation[i];
        total += z * z * summary.cell_probability[i];
    }
    total / summary.n as f64
}

/// Anderson-Darling statistic: A^2 = (1/n) sum Z_i^2 p_i / (H_i (1 - H_i)).
/// Terms whose tail mass 1 - H_i has underflowed below 1e-12 are skipped.
pub fn a2(summary: &GroupedSummary) -> f64 {
    let mut total = 0.0;
    for i in summary.m_lower..=summary.m_upper {
        let h = summary.cumulative_probability[i];
        let tail = 1.0 - h;
        if tail < 1e-12 {
            continue;
        }
        let z = summary.cumulative_deviation[i];
        total += z * z * summary.cell_probability[i] / (h * tail);
    }
    total / summary.n as f64
}

/// Kolmogorov-Smirnov statistic: max |Z_k| for k up to the largest observed
/// value. Beyond it Z_k is positive and decreasing, so the restricted
/// maximum is the global one.
pub fn ks(summary: &GroupedSummary) -> f64 {
    summary.cumulative_deviation[..=summary.m0_upper]
        .iter()
        .fold(0.0f64, |acc, &z| acc.max(z.abs()))
}
