use crate::error::{Error, Result};

/// An observed sample of non-negative integer counts.
///
/// Wraps the raw observations together with the quantities every test in the
/// crate keeps reaching for: the size `n`, the sum `t` (the sufficient
/// statistic under the geometric null) and the first two empirical moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<u64>,
}

impl Sample {
    /// Build a sample from raw observations. Must be non-empty.
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Self { values })
    }

    /// Build a sample from (value, count) frequency rows.
    pub fn from_counts(rows: &[(u64, u64)]) -> Result<Self> {
        let mut values = Vec::new();
        for &(value, count) in rows {
            for _ in 0..count {
                values.push(value);
            }
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Recover the owned observations (used by hot loops to reuse buffers).
    pub fn into_values(self) -> Vec<u64> {
        self.values
    }

    /// Sample size n.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Sum of the observations, the sufficient statistic t.
    pub fn t(&self) -> u64 {
        self.values.iter().sum()
    }

    /// First empirical moment m1 = t/n.
    pub fn m1(&self) -> f64 {
        self.t() as f64 / self.n() as f64
    }

    /// Second empirical moment m2 = (1/n) sum x_i^2.
    pub fn m2(&self) -> f64 {
        self.values
            .iter()
            .map(|&x| (x as f64) * (x as f64))
            .sum::<f64>()
            / self.n() as f64
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Observed counts o_j for j = 0..=max(values).
    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.max() as usize + 1];
        for &x in &self.values {
            counts[x as usize] += 1;
        }
        counts
    }

    /// Frequency rows (value, count) for every value with a positive count.
    pub fn frequency_rows(&self) -> Vec<(u64, u64)> {
        self.counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| (j as u64, c))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_and_counts() {
        let s = Sample::new(vec![0, 0, 1, 3]).unwrap();
        assert_eq!(s.n(), 4);
        assert_eq!(s.t(), 4);
        assert_eq!(s.m1(), 1.0);
        assert_eq!(s.m2(), 10.0 / 4.0);
        assert_eq!(s.counts(), vec![2, 1, 0, 1]);
        assert_eq!(s.frequency_rows(), vec![(0, 2), (1, 1), (3, 1)]);
    }

    #[test]
    fn from_counts_round_trips() {
        let rows = [(0u64, 3u64), (2, 1), (5, 2)];
        let s = Sample::from_counts(&rows).unwrap();
        assert_eq!(s.n(), 6);
        assert_eq!(s.frequency_rows(), vec![(0, 3), (2, 1), (5, 2)]);
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(Sample::new(vec![]), Err(Error::EmptySample)));
        assert!(matches!(
            Sample::from_counts(&[(3, 0)]),
            Err(Error::EmptySample)
        ));
    }
}
