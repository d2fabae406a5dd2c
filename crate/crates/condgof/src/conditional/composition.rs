//! Compositions of an integer and their stars-and-bars encoding.
//!
//! A composition is an ordered tuple of `n` non-negative integers summing to
//! `t`. Laying down `t` stars and `n-1` bars over positions `1..=t+n-1`
//! encodes each composition by its strictly increasing bar positions, and the
//! two representations are in bijection. Drawing the bar positions uniformly
//! therefore draws a composition uniformly, which is exactly the conditional
//! law of an i.i.d. geometric sample given its sum.

use rand::Rng;

use crate::error::{Error, Result};

/// The shape of a composition problem: `n` parts summing to `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositionSpec {
    pub n: usize,
    pub t: u64,
}

impl CompositionSpec {
    pub fn new(n: usize, t: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(Self { n, t })
    }

    /// Number of compositions, C(t+n-1, n-1), as f64 (approximate for large
    /// arguments).
    pub fn state_count(&self) -> f64 {
        crate::dist::special::binomial_coefficient(self.t + self.n as u64 - 1, self.n as u64 - 1)
    }

    /// Exact number of compositions; only for small state spaces.
    pub fn state_count_exact(&self) -> u128 {
        crate::dist::special::binomial_exact(self.t + self.n as u64 - 1, self.n as u64 - 1)
    }
}

/// Strictly increasing bar positions `0 < k_1 < ... < k_{n-1} < t+n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarPositions(pub Vec<u64>);

impl BarPositions {
    /// Validate bar positions against a spec.
    pub fn new(positions: Vec<u64>, spec: CompositionSpec) -> Result<Self> {
        let bars = BarPositions(positions);
        bars.validate(spec)?;
        Ok(bars)
    }

    fn validate(&self, spec: CompositionSpec) -> Result<()> {
        let k = &self.0;
        if k.len() + 1 != spec.n {
            return Err(Error::MalformedBars(format!(
                "expected {} bars for n = {}, got {}",
                spec.n - 1,
                spec.n,
                k.len()
            )));
        }
        let mut prev = 0u64;
        for &pos in k {
            if pos <= prev {
                return Err(Error::MalformedBars(format!(
                    "positions must be strictly increasing and positive, got {:?}",
                    k
                )));
            }
            prev = pos;
        }
        if let Some(&last) = k.last() {
            if last >= spec.t + spec.n as u64 {
                return Err(Error::MalformedBars(format!(
                    "last position {} must be below t+n = {}",
                    last,
                    spec.t + spec.n as u64
                )));
            }
        }
        Ok(())
    }

    pub fn positions(&self) -> &[u64] {
        &self.0
    }
}

/// An ordered tuple of non-negative integers with a fixed sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition(pub Vec<u64>);

impl Composition {
    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Decode bar positions into the composition they represent.
///
/// Part `i` is the number of star positions between bar `i-1` and bar `i`:
/// `x_1 = k_1 - 1`, `x_i = k_i - k_{i-1} - 1`, `x_n = t - (k_{n-1} - (n-1))`.
pub fn bars_to_composition(bars: &BarPositions, spec: CompositionSpec) -> Result<Composition> {
    bars.validate(spec)?;
    let k = bars.positions();
    let n = spec.n;
    let mut x = Vec::with_capacity(n);
    if n == 1 {
        x.push(spec.t);
        return Ok(Composition(x));
    }
    x.push(k[0] - 1);
    for i in 1..n - 1 {
        x.push(k[i] - k[i - 1] - 1);
    }
    x.push(spec.t - (k[n - 2] - (n as u64 - 1)));
    debug_assert_eq!(x.iter().sum::<u64>(), spec.t);
    Ok(Composition(x))
}

/// Encode a composition as its bar positions: `k_j = x_1 + ... + x_j + j`.
pub fn composition_to_bars(composition: &Composition) -> BarPositions {
    let x = composition.parts();
    let mut k = Vec::with_capacity(x.len().saturating_sub(1));
    let mut partial = 0u64;
    for (j, &part) in x.iter().take(x.len().saturating_sub(1)).enumerate() {
        partial += part;
        k.push(partial + j as u64 + 1);
    }
    BarPositions(k)
}

/// Draw bar positions uniformly over all `C(t+n-1, n-1)` placements.
///
/// Scans candidate positions from `t+n-1` down to 1, accepting position `I`
/// as a bar with probability `(bars left)/(positions left)`. When the counts
/// coincide the probability is exactly 1, short-circuited without consuming a
/// uniform. The accepted positions come out in decreasing order and are
/// stored back-to-front, so the result is strictly increasing.
pub fn draw_bars_uniform<R: Rng + ?Sized>(spec: CompositionSpec, rng: &mut R) -> BarPositions {
    let n = spec.n;
    if n == 1 {
        return BarPositions(Vec::new());
    }
    let bars_total = n as u64 - 1;
    let mut k = vec![0u64; n - 1];
    let mut accepted = 0u64; // N
    let mut rejected = 0u64; // V
    let mut position = spec.t + bars_total; // I = t + n - 1

    while accepted < bars_total {
        let bars_left = bars_total - accepted;
        let positions_left = spec.t + bars_total - accepted - rejected;
        let accept = bars_left == positions_left
            || rng.random::<f64>() < bars_left as f64 / positions_left as f64;
        if accept {
            k[(bars_total - 1 - accepted) as usize] = position;
            accepted += 1;
        } else {
            rejected += 1;
        }
        position -= 1;
    }
    BarPositions(k)
}

/// Enumerate every composition of `t` into `n` parts in lexicographic order.
///
/// Exhaustive and exponential in size; intended for tests and small state
/// spaces (chi-square uniformity checks, exact conditional pmfs).
pub fn enumerate_compositions(spec: CompositionSpec) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut current = vec![0u64; spec.n];
    fn recurse(current: &mut Vec<u64>, index: usize, remaining: u64, out: &mut Vec<Composition>) {
        if index + 1 == current.len() {
            current[index] = remaining;
            out.push(Composition(current.clone()));
            return;
        }
        for value in 0..=remaining {
            current[index] = value;
            recurse(current, index + 1, remaining - value, out);
        }
    }
    recurse(&mut current, 0, spec.t, &mut out);
    out
}
