//! Exact samplers from the conditional law of a sample given its sum, for
//! the nulls whose conditional distribution has a closed form.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Hypergeometric};

use crate::conditional::composition::{draw_bars_uniform, Composition, CompositionSpec};
use crate::error::{Error, Result};

/// Draw uniformly from all compositions of `t` into `n` parts.
///
/// Under an i.i.d. geometric null the conditional law of the sample given
/// its sum is uniform on this set, so this is the resampling step behind
/// every conditional p-value in the crate.
pub fn sample_conditional_geometric<R: Rng + ?Sized>(
    spec: CompositionSpec,
    rng: &mut R,
) -> Composition {
    let mut parts = Vec::with_capacity(spec.n);
    sample_conditional_geometric_into(spec, &mut parts, rng);
    Composition(parts)
}

/// Allocation-free variant: writes the composition into `parts`.
pub fn sample_conditional_geometric_into<R: Rng + ?Sized>(
    spec: CompositionSpec,
    parts: &mut Vec<u64>,
    rng: &mut R,
) {
    parts.clear();
    if spec.n == 1 {
        parts.push(spec.t);
        return;
    }
    let bars = draw_bars_uniform(spec, rng);
    let k = bars.positions();
    parts.push(k[0] - 1);
    for i in 1..spec.n - 1 {
        parts.push(k[i] - k[i - 1] - 1);
    }
    parts.push(spec.t - (k[spec.n - 2] - (spec.n as u64 - 1)));
    debug_assert_eq!(parts.iter().sum::<u64>(), spec.t);
}

/// Conditional sample for independent NB(r_i, p) observations given their
/// sum.
///
/// Each NB(r_i, p) is a sum of r_i geometric variables, so a uniform
/// composition of `t` into R = sum r_i parts, aggregated over consecutive
/// blocks of length r_i, has exactly the conditional negative binomial law
/// with pmf proportional to prod C(y_i + r_i - 1, y_i).
pub fn sample_conditional_negbinomial<R: Rng + ?Sized>(
    r: &[u64],
    t: u64,
    rng: &mut R,
) -> Result<Composition> {
    if r.is_empty() {
        return Err(Error::InvalidParameter("r list must be non-empty".into()));
    }
    if r.contains(&0) {
        return Err(Error::InvalidParameter(
            "every r_i must be at least 1".into(),
        ));
    }
    let total: u64 = r.iter().sum();
    let spec = CompositionSpec::new(total as usize, t)?;
    let fine = sample_conditional_geometric(spec, rng);
    let mut parts = Vec::with_capacity(r.len());
    let mut offset = 0usize;
    for &ri in r {
        let block = &fine.parts()[offset..offset + ri as usize];
        parts.push(block.iter().sum());
        offset += ri as usize;
    }
    debug_assert_eq!(parts.iter().sum::<u64>(), t);
    Ok(Composition(parts))
}

/// Conditional sample for independent Poisson(a_i * lambda) observations
/// given their sum: multinomial with cell probabilities a_i / sum a_j,
/// drawn as a chain of binomials over the remaining total.
pub fn sample_conditional_poisson<R: Rng + ?Sized>(
    weights: &[f64],
    t: u64,
    rng: &mut R,
) -> Result<Composition> {
    if weights.is_empty() {
        return Err(Error::InvalidParameter("weights must be non-empty".into()));
    }
    if weights.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter(
            "weights must be positive and finite".into(),
        ));
    }
    let mut remaining_weight: f64 = weights.iter().sum();
    let mut remaining = t;
    let mut parts = Vec::with_capacity(weights.len());
    for (i, &a) in weights.iter().enumerate() {
        if i + 1 == weights.len() {
            parts.push(remaining);
            break;
        }
        if remaining == 0 {
            parts.push(0);
            continue;
        }
        let p = (a / remaining_weight).min(1.0);
        let draw = Binomial::new(remaining, p)
            .expect("binomial parameters are valid by construction")
            .sample(rng);
        parts.push(draw);
        remaining -= draw;
        remaining_weight -= a;
    }
    debug_assert_eq!(parts.iter().sum::<u64>(), t);
    Ok(Composition(parts))
}

/// Conditional sample for independent Bin(m_i, p) observations given their
/// sum: multivariate hypergeometric, drawn one cell at a time.
pub fn sample_conditional_binomial<R: Rng + ?Sized>(
    sizes: &[u64],
    t: u64,
    rng: &mut R,
) -> Result<Composition> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("sizes must be non-empty".into()));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter(
            "every size m_i must be at least 1".into(),
        ));
    }
    let capacity: u64 = sizes.iter().sum();
    if t > capacity {
        return Err(Error::InfeasibleTotal { t, capacity });
    }
    let mut remaining_capacity = capacity;
    let mut remaining = t;
    let mut parts = Vec::with_capacity(sizes.len());
    for (i, &m) in sizes.iter().enumerate() {
        if i + 1 == sizes.len() {
            parts.push(remaining);
            break;
        }
        // x_i ~ Hypergeometric(total = remaining_capacity, successes = m_i,
        // draws = remaining).
        let draw = Hypergeometric::new(remaining_capacity, m, remaining)
            .expect("hypergeometric parameters are valid by construction")
            .sample(rng);
        parts.push(draw);
        remaining -= draw;
        remaining_capacity -= m;
    }
    debug_assert_eq!(parts.iter().sum::<u64>(), t);
    Ok(Composition(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditional::composition::{bars_to_composition, enumerate_compositions};
    use crate::dist::special::{binomial_coefficient, ln_binomial};
    use crate::rng::stream_rng;
    use std::collections::HashMap;

    fn frequency_map(draws: impl Iterator<Item = Vec<u64>>) -> HashMap<Vec<u64>, u64> {
        let mut map = HashMap::new();
        for d in draws {
            *map.entry(d).or_insert(0) += 1;
        }
        map
    }

    #[test]
    fn single_part_is_point_mass() {
        let mut rng = stream_rng(1, 0);
        let spec = CompositionSpec::new(1, 9).unwrap();
        assert_eq!(sample_conditional_geometric(spec, &mut rng).parts(), &[9]);
    }

    #[test]
    fn every_draw_sums_to_t_at_real_data_size() {
        let spec = CompositionSpec::new(100, 175).unwrap();
        let mut rng = stream_rng(2, 0);
        for _ in 0..200 {
            let x = sample_conditional_geometric(spec, &mut rng);
            assert_eq!(x.sum(), 175);
            assert_eq!(x.parts().len(), 100);
        }
    }

    #[test]
    fn negbinomial_unit_blocks_reduce_to_geometric() {
        // r = (1,1,1) aggregates blocks of size one, so the two samplers walk
        // the same code path and must agree draw for draw.
        let spec = CompositionSpec::new(3, 5).unwrap();
        let mut rng_a = stream_rng(3, 0);
        let mut rng_b = stream_rng(3, 0);
        for _ in 0..100 {
            let direct = sample_conditional_geometric(spec, &mut rng_a);
            let blocked = sample_conditional_negbinomial(&[1, 1, 1], 5, &mut rng_b).unwrap();
            assert_eq!(direct, blocked);
        }
    }

    #[test]
    fn negbinomial_zero_total() {
        let mut rng = stream_rng(4, 0);
        let y = sample_conditional_negbinomial(&[5, 5], 0, &mut rng).unwrap();
        assert_eq!(y.parts(), &[0, 0]);
    }

    #[test]
    fn negbinomial_matches_exact_conditional_pmf() {
        // P(Y = y | sum = t) = prod C(y_i + r_i - 1, y_i) / C(t + R - 1, t);
        // for r = (2,1), t = 2 the three states have probabilities
        // (1/2, 1/3, 1/6).
        let r = [2u64, 1];
        let t = 2u64;
        let big_r: u64 = r.iter().sum();
        let denominator = binomial_coefficient(t + big_r - 1, t);
        let mut expected = HashMap::new();
        for y0 in 0..=t {
            let y1 = t - y0;
            let mass = binomial_coefficient(y0 + r[0] - 1, y0)
                * binomial_coefficient(y1 + r[1] - 1, y1)
                / denominator;
            expected.insert(vec![y0, y1], mass);
        }
        assert!((expected[&vec![2, 0]] - 0.5).abs() < 1e-12);
        assert!((expected[&vec![1, 1]] - 1.0 / 3.0).abs() < 1e-12);
        assert!((expected[&vec![0, 2]] - 1.0 / 6.0).abs() < 1e-12);

        let draws = 200_000u64;
        let mut rng = stream_rng(5, 0);
        let freq = frequency_map((0..draws).map(|_| {
            sample_conditional_negbinomial(&r, t, &mut rng)
                .unwrap()
                .parts()
                .to_vec()
        }));
        for (state, mass) in &expected {
            let observed = *freq.get(state).unwrap_or(&0) as f64 / draws as f64;
            let se = (mass * (1.0 - mass) / draws as f64).sqrt();
            assert!(
                (observed - mass).abs() < 5.0 * se,
                "state {:?}: observed {observed}, expected {mass}",
                state
            );
        }
    }

    #[test]
    fn negbinomial_block_formula_agrees_with_block_sums() {
        // The closed-form y_i = k_{r_1+..+r_i} - k_{r_1+..+r_{i-1}} - r_i
        // applied to the drawn bars must reproduce the block-aggregated
        // composition.
        let r = [3u64, 2, 4];
        let t = 11u64;
        let big_r: u64 = r.iter().sum();
        let spec = CompositionSpec::new(big_r as usize, t).unwrap();
        let mut rng = stream_rng(6, 0);
        for _ in 0..200 {
            let bars = draw_bars_uniform(spec, &mut rng);
            let k = bars.positions();
            let composition = bars_to_composition(&bars, spec).unwrap();

            let mut from_blocks = Vec::new();
            let mut offset = 0usize;
            for &ri in &r {
                from_blocks.push(
                    composition.parts()[offset..offset + ri as usize]
                        .iter()
                        .sum::<u64>(),
                );
                offset += ri as usize;
            }

            let mut from_bars = Vec::new();
            let mut cum = 0u64;
            let mut prev_k = 0u64;
            for (i, &ri) in r.iter().enumerate() {
                cum += ri;
                if i + 1 == r.len() {
                    from_bars.push(t + big_r - ri - prev_k);
                } else {
                    from_bars.push(k[cum as usize - 1] - prev_k - ri);
                    prev_k = k[cum as usize - 1];
                }
            }
            assert_eq!(from_blocks, from_bars);
        }
    }

    #[test]
    fn poisson_equal_weights_marginal_is_binomial() {
        // n = 2 equal weights: first cell ~ Binomial(10, 1/2).
        let draws = 200_000u64;
        let mut rng = stream_rng(7, 0);
        let mut counts = [0u64; 11];
        for _ in 0..draws {
            let x = sample_conditional_poisson(&[1.0, 1.0], 10, &mut rng).unwrap();
            counts[x.parts()[0] as usize] += 1;
        }
        for (k, &c) in counts.iter().enumerate() {
            let mass = (ln_binomial(10, k as u64) + 10.0 * 0.5f64.ln()).exp();
            let observed = c as f64 / draws as f64;
            let se = (mass * (1.0 - mass) / draws as f64).sqrt();
            assert!(
                (observed - mass).abs() < 5.0 * se,
                "k = {k}: observed {observed}, expected {mass}"
            );
        }
    }

    #[test]
    fn poisson_zero_total_and_point_probability() {
        let mut rng = stream_rng(8, 0);
        let x = sample_conditional_poisson(&[2.0, 5.0, 1.0], 0, &mut rng).unwrap();
        assert_eq!(x.parts(), &[0, 0, 0]);

        // Weights (1,3), t = 4: P((0,4)) = (3/4)^4 = 81/256.
        let mass = 81.0 / 256.0;
        let draws = 200_000u64;
        let mut hits = 0u64;
        for _ in 0..draws {
            let x = sample_conditional_poisson(&[1.0, 3.0], 4, &mut rng).unwrap();
            if x.parts() == [0, 4] {
                hits += 1;
            }
        }
        let observed = hits as f64 / draws as f64;
        let se = (mass * (1.0 - mass) / draws as f64).sqrt();
        assert!((observed - mass).abs() < 5.0 * se, "observed {observed}");
    }

    #[test]
    fn binomial_cases() {
        let mut rng = stream_rng(9, 0);

        // Single part: point mass at t.
        let x = sample_conditional_binomial(&[7], 4, &mut rng).unwrap();
        assert_eq!(x.parts(), &[4]);

        // Saturated: every cell at its size.
        let x = sample_conditional_binomial(&[5, 5], 10, &mut rng).unwrap();
        assert_eq!(x.parts(), &[5, 5]);

        // Infeasible total.
        assert!(matches!(
            sample_conditional_binomial(&[2, 2], 5, &mut rng),
            Err(Error::InfeasibleTotal { t: 5, capacity: 4 })
        ));

        // m = (2,2), t = 2: P((1,1)) = C(2,1)C(2,1)/C(4,2) = 4/6.
        let draws = 200_000u64;
        let mut hits = 0u64;
        for _ in 0..draws {
            let x = sample_conditional_binomial(&[2, 2], 2, &mut rng).unwrap();
            if x.parts() == [1, 1] {
                hits += 1;
            }
        }
        let mass = 4.0 / 6.0;
        let observed = hits as f64 / draws as f64;
        let se = (mass * (1.0 - mass) / draws as f64).sqrt();
        assert!((observed - mass).abs() < 5.0 * se, "observed {observed}");
    }

    #[test]
    fn geometric_uniformity_small_case() {
        // n = 3, t = 3: all 10 compositions equally likely. The heavier
        // chi-square checks live in the acceptance suite.
        let spec = CompositionSpec::new(3, 3).unwrap();
        let states = enumerate_compositions(spec);
        assert_eq!(states.len(), 10);
        let draws = 200_000u64;
        let mut rng = stream_rng(10, 0);
        let freq = frequency_map((0..draws).map(|_| {
            sample_conditional_geometric(spec, &mut rng)
                .parts()
                .to_vec()
        }));
        let se = (0.1 * 0.9 / draws as f64).sqrt();
        for state in &states {
            let observed = *freq.get(state.parts()).unwrap_or(&0) as f64 / draws as f64;
            assert!(
                (observed - 0.1).abs() < 5.0 * se,
                "state {:?}: observed {observed}",
                state.parts()
            );
        }
    }
}
