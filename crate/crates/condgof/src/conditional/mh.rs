//! Metropolis-Hastings conditional sampler for power-series nulls.
//!
//! For a power-series family with coefficient function `a`, the conditional
//! law of a sample given its sum is proportional to `prod a(x_i)` over the
//! compositions of `t`. Proposals are drawn uniformly on that set (the
//! geometric conditional sampler), so the chain is an independence sampler
//! with acceptance probability `min(1, prod a(y_i) / prod a(x_i))`, computed
//! in log space.

use rand::Rng;

use crate::conditional::composition::{Composition, CompositionSpec};
use crate::conditional::samplers::sample_conditional_geometric_into;
use crate::error::{Error, Result};

pub const DEFAULT_BURN_IN: u64 = 1000;
pub const DEFAULT_THIN: u64 = 1;

/// Independence-proposal Metropolis-Hastings chain on the compositions of
/// `t` into `n` parts, with stationary mass proportional to
/// `prod a(x_i)`. The coefficient function is supplied as `log a(x)`
/// (negative infinity where `a(x) = 0`).
pub struct MhConditionalSampler<F>
where
    F: Fn(u64) -> f64,
{
    log_coefficient: F,
    spec: CompositionSpec,
    state: Vec<u64>,
    state_log_mass: f64,
    proposal: Vec<u64>,
    proposals: u64,
    accepted: u64,
}

impl<F> MhConditionalSampler<F>
where
    F: Fn(u64) -> f64,
{
    /// Initialize the chain at a uniform draw and run `burn_in` steps.
    pub fn new<R: Rng + ?Sized>(
        log_coefficient: F,
        spec: CompositionSpec,
        burn_in: u64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut state = Vec::with_capacity(spec.n);
        sample_conditional_geometric_into(spec, &mut state, rng);
        let state_log_mass = log_mass(&log_coefficient, &state)?;
        let mut chain = Self {
            log_coefficient,
            spec,
            state,
            state_log_mass,
            proposal: Vec::with_capacity(spec.n),
            proposals: 0,
            accepted: 0,
        };
        for _ in 0..burn_in {
            chain.step(rng)?;
        }
        Ok(chain)
    }

    /// One Metropolis-Hastings transition. Returns the (possibly unchanged)
    /// current state.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<&[u64]> {
        sample_conditional_geometric_into(self.spec, &mut self.proposal, rng);
        let proposal_log_mass = log_mass(&self.log_coefficient, &self.proposal)?;
        self.proposals += 1;
        let log_ratio = proposal_log_mass - self.state_log_mass;
        if log_ratio >= 0.0 || rng.random::<f64>() < log_ratio.exp() {
            std::mem::swap(&mut self.state, &mut self.proposal);
            self.state_log_mass = proposal_log_mass;
            self.accepted += 1;
        }
        Ok(&self.state)
    }

    pub fn state(&self) -> &[u64] {
        &self.state
    }

    /// Fraction of proposals accepted so far (includes burn-in).
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }

    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }
}

fn log_mass<F: Fn(u64) -> f64>(log_coefficient: &F, parts: &[u64]) -> Result<f64> {
    let mut total = 0.0;
    for &x in parts {
        let term = log_coefficient(x);
        if term == f64::NEG_INFINITY {
            // The uniform proposal reached a state outside the support, so
            // the coefficient function violates the positivity precondition.
            return Err(Error::ZeroCoefficient { x });
        }
        total += term;
    }
    Ok(total)
}

/// Draw `count` compositions from the chain, keeping every `thin`-th state
/// after `burn_in` initial steps.
pub fn sample_conditional_powerseries_mh<F, R>(
    log_coefficient: F,
    spec: CompositionSpec,
    burn_in: u64,
    thin: u64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Composition>>
where
    F: Fn(u64) -> f64,
    R: Rng + ?Sized,
{
    let thin = thin.max(1);
    let mut chain = MhConditionalSampler::new(log_coefficient, spec, burn_in, rng)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        for _ in 0..thin {
            chain.step(rng)?;
        }
        out.push(Composition(chain.state().to_vec()));
    }
    Ok(out)
}
