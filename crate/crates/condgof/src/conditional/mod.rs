//! Exact sampling from the conditional distribution of a sample given its
//! sum, for geometric, negative binomial, Poisson and binomial nulls, plus a
//! Metropolis-Hastings sampler for general power-series nulls.

mod composition;
mod mh;
mod samplers;

pub use composition::{
    bars_to_composition, composition_to_bars, draw_bars_uniform, enumerate_compositions,
    BarPositions, Composition, CompositionSpec,
};
pub use mh::{
    sample_conditional_powerseries_mh, MhConditionalSampler, DEFAULT_BURN_IN, DEFAULT_THIN,
};
pub use samplers::{
    sample_conditional_binomial, sample_conditional_geometric, sample_conditional_geometric_into,
    sample_conditional_negbinomial, sample_conditional_poisson,
};
