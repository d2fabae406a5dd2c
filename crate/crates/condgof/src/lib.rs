//! Exact conditional goodness-of-fit tests for discrete distributions.
//!
//! The geometric null is the primary target: given a sample of non-negative
//! counts, the sum is sufficient, and conditionally on the sum the sample is
//! uniform over the compositions of `t` into `n` parts. Resampling that
//! conditional law exactly gives Monte Carlo p-values that are exact rather
//! than asymptotic.
//!
//! The crate provides
//!
//! - [`conditional`]: uniform composition sampling via the stars-and-bars
//!   bijection, exact conditional samplers for negative binomial, Poisson
//!   and binomial nulls, and a Metropolis-Hastings sampler for general
//!   power-series nulls;
//! - [`stats`]: the ten test statistics (quadratic and supremum EDF
//!   statistics plus likelihood-derived score statistics);
//! - [`dist`]: pmfs, samplers and maximum likelihood / moment estimators for
//!   the null and alternative families;
//! - [`engine`]: Monte Carlo conditional p-values, power studies and type I
//!   error studies with deterministic parallel execution;
//! - [`datasets`]: the bundled reference datasets used by the test suite and
//!   the command line front end.

// Parameter guards negate comparisons on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditional;
pub mod datasets;
pub mod dist;
pub mod engine;
pub mod error;
pub mod rng;
pub mod sample;
pub mod stats;

pub use error::{Error, Result};
pub use sample::Sample;
