//! Rayon versions of the sampled computations. Work is split by substream
//! and results are combined in substream order, so every thread count gives
//! the sequential answer.

use rayon::prelude::*;
use sunflower_core::constructions::{self, WhiteCoverStats};
use sunflower_core::probability::{self, McParams, Method, ProbEstimate, Sampler};
use sunflower_core::reduction::{BadMassExperiment, BadMassSampler};
use sunflower_core::{rng, Bias, Rational, SetFamily};

pub fn monte_carlo(family: &SetFamily, alpha: &Bias, params: &McParams) -> ProbEstimate {
    let sampler = Sampler::new(family, alpha);
    let parts = rng::split_work(params.samples, params.substreams);
    let hits: u64 = parts
        .par_iter()
        .enumerate()
        .map(|(i, &n)| sampler.run_substream(params.seed, i as u32, n))
        .collect::<Vec<u64>>()
        .into_iter()
        .sum();
    ProbEstimate::sampled(hits, params)
}

pub fn satisfaction_probability(
    family: &SetFamily,
    alpha: &Bias,
    method: Method,
    params: &McParams,
) -> sunflower_core::Result<ProbEstimate> {
    match method {
        Method::MonteCarlo => Ok(monte_carlo(family, alpha, params)),
        Method::Auto => Ok(probability::auto_exact(family, alpha).unwrap_or_else(|| monte_carlo(family, alpha, params))),
        _ => probability::satisfaction_probability(family, alpha, method, params),
    }
}

pub fn bad_mass(sampler: &BadMassSampler, trials: u32, s_w_prime: &Rational) -> BadMassExperiment {
    let per_trial: Vec<u128> = (0..trials).into_par_iter().map(|t| sampler.trial(t)).collect();
    sampler.summarize(&per_trial, s_w_prime)
}

pub fn white_cover(family: &SetFamily, delta: &Bias, trials: u32, seed: u64) -> WhiteCoverStats {
    let threshold = constructions::white_cover_threshold(family, delta);
    let runs = (0..trials)
        .into_par_iter()
        .map(|t| constructions::white_cover_trial(family, delta, seed, t, threshold))
        .collect();
    constructions::summarize_white_cover(family, delta, seed, runs)
}
