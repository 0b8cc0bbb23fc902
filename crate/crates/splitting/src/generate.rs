//! Parallel condition generation on top of the core's [`TaylorJob`].

use rayon::prelude::*;
use splitting_core::conditions::{
    assemble, condition_orders, Limits, PolySystem, SchemeShape, TaylorJob,
};
use splitting_core::freealg::CoefPoly;
use splitting_core::lyndon::lyndon_words;

use crate::error::Result;

/// Splits the multi-indices of `job` over `workers` chunks and merges the
/// partial sums; the result does not depend on `workers`.
pub fn run_job(job: &TaylorJob<'_>, workers: usize) -> Vec<CoefPoly> {
    let workers = workers.max(1);
    let parts: Vec<_> = (0..workers)
        .into_par_iter()
        .map(|w| job.partial(w, workers))
        .collect();
    job.finish(parts)
}

/// Default chunk count: a few per thread, so uneven chunks even out.
pub fn default_workers() -> usize {
    rayon::current_num_threads() * 4
}

pub fn order_conditions(
    p: usize,
    shape: &SchemeShape,
    limits: Limits,
    workers: usize,
) -> Result<PolySystem> {
    let mut jobs = Vec::new();
    for q in condition_orders(p, shape) {
        limits.check(shape, q)?;
        jobs.push(TaylorJob::new(shape, q, lyndon_words(shape.alphabet(), q)?)?);
    }
    let results = jobs.iter().map(|j| run_job(j, workers)).collect();
    Ok(assemble(p, shape, &jobs, results))
}
