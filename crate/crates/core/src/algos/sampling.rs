use std::sync::atomic::AtomicU64;

use rayon::prelude::*;

use super::{count, default_k, AlgoResult, Algorithm, CountingBfs, Measure, Params};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// Diameter lower bound: the largest eccentricity among random sources.
pub struct Sampling;

/// Default source budget ⌈n^0.3⌉.
pub fn default_budget(n: usize) -> usize {
    ((n as f64).powf(0.3).ceil() as usize).clamp(1, n.max(1))
}

impl Algorithm for Sampling {
    fn name(&self) -> &'static str {
        "sampling"
    }

    fn describe(&self) -> &'static str {
        "max eccentricity over k uniformly sampled sources"
    }

    fn seeded(&self) -> bool {
        true
    }

    fn execute(&self, g: &Graph, p: &Params) -> Result<Vec<AlgoResult>> {
        Ok(vec![sample_lower_bound(g, default_k(p, default_budget(g.n())), p.seed)?])
    }
}

/// Sources are drawn without replacement; their BFSes run in parallel.
pub fn sample_lower_bound(g: &Graph, k: usize, seed: u64) -> Result<AlgoResult> {
    if k == 0 || k > g.n() {
        return Err(Error::param(format!("sample size {k} outside 1..={}", g.n())));
    }
    let mut sources = rng::sample_distinct(&mut rng::seeded(seed), g.n(), k);
    sources.sort_unstable();
    let counter = AtomicU64::new(0);
    let ecc: Vec<u32> = sources
        .par_iter()
        .map_init(
            || CountingBfs::new(g.n(), &counter),
            |b, &s| {
                b.run(g, s);
                b.eccentricity()
            },
        )
        .collect();
    let (i, &value) = ecc.iter().enumerate().max_by_key(|&(i, &e)| (e, std::cmp::Reverse(i))).unwrap();
    Ok(AlgoResult::new("sampling", Measure::Diameter, value as u64, vec![sources[i]], count(&counter)))
}
