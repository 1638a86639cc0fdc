//! BFS-based diameter, radius and top-k closeness algorithms.
//!
//! Every algorithm performs its BFSes through [`CountingBfs`], so the
//! reported `bfs_count` is the number of traversals actually run.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph, UNREACHED};

pub mod bcm;
pub mod exact_sumsweep;
pub mod ifub;
pub mod rw;
pub mod sampling;
pub mod sumsweep;
pub mod two_sweep;

/// Which quantity a result bounds or computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Diameter,
    Radius,
    Closeness,
}

/// Tunables shared by the registry; each algorithm reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    /// Source budget for sampling, round count for the SumSweep heuristic, list size for top-k.
    pub k: Option<usize>,
    pub start: Option<u32>,
    /// Start 2-Sweep from the highest-degree vertex instead of a random one.
    pub max_degree_start: bool,
    pub initial_k: usize,
    pub hub_period: usize,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params { k: None, start: None, max_degree_start: false, initial_k: 10, hub_period: 5, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoResult {
    pub algo: String,
    pub measure: Measure,
    pub value: u64,
    pub witnesses: Vec<u32>,
    pub bfs_count: u64,
    pub wall_time_ms: f64,
    pub params: Params,
    pub seed: Option<u64>,
    /// `(vertex, farness)` in rank order, for top-k closeness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<(u32, u64)>>,
}

impl AlgoResult {
    pub(crate) fn new(algo: &str, measure: Measure, value: u64, witnesses: Vec<u32>, bfs_count: u64) -> Self {
        AlgoResult {
            algo: algo.to_string(),
            measure,
            value,
            witnesses,
            bfs_count,
            wall_time_ms: 0.0,
            params: Params::default(),
            seed: None,
            ranking: None,
        }
    }

    fn stamped(mut self, params: &Params, seeded: bool, started: Instant) -> Self {
        self.params = params.clone();
        self.seed = seeded.then_some(params.seed);
        self.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }
}

/// A BFS whose invocations are tallied in a shared counter.
pub struct CountingBfs<'a> {
    bfs: Bfs,
    counter: &'a AtomicU64,
}

impl<'a> CountingBfs<'a> {
    pub fn new(n: usize, counter: &'a AtomicU64) -> Self {
        CountingBfs { bfs: Bfs::new(n), counter }
    }

    pub fn run(&mut self, g: &Graph, s: u32) -> &[u32] {
        self.counter.fetch_add(1, Ordering::Relaxed);
        self.bfs.run(g, s)
    }

    pub fn eccentricity(&self) -> u32 {
        self.bfs.last_eccentricity()
    }

    pub fn order(&self) -> &[u32] {
        self.bfs.order()
    }

    pub fn dist(&self) -> &[u32] {
        self.bfs.dist()
    }
}

pub(crate) fn count(c: &AtomicU64) -> u64 {
    c.load(Ordering::Relaxed)
}

/// Farthest reached vertex and its distance; ties go to the lowest id.
pub(crate) fn farthest(dist: &[u32]) -> (u32, u32) {
    let mut best = (0u32, 0u32);
    for (v, &d) in dist.iter().enumerate() {
        if d != UNREACHED && d > best.1 {
            best = (v as u32, d);
        }
    }
    best
}

/// Per-vertex eccentricity bounds accumulated from BFS sources.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundState {
    pub lower: Vec<u32>,
    pub upper: Vec<u32>,
    /// Largest eccentricity computed so far.
    pub d_l: u32,
    /// Smallest eccentricity computed so far.
    pub r_u: u32,
    pub processed: Vec<u32>,
    #[serde(skip)]
    is_processed: Vec<bool>,
}

impl BoundState {
    pub fn new(n: usize) -> Self {
        BoundState {
            lower: vec![0; n],
            upper: vec![u32::MAX; n],
            d_l: 0,
            r_u: u32::MAX,
            processed: Vec::new(),
            is_processed: vec![false; n],
        }
    }

    pub fn is_processed(&self, v: u32) -> bool {
        self.is_processed[v as usize]
    }

    /// Folds in the BFS from `s` with eccentricity `ecc`.
    ///
    /// By the triangle inequality `max(d, ecc - d) <= ecc(v) <= ecc + d` with `d = dist(s, v)`.
    pub fn absorb(&mut self, s: u32, dist: &[u32], ecc: u32) {
        for (v, &d) in dist.iter().enumerate() {
            self.lower[v] = self.lower[v].max(d.max(ecc - d));
            self.upper[v] = self.upper[v].min(ecc + d);
        }
        self.lower[s as usize] = ecc;
        self.upper[s as usize] = ecc;
        self.d_l = self.d_l.max(ecc);
        self.r_u = self.r_u.min(ecc);
        if !self.is_processed[s as usize] {
            self.is_processed[s as usize] = true;
            self.processed.push(s);
        }
    }

    /// No vertex can have eccentricity above `d_l`.
    pub fn diameter_certified(&self) -> bool {
        self.upper.iter().all(|&u| u <= self.d_l)
    }

    /// No vertex can have eccentricity below `r_u`.
    pub fn radius_certified(&self) -> bool {
        self.lower.iter().all(|&l| l >= self.r_u)
    }
}

pub(crate) fn require_connected(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::param("graph is not connected; run on its giant component"));
    }
    Ok(())
}

/// A registered algorithm.
pub trait Algorithm: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    /// Whether the result depends on `Params::seed`.
    fn seeded(&self) -> bool;

    /// Whether the returned values are exact rather than bounds.
    fn exact(&self) -> bool {
        false
    }

    fn execute(&self, g: &Graph, params: &Params) -> Result<Vec<AlgoResult>>;

    /// Runs on a connected graph and stamps results with parameters and wall time.
    fn run(&self, g: &Graph, params: &Params) -> Result<Vec<AlgoResult>> {
        require_connected(g)?;
        let started = Instant::now();
        let out = self.execute(g, params)?;
        Ok(out.into_iter().map(|r| r.stamped(params, self.seeded(), started)).collect())
    }
}

static REGISTRY: [&dyn Algorithm; 7] = [
    &sampling::Sampling,
    &two_sweep::TwoSweep,
    &rw::RwApprox,
    &sumsweep::SumSweepHeuristic,
    &ifub::IFub,
    &exact_sumsweep::ExactSumSweep,
    &bcm::BcmTopK,
];

pub fn registry() -> &'static [&'static dyn Algorithm] {
    &REGISTRY
}

pub fn algorithm(name: &str) -> Result<&'static dyn Algorithm> {
    REGISTRY
        .iter()
        .copied()
        .find(|a| a.name() == name)
        .ok_or_else(|| Error::Unknown { kind: "algorithm", name: name.to_string() })
}

pub(crate) fn default_k(params: &Params, fallback: usize) -> usize {
    params.k.unwrap_or(fallback)
}
