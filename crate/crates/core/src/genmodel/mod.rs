//! Power-law weight sequences and rank-1 random graph generators.
//!
//! Generators sit behind the [`Generator`] trait and are looked up by name in
//! [`registry`]. Each produces a [`Multigraph`] (pre-collapse edge
//! multiplicities); [`generate`] collapses it and keeps the giant component.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

mod cm;
mod discrete;
mod rank1;

pub use cm::ConfigurationModel;
pub use rank1::{ChungLu, NorrosReittu};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Cm,
    Cl,
    Nr,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Cm => "cm",
            ModelKind::Cl => "cl",
            ModelKind::Nr => "nr",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cm" => Ok(ModelKind::Cm),
            "cl" => Ok(ModelKind::Cl),
            "nr" => Ok(ModelKind::Nr),
            _ => Err(Error::Unknown { kind: "model", name: s.into() }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WeightMode {
    #[default]
    #[serde(rename = "deterministic-quantile")]
    Quantile,
    #[serde(rename = "iid-sample")]
    Iid,
}

impl std::str::FromStr for WeightMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deterministic-quantile" | "quantile" => Ok(WeightMode::Quantile),
            "iid-sample" | "iid" => Ok(WeightMode::Iid),
            _ => Err(Error::Unknown { kind: "weight mode", name: s.into() }),
        }
    }
}

/// Everything needed to reproduce a generated graph bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: usize,
    pub beta: f64,
    #[serde(default)]
    pub weight_mode: WeightMode,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, n: usize, beta: f64, seed: u64) -> Self {
        ModelSpec { kind, n, beta, weight_mode: WeightMode::Quantile, seed }
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.n, self.beta)
    }
}

fn check_params(n: usize, beta: f64) -> Result<()> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::DegreeDistributionUndefined(beta));
    }
    if n < 2 {
        return Err(Error::param(format!("n must be at least 2, got {n}")));
    }
    if n > u32::MAX as usize - 1 {
        return Err(Error::param("n exceeds 32-bit vertex ids"));
    }
    Ok(())
}

/// Vertex weights, nonincreasing, with their sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSequence {
    pub weights: Vec<f64>,
    pub total_m: f64,
}

impl WeightSequence {
    /// Sorts `weights` into nonincreasing order.
    pub fn new(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::param("weights must be positive and finite"));
        }
        weights.sort_by(|a, b| b.total_cmp(a));
        let total_m = weights.iter().sum();
        Ok(WeightSequence { weights, total_m })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Largest iid weight; keeps half-edge totals within 64-bit counts.
pub const IID_WEIGHT_CAP: f64 = (1u64 << 50) as f64;

/// Power-law weights with tail exponent `beta`.
///
/// Quantile mode: `w_i = (n/i)^(1/(beta-1))` for `i = 1..n`. Iid mode: Pareto
/// draws with `P(w > d) = d^-(beta-1)` for `d >= 1`, capped at [`IID_WEIGHT_CAP`].
pub fn power_law_weights(n: usize, beta: f64, mode: WeightMode, seed: u64) -> Result<WeightSequence> {
    check_params(n, beta)?;
    let inv = 1.0 / (beta - 1.0);
    let weights: Vec<f64> = match mode {
        WeightMode::Quantile => (1..=n).map(|i| (n as f64 / i as f64).powf(inv)).collect(),
        WeightMode::Iid => {
            use rand::Rng;
            let mut r = rng::seeded(seed);
            (0..n)
                .map(|_| {
                    let u = 1.0 - r.random::<f64>();
                    u.powf(-inv).min(IID_WEIGHT_CAP)
                })
                .collect()
        }
    };
    WeightSequence::new(weights)
}

/// Undirected multigraph as aggregated multiplicities `(u, v, count)` with `u <= v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(u32, u32, u64)>,
}

impl Multigraph {
    /// Degrees counting multiplicity; a self-loop adds two.
    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.n];
        for &(u, v, c) in &self.edges {
            d[u as usize] += c;
            d[v as usize] += c;
        }
        d
    }

    /// Total number of edges counting multiplicity and self-loops.
    pub fn edge_count(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// The simple graph on all `n` vertices.
    pub fn collapse(&self) -> Graph {
        let pairs: Vec<(u32, u32)> = self.edges.iter().map(|&(u, v, _)| (u, v)).collect();
        Graph::with_vertices(self.n, &pairs)
    }

    /// Sorts and merges repeated pairs.
    pub(crate) fn from_pairs(n: usize, mut pairs: Vec<(u32, u32)>) -> Self {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        let mut edges: Vec<(u32, u32, u64)> = Vec::new();
        for (u, v) in pairs {
            match edges.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += 1,
                _ => edges.push((u, v, 1)),
            }
        }
        Multigraph { n, edges }
    }
}

/// A random graph model driven by a weight sequence.
pub trait Generator: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    /// Samples the multigraph before collapsing; vertex `i` carries `ws.weights[i]`.
    fn sample(&self, ws: &WeightSequence, seed: u64) -> Multigraph;
}

static GENERATORS: [&dyn Generator; 3] = [&ConfigurationModel, &ChungLu, &NorrosReittu];

/// All registered generators.
pub fn registry() -> &'static [&'static dyn Generator] {
    &GENERATORS
}

pub fn generator(name: &str) -> Result<&'static dyn Generator> {
    GENERATORS
        .iter()
        .copied()
        .find(|g| g.name().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Unknown { kind: "model", name: name.into() })
}

/// A generated graph restricted to its giant component.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// Vertex of the raw graph (weight index) for each giant-component vertex.
    pub raw_ids: Vec<u32>,
    pub raw_n: usize,
    pub raw_m: usize,
}

/// Giant component of the collapsed multigraph.
pub fn giant(multi: &Multigraph) -> Generated {
    let raw = multi.collapse();
    let (graph, map) = raw.giant_component();
    let mut raw_ids = vec![0u32; graph.n()];
    for (old, &new) in map.iter().enumerate() {
        if new != crate::graph::NO_VERTEX {
            raw_ids[new as usize] = old as u32;
        }
    }
    Generated { graph, raw_ids, raw_n: raw.n(), raw_m: raw.m() }
}

/// Seed for edge sampling, kept apart from the weight seed.
fn edge_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Collapsed graph on all `n` vertices, before giant-component extraction.
pub fn generate_raw(spec: &ModelSpec) -> Result<Multigraph> {
    spec.validate()?;
    let ws = power_law_weights(spec.n, spec.beta, spec.weight_mode, spec.seed)?;
    let model = generator(spec.kind.name())?;
    Ok(model.sample(&ws, edge_seed(spec.seed)))
}

/// Generates the graph described by `spec` and keeps its giant component.
pub fn generate(spec: &ModelSpec) -> Result<Generated> {
    Ok(giant(&generate_raw(spec)?))
}

pub fn gen_configuration_model(ws: &WeightSequence, seed: u64) -> Graph {
    giant(&ConfigurationModel.sample(ws, seed)).graph
}

pub fn gen_chung_lu(ws: &WeightSequence, seed: u64) -> Graph {
    giant(&ChungLu.sample(ws, seed)).graph
}

pub fn gen_norros_reittu(ws: &WeightSequence, seed: u64) -> Graph {
    giant(&NorrosReittu.sample(ws, seed)).graph
}
