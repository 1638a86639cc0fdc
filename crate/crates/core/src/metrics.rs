//! Neighborhood growth (τ, T̃), eccentricities, farness and fitted constants.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{self, LineFit};
use crate::graph::{tau_from_levels, Bfs, Graph};
use crate::rng;

/// Level sizes γ_ℓ(s) of one BFS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborhoodProfile {
    pub source: u32,
    pub level_sizes: Vec<usize>,
    /// n_ℓ(s) = γ_0 + ... + γ_ℓ.
    pub cumulative: Vec<usize>,
}

impl NeighborhoodProfile {
    pub fn new(g: &Graph, s: u32) -> Result<Self> {
        g.check_vertex(s as u64)?;
        let mut b = Bfs::new(g.n());
        b.run(g, s);
        Ok(Self::from_levels(s, b.last_level_sizes()))
    }

    pub fn from_levels(source: u32, level_sizes: Vec<usize>) -> Self {
        let cumulative = level_sizes
            .iter()
            .scan(0usize, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        NeighborhoodProfile { source, level_sizes, cumulative }
    }

    /// τ_s(k) = min{ℓ : γ_ℓ > k}, or `None` when no level exceeds `k`.
    pub fn tau(&self, k: u64) -> Option<u32> {
        tau_from_levels(&self.level_sizes, k)
    }

    pub fn eccentricity(&self) -> u32 {
        self.level_sizes.len() as u32 - 1
    }
}

pub fn neighborhood_profile(g: &Graph, s: u32) -> Result<NeighborhoodProfile> {
    NeighborhoodProfile::new(g, s)
}

/// The integer threshold ⌈n^x⌉.
pub fn threshold(n: usize, x: f64) -> u64 {
    (n as f64).powf(x).ceil() as u64
}

/// τ_s(⌈n^x⌉) per sampled vertex and the per-degree means T̃_d(n^x).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauTable {
    pub n: usize,
    pub x_grid: Vec<f64>,
    pub thresholds: Vec<u64>,
    pub vertices: Vec<u32>,
    pub degrees: Vec<usize>,
    /// `tau[i][j]`: vertex `vertices[j]` at `x_grid[i]`.
    pub tau: Vec<Vec<Option<u32>>>,
    /// Per x, the mean τ over vertices of each degree, NONE values excluded.
    pub class_means: Vec<BTreeMap<usize, f64>>,
}

impl TauTable {
    pub fn x_index(&self, x: f64) -> Result<usize> {
        self.x_grid
            .iter()
            .position(|&g| (g - x).abs() < 1e-12)
            .ok_or_else(|| Error::param(format!("x = {x} not in the table's grid")))
    }

    /// T̃_d at grid index `xi`.
    pub fn t_tilde(&self, xi: usize, d: usize) -> Option<f64> {
        self.class_means[xi].get(&d).copied()
    }

    /// τ_s − T̃_deg(s) for each sampled vertex with a defined τ.
    pub fn deviations(&self, xi: usize) -> Vec<f64> {
        self.tau[xi]
            .iter()
            .zip(&self.degrees)
            .filter_map(|(t, &d)| Some(t.as_ref().copied()? as f64 - self.t_tilde(xi, d)?))
            .collect()
    }

    /// CSV with columns vertex, degree, then one τ column per x; NONE is empty.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["vertex".to_string(), "degree".to_string()];
        header.extend(self.x_grid.iter().map(|x| format!("tau_{x}")));
        let io = |e: csv::Error| Error::io("csv", std::io::Error::other(e));
        w.write_record(&header).map_err(io)?;
        for (j, (&v, &d)) in self.vertices.iter().zip(&self.degrees).enumerate() {
            let mut row = vec![v.to_string(), d.to_string()];
            row.extend(self.tau.iter().map(|col| col[j].map_or(String::new(), |t| t.to_string())));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::io("csv", e))
    }
}

/// Builds a [`TauTable`] over `sample` (default: every vertex).
pub fn tau_table(g: &Graph, x_grid: &[f64], sample: Option<&[u32]>) -> Result<TauTable> {
    if x_grid.is_empty() || x_grid.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::param("x values must lie in (0, 1)"));
    }
    let vertices: Vec<u32> = match sample {
        Some(s) => s.to_vec(),
        None => (0..g.n() as u32).collect(),
    };
    if vertices.is_empty() {
        return Err(Error::param("empty vertex sample"));
    }
    for &v in &vertices {
        g.check_vertex(v as u64)?;
    }
    let thresholds: Vec<u64> = x_grid.iter().map(|&x| threshold(g.n(), x)).collect();
    let kmax = *thresholds.iter().max().unwrap();
    let rows: Vec<Vec<Option<u32>>> = vertices
        .par_iter()
        .map_init(
            || (Bfs::new(g.n()), Vec::new()),
            |(bfs, levels), &s| {
                bfs.levels_until(g, s, kmax, levels);
                thresholds.iter().map(|&k| tau_from_levels(levels, k)).collect()
            },
        )
        .collect();
    let degrees: Vec<usize> = vertices.iter().map(|&v| g.degree(v)).collect();
    let tau: Vec<Vec<Option<u32>>> = (0..x_grid.len()).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
    let class_means = tau
        .iter()
        .map(|col| {
            let mut acc: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
            for (t, &d) in col.iter().zip(&degrees) {
                if let Some(t) = t {
                    let e = acc.entry(d).or_default();
                    e.0 += *t as u64;
                    e.1 += 1;
                }
            }
            acc.into_iter().map(|(d, (s, c))| (d, s as f64 / c as f64)).collect()
        })
        .collect();
    Ok(TauTable { n: g.n(), x_grid: x_grid.to_vec(), thresholds, vertices, degrees, tau, class_means })
}

pub fn eccentricity(g: &Graph, s: u32) -> Result<u32> {
    Ok(g.bfs(s)?.eccentricity())
}

/// Every eccentricity by one BFS per vertex.
pub fn all_eccentricities(g: &Graph) -> Vec<u32> {
    (0..g.n() as u32)
        .into_par_iter()
        .map_init(
            || Bfs::new(g.n()),
            |b, s| {
                b.run(g, s);
                b.last_eccentricity()
            },
        )
        .collect()
}

/// Exact diameter of a connected graph by all-pairs BFS.
pub fn exact_diameter(g: &Graph) -> u32 {
    all_eccentricities(g).into_iter().max().unwrap_or(0)
}

/// Exact radius of a connected graph by all-pairs BFS.
pub fn exact_radius(g: &Graph) -> u32 {
    all_eccentricities(g).into_iter().min().unwrap_or(0)
}

/// φ(s) = Σ_t dist(s, t) over reachable t.
pub fn farness(g: &Graph, s: u32) -> Result<u64> {
    Ok(g.bfs(s)?.farness())
}

/// 1 / φ(s); zero for an isolated vertex.
pub fn closeness(g: &Graph, s: u32) -> Result<f64> {
    let f = farness(g, s)?;
    Ok(if f == 0 { 0.0 } else { 1.0 / f as f64 })
}

/// Farness of every vertex.
pub fn all_farness(g: &Graph) -> Vec<u64> {
    farness_of(g, &(0..g.n() as u32).collect::<Vec<_>>())
}

/// Farness of each listed source, in order.
pub fn farness_of(g: &Graph, sources: &[u32]) -> Vec<u64> {
    sources
        .par_iter()
        .map_init(
            || Bfs::new(g.n()),
            |b, &s| {
                b.run(g, s);
                b.order().iter().map(|&v| b.dist()[v as usize] as u64).sum()
            },
        )
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AverageDistance {
    pub mean: f64,
    /// Standard error of the mean over sampled sources, with finite-population correction.
    pub std_error: f64,
    pub sample_size: usize,
}

pub fn default_sample_size(n: usize) -> usize {
    n.min(1000)
}

/// Mean farness of a seeded uniform source sample divided by `n − 1`.
pub fn average_distance(g: &Graph, sample_size: usize, seed: u64) -> Result<AverageDistance> {
    let n = g.n();
    if n < 2 {
        return Err(Error::param("average distance needs at least two vertices"));
    }
    if sample_size == 0 || sample_size > n {
        return Err(Error::param(format!("sample size {sample_size} outside 1..={n}")));
    }
    let sources: Vec<u32> = if sample_size == n {
        (0..n as u32).collect()
    } else {
        let mut s = rng::sample_distinct(&mut rng::seeded(seed), n, sample_size);
        s.sort_unstable();
        s
    };
    let far = farness_of(g, &sources);
    let k = far.len() as f64;
    let scale = (n - 1) as f64;
    let mean = far.iter().sum::<u64>() as f64 / (k * scale);
    let std_error = if far.len() > 1 {
        let var = far.iter().map(|&f| (f as f64 / scale - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k * ((n as f64 - k) / (n as f64 - 1.0))).sqrt()
    } else {
        f64::NAN
    };
    Ok(AverageDistance { mean, std_error, sample_size })
}

/// C = 2·avg / (D − avg).
pub fn constant_c(diameter: u32, avg: f64) -> Result<f64> {
    let d = diameter as f64;
    if d <= avg {
        return Err(Error::FormulaUndefined(format!("diameter {diameter} <= average distance {avg}")));
    }
    Ok(2.0 * avg / (d - avg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantEstimate {
    #[serde(rename = "C")]
    pub c: f64,
    pub diameter: u32,
    pub average_distance: AverageDistance,
}

/// The constant C with the diameter certified by ExactSumSweep.
pub fn estimate_constant_c(g: &Graph, sample_size: usize, seed: u64) -> Result<ConstantEstimate> {
    let avg = average_distance(g, sample_size, seed)?;
    let diameter = crate::algos::exact_sumsweep::exact_sumsweep(g, &Default::default()).0.value;
    Ok(ConstantEstimate { c: constant_c(diameter as u32, avg.mean)?, diameter: diameter as u32, average_distance: avg })
}

/// Log-linear fit of the deviation tail #{s : dev_s ≥ k}, k ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailFit {
    /// e^slope.
    pub c: f64,
    pub fit: LineFit,
    /// `(k, #{dev ≥ k})` for each nonempty bucket.
    pub counts: Vec<(u32, u64)>,
}

/// Fits the tail of `deviations`; needs at least three nonempty buckets.
pub fn tail_fit(deviations: &[f64]) -> Result<TailFit> {
    let max = deviations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut counts = Vec::new();
    let mut k = 1u32;
    while (k as f64) <= max {
        // Deviations are rationals; the epsilon absorbs rounding in class means.
        let c = deviations.iter().filter(|&&d| d >= k as f64 - 1e-9).count() as u64;
        if c > 0 {
            counts.push((k, c));
        }
        k += 1;
    }
    if counts.len() < 3 {
        return Err(Error::InsufficientBuckets(format!("{} nonempty buckets at k >= 1, need 3", counts.len())));
    }
    let xs: Vec<f64> = counts.iter().map(|c| c.0 as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|c| (c.1 as f64).ln()).collect();
    let fit = fit::least_squares(&xs, &ys).expect("three distinct k");
    Ok(TailFit { c: fit.slope.exp(), fit, counts })
}

/// Estimates c from τ_s(n^x) − T̃_deg(s)(n^x).
pub fn estimate_c_tail(table: &TauTable, x: f64) -> Result<TailFit> {
    tail_fit(&table.deviations(table.x_index(x)?))
}

/// Measured d̃_avg = T̃_1(n^x) + T̃_1(n^{1−x}) − 1 from a table holding both x and 1−x.
pub fn measured_d_avg(table: &TauTable, x: f64) -> Result<f64> {
    let a = table.x_index(x)?;
    let b = table.x_index(1.0 - x).or_else(|_| table.x_index(x))?;
    let t1 = |i| table.t_tilde(i, 1).ok_or_else(|| Error::param("no degree-1 vertices in sample"));
    Ok(t1(a)? + t1(b)? - 1.0)
}
