//! Empirical checks of the four neighborhood-growth properties on one graph.
//!
//! Each check returns a [`PropertyReport`] whose verdicts can be recomputed
//! from its bucket counts and thresholds alone.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algos::exact_sumsweep::exact_sumsweep;
use crate::error::{Error, Result};
use crate::fit::{self, LineFit};
use crate::graph::{tau_from_levels, Bfs, Graph, PairDistance};
use crate::metrics::{self, threshold};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub observed: f64,
    /// `">="` or `"<="`.
    pub op: &'static str,
    pub threshold: f64,
    pub pass: bool,
}

impl Verdict {
    fn at_least(name: &str, observed: f64, threshold: f64) -> Self {
        Verdict { name: name.into(), observed, op: ">=", threshold, pass: observed >= threshold }
    }

    fn at_most(name: &str, observed: f64, threshold: f64) -> Self {
        Verdict { name: name.into(), observed, op: "<=", threshold, pass: observed <= threshold }
    }
}

/// Plot-ready columns over a shared x axis; `None` marks an undefined point.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SeriesTable {
    pub x_name: String,
    pub x: Vec<f64>,
    pub columns: Vec<(String, Vec<Option<f64>>)>,
}

impl SeriesTable {
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let io = |e: csv::Error| Error::io("csv", std::io::Error::other(e));
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![self.x_name.clone()];
        header.extend(self.columns.iter().map(|c| c.0.clone()));
        w.write_record(&header).map_err(io)?;
        for (i, x) in self.x.iter().enumerate() {
            let mut row = vec![x.to_string()];
            row.extend(self.columns.iter().map(|c| c.1[i].map_or(String::new(), |v| v.to_string())));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::io("csv", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property_id: u8,
    pub parameters: serde_json::Value,
    /// Number of items in `counts`; items in `rejected` are excluded.
    pub sample_size: u64,
    /// Bucket label and count, in bucket order.
    pub counts: Vec<(String, u64)>,
    pub rejected: BTreeMap<String, u64>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    pub notes: Vec<String>,
    pub series: SeriesTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSummary {
    #[serde(flatten)]
    pub line: LineFit,
    /// e^slope for a log-linear tail.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

impl PropertyReport {
    fn new(property_id: u8, parameters: &impl Serialize) -> Self {
        PropertyReport {
            property_id,
            parameters: serde_json::to_value(parameters).expect("parameters serialize"),
            sample_size: 0,
            counts: Vec::new(),
            rejected: BTreeMap::new(),
            verdicts: Vec::new(),
            pass: false,
            fit: None,
            notes: Vec::new(),
            series: SeriesTable::default(),
        }
    }

    fn reject(&mut self, reason: &str) {
        *self.rejected.entry(reason.to_string()).or_default() += 1;
    }

    fn set_counts<K: ToString>(&mut self, hist: &BTreeMap<K, u64>) {
        self.counts = hist.iter().map(|(k, &c)| (k.to_string(), c)).collect();
        self.sample_size = hist.values().sum();
    }

    fn conclude(mut self) -> Self {
        self.pass = !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.pass);
        self
    }
}

fn share(hist: &BTreeMap<i64, u64>, pred: impl Fn(i64) -> bool) -> f64 {
    let total: u64 = hist.values().sum();
    let hit: u64 = hist.iter().filter(|(&k, _)| pred(k)).map(|(_, &c)| c).sum();
    if total == 0 {
        0.0
    } else {
        hit as f64 / total as f64
    }
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} = {v} must lie in (0, 1)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DevParams {
    pub x: f64,
    pub eps: f64,
    pub min_share_within_one: f64,
    pub min_share_within_two: f64,
}

impl DevParams {
    pub fn new(x: f64, eps: f64) -> Self {
        DevParams { x, eps, min_share_within_one: 0.99, min_share_within_two: 0.995 }
    }
}

/// Property 1 at `x`: deviations of τ from the degree-class mean.
pub fn verify_dev(g: &Graph, x: f64, eps: f64) -> Result<PropertyReport> {
    verify_dev_with(g, &DevParams::new(x, eps))
}

/// Part A histograms τ_s − ⌈T̃_deg(s)⌉ over vertices of degree above n^eps;
/// part B fits the tail of τ_s − T̃_deg(s) over all vertices.
pub fn verify_dev_with(g: &Graph, p: &DevParams) -> Result<PropertyReport> {
    check_exponent("x", p.x)?;
    if p.eps < 0.0 {
        return Err(Error::param("eps must be nonnegative"));
    }
    let table = metrics::tau_table(g, &[p.x], None)?;
    let mut r = PropertyReport::new(1, p);
    let min_degree = (g.n() as f64).powf(p.eps);
    let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
    let mut all_dev = Vec::new();
    for (t, &d) in table.tau[0].iter().zip(&table.degrees) {
        let Some(t) = t else {
            r.reject("tau undefined");
            continue;
        };
        let mean = table.t_tilde(0, d).expect("class of a defined tau has a mean");
        all_dev.push(*t as f64 - mean);
        if d as f64 > min_degree {
            *hist.entry(*t as i64 - mean.ceil() as i64).or_default() += 1;
        } else {
            r.reject("degree at most n^eps");
        }
    }
    r.set_counts(&hist);
    if hist.is_empty() {
        r.notes.push("no vertex of degree above n^eps has a defined tau".into());
    } else {
        r.verdicts.push(Verdict::at_least("share with deviation <= 1", share(&hist, |k| k <= 1), p.min_share_within_one));
        r.verdicts.push(Verdict::at_least("share with deviation <= 2", share(&hist, |k| k <= 2), p.min_share_within_two));
    }
    match metrics::tail_fit(&all_dev) {
        Ok(f) => r.fit = Some(FitSummary { line: f.fit, c: Some(f.c) }),
        Err(e) => r.notes.push(format!("part B: {e}")),
    }
    let kmax = all_dev.iter().copied().fold(0.0, f64::max).floor() as i64;
    let kmin = hist.keys().next().copied().unwrap_or(0).min(0);
    let ks: Vec<i64> = (kmin..=kmax.max(hist.keys().last().copied().unwrap_or(0))).collect();
    let n_all = all_dev.len().max(1) as f64;
    let n_a = r.sample_size.max(1) as f64;
    r.series = SeriesTable {
        x_name: "k".into(),
        x: ks.iter().map(|&k| k as f64).collect(),
        columns: vec![
            (
                "share_part_a_eq_k".into(),
                ks.iter().map(|k| Some(hist.get(k).copied().unwrap_or(0) as f64 / n_a)).collect(),
            ),
            (
                "share_dev_ge_k".into(),
                ks.iter()
                    .map(|&k| Some(all_dev.iter().filter(|&&d| d >= k as f64 - 1e-9).count() as f64 / n_all))
                    .collect(),
            ),
        ],
    };
    Ok(r.conclude())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TouchParams {
    pub x: f64,
    pub y: f64,
    pub pair_sample: usize,
    pub seed: u64,
    pub min_strict_share: f64,
}

impl TouchParams {
    pub fn new(x: f64, y: f64, pair_sample: usize, seed: u64) -> Self {
        TouchParams { x, y, pair_sample, seed, min_strict_share: 0.9 }
    }
}

/// Property 2 for `x + y > 1`: the slack τ_s(n^x) + τ_t(n^y) − dist(s, t) over random pairs.
pub fn verify_touch(g: &Graph, x: f64, y: f64, pair_sample: usize, seed: u64) -> Result<PropertyReport> {
    verify_touch_with(g, &TouchParams::new(x, y, pair_sample, seed))
}

pub fn verify_touch_with(g: &Graph, p: &TouchParams) -> Result<PropertyReport> {
    check_exponent("x", p.x)?;
    check_exponent("y", p.y)?;
    if p.x + p.y <= 1.0 {
        return Err(Error::param("touch needs x + y > 1"));
    }
    if p.pair_sample == 0 {
        return Err(Error::param("pair sample must be positive"));
    }
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.n() as u32;
    let (kx, ky) = (threshold(g.n(), p.x), threshold(g.n(), p.y));
    let mut rng = rng::seeded(p.seed);
    let pairs: Vec<(u32, u32)> = (0..p.pair_sample).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
    let outcomes: Vec<std::result::Result<i64, &'static str>> = pairs
        .par_iter()
        .map_init(
            || (Bfs::new(g.n()), PairDistance::new(g.n())),
            |(bfs, pd), &(s, t)| {
                let d = pd.distance(g, s, t).ok_or("different components")?;
                let ts = bfs.tau(g, s, kx).ok_or("tau undefined")?;
                let tt = bfs.tau(g, t, ky).ok_or("tau undefined")?;
                Ok(ts as i64 + tt as i64 - d as i64)
            },
        )
        .collect();
    let mut r = PropertyReport::new(2, p);
    let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
    for o in outcomes {
        match o {
            Ok(slack) => *hist.entry(slack).or_default() += 1,
            Err(reason) => r.reject(reason),
        }
    }
    r.set_counts(&hist);
    if hist.is_empty() {
        r.notes.push("no pair had both tau values defined".into());
    } else {
        r.verdicts.push(Verdict::at_least("share with dist < tau_s + tau_t", share(&hist, |k| k > 0), p.min_strict_share));
    }
    r.series = SeriesTable {
        x_name: "slack".into(),
        x: hist.keys().map(|&k| k as f64).collect(),
        columns: vec![("pairs".into(), hist.values().map(|&c| Some(c as f64)).collect())],
    };
    Ok(r.conclude())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UntouchParams {
    pub source: Option<u32>,
    pub t_sample: usize,
    pub z_resolution: f64,
    pub seed: u64,
    pub slack: f64,
    /// The curve is checked at every z at or above this value.
    pub z_min: f64,
}

impl UntouchParams {
    pub fn new(source: Option<u32>, t_sample: usize, z_resolution: f64, seed: u64) -> Self {
        UntouchParams { source, t_sample, z_resolution, seed, slack: 0.05, z_min: 1.0 }
    }
}

/// Per-target outcome of the untouch scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UntouchTarget {
    pub target: u32,
    /// Grid index sum `i + j` of the minimizing `(x, y) = (i, j) * resolution`, if any.
    pub z_steps: Option<u32>,
    pub tau_half: Option<u32>,
}

/// Property 3 by the z-scan protocol.
pub fn verify_untouch(
    g: &Graph,
    s: Option<u32>,
    t_sample: usize,
    z_resolution: f64,
    seed: u64,
) -> Result<PropertyReport> {
    verify_untouch_with(g, &UntouchParams::new(s, t_sample, z_resolution, seed))
}

/// For each sampled t, z_t = min{x + y : x > y, τ_s(n^x) + τ_t(n^y) < dist(s, t) + 2}
/// over the grid; the curve is z ↦ 1 + log(N_z / |T|) / log n with N_z = #{t : z_t < z}.
pub fn verify_untouch_with(g: &Graph, p: &UntouchParams) -> Result<PropertyReport> {
    if p.t_sample < 100 {
        return Err(Error::param("untouch needs at least 100 targets"));
    }
    if p.t_sample > g.n() {
        return Err(Error::param(format!("{} targets requested from {} vertices", p.t_sample, g.n())));
    }
    if !(p.z_resolution > 0.0 && p.z_resolution < 0.5) {
        return Err(Error::param("z resolution must lie in (0, 0.5)"));
    }
    let (targets, s, grid_len) = untouch_scan(g, p)?;
    let res = p.z_resolution;
    let mut r = PropertyReport::new(3, p);
    r.notes.push(format!("source {s}"));
    let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
    let mut never = 0u64;
    for t in &targets {
        match t.z_steps {
            Some(z) => *hist.entry(z).or_default() += 1,
            None => never += 1,
        }
    }
    r.counts = hist.iter().map(|(&z, &c)| (format!("{}", z as f64 * res), c)).collect();
    r.counts.push(("none".into(), never));
    r.sample_size = targets.len() as u64;
    let diameter = exact_sumsweep(g, &Default::default()).0.value as f64;
    let z_grid: Vec<u32> = (1..=2 * grid_len as u32 + 2).collect();
    let ln_n = (g.n() as f64).ln();
    let curve = |subset: &[&UntouchTarget]| -> Vec<Option<f64>> {
        z_grid
            .iter()
            .map(|&z| {
                let nz = subset.iter().filter(|t| t.z_steps.is_some_and(|zt| zt < z)).count();
                (nz > 0 && !subset.is_empty())
                    .then(|| 1.0 + (nz as f64 / subset.len() as f64).ln() / ln_n)
            })
            .collect()
    };
    let all: Vec<&UntouchTarget> = targets.iter().collect();
    let band = |lo: f64, hi: f64, lo_strict: bool| -> Vec<&UntouchTarget> {
        targets
            .iter()
            .filter(|t| {
                t.tau_half.is_some_and(|h| {
                    let h = h as f64;
                    (if lo_strict { h > lo } else { h >= lo }) && h < hi
                })
            })
            .collect()
    };
    let main = curve(&all);
    let mut worst = f64::NEG_INFINITY;
    for (&z, c) in z_grid.iter().zip(&main) {
        let zf = z as f64 * res;
        if zf >= p.z_min - 1e-9 {
            if let Some(c) = c {
                worst = worst.max(c - zf);
            }
        }
    }
    r.verdicts.push(Verdict::at_most("max of curve(z) - z over z >= z_min", worst.max(-1.0), p.slack));
    r.notes.push(format!("diameter {diameter}"));
    r.series = SeriesTable {
        x_name: "z".into(),
        x: z_grid.iter().map(|&z| z as f64 * res).collect(),
        columns: vec![
            ("all".into(), main),
            ("tau_half_below_d6".into(), curve(&band(0.0, diameter / 6.0, false))),
            ("tau_half_d6_to_d3".into(), curve(&band(diameter / 6.0, diameter / 3.0, false))),
            ("tau_half_above_d3".into(), curve(&band(diameter / 3.0, f64::INFINITY, true))),
        ],
    };
    Ok(r.conclude())
}

/// Runs the z scan; returns the targets, the source, and the number of grid exponents.
pub fn untouch_scan(g: &Graph, p: &UntouchParams) -> Result<(Vec<UntouchTarget>, u32, usize)> {
    let n = g.n();
    let res = p.z_resolution;
    let grid_len = ((1.0 - 1e-9) / res).floor() as usize;
    let exps: Vec<f64> = (1..=grid_len).map(|i| i as f64 * res).collect();
    let ks: Vec<u64> = exps.iter().map(|&e| threshold(n, e)).collect();
    let mut rng = rng::seeded(p.seed);
    let s = match p.source {
        Some(s) => g.check_vertex(s as u64)?,
        None => rng.random_range(0..n as u32),
    };
    let mut targets = rng::sample_distinct(&mut rng, n, p.t_sample);
    targets.sort_unstable();
    let mut bfs = Bfs::new(n);
    let dist_s = bfs.run(g, s).to_vec();
    let levels_s = bfs.last_level_sizes();
    let tau_s: Vec<Option<u32>> = ks.iter().map(|&k| tau_from_levels(&levels_s, k)).collect();
    let k_half = threshold(n, 0.5);
    let out = targets
        .par_iter()
        .map_init(
            || (Bfs::new(n), Vec::new()),
            |(bfs, levels), &t| {
                let d = dist_s[t as usize];
                let tau_half = bfs.tau(g, t, k_half);
                let mut z_steps = None;
                if d != crate::graph::UNREACHED && grid_len >= 2 {
                    // τ grows with its exponent and z with both grid indices, so the smallest
                    // y decides: its first admissible x is the minimum, and if it has none then
                    // no larger y has one either.
                    bfs.levels_until(g, t, ks[0], levels);
                    let tt = tau_from_levels(levels, ks[0]);
                    let hit = (1..grid_len).find(|&i| match (tau_s[i], tt) {
                        (Some(a), Some(b)) => a + b < d + 2,
                        _ => false,
                    });
                    z_steps = hit.map(|i| (i + 2) as u32);
                }
                UntouchTarget { target: t, z_steps, tau_half }
            },
        )
        .collect();
    Ok((out, s, grid_len))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeParams {
    pub beta: f64,
    pub tolerance: f64,
    pub d_min: f64,
}

impl DegreeParams {
    pub fn new(beta: f64) -> Self {
        DegreeParams { beta, tolerance: 0.3, d_min: 4.0 }
    }
}

/// Property 4: log-log slope of #{v : deg(v) > d} against d.
pub fn verify_degree(g: &Graph, beta: f64) -> Result<PropertyReport> {
    verify_degree_with(g, &DegreeParams::new(beta))
}

/// Fits over log-spaced d in [d_min, max degree / 4], four points per doubling.
pub fn verify_degree_with(g: &Graph, p: &DegreeParams) -> Result<PropertyReport> {
    if !(p.beta > 1.0) {
        return Err(Error::DegreeDistributionUndefined(p.beta));
    }
    let degrees = g.degrees();
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for &d in &degrees {
        *hist.entry(d).or_default() += 1;
    }
    if hist.len() < 3 {
        return Err(Error::DegenerateTail(format!("{} distinct degree values, need 3", hist.len())));
    }
    let mut r = PropertyReport::new(4, p);
    r.set_counts(&hist);
    let max_deg = *hist.keys().last().unwrap() as f64;
    let mut ds: Vec<u64> = Vec::new();
    let mut i = 0;
    loop {
        let d = (p.d_min * 2f64.powf(i as f64 / 4.0)).round();
        if d > max_deg / 4.0 {
            break;
        }
        if ds.last() != Some(&(d as u64)) {
            ds.push(d as u64);
        }
        i += 1;
    }
    let mut sorted = degrees;
    sorted.sort_unstable();
    let tail = |d: u64| (sorted.len() - sorted.partition_point(|&x| x as u64 <= d)) as u64;
    let points: Vec<(u64, u64)> = ds.iter().map(|&d| (d, tail(d))).filter(|&(_, c)| c > 0).collect();
    let want = -(p.beta - 1.0).max(1.0);
    let xs: Vec<f64> = points.iter().map(|&(d, _)| (d as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, c)| (c as f64).ln()).collect();
    match fit::least_squares(&xs, &ys) {
        Some(line) => {
            r.fit = Some(FitSummary { line, c: None });
            r.verdicts.push(Verdict::at_most("|slope - expected|", (line.slope - want).abs(), p.tolerance));
        }
        None => {
            r.notes.push(format!("fewer than two fit points in [{}, {}]", p.d_min, max_deg / 4.0));
            r.verdicts.push(Verdict::at_most("|slope - expected|", f64::INFINITY, p.tolerance));
        }
    }
    r.notes.push(format!("expected slope {want}"));
    r.series = SeriesTable {
        x_name: "d".into(),
        x: points.iter().map(|&(d, _)| d as f64).collect(),
        columns: vec![("vertices_with_degree_above_d".into(), points.iter().map(|&(_, c)| Some(c as f64)).collect())],
    };
    Ok(r.conclude())
}
