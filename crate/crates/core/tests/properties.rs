mod common;

use std::collections::BTreeMap;

use mgraph::genmodel::ModelKind;
use mgraph::properties::{verify_degree, verify_dev, verify_touch, verify_untouch, PropertyReport};
use mgraph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// τ_s(k) from a reference BFS.
fn tau(g: &Graph, s: u32, k: u64) -> Option<u32> {
    let dist = common::bfs(g, s);
    let mut levels: Vec<u64> = Vec::new();
    for &d in dist.iter().filter(|&&d| d != common::INF) {
        if levels.len() <= d as usize {
            levels.resize(d as usize + 1, 0);
        }
        levels[d as usize] += 1;
    }
    levels.iter().position(|&c| c > k).map(|l| l as u32)
}

fn ceil_pow(n: usize, x: f64) -> u64 {
    (n as f64).powf(x).ceil() as u64
}

fn counts<K: ToString>(hist: &BTreeMap<K, u64>) -> Vec<(String, u64)> {
    hist.iter().map(|(k, &c)| (k.to_string(), c)).collect()
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn dev_histogram_matches_reference() {
    let g = common::model(ModelKind::Cm, 3000, 2.5, 2);
    let (x, eps) = (0.5, 0.2);
    let k = ceil_pow(g.n(), x);
    let taus: Vec<Option<u32>> = (0..g.n() as u32).map(|s| tau(&g, s, k)).collect();
    let mut sums: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    for (v, t) in taus.iter().enumerate() {
        if let Some(t) = t {
            let e = sums.entry(g.degree(v as u32)).or_default();
            e.0 += *t as f64;
            e.1 += 1.0;
        }
    }
    let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
    let min_degree = (g.n() as f64).powf(eps);
    for (v, t) in taus.iter().enumerate() {
        let d = g.degree(v as u32);
        if let (Some(t), true) = (t, d as f64 > min_degree) {
            let (s, c) = sums[&d];
            *hist.entry(*t as i64 - (s / c).ceil() as i64).or_default() += 1;
        }
    }
    let r = verify_dev(&g, x, eps).unwrap();
    assert_eq!(r.counts, counts(&hist));
    assert_eq!(r.sample_size + r.rejected.values().sum::<u64>(), g.n() as u64);
}

#[test]
fn touch_histogram_matches_reference() {
    // Two copies of a generated graph: a quarter of uniform pairs straddle them.
    let h = common::model(ModelKind::Cl, 1500, 2.5, 4);
    let off = h.n() as u32;
    let mut e: Vec<(u32, u32)> = h.edges().collect();
    e.extend(h.edges().map(|(u, v)| (u + off, v + off)).collect::<Vec<_>>());
    let g = Graph::with_vertices(2 * h.n(), &e);
    let (x, y, pairs, seed) = (0.6, 0.6, 4000, 13);
    let (kx, ky) = (ceil_pow(g.n(), x), ceil_pow(g.n(), y));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
    let mut rejected: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..pairs {
        let s = rng.random_range(0..g.n() as u32);
        let t = rng.random_range(0..g.n() as u32);
        let d = common::bfs(&g, s)[t as usize];
        let reason = if d == common::INF {
            Some("different components")
        } else {
            match (tau(&g, s, kx), tau(&g, t, ky)) {
                (Some(a), Some(b)) => {
                    *hist.entry(a as i64 + b as i64 - d as i64).or_default() += 1;
                    None
                }
                _ => Some("tau undefined"),
            }
        };
        if let Some(r) = reason {
            *rejected.entry(r.to_string()).or_default() += 1;
        }
    }
    let r = verify_touch(&g, x, y, pairs, seed).unwrap();
    assert_eq!(r.counts, counts(&hist));
    assert_eq!(r.rejected, rejected);
    assert!(r.rejected["different components"] > 0);
}

fn all_reports(g: &Graph) -> Vec<PropertyReport> {
    vec![
        verify_dev(g, 0.5, 0.2).unwrap(),
        verify_touch(g, 0.6, 0.6, 2000, 3).unwrap(),
        verify_untouch(g, None, 300, 0.05, 3).unwrap(),
        verify_degree(g, 2.5).unwrap(),
    ]
}

#[test]
fn reports_reproducible_across_runs_and_threads() {
    let g = common::model(ModelKind::Nr, 5000, 2.5, 8);
    let one = pool(1).install(|| all_reports(&g));
    let four = pool(4).install(|| all_reports(&g));
    assert_eq!(one, four);
    assert_eq!(one, all_reports(&g));
}

#[test]
fn untouch_curve_nondecreasing_in_z() {
    for kind in [ModelKind::Cm, ModelKind::Cl, ModelKind::Nr] {
        let g = common::model(kind, 5000, 2.5, 6);
        let r = verify_untouch(&g, None, 1000, 0.05, 1).unwrap();
        for (name, col) in &r.series.columns {
            let defined: Vec<f64> = col.iter().skip_while(|c| c.is_none()).map(|c| c.expect("no gap after first point")).collect();
            assert!(defined.windows(2).all(|w| w[0] <= w[1]), "{} {name}", kind.name());
        }
    }
}
