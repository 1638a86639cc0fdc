//! Independent reference implementations and the small-graph suite shared by
//! the integration tests.

#![allow(dead_code)]

use std::collections::VecDeque;

use mgraph::genmodel::{self, ModelKind, ModelSpec};
use mgraph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX;

/// Plain queue BFS over the public adjacency, independent of `mgraph::graph::Bfs`.
pub fn bfs(g: &Graph, s: u32) -> Vec<u32> {
    let mut dist = vec![INF; g.n()];
    let mut q = VecDeque::new();
    dist[s as usize] = 0;
    q.push_back(s);
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] == INF {
                dist[w as usize] = dist[v as usize] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

pub fn all_pairs(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.n() as u32).map(|s| bfs(g, s)).collect()
}

pub fn eccentricities(apsp: &[Vec<u32>]) -> Vec<u32> {
    apsp.iter().map(|row| row.iter().copied().filter(|&d| d != INF).max().unwrap_or(0)).collect()
}

pub fn farness(apsp: &[Vec<u32>]) -> Vec<u64> {
    apsp.iter().map(|row| row.iter().filter(|&&d| d != INF).map(|&d| d as u64).sum()).collect()
}

pub fn path(n: u32) -> Graph {
    Graph::with_vertices(n as usize, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
}

pub fn cycle(n: u32) -> Graph {
    Graph::with_vertices(n as usize, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn star(leaves: u32) -> Graph {
    Graph::with_vertices(leaves as usize + 1, &(1..=leaves).map(|i| (0, i)).collect::<Vec<_>>())
}

pub fn complete(n: u32) -> Graph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            e.push((u, v));
        }
    }
    Graph::with_vertices(n as usize, &e)
}

pub fn grid(w: u32, h: u32) -> Graph {
    let mut e = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                e.push((v, v + 1));
            }
            if y + 1 < h {
                e.push((v, v + w));
            }
        }
    }
    Graph::with_vertices((w * h) as usize, &e)
}

/// Uniform random recursive tree.
pub fn random_tree(n: u32, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::with_vertices(n as usize, &e)
}

/// G(n, p), possibly disconnected.
pub fn gnp(n: u32, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                e.push((u, v));
            }
        }
    }
    Graph::with_vertices(n as usize, &e)
}

pub fn giant(g: &Graph) -> Graph {
    g.giant_component().0
}

pub fn model(kind: ModelKind, n: usize, beta: f64, seed: u64) -> Graph {
    genmodel::generate(&ModelSpec::new(kind, n, beta, seed)).unwrap().graph
}

/// Connected graphs of varied shape, all small enough for all-pairs BFS.
pub fn suite() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = vec![
        ("K2".into(), path(2)),
        ("P7".into(), path(7)),
        ("P30".into(), path(30)),
        ("C5".into(), cycle(5)),
        ("C12".into(), cycle(12)),
        ("S9".into(), star(9)),
        ("K6".into(), complete(6)),
        ("grid7x4".into(), grid(7, 4)),
    ];
    for seed in 0..4 {
        out.push((format!("tree{seed}"), random_tree(60 + 20 * seed as u32, seed)));
        out.push((format!("gnp{seed}"), giant(&gnp(120, 0.025, seed))));
    }
    for kind in [ModelKind::Cm, ModelKind::Cl, ModelKind::Nr] {
        for beta in [1.5, 2.5, 3.5] {
            out.push((format!("{}-{beta}", kind.name()), model(kind, 300, beta, 7)));
        }
    }
    out
}
