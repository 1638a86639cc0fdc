use std::sync::atomic::{AtomicU64, Ordering};

use super::{count, farthest, AlgoResult, Algorithm, BoundState, CountingBfs, Measure, Params};
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};
use crate::rng;

/// Diameter lower bound with the ⌈2D/3⌉ guarantee from two batches of k BFSes.
pub struct RwApprox;

impl Algorithm for RwApprox {
    fn name(&self) -> &'static str {
        "rw"
    }

    fn describe(&self) -> &'static str {
        "max eccentricity over k random sources and the k vertices closest to the farthest point"
    }

    fn seeded(&self) -> bool {
        true
    }

    fn execute(&self, g: &Graph, p: &Params) -> Result<Vec<AlgoResult>> {
        Ok(vec![rw_approx(g, p.seed)?])
    }
}

/// k = min(n, ⌈√n ln n⌉).
pub fn batch_size(n: usize) -> usize {
    let nf = n as f64;
    ((nf.sqrt() * nf.ln()).ceil() as usize).min(n)
}

/// One reseeded retry when the two batches miss each other, then [`Error::RwFailed`].
///
/// The nearest-source distances come from one multi-source BFS, and the
/// maximum eccentricity over both batches is certified with eccentricity
/// bounds instead of a BFS from every member.
pub fn rw_approx(g: &Graph, seed: u64) -> Result<AlgoResult> {
    let n = g.n();
    if n < 4 {
        return Err(Error::param("rw needs at least 4 vertices"));
    }
    let k = batch_size(n);
    let counter = AtomicU64::new(0);
    let mut bfs = CountingBfs::new(n, &counter);
    for attempt in 0..2 {
        let mut sources = rng::sample_distinct(&mut rng::stream(seed, attempt), n, k);
        sources.sort_unstable();
        counter.fetch_add(1, Ordering::Relaxed);
        let t = farthest(&multi_source_distances(g, &sources)).0;
        let dist = bfs.run(g, t).to_vec();
        let t_ecc = bfs.eccentricity();
        let mut near: Vec<u32> = (0..n as u32).collect();
        near.sort_unstable_by_key(|&v| (dist[v as usize], v));
        near.truncate(k);
        if !near.iter().any(|v| sources.binary_search(v).is_ok()) {
            continue;
        }
        let mut members = vec![false; n];
        for &v in sources.iter().chain(&near) {
            members[v as usize] = true;
        }
        let mut state = BoundState::new(n);
        state.absorb(t, &dist, t_ecc);
        let (value, witness) = max_eccentricity(g, &members, &mut state, &mut bfs);
        return Ok(AlgoResult::new("rw", Measure::Diameter, value as u64, vec![witness], count(&counter)));
    }
    Err(Error::RwFailed)
}

/// min over sources of the hop distance, by one BFS seeded with every source.
fn multi_source_distances(g: &Graph, sources: &[u32]) -> Vec<u32> {
    let mut dist = vec![UNREACHED; g.n()];
    let mut queue = Vec::with_capacity(g.n());
    for &s in sources {
        dist[s as usize] = 0;
        queue.push(s);
    }
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for &w in g.neighbors(u) {
            if dist[w as usize] == UNREACHED {
                dist[w as usize] = dist[u as usize] + 1;
                queue.push(w);
            }
        }
    }
    dist
}

/// Exact max eccentricity over `members` and its lowest-id witness.
///
/// Starts with a BFS from the highest-degree vertex, whose small eccentricity
/// gives tight upper bounds, then processes the member with the largest upper
/// bound until no member's upper bound exceeds the best lower bound.
fn max_eccentricity(g: &Graph, members: &[bool], state: &mut BoundState, bfs: &mut CountingBfs) -> (u32, u32) {
    let hub = g.max_degree_vertex();
    if !state.is_processed(hub) {
        bfs.run(g, hub);
        let e = bfs.eccentricity();
        state.absorb(hub, bfs.dist(), e);
    }
    let in_set = || (0..g.n() as u32).filter(|&v| members[v as usize]);
    loop {
        let best = in_set().map(|v| state.lower[v as usize]).max().unwrap();
        let next = in_set()
            .filter(|&v| state.upper[v as usize] > best)
            .max_by_key(|&v| (state.upper[v as usize], state.lower[v as usize], std::cmp::Reverse(v)));
        let Some(v) = next else {
            let witness = in_set().find(|&v| state.lower[v as usize] == best).unwrap();
            return (best, witness);
        };
        bfs.run(g, v);
        let e = bfs.eccentricity();
        state.absorb(v, bfs.dist(), e);
    }
}
