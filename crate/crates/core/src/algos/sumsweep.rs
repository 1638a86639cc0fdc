use std::sync::atomic::AtomicU64;

use rand::Rng as _;

use super::{count, default_k, AlgoResult, Algorithm, BoundState, CountingBfs, Measure, Params};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, Rng};

/// Diameter lower bounds for every vertex from alternating random and sum-maximizing sources.
pub struct SumSweepHeuristic;

impl Algorithm for SumSweepHeuristic {
    fn name(&self) -> &'static str {
        "sumsweep"
    }

    fn describe(&self) -> &'static str {
        "k rounds of a random BFS followed by a BFS from the argmax of summed distances"
    }

    fn seeded(&self) -> bool {
        true
    }

    fn execute(&self, g: &Graph, p: &Params) -> Result<Vec<AlgoResult>> {
        Ok(vec![sumsweep_heuristic(g, default_k(p, 10), p.seed)?.1])
    }
}

/// Alternating sweep state shared with the exact algorithm.
pub(crate) struct Sweep<'a> {
    pub bfs: CountingBfs<'a>,
    pub state: BoundState,
    /// Σ dist(s_j, v) over the random sources so far.
    pub sums: Vec<u64>,
    rng: Rng,
}

impl<'a> Sweep<'a> {
    pub fn new(g: &Graph, seed: u64, counter: &'a AtomicU64) -> Self {
        Sweep {
            bfs: CountingBfs::new(g.n(), counter),
            state: BoundState::new(g.n()),
            sums: vec![0; g.n()],
            rng: rng::seeded(seed),
        }
    }

    pub fn visit(&mut self, g: &Graph, s: u32) -> &[u32] {
        self.bfs.run(g, s);
        let ecc = self.bfs.eccentricity();
        self.state.absorb(s, self.bfs.dist(), ecc);
        self.bfs.dist()
    }

    /// One round; false once every vertex has been processed.
    pub fn round(&mut self, g: &Graph) -> bool {
        let n = g.n();
        if self.state.processed.len() == n {
            return false;
        }
        let s = loop {
            let v = self.rng.random_range(0..n as u32);
            if !self.state.is_processed(v) {
                break v;
            }
        };
        let dist = self.visit(g, s).to_vec();
        for (acc, d) in self.sums.iter_mut().zip(dist) {
            *acc += d as u64;
        }
        let t = (0..n as u32)
            .filter(|&v| !self.state.is_processed(v))
            .max_by_key(|&v| (self.sums[v as usize], std::cmp::Reverse(v)));
        if let Some(t) = t {
            self.visit(g, t);
        }
        true
    }
}

/// Runs `k` rounds and returns the bounds with max L(v) as the diameter lower bound.
pub fn sumsweep_heuristic(g: &Graph, k: usize, seed: u64) -> Result<(BoundState, AlgoResult)> {
    if k == 0 {
        return Err(Error::param("sumsweep needs k >= 1"));
    }
    let counter = AtomicU64::new(0);
    let mut sweep = Sweep::new(g, seed, &counter);
    for _ in 0..k {
        if !sweep.round(g) {
            break;
        }
    }
    let state = sweep.state;
    let value = state.lower.iter().copied().max().unwrap_or(0);
    let witness = state.lower.iter().position(|&l| l == value).unwrap_or(0) as u32;
    let r = AlgoResult::new("sumsweep", Measure::Diameter, value as u64, vec![witness], count(&counter));
    Ok((state, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::all_eccentricities;

    #[test]
    fn exhaustive_bounds_are_exact() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (2, 6)]).unwrap().0;
        let (st, r) = sumsweep_heuristic(&g, 100, 3).unwrap();
        let ecc = all_eccentricities(&g);
        assert_eq!(st.lower, ecc);
        assert_eq!(st.upper, ecc);
        assert_eq!(r.bfs_count, g.n() as u64);
    }

    #[test]
    fn star_one_round() {
        let g = Graph::from_edges(&(1..=5).map(|i| (0, i)).collect::<Vec<_>>()).unwrap().0;
        let (st, r) = sumsweep_heuristic(&g, 1, 0).unwrap();
        assert_eq!((st.d_l, r.value, r.bfs_count), (2, 2, 2));
    }
}
