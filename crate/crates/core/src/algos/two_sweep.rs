use std::sync::atomic::AtomicU64;

use rand::Rng as _;

use super::{count, farthest, AlgoResult, Algorithm, CountingBfs, Measure, Params};
use crate::error::Result;
use crate::graph::Graph;
use crate::rng;

/// Diameter lower bound: the eccentricity of a vertex farthest from the start.
pub struct TwoSweep;

impl Algorithm for TwoSweep {
    fn name(&self) -> &'static str {
        "2sweep"
    }

    fn describe(&self) -> &'static str {
        "eccentricity of the vertex farthest from a start vertex"
    }

    fn seeded(&self) -> bool {
        true
    }

    fn execute(&self, g: &Graph, p: &Params) -> Result<Vec<AlgoResult>> {
        let start = match p.start {
            Some(s) => Some(g.check_vertex(s as u64)?),
            None if p.max_degree_start => Some(g.max_degree_vertex()),
            None => None,
        };
        Ok(vec![two_sweep(g, start, p.seed)])
    }
}

/// Without `start`, the start vertex is uniform under `seed`.
pub fn two_sweep(g: &Graph, start: Option<u32>, seed: u64) -> AlgoResult {
    let s = start.unwrap_or_else(|| rng::seeded(seed).random_range(0..g.n() as u32));
    let counter = AtomicU64::new(0);
    let mut bfs = CountingBfs::new(g.n(), &counter);
    let (t, _) = farthest(bfs.run(g, s));
    let (far, ecc) = farthest(bfs.run(g, t));
    AlgoResult::new("2sweep", Measure::Diameter, ecc as u64, vec![t, far], count(&counter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_from_inner_vertex() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap().0;
        let r = two_sweep(&g, Some(1), 0);
        assert_eq!(r.witnesses[0], 3);
        assert_eq!((r.value, r.bfs_count), (3, 2));
    }

    #[test]
    fn cycle_any_start() {
        let g = Graph::from_edges(&(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap().0;
        for s in 0..6 {
            assert_eq!(two_sweep(&g, Some(s), 0).value, 3);
        }
        assert_eq!(two_sweep(&g, None, 9).value, 3);
    }
}
