use std::sync::atomic::AtomicU64;

use super::{count, AlgoResult, Algorithm, CountingBfs, Measure, Params};
use crate::error::Result;
use crate::graph::Graph;

/// Exact diameter by eccentricities in decreasing distance from a start vertex.
pub struct IFub;

impl Algorithm for IFub {
    fn name(&self) -> &'static str {
        "ifub"
    }

    fn describe(&self) -> &'static str {
        "exact diameter; processes vertices by decreasing distance from the start"
    }

    fn seeded(&self) -> bool {
        false
    }

    fn exact(&self) -> bool {
        true
    }

    fn execute(&self, g: &Graph, p: &Params) -> Result<Vec<AlgoResult>> {
        let start = p.start.map(|s| g.check_vertex(s as u64)).transpose()?;
        Ok(vec![ifub(g, start)])
    }
}

/// Default start is the highest-degree vertex.
///
/// Once the next vertex `v` has `2 dist(u, v) <= D_L`, every remaining pair is
/// within `D_L` of each other through `u`, so `D_L` is the diameter.
pub fn ifub(g: &Graph, start: Option<u32>) -> AlgoResult {
    let u = start.unwrap_or_else(|| g.max_degree_vertex());
    let counter = AtomicU64::new(0);
    let mut bfs = CountingBfs::new(g.n(), &counter);
    let dist = bfs.run(g, u).to_vec();
    let mut best = (bfs.eccentricity(), u);
    let mut order = bfs.order().to_vec();
    order.sort_unstable_by_key(|&v| (std::cmp::Reverse(dist[v as usize]), v));
    for v in order {
        if 2 * dist[v as usize] <= best.0 {
            break;
        }
        bfs.run(g, v);
        let e = bfs.eccentricity();
        if e > best.0 || (e == best.0 && v < best.1) {
            best = (e, v);
        }
    }
    AlgoResult::new("ifub", Measure::Diameter, best.0 as u64, vec![best.1], count(&counter))
}
