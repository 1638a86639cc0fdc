use std::sync::atomic::AtomicU64;

use super::sumsweep::Sweep;
use super::{count, AlgoResult, Algorithm, BoundState, Measure, Params};
use crate::error::Result;
use crate::graph::Graph;

/// Exact diameter and radius certified by per-vertex eccentricity bounds.
pub struct ExactSumSweep;

impl Algorithm for ExactSumSweep {
    fn name(&self) -> &'static str {
        "exact-sumsweep"
    }

    fn describe(&self) -> &'static str {
        "exact diameter and radius from eccentricity bounds refined by adaptive BFSes"
    }

    fn seeded(&self) -> bool {
        true
    }

    fn exact(&self) -> bool {
        true
    }

    fn execute(&self, g: &Graph, p: &Params) -> Result<Vec<AlgoResult>> {
        let (d, r) = exact_sumsweep(g, p);
        Ok(vec![d, r])
    }
}

/// Returns `(diameter, radius)`; each `bfs_count` is the total at the moment that value was certified.
pub fn exact_sumsweep(g: &Graph, p: &Params) -> (AlgoResult, AlgoResult) {
    exact_sumsweep_observed(g, p, |_| {})
}

/// As [`exact_sumsweep`], calling `observe` after every BFS pair or adaptive step.
pub fn exact_sumsweep_observed(
    g: &Graph,
    p: &Params,
    mut observe: impl FnMut(&BoundState),
) -> (AlgoResult, AlgoResult) {
    let n = g.n();
    let counter = AtomicU64::new(0);
    let mut sweep = Sweep::new(g, p.seed, &counter);
    for _ in 0..p.initial_k {
        if !sweep.round(g) {
            break;
        }
        observe(&sweep.state);
    }
    let hubs = g.degree_order();
    let mut next_hub = 0usize;
    let mut diameter = None;
    let mut radius = None;
    let mut step = 0usize;
    let mut diameter_turn = true;
    loop {
        let st = &sweep.state;
        if diameter.is_none() && st.diameter_certified() {
            diameter = Some((st.d_l, count(&counter)));
        }
        if radius.is_none() && st.radius_certified() {
            radius = Some((st.r_u, count(&counter)));
        }
        if diameter.is_some() && radius.is_some() {
            break;
        }
        let unprocessed = (0..n as u32).filter(|&v| !st.is_processed(v));
        let v = if p.hub_period > 0 && step % p.hub_period == 0 {
            while st.is_processed(hubs[next_hub]) {
                next_hub += 1;
            }
            hubs[next_hub]
        } else {
            let diameter_side = radius.is_some() || (diameter.is_none() && diameter_turn);
            diameter_turn = !diameter_turn;
            if diameter_side {
                unprocessed
                    .filter(|&v| st.upper[v as usize] > st.d_l)
                    .max_by_key(|&v| (st.lower[v as usize], std::cmp::Reverse(v)))
                    .expect("uncertified diameter has a candidate")
            } else {
                unprocessed
                    .filter(|&v| st.lower[v as usize] < st.r_u)
                    .min_by_key(|&v| (st.lower[v as usize], v))
                    .expect("uncertified radius has a candidate")
            }
        };
        sweep.visit(g, v);
        observe(&sweep.state);
        step += 1;
    }
    let st = &sweep.state;
    let witness = |e: u32| *st.processed.iter().filter(|&&v| st.lower[v as usize] == e).min().unwrap();
    let (d, dc) = diameter.unwrap();
    let (r, rc) = radius.unwrap();
    (
        AlgoResult::new("exact-sumsweep", Measure::Diameter, d as u64, vec![witness(d)], dc),
        AlgoResult::new("exact-sumsweep", Measure::Radius, r as u64, vec![witness(r)], rc),
    )
}
