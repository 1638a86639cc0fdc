use std::sync::atomic::{AtomicU64, Ordering};

use super::{count, default_k, AlgoResult, Algorithm, Measure, Params};
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

/// Exact top-k closeness by BFSes cut off once they cannot enter the top k.
pub struct BcmTopK;

impl Algorithm for BcmTopK {
    fn name(&self) -> &'static str {
        "bcm-topk"
    }

    fn describe(&self) -> &'static str {
        "exact k smallest farness values by pruned BFS in decreasing-degree order"
    }

    fn seeded(&self) -> bool {
        false
    }

    fn exact(&self) -> bool {
        true
    }

    fn execute(&self, g: &Graph, p: &Params) -> Result<Vec<AlgoResult>> {
        let k = default_k(p, 1);
        let counter = AtomicU64::new(0);
        let top = bcm_topk_counted(g, k, &counter)?;
        let mut r = AlgoResult::new(
            "bcm-topk",
            Measure::Closeness,
            top[0].1,
            top.iter().map(|t| t.0).collect(),
            count(&counter),
        );
        r.ranking = Some(top);
        Ok(vec![r])
    }
}

/// `(vertex, farness)` for the `k` smallest farness values, ties by lowest id.
pub fn bcm_topk(g: &Graph, k: usize) -> Result<Vec<(u32, u64)>> {
    bcm_topk_counted(g, k, &AtomicU64::new(0))
}

fn bcm_topk_counted(g: &Graph, k: usize, counter: &AtomicU64) -> Result<Vec<(u32, u64)>> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::param(format!("k = {k} outside 1..={n}")));
    }
    let mut dist = vec![UNREACHED; n];
    let mut queue: Vec<u32> = Vec::with_capacity(n);
    // Sorted by (farness, id), at most k entries.
    let mut top: Vec<(u64, u32)> = Vec::with_capacity(k + 1);
    for s in g.degree_order() {
        let cutoff = if top.len() == k { top[k - 1].0 } else { u64::MAX };
        counter.fetch_add(1, Ordering::Relaxed);
        if let Some(f) = pruned_farness(g, s, cutoff, &mut dist, &mut queue) {
            let pos = top.partition_point(|&e| e < (f, s));
            if pos < k {
                top.insert(pos, (f, s));
                top.truncate(k);
            }
        }
    }
    Ok(top.into_iter().map(|(f, v)| (v, f)).collect())
}

/// Farness of `s`, or `None` once it provably exceeds `cutoff`.
///
/// After level `l` is expanded, the `c` vertices found at level `l + 1` add
/// exactly `(l + 1) c` and every still unseen vertex adds at least `l + 2`.
fn pruned_farness(g: &Graph, s: u32, cutoff: u64, dist: &mut [u32], queue: &mut Vec<u32>) -> Option<u64> {
    for &v in queue.iter() {
        dist[v as usize] = UNREACHED;
    }
    queue.clear();
    let n = g.n() as u64;
    dist[s as usize] = 0;
    queue.push(s);
    let mut head = 0;
    let mut sum = 0u64;
    let mut level = 0u64;
    while head < queue.len() {
        let end = queue.len();
        while head < end {
            let u = queue[head];
            head += 1;
            for &w in g.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = level as u32 + 1;
                    queue.push(w);
                }
            }
        }
        let found = (queue.len() - end) as u64;
        sum += (level + 1) * found;
        let unseen = n - queue.len() as u64;
        if sum + (level + 2) * unseen > cutoff {
            return None;
        }
        level += 1;
    }
    Some(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::all_farness;

    #[test]
    fn star_and_path() {
        let star = Graph::from_edges(&(1..=5).map(|i| (0, i)).collect::<Vec<_>>()).unwrap().0;
        assert_eq!(bcm_topk(&star, 1).unwrap(), vec![(0, 5)]);
        let p4 = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap().0;
        assert_eq!(bcm_topk(&p4, 2).unwrap(), vec![(1, 4), (2, 4)]);
    }

    #[test]
    fn matches_brute_force_with_ties() {
        let g = Graph::from_edges(&(0..12).map(|i| (i, (i + 1) % 12)).chain([(0, 6)]).collect::<Vec<_>>())
            .unwrap()
            .0;
        let far = all_farness(&g);
        let mut want: Vec<(u32, u64)> = far.iter().enumerate().map(|(v, &f)| (v as u32, f)).collect();
        want.sort_by_key(|&(v, f)| (f, v));
        for k in 1..=12 {
            assert_eq!(bcm_topk(&g, k).unwrap(), want[..k].to_vec());
        }
    }

    #[test]
    fn bad_k() {
        let g = Graph::from_edges(&[(0, 1)]).unwrap().0;
        assert!(bcm_topk(&g, 0).is_err());
        assert!(bcm_topk(&g, 3).is_err());
    }
}
