//! Chung-Lu and Norros-Reittu graphs by skip sampling over sorted weights.
//!
//! Row `u` visits candidates `v > u` in weight order. The edge probability
//! `p(u, v)` is nonincreasing in `v`, so geometric jumps with the current
//! probability followed by thinning with `p(u, v) / p_current` yield each
//! pair independently with probability `p(u, v)` in expected `O(1 + deg)`
//! work. Every row draws from its own RNG stream.

use rand::Rng as _;
use rayon::prelude::*;

use super::discrete;
use super::{Generator, Multigraph, WeightSequence};
use crate::rng::{self, Rng};

/// Edge `{u, v}` present with probability `min(1, w_u w_v / M)`.
pub struct ChungLu;

/// Edge multiplicity `Poisson(w_u w_v / M)`; self-loops `Poisson(w_u^2 / 2M)`.
pub struct NorrosReittu;

impl Generator for ChungLu {
    fn name(&self) -> &'static str {
        "cl"
    }

    fn describe(&self) -> &'static str {
        "Chung-Lu: independent edges with probability min(1, w_u w_v / M)"
    }

    fn sample(&self, ws: &WeightSequence, seed: u64) -> Multigraph {
        let m = ws.total_m;
        rows(ws, seed, |x| (x / m).min(1.0), |_, _, _| 1, |_, _| 0)
    }
}

impl Generator for NorrosReittu {
    fn name(&self) -> &'static str {
        "nr"
    }

    fn describe(&self) -> &'static str {
        "Norros-Reittu: Poisson(w_u w_v / M) parallel edges per pair"
    }

    fn sample(&self, ws: &WeightSequence, seed: u64) -> Multigraph {
        let m = ws.total_m;
        rows(
            ws,
            seed,
            |x| -(-x / m).exp_m1(),
            |rng, _, x| discrete::zero_truncated_poisson(rng, x / m),
            |rng, w| discrete::poisson(rng, w * w / (2.0 * m)),
        )
    }
}

/// Runs every row in parallel and concatenates them in row order.
///
/// `prob(w_u * w_v)` is the presence probability, `mult` the multiplicity of a
/// present edge, `loops` the self-loop count of a vertex.
fn rows<P, K, L>(ws: &WeightSequence, seed: u64, prob: P, mult: K, loops: L) -> Multigraph
where
    P: Fn(f64) -> f64 + Sync,
    K: Fn(&mut Rng, u32, f64) -> u64 + Sync,
    L: Fn(&mut Rng, f64) -> u64 + Sync,
{
    let w = &ws.weights;
    let n = w.len();
    let per_row: Vec<Vec<(u32, u32, u64)>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut rng = rng::stream(seed, u as u64);
            let mut out = Vec::new();
            let l = loops(&mut rng, w[u]);
            if l > 0 {
                out.push((u as u32, u as u32, l));
            }
            let mut v = u + 1;
            if v >= n {
                return out;
            }
            let mut p = prob(w[u] * w[v]);
            while v < n && p > 0.0 {
                if p < 1.0 {
                    let r: f64 = 1.0 - rng.random::<f64>();
                    let skip = (r.ln() / (-p).ln_1p()).floor();
                    if skip >= (n - v) as f64 {
                        break;
                    }
                    v += skip as usize;
                }
                let x = w[u] * w[v];
                let q = prob(x);
                if rng.random::<f64>() * p < q {
                    out.push((u as u32, v as u32, mult(&mut rng, v as u32, x)));
                }
                p = q;
                v += 1;
            }
            out
        })
        .collect();
    Multigraph { n, edges: per_row.into_iter().flatten().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmodel::{power_law_weights, WeightMode};

    fn freq(g: &dyn Generator, ws: &WeightSequence, trials: u64) -> f64 {
        (0..trials).filter(|&s| !g.sample(ws, s).edges.iter().any(|e| e.0 != e.1)).count() as f64
            / trials as f64
    }

    #[test]
    fn two_vertex_probabilities() {
        let ws = WeightSequence::new(vec![1.0, 1.0]).unwrap();
        assert!((freq(&ChungLu, &ws, 20000) - 0.5).abs() < 0.015);
        assert!((freq(&NorrosReittu, &ws, 20000) - (-0.5f64).exp()).abs() < 0.015);
    }

    /// With normalizer M equal to the hub's weight, every w_v >= 1 attaches surely.
    #[test]
    fn probability_capped_at_one() {
        let mut weights = vec![1.0; 20];
        weights[0] = 40.0;
        weights[7] = 3.0;
        let ws = WeightSequence { total_m: weights[0], weights };
        for s in 0..20 {
            let m = ChungLu.sample(&ws, s);
            let hub = m.edges.iter().filter(|e| e.0 == 0).count();
            assert_eq!(hub, 19);
        }
    }

    #[test]
    fn pair_probabilities_match_formula() {
        let ws = WeightSequence::new(vec![5.0, 3.0, 2.0, 1.0, 1.0, 0.5]).unwrap();
        let m = ws.total_m;
        let trials = 20000;
        let mut hits = vec![vec![0u32; 6]; 6];
        for s in 0..trials {
            for &(u, v, _) in &ChungLu.sample(&ws, s).edges {
                hits[u as usize][v as usize] += 1;
            }
        }
        for u in 0..6 {
            for v in u + 1..6 {
                let p = (ws.weights[u] * ws.weights[v] / m).min(1.0);
                let f = hits[u][v] as f64 / trials as f64;
                assert!((f - p).abs() < 0.015, "({u},{v}) {f} vs {p}");
            }
        }
    }

    #[test]
    fn nr_multi_edge_total_is_half_m() {
        let ws = power_law_weights(1000, 2.5, WeightMode::Quantile, 0).unwrap();
        let total: u64 = (0..100).map(|s| NorrosReittu.sample(&ws, s).edge_count()).sum();
        let mean = total as f64 / 100.0;
        let want = ws.total_m / 2.0;
        assert!((mean / want - 1.0).abs() < 0.05, "{mean} vs {want}");
    }

    #[test]
    fn rows_independent_of_threads() {
        let ws = power_law_weights(3000, 2.5, WeightMode::Quantile, 0).unwrap();
        let a = ChungLu.sample(&ws, 4);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| ChungLu.sample(&ws, 4));
        assert_eq!(a, b);
    }
}
