use rand::seq::SliceRandom;

use super::discrete::{self, ln_gamma_ratio, Scratch};
use super::{Generator, Multigraph, WeightSequence};
use crate::rng::{self, Rng};

/// Configuration model: uniform perfect matching of half-edges.
pub struct ConfigurationModel;

/// Above this many half-edges the matching is sampled vertex by vertex
/// instead of shuffling an explicit half-edge array.
pub const SHUFFLE_LIMIT: u64 = 1 << 24;

/// Half-edges per vertex: `max(1, round(w))`, plus one at vertex 0 when the total is odd.
pub fn half_edges(ws: &WeightSequence) -> Vec<u64> {
    let mut h: Vec<u64> = ws.weights.iter().map(|&w| (w.round() as u64).max(1)).collect();
    if h.iter().sum::<u64>() % 2 == 1 {
        h[0] += 1;
    }
    h
}

impl Generator for ConfigurationModel {
    fn name(&self) -> &'static str {
        "cm"
    }

    fn describe(&self) -> &'static str {
        "configuration model: uniform pairing of round(w) half-edges"
    }

    fn sample(&self, ws: &WeightSequence, seed: u64) -> Multigraph {
        pair_half_edges(&half_edges(ws), seed)
    }
}

/// Uniform perfect matching of `h[v]` half-edges per vertex; the total must be even.
pub fn pair_half_edges(h: &[u64], seed: u64) -> Multigraph {
    if h.iter().sum::<u64>() <= SHUFFLE_LIMIT {
        shuffle_pairing(h, seed)
    } else {
        grouped_pairing(h, seed)
    }
}

pub(crate) fn shuffle_pairing(h: &[u64], seed: u64) -> Multigraph {
    let mut stubs: Vec<u32> = Vec::with_capacity(h.iter().sum::<u64>() as usize);
    for (v, &c) in h.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v as u32, c as usize));
    }
    assert!(stubs.len() % 2 == 0, "odd half-edge total");
    stubs.shuffle(&mut rng::seeded(seed));
    let pairs = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    Multigraph::from_pairs(h.len(), pairs)
}

/// Exact matching sampler whose cost does not grow with the half-edge count.
///
/// Vertices are resolved in index order. With `r` half-edges left at `v` and
/// `o` at later vertices, the number `s` of pairs inside `v` has
/// `P(s+1)/P(s) = j(j-1) / (2(s+1)(o-j+2))` where `j = r - 2s`; the remaining
/// `j` half-edges of `v` hit a uniform `j`-subset of the others, drawn as a
/// multivariate hypergeometric by descending a tree of remaining counts.
pub(crate) fn grouped_pairing(h: &[u64], seed: u64) -> Multigraph {
    let n = h.len();
    let size = n.next_power_of_two();
    let mut tree = vec![0u64; 2 * size];
    tree[size..size + n].copy_from_slice(h);
    for i in (1..size).rev() {
        tree[i] = tree[2 * i] + tree[2 * i + 1];
    }
    assert!(tree[1] % 2 == 0, "odd half-edge total");
    let mut rng = rng::seeded(seed);
    let mut scratch = Scratch::default();
    let mut edges = Vec::new();
    let mut stack = Vec::new();
    for v in 0..n {
        let r = tree[size + v];
        if r == 0 {
            continue;
        }
        let mut i = size + v;
        while i >= 1 {
            tree[i] -= r;
            i /= 2;
        }
        let o = tree[1];
        let loops = self_pairs(&mut rng, r, o, &mut scratch);
        if loops > 0 {
            edges.push((v as u32, v as u32, loops));
        }
        let cross = r - 2 * loops;
        if cross == 0 {
            continue;
        }
        stack.push((1usize, cross));
        while let Some((node, draws)) = stack.pop() {
            if node >= size {
                tree[node] -= draws;
                edges.push((v as u32, (node - size) as u32, draws));
                continue;
            }
            let left = tree[2 * node];
            let x = discrete::hypergeometric(&mut rng, tree[node], left, draws, &mut scratch);
            tree[node] -= draws;
            if draws > x {
                stack.push((2 * node + 1, draws - x));
            }
            if x > 0 {
                stack.push((2 * node, x));
            }
        }
    }
    edges.sort_unstable();
    Multigraph { n, edges }
}

/// Number of pairs formed among `r` half-edges of one vertex when `o` others remain.
fn self_pairs(rng: &mut Rng, r: u64, o: u64, scratch: &mut Scratch) -> u64 {
    let lo = r.saturating_sub(o).div_ceil(2);
    let hi = r / 2;
    if lo >= hi {
        return lo;
    }
    let ratio = |s: u64| {
        let j = (r - 2 * s) as f64;
        j * (j - 1.0) / (2.0 * (s as f64 + 1.0) * (o as f64 - j + 2.0))
    };
    // The ratio decreases in s, so the mode is the first s where it drops below 1.
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let mid = a + (b - a) / 2;
        if ratio(mid) < 1.0 {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    let mode = a;
    // P(s) is proportional to 1 / ((r-2s)! s! (h+s)! 4^s) with h = (o-r)/2.
    let (rf, h, m) = (r as f64, (o as f64 - r as f64) / 2.0, mode as f64);
    let log_rel = |s: u64| {
        let s = s as f64;
        -(ln_gamma_ratio(rf - 2.0 * s + 1.0, rf - 2.0 * m + 1.0)
            + ln_gamma_ratio(s + 1.0, m + 1.0)
            + ln_gamma_ratio(h + s + 1.0, h + m + 1.0)
            + (s - m) * 4f64.ln())
    };
    let curvature = if mode > lo { ratio(mode - 1).ln() - ratio(mode).ln() } else { 1.0 };
    let sd = 1.0 / curvature.max(1e-300).sqrt();
    discrete::sample_log_concave(rng, lo, hi, mode, sd, ratio, log_rel, scratch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmodel::{power_law_weights, WeightMode};

    #[test]
    fn unit_weights_single_edge() {
        let ws = WeightSequence::new(vec![1.0, 1.0]).unwrap();
        let m = ConfigurationModel.sample(&ws, 3);
        assert_eq!(m.edges, vec![(0, 1, 1)]);
    }

    #[test]
    fn degree_sequence_preserved() {
        let ws = WeightSequence::new(vec![3.0, 1.0, 1.0, 1.0]).unwrap();
        for seed in 0..50 {
            assert_eq!(ConfigurationModel.sample(&ws, seed).degrees(), vec![3, 1, 1, 1]);
            assert_eq!(grouped_pairing(&[3, 1, 1, 1], seed).degrees(), vec![3, 1, 1, 1]);
        }
    }

    #[test]
    fn parity_fix_at_max_weight() {
        let ws = WeightSequence::new(vec![2.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(half_edges(&ws), vec![3, 1, 1, 1]);
    }

    /// Of the 15 matchings of (3,1,1,1), 9 put a loop at the hub.
    #[test]
    fn samplers_agree_on_loop_frequency() {
        let trials = 20000;
        for sampler in [shuffle_pairing as fn(&[u64], u64) -> Multigraph, grouped_pairing] {
            let loops = (0..trials)
                .filter(|&s| sampler(&[3, 1, 1, 1], s).edges.iter().any(|e| e.0 == e.1))
                .count();
            let p = loops as f64 / trials as f64;
            assert!((p - 0.6).abs() < 0.015, "{p}");
        }
    }

    #[test]
    fn grouped_matches_shuffle_statistics() {
        let h = [6u64, 5, 3, 2, 2, 1, 1];
        let trials = 20000;
        let mean_mult = |f: fn(&[u64], u64) -> Multigraph| {
            let mut acc = [0f64; 3];
            for s in 0..trials {
                for &(u, v, c) in &f(&h, s).edges {
                    match (u, v) {
                        (0, 0) => acc[0] += c as f64,
                        (0, 1) => acc[1] += c as f64,
                        (2, 3) => acc[2] += c as f64,
                        _ => {}
                    }
                }
            }
            acc.map(|a| a / trials as f64)
        };
        let a = mean_mult(shuffle_pairing);
        let b = mean_mult(grouped_pairing);
        // Exact expectations for 20 half-edges.
        let want = [6.0 * 5.0 / (2.0 * 19.0), 30.0 / 19.0, 6.0 / 19.0];
        for i in 0..3 {
            assert!((a[i] - want[i]).abs() < 0.03, "shuffle {i}: {} vs {}", a[i], want[i]);
            assert!((b[i] - want[i]).abs() < 0.03, "grouped {i}: {} vs {}", b[i], want[i]);
        }
    }

    #[test]
    fn pre_collapse_degrees_exact() {
        let ws = power_law_weights(1000, 2.5, WeightMode::Quantile, 42).unwrap();
        let h = half_edges(&ws);
        assert_eq!(ConfigurationModel.sample(&ws, 42).degrees(), h);
        assert_eq!(grouped_pairing(&h, 42).degrees(), h);
    }

    #[test]
    fn huge_totals() {
        let ws = power_law_weights(2000, 1.5, WeightMode::Quantile, 1).unwrap();
        let h = half_edges(&ws);
        assert!(h.iter().sum::<u64>() > SHUFFLE_LIMIT / 8);
        let m = grouped_pairing(&h, 1);
        assert_eq!(m.degrees(), h);
    }
}
