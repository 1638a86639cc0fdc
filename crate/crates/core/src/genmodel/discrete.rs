//! Exact discrete samplers for populations too large for the usual recurrences.

use rand::Rng as _;
use rand_distr::{Distribution, Poisson};

use crate::rng::Rng;

/// Weights below this fraction of the mode's are treated as zero.
const TAIL_CUTOFF: f64 = 1e-20;

/// Samples a log-concave pmf on `lo..=hi` with mode `mode`, given
/// `ratio(x) = P(x+1) / P(x)`.
pub(crate) fn sample_unimodal(
    rng: &mut Rng,
    lo: u64,
    hi: u64,
    mode: u64,
    ratio: impl Fn(u64) -> f64,
    left: &mut Vec<f64>,
    right: &mut Vec<f64>,
) -> u64 {
    debug_assert!(lo <= mode && mode <= hi);
    left.clear();
    right.clear();
    // right[i] is the weight of mode + i, left[i] of mode - 1 - i.
    let mut w = 1.0;
    let mut x = mode;
    right.push(w);
    while x < hi {
        w *= ratio(x);
        if w < TAIL_CUTOFF {
            break;
        }
        right.push(w);
        x += 1;
    }
    w = 1.0;
    x = mode;
    while x > lo {
        let r = ratio(x - 1);
        if r <= 0.0 {
            break;
        }
        w /= r;
        if w < TAIL_CUTOFF || !w.is_finite() {
            break;
        }
        left.push(w);
        x -= 1;
    }
    let total: f64 = right.iter().sum::<f64>() + left.iter().sum::<f64>();
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in right.iter().enumerate() {
        if u < w {
            return mode + i as u64;
        }
        u -= w;
    }
    for (i, &w) in left.iter().enumerate() {
        if u < w {
            return mode - 1 - i as u64;
        }
        u -= w;
    }
    mode
}

/// Reusable buffers for the walking sampler.
#[derive(Default)]
pub(crate) struct Scratch {
    pub(crate) left: Vec<f64>,
    pub(crate) right: Vec<f64>,
}

/// Below this standard deviation the pmf is tabulated outward from the mode.
const WALK_MAX_SD: f64 = 40.0;

/// `ln Γ(a) - ln Γ(b)` without cancellation for large arguments.
pub(crate) fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a.min(b) < 1e5 {
        return ln_gamma(a) - ln_gamma(b);
    }
    // Stirling series; the first omitted term is below 1e-28 here.
    let d = a - b;
    (a - 0.5) * (d / b).ln_1p() + d * b.ln() - d + (1.0 / a - 1.0 / b) / 12.0
        - (1.0 / a.powi(3) - 1.0 / b.powi(3)) / 360.0
}

fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Exact sampler for a log-concave pmf on `lo..=hi` with mode `mode`.
///
/// `ratio(x) = P(x+1)/P(x)`, `log_rel(x) = ln(P(x)/P(mode))`, `sd` the standard
/// deviation. Narrow laws are tabulated; wide ones use rejection from an
/// envelope that is flat within one `sd` of the mode and geometric beyond,
/// which dominates the pmf because log-increments are nonincreasing.
#[allow(clippy::too_many_arguments)]
pub(crate) fn sample_log_concave(
    rng: &mut Rng,
    lo: u64,
    hi: u64,
    mode: u64,
    sd: f64,
    ratio: impl Fn(u64) -> f64,
    log_rel: impl Fn(u64) -> f64,
    s: &mut Scratch,
) -> u64 {
    let w = sd.round() as u64;
    let a = mode.saturating_sub(w).max(lo);
    let b = mode.saturating_add(w).min(hi);
    // Log-increment bounding each tail; zero when the tail is empty.
    let sa = if a > lo { -ratio(a - 1).ln() } else { 0.0 };
    let sb = if b < hi { ratio(b).ln() } else { 0.0 };
    let steep = |slope: f64, open: bool| !open || slope < 0.0;
    if !(sd >= WALK_MAX_SD) || !steep(sa, a > lo) || !steep(sb, b < hi) {
        return sample_unimodal(rng, lo, hi, mode, ratio, &mut s.left, &mut s.right);
    }
    let (fa, fb) = (log_rel(a), log_rel(b));
    let tail = |f: f64, slope: f64| if slope < 0.0 { (f + slope).exp() / -slope.exp_m1() } else { 0.0 };
    let (mass_l, mass_r) = (tail(fa, sa), tail(fb, sb));
    let mid = (b - a + 1) as f64;
    let total = mid + mass_l + mass_r;
    loop {
        let u = rng.random::<f64>() * total;
        let v = 1.0 - rng.random::<f64>();
        let (x, envelope) = if u < mid {
            (a + (u as u64).min(b - a), 0.0)
        } else {
            let right = u - mid < mass_r;
            let (f, slope) = if right { (fb, sb) } else { (fa, sa) };
            let k = 1 + ((1.0 - rng.random::<f64>()).ln() / slope).floor() as u64;
            let x = if right {
                b.checked_add(k).filter(|&x| x <= hi)
            } else {
                a.checked_sub(k).filter(|&x| x >= lo)
            };
            let Some(x) = x else { continue };
            (x, f + k as f64 * slope)
        };
        if v.ln() <= log_rel(x) - envelope {
            return x;
        }
    }
}

/// Successes among `draws` items taken without replacement from `total`
/// items of which `successes` are marked.
pub(crate) fn hypergeometric(rng: &mut Rng, total: u64, successes: u64, draws: u64, s: &mut Scratch) -> u64 {
    debug_assert!(successes <= total && draws <= total);
    let failures = total - successes;
    let lo = draws.saturating_sub(failures);
    let hi = draws.min(successes);
    if lo == hi {
        return lo;
    }
    if draws <= 16 {
        let (mut t, mut k, mut x) = (total, successes, 0);
        for _ in 0..draws {
            if rng.random_range(0..t) < k {
                k -= 1;
                x += 1;
            }
            t -= 1;
        }
        return x;
    }
    let mode = (((draws as u128 + 1) * (successes as u128 + 1)) / (total as u128 + 2)) as u64;
    let mode = mode.clamp(lo, hi);
    let (t, k, n) = (total as f64, successes as f64, draws as f64);
    let p = k / t;
    let sd = (n * p * (1.0 - p) * (t - n) / (t - 1.0)).sqrt();
    let ratio = |x: u64| {
        let x = x as f64;
        (k - x) * (n - x) / ((x + 1.0) * (t - k - n + x + 1.0))
    };
    let m = mode as f64;
    let log_rel = |x: u64| {
        let x = x as f64;
        -(ln_gamma_ratio(x + 1.0, m + 1.0)
            + ln_gamma_ratio(k - x + 1.0, k - m + 1.0)
            + ln_gamma_ratio(n - x + 1.0, n - m + 1.0)
            + ln_gamma_ratio(t - k - n + x + 1.0, t - k - n + m + 1.0))
    };
    sample_log_concave(rng, lo, hi, mode, sd, ratio, log_rel, s)
}

/// Poisson draw conditioned on being at least one.
pub(crate) fn zero_truncated_poisson(rng: &mut Rng, lambda: f64) -> u64 {
    if lambda >= 1.0 {
        let p = Poisson::new(lambda).expect("finite positive mean");
        loop {
            let k = p.sample(rng) as u64;
            if k > 0 {
                return k;
            }
        }
    }
    // Inversion from k = 1; P(k) = lambda^k / (k! (e^lambda - 1)).
    let mut pk = lambda / lambda.exp_m1();
    let mut u = rng.random::<f64>();
    let mut k = 1u64;
    while u > pk && pk > 0.0 {
        u -= pk;
        k += 1;
        pk *= lambda / k as f64;
    }
    k
}

pub(crate) fn poisson(rng: &mut Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    Poisson::new(lambda).expect("finite positive mean").sample(rng) as u64
}
