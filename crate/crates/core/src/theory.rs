//! Branching-process constants and closed-form asymptotic predictions.
//!
//! Logarithms are natural; a logarithm to base `b` is computed as `ln x / ln b`.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::genmodel::{self, WeightMode};

/// Finite distribution `p_0..p_K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    probabilities: Vec<f64>,
    mean: f64,
}

const MASS_TOLERANCE: f64 = 1e-9;

impl DiscreteDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidDistribution("negative or non-finite entry".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        let mean = probabilities.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        Ok(DiscreteDistribution { probabilities, mean })
    }

    /// Normalized histogram of `counts[k]` occurrences of value `k`.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("no mass".into()));
        }
        Self::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }

    /// Distribution with `mass` placed on the listed values.
    pub fn from_points(points: &[(usize, f64)]) -> Result<Self> {
        let k = points.iter().map(|p| p.0).max().unwrap_or(0);
        let mut p = vec![0.0; k + 1];
        for &(v, m) in points {
            p[v] += m;
        }
        Self::new(p)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn p(&self, k: usize) -> f64 {
        self.probabilities.get(k).copied().unwrap_or(0.0)
    }

    /// First moment M₁.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Second raw moment M₂.
    pub fn second_moment(&self) -> f64 {
        self.probabilities.iter().enumerate().map(|(k, p)| (k * k) as f64 * p).sum()
    }

    pub fn max_support(&self) -> usize {
        self.probabilities.len().saturating_sub(1)
    }

    /// Probability generating function at `s`.
    pub fn pgf(&self, s: f64) -> f64 {
        self.probabilities.iter().rev().fold(0.0, |acc, &p| acc * s + p)
    }

    /// Derivative of the generating function at `s`.
    pub fn pgf_derivative(&self, s: f64) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &p)| acc * s + k as f64 * p)
    }
}

/// Size-biased shift μ(k) = (k+1) λ(k+1) / M₁(λ).
pub fn residual_distribution(lambda: &DiscreteDistribution) -> Result<DiscreteDistribution> {
    let m1 = lambda.mean();
    if !(m1 > 0.0) {
        return Err(Error::InvalidDistribution("zero mean".into()));
    }
    let mu: Vec<f64> = lambda.probabilities[1..]
        .iter()
        .enumerate()
        .map(|(k, &p)| (k + 1) as f64 * p / m1)
        .collect();
    DiscreteDistribution::new(mu)
}

/// Least fixed point of the generating function in `[0, 1]`.
pub fn extinction_probability(mu: &DiscreteDistribution) -> f64 {
    if mu.mean() <= 1.0 {
        return 1.0;
    }
    let mut s = 0.0;
    loop {
        let next = mu.pgf(s);
        if (next - s).abs() < 1e-12 {
            return next;
        }
        s = next;
    }
}

/// Offspring law of the branching process with finite branches pruned.
///
/// η(j) = Σ_{k≥j} μ(k) C(k,j) (1−q)^j q^{k−j} / (1−q) for j ≥ 1, η(0) = 0.
pub fn eta_distribution(mu: &DiscreteDistribution) -> Result<DiscreteDistribution> {
    let q = extinction_probability(mu);
    if q >= 1.0 {
        return Err(Error::NoGiantComponent);
    }
    let kmax = mu.max_support();
    let mut eta = vec![0.0; kmax + 1];
    let (lp, lq) = ((1.0 - q).ln(), q.ln());
    for (j, slot) in eta.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for k in j..=kmax {
            let m = mu.p(k);
            if m == 0.0 {
                continue;
            }
            if q == 0.0 {
                if k == j {
                    acc += m;
                }
                continue;
            }
            let ln_binom = ln_gamma(k as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((k - j) as f64 + 1.0);
            acc += m * (ln_binom + j as f64 * lp + (k - j) as f64 * lq).exp();
        }
        *slot = acc / (1.0 - q);
    }
    // Rounding in the pruned tail can leave a residual far below the tolerance.
    let total: f64 = eta.iter().sum();
    for e in eta.iter_mut() {
        *e /= total;
    }
    DiscreteDistribution::new(eta)
}

/// η(1) = f′(q) without building the whole pruned law.
pub fn eta_one(mu: &DiscreteDistribution) -> Result<f64> {
    let q = extinction_probability(mu);
    if q >= 1.0 {
        return Err(Error::NoGiantComponent);
    }
    Ok(mu.pgf_derivative(q))
}

/// Degree law implied by quantile weights on `n` vertices: `max(1, round(w))`
/// half-edges per vertex, truncated at the largest weight.
pub fn lambda_from_weights(n: usize, beta: f64) -> Result<DiscreteDistribution> {
    if beta <= 2.0 {
        return Err(Error::param("degree law has unbounded mean for beta <= 2"));
    }
    let ws = genmodel::power_law_weights(n, beta, WeightMode::Quantile, 0)?;
    let h: Vec<u64> = ws.weights.iter().map(|&w| (w.round() as u64).max(1)).collect();
    let mut counts = vec![0u64; h[0] as usize + 1];
    for d in h {
        counts[d as usize] += 1;
    }
    DiscreteDistribution::from_counts(&counts)
}

/// Power-law regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// 1 < β < 2
    UltraSmall,
    /// 2 < β < 3
    Small,
    /// β > 3
    Finite,
}

impl Regime {
    pub fn of(beta: f64) -> Result<Regime> {
        if !(beta > 1.0) || !beta.is_finite() {
            return Err(Error::DegreeDistributionUndefined(beta));
        }
        if beta == 2.0 || beta == 3.0 {
            return Err(Error::OpenCase(beta));
        }
        Ok(if beta < 2.0 {
            Regime::UltraSmall
        } else if beta < 3.0 {
            Regime::Small
        } else {
            Regime::Finite
        })
    }
}

/// Asymptotic predictions for one `(β, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub beta: f64,
    pub n: usize,
    pub regime: Regime,
    /// Predicted d̃_avg.
    pub d_avg_tilde: f64,
    /// Tail constant c; for 1<β<2 the value `n^c_exponent`.
    pub c: f64,
    /// Exponent of n in c, only for 1<β<2.
    pub c_exponent: Option<f64>,
    pub q: Option<f64>,
    pub eta1: Option<f64>,
    pub m1_mu: Option<f64>,
    /// d̃_avg + 2 ln n / (−ln c), floored for 1<β<2.
    pub diameter_pred: f64,
    /// ⌊3 + (β−2)/(β−1)⌋, the direct closed form stated for 1<β<2.
    pub diameter_corollary: Option<f64>,
    /// Coefficient of ln n in the leading-order diameter, for β>2.
    pub diameter_slope: Option<f64>,
    pub avg_dist_pred: f64,
    /// Interval predicted for the average distance.
    pub avg_dist_bounds: (f64, f64),
    /// 2 d̃_avg / (D − d̃_avg) when the denominator is positive.
    #[serde(rename = "C")]
    pub big_c: Option<f64>,
    /// T̃_d(√n) for d = 1, 2, 4, ..., as `(d, value)`.
    pub t_tilde_sqrt_n: Vec<(u64, f64)>,
}

impl Prediction {
    /// Predicted T̃_d(n^x).
    pub fn t_tilde(&self, d: u64, x: f64) -> f64 {
        let ln_n = (self.n as f64).ln();
        match self.regime {
            Regime::UltraSmall => {
                if d as f64 >= (self.n as f64).powf(x) {
                    1.0
                } else {
                    2.0
                }
            }
            Regime::Small => {
                let ln_d = (d.max(2) as f64).ln();
                let v = (x * ln_n / ln_d).ln() / (1.0 / (self.beta - 2.0)).ln();
                v.max(1.0)
            }
            Regime::Finite => {
                let m1 = self.m1_mu.expect("set for beta > 3");
                ((x * ln_n - (d.max(1) as f64).ln()) / m1.ln()).max(1.0)
            }
        }
    }
}

/// Fills a [`Prediction`]; `lambda` (the truncated degree law) is required for β > 2.
pub fn predict(beta: f64, n: usize, lambda: Option<&DiscreteDistribution>) -> Result<Prediction> {
    let regime = Regime::of(beta)?;
    if n < 2 {
        return Err(Error::param("n must be at least 2"));
    }
    let ln_n = (n as f64).ln();
    let mut p = Prediction {
        beta,
        n,
        regime,
        d_avg_tilde: 0.0,
        c: 0.0,
        c_exponent: None,
        q: None,
        eta1: None,
        m1_mu: None,
        diameter_pred: 0.0,
        diameter_corollary: None,
        diameter_slope: None,
        avg_dist_pred: 0.0,
        avg_dist_bounds: (0.0, 0.0),
        big_c: None,
        t_tilde_sqrt_n: Vec::new(),
    };
    match regime {
        Regime::UltraSmall => {
            let e = -(2.0 - beta) / (beta - 1.0);
            p.c_exponent = Some(e);
            p.c = (n as f64).powf(e);
            p.d_avg_tilde = 3.0;
            // 2 ln n / (−ln c) = 2 (β−1)/(2−β)
            p.diameter_pred = (3.0 + 2.0 * (beta - 1.0) / (2.0 - beta)).floor();
            p.diameter_corollary = Some((3.0 + (beta - 2.0) / (beta - 1.0)).floor());
            p.avg_dist_pred = 3.0;
            p.avg_dist_bounds = (2.0, 3.0);
        }
        Regime::Small | Regime::Finite => {
            let lambda = lambda.ok_or_else(|| Error::param("degree law required for beta > 2"))?;
            let mu = residual_distribution(lambda)?;
            let q = extinction_probability(&mu);
            let eta1 = eta_one(&mu)?;
            p.q = Some(q);
            p.eta1 = Some(eta1);
            p.m1_mu = Some(mu.mean());
            p.c = eta1;
            let slope = 2.0 / -eta1.ln();
            p.d_avg_tilde = if regime == Regime::Small {
                2.0 * ln_n.ln() / (1.0 / (beta - 2.0)).ln()
            } else {
                let slope_m1 = 1.0 / mu.mean().ln();
                p.diameter_slope = Some(slope + slope_m1);
                ln_n * slope_m1
            };
            if regime == Regime::Small {
                p.diameter_slope = Some(slope);
            }
            p.diameter_pred = p.d_avg_tilde + slope * ln_n;
            p.avg_dist_pred = p.d_avg_tilde;
            p.avg_dist_bounds = (p.d_avg_tilde - 1.0, p.d_avg_tilde);
        }
    }
    if p.diameter_pred > p.d_avg_tilde {
        p.big_c = Some(2.0 * p.d_avg_tilde / (p.diameter_pred - p.d_avg_tilde));
    }
    let kmax = (n as f64).powf(1.0 / (beta - 1.0)).min(1e12);
    let mut d = 1u64;
    while d as f64 <= kmax {
        p.t_tilde_sqrt_n.push((d, p.t_tilde(d, 0.5)));
        d *= 2;
    }
    Ok(p)
}

/// [`predict`] with the degree law derived from quantile weights.
pub fn predict_for_model(beta: f64, n: usize) -> Result<Prediction> {
    let regime = Regime::of(beta)?;
    let lambda = match regime {
        Regime::UltraSmall => None,
        _ => Some(lambda_from_weights(n, beta)?),
    };
    predict(beta, n, lambda.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dist(points: &[(usize, f64)]) -> DiscreteDistribution {
        DiscreteDistribution::from_points(points).unwrap()
    }

    #[test]
    fn validation() {
        assert!(DiscreteDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(DiscreteDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5 + 5e-10]).is_ok());
    }

    #[test]
    fn residual_examples() {
        let mu = residual_distribution(&dist(&[(1, 0.5), (3, 0.5)])).unwrap();
        assert_abs_diff_eq!(mu.p(0), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(mu.p(2), 0.75, epsilon = 1e-15);
        assert_eq!(residual_distribution(&dist(&[(1, 1.0)])).unwrap().probabilities(), &[1.0]);
        assert_eq!(residual_distribution(&dist(&[(2, 1.0)])).unwrap().probabilities(), &[0.0, 1.0]);
        assert!(residual_distribution(&dist(&[(0, 1.0)])).is_err());
    }

    #[test]
    fn extinction_examples() {
        assert_eq!(extinction_probability(&dist(&[(1, 1.0)])), 1.0);
        assert_eq!(extinction_probability(&dist(&[(0, 0.5), (2, 0.5)])), 1.0);
        assert_abs_diff_eq!(extinction_probability(&dist(&[(0, 0.2), (2, 0.8)])), 0.25, epsilon = 1e-11);
        assert_abs_diff_eq!(extinction_probability(&dist(&[(0, 0.25), (2, 0.75)])), 1.0 / 3.0, epsilon = 1e-11);
    }

    #[test]
    fn eta_examples() {
        let eta = eta_distribution(&dist(&[(0, 0.25), (2, 0.75)])).unwrap();
        assert_abs_diff_eq!(eta.p(0), 0.0);
        assert_abs_diff_eq!(eta.p(1), 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(eta.p(2), 0.5, epsilon = 1e-10);
        assert!(matches!(eta_distribution(&dist(&[(1, 1.0)])), Err(Error::NoGiantComponent)));
        let eta = eta_distribution(&dist(&[(2, 1.0)])).unwrap();
        assert_eq!(eta.p(1), 0.0);
        assert_eq!(eta.p(2), 1.0);
        let mu = dist(&[(0, 0.1), (1, 0.3), (3, 0.4), (6, 0.2)]);
        assert_abs_diff_eq!(eta_one(&mu).unwrap(), eta_distribution(&mu).unwrap().p(1), epsilon = 1e-10);
    }

    #[test]
    fn open_cases_rejected() {
        for b in [2.0, 3.0] {
            assert!(matches!(predict_for_model(b, 1000), Err(Error::OpenCase(_))));
        }
        assert!(matches!(predict_for_model(1.0, 1000), Err(Error::DegreeDistributionUndefined(_))));
    }

    #[test]
    fn ultra_small_row() {
        let p = predict_for_model(1.5, 100_000).unwrap();
        assert_eq!(p.d_avg_tilde, 3.0);
        assert_abs_diff_eq!(p.c_exponent.unwrap(), -1.0);
        let root = (100_000f64).sqrt();
        assert_eq!(p.t_tilde(root.ceil() as u64, 0.5), 1.0);
        assert_eq!(p.t_tilde(root.floor() as u64, 0.5), 2.0);
        assert_eq!(p.t_tilde(1, 0.5), 2.0);
        assert_eq!(p.diameter_pred, 5.0);
        assert_eq!(p.diameter_corollary, Some(2.0));
        assert_abs_diff_eq!(p.big_c.unwrap(), 3.0);
    }

    #[test]
    fn small_row_d_avg() {
        let p = predict_for_model(2.5, 100_000).unwrap();
        // 2 ln ln 1e5 / ln 2
        assert_abs_diff_eq!(p.d_avg_tilde, 7.0504, epsilon = 1e-4);
        let e = p.eta1.unwrap();
        assert!(e > 0.0 && e < 1.0);
        assert_abs_diff_eq!(p.big_c.unwrap(), 2.0 * p.d_avg_tilde / (p.diameter_pred - p.d_avg_tilde), epsilon = 1e-12);
    }

    #[test]
    fn finite_row_m1_matches_moments() {
        let lambda = lambda_from_weights(100_000, 3.5).unwrap();
        let p = predict(3.5, 100_000, Some(&lambda)).unwrap();
        let direct = (lambda.second_moment() - lambda.mean()) / lambda.mean();
        assert_abs_diff_eq!(p.m1_mu.unwrap(), direct, epsilon = 1e-9);
        let c = -p.eta1.unwrap().ln() / p.m1_mu.unwrap().ln();
        assert_abs_diff_eq!(p.big_c.unwrap(), c, epsilon = 1e-9);
    }

    #[test]
    fn predict_is_pure() {
        assert_eq!(predict_for_model(3.5, 5000).unwrap(), predict_for_model(3.5, 5000).unwrap());
    }
}
