//! Maximum diversity `sup_μ 1/(μᵀZμ)` over probability vectors, covering
//! numbers, and dimension estimates from growth rates.

mod covering;
mod dimension;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::metric::FiniteMetricSpace;

pub use covering::{covering_number, CoveringResult, EXACT_COVERING_LIMIT};
pub use dimension::{dimension_estimate, DimensionEstimate, DimensionMethod, DimensionOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiversityError {
    #[error("no convergence after {iterations} iterations (relative gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },
    #[error("{n} points exceed the enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("only {usable} usable samples in the window, need at least 4")]
    WindowTooNarrow { usable: usize },
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("space is empty")]
    Empty,
}

/// Probability vector with its support (indices of positive entries).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexDistribution {
    pub weights: Vec<f64>,
    pub support: Vec<usize>,
}

impl SimplexDistribution {
    fn from_weights(mut weights: Vec<f64>) -> Self {
        for w in weights.iter_mut() {
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let support = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
        Self { weights, support }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityResult {
    #[serde(rename = "diversity")]
    pub value: f64,
    #[serde(rename = "mu")]
    pub optimizer: SimplexDistribution,
    /// Largest KKT violation relative to `m = μᵀZμ`.
    pub kkt_gap: f64,
    pub iterations: usize,
    /// A direction of nonpositive curvature was met; the optimum may be local.
    pub non_convex: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityOptions {
    pub tol: f64,
    pub max_iterations: usize,
    /// Full recomputation of `Zμ` every this many steps.
    pub refresh_every: usize,
}

impl Default for DiversityOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iterations: 100_000, refresh_every: 1000 }
    }
}

fn similarity(space: &FiniteMetricSpace, t: f64) -> Vec<f64> {
    space.distances().iter().map(|d| (-t * d).exp()).collect()
}

fn check_input(space: &FiniteMetricSpace, t: f64) -> Result<(), DiversityError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(DiversityError::BadScale(t));
    }
    if space.is_empty() {
        return Err(DiversityError::Empty);
    }
    Ok(())
}

/// Relative KKT violation of `μ` given `g = Zμ`.
fn kkt_violation(mu: &[f64], g: &[f64]) -> f64 {
    let m: f64 = mu.iter().zip(g).map(|(a, b)| a * b).sum();
    let mut worst: f64 = 0.0;
    for (i, &gi) in g.iter().enumerate() {
        let v = if mu[i] > 0.0 { (gi - m).abs() } else { (m - gi).max(0.0) };
        worst = worst.max(v);
    }
    worst / m.abs().max(f64::MIN_POSITIVE)
}

fn mat_vec(z: &[f64], n: usize, mu: &[f64]) -> Vec<f64> {
    let support: Vec<usize> = (0..n).filter(|&j| mu[j] != 0.0).collect();
    (0..n).map(|i| support.iter().map(|&j| z[i * n + j] * mu[j]).sum()).collect()
}

pub fn max_diversity(space: &FiniteMetricSpace, t: f64) -> Result<DiversityResult, DiversityError> {
    max_diversity_with(space, t, &DiversityOptions::default())
}

/// Above this size the Cholesky probe is skipped and only curvature met
/// along the way marks a problem as nonconvex.
const DEFINITENESS_PROBE_LIMIT: usize = 4096;
/// Number of vertex restarts tried on nonconvex problems.
const RESTARTS: usize = 32;

/// Minimizes `μᵀZμ` over the simplex. A positive weighting of a positive
/// definite `Z` is returned directly; otherwise away-step Frank–Wolfe runs
/// from the uniform distribution and the KKT system is re-solved on the
/// active set.
/// When `Z` is indefinite the uniform point can be a saddle, so the search is
/// repeated from simplex vertices and the largest certified value is kept.
pub fn max_diversity_with(
    space: &FiniteMetricSpace,
    t: f64,
    opts: &DiversityOptions,
) -> Result<DiversityResult, DiversityError> {
    check_input(space, t)?;
    let n = space.len();
    let z = similarity(space, t);
    let cholesky = (n <= DEFINITENESS_PROBE_LIMIT).then(|| DMatrix::from_row_slice(n, n, &z).cholesky());
    let indefinite = matches!(cholesky, Some(None));
    if let Some(Some(c)) = &cholesky {
        // a positive weighting is already the optimum
        let w = c.solve(&DVector::from_element(n, 1.0));
        if w.iter().all(|&x| x > 0.0) {
            let mu = SimplexDistribution::from_weights(w.iter().copied().collect());
            let g = mat_vec(&z, n, &mu.weights);
            let kkt = kkt_violation(&mu.weights, &g);
            if kkt <= opts.tol {
                let m: f64 = mu.weights.iter().zip(&g).map(|(a, b)| a * b).sum();
                return Ok(DiversityResult { value: 1.0 / m, optimizer: mu, kkt_gap: kkt, iterations: 0, non_convex: false });
            }
        }
    }
    let first = solve_from(&z, n, vec![1.0 / n as f64; n], opts);
    let mut non_convex = indefinite || first.as_ref().is_ok_and(|r| r.non_convex);
    if !non_convex {
        return first;
    }
    let mut best = first;
    for i in 0..n.min(RESTARTS) {
        let mut start = vec![0.0; n];
        start[i] = 1.0;
        let candidate = solve_from(&z, n, start, opts);
        best = match (best, candidate) {
            (Ok(b), Ok(c)) => {
                non_convex |= c.non_convex;
                Ok(if c.value > b.value { c } else { b })
            }
            (Err(_), Ok(c)) => Ok(c),
            (b, Err(_)) => b,
        };
    }
    best.map(|mut r| {
        r.non_convex = non_convex;
        r
    })
}

fn solve_from(z: &[f64], n: usize, mut mu: Vec<f64>, opts: &DiversityOptions) -> Result<DiversityResult, DiversityError> {
    let mut g = mat_vec(z, n, &mu);
    let mut non_convex = false;
    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    while iterations < opts.max_iterations {
        let m: f64 = mu.iter().zip(&g).map(|(a, b)| a * b).sum();
        // lowest index wins ties
        let mut s = 0;
        for i in 1..n {
            if g[i] < g[s] {
                s = i;
            }
        }
        let mut v = usize::MAX;
        for i in 0..n {
            if mu[i] > 0.0 && (v == usize::MAX || g[i] > g[v]) {
                v = i;
            }
        }
        gap = (g[v] - g[s]) / m;
        if gap <= opts.tol {
            break;
        }
        iterations += 1;
        let fw_gain = m - g[s];
        let away_gain = g[v] - m;
        if fw_gain >= away_gain {
            let slope = g[s] - m;
            let curvature = z[s * n + s] - 2.0 * g[s] + m;
            let gamma = step(slope, curvature, 1.0, &mut non_convex);
            for i in 0..n {
                mu[i] *= 1.0 - gamma;
                g[i] = (1.0 - gamma) * g[i] + gamma * z[i * n + s];
            }
            mu[s] += gamma;
        } else {
            let gamma_max = mu[v] / (1.0 - mu[v]);
            let slope = m - g[v];
            let curvature = m - 2.0 * g[v] + z[v * n + v];
            let gamma = step(slope, curvature, gamma_max, &mut non_convex);
            for i in 0..n {
                mu[i] *= 1.0 + gamma;
                g[i] = (1.0 + gamma) * g[i] - gamma * z[i * n + v];
            }
            mu[v] -= gamma;
            if gamma >= gamma_max || mu[v] < 0.0 {
                mu[v] = 0.0;
            }
        }
        if iterations % opts.refresh_every == 0 {
            let total: f64 = mu.iter().sum();
            mu.iter_mut().for_each(|x| *x /= total);
            g = mat_vec(z, n, &mu);
        }
    }
    let fw = SimplexDistribution::from_weights(mu);
    let g = mat_vec(z, n, &fw.weights);
    let fw_kkt = kkt_violation(&fw.weights, &g);
    let fw_value = 1.0 / fw.weights.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>();
    let mut best = DiversityResult { value: fw_value, optimizer: fw, kkt_gap: fw_kkt, iterations, non_convex };
    if best.kkt_gap > opts.tol {
        if let Some((polished, steps)) = active_set(z, n, &best.optimizer.weights, opts) {
            let g = mat_vec(z, n, &polished.weights);
            let m: f64 = polished.weights.iter().zip(&g).map(|(a, b)| a * b).sum();
            let kkt = kkt_violation(&polished.weights, &g);
            if kkt <= opts.tol && m > 0.0 && 1.0 / m >= best.value * (1.0 - 1e-12) {
                best = DiversityResult {
                    value: 1.0 / m,
                    optimizer: polished,
                    kkt_gap: kkt,
                    iterations: iterations + steps,
                    non_convex,
                };
            }
        }
    }
    if best.kkt_gap > opts.tol {
        return Err(DiversityError::NonConvergence { iterations: best.iterations, gap: gap.min(best.kkt_gap) });
    }
    Ok(best)
}

/// Exact minimizer of `slope·2γ + curvature·γ²` on `[0, γ_max]`.
fn step(slope: f64, curvature: f64, gamma_max: f64, non_convex: &mut bool) -> f64 {
    if curvature <= 0.0 {
        *non_convex = true;
        return if slope < 0.0 { gamma_max } else { 0.0 };
    }
    (-slope / curvature).clamp(0.0, gamma_max)
}

/// Primal active-set method on `min ½wᵀZw − 1ᵀw, w ≥ 0`, started from the
/// support of `start`; the minimizer normalizes to the optimal `μ`.
fn active_set(z: &[f64], n: usize, start: &[f64], opts: &DiversityOptions) -> Option<(SimplexDistribution, usize)> {
    let mut free: Vec<usize> = (0..n).filter(|&i| start[i] > 0.0).collect();
    let g = mat_vec(z, n, start);
    let m: f64 = start.iter().zip(&g).map(|(a, b)| a * b).sum();
    let mut w: Vec<f64> = start.iter().map(|x| x / m).collect();
    let max_steps = 4 * n + 20;
    for step in 1..=max_steps {
        let k = free.len();
        let sub = DMatrix::from_fn(k, k, |a, b| z[free[a] * n + free[b]]);
        let ones = DVector::from_element(k, 1.0);
        let y = match sub.clone().cholesky() {
            Some(c) => c.solve(&ones),
            None => sub.full_piv_lu().solve(&ones)?,
        };
        if y.iter().all(|&v| v > 0.0) {
            w.iter_mut().for_each(|x| *x = 0.0);
            for (a, &i) in free.iter().enumerate() {
                w[i] = y[a];
            }
            let gw = mat_vec(z, n, &w);
            let total: f64 = w.iter().sum();
            // most violated outside constraint, judged on the normalized scale
            let entering = (0..n)
                .filter(|i| w[*i] == 0.0)
                .map(|i| (i, (gw[i] - 1.0) / total))
                .filter(|&(_, r)| r < -opts.tol * 1e-3)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match entering {
                None => return Some((SimplexDistribution::from_weights(w), step)),
                Some((i, _)) => {
                    free.push(i);
                    free.sort_unstable();
                }
            }
        } else {
            let mut alpha: f64 = 1.0;
            for (a, &i) in free.iter().enumerate() {
                if y[a] <= 0.0 {
                    alpha = alpha.min(w[i] / (w[i] - y[a]));
                }
            }
            for (a, &i) in free.iter().enumerate() {
                w[i] += alpha * (y[a] - w[i]);
            }
            let scale = w.iter().cloned().fold(0.0, f64::max);
            free.retain(|&i| w[i] > 1e-14 * scale);
            for i in 0..n {
                if !free.contains(&i) {
                    w[i] = 0.0;
                }
            }
            if free.is_empty() {
                return None;
            }
        }
    }
    None
}

pub const EXACT_DIVERSITY_LIMIT: usize = 15;

/// Support enumeration: every feasible equality-KKT point, best value kept.
pub fn max_diversity_exact(space: &FiniteMetricSpace, t: f64) -> Result<DiversityResult, DiversityError> {
    check_input(space, t)?;
    let n = space.len();
    if n > EXACT_DIVERSITY_LIMIT {
        return Err(DiversityError::TooLarge { n, limit: EXACT_DIVERSITY_LIMIT });
    }
    let z = similarity(space, t);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1usize..1 << n {
        let support: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let k = support.len();
        let sub = DMatrix::from_fn(k, k, |a, b| z[support[a] * n + support[b]]);
        let Some(y) = sub.full_piv_lu().solve(&DVector::from_element(k, 1.0)) else { continue };
        let total: f64 = y.iter().sum();
        if !(total > 0.0) || y.iter().any(|&v| v <= 0.0) {
            continue;
        }
        let mut mu = vec![0.0; n];
        for (a, &i) in support.iter().enumerate() {
            mu[i] = y[a] / total;
        }
        let m = 1.0 / total;
        let g = mat_vec(&z, n, &mu);
        if g.iter().any(|&gi| gi < m - 1e-12 * m.abs().max(1.0)) {
            continue;
        }
        if best.as_ref().is_none_or(|(bm, _)| m < *bm) {
            best = Some((m, mu));
        }
    }
    let (m, mu) = best.expect("the minimizer over the simplex satisfies KKT on its support");
    let g = mat_vec(&z, n, &mu);
    let kkt = kkt_violation(&mu, &g);
    Ok(DiversityResult {
        value: 1.0 / m,
        optimizer: SimplexDistribution::from_weights(mu),
        kkt_gap: kkt,
        iterations: (1usize << n) - 1,
        non_convex: false,
    })
}

/// KKT violation of the uniform distribution at scale `t`.
pub fn uniform_kkt_gap(space: &FiniteMetricSpace, t: f64) -> f64 {
    let n = space.len();
    let z = similarity(space, t);
    let mu = vec![1.0 / n as f64; n];
    kkt_violation(&mu, &mat_vec(&z, n, &mu))
}
