//! Similarity matrices, weightings and magnitude.
//!
//! The weighting solver walks a ladder: Cholesky (the positive definite case),
//! then full-pivot LU (invertible but indefinite), and finally reports the
//! weighting as undefined. An undefined magnitude is a value, not a panic:
//! some finite metric spaces have no weighting at particular scales.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::line;
use crate::metric::{self, FiniteMetricSpace, MetricError, Norm, SpaceKind, SpaceSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("magnitude undefined at t = {t}: {reason} (condition estimate {condition:e})")]
    Undefined { t: f64, condition: f64, reason: String },
    #[error("rows of the similarity matrix have unequal sums (relative spread {spread:e})")]
    NotRowHomogeneous { spread: f64 },
    #[error(
        "magnitude decreased from {previous} to {current} between levels {from} and {to} of a nested family"
    )]
    MonotonicityViolation { from: usize, to: usize, previous: f64, current: f64 },
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("t grid must be nonempty, positive and sorted")]
    BadGrid,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{0}")]
    Line(#[from] line::LineError),
}

/// `Z(i, j) = exp(-t·d(i, j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    entries: DMatrix<f64>,
    scale: f64,
}

impl SimilarityMatrix {
    pub fn new(space: &FiniteMetricSpace, t: f64) -> Self {
        let n = space.len();
        let entries = DMatrix::from_fn(n, n, |i, j| (-t * space.get(i, j)).exp());
        SimilarityMatrix { entries, scale: t }
    }

    /// Wraps an arbitrary symmetric matrix (used for generic matrix magnitude).
    pub fn from_matrix(entries: DMatrix<f64>, scale: f64) -> Self {
        SimilarityMatrix { entries, scale }
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn source_scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.nrows() == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.entries.clone().cholesky().is_some()
    }
}

pub fn similarity_matrix(space: &FiniteMetricSpace, t: f64) -> SimilarityMatrix {
    SimilarityMatrix::new(space, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightingStatus {
    UniquePD,
    UniqueInvertible,
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Bound on `max_i |(Zw)_i - 1|` for an accepted weighting.
    pub residual_tol: f64,
    /// Condition estimate above which the LU stage gives up; `None` means `1/(N·1e-14)`.
    pub condition_limit: Option<f64>,
    /// Iterative refinement sweeps after the first solve.
    pub refinement_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { residual_tol: 1e-9, condition_limit: None, refinement_steps: 2 }
    }
}

impl SolverOptions {
    fn condition_limit_for(&self, n: usize) -> f64 {
        self.condition_limit.unwrap_or(1.0 / (n.max(1) as f64 * 1e-14))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightingResult {
    pub weighting: Vec<f64>,
    /// Equal to `weighting`: similarity matrices here are symmetric.
    pub coweighting: Vec<f64>,
    pub magnitude: Option<f64>,
    pub status: WeightingStatus,
    /// Estimate of the 1-norm condition number of `Z`.
    pub condition_estimate: f64,
    /// `max_i |(Zw)_i - 1|` of the returned vector.
    pub residual: f64,
    /// Smallest over largest absolute LU pivot, when the LU stage ran.
    pub pivot_ratio: Option<f64>,
    pub failure: Option<String>,
}

impl WeightingResult {
    pub fn is_defined(&self) -> bool {
        self.status != WeightingStatus::Undefined
    }
}

pub fn solve_weighting(z: &SimilarityMatrix) -> WeightingResult {
    solve_weighting_with(z, &SolverOptions::default())
}

pub fn solve_weighting_with(z: &SimilarityMatrix, opts: &SolverOptions) -> WeightingResult {
    let a = &z.entries;
    let n = a.nrows();
    let ones = DVector::from_element(n, 1.0);
    let norm1 = one_norm(a);

    if let Some(chol) = a.clone().cholesky() {
        let w = refine(a, &ones, opts.refinement_steps, |b| chol.solve(b));
        let inv_norm = hager_inverse_norm(n, |b| chol.solve(b));
        let residual = residual_inf(a, &w);
        let condition = norm1 * inv_norm;
        if residual <= opts.residual_tol {
            return defined(w, WeightingStatus::UniquePD, condition, residual, None);
        }
        return undefined(
            w,
            condition,
            residual,
            None,
            format!("Cholesky residual {residual:e} exceeds tolerance"),
        );
    }

    let lu = a.clone().full_piv_lu();
    let pivots = lu.u().diagonal().map(f64::abs);
    let (pmin, pmax) = pivots
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    let pivot_ratio = if pmax > 0.0 { pmin / pmax } else { 0.0 };
    if pmin == 0.0 || !lu.is_invertible() {
        return undefined(
            DVector::from_element(n, f64::NAN),
            f64::INFINITY,
            f64::INFINITY,
            Some(pivot_ratio),
            "similarity matrix is singular".into(),
        );
    }
    let solve = |b: &DVector<f64>| lu.solve(b).unwrap_or_else(|| DVector::from_element(n, f64::NAN));
    let inv_norm = hager_inverse_norm(n, solve);
    let condition = norm1 * inv_norm;
    let w = refine(a, &ones, opts.refinement_steps, solve);
    let residual = residual_inf(a, &w);
    if !condition.is_finite() || condition > opts.condition_limit_for(n) {
        return undefined(
            w,
            condition,
            residual,
            Some(pivot_ratio),
            format!("numerically singular (condition {condition:e})"),
        );
    }
    if !(residual <= opts.residual_tol) {
        return undefined(
            w,
            condition,
            residual,
            Some(pivot_ratio),
            format!("LU residual {residual:e} exceeds tolerance"),
        );
    }
    defined(w, WeightingStatus::UniqueInvertible, condition, residual, Some(pivot_ratio))
}

fn defined(
    w: DVector<f64>,
    status: WeightingStatus,
    condition: f64,
    residual: f64,
    pivot_ratio: Option<f64>,
) -> WeightingResult {
    let weighting: Vec<f64> = w.iter().copied().collect();
    let magnitude = weighting.iter().sum();
    WeightingResult {
        coweighting: weighting.clone(),
        weighting,
        magnitude: Some(magnitude),
        status,
        condition_estimate: condition,
        residual,
        pivot_ratio,
        failure: None,
    }
}

fn undefined(
    w: DVector<f64>,
    condition: f64,
    residual: f64,
    pivot_ratio: Option<f64>,
    reason: String,
) -> WeightingResult {
    let weighting: Vec<f64> = w.iter().copied().collect();
    WeightingResult {
        coweighting: weighting.clone(),
        weighting,
        magnitude: None,
        status: WeightingStatus::Undefined,
        condition_estimate: condition,
        residual,
        pivot_ratio,
        failure: Some(reason),
    }
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn residual_inf(a: &DMatrix<f64>, w: &DVector<f64>) -> f64 {
    let r = a * w;
    r.iter().map(|x| (x - 1.0).abs()).fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x) })
}

fn refine<F>(a: &DMatrix<f64>, b: &DVector<f64>, steps: usize, solve: F) -> DVector<f64>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let mut x = solve(b);
    for _ in 0..steps {
        let r = b - a * &x;
        x += solve(&r);
    }
    x
}

/// Hager's estimate of `‖A⁻¹‖₁` for symmetric `A`, given a solver for `A`.
fn hager_inverse_norm<F>(n: usize, solve: F) -> f64
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    if n == 0 {
        return 0.0;
    }
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut estimate = 0.0;
    for _ in 0..5 {
        let y = solve(&x);
        estimate = y.iter().map(|v| v.abs()).sum::<f64>();
        let xi = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        let z = solve(&xi);
        let (j, zmax) = z
            .iter()
            .map(|v| v.abs())
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        if !zmax.is_finite() {
            return f64::INFINITY;
        }
        if zmax <= z.dot(&x) {
            break;
        }
        x = DVector::zeros(n);
        x[j] = 1.0;
    }
    estimate
}

/// `|tA|`, or [`EngineError::Undefined`] when `tA` has no weighting.
pub fn magnitude(space: &FiniteMetricSpace, t: f64) -> Result<f64, EngineError> {
    check_scale(t)?;
    let z = SimilarityMatrix::new(space, t);
    let res = solve_weighting(&z);
    res.magnitude.ok_or_else(|| EngineError::Undefined {
        t,
        condition: res.condition_estimate,
        reason: res.failure.unwrap_or_default(),
    })
}

pub fn weighting(space: &FiniteMetricSpace, t: f64) -> Result<WeightingResult, EngineError> {
    check_scale(t)?;
    Ok(solve_weighting(&SimilarityMatrix::new(space, t)))
}

fn check_scale(t: f64) -> Result<(), EngineError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(EngineError::BadScale(t))
    }
}

/// One point of the magnitude function `t ↦ |tA|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnitudeFunctionSample {
    pub t: f64,
    pub magnitude: Option<f64>,
    pub status: WeightingStatus,
    pub positive_definite: bool,
    pub residual: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnitudeFunction {
    pub samples: Vec<MagnitudeFunctionSample>,
    /// Differences between consecutive defined samples in the last quarter of the grid.
    pub tail_differences: Vec<f64>,
}

impl MagnitudeFunction {
    pub fn values(&self) -> Vec<Option<f64>> {
        self.samples.iter().map(|s| s.magnitude).collect()
    }
}

/// Samples `t ↦ |tA|` over a sorted grid. Undefined points are recorded, not fatal.
pub fn magnitude_function(space: &FiniteMetricSpace, t_grid: &[f64]) -> Result<MagnitudeFunction, EngineError> {
    if t_grid.is_empty()
        || t_grid.iter().any(|t| !(*t > 0.0) || !t.is_finite())
        || t_grid.windows(2).any(|w| w[1] < w[0])
    {
        return Err(EngineError::BadGrid);
    }
    // each t is an independent solve; collect preserves grid order
    let samples: Vec<MagnitudeFunctionSample> = t_grid
        .par_iter()
        .map(|&t| {
            let res = solve_weighting(&SimilarityMatrix::new(space, t));
            MagnitudeFunctionSample {
                t,
                magnitude: res.magnitude,
                status: res.status,
                positive_definite: res.status == WeightingStatus::UniquePD,
                residual: res.residual,
                failure: res.failure,
            }
        })
        .collect();
    let start = samples.len() - samples.len().div_ceil(4);
    let tail: Vec<f64> = samples[start..].iter().filter_map(|s| s.magnitude).collect();
    let tail_differences = tail.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(MagnitudeFunction { samples, tail_differences })
}

/// `n` points from `lo` to `hi`, geometrically spaced when `log` is set.
pub fn t_grid(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| {
            let s = k as f64 / (n - 1) as f64;
            if log {
                (lo.ln() + s * (hi.ln() - lo.ln())).exp()
            } else {
                lo + s * (hi - lo)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NegativeTypeVerdict {
    CertifiedNegativeType,
    CertifiedNot,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefinitenessReport {
    /// Cholesky succeeded at every sampled `t`.
    pub is_positive_definite: bool,
    /// Per-sample Cholesky outcome, in the order given.
    pub positive_definite_at: Vec<(f64, bool)>,
    pub negative_type_verdict: NegativeTypeVerdict,
    /// Largest eigenvalue of the distance matrix restricted to `{x : Σx = 0}`.
    pub cnd_max_eigenvalue: f64,
    /// Scattered-space predicate `min_{i≠j} t·d(i,j) > log(N - 1)` at the smallest sampled `t`.
    pub scattered_bound_holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefinitenessOptions {
    /// Verdict is negative type when `λ_max ≤ certify_tol·‖D‖_F`.
    pub certify_tol: f64,
    /// Verdict is "not negative type" when `λ_max ≥ reject_tol·‖D‖_F`.
    pub reject_tol: f64,
}

impl Default for DefinitenessOptions {
    fn default() -> Self {
        DefinitenessOptions { certify_tol: 1e-10, reject_tol: 1e-6 }
    }
}

pub fn definiteness_report(space: &FiniteMetricSpace, t_samples: &[f64]) -> DefinitenessReport {
    definiteness_report_with(space, t_samples, &DefinitenessOptions::default())
}

pub fn definiteness_report_with(
    space: &FiniteMetricSpace,
    t_samples: &[f64],
    opts: &DefinitenessOptions,
) -> DefinitenessReport {
    let positive_definite_at: Vec<(f64, bool)> = t_samples
        .iter()
        .map(|&t| (t, SimilarityMatrix::new(space, t).is_positive_definite()))
        .collect();
    let is_positive_definite = positive_definite_at.iter().all(|&(_, pd)| pd);

    let lambda = cnd_max_eigenvalue(space);
    let dnorm = space.distances().iter().map(|d| d * d).sum::<f64>().sqrt();
    let negative_type_verdict = if lambda <= opts.certify_tol * dnorm {
        NegativeTypeVerdict::CertifiedNegativeType
    } else if lambda >= opts.reject_tol * dnorm {
        NegativeTypeVerdict::CertifiedNot
    } else {
        NegativeTypeVerdict::Inconclusive
    };

    let n = space.len();
    let t_min = t_samples.iter().copied().fold(f64::INFINITY, f64::min);
    let scattered_bound_holds = match space.min_distance() {
        None => true,
        Some(d) => t_min.is_finite() && t_min * d > ((n - 1) as f64).ln(),
    };

    DefinitenessReport {
        is_positive_definite,
        positive_definite_at,
        negative_type_verdict,
        cnd_max_eigenvalue: lambda,
        scattered_bound_holds,
    }
}

/// Largest eigenvalue of `VᵀDV` where the columns of `V` are an orthonormal
/// (Helmert) basis of the sum-zero hyperplane. Zero for one-point spaces.
pub fn cnd_max_eigenvalue(space: &FiniteMetricSpace) -> f64 {
    let n = space.len();
    if n < 2 {
        return 0.0;
    }
    let v = DMatrix::from_fn(n, n - 1, |i, k| {
        let k1 = (k + 1) as f64;
        let scale = 1.0 / (k1 * (k1 + 1.0)).sqrt();
        if i <= k {
            scale
        } else if i == k + 1 {
            -k1 * scale
        } else {
            0.0
        }
    });
    let d = DMatrix::from_row_slice(n, n, space.distances());
    let m = v.transpose() * d * v;
    let m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Relative spread allowed between row sums of `Z` for the homogeneous shortcut.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// `N / (row sum of Z)` for spaces whose similarity matrix has constant row sums.
pub fn homogeneous_magnitude(space: &FiniteMetricSpace, t: f64) -> Result<f64, EngineError> {
    check_scale(t)?;
    let n = space.len();
    let sums: Vec<f64> = (0..n)
        .map(|i| space.row(i).iter().map(|d| (-t * d).exp()).sum())
        .collect();
    let max = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = (max - min) / max;
    if spread > ROW_SUM_TOLERANCE {
        return Err(EngineError::NotRowHomogeneous { spread });
    }
    let total: f64 = sums.iter().sum();
    Ok((n * n) as f64 / total)
}

/// A refinement family of finite approximations to a compact space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpaceFamily {
    /// Uniform grid with `level` points on `[a, b]`; nested when levels are `k(m-1)+1` chains.
    IntervalGrid { a: f64, b: f64 },
    /// Cantor endpoints at depth `level` on `[0, length]`; always nested.
    CantorEndpoints { length: f64 },
    /// First `level` points of a seeded ball sample; always nested.
    BallSample { dim: usize, radius: f64, p: u32, seed: u64 },
    /// Uniform `level`-per-axis grid on a box in ℓ_p.
    LpBoxGrid { p: u32, extents: Vec<f64> },
}

impl SpaceFamily {
    pub fn spec_at(&self, level: usize) -> Result<SpaceSpec, EngineError> {
        let spec = match self {
            SpaceFamily::IntervalGrid { a, b } => {
                if level == 0 || !(b >= a) {
                    return Err(MetricError::BadSpec("interval grid needs level >= 1 and a <= b".into()).into());
                }
                let coords = if level == 1 {
                    vec![*a]
                } else {
                    (0..level).map(|k| a + (b - a) * k as f64 / (level - 1) as f64).collect()
                };
                SpaceSpec::new(SpaceKind::Points1d { coords })
            }
            SpaceFamily::CantorEndpoints { length } => {
                SpaceSpec::new(SpaceKind::CantorEndpoints { depth: level as u32, length: *length })
            }
            SpaceFamily::BallSample { dim, radius, p, seed } => SpaceSpec::seeded(
                SpaceKind::BallSample { dim: *dim, radius: *radius, count: level, p: *p },
                *seed,
            ),
            SpaceFamily::LpBoxGrid { p, extents } => SpaceSpec::new(SpaceKind::LpGrid {
                p: *p,
                extents: extents.clone(),
                points_per_axis: vec![level; extents.len()],
            }),
        };
        Ok(spec)
    }

    /// Whether the levels `lo < hi` produce nested subsets.
    pub fn nested(&self, lo: usize, hi: usize) -> bool {
        match self {
            SpaceFamily::IntervalGrid { .. } | SpaceFamily::LpBoxGrid { .. } => {
                lo == 1 || (lo >= 2 && (hi - 1) % (lo - 1) == 0)
            }
            SpaceFamily::CantorEndpoints { .. } | SpaceFamily::BallSample { .. } => true,
        }
    }
}

/// How approximation levels are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Backend {
    /// Dense weighting solve on the distance matrix.
    Dense,
    /// Closed-form line formula for subsets of ℝ.
    Line,
    /// Line formula for subsets of ℝ, dense solve otherwise.
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationStep {
    pub level: usize,
    pub n_points: usize,
    pub magnitude: Option<f64>,
    /// Difference from the previous defined level.
    pub increment: Option<f64>,
}

/// Slack on the monotonicity of nested approximations.
pub const MONOTONE_TOLERANCE: f64 = 1e-9;

/// Magnitudes of successive finite approximations at scale `t`. For nested
/// levels in ℝ, ℓ1ⁿ or ℓ2ⁿ (all of negative type) the sequence must be
/// nondecreasing; a drop beyond [`MONOTONE_TOLERANCE`] is an error.
pub fn approximate_compact_magnitude(
    family: &SpaceFamily,
    levels: &[usize],
    t: f64,
    backend: Backend,
) -> Result<Vec<ApproximationStep>, EngineError> {
    check_scale(t)?;
    let specs: Vec<SpaceSpec> = levels.iter().map(|&l| family.spec_at(l)).collect::<Result<_, _>>()?;
    let values: Vec<(usize, Result<f64, EngineError>)> = specs
        .par_iter()
        .map(|spec| evaluate_level(spec, t, backend))
        .collect::<Result<Vec<_>, EngineError>>()?;

    let mut steps: Vec<ApproximationStep> = Vec::with_capacity(levels.len());
    let mut previous: Option<(usize, f64)> = None;
    for (&level, (n_points, value)) in levels.iter().zip(values) {
        let magnitude = value.ok();
        let mut increment = None;
        if let Some(m) = magnitude {
            if let Some((prev_level, prev)) = previous {
                increment = Some(m - prev);
                if prev_level < level && family.nested(prev_level, level) && m < prev - MONOTONE_TOLERANCE {
                    return Err(EngineError::MonotonicityViolation {
                        from: prev_level,
                        to: level,
                        previous: prev,
                        current: m,
                    });
                }
            }
            previous = Some((level, m));
        }
        steps.push(ApproximationStep { level, n_points, magnitude, increment });
    }
    Ok(steps)
}

fn evaluate_level(
    spec: &SpaceSpec,
    t: f64,
    backend: Backend,
) -> Result<(usize, Result<f64, EngineError>), EngineError> {
    let coords = spec.line_coordinates();
    match (backend, coords) {
        (Backend::Line | Backend::Auto, Some(mut x)) => {
            x.sort_by(f64::total_cmp);
            let (m, _) = line::line_magnitude(&x, t)?;
            Ok((x.len(), Ok(m)))
        }
        (Backend::Line, None) => Err(MetricError::BadSpec("line backend needs a subset of the real line".into()).into()),
        _ => {
            let space = metric::generate_space(spec)?;
            Ok((space.len(), magnitude(&space, t)))
        }
    }
}

/// Magnitude of the finite subset of ℓ_pⁿ spanned by the given points.
pub fn point_cloud_magnitude(points: &[Vec<f64>], norm: Norm, t: f64) -> Result<f64, EngineError> {
    let space = FiniteMetricSpace::from_points(points, norm)?;
    magnitude(&space, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate_space, l1_product, named_graph, validate_metric};

    fn two_point(d: f64) -> FiniteMetricSpace {
        validate_metric(&[vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    fn points(coords: &[f64]) -> FiniteMetricSpace {
        generate_space(&SpaceSpec::new(SpaceKind::Points1d { coords: coords.to_vec() })).unwrap()
    }

    #[test]
    fn similarity_entries() {
        let z = similarity_matrix(&two_point(1.0), 1.0);
        let e = (-1.0f64).exp();
        assert_eq!(z.entries()[(0, 1)], e);
        assert_eq!(z.entries()[(0, 0)], 1.0);
        let z2 = similarity_matrix(&two_point(2.0), 0.5);
        assert_eq!(z.entries(), z2.entries());
    }

    #[test]
    fn two_point_weighting() {
        let res = solve_weighting(&similarity_matrix(&two_point(1.0), 1.0));
        // hand solve of [[1, e⁻¹],[e⁻¹, 1]] w = 1
        let w = 1.0 / (1.0 + (-1.0f64).exp());
        assert_eq!(res.status, WeightingStatus::UniquePD);
        for x in &res.weighting {
            assert!((x - w).abs() < 1e-15);
        }
        assert!((res.magnitude.unwrap() - 1.4621171572600098).abs() < 1e-12);
        assert_eq!(res.weighting, res.coweighting);
        assert!(res.residual <= 1e-9);
    }

    #[test]
    fn identity_limit() {
        let big = validate_metric(&[vec![0.0, 1e4, 1e4], vec![1e4, 0.0, 1e4], vec![1e4, 1e4, 0.0]]).unwrap();
        let res = weighting(&big, 1.0).unwrap();
        assert_eq!(res.weighting, vec![1.0; 3]);
        assert_eq!(res.magnitude, Some(3.0));
    }

    #[test]
    fn line_example_matches_closed_form() {
        let m = magnitude(&points(&[0.0, 1.0, 3.0]), 1.0).unwrap();
        let expected = 1.0 + 0.5f64.tanh() + 1.0f64.tanh();
        assert!((m - expected).abs() < 1e-12);
        assert!((m - 2.2237113133).abs() < 1e-9);
    }

    #[test]
    fn speyer_and_product_examples() {
        let k3 = generate_space(&named_graph("k3").unwrap()).unwrap();
        assert!((magnitude(&k3, 2f64.ln()).unwrap() - 1.5).abs() < 1e-12);
        assert!((homogeneous_magnitude(&k3, 2f64.ln()).unwrap() - 1.5).abs() < 1e-12);

        let square = l1_product(&two_point(1.0), &two_point(1.0));
        let expected = (2.0 / (1.0 + (-1.0f64).exp())).powi(2);
        assert!((magnitude(&square, 1.0).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 2.1377865).abs() < 1e-7);
    }

    #[test]
    fn homogeneous_examples() {
        let c4 = generate_space(&named_graph("c4").unwrap()).unwrap();
        let e = (-1.0f64).exp();
        let expected = 4.0 / (1.0 + 2.0 * e + e * e);
        let h = homogeneous_magnitude(&c4, 1.0).unwrap();
        assert!((h - expected).abs() < 1e-12);
        assert!((h - 2.1378).abs() < 1e-4);
        assert!((magnitude(&c4, 1.0).unwrap() - h).abs() < 1e-10);
        assert!(matches!(
            homogeneous_magnitude(&points(&[0.0, 1.0, 3.0]), 1.0),
            Err(EngineError::NotRowHomogeneous { .. })
        ));
    }

    #[test]
    fn magnitude_function_two_points() {
        let f = magnitude_function(&two_point(1.0), &[1.0, 2.0, 4.0]).unwrap();
        for s in &f.samples {
            let want = 1.0 + (s.t / 2.0).tanh();
            assert!((s.magnitude.unwrap() - want).abs() < 1e-12);
            assert!(s.positive_definite);
        }
        let got: Vec<f64> = f.samples.iter().map(|s| s.magnitude.unwrap()).collect();
        for (g, w) in got.iter().zip([1.46212, 1.76159, 1.96403]) {
            assert!((g - w).abs() < 1e-5);
        }
        assert!(magnitude_function(&two_point(1.0), &[]).is_err());
        assert!(magnitude_function(&two_point(1.0), &[2.0, 1.0]).is_err());
    }

    #[test]
    fn large_t_limit() {
        let a = points(&[0.0, 0.3, 1.0, 2.5, 2.7]);
        let t = 40.0 / a.min_distance().unwrap();
        assert!((magnitude(&a, t).unwrap() - 5.0).abs() < 1e-6);
    }

    #[test]
    fn k32_sweep_has_pathologies() {
        let k32 = generate_space(&named_graph("k32").unwrap()).unwrap();
        let f = magnitude_function(&k32, &t_grid(0.01, 5.0, 400, true)).unwrap();
        let vals = f.values();
        assert!(vals.iter().any(|v| v.is_none_or(|m| m < 0.0)));
        assert!(vals.windows(2).any(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b < a)));
        assert!(!f.tail_differences.is_empty());
    }

    #[test]
    fn definiteness_examples() {
        let line = points(&[0.0, 0.7, 1.0, 4.0, 4.5]);
        let r = definiteness_report(&line, &[0.1, 1.0, 10.0]);
        assert_eq!(r.negative_type_verdict, NegativeTypeVerdict::CertifiedNegativeType);
        assert!(r.is_positive_definite);

        let k32 = generate_space(&named_graph("k32").unwrap()).unwrap();
        let r = definiteness_report(&k32, &[0.1, 1.0]);
        assert_eq!(r.negative_type_verdict, NegativeTypeVerdict::CertifiedNot);
        // projected eigenvalues of the K_{3,2} distance matrix are {-2,-2,-2,2/5}
        assert!((r.cnd_max_eigenvalue - 0.4).abs() < 1e-12);
        assert!(!r.is_positive_definite);

        let tri = validate_metric(&[vec![0.0, 1.2, 1.2], vec![1.2, 0.0, 1.2], vec![1.2, 1.2, 0.0]]).unwrap();
        assert!(definiteness_report(&tri, &[1.0]).scattered_bound_holds);
        assert!(!definiteness_report(&tri, &[0.5]).scattered_bound_holds);
    }

    #[test]
    fn singular_similarity_is_undefined() {
        let z = SimilarityMatrix::from_matrix(DMatrix::from_element(3, 3, 1.0), 1.0);
        let res = solve_weighting(&z);
        assert_eq!(res.status, WeightingStatus::Undefined);
        assert!(res.magnitude.is_none());
        assert!(res.failure.is_some());
    }

    #[test]
    fn indefinite_but_invertible_uses_lu() {
        let k32 = generate_space(&named_graph("k32").unwrap()).unwrap();
        let res = weighting(&k32, 0.1).unwrap();
        assert_eq!(res.status, WeightingStatus::UniqueInvertible);
        assert!(res.residual <= 1e-9);
        assert!(res.pivot_ratio.is_some());
    }

    #[test]
    fn approximation_examples() {
        let family = SpaceFamily::IntervalGrid { a: 0.0, b: 2.0 };
        for backend in [Backend::Dense, Backend::Line] {
            let steps = approximate_compact_magnitude(&family, &[11, 101, 1001], 1.0, backend).unwrap();
            let m: Vec<f64> = steps.iter().map(|s| s.magnitude.unwrap()).collect();
            assert!(m[0] < m[1] && m[1] < m[2] && m[2] < 2.0);
            let want = 1.0 + 100.0 * 0.01f64.tanh();
            assert!((m[1] - want).abs() < 1e-11, "{backend:?}: {} vs {want}", m[1]);
            assert!((m[1] - 1.99996667).abs() < 1e-8);
        }

        let cantor = SpaceFamily::CantorEndpoints { length: 1.0 };
        let levels: Vec<usize> = (1..=10).collect();
        let steps = approximate_compact_magnitude(&cantor, &levels, 1.0, Backend::Auto).unwrap();
        let oracle = line::cantor_magnitude(1.0, 1.0, None).value;
        assert!(steps.windows(2).all(|w| w[1].magnitude >= w[0].magnitude));
        assert!(steps.iter().all(|s| s.magnitude.unwrap() <= oracle + 1e-12));

        let ball = SpaceFamily::BallSample { dim: 3, radius: 1.0, p: 2, seed: 2024 };
        let steps = approximate_compact_magnitude(&ball, &[100, 500], 1.0, Backend::Auto).unwrap();
        assert!(steps[1].magnitude.unwrap() <= 25.0 / 6.0);
        assert!(steps[1].increment.unwrap() >= 0.0);
    }

    mod props {
        use super::*;
        use crate::metric::Norm;
        use proptest::prelude::*;

        fn cloud(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
            proptest::collection::vec(proptest::collection::vec(-3.0f64..3.0, dim), 1..max)
        }

        fn space(points: &[Vec<f64>], norm: Norm) -> Option<FiniteMetricSpace> {
            FiniteMetricSpace::from_points(points, norm).ok()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn weighting_is_the_supremum(
                pts in cloud(2, 12),
                t in 0.2f64..5.0,
                probes in proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, 12), 50),
            ) {
                let Some(a) = space(&pts, Norm::L2) else { return Ok(()) };
                let z = SimilarityMatrix::new(&a, t);
                let res = solve_weighting(&z);
                prop_assume!(res.status == WeightingStatus::UniquePD);
                prop_assert!(res.residual <= 1e-9);
                let m = res.magnitude.unwrap();
                let ratio = |x: &[f64]| {
                    let v = DVector::from_column_slice(x);
                    v.sum().powi(2) / (v.transpose() * z.entries() * &v)[0]
                };
                prop_assert!((ratio(&res.weighting) - m).abs() <= 1e-9 * m.max(1.0));
                for p in &probes {
                    let x = &p[..a.len()];
                    if x.iter().any(|v| *v != 0.0) {
                        prop_assert!(ratio(x) <= m + 1e-9 * m.max(1.0));
                    }
                }
            }

            #[test]
            fn subsets_have_smaller_magnitude(pts in cloud(2, 14), t in 0.1f64..6.0, keep in proptest::collection::vec(any::<bool>(), 14)) {
                let Some(a) = space(&pts, Norm::L1) else { return Ok(()) };
                let idx: Vec<usize> = (0..a.len()).filter(|&i| keep[i]).collect();
                prop_assume!(!idx.is_empty());
                let b = a.subspace(&idx);
                let (ma, mb) = (magnitude(&a, t).unwrap(), magnitude(&b, t).unwrap());
                prop_assert!(1.0 - 1e-9 <= mb && mb <= ma + 1e-9, "{mb} vs {ma}");
                // positive definiteness passes to subsets
                prop_assert!(similarity_matrix(&b, t).is_positive_definite());
            }

            #[test]
            fn product_rule(a in cloud(1, 6), b in cloud(2, 6), t in 0.1f64..4.0) {
                let (Some(a), Some(b)) = (space(&a, Norm::L2), space(&b, Norm::L1)) else { return Ok(()) };
                let ab = l1_product(&a, &b);
                let (wa, wb) = (weighting(&a, t).unwrap(), weighting(&b, t).unwrap());
                let m = magnitude(&ab, t).unwrap();
                let expected = wa.magnitude.unwrap() * wb.magnitude.unwrap();
                prop_assert!((m - expected).abs() <= 1e-9 * expected);
                prop_assert!(similarity_matrix(&ab, t).is_positive_definite());
                // outer product of the factor weightings is a weighting of the product
                let w: Vec<f64> = wa.weighting.iter().flat_map(|x| wb.weighting.iter().map(move |y| x * y)).collect();
                let z = SimilarityMatrix::new(&ab, t);
                let r = z.entries() * DVector::from_vec(w);
                prop_assert!(r.iter().all(|v| (v - 1.0).abs() <= 1e-9));
            }

            #[test]
            fn scale_sandwich(nx in 1usize..5, ny in 1usize..5, lx in 0.1f64..3.0, ly in 0.1f64..3.0, p in 1u32..3, t in 1.0f64..8.0) {
                let spec = SpaceSpec::new(SpaceKind::LpGrid { p, extents: vec![lx, ly], points_per_axis: vec![nx, ny] });
                let a = generate_space(&spec).unwrap();
                let base = magnitude(&a, 1.0).unwrap();
                let scaled = magnitude(&a, t).unwrap();
                prop_assert!(scaled <= t * t * base + 1e-9);
                prop_assert!(scaled >= base / (t * t) - 1e-9);
            }
        }
    }
}
