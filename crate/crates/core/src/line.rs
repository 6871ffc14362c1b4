//! Closed-form magnitudes for finite and compact subsets of the real line.
//!
//! On ℝ the similarity kernel factors along the order, so every finite set
//! has an explicit, strictly positive weighting and compact sets have a
//! magnitude determined by their length and the lengths of their gaps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LineError {
    #[error("empty point set")]
    Empty,
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("points are not sorted at index {0}")]
    Unsorted(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("interval endpoints reversed: [{0}, {1}]")]
    ReversedInterval(f64, f64),
    #[error("gaps {0} and {1} overlap")]
    OverlappingGaps(usize, usize),
    #[error("gap {0} is not inside the hull")]
    GapOutsideHull(usize),
    #[error("gap length must be nonnegative, got {0}")]
    NegativeGap(f64),
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
}

fn check_scale(t: f64) -> Result<(), LineError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(LineError::BadScale(t))
    }
}

/// Magnitude and weighting of `t·{a_1 < … < a_N}`:
/// `|tA| = 1 + Σ tanh(t(a_i − a_{i−1})/2)`, with each point weighted by the
/// average of the half-gap tanh terms on either side (an outer side counts as 1).
pub fn line_magnitude(points: &[f64], t: f64) -> Result<(f64, Vec<f64>), LineError> {
    check_scale(t)?;
    if points.is_empty() {
        return Err(LineError::Empty);
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(LineError::NonFinite);
    }
    for (i, w) in points.windows(2).enumerate() {
        if w[1] == w[0] {
            return Err(LineError::DuplicatePoints(i, i + 1));
        }
        if w[1] < w[0] {
            return Err(LineError::Unsorted(i + 1));
        }
    }
    let halves: Vec<f64> = points.windows(2).map(|w| (t * (w[1] - w[0]) / 2.0).tanh()).collect();
    let n = points.len();
    let weights = (0..n)
        .map(|i| {
            let left = if i == 0 { 1.0 } else { halves[i - 1] };
            let right = if i + 1 == n { 1.0 } else { halves[i] };
            if n == 1 {
                1.0
            } else {
                0.5 * (left + right)
            }
        })
        .collect();
    Ok((1.0 + halves.iter().sum::<f64>(), weights))
}

/// The weight measure of `t·[a, b]`: atoms of mass ½ at both ends plus ½ times
/// Lebesgue measure on the (scaled) interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalWeightMasses {
    pub left_atom: f64,
    pub interior: f64,
    pub right_atom: f64,
}

impl IntervalWeightMasses {
    pub fn total(&self) -> f64 {
        self.left_atom + self.interior + self.right_atom
    }
}

pub fn interval_weight_masses(a: f64, b: f64, t: f64) -> Result<IntervalWeightMasses, LineError> {
    check_scale(t)?;
    if b < a {
        return Err(LineError::ReversedInterval(a, b));
    }
    if a == b {
        // a point carries a unit atom
        return Ok(IntervalWeightMasses { left_atom: 1.0, interior: 0.0, right_atom: 0.0 });
    }
    Ok(IntervalWeightMasses { left_atom: 0.5, interior: t * (b - a) / 2.0, right_atom: 0.5 })
}

/// `|t[a, b]| = 1 + t(b − a)/2`.
pub fn interval_magnitude(a: f64, b: f64, t: f64) -> Result<f64, LineError> {
    check_scale(t)?;
    if b < a {
        return Err(LineError::ReversedInterval(a, b));
    }
    Ok(1.0 + t * (b - a) / 2.0)
}

/// A compact subset of ℝ written as its hull minus finitely many open gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapDecomposition {
    pub hull: (f64, f64),
    /// Sorted, pairwise disjoint open gaps inside the hull.
    pub gaps: Vec<(f64, f64)>,
}

impl GapDecomposition {
    /// Validates and sorts the gaps.
    pub fn new(hull: (f64, f64), mut gaps: Vec<(f64, f64)>) -> Result<Self, LineError> {
        let (a, b) = hull;
        if !a.is_finite() || !b.is_finite() || gaps.iter().any(|g| !g.0.is_finite() || !g.1.is_finite()) {
            return Err(LineError::NonFinite);
        }
        if b < a {
            return Err(LineError::ReversedInterval(a, b));
        }
        if let Some(g) = gaps.iter().find(|g| g.1 < g.0) {
            return Err(LineError::ReversedInterval(g.0, g.1));
        }
        let mut order: Vec<usize> = (0..gaps.len()).collect();
        order.sort_by(|&i, &j| gaps[i].0.total_cmp(&gaps[j].0));
        for (k, &i) in order.iter().enumerate() {
            if gaps[i].0 < a || gaps[i].1 > b {
                return Err(LineError::GapOutsideHull(i));
            }
            if k > 0 && gaps[i].0 < gaps[order[k - 1]].1 {
                return Err(LineError::OverlappingGaps(order[k - 1], i));
            }
        }
        gaps.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(GapDecomposition { hull, gaps })
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        #[derive(Deserialize)]
        struct Raw {
            hull: [f64; 2],
            #[serde(default)]
            gaps: Vec<[f64; 2]>,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| e.to_string())?;
        GapDecomposition::new(
            (raw.hull[0], raw.hull[1]),
            raw.gaps.into_iter().map(|g| (g[0], g[1])).collect(),
        )
        .map_err(|e| e.to_string())
    }

    /// One-dimensional Lebesgue measure of the set.
    pub fn measure(&self) -> f64 {
        (self.hull.1 - self.hull.0) - self.gaps.iter().map(|g| g.1 - g.0).sum::<f64>()
    }

    /// The closed pieces between consecutive gaps, left to right.
    pub fn components(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.gaps.len() + 1);
        let mut start = self.hull.0;
        for &(ga, gb) in &self.gaps {
            out.push((start, ga));
            start = gb;
        }
        out.push((start, self.hull.1));
        out
    }

    /// Hull `[0, length]` minus the gaps removed in the first `depth` middle-thirds steps.
    pub fn cantor(depth: u32, length: f64) -> Self {
        let mut intervals = vec![(0.0f64, 1.0f64)];
        let mut gaps = Vec::new();
        for _ in 0..depth {
            let mut next = Vec::with_capacity(intervals.len() * 2);
            for (a, b) in intervals {
                let third = (b - a) / 3.0;
                gaps.push((length * (a + third), length * (b - third)));
                next.push((a, a + third));
                next.push((b - third, b));
            }
            intervals = next;
        }
        gaps.sort_by(|x, y| x.0.total_cmp(&y.0));
        GapDecomposition { hull: (0.0, length), gaps }
    }
}

/// `|tA| = 1 + t·vol₁(A)/2 + Σ tanh(t(b_i − a_i)/2)` over the gaps.
pub fn compact_r_magnitude(g: &GapDecomposition, t: f64) -> Result<f64, LineError> {
    check_scale(t)?;
    let gap_sum: f64 = g.gaps.iter().map(|&(a, b)| (t * (b - a) / 2.0).tanh()).sum();
    Ok(1.0 + t * g.measure() / 2.0 + gap_sum)
}

/// `|A ∪ B| = |A| + |B| − 1 + tanh(t·gap/2)` for compact `A` left of `B`.
pub fn gap_union_magnitude(mg_a: f64, mg_b: f64, gap: f64, t: f64) -> Result<f64, LineError> {
    check_scale(t)?;
    if gap < 0.0 {
        return Err(LineError::NegativeGap(gap));
    }
    Ok(mg_a + mg_b - 1.0 + (t * gap / 2.0).tanh())
}

/// Truncated Cantor series with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CantorValue {
    pub value: f64,
    /// Upper bound on the omitted terms (from `tanh x ≤ x`).
    pub tail_bound: f64,
    pub depth: u32,
}

/// Default absolute tail target for the unbounded series.
pub const CANTOR_TAIL_TARGET: f64 = 1e-14;

/// Magnitude of the middle-thirds Cantor set of length `ℓ` at scale `t`:
/// `1 + ½ Σ_{i≥1} 2^i tanh(tℓ/(2·3^i))`, summed to `depth` terms, or until
/// the tail bound `(tℓ/2)(2/3)^k` drops below [`CANTOR_TAIL_TARGET`] when
/// `depth` is `None`. Level `i` removes `2^{i−1}` gaps of length `ℓ/3^i`.
pub fn cantor_magnitude(length: f64, t: f64, depth: Option<u32>) -> CantorValue {
    let x = t * length;
    let tail = |k: u32| 0.5 * x * (2.0f64 / 3.0).powi(k as i32);
    let mut sum = 0.0;
    let mut k = 0u32;
    loop {
        let done = match depth {
            Some(d) => k >= d,
            None => tail(k) < CANTOR_TAIL_TARGET,
        };
        if done {
            break;
        }
        k += 1;
        sum += 2f64.powi(k as i32 - 1) * (x / (2.0 * 3f64.powi(k as i32))).tanh();
    }
    CantorValue { value: 1.0 + sum, tail_bound: tail(k), depth: k }
}
