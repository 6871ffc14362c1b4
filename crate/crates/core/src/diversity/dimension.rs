use rayon::prelude::*;
use serde::Serialize;

use super::{covering_number, max_diversity_with, DiversityError, DiversityOptions};
use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionMethod {
    /// `log |tA|_+ / log t`.
    DiversityGrowth,
    /// `log N(A, 1/t) / log t`.
    CoveringGrowth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionOptions {
    pub samples: usize,
    /// Drop the smallest and largest `t` before fitting.
    pub drop_extremes: bool,
    pub diversity: DiversityOptions,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        Self { samples: 12, drop_extremes: true, diversity: DiversityOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub window: (f64, f64),
    /// Root-mean-square residual of the log-log fit.
    pub fit_residual: f64,
    pub method: DimensionMethod,
    /// `(t, quantity)` pairs used in the fit.
    pub samples: Vec<(f64, f64)>,
    /// Whether `t_max · (smallest distance) ≤ 1`, the range where a finite
    /// approximation still resolves the set.
    pub within_resolution: bool,
}

/// Least-squares slope of `log quantity` against `log t` on log-spaced samples.
pub fn dimension_estimate(
    space: &FiniteMetricSpace,
    window: (f64, f64),
    method: DimensionMethod,
    opts: &DimensionOptions,
) -> Result<DimensionEstimate, DiversityError> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(DiversityError::BadScale(if lo > 0.0 { hi } else { lo }));
    }
    let n = opts.samples.max(1);
    let ts: Vec<f64> = (0..n)
        .map(|k| if n == 1 { lo } else { (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp() })
        .collect();
    let values: Vec<Option<f64>> = ts
        .par_iter()
        .map(|&t| match method {
            DimensionMethod::DiversityGrowth => max_diversity_with(space, t, &opts.diversity).ok().map(|r| r.value),
            DimensionMethod::CoveringGrowth => Some(covering_number(space, 1.0 / t).count as f64),
        })
        .collect();
    let mut pairs: Vec<(f64, f64)> = ts.iter().zip(&values).map(|(&t, v)| (t, v.unwrap_or(f64::NAN))).collect();
    if opts.drop_extremes && pairs.len() >= 2 {
        pairs.remove(pairs.len() - 1);
        pairs.remove(0);
    }
    let usable: Vec<(f64, f64)> = pairs.into_iter().filter(|(_, q)| q.is_finite() && *q > 0.0).collect();
    if usable.len() < 4 {
        return Err(DiversityError::WindowTooNarrow { usable: usable.len() });
    }
    let xs: Vec<f64> = usable.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|(_, q)| q.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let within_resolution = space.min_distance().is_none_or(|gap| hi * gap <= 1.0);
    Ok(DimensionEstimate {
        slope,
        window,
        fit_residual: (rss / xs.len() as f64).sqrt(),
        method,
        samples: usable,
        within_resolution,
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate_space, SpaceKind, SpaceSpec};

    fn line(coords: Vec<f64>) -> FiniteMetricSpace {
        generate_space(&SpaceSpec::new(SpaceKind::Points1d { coords })).unwrap()
    }

    #[test]
    fn point_and_interval() {
        let opts = DimensionOptions::default();
        let point = dimension_estimate(&line(vec![0.0]), (1.0, 100.0), DimensionMethod::DiversityGrowth, &opts).unwrap();
        assert!(point.slope.abs() < 1e-12);
        let grid = line((0..=200).map(|i| i as f64 / 200.0).collect());
        let est = dimension_estimate(&grid, (10.0, 200.0), DimensionMethod::DiversityGrowth, &opts).unwrap();
        assert!(est.within_resolution);
        assert!((est.slope - 1.0).abs() < 0.1, "{est:?}");
        let cover = dimension_estimate(&grid, (10.0, 200.0), DimensionMethod::CoveringGrowth, &opts).unwrap();
        assert!((cover.slope - 1.0).abs() < 0.1, "{cover:?}");
    }

    #[test]
    fn narrow_window() {
        let opts = DimensionOptions { samples: 5, ..Default::default() };
        let grid = line(vec![0.0, 1.0]);
        assert!(matches!(
            dimension_estimate(&grid, (1.0, 2.0), DimensionMethod::CoveringGrowth, &opts),
            Err(DiversityError::WindowTooNarrow { usable: 3 })
        ));
    }
}
