use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::convexity::check_l1_convex;
use super::{format_rational, Ell1Error, PixelSet, Rational};

/// Exact volume of `⋃ (cell + r·Qⁿ)` with `Qⁿ = [−½, ½]ⁿ`.
pub fn dilation_volume(p: &PixelSet, r: &Rational) -> Result<Rational, Ell1Error> {
    if !r.is_positive() {
        return Err(Ell1Error::NonPositive(r.to_string()));
    }
    let n = p.dim();
    let half = r / Rational::from_integer(BigInt::from(2));
    let lam = p.scale();
    let boxes: Vec<Vec<(Rational, Rational)>> = p
        .cells()
        .iter()
        .map(|c| {
            c.iter()
                .map(|&v| {
                    let v = Rational::from_integer(BigInt::from(v));
                    (lam * &v - &half, lam * (v + Rational::one()) + &half)
                })
                .collect()
        })
        .collect();
    // fragment every axis at all box boundaries
    let cuts: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut xs: Vec<Rational> = boxes.iter().flat_map(|b| [b[i].0.clone(), b[i].1.clone()]).collect();
            xs.sort();
            xs.dedup();
            xs
        })
        .collect();
    let sizes: Vec<usize> = cuts.iter().map(|c| c.len() - 1).collect();
    let total: usize = sizes.iter().product();
    let mut covered = vec![false; total];
    for b in &boxes {
        let ranges: Vec<(usize, usize)> = (0..n)
            .map(|i| {
                let lo = cuts[i].binary_search(&b[i].0).expect("cut present");
                let hi = cuts[i].binary_search(&b[i].1).expect("cut present");
                (lo, hi)
            })
            .collect();
        mark(&mut covered, &sizes, &ranges, 0, 0);
    }
    let widths: Vec<Vec<Rational>> = cuts.iter().map(|c| c.windows(2).map(|w| &w[1] - &w[0]).collect()).collect();
    let mut volume = Rational::zero();
    for (flat, &on) in covered.iter().enumerate() {
        if on {
            let mut rest = flat;
            let mut v = Rational::one();
            for i in (0..n).rev() {
                v *= &widths[i][rest % sizes[i]];
                rest /= sizes[i];
            }
            volume += v;
        }
    }
    Ok(volume)
}

fn mark(covered: &mut [bool], sizes: &[usize], ranges: &[(usize, usize)], axis: usize, offset: usize) {
    if axis == sizes.len() {
        covered[offset] = true;
        return;
    }
    for k in ranges[axis].0..ranges[axis].1 {
        mark(covered, sizes, ranges, axis + 1, offset * sizes[axis] + k);
    }
}

/// `vol(A + rQⁿ) = Σ_i V'_i r^{n−i}`; `coefficients[i]` is `V'_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerPolynomial {
    pub coefficients: Vec<Rational>,
}

impl SteinerPolynomial {
    pub fn dim(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `Σ V'_i r^{n−i}`.
    pub fn eval(&self, r: &Rational) -> Rational {
        let n = self.dim();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, v)| v * num_traits::pow(r.clone(), n - i))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn as_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(format_rational).collect()
    }
}

/// Fitting nodes as multiples of the grid spacing; all lie below `λ`, where
/// no two non-touching cells have merged yet.
pub const NODE_FRACTIONS: [(i64, i64); 4] = [(1, 4), (1, 3), (1, 2), (2, 3)];

pub fn intrinsic_volumes(p: &PixelSet) -> SteinerPolynomial {
    let n = p.dim();
    let nodes: Vec<Rational> =
        NODE_FRACTIONS[..=n].iter().map(|&(a, b)| p.scale() * Rational::new(a.into(), b.into())).collect();
    // rows: [r^n, r^{n-1}, …, 1] · V' = vol
    let mut rows: Vec<Vec<Rational>> = nodes
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> = (0..=n).map(|i| num_traits::pow(r.clone(), n - i)).collect();
            row.push(dilation_volume(p, r).expect("positive node"));
            row
        })
        .collect();
    SteinerPolynomial { coefficients: solve_exact(&mut rows) }
}

/// Gaussian elimination on an augmented nonsingular system.
fn solve_exact(rows: &mut [Vec<Rational>]) -> Vec<Rational> {
    let m = rows.len();
    for col in 0..m {
        let pivot = (col..m).find(|&r| !rows[r][col].is_zero()).expect("nonsingular system");
        rows.swap(col, pivot);
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[col][col];
                for k in col..=m {
                    let delta = &f * &rows[col][k];
                    rows[r][k] -= delta;
                }
            }
        }
    }
    (0..m).map(|i| &rows[i][m] / &rows[i][i]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntrinsicMagnitude {
    #[serde(rename = "V")]
    pub intrinsic_volumes: Vec<String>,
    pub magnitude: String,
    pub magnitude_f64: f64,
    pub l1_convex: bool,
    /// Set when the set is not ℓ1-convex: the value is then only a candidate upper bound.
    pub upper_bound_candidate: bool,
}

/// `Σ V'_i(P)·t^i/2^i` in exact arithmetic.
pub fn magnitude_from_polynomial(poly: &SteinerPolynomial, t: &Rational) -> Rational {
    let half_t = t / Rational::from_integer(BigInt::from(2));
    poly.coefficients
        .iter()
        .enumerate()
        .map(|(i, v)| v * num_traits::pow(half_t.clone(), i))
        .fold(Rational::zero(), |a, b| a + b)
}

pub fn magnitude_via_intrinsic_exact(p: &PixelSet, t: &Rational) -> Result<IntrinsicMagnitude, Ell1Error> {
    if !t.is_positive() {
        return Err(Ell1Error::NonPositive(t.to_string()));
    }
    let poly = intrinsic_volumes(p);
    let value = magnitude_from_polynomial(&poly, t);
    let convex = check_l1_convex(p).l1_convex;
    Ok(IntrinsicMagnitude {
        intrinsic_volumes: poly.as_strings(),
        magnitude: format_rational(&value),
        magnitude_f64: value.to_f64().unwrap_or(f64::NAN),
        l1_convex: convex,
        upper_bound_candidate: !convex,
    })
}

/// Floating-point variant for real `t`.
pub fn magnitude_via_intrinsic(p: &PixelSet, t: f64) -> Result<f64, Ell1Error> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Ell1Error::NonPositive(t.to_string()));
    }
    let poly = intrinsic_volumes(p);
    Ok(poly
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, v)| v.to_f64().unwrap_or(f64::NAN) * (t / 2.0).powi(i as i32))
        .sum())
}
