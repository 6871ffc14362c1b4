//! Closed-form Euclidean magnitudes: odd-dimensional balls, even-dimensional
//! round spheres, large-scale volume asymptotics, and the intrinsic-volume
//! comparator for balls.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no closed form for the {0}-dimensional ball (only n = 3 and n = 5)")]
    UnsupportedDimension(usize),
    #[error("sphere formula needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("p must be 1 or 2, got {0}")]
    UnsupportedExponent(u32),
    #[error("argument must be positive and finite, got {0}")]
    NonPositive(f64),
}

fn positive(x: f64) -> Result<(), OracleError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(OracleError::NonPositive(x))
    }
}

/// `|B^n_R|` for `n ∈ {3, 5}`.
pub fn ball_magnitude(n: usize, r: f64) -> Result<f64, OracleError> {
    positive(r)?;
    match n {
        3 => Ok(1.0 + 2.0 * r + r * r + r.powi(3) / 6.0),
        5 => {
            let num = 24.0 + 72.0 * r + 72.0 * r * r + 35.0 * r.powi(3) + 9.0 * r.powi(4) + r.powi(5);
            Ok(num / (8.0 * (r + 3.0)) + r.powi(5) / 120.0)
        }
        _ => Err(OracleError::UnsupportedDimension(n)),
    }
}

/// Exact rational value of [`ball_magnitude`] at a rational radius.
pub fn ball_magnitude_exact(n: usize, r: &BigRational) -> Result<BigRational, OracleError> {
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    if *r <= BigRational::zero() {
        return Err(OracleError::NonPositive(0.0));
    }
    let pow = |k: i32| num_traits::pow(r.clone(), k as usize);
    match n {
        3 => Ok(int(1) + int(2) * r + pow(2) + pow(3) / int(6)),
        5 => {
            let num = int(24) + int(72) * r + int(72) * pow(2) + int(35) * pow(3) + int(9) * pow(4) + pow(5);
            Ok(num / (int(8) * (r + int(3))) + pow(5) / int(120))
        }
        _ => Err(OracleError::UnsupportedDimension(n)),
    }
}

/// Magnitude of the round `n`-sphere of radius `R` with its geodesic metric, `n` even:
/// `2/(1 + e^{−πR}) · ∏_{odd j < n} (1 + (R/j)²)`.
pub fn sphere_magnitude_even(n: usize, r: f64) -> Result<f64, OracleError> {
    positive(r)?;
    if n == 0 || n % 2 == 1 {
        return Err(OracleError::OddDimension(n));
    }
    let prefactor = 2.0 / (1.0 + (-PI * r).exp());
    let product: f64 = (1..n).step_by(2).map(|j| 1.0 + (r / j as f64).powi(2)).product();
    Ok(prefactor * product)
}

/// Volume of the Euclidean unit ball in ℝⁿ, by `ω_n = 2π ω_{n−2} / n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Volume of the ℓ1 unit ball in ℝⁿ, `2ⁿ/n!`.
pub fn l1_unit_ball_volume(n: usize) -> f64 {
    2f64.powi(n as i32) / factorial(n)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Leading large-scale behaviour `|tA| ~ c·tⁿ` of a compact set of positive volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticPrediction {
    pub n: usize,
    pub p: u32,
    pub volume: f64,
    /// `n!·vol(unit ball of ℓ_pⁿ)`: `n!·ω_n` for p = 2, `2ⁿ` for p = 1.
    pub normalizer: f64,
    pub leading_coefficient: f64,
}

pub fn asymptotic_prediction(n: usize, p: u32, volume: f64) -> Result<AsymptoticPrediction, OracleError> {
    positive(volume)?;
    let normalizer = match p {
        1 => 2f64.powi(n as i32),
        2 => factorial(n) * unit_ball_volume(n),
        _ => return Err(OracleError::UnsupportedExponent(p)),
    };
    Ok(AsymptoticPrediction { n, p, volume, normalizer, leading_coefficient: volume / normalizer })
}

/// Classical intrinsic volumes of `B^n_R`: `V_i = C(n,i)·ω_n/ω_{n−i}·R^i`.
pub fn ball_intrinsic_volumes(n: usize, r: f64) -> Vec<f64> {
    (0..=n)
        .map(|i| binomial(n, i) * unit_ball_volume(n) / unit_ball_volume(n - i) * r.powi(i as i32))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjectureComparison {
    pub exact: f64,
    /// `Σ V_i(B^n_R) / (i!·ω_i)`.
    pub conjectured: f64,
    pub difference: f64,
}

/// Compares the exact ball magnitude with the intrinsic-volume expression.
pub fn conjecture_compare(n: usize, r: f64) -> Result<ConjectureComparison, OracleError> {
    let exact = ball_magnitude(n, r)?;
    let conjectured: f64 = ball_intrinsic_volumes(n, r)
        .iter()
        .enumerate()
        .map(|(i, v)| v / (factorial(i) * unit_ball_volume(i)))
        .sum();
    Ok(ConjectureComparison { exact, conjectured, difference: exact - conjectured })
}

/// Exact value of the intrinsic-volume expression for odd `n`, where every
/// coefficient `C(n,i)·ω_n/(ω_{n−i}·i!·ω_i)` is rational.
pub fn conjectured_ball_value_exact(n: usize, r: &BigRational) -> Result<BigRational, OracleError> {
    if n % 2 == 0 {
        return Err(OracleError::UnsupportedDimension(n));
    }
    let mut total = BigRational::zero();
    for i in 0..=n {
        total += ball_coefficient_exact(n, i) * num_traits::pow(r.clone(), i);
    }
    Ok(total)
}

/// `Γ(k/2 + 1)` with the factor `√π` dropped when `k` is odd.
fn gamma_half_rational(k: usize) -> BigRational {
    let one = BigRational::one();
    let mut x = BigRational::new(BigInt::from(k as i64 + 2), BigInt::from(2));
    let mut v = BigRational::one();
    while x > one {
        x -= &one;
        v *= &x;
    }
    v
}

// With ω_k = π^{k/2}/Γ(k/2+1) the powers of π cancel when n is odd.
fn ball_coefficient_exact(n: usize, i: usize) -> BigRational {
    let binom = BigRational::from_integer(BigInt::from(binomial(n, i).round() as i64));
    let fact = BigRational::from_integer((1..=i).fold(BigInt::one(), |acc, k| acc * BigInt::from(k as i64)));
    binom * gamma_half_rational(n - i) * gamma_half_rational(i) / (gamma_half_rational(n) * fact)
}
