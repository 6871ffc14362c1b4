use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Ell1Error, Rational};

pub const MAX_DIM: usize = 3;

/// A finite union of closed grid cells `∏[λc_i, λ(c_i+1)]` in ℓ1ⁿ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelSet {
    dim: usize,
    scale: Rational,
    cells: BTreeSet<Vec<i64>>,
}

impl PixelSet {
    pub fn new(dim: usize, scale: Rational, cells: impl IntoIterator<Item = Vec<i64>>) -> Result<Self, Ell1Error> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Ell1Error::UnsupportedDimension(dim));
        }
        if !scale.is_positive() {
            return Err(Ell1Error::BadScale(scale.to_string()));
        }
        let mut set = BTreeSet::new();
        for cell in cells {
            if cell.len() != dim {
                return Err(Ell1Error::MixedDimensions { expected: dim, found: cell.len() });
            }
            set.insert(cell);
        }
        if set.is_empty() {
            return Err(Ell1Error::EmptySet);
        }
        Ok(Self { dim, scale, cells: set })
    }

    /// Unit-scale set from integer cells.
    pub fn unit(dim: usize, cells: impl IntoIterator<Item = Vec<i64>>) -> Result<Self, Ell1Error> {
        Self::new(dim, Rational::one(), cells)
    }

    /// Axis-parallel box of `extents[i]` cells along axis `i`.
    pub fn block(extents: &[i64]) -> Result<Self, Ell1Error> {
        let mut cells = vec![Vec::new()];
        for &e in extents {
            cells = cells
                .into_iter()
                .flat_map(|c| {
                    (0..e).map(move |k| {
                        let mut c = c.clone();
                        c.push(k);
                        c
                    })
                })
                .collect();
        }
        Self::unit(extents.len(), cells)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn cells(&self) -> &BTreeSet<Vec<i64>> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_cell(&self, cell: &[i64]) -> bool {
        self.cells.contains(cell)
    }

    pub fn with_scale(&self, scale: Rational) -> Result<Self, Ell1Error> {
        Self::new(self.dim, scale, self.cells.iter().cloned())
    }

    pub fn union(&self, other: &Self) -> Result<Self, Ell1Error> {
        self.compatible(other)?;
        Self::new(self.dim, self.scale.clone(), self.cells.union(&other.cells).cloned())
    }

    /// Cell-wise intersection; `None` when no cell is shared.
    pub fn intersection(&self, other: &Self) -> Result<Option<Self>, Ell1Error> {
        self.compatible(other)?;
        let shared: Vec<_> = self.cells.intersection(&other.cells).cloned().collect();
        if shared.is_empty() {
            return Ok(None);
        }
        Self::new(self.dim, self.scale.clone(), shared).map(Some)
    }

    fn compatible(&self, other: &Self) -> Result<(), Ell1Error> {
        if self.dim != other.dim {
            return Err(Ell1Error::MixedDimensions { expected: self.dim, found: other.dim });
        }
        if self.scale != other.scale {
            return Err(Ell1Error::BadScale(format!("{} vs {}", self.scale, other.scale)));
        }
        Ok(())
    }

    /// Whether `x` lies in the closed set, up to `1e-12` per coordinate.
    pub fn contains_point(&self, x: &[f64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let lam = self.scale.to_f64().unwrap_or(f64::NAN);
        let tol = 1e-12;
        // candidate cells: floor(x/λ) and its lower neighbour on each axis
        let base: Vec<i64> = x.iter().map(|&v| (v / lam).floor() as i64).collect();
        (0..1usize << self.dim).any(|bits| {
            let cell: Vec<i64> = base.iter().enumerate().map(|(i, &b)| b - ((bits >> i) & 1) as i64).collect();
            self.cells.contains(&cell)
                && cell.iter().zip(x).all(|(&c, &v)| v >= lam * c as f64 - tol && v <= lam * (c + 1) as f64 + tol)
        })
    }

    /// Points of the closed set on the lattice of spacing `λ/per_cell`.
    pub fn lattice_points(&self, per_cell: usize) -> Vec<Vec<f64>> {
        let k = per_cell.max(1) as i64;
        let lam = self.scale.to_f64().unwrap_or(f64::NAN);
        let mut seen = BTreeSet::new();
        for cell in &self.cells {
            let mut stack = vec![Vec::new()];
            for &c in cell {
                stack = stack
                    .into_iter()
                    .flat_map(|p: Vec<i64>| {
                        (0..=k).map(move |j| {
                            let mut p = p.clone();
                            p.push(c * k + j);
                            p
                        })
                    })
                    .collect();
            }
            seen.extend(stack);
        }
        seen.into_iter().map(|p| p.iter().map(|&v| lam * v as f64 / k as f64).collect()).collect()
    }

    /// Lebesgue volume `λⁿ·#cells`.
    pub fn volume(&self) -> Rational {
        num_traits::pow(self.scale.clone(), self.dim) * Rational::from_integer(BigInt::from(self.len()))
    }
}

impl fmt::Display for PixelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {} scale {}", self.dim, self.scale)?;
        for cell in &self.cells {
            let line: Vec<String> = cell.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PixelSet {
    type Err = Ell1Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pixel_set(s)
    }
}

/// Parses a rational written `p/q`, `p`, or a finite decimal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let num: BigInt = digits.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Some(if negative { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Either the header format (`dim <n> scale <p/q>` followed by one cell per
/// line) or a 2-D block of `#`/`.` whose top row is the highest `y`.
pub fn parse_pixel_set(input: &str) -> Result<PixelSet, Ell1Error> {
    let lines: Vec<&str> = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("//"))
        .collect();
    let Some(first) = lines.first() else {
        return Err(Ell1Error::EmptySet);
    };
    if first.starts_with("dim") {
        parse_header_format(first, &lines[1..])
    } else {
        parse_ascii_art(&lines)
    }
}

fn parse_header_format(header: &str, body: &[&str]) -> Result<PixelSet, Ell1Error> {
    let words: Vec<&str> = header.split_whitespace().collect();
    let bad = || Ell1Error::Parse(format!("bad header `{header}`"));
    if words.len() != 4 || words[0] != "dim" || words[2] != "scale" {
        return Err(bad());
    }
    let dim: usize = words[1].parse().map_err(|_| bad())?;
    let scale = parse_rational(words[3]).ok_or_else(|| Ell1Error::BadScale(words[3].to_string()))?;
    let mut cells = Vec::with_capacity(body.len());
    for line in body {
        let cell: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
        let cell = cell.map_err(|_| Ell1Error::Parse(format!("bad cell `{line}`")))?;
        cells.push(cell);
    }
    PixelSet::new(dim, scale, cells)
}

fn parse_ascii_art(lines: &[&str]) -> Result<PixelSet, Ell1Error> {
    let height = lines.len() as i64;
    let mut cells = Vec::new();
    for (row, line) in lines.iter().enumerate() {
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '#' => cells.push(vec![col as i64, height - 1 - row as i64]),
                '.' | ' ' => {}
                other => return Err(Ell1Error::Parse(format!("unexpected `{other}` in pixel art"))),
            }
        }
    }
    PixelSet::unit(2, cells)
}

/// `p/q` text form, integers without a denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
