use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{Ell1Error, PixelSet, Rational};

/// Open face of the cubical grid: `anchor[i]` is the lower integer coordinate,
/// and bit `i` of `open_axes` marks that the face spans `[anchor_i, anchor_i+1]`
/// along axis `i` (otherwise it sits at `anchor_i`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Face {
    pub anchor: Vec<i64>,
    pub open_axes: u8,
}

impl Face {
    pub fn dim(&self) -> u32 {
        self.open_axes.count_ones()
    }

    fn is_open(&self, axis: usize) -> bool {
        self.open_axes >> axis & 1 == 1
    }
}

/// Signed measure supported on open faces, face Lebesgue measure times `c_F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceMeasure {
    pub faces: BTreeMap<Face, Rational>,
    pub scale: Rational,
    pub dim: usize,
}

impl FaceMeasure {
    /// `Σ c_F λ^{dim F}`.
    pub fn total_mass(&self) -> Rational {
        self.faces
            .iter()
            .map(|(f, c)| c * num_traits::pow(self.scale.clone(), f.dim() as usize))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Drops faces whose coefficient cancelled to zero.
    pub fn pruned(mut self) -> Self {
        self.faces.retain(|_, c| !c.is_zero());
        self
    }

    /// `∫ e^{−‖a−x‖₁} dμ(x)`, evaluated face by face in closed form.
    pub fn potential(&self, a: &[f64]) -> f64 {
        let lam = self.scale.to_f64().unwrap_or(f64::NAN);
        self.faces
            .iter()
            .map(|(face, c)| {
                let factor: f64 = (0..self.dim)
                    .map(|i| {
                        let lo = lam * face.anchor[i] as f64;
                        if face.is_open(i) {
                            interval_exp_integral(a[i], lo, lo + lam)
                        } else {
                            (-(a[i] - lo).abs()).exp()
                        }
                    })
                    .product();
                c.to_f64().unwrap_or(f64::NAN) * factor
            })
            .sum()
    }
}

/// `∫_lo^hi e^{−|a−s|} ds`.
fn interval_exp_integral(a: f64, lo: f64, hi: f64) -> f64 {
    if a <= lo {
        (-(lo - a)).exp() - (-(hi - a)).exp()
    } else if a >= hi {
        (-(a - hi)).exp() - (-(a - lo)).exp()
    } else {
        2.0 - (-(a - lo)).exp() - (-(hi - a)).exp()
    }
}

fn half_pow(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Every open face of every closed cell.
fn complex_faces(p: &PixelSet) -> Vec<Face> {
    let n = p.dim();
    let mut faces = std::collections::BTreeSet::new();
    for cell in p.cells() {
        // per axis: 0 = lower vertex, 1 = open, 2 = upper vertex
        for code in 0..3usize.pow(n as u32) {
            let mut anchor = cell.clone();
            let mut open = 0u8;
            let mut rest = code;
            for (i, a) in anchor.iter_mut().enumerate() {
                match rest % 3 {
                    1 => open |= 1 << i,
                    2 => *a += 1,
                    _ => {}
                }
                rest /= 3;
            }
            faces.insert(Face { anchor, open_axes: open });
        }
    }
    faces.into_iter().collect()
}

/// Cells of `p` whose closure contains the open face.
fn incident_cells(p: &PixelSet, face: &Face) -> Vec<Vec<i64>> {
    let closed: Vec<usize> = (0..p.dim()).filter(|&i| !face.is_open(i)).collect();
    (0..1usize << closed.len())
        .filter_map(|bits| {
            let mut cell = face.anchor.clone();
            for (k, &axis) in closed.iter().enumerate() {
                cell[axis] -= (bits >> k & 1) as i64;
            }
            p.contains_cell(&cell).then_some(cell)
        })
        .collect()
}

/// Face-local weight measure: `c_G = Σ_{∅≠S⊆P(G)} (−1)^{|S|+1} (1/2)^{dim ∩S}`
/// over the cells `P(G)` whose closure contains `G`.
pub fn weight_measure(p: &PixelSet) -> FaceMeasure {
    let n = p.dim();
    let coefficients: Vec<(Face, Rational)> = complex_faces(p)
        .into_par_iter()
        .map(|face| {
            let cells = incident_cells(p, &face);
            let mut c = Rational::zero();
            for subset in 1usize..1 << cells.len() {
                let members: Vec<&Vec<i64>> =
                    (0..cells.len()).filter(|k| subset >> k & 1 == 1).map(|k| &cells[k]).collect();
                let agreeing = (0..n)
                    .filter(|&i| !face.is_open(i))
                    .filter(|&i| members.iter().all(|m| m[i] == members[0][i]))
                    .count() as u32;
                let term = half_pow(face.dim() + agreeing);
                if members.len() % 2 == 1 {
                    c += term;
                } else {
                    c -= term;
                }
            }
            (face, c)
        })
        .collect();
    FaceMeasure { faces: coefficients.into_iter().collect(), scale: p.scale().clone(), dim: n }.pruned()
}

pub const IE_MAX_CELLS: usize = 20;

/// Inclusion–exclusion over all cell subsets with nonempty common
/// intersection, each intersection box carrying `⊗(½δ + ½λ + ½δ)`.
pub fn weight_measure_ie(p: &PixelSet) -> Result<FaceMeasure, Ell1Error> {
    if p.len() > IE_MAX_CELLS {
        return Err(Ell1Error::TooManyCells { cells: p.len(), limit: IE_MAX_CELLS });
    }
    let cells: Vec<&Vec<i64>> = p.cells().iter().collect();
    let n = p.dim();
    let mut faces: BTreeMap<Face, Rational> = BTreeMap::new();
    // box as per-axis integer [lo, hi] with hi − lo ∈ {0, 1}
    let mut stack: Vec<(usize, Vec<(i64, i64)>, usize)> = Vec::new();
    for (k, c) in cells.iter().enumerate() {
        stack.push((k, c.iter().map(|&v| (v, v + 1)).collect(), 1));
    }
    while let Some((last, bounds, size)) = stack.pop() {
        add_box_measure(&mut faces, &bounds, if size % 2 == 1 { 1 } else { -1 });
        for (k, c) in cells.iter().enumerate().skip(last + 1) {
            let meet: Vec<(i64, i64)> =
                bounds.iter().zip(c.iter()).map(|(&(lo, hi), &v)| (lo.max(v), hi.min(v + 1))).collect();
            if meet.iter().all(|(lo, hi)| lo <= hi) {
                stack.push((k, meet, size + 1));
            }
        }
    }
    Ok(FaceMeasure { faces, scale: p.scale().clone(), dim: n }.pruned())
}

fn add_box_measure(faces: &mut BTreeMap<Face, Rational>, bounds: &[(i64, i64)], sign: i64) {
    let dim = bounds.iter().filter(|(lo, hi)| hi > lo).count() as u32;
    let coefficient = half_pow(dim) * Rational::from_integer(BigInt::from(sign));
    let mut partial = vec![Face { anchor: Vec::new(), open_axes: 0 }];
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        let choices: Vec<(i64, bool)> = if hi > lo { vec![(lo, false), (lo, true), (hi, false)] } else { vec![(lo, false)] };
        partial = partial
            .into_iter()
            .flat_map(|f| {
                choices.iter().map(move |&(a, open)| {
                    let mut f = f.clone();
                    f.anchor.push(a);
                    if open {
                        f.open_axes |= 1 << i;
                    }
                    f
                })
            })
            .collect();
    }
    for f in partial {
        *faces.entry(f).or_insert_with(Rational::zero) += &coefficient;
    }
}

/// Maximum `|∫ e^{−‖a−x‖₁} dμ(x) − 1|` over the probes.
pub fn verify_weight_measure(p: &PixelSet, mu: &FaceMeasure, probes: &[Vec<f64>]) -> Result<f64, Ell1Error> {
    if let Some(bad) = probes.iter().find(|a| !p.contains_point(a)) {
        return Err(Ell1Error::ProbeOutsideSet(bad.clone()));
    }
    Ok(probes.par_iter().map(|a| (mu.potential(a) - 1.0).abs()).reduce(|| 0.0, f64::max))
}

/// `5ⁿ` probes per cell at fractions `{0, ¼, ½, ¾, 1}` of each side.
pub fn probe_grid(p: &PixelSet) -> Vec<Vec<f64>> {
    let lam = p.scale().to_f64().unwrap_or(f64::NAN);
    let fractions = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut probes = Vec::new();
    for cell in p.cells() {
        let mut pts = vec![Vec::new()];
        for &c in cell {
            pts = pts
                .into_iter()
                .flat_map(|pt: Vec<f64>| {
                    fractions.iter().map(move |f| {
                        let mut pt = pt.clone();
                        pt.push(lam * (c as f64 + f));
                        pt
                    })
                })
                .collect();
        }
        probes.extend(pts);
    }
    probes
}
