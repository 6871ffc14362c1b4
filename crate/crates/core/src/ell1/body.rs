use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::convexity::check_l1_convex;
use super::pixel::parse_rational;
use super::steiner::{intrinsic_volumes, SteinerPolynomial};
use super::{format_rational, Ell1Error, PixelSet, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    /// Two opposite corners, lower then upper.
    Box,
    SimplexVertices,
    PolytopeVertices,
}

/// A convex polytope given by vertices with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexBodySpec {
    pub dim: usize,
    pub kind: BodyKind,
    pub vertices: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct RawBody {
    dim: usize,
    kind: BodyKind,
    vertices: Vec<Vec<serde_json::Value>>,
}

impl ConvexBodySpec {
    pub fn new(dim: usize, kind: BodyKind, vertices: Vec<Vec<Rational>>) -> Self {
        Self { dim, kind, vertices }
    }

    pub fn unit_box(extents: &[Rational]) -> Self {
        let dim = extents.len();
        Self::new(dim, BodyKind::Box, vec![vec![Rational::zero(); dim], extents.to_vec()])
    }

    /// `{"dim":2,"kind":"simplex_vertices","vertices":[["0","0"],[1,0],["0","1"]]}`;
    /// coordinates may be numbers or `"p/q"` strings.
    pub fn from_json(text: &str) -> Result<Self, Ell1Error> {
        let raw: RawBody = serde_json::from_str(text).map_err(|e| Ell1Error::Parse(e.to_string()))?;
        let vertices = raw
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| {
                        let text = match c {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        parse_rational(&text).ok_or_else(|| Ell1Error::Parse(format!("bad coordinate {text}")))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<Rational>>, _>>()?;
        Ok(Self::new(raw.dim, raw.kind, vertices))
    }

    /// Vertex list with boxes expanded to their `2ⁿ` corners.
    pub fn vertex_list(&self) -> Result<Vec<Vec<Rational>>, Ell1Error> {
        let n = self.dim;
        if n == 0 || n > super::pixel::MAX_DIM {
            return Err(Ell1Error::UnsupportedDimension(n));
        }
        if let Some(v) = self.vertices.iter().find(|v| v.len() != n) {
            return Err(Ell1Error::MixedDimensions { expected: n, found: v.len() });
        }
        match self.kind {
            BodyKind::Box => {
                if self.vertices.len() != 2 {
                    return Err(Ell1Error::Parse("box needs exactly two corners".into()));
                }
                let (lo, hi) = (&self.vertices[0], &self.vertices[1]);
                if lo.iter().zip(hi).any(|(a, b)| a >= b) {
                    return Err(Ell1Error::DegenerateBody);
                }
                Ok((0..1usize << n)
                    .map(|bits| (0..n).map(|i| if bits >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() }).collect())
                    .collect())
            }
            BodyKind::SimplexVertices if self.vertices.len() != n + 1 => Err(Ell1Error::DegenerateBody),
            _ => Ok(self.vertices.clone()),
        }
    }
}

/// Halfspace `normal · x ≤ offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Facet {
    fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, v| s + v)
}

/// Rank of a list of rational vectors.
fn rank(vectors: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for k in c..cols {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// A nonzero vector orthogonal to `n − 1` independent rows, or `None`.
fn normal_of(rows: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    if rank(rows) != n - 1 {
        return None;
    }
    // generalized cross product: signed maximal minors
    let mut v: Vec<Rational> = (0..n)
        .map(|j| {
            let minor: Vec<Vec<Rational>> =
                rows.iter().map(|r| (0..n).filter(|&c| c != j).map(|c| r[c].clone()).collect()).collect();
            if j % 2 == 0 {
                det(minor)
            } else {
                -det(minor)
            }
        })
        .collect();
    let scale = v.iter().find(|c| !c.is_zero())?.abs();
    v.iter_mut().for_each(|c| *c /= &scale);
    Some(v)
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for k in c..n {
                let delta = &f * &m[c][k];
                m[i][k] -= delta;
            }
        }
    }
    d
}

fn subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, k, cur, out);
            cur.pop();
        }
    }
    rec(0, len, k, &mut cur, &mut out);
    out
}

/// Facets of the convex hull, validating that every listed vertex is extreme.
pub fn facets(spec: &ConvexBodySpec) -> Result<Vec<Facet>, Ell1Error> {
    let verts = spec.vertex_list()?;
    let n = spec.dim;
    let diffs: Vec<Vec<Rational>> = verts.iter().skip(1).map(|v| sub(v, &verts[0])).collect();
    if verts.len() < n + 1 || rank(&diffs) < n {
        return Err(Ell1Error::DegenerateBody);
    }
    let mut found = BTreeSet::new();
    for idx in subsets(verts.len(), n) {
        let base = &verts[idx[0]];
        let rows: Vec<Vec<Rational>> = idx[1..].iter().map(|&i| sub(&verts[i], base)).collect();
        let Some(normal) = normal_of(&rows, n) else { continue };
        let offset = dot(&normal, base);
        let sides: Vec<std::cmp::Ordering> = verts.iter().map(|v| dot(&normal, v).cmp(&offset)).collect();
        let (normal, offset) = if sides.iter().all(|s| s.is_le()) {
            (normal, offset)
        } else if sides.iter().all(|s| s.is_ge()) {
            (normal.iter().map(|c| -c).collect(), -offset)
        } else {
            continue;
        };
        found.insert(Facet { normal, offset });
    }
    let facets: Vec<Facet> = found.into_iter().collect();
    for v in &verts {
        let incident: Vec<Vec<Rational>> =
            facets.iter().filter(|f| f.value(v) == f.offset).map(|f| f.normal.clone()).collect();
        if rank(&incident) < n {
            return Err(Ell1Error::NonConvexVertices);
        }
    }
    Ok(facets)
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn floor_int(x: &Rational) -> i64 {
    x.floor().to_integer().to_i64().expect("coordinate fits in i64")
}

fn ceil_int(x: &Rational) -> i64 {
    x.ceil().to_integer().to_i64().expect("coordinate fits in i64")
}

fn cell_corners(cell: &[i64], lam: &Rational) -> Vec<Vec<Rational>> {
    let n = cell.len();
    (0..1usize << n)
        .map(|bits| {
            (0..n).map(|i| lam * Rational::from_integer(BigInt::from(cell[i] + (bits >> i & 1) as i64))).collect()
        })
        .collect()
}

/// Whether `P ∩ cell` has nonempty interior.
fn cell_meets_interior(facets: &[Facet], cell: &[i64], lam: &Rational) -> bool {
    let corners = cell_corners(cell, lam);
    if corners.iter().all(|c| facets.iter().all(|f| f.value(c) <= f.offset)) {
        return true;
    }
    if facets.iter().any(|f| corners.iter().all(|c| f.value(c) >= f.offset)) {
        return false;
    }
    // enumerate vertices of P ∩ cell and test affine rank
    let n = cell.len();
    let mut constraints: Vec<Facet> = facets.to_vec();
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        let lo = lam * Rational::from_integer(BigInt::from(cell[i]));
        let hi = &lo + lam;
        constraints.push(Facet { normal: e.clone(), offset: hi });
        constraints.push(Facet { normal: e.iter().map(|c| -c).collect(), offset: -lo });
    }
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for idx in subsets(constraints.len(), n) {
        let mut rows: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&k| {
                let mut r = constraints[k].normal.clone();
                r.push(constraints[k].offset.clone());
                r
            })
            .collect();
        let Some(x) = solve_square(&mut rows) else { continue };
        if constraints.iter().all(|f| f.value(&x) <= f.offset) && !points.contains(&x) {
            points.push(x);
        }
    }
    if points.len() < n + 1 {
        return false;
    }
    let diffs: Vec<Vec<Rational>> = points.iter().skip(1).map(|p| sub(p, &points[0])).collect();
    rank(&diffs) == n
}

fn solve_square(rows: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let m = rows.len();
    for col in 0..m {
        let p = (col..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, p);
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[col][col];
                for k in col..=m {
                    let d = &f * &rows[col][k];
                    rows[r][k] -= d;
                }
            }
        }
    }
    Some((0..m).map(|i| &rows[i][m] / &rows[i][i]).collect())
}

/// Cells of spacing `λ` whose interiors meet the interior of the body.
pub fn outer_pixelation(spec: &ConvexBodySpec, lam: &Rational) -> Result<PixelSet, Ell1Error> {
    if !lam.is_positive() {
        return Err(Ell1Error::BadScale(lam.to_string()));
    }
    let facets = facets(spec)?;
    let verts = spec.vertex_list()?;
    let n = spec.dim;
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let lo = verts.iter().map(|v| &v[i] / lam).min().expect("vertices");
            let hi = verts.iter().map(|v| &v[i] / lam).max().expect("vertices");
            (floor_int(&lo), ceil_int(&hi))
        })
        .collect();
    let mut candidates = vec![Vec::new()];
    for &(lo, hi) in &ranges {
        candidates = candidates
            .into_iter()
            .flat_map(|c: Vec<i64>| {
                (lo..hi).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    use rayon::prelude::*;
    let cells: Vec<Vec<i64>> =
        candidates.into_par_iter().filter(|c| cell_meets_interior(&facets, c, lam)).collect();
    PixelSet::new(n, lam.clone(), cells)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PixelBounds {
    pub lambda: String,
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    /// Shrink factor placing the outer pixelation inside the body.
    pub alpha: String,
    pub outer_cells: usize,
    pub outer_l1_convex: bool,
    #[serde(rename = "V_outer")]
    pub outer_intrinsic_volumes: Vec<String>,
}

/// Largest `α ≤ 1` with `c + α(A_λ − c) ⊆ A`, checked on cell corners.
fn shrink_factor(facets: &[Facet], pixels: &PixelSet, center: &[Rational]) -> Rational {
    let mut alpha = Rational::one();
    let corners: Vec<Vec<Rational>> = pixels.cells().iter().flat_map(|c| cell_corners(c, pixels.scale())).collect();
    for f in facets {
        let h = corners.iter().map(|p| f.value(p)).max().expect("nonempty");
        if h > f.offset {
            let ac = f.value(center);
            let bound = (&f.offset - &ac) / (h - ac);
            if bound < alpha {
                alpha = bound;
            }
        }
    }
    alpha
}

fn poly_magnitude(poly: &SteinerPolynomial, t: f64) -> f64 {
    poly.coefficients.iter().enumerate().map(|(i, v)| v.to_f64().unwrap_or(f64::NAN) * (t / 2.0).powi(i as i32)).sum()
}

/// Bracket for `Σ V'_i(A) t^i/2^i` from the outer pixelation `A_λ` (upper) and
/// the copy of `A_λ` shrunk about the vertex centroid to fit inside `A` (lower).
pub fn convex_body_pixel_bounds(spec: &ConvexBodySpec, lam: &Rational, t: f64) -> Result<PixelBounds, Ell1Error> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Ell1Error::NonPositive(t.to_string()));
    }
    let facets = facets(spec)?;
    let outer = outer_pixelation(spec, lam)?;
    let verts = spec.vertex_list()?;
    let count = Rational::from_integer(BigInt::from(verts.len()));
    let center: Vec<Rational> =
        (0..spec.dim).map(|i| verts.iter().map(|v| v[i].clone()).fold(Rational::zero(), |a, b| a + b) / &count).collect();
    let alpha = shrink_factor(&facets, &outer, &center);
    let poly = intrinsic_volumes(&outer);
    let upper = poly_magnitude(&poly, t);
    let lower = poly_magnitude(&poly, t * alpha.to_f64().unwrap_or(f64::NAN));
    Ok(PixelBounds {
        lambda: format_rational(lam),
        t,
        lower,
        upper,
        width: upper - lower,
        alpha: format_rational(&alpha),
        outer_cells: outer.len(),
        outer_l1_convex: check_l1_convex(&outer).l1_convex,
        outer_intrinsic_volumes: poly.as_strings(),
    })
}
