//! Finite metric spaces: validation, scaling, ℓ1 products and generators.
//!
//! A [`FiniteMetricSpace`] is always certified: it can only be built through
//! [`validate_metric`] (or one of the generators, which route through it), so
//! every downstream module may assume a symmetric, separated, finite matrix
//! satisfying the triangle inequality.

use std::collections::VecDeque;
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack allowed on the triangle inequality (times the largest entry).
pub const TRIANGLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("distance matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("distance matrix is empty")]
    Empty,
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("nonzero diagonal entry at ({0}, {0})")]
    NonzeroDiagonal(usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroDistanceDistinctPoints(usize, usize),
    #[error("triangle inequality fails: d({i},{j}) > d({i},{via}) + d({via},{j})")]
    TriangleViolation { i: usize, j: usize, via: usize },
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("graph is disconnected (no path from vertex {0} to vertex {1})")]
    DisconnectedGraph(usize, usize),
    #[error("bad space spec: {0}")]
    BadSpec(String),
    #[error("label count {labels} does not match point count {points}")]
    LabelMismatch { labels: usize, points: usize },
    #[error("csv: {0}")]
    Csv(String),
}

/// A finite metric space given by its full distance matrix (row-major).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    n: usize,
    distances: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl FiniteMetricSpace {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.distances[i * self.n..(i + 1) * self.n]
    }

    /// Row-major distance entries.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, MetricError> {
        if labels.len() != self.n {
            return Err(MetricError::LabelMismatch { labels: labels.len(), points: self.n });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_distance(&self) -> f64 {
        self.distances.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest distance between distinct points, `None` for a one-point space.
    pub fn min_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self.get(i, j);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    /// Subspace on the given point indices, in the given order.
    pub fn subspace(&self, indices: &[usize]) -> FiniteMetricSpace {
        let m = indices.len();
        let mut distances = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                distances.push(self.get(i, j));
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i].clone()).collect());
        FiniteMetricSpace { n: m, distances, labels }
    }

    /// Metric induced by the ℓ_p norm on a point cloud (`p` is 1 or 2).
    pub fn from_points(points: &[Vec<f64>], norm: Norm) -> Result<Self, MetricError> {
        let n = points.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(MetricError::BadSpec("points have mixed dimensions".into()));
        }
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = norm.distance(&points[i], &points[j]);
                rows[i][j] = d;
                rows[j][i] = d;
            }
        }
        validate_metric(&rows)
    }

    /// Reads an `N`-row CSV of `N` comma-separated distances, no header.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self, MetricError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| MetricError::Csv(e.to_string()))?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let row = record
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| MetricError::Csv(format!("not a number: {f:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        validate_metric(&rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let line: Vec<String> = self.row(i).iter().map(|d| format!("{d:?}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Norms used by point-cloud generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
}

impl Norm {
    pub fn from_exponent(p: u32) -> Result<Self, MetricError> {
        match p {
            1 => Ok(Norm::L1),
            2 => Ok(Norm::L2),
            _ => Err(MetricError::BadSpec(format!("p must be 1 or 2, got {p}"))),
        }
    }

    pub fn exponent(self) -> u32 {
        match self {
            Norm::L1 => 1,
            Norm::L2 => 2,
        }
    }

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Norm::L2 => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
        }
    }

    pub fn norm(self, a: &[f64]) -> f64 {
        match self {
            Norm::L1 => a.iter().map(|x| x.abs()).sum(),
            Norm::L2 => a.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }
}

/// Certifies a raw matrix as a classical finite metric.
///
/// Axioms are checked in a fixed order (finiteness, sign, diagonal, symmetry,
/// separation, triangle) and the first failure is reported with its witness.
pub fn validate_metric(raw: &[Vec<f64>]) -> Result<FiniteMetricSpace, MetricError> {
    let n = raw.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(MetricError::NotSquare { rows: n, row, len: r.len() });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !raw[i][j].is_finite() {
                return Err(MetricError::NonFinite(i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if raw[i][j] < 0.0 {
                return Err(MetricError::NegativeEntry(i, j));
            }
        }
    }
    for (i, r) in raw.iter().enumerate() {
        if r[i] != 0.0 {
            return Err(MetricError::NonzeroDiagonal(i));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if raw[i][j] != raw[j][i] {
                return Err(MetricError::NotSymmetric(i, j));
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if raw[i][j] == 0.0 {
                return Err(MetricError::ZeroDistanceDistinctPoints(i, j));
            }
        }
    }
    let distances: Vec<f64> = raw.iter().flatten().copied().collect();
    if let Some((i, j, via)) = first_triangle_violation(n, &distances) {
        return Err(MetricError::TriangleViolation { i, j, via });
    }
    Ok(FiniteMetricSpace { n, distances, labels: None })
}

/// First `(i, j, via)` with `i < j` (lexicographic) where `d(i,j)` exceeds the
/// path through `via` by more than the tolerance.
fn first_triangle_violation(n: usize, d: &[f64]) -> Option<(usize, usize, usize)> {
    let max = d.iter().copied().fold(0.0, f64::max);
    let slack = TRIANGLE_TOLERANCE * max;
    let mut through = vec![0.0; n];
    for i in 0..n {
        let ri = &d[i * n..(i + 1) * n];
        for j in (i + 1)..n {
            let rj = &d[j * n..(j + 1) * n];
            // vectorisable pass first; only locate the witness on failure
            for (t, (a, b)) in through.iter_mut().zip(ri.iter().zip(rj)) {
                *t = a + b;
            }
            let shortest = through.iter().copied().fold(f64::INFINITY, f64::min);
            if ri[j] > shortest + slack {
                let via = (0..n).find(|&k| ri[j] > through[k] + slack).unwrap();
                return Some((i, j, via));
            }
        }
    }
    None
}

/// The space `(A, t·d)`.
pub fn scale_space(space: &FiniteMetricSpace, t: f64) -> Result<FiniteMetricSpace, MetricError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(MetricError::NonpositiveScale(t));
    }
    Ok(FiniteMetricSpace {
        n: space.n,
        distances: space.distances.iter().map(|d| d * t).collect(),
        labels: space.labels.clone(),
    })
}

/// ℓ1 product `A ×₁ B`; point `(a, b)` has index `a·|B| + b`.
pub fn l1_product(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> FiniteMetricSpace {
    let n = a.n * b.n;
    let mut distances = Vec::with_capacity(n * n);
    for a1 in 0..a.n {
        for b1 in 0..b.n {
            for a2 in 0..a.n {
                let da = a.get(a1, a2);
                for b2 in 0..b.n {
                    distances.push(da + b.get(b1, b2));
                }
            }
        }
    }
    let labels = match (&a.labels, &b.labels) {
        (Some(la), Some(lb)) => Some(
            la.iter()
                .flat_map(|x| lb.iter().map(move |y| format!("({x},{y})")))
                .collect(),
        ),
        _ => None,
    };
    FiniteMetricSpace { n, distances, labels }
}

/// Declarative description of a test space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    #[serde(flatten)]
    pub kind: SpaceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum SpaceKind {
    /// Points on the real line.
    Points1d { coords: Vec<f64> },
    /// Shortest-path metric of an undirected graph with unit edge weights.
    GraphShortestPath { vertices: usize, edges: Vec<(usize, usize)> },
    /// Regular grid in a box with `points_per_axis[i]` points spanning `extents[i]`.
    LpGrid { p: u32, extents: Vec<f64>, points_per_axis: Vec<usize> },
    /// Endpoints of the depth-`depth` middle-thirds construction on `[0, length]`.
    CantorEndpoints { depth: u32, length: f64 },
    /// Uniform random points in the ℓ_p ball of the given radius.
    BallSample { dim: usize, radius: f64, count: usize, p: u32 },
    ExplicitMatrix { rows: Vec<Vec<f64>> },
}

impl SpaceSpec {
    pub fn new(kind: SpaceKind) -> Self {
        SpaceSpec { kind, seed: None }
    }

    pub fn seeded(kind: SpaceKind, seed: u64) -> Self {
        SpaceSpec { kind, seed: Some(seed) }
    }

    pub fn from_json(s: &str) -> Result<Self, MetricError> {
        serde_json::from_str(s).map_err(|e| MetricError::BadSpec(e.to_string()))
    }

    /// Coordinates on ℝ when the spec describes a subset of the line.
    pub fn line_coordinates(&self) -> Option<Vec<f64>> {
        match &self.kind {
            SpaceKind::Points1d { coords } => Some(coords.clone()),
            SpaceKind::CantorEndpoints { depth, length } => Some(cantor_endpoints(*depth, *length)),
            SpaceKind::LpGrid { extents, points_per_axis, .. } if extents.len() == 1 => {
                Some(grid_axis(extents[0], points_per_axis[0]))
            }
            _ => None,
        }
    }
}

/// Builds the space a spec describes. Pure: equal specs give bit-identical matrices.
pub fn generate_space(spec: &SpaceSpec) -> Result<FiniteMetricSpace, MetricError> {
    match &spec.kind {
        SpaceKind::Points1d { coords } => {
            if coords.is_empty() {
                return Err(MetricError::BadSpec("points_1d needs at least one coordinate".into()));
            }
            let pts: Vec<Vec<f64>> = coords.iter().map(|&x| vec![x]).collect();
            FiniteMetricSpace::from_points(&pts, Norm::L1)
        }
        SpaceKind::GraphShortestPath { vertices, edges } => graph_metric(*vertices, edges),
        SpaceKind::LpGrid { p, extents, points_per_axis } => {
            let norm = Norm::from_exponent(*p)?;
            if extents.is_empty() || extents.len() != points_per_axis.len() {
                return Err(MetricError::BadSpec(
                    "lp_grid needs matching extents and points_per_axis".into(),
                ));
            }
            if extents.iter().any(|e| !(*e >= 0.0) || !e.is_finite())
                || points_per_axis.iter().any(|&k| k == 0)
            {
                return Err(MetricError::BadSpec("lp_grid extents must be >= 0 and counts >= 1".into()));
            }
            let axes: Vec<Vec<f64>> = extents
                .iter()
                .zip(points_per_axis)
                .map(|(&e, &k)| grid_axis(e, k))
                .collect();
            FiniteMetricSpace::from_points(&cartesian(&axes), norm)
        }
        SpaceKind::CantorEndpoints { depth, length } => {
            if !(*length > 0.0) || !length.is_finite() {
                return Err(MetricError::BadSpec("cantor length must be positive".into()));
            }
            if *depth > 20 {
                return Err(MetricError::BadSpec("cantor depth above 20 is not supported".into()));
            }
            let pts: Vec<Vec<f64>> =
                cantor_endpoints(*depth, *length).into_iter().map(|x| vec![x]).collect();
            FiniteMetricSpace::from_points(&pts, Norm::L1)
        }
        SpaceKind::BallSample { dim, radius, count, p } => {
            let norm = Norm::from_exponent(*p)?;
            let seed = spec
                .seed
                .ok_or_else(|| MetricError::BadSpec("ball_sample requires a seed".into()))?;
            if *dim == 0 || *count == 0 || !(*radius > 0.0) || !radius.is_finite() {
                return Err(MetricError::BadSpec("ball_sample needs dim, count >= 1 and radius > 0".into()));
            }
            let pts = ball_sample(*dim, *radius, *count, norm, seed);
            FiniteMetricSpace::from_points(&pts, norm)
        }
        SpaceKind::ExplicitMatrix { rows } => validate_metric(rows),
    }
}

fn grid_axis(extent: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![0.0];
    }
    (0..k).map(|j| extent * j as f64 / (k - 1) as f64).collect()
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Sorted endpoints of the `2^depth` intervals left after `depth` removal steps.
pub fn cantor_endpoints(depth: u32, length: f64) -> Vec<f64> {
    // integer numerators over 3^depth keep the endpoints exact before scaling
    let denom = 3u64.pow(depth) as f64;
    let mut starts: Vec<u64> = vec![0];
    let mut width = 3u64.pow(depth);
    for _ in 0..depth {
        width /= 3;
        starts = starts.iter().flat_map(|&s| [s, s + 2 * width]).collect();
    }
    let mut pts = Vec::with_capacity(2 * starts.len());
    for s in starts {
        pts.push(length * s as f64 / denom);
        pts.push(length * (s + width) as f64 / denom);
    }
    pts
}

/// First `count` points of the seeded rejection-sampling stream in the ℓ_p
/// ball; a larger `count` with the same seed extends the same sequence.
pub fn ball_sample(dim: usize, radius: f64, count: usize, norm: Norm, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-radius..=radius)).collect();
        if norm.norm(&p) <= radius {
            pts.push(p);
        }
    }
    pts
}

/// All-pairs shortest paths by breadth-first search from every vertex.
pub fn graph_metric(vertices: usize, edges: &[(usize, usize)]) -> Result<FiniteMetricSpace, MetricError> {
    if vertices == 0 {
        return Err(MetricError::Empty);
    }
    let mut adj = vec![Vec::new(); vertices];
    for &(u, v) in edges {
        if u >= vertices || v >= vertices {
            return Err(MetricError::BadSpec(format!("edge ({u}, {v}) out of range")));
        }
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut rows = vec![vec![0.0; vertices]; vertices];
    for (s, row) in rows.iter_mut().enumerate() {
        let mut dist = vec![usize::MAX; vertices];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (t, &d) in dist.iter().enumerate() {
            if d == usize::MAX {
                return Err(MetricError::DisconnectedGraph(s, t));
            }
            row[t] = d as f64;
        }
    }
    validate_metric(&rows)
}

/// Named graphs: `k<n>` complete, `c<n>` cycle, `p<n>` path, `k<m>,<n>` complete bipartite
/// (`k32` is accepted as shorthand for `k3,2`).
pub fn named_graph(name: &str) -> Result<SpaceSpec, MetricError> {
    let bad = || MetricError::BadSpec(format!("unknown graph name {name:?}"));
    let lower = name.to_ascii_lowercase();
    let (head, rest) = lower.split_at(1);
    let parse = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let (vertices, edges) = match head {
        "k" if rest.contains(',') || rest == "32" || rest == "23" => {
            let (m, n) = match rest.split_once(',') {
                Some((m, n)) => (parse(m)?, parse(n)?),
                None => (parse(&rest[..1])?, parse(&rest[1..])?),
            };
            let edges = (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))).collect();
            (m + n, edges)
        }
        "k" => {
            let n = parse(rest)?;
            let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
            (n, edges)
        }
        "c" => {
            let n = parse(rest)?;
            if n < 3 {
                return Err(bad());
            }
            ((n), (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        "p" => {
            let n = parse(rest)?;
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        _ => return Err(bad()),
    };
    if vertices == 0 {
        return Err(bad());
    }
    Ok(SpaceSpec::new(SpaceKind::GraphShortestPath { vertices, edges }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_valid(raw: &[Vec<f64>]) -> bool {
        let n = raw.len();
        let max = raw.iter().flatten().copied().fold(0.0, f64::max);
        for i in 0..n {
            if raw[i][i] != 0.0 {
                return false;
            }
            for j in 0..n {
                if raw[i][j] < 0.0 || raw[i][j] != raw[j][i] || (i != j && raw[i][j] == 0.0) {
                    return false;
                }
                for k in 0..n {
                    if raw[i][j] > raw[i][k] + raw[k][j] + TRIANGLE_TOLERANCE * max {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn smallest_metric_is_valid() {
        let a = validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.get(0, 1), 1.0);
    }

    #[test]
    fn axiom_rejections() {
        assert_eq!(
            validate_metric(&[vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(MetricError::NotSymmetric(0, 1))
        );
        assert_eq!(
            validate_metric(&[vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]]),
            Err(MetricError::TriangleViolation { i: 0, j: 2, via: 1 })
        );
        assert_eq!(
            validate_metric(&[vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(MetricError::NegativeEntry(0, 1))
        );
        assert_eq!(
            validate_metric(&[vec![1.0, 1.0], vec![1.0, 0.0]]),
            Err(MetricError::NonzeroDiagonal(0))
        );
        assert_eq!(
            validate_metric(&[vec![0.0, 0.0], vec![0.0, 0.0]]),
            Err(MetricError::ZeroDistanceDistinctPoints(0, 1))
        );
        assert!(matches!(
            validate_metric(&[vec![0.0, f64::INFINITY], vec![f64::INFINITY, 0.0]]),
            Err(MetricError::NonFinite(0, 1))
        ));
        assert!(matches!(validate_metric(&[vec![0.0, 1.0]]), Err(MetricError::NotSquare { .. })));
    }

    #[test]
    fn rounding_level_triangle_slack_is_accepted() {
        let eps = 1e-15;
        let raw = vec![
            vec![0.0, 1.0, 2.0 + eps],
            vec![1.0, 0.0, 1.0],
            vec![2.0 + eps, 1.0, 0.0],
        ];
        assert!(validate_metric(&raw).is_ok());
    }

    #[test]
    fn scaling() {
        let a = validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(scale_space(&a, 1.0).unwrap(), a);
        assert_eq!(scale_space(&a, 2.0).unwrap().to_rows(), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert_eq!(scale_space(&a, 0.0), Err(MetricError::NonpositiveScale(0.0)));
        assert!(scale_space(&a, -1.0).is_err());
    }

    #[test]
    fn product_examples() {
        let two1 = validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let two2 = validate_metric(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let one = validate_metric(&[vec![0.0]]).unwrap();
        assert_eq!(l1_product(&two1, &one).to_rows(), two1.to_rows());
        let p = l1_product(&two1, &two2);
        assert_eq!(p.len(), 4);
        // (a,b) index a*2+b; enumerated by hand
        let expected = vec![
            vec![0.0, 2.0, 1.0, 3.0],
            vec![2.0, 0.0, 3.0, 1.0],
            vec![1.0, 3.0, 0.0, 2.0],
            vec![3.0, 1.0, 2.0, 0.0],
        ];
        assert_eq!(p.to_rows(), expected);
        assert!(validate_metric(&p.to_rows()).is_ok());
    }

    #[test]
    fn generators() {
        let c = cantor_endpoints(1, 1.0);
        assert_eq!(c, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert_eq!(cantor_endpoints(3, 1.0).len(), 16);

        let k32 = generate_space(&named_graph("k32").unwrap()).unwrap();
        assert_eq!(k32.len(), 5);
        for i in 0..5 {
            for j in 0..5 {
                let same_part = (i < 3) == (j < 3);
                let want = if i == j { 0.0 } else if same_part { 2.0 } else { 1.0 };
                assert_eq!(k32.get(i, j), want);
            }
        }

        let line = generate_space(&SpaceSpec::new(SpaceKind::Points1d { coords: vec![0.0, 1.0, 3.0] }))
            .unwrap();
        assert_eq!(line.to_rows(), vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 2.0], vec![3.0, 2.0, 0.0]]);

        let disconnected = SpaceSpec::new(SpaceKind::GraphShortestPath { vertices: 3, edges: vec![(0, 1)] });
        assert_eq!(generate_space(&disconnected), Err(MetricError::DisconnectedGraph(0, 2)));

        let unseeded = SpaceSpec::new(SpaceKind::BallSample { dim: 3, radius: 1.0, count: 5, p: 2 });
        assert!(matches!(generate_space(&unseeded), Err(MetricError::BadSpec(_))));
        let bad_p = SpaceSpec::new(SpaceKind::LpGrid { p: 3, extents: vec![1.0], points_per_axis: vec![2] });
        assert!(matches!(generate_space(&bad_p), Err(MetricError::BadSpec(_))));
    }

    #[test]
    fn ball_samples_are_nested_and_inside() {
        let small = ball_sample(3, 1.0, 50, Norm::L2, 7);
        let big = ball_sample(3, 1.0, 200, Norm::L2, 7);
        assert_eq!(&big[..50], &small[..]);
        assert!(big.iter().all(|p| Norm::L2.norm(p) <= 1.0));
    }

    #[test]
    fn spec_json_round_trip() {
        let json = r#"{"kind":"ball_sample","params":{"dim":3,"radius":1.0,"count":10,"p":2},"seed":42}"#;
        let spec = SpaceSpec::from_json(json).unwrap();
        assert_eq!(spec.seed, Some(42));
        let again = SpaceSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(generate_space(&spec).unwrap(), generate_space(&again).unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let a = generate_space(&named_graph("c4").unwrap()).unwrap();
        let b = FiniteMetricSpace::from_csv_reader(a.to_csv().as_bytes()).unwrap();
        assert_eq!(a, b);
        assert!(FiniteMetricSpace::from_csv_reader("0,1\n1,x\n".as_bytes()).is_err());
    }

    #[test]
    fn named_graphs() {
        assert_eq!(generate_space(&named_graph("k3").unwrap()).unwrap().max_distance(), 1.0);
        assert_eq!(generate_space(&named_graph("c6").unwrap()).unwrap().max_distance(), 3.0);
        assert_eq!(generate_space(&named_graph("p4").unwrap()).unwrap().max_distance(), 3.0);
        assert_eq!(generate_space(&named_graph("k2,3").unwrap()).unwrap().len(), 5);
        assert!(named_graph("q5").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn raw_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
            (1usize..12).prop_flat_map(|n| {
                proptest::collection::vec(
                    proptest::collection::vec(prop_oneof![Just(1.0), Just(2.0), 0.5f64..3.0], n),
                    n,
                )
                .prop_map(move |mut m| {
                    for i in 0..n {
                        m[i][i] = 0.0;
                        for j in 0..i {
                            m[i][j] = m[j][i];
                        }
                    }
                    m
                })
            })
        }

        proptest! {
            #[test]
            fn validation_matches_brute_force(raw in raw_matrix()) {
                prop_assert_eq!(validate_metric(&raw).is_ok(), brute_force_valid(&raw));
            }

            #[test]
            fn scale_round_trip(coords in proptest::collection::vec(-10.0f64..10.0, 1..20), t in 0.01f64..100.0) {
                let mut c = coords;
                c.sort_by(|a, b| a.partial_cmp(b).unwrap());
                c.dedup();
                let a = generate_space(&SpaceSpec::new(SpaceKind::Points1d { coords: c })).unwrap();
                let back = scale_space(&scale_space(&a, t).unwrap(), 1.0 / t).unwrap();
                for (x, y) in a.distances().iter().zip(back.distances()) {
                    prop_assert!((x - y).abs() <= 1e-15 * x.abs());
                }
            }

            #[test]
            fn product_is_associative_on_distance_multisets(
                a in proptest::collection::vec(0.0f64..5.0, 1..4),
                b in proptest::collection::vec(0.0f64..5.0, 1..4),
                c in proptest::collection::vec(0.0f64..5.0, 1..4),
            ) {
                let mk = |mut v: Vec<f64>| {
                    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
                    v.dedup();
                    generate_space(&SpaceSpec::new(SpaceKind::Points1d { coords: v })).unwrap()
                };
                let (a, b, c) = (mk(a), mk(b), mk(c));
                let left = l1_product(&l1_product(&a, &b), &c);
                let right = l1_product(&a, &l1_product(&b, &c));
                prop_assert_eq!(left.len(), a.len() * b.len() * c.len());
                let mut l: Vec<f64> = left.distances().to_vec();
                let mut r: Vec<f64> = right.distances().to_vec();
                l.sort_by(|x, y| x.partial_cmp(y).unwrap());
                r.sort_by(|x, y| x.partial_cmp(y).unwrap());
                for (x, y) in l.iter().zip(&r) {
                    prop_assert!((x - y).abs() <= 1e-12);
                }
            }

            #[test]
            fn generation_is_deterministic(seed in any::<u64>(), count in 1usize..40) {
                let spec = SpaceSpec::seeded(SpaceKind::BallSample { dim: 2, radius: 1.5, count, p: 1 }, seed);
                let x = generate_space(&spec).unwrap();
                let y = generate_space(&spec).unwrap();
                prop_assert_eq!(x.distances(), y.distances());
            }
        }
    }
}
