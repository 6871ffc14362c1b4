use serde::Serialize;

use crate::metric::FiniteMetricSpace;

pub const EXACT_COVERING_LIMIT: usize = 25;

/// Covering by pieces of diameter at most `2ε` (the footprint of an ε-ball).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringResult {
    /// Size of the cover found (exact when `exact`).
    pub count: usize,
    /// Packing lower bound: points pairwise farther than `2ε`.
    pub lower_bound: usize,
    pub exact: bool,
    /// Groups of point indices; the first index of each group is its centre.
    pub groups: Vec<Vec<usize>>,
}

impl CoveringResult {
    pub fn centers(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g[0]).collect()
    }
}

/// `N(A, ε)`: branch and bound for `N ≤ 25`, greedy cover and packing otherwise.
pub fn covering_number(space: &FiniteMetricSpace, eps: f64) -> CoveringResult {
    let n = space.len();
    let reach = 2.0 * eps * (1.0 + 1e-12);
    let close = |i: usize, j: usize| space.get(i, j) <= reach;
    let packing = greedy_packing(n, &close);
    let greedy = greedy_cover(n, &close);
    if n > EXACT_COVERING_LIMIT || greedy.len() == packing {
        let exact = greedy.len() == packing;
        return CoveringResult { count: greedy.len(), lower_bound: packing, exact, groups: greedy };
    }
    let mut search = Search { close: &close, best: greedy, groups: Vec::new() };
    search.place(0, n);
    CoveringResult { count: search.best.len(), lower_bound: packing, exact: true, groups: search.best }
}

fn greedy_cover(n: usize, close: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut covered = vec![false; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if covered[start] {
            continue;
        }
        let mut group = vec![start];
        covered[start] = true;
        for j in start + 1..n {
            if !covered[j] && group.iter().all(|&g| close(g, j)) {
                group.push(j);
                covered[j] = true;
            }
        }
        groups.push(group);
    }
    groups
}

fn greedy_packing(n: usize, close: &dyn Fn(usize, usize) -> bool) -> usize {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..n {
        if chosen.iter().all(|&c| !close(c, i)) {
            chosen.push(i);
        }
    }
    chosen.len()
}

struct Search<'a> {
    close: &'a dyn Fn(usize, usize) -> bool,
    best: Vec<Vec<usize>>,
    groups: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Assigns point `i` to an existing compatible group or a new one.
    fn place(&mut self, i: usize, n: usize) {
        if self.groups.len() >= self.best.len() {
            return;
        }
        if i == n {
            self.best = self.groups.clone();
            return;
        }
        for k in 0..self.groups.len() {
            if self.groups[k].iter().all(|&g| (self.close)(g, i)) {
                self.groups[k].push(i);
                self.place(i + 1, n);
                self.groups[k].pop();
            }
        }
        if self.groups.len() + 1 < self.best.len() {
            self.groups.push(vec![i]);
            self.place(i + 1, n);
            self.groups.pop();
        }
    }
}
