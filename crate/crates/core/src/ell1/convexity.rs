use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use super::PixelSet;

/// Verdict of [`check_l1_convex`]; on failure `witness` is the first ordered
/// pair of cells (lexicographic) that no monotone cell path connects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityVerdict {
    pub l1_convex: bool,
    pub witness: Option<(Vec<i64>, Vec<i64>)>,
}

/// ℓ1-convexity of a pixel set by monotone cell-path reachability.
///
/// A step may move any nonempty subset of coordinates by one unit toward the
/// target, so cells that touch only along a lower-dimensional face still
/// connect when the contact lies between them. Coordinates already equal to
/// the target's stay fixed.
pub fn check_l1_convex(p: &PixelSet) -> ConvexityVerdict {
    let cells: Vec<&Vec<i64>> = p.cells().iter().collect();
    for source in &cells {
        let mut reached: HashSet<Vec<i64>> = HashSet::new();
        // one BFS per sign pattern; patterns partition the other cells
        for signs in sign_patterns(p.dim()) {
            reached.extend(monotone_reach(p, source, &signs));
        }
        for target in &cells {
            if !reached.contains(*target) {
                return ConvexityVerdict { l1_convex: false, witness: Some(((*source).clone(), (*target).clone())) };
            }
        }
    }
    ConvexityVerdict { l1_convex: true, witness: None }
}

fn sign_patterns(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|s: Vec<i64>| {
                [-1, 0, 1].into_iter().map(move |v| {
                    let mut s = s.clone();
                    s.push(v);
                    s
                })
            })
            .collect();
    }
    out
}

/// Cells with `sign(q − source) = signs` reachable from `source` by monotone steps.
fn monotone_reach(p: &PixelSet, source: &[i64], signs: &[i64]) -> Vec<Vec<i64>> {
    let moving: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] != 0).collect();
    let mut seen = BTreeSet::new();
    seen.insert(source.to_vec());
    let mut queue = VecDeque::from([source.to_vec()]);
    while let Some(cell) = queue.pop_front() {
        for bits in 1..(1usize << moving.len()) {
            let mut next = cell.clone();
            for (k, &axis) in moving.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    next[axis] += signs[axis];
                }
            }
            if p.contains_cell(&next) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter()
        .filter(|q| q.iter().zip(source).zip(signs).all(|((a, b), s)| (a - b).signum() == *s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ell1::parse_pixel_set;

    fn convex(art: &str) -> ConvexityVerdict {
        check_l1_convex(&parse_pixel_set(art).unwrap())
    }

    #[test]
    fn examples() {
        assert!(convex("##\n#.").l1_convex);
        assert!(convex("##\n##").l1_convex);
        assert!(convex("###\n###").l1_convex);
        let gap = convex("#.#");
        assert!(!gap.l1_convex);
        assert_eq!(gap.witness, Some((vec![0, 0], vec![2, 0])));
    }

    #[test]
    fn staircases_and_u_shapes() {
        // corner contact lying between the two cells is a geodesic junction
        assert!(convex(".#\n#.").l1_convex);
        assert!(convex("#.\n.#").l1_convex);
        assert!(convex("..#\n.##\n##.").l1_convex);
        // a U shape forces a detour between its arms
        assert!(!convex("#.#\n###").l1_convex);
        // plus sign: arms reach each other through the centre
        assert!(convex(".#.\n###\n.#.").l1_convex);
        // ring around a hole
        assert!(!convex("###\n#.#\n###").l1_convex);
    }

    #[test]
    fn three_dimensional() {
        let cube = PixelSet::block(&[2, 2, 2]).unwrap();
        assert!(check_l1_convex(&cube).l1_convex);
        let diag = PixelSet::unit(3, [vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        assert!(check_l1_convex(&diag).l1_convex);
        let apart = PixelSet::unit(3, [vec![0, 0, 0], vec![0, 0, 2]]).unwrap();
        assert!(!check_l1_convex(&apart).l1_convex);
    }
}
