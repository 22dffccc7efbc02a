//! dist(Γ₁, Γ₂) > ℓ(Γ)/π over splits of the components into two groups.
//!
//! The best split is found from a minimum spanning tree of the component
//! distance graph: cutting its longest edge gives the optimum.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::{Certificate, Entry, Verdict, STRICT_MARGIN};
use crate::contour::{candidate_pairs, component_distance_matrix, contour_length, polyline_distance, Contour};
use crate::error::ContourError;
use crate::spatial::KdTree;

pub const ORACLE_MAX_COMPONENTS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct WhiteOptimum {
    pub distance: f64,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Kruskal over `edges`; `None` when they do not connect all `n` nodes.
fn kruskal(n: usize, mut edges: Vec<(f64, usize, usize)>) -> Option<Vec<(f64, usize, usize)>> {
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut dsu = Dsu::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for e in edges {
        if dsu.union(e.1, e.2) {
            tree.push(e);
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    (tree.len() + 1 == n).then_some(tree)
}

fn split_tree(n: usize, tree: &[(f64, usize, usize)]) -> WhiteOptimum {
    let (cut, rest) = tree.split_last().expect("tree has an edge");
    let mut dsu = Dsu::new(n);
    for e in rest {
        dsu.union(e.1, e.2);
    }
    let root = dsu.find(0);
    let (first, second): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| dsu.find(i) == root);
    WhiteOptimum { distance: cut.0, first, second }
}

/// Optimal split from a full symmetric distance matrix.
pub fn white_from_matrix(m: &[Vec<f64>]) -> WhiteOptimum {
    let n = m.len();
    assert!(n >= 2, "need at least two components");
    let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (m[i][j], i, j))).collect();
    split_tree(n, &kruskal(n, edges).expect("complete graph is connected"))
}

/// Optimal split of the contour components. Exact distances are only
/// computed for pairs whose bounding spheres are within a growing
/// threshold, until the pairs below it connect every component.
pub fn white_optimum(c: &Contour) -> Result<WhiteOptimum, ContourError> {
    let n = c.len();
    if n < 2 {
        return Err(ContourError::SingleComponent);
    }
    let comps = c.components();
    let bounds = c.bounds();
    let tree = KdTree::new(bounds.iter().map(|b| b.center).collect());
    let mut t = (0..n)
        .filter_map(|i| tree.nearest(&bounds[i].center, Some(i)).map(|(_, d2)| d2.sqrt()))
        .fold(0.0, f64::max)
        .max(1e-12);
    let mut known: HashMap<(usize, usize), f64> = HashMap::new();
    loop {
        let pairs = candidate_pairs(&bounds, t);
        let fresh: Vec<(usize, usize)> = pairs.iter().copied().filter(|p| !known.contains_key(p)).collect();
        let dists: Vec<f64> = fresh
            .par_iter()
            .map(|&(i, j)| polyline_distance(&comps[i], &comps[j], 0.0))
            .collect();
        known.extend(fresh.into_iter().zip(dists));
        let edges: Vec<(f64, usize, usize)> = pairs
            .iter()
            .map(|&(i, j)| (known[&(i, j)], i, j))
            .filter(|e| e.0 <= t)
            .collect();
        if let Some(mst) = kruskal(n, edges) {
            return Ok(split_tree(n, &mst));
        }
        t *= 2.0;
    }
}

pub fn white_check(c: &Contour) -> Result<Entry, ContourError> {
    let mut e = Entry::new("white", true);
    if c.len() < 2 {
        e.note("single component: no decomposition exists");
        return Ok(e);
    }
    let opt = white_optimum(c)?;
    let l = contour_length(c);
    let margin = opt.distance - l / PI;
    e.margin = Some(margin);
    e.measure("best_cross_distance", opt.distance);
    e.measure("l", l);
    e.measure("threshold", l / PI);
    e.measure("ratio", opt.distance / l);
    if margin > STRICT_MARGIN * l {
        e.verdict = Verdict::Certified;
        e.certificate = Some(Certificate::Decomposition { first: opt.first, second: opt.second });
    } else {
        e.verdict = Verdict::NoCertificateFound;
    }
    e.note("components kept whole in the decomposition");
    Ok(e)
}

/// Exhaustive maximum over all 2^(N-1) - 1 splits.
pub fn white_bruteforce_matrix(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut best = f64::NEG_INFINITY;
    for mask in 1u32..(1u32 << (n - 1)) {
        let mut cross = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let side = |k: usize| k < n - 1 && mask & (1 << k) != 0;
                if side(i) != side(j) {
                    cross = cross.min(m[i][j]);
                }
            }
        }
        best = best.max(cross);
    }
    best
}

pub fn white_bruteforce_oracle(c: &Contour) -> Result<f64, ContourError> {
    let n = c.len();
    if !(2..=ORACLE_MAX_COMPONENTS).contains(&n) {
        return Err(ContourError::OracleRange(n));
    }
    Ok(white_bruteforce_matrix(&component_distance_matrix(c)?))
}
