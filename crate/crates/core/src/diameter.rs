//! Exact farthest-pair (extrinsic diameter) of point sets in R^D.
//!
//! Two routes share one contract: a plain O(n²) scan and a dual k-d tree
//! branch-and-bound. Both return `sqrt(max |p - q|²)` over the same pairs,
//! so the pruned route is bit-identical to the scan.

use nalgebra::SVector;
use rayon::prelude::*;

const LEAF_SIZE: usize = 24;
/// Above this many points [`diameter`] switches to the pruned search.
pub const PRUNE_THRESHOLD: usize = 2048;

/// Exact diameter. Uses the scan for small inputs and the tree otherwise.
pub fn diameter<const D: usize>(points: &[SVector<f64, D>]) -> f64 {
    if points.len() <= PRUNE_THRESHOLD {
        diameter_bruteforce(points)
    } else {
        diameter_pruned(points)
    }
}

/// O(n²) scan, data-parallel over rows. Max is order independent.
pub fn diameter_bruteforce<const D: usize>(points: &[SVector<f64, D>]) -> f64 {
    let best = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let p = &points[i];
            points[i + 1..]
                .iter()
                .map(|q| (p - q).norm_squared())
                .fold(0.0f64, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    best.sqrt()
}

struct Node<const D: usize> {
    lo: SVector<f64, D>,
    hi: SVector<f64, D>,
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

struct Tree<'a, const D: usize> {
    points: &'a [SVector<f64, D>],
    order: Vec<usize>,
    nodes: Vec<Node<D>>,
}

impl<'a, const D: usize> Tree<'a, D> {
    fn build(points: &'a [SVector<f64, D>]) -> Self {
        let mut tree = Tree {
            points,
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        tree.split(0, points.len());
        tree
    }

    fn split(&mut self, start: usize, end: usize) -> usize {
        let mut lo = SVector::<f64, D>::repeat(f64::INFINITY);
        let mut hi = SVector::<f64, D>::repeat(f64::NEG_INFINITY);
        for &i in &self.order[start..end] {
            let p = &self.points[i];
            for d in 0..D {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            lo,
            hi,
            start,
            end,
            children: None,
        });
        if end - start > LEAF_SIZE {
            let extent = hi - lo;
            let axis = extent.imax();
            let mid = (start + end) / 2;
            let points = self.points;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b))
            });
            let left = self.split(start, mid);
            let right = self.split(mid, end);
            self.nodes[id].children = Some((left, right));
        }
        id
    }

    fn max_bound(&self, a: usize, b: usize) -> f64 {
        let (na, nb) = (&self.nodes[a], &self.nodes[b]);
        let mut s = 0.0;
        for d in 0..D {
            let span = (na.hi[d] - nb.lo[d]).abs().max((nb.hi[d] - na.lo[d]).abs());
            s += span * span;
        }
        s
    }

    fn volume_key(&self, a: usize) -> f64 {
        let n = &self.nodes[a];
        (n.hi - n.lo).norm_squared()
    }

    fn visit(&self, a: usize, b: usize, best: &mut f64) {
        if self.max_bound(a, b) <= *best {
            return;
        }
        let (ca, cb) = (self.nodes[a].children, self.nodes[b].children);
        match (ca, cb) {
            (None, None) => self.scan(a, b, best),
            _ if a == b => {
                let (l, r) = ca.expect("non-leaf");
                self.visit(l, r, best);
                self.visit(l, l, best);
                self.visit(r, r, best);
            }
            _ => {
                let split_a = match (ca, cb) {
                    (Some(_), None) => true,
                    (None, Some(_)) => false,
                    _ => self.volume_key(a) >= self.volume_key(b),
                };
                let pairs = if split_a {
                    let (l, r) = ca.expect("non-leaf");
                    [(l, b), (r, b)]
                } else {
                    let (l, r) = cb.expect("non-leaf");
                    [(a, l), (a, r)]
                };
                let (first, second) = if self.max_bound(pairs[0].0, pairs[0].1)
                    >= self.max_bound(pairs[1].0, pairs[1].1)
                {
                    (pairs[0], pairs[1])
                } else {
                    (pairs[1], pairs[0])
                };
                self.visit(first.0, first.1, best);
                self.visit(second.0, second.1, best);
            }
        }
    }

    fn scan(&self, a: usize, b: usize, best: &mut f64) {
        let (na, nb) = (&self.nodes[a], &self.nodes[b]);
        for &i in &self.order[na.start..na.end] {
            for &j in &self.order[nb.start..nb.end] {
                let d = (self.points[i] - self.points[j]).norm_squared();
                if d > *best {
                    *best = d;
                }
            }
        }
    }
}

/// Dual-tree branch-and-bound; exact.
pub fn diameter_pruned<const D: usize>(points: &[SVector<f64, D>]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    // Seed with a double farthest-point sweep.
    let far = |from: &SVector<f64, D>| {
        let mut idx = 0;
        let mut best = -1.0;
        for (i, q) in points.iter().enumerate() {
            let d = (from - q).norm_squared();
            if d > best {
                best = d;
                idx = i;
            }
        }
        (idx, best)
    };
    let (a, _) = far(&points[0]);
    let (b, d_ab) = far(&points[a]);
    let (_, d_b) = far(&points[b]);
    let mut best = d_ab.max(d_b);
    let tree = Tree::build(points);
    tree.visit(0, 0, &mut best);
    best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_pair() {
        let pts = [Vector3::new(0.0, 0.0, 0.0), Vector3::new(3.0, 4.0, 0.0)];
        assert_eq!(diameter(&pts), 5.0);
    }

    #[test]
    fn pruned_matches_scan_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 50, 500, 5000] {
            let pts: Vec<Vector3<f64>> = (0..n)
                .map(|_| {
                    let v: Vector3<f64> = Vector3::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-0.2..0.2),
                    );
                    v / v.norm().max(0.5)
                })
                .collect();
            assert_eq!(diameter_bruteforce(&pts), diameter_pruned(&pts), "n = {n}");
        }
    }

    #[test]
    fn pruned_handles_coincident_points() {
        let mut pts = vec![Vector3::new(1.0, 1.0, 1.0); 100];
        pts.push(Vector3::new(1.0, 1.0, 2.0));
        assert_eq!(diameter_pruned(&pts), 1.0);
    }
}
