//! A small static k-d tree over 3D points for nearest-neighbour and
//! fixed-radius queries.

use nalgebra::Vector3;

const LEAF: usize = 16;

#[derive(Debug, Clone)]
struct Node {
    lo: Vector3<f64>,
    hi: Vector3<f64>,
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<Vector3<f64>>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn new(points: Vec<Vector3<f64>>) -> Self {
        let n = points.len();
        let mut t = KdTree {
            points,
            order: (0..n).collect(),
            nodes: Vec::new(),
        };
        if n > 0 {
            t.build(0, n);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Vector3<f64> {
        &self.points[i]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let mut lo = Vector3::repeat(f64::INFINITY);
        let mut hi = Vector3::repeat(f64::NEG_INFINITY);
        for &i in &self.order[start..end] {
            lo = lo.inf(&self.points[i]);
            hi = hi.sup(&self.points[i]);
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            lo,
            hi,
            start,
            end,
            children: None,
        });
        if end - start > LEAF {
            let axis = (hi - lo).imax();
            let mid = (start + end) / 2;
            let pts = &self.points;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                pts[a][axis].total_cmp(&pts[b][axis]).then(a.cmp(&b))
            });
            let l = self.build(start, mid);
            let r = self.build(mid, end);
            self.nodes[id].children = Some((l, r));
        }
        id
    }

    fn box_dist2(&self, node: usize, q: &Vector3<f64>) -> f64 {
        let n = &self.nodes[node];
        let mut s = 0.0;
        for d in 0..3 {
            let v = if q[d] < n.lo[d] {
                n.lo[d] - q[d]
            } else if q[d] > n.hi[d] {
                q[d] - n.hi[d]
            } else {
                0.0
            };
            s += v * v;
        }
        s
    }

    /// Nearest point index and squared distance; `skip` excludes one index.
    pub fn nearest(&self, q: &Vector3<f64>, skip: Option<usize>) -> Option<(usize, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.nearest_in(0, q, skip, &mut best);
        (best.0 != usize::MAX).then_some(best)
    }

    fn nearest_in(&self, node: usize, q: &Vector3<f64>, skip: Option<usize>, best: &mut (usize, f64)) {
        if self.box_dist2(node, q) > best.1 {
            return;
        }
        let n = &self.nodes[node];
        match n.children {
            None => {
                for &i in &self.order[n.start..n.end] {
                    if Some(i) == skip {
                        continue;
                    }
                    let d = (self.points[i] - q).norm_squared();
                    if d < best.1 || (d == best.1 && i < best.0) {
                        *best = (i, d);
                    }
                }
            }
            Some((l, r)) => {
                let (a, b) = if self.box_dist2(l, q) <= self.box_dist2(r, q) {
                    (l, r)
                } else {
                    (r, l)
                };
                self.nearest_in(a, q, skip, best);
                self.nearest_in(b, q, skip, best);
            }
        }
    }

    /// All indices within distance `radius` of `q`, sorted.
    pub fn within(&self, q: &Vector3<f64>, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.nodes.is_empty() {
            self.within_in(0, q, radius * radius, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn within_in(&self, node: usize, q: &Vector3<f64>, r2: f64, out: &mut Vec<usize>) {
        if self.box_dist2(node, q) > r2 {
            return;
        }
        let n = &self.nodes[node];
        match n.children {
            None => {
                for &i in &self.order[n.start..n.end] {
                    if (self.points[i] - q).norm_squared() <= r2 {
                        out.push(i);
                    }
                }
            }
            Some((l, r)) => {
                self.within_in(l, q, r2, out);
                self.within_in(r, q, r2, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nearest_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<_> = (0..700)
            .map(|_| Vector3::new(rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let tree = KdTree::new(pts.clone());
        for _ in 0..100 {
            let q = Vector3::new(rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
            let (i, d) = tree.nearest(&q, None).unwrap();
            let brute = pts
                .iter()
                .map(|p| (p - q).norm_squared())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(d, brute);
            assert_eq!((pts[i] - q).norm_squared(), d);
            let within = tree.within(&q, 0.2);
            let expect: Vec<usize> = (0..pts.len()).filter(|&j| (pts[j] - q).norm() <= 0.2).collect();
            assert_eq!(within, expect);
        }
    }
}
