//! Hilbert-curve spatial sort and a quadtree supporting incremental
//! nearest-neighbor traversal with caller-supplied angular pruning.
//!
//! The tree is built on top of the sorted array: every node owns a
//! contiguous slice of it, so construction never reorders points.

use crate::geom::{pseudo_angle_unchecked, Point};
use crate::{MwtError, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

/// Curve order: enough levels that distinct points practically always get
/// distinct indices; exact ties fall back to lexicographic order.
const HILBERT_ORDER: u32 = 31;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Aabb {
    pub fn of_points(pts: &[Point]) -> Aabb {
        let mut b = Aabb {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for p in pts {
            b.min_x = b.min_x.min(p.x);
            b.min_y = b.min_y.min(p.y);
            b.max_x = b.max_x.max(p.x);
            b.max_y = b.max_y.max(p.y);
        }
        b
    }

    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }

    #[inline]
    pub fn intersects(&self, other: &Aabb) -> bool {
        self.min_x <= other.max_x
            && other.min_x <= self.max_x
            && self.min_y <= other.max_y
            && other.min_y <= self.max_y
    }

    /// Squared distance from `(x, y)` to the closest box point.
    #[inline]
    pub fn sq_dist_to(&self, x: f64, y: f64) -> f64 {
        let dx = (self.min_x - x).max(0.0).max(x - self.max_x);
        let dy = (self.min_y - y).max(0.0).max(y - self.max_y);
        dx * dx + dy * dy
    }
}

/// The point array in Hilbert order plus the permutation back to input
/// positions.
#[derive(Debug, Clone)]
pub struct HilbertOrderedPointSet {
    /// Points with `id` equal to their position in this array.
    pub points: Vec<Point>,
    /// Sorted position -> input position.
    pub original_index: Vec<u32>,
    pub bounds: Aabb,
}

/// Stable deterministic sort along a Hilbert curve covering the bounding
/// box. Duplicate points are an ingestion error.
pub fn hilbert_sort(mut points: Vec<Point>) -> Result<HilbertOrderedPointSet> {
    let bounds = Aabb::of_points(&points);
    let scale = 1u64 << HILBERT_ORDER;
    let w = (bounds.max_x - bounds.min_x).max(f64::MIN_POSITIVE);
    let h = (bounds.max_y - bounds.min_y).max(f64::MIN_POSITIVE);
    let grid = |p: &Point| -> (u32, u32) {
        let gx = (((p.x - bounds.min_x) / w) * scale as f64) as u64;
        let gy = (((p.y - bounds.min_y) / h) * scale as f64) as u64;
        (gx.min(scale - 1) as u32, gy.min(scale - 1) as u32)
    };
    let mut keyed: Vec<(u64, u32)> = points
        .iter()
        .map(|p| {
            let (gx, gy) = grid(p);
            (hilbert_d(gx, gy), p.id)
        })
        .collect();
    let by_input_id: Vec<Point> = {
        let mut v = points.clone();
        v.sort_unstable_by_key(|p| p.id);
        v
    };
    keyed.sort_unstable_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            let pa = &by_input_id[a.1 as usize];
            let pb = &by_input_id[b.1 as usize];
            (pa.x, pa.y).partial_cmp(&(pb.x, pb.y)).unwrap()
        })
    });
    // Duplicate detection: identical coordinates sort adjacently.
    for w in keyed.windows(2) {
        let pa = &by_input_id[w[0].1 as usize];
        let pb = &by_input_id[w[1].1 as usize];
        if pa.x == pb.x && pa.y == pb.y {
            return Err(MwtError::DuplicatePoint {
                x: pa.x,
                y: pa.y,
                line: pb.id as usize + 1,
            });
        }
    }
    let original_index: Vec<u32> = keyed.iter().map(|k| k.1).collect();
    points = keyed
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let p = &by_input_id[k.1 as usize];
            Point::new(p.x, p.y, i as u32)
        })
        .collect();
    Ok(HilbertOrderedPointSet {
        points,
        original_index,
        bounds,
    })
}

/// Plain Hilbert d-index (Wikipedia xy2d form).
fn hilbert_d(mut x: u32, mut y: u32) -> u64 {
    let n: u64 = 1 << HILBERT_ORDER;
    let mut d: u64 = 0;
    let mut s: u64 = n >> 1;
    while s > 0 {
        let rx = u64::from((x as u64) & s > 0);
        let ry = u64::from((y as u64) & s > 0);
        d += s * s * ((3 * rx) ^ ry);
        // Rotate the quadrant.
        if ry == 0 {
            if rx == 1 {
                x = (n - 1 - x as u64) as u32;
                y = (n - 1 - y as u64) as u32;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf,
    Internal { children: [u32; 4], n_children: u8 },
}

#[derive(Debug, Clone)]
struct Node {
    bbox: Aabb,
    lo: u32,
    hi: u32,
    kind: NodeKind,
}

/// Quadtree over the Hilbert-ordered array. Every node's range is a
/// contiguous slice; leaf ranges partition `[0, n)`.
#[derive(Debug, Clone)]
pub struct QuadTree {
    nodes: Vec<Node>,
    hilbert: Vec<u64>,
    pub leaf_capacity: usize,
}

pub const DEFAULT_LEAF_CAPACITY: usize = 16;

/// Smallest CCW pseudo-angle arc `(lo, hi)` enclosing a region as seen from
/// a query point; `full` when the query touches the region and no
/// direction can be excluded.
#[derive(Debug, Clone, Copy)]
pub struct PseudoArc {
    pub lo: f64,
    pub hi: f64,
    pub full: bool,
}

/// Outward padding absorbing floating-point error in arc endpoints; always
/// safe (a wider arc is harder to prune).
const ARC_PAD: f64 = 1e-9;

impl PseudoArc {
    pub fn full_circle() -> Self {
        PseudoArc {
            lo: -2.0,
            hi: 2.0,
            full: true,
        }
    }

    /// Enclosing arc of `bbox` as seen from `(x, y)`, padded outward.
    pub fn enclosing(bbox: &Aabb, x: f64, y: f64) -> Self {
        if bbox.contains(x, y) {
            return Self::full_circle();
        }
        let corners = [
            (bbox.min_x - x, bbox.min_y - y),
            (bbox.max_x - x, bbox.min_y - y),
            (bbox.max_x - x, bbox.max_y - y),
            (bbox.min_x - x, bbox.max_y - y),
        ];
        // The box subtends strictly less than a half circle from an outside
        // point, so some ordered corner pair bounds all four directions.
        let cross = |a: (f64, f64), b: (f64, f64)| a.0 * b.1 - a.1 * b.0;
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let (ci, cj) = (corners[i], corners[j]);
                if (0..4).all(|k| {
                    let ck = corners[k];
                    cross(ci, ck) >= -1e-12 && cross(ck, cj) >= -1e-12
                }) {
                    let lo = pseudo_angle_unchecked(ci.0, ci.1);
                    let hi = pseudo_angle_unchecked(cj.0, cj.1);
                    return PseudoArc {
                        lo: wrap_pa(lo - ARC_PAD),
                        hi: wrap_pa(hi + ARC_PAD),
                        full: false,
                    };
                }
            }
        }
        // Degenerate corner directions (query collinear with a box edge);
        // claiming the full circle is always safe.
        Self::full_circle()
    }
}

/// Wrap into the pseudo-angle range (-2, 2].
#[inline]
pub fn wrap_pa(v: f64) -> f64 {
    if v > 2.0 {
        v - 4.0
    } else if v <= -2.0 {
        v + 4.0
    } else {
        v
    }
}

pub fn build_quadtree(pts: &HilbertOrderedPointSet, leaf_capacity: usize) -> QuadTree {
    assert!(leaf_capacity >= 1);
    let n = pts.points.len();
    let hilbert: Vec<u64> = {
        let scale = 1u64 << HILBERT_ORDER;
        let w = (pts.bounds.max_x - pts.bounds.min_x).max(f64::MIN_POSITIVE);
        let h = (pts.bounds.max_y - pts.bounds.min_y).max(f64::MIN_POSITIVE);
        pts.points
            .iter()
            .map(|p| {
                let gx = ((((p.x - pts.bounds.min_x) / w) * scale as f64) as u64).min(scale - 1);
                let gy = ((((p.y - pts.bounds.min_y) / h) * scale as f64) as u64).min(scale - 1);
                hilbert_d(gx as u32, gy as u32)
            })
            .collect()
    };
    let mut tree = QuadTree {
        nodes: Vec::with_capacity(2 * n / leaf_capacity.max(1) + 1),
        hilbert,
        leaf_capacity,
    };
    if n > 0 {
        tree.build_node(pts, 0, n as u32, 0);
    }
    tree
}

impl QuadTree {
    fn build_node(&mut self, pts: &HilbertOrderedPointSet, lo: u32, hi: u32, mut depth: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            bbox: Aabb::of_points(&pts.points[lo as usize..hi as usize]),
            lo,
            hi,
            kind: NodeKind::Leaf,
        });
        if (hi - lo) as usize <= self.leaf_capacity {
            return id;
        }
        // Descend past depths where all points share one quadrant so no
        // chains of single-child nodes are created.
        while depth < HILBERT_ORDER {
            let shift = 2 * (HILBERT_ORDER - 1 - depth);
            let digit = |h: &[u64], i: u32| (h[i as usize] >> shift) & 3;
            let mut bounds = [lo; 5];
            let mut start = lo;
            for q in 0..4u64 {
                let mut end = start;
                while end < hi && digit(&self.hilbert, end) == q {
                    end += 1;
                }
                bounds[q as usize + 1] = end;
                start = end;
            }
            debug_assert_eq!(start, hi);
            let n_nonempty = (0..4).filter(|&q| bounds[q + 1] > bounds[q]).count();
            if n_nonempty > 1 {
                let mut children = [u32::MAX; 4];
                let mut n_children = 0u8;
                for q in 0..4 {
                    if bounds[q + 1] > bounds[q] {
                        let c = self.build_node(pts, bounds[q], bounds[q + 1], depth + 1);
                        children[n_children as usize] = c;
                        n_children += 1;
                    }
                }
                self.nodes[id as usize].kind = NodeKind::Internal {
                    children,
                    n_children,
                };
                return id;
            }
            depth += 1;
        }
        // Hilbert-identical beyond full resolution: stays a leaf.
        id
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Visit ids of all points inside `bbox`, stopping early when the
    /// visitor breaks.
    pub fn for_points_in_aabb<F>(&self, pts: &[Point], bbox: &Aabb, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(u32) -> ControlFlow<()>,
    {
        if self.nodes.is_empty() {
            return ControlFlow::Continue(());
        }
        let mut stack = vec![0u32];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if !node.bbox.intersects(bbox) {
                continue;
            }
            match node.kind {
                NodeKind::Leaf => {
                    for p in &pts[node.lo as usize..node.hi as usize] {
                        if bbox.contains(p.x, p.y) {
                            f(p.id)?;
                        }
                    }
                }
                NodeKind::Internal {
                    children,
                    n_children,
                } => {
                    for &c in &children[..n_children as usize] {
                        stack.push(c);
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    /// Incremental nearest-neighbor traversal from `(x, y)`. Pass the id
    /// of the query point itself to skip it in the output, or `None` for an
    /// arbitrary location.
    pub fn incremental_nearest<'a>(
        &'a self,
        pts: &'a [Point],
        x: f64,
        y: f64,
        exclude: Option<u32>,
    ) -> NearestIter<'a> {
        let mut heap = BinaryHeap::with_capacity(64);
        if !self.nodes.is_empty() {
            heap.push(Entry {
                key: 0.0,
                kind: EntryKind::Node,
                idx: 0,
            });
        }
        NearestIter {
            tree: self,
            pts,
            x,
            y,
            exclude: exclude.unwrap_or(u32::MAX),
            heap,
        }
    }

    fn validate_ranges(&self) -> bool {
        // Leaf ranges must partition [0, n); checked by the test suite.
        let mut leaves: Vec<(u32, u32)> = self
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Leaf))
            .map(|n| (n.lo, n.hi))
            .collect();
        leaves.sort_unstable();
        let mut expect = 0;
        for (lo, hi) in leaves {
            if lo != expect || hi < lo {
                return false;
            }
            expect = hi;
        }
        expect as usize == self.hilbert.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EntryKind {
    Node,
    Point,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    key: f64,
    kind: EntryKind,
    idx: u32,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse for closest-first. Nodes expand
        // before points at equal distance so ties yield in id order.
        self.key
            .total_cmp(&other.key)
            .then_with(|| {
                let a = self.kind == EntryKind::Point;
                let b = other.kind == EntryKind::Point;
                a.cmp(&b)
            })
            .then_with(|| self.idx.cmp(&other.idx))
            .reverse()
    }
}

/// Ordered frontier of an incremental nearest-neighbor query.
pub struct NearestIter<'a> {
    tree: &'a QuadTree,
    pts: &'a [Point],
    x: f64,
    y: f64,
    exclude: u32,
    heap: BinaryHeap<Entry>,
}

impl<'a> NearestIter<'a> {
    /// Yield the next point in nondecreasing squared distance. Before a
    /// child node is enqueued, `prune` receives the smallest pseudo-angle
    /// arc enclosing its bounding box; returning `true` discards the whole
    /// subtree.
    pub fn next_with<F>(&mut self, mut prune: F) -> Option<(u32, f64)>
    where
        F: FnMut(&PseudoArc) -> bool,
    {
        while let Some(entry) = self.heap.pop() {
            match entry.kind {
                EntryKind::Point => {
                    let p = &self.pts[entry.idx as usize];
                    return Some((p.id, entry.key));
                }
                EntryKind::Node => {
                    let node = &self.tree.nodes[entry.idx as usize];
                    match node.kind {
                        NodeKind::Leaf => {
                            for i in node.lo..node.hi {
                                let p = &self.pts[i as usize];
                                if p.id == self.exclude {
                                    continue;
                                }
                                let d2 = {
                                    let dx = p.x - self.x;
                                    let dy = p.y - self.y;
                                    dx * dx + dy * dy
                                };
                                self.heap.push(Entry {
                                    key: d2,
                                    kind: EntryKind::Point,
                                    idx: i,
                                });
                            }
                        }
                        NodeKind::Internal {
                            children,
                            n_children,
                        } => {
                            for &c in &children[..n_children as usize] {
                                let child = &self.tree.nodes[c as usize];
                                let arc = PseudoArc::enclosing(&child.bbox, self.x, self.y);
                                if !arc.full && prune(&arc) {
                                    continue;
                                }
                                // Slightly deflated so no contained point
                                // can compare below its node under fp
                                // rounding; keys stay monotone up the tree.
                                let d2 = child.bbox.sq_dist_to(self.x, self.y) * (1.0 - 1e-12);
                                self.heap.push(Entry {
                                    key: d2.max(entry.key),
                                    kind: EntryKind::Node,
                                    idx: c,
                                });
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn next_unpruned(&mut self) -> Option<(u32, f64)> {
        self.next_with(|_| false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn pts_of(coords: &[(f64, f64)]) -> Vec<Point> {
        coords
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Point::new(x, y, i as u32))
            .collect()
    }

    fn random_pts(n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| Point::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3), i as u32))
            .collect()
    }

    #[test]
    fn sort_single_point() {
        let s = hilbert_sort(pts_of(&[(3.0, 4.0)])).unwrap();
        assert_eq!(s.original_index, vec![0]);
        assert_eq!(s.points[0].id, 0);
    }

    #[test]
    fn sort_idempotent_and_bijective() {
        let s1 = hilbert_sort(random_pts(1000, 42)).unwrap();
        let again: Vec<Point> = s1.points.clone();
        let s2 = hilbert_sort(again).unwrap();
        for (a, b) in s1.points.iter().zip(s2.points.iter()) {
            assert_eq!((a.x, a.y), (b.x, b.y));
        }
        let mut perm = s1.original_index.clone();
        perm.sort_unstable();
        assert!(perm.iter().enumerate().all(|(i, &v)| i as u32 == v));
    }

    #[test]
    fn sort_unit_square_corners_are_hilbert_adjacent() {
        let s = hilbert_sort(pts_of(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        for w in s.points.windows(2) {
            let l1 = (w[0].x - w[1].x).abs() + (w[0].y - w[1].y).abs();
            assert_eq!(l1, 1.0, "consecutive corners must be adjacent");
        }
    }

    #[test]
    fn sort_rejects_duplicates() {
        let err = hilbert_sort(pts_of(&[(0., 0.), (1., 1.), (0., 0.)]));
        assert!(matches!(err, Err(MwtError::DuplicatePoint { .. })));
    }

    #[test]
    fn quadtree_small_is_single_leaf() {
        let s = hilbert_sort(random_pts(10, 1)).unwrap();
        let t = build_quadtree(&s, 16);
        assert_eq!(t.node_count(), 1);
        assert!(t.validate_ranges());
    }

    #[test]
    fn quadtree_four_quadrant_centers() {
        let s = hilbert_sort(pts_of(&[(0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)]))
            .unwrap();
        let t = build_quadtree(&s, 1);
        let leaves = t
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Leaf))
            .count();
        assert_eq!(leaves, 4);
        assert!(t.validate_ranges());
    }

    #[test]
    fn quadtree_leaf_ranges_partition_and_contain() {
        let s = hilbert_sort(random_pts(1000, 5)).unwrap();
        let t = build_quadtree(&s, 8);
        assert!(t.validate_ranges());
        // Every node bbox contains its points.
        for node in &t.nodes {
            for p in &s.points[node.lo as usize..node.hi as usize] {
                assert!(node.bbox.contains(p.x, p.y));
            }
        }
        // Every point recoverable by a range query of its own coordinates.
        for p in &s.points {
            let tiny = Aabb {
                min_x: p.x,
                min_y: p.y,
                max_x: p.x,
                max_y: p.y,
            };
            let mut found = false;
            let _ = t.for_points_in_aabb(&s.points, &tiny, |id| {
                if id == p.id {
                    found = true;
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            assert!(found);
        }
    }

    #[test]
    fn nn_grid_center_first_yields() {
        let mut coords = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                coords.push((x as f64, y as f64));
            }
        }
        let s = hilbert_sort(pts_of(&coords)).unwrap();
        let t = build_quadtree(&s, 2);
        let center = s.points.iter().find(|p| p.x == 1.0 && p.y == 1.0).unwrap();
        let mut it = t.incremental_nearest(&s.points, center.x, center.y, Some(center.id));
        let mut first4 = Vec::new();
        for _ in 0..4 {
            let (id, d2) = it.next_unpruned().unwrap();
            assert_eq!(d2, 1.0);
            first4.push(id);
        }
        for _ in 0..4 {
            let (_, d2) = it.next_unpruned().unwrap();
            assert_eq!(d2, 2.0);
        }
        assert!(it.next_unpruned().is_none());
        let _ = first4;
    }

    #[test]
    fn nn_prune_everything_yields_nothing() {
        let s = hilbert_sort(random_pts(100, 9)).unwrap();
        let t = build_quadtree(&s, 4);
        let mut it = t.incremental_nearest(&s.points, 0.0, 0.0, None);
        // Root expansion enqueues children through the prune filter; with
        // everything pruned only the root leaf-capacity points could leak,
        // so use a tree whose root is internal.
        assert!(t.node_count() > 1);
        let mut n = 0;
        while let Some(_) = it.next_with(|_| true) {
            n += 1;
        }
        assert_eq!(n, 0);
    }

    #[test]
    fn nn_unpruned_equals_full_sort_and_is_monotone() {
        for seed in [3u64, 17, 99] {
            let s = hilbert_sort(random_pts(500, seed)).unwrap();
            let t = build_quadtree(&s, 16);
            let q = &s.points[7];
            let mut it = t.incremental_nearest(&s.points, q.x, q.y, Some(q.id));
            let mut got = Vec::new();
            let mut last = 0.0f64;
            while let Some((id, d2)) = it.next_unpruned() {
                assert!(d2 >= last, "distances must be nondecreasing");
                last = d2;
                got.push(id);
            }
            let mut expect: Vec<(f64, u32)> = s
                .points
                .iter()
                .filter(|p| p.id != q.id)
                .map(|p| (q.sq_dist(p), p.id))
                .collect();
            expect.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            assert_eq!(got.len(), expect.len());
            // Sets must agree even where distances tie.
            let mut got_sorted = got.clone();
            got_sorted.sort_unstable();
            let mut exp_ids: Vec<u32> = expect.iter().map(|e| e.1).collect();
            exp_ids.sort_unstable();
            assert_eq!(got_sorted, exp_ids);
        }
    }

    #[test]
    fn arc_encloses_box_directions() {
        let bbox = Aabb {
            min_x: 2.0,
            min_y: 1.0,
            max_x: 3.0,
            max_y: 2.0,
        };
        let arc = PseudoArc::enclosing(&bbox, 0.0, 0.0);
        assert!(!arc.full);
        // Sample points in the box; their pseudo-angles must lie in the arc.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = rng.gen_range(2.0..3.0);
            let y = rng.gen_range(1.0..2.0);
            let pa = pseudo_angle_unchecked(x, y);
            let len = wrap_len(arc.lo, arc.hi);
            let off = wrap_len(arc.lo, pa);
            assert!(off <= len, "pa {pa} outside arc ({}, {})", arc.lo, arc.hi);
        }
        let on_boundary = PseudoArc::enclosing(&bbox, 2.0, 1.5);
        assert!(on_boundary.full);
    }

    fn wrap_len(lo: f64, hi: f64) -> f64 {
        let d = hi - lo;
        if d < 0.0 {
            d + 4.0
        } else {
            d
        }
    }
}
