//! Reference implementations used by the test suite: small, slow, and
//! independent of the data structures on the fast paths. Nothing here is
//! consulted by the pipeline itself.

use crate::geom::{
    diamond_test_bruteforce, orient, segments_properly_intersect, strictly_between,
    BaseAngleConfig, Orientation, Point,
};
use std::collections::BTreeSet;

/// O(n^3) diamond-property filter: every pair, tested against every point.
pub fn brute_candidate_edges(points: &[Point], cfg: &BaseAngleConfig) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if diamond_test_bruteforce(points[i], points[j], points, cfg) {
                let (a, b) = (points[i].id, points[j].id);
                out.insert((a.min(b), a.max(b)));
            }
        }
    }
    out
}

/// All points sorted by squared distance from `q` (excluding `q` itself),
/// the oracle for the incremental traversal.
pub fn sort_by_distance(points: &[Point], q: &Point) -> Vec<(u32, f64)> {
    let mut v: Vec<(u32, f64)> = points
        .iter()
        .filter(|p| p.id != q.id)
        .map(|p| (p.id, q.sq_dist(p)))
        .collect();
    v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    v
}

/// A triangulation found by exhaustive search: edge set and total weight.
#[derive(Debug, Clone)]
pub struct OracleMwt {
    pub edges: BTreeSet<(u32, u32)>,
    pub weight: f64,
}

fn norm(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Exhaustive minimum-weight triangulation: enumerate every triangulation
/// by repeatedly choosing the triangle standing on a fixed boundary edge
/// and recursing on the sub-regions. Exponential; meant for n <= 12.
pub fn exhaustive_mwt(points: &[Point]) -> Option<OracleMwt> {
    if all_collinear(points) {
        return None;
    }
    let hull = convex_hull_ids(points);
    if hull.len() < 3 {
        return None;
    }
    let interior: Vec<u32> = points
        .iter()
        .map(|p| p.id)
        .filter(|id| !hull.contains(id))
        .collect();
    let by_id = make_lookup(points);
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 0..hull.len() {
        edges.insert(norm(hull[i], hull[(i + 1) % hull.len()]));
    }
    let mut weight = 0.0;
    for &(a, b) in &edges {
        weight += by_id(a).dist(&by_id(b));
    }
    let (w_int, e_int) = best_region(points, &hull, &interior)?;
    edges.extend(e_int);
    Some(OracleMwt {
        edges,
        weight: weight + w_int,
    })
}

pub fn all_collinear(points: &[Point]) -> bool {
    if points.len() < 3 {
        return true;
    }
    let a = points[0];
    let Some(b) = points[1..].iter().find(|p| p.x != a.x || p.y != a.y) else {
        return true;
    };
    points
        .iter()
        .all(|p| orient(a, *b, *p) == Orientation::Collinear)
}

fn make_lookup(points: &[Point]) -> impl Fn(u32) -> Point + '_ {
    move |id: u32| {
        *points
            .iter()
            .find(|p| p.id == id)
            .expect("unknown point id")
    }
}

/// Minimum added weight (chords and interior edges beyond the boundary
/// cycle itself) over all triangulations of the region, plus the chosen
/// edges. Sub-regions after a split are independent, so minima compose.
fn best_region(
    points: &[Point],
    boundary: &[u32],
    interior: &[u32],
) -> Option<(f64, Vec<(u32, u32)>)> {
    if boundary.len() == 3 && interior.is_empty() {
        return Some((0.0, Vec::new()));
    }
    if boundary.len() < 3 {
        return if interior.is_empty() {
            Some((0.0, Vec::new()))
        } else {
            None
        };
    }
    let by_id = make_lookup(points);
    let a = boundary[0];
    let b = boundary[1];
    let (pa, pb) = (by_id(a), by_id(b));
    let mut candidates: Vec<u32> = boundary[2..].to_vec();
    candidates.extend_from_slice(interior);
    let mut best: Option<(f64, Vec<(u32, u32)>)> = None;
    'cand: for &c in &candidates {
        let pc = by_id(c);
        if orient(pa, pb, pc) != Orientation::Ccw {
            continue;
        }
        // The chosen triangle must be empty of all other region points...
        for &o in boundary.iter().chain(interior.iter()) {
            if o == a || o == b || o == c {
                continue;
            }
            if point_in_triangle(pa, pb, pc, by_id(o)) {
                continue 'cand;
            }
        }
        // ...and its new edges must stay inside the region.
        for (u, v) in [(a, c), (c, b)] {
            if edge_invalid(points, boundary, interior, u, v) {
                continue 'cand;
            }
        }
        let mut w = 0.0;
        let mut chosen = Vec::new();
        for (u, v) in [(a, c), (c, b)] {
            let on_boundary = boundary
                .iter()
                .zip(boundary.iter().cycle().skip(1))
                .any(|(&x, &y)| (x == u && y == v) || (x == v && y == u));
            if !on_boundary {
                w += by_id(u).dist(&by_id(v));
                chosen.push(norm(u, v));
            }
        }
        let sub = if let Some(pos) = boundary.iter().position(|&x| x == c) {
            // Boundary apex: the triangle splits the region in two.
            let region1: Vec<u32> = boundary[1..=pos].to_vec();
            let region2: Vec<u32> = {
                let mut r = vec![a];
                r.extend_from_slice(&boundary[pos..]);
                r
            };
            let (int1, int2) = split_interior(points, &region1, interior);
            match (
                best_region(points, &region1, &int1),
                best_region(points, &region2, &int2),
            ) {
                (Some((w1, e1)), Some((w2, e2))) => {
                    let mut e = e1;
                    e.extend(e2);
                    Some((w1 + w2, e))
                }
                _ => None,
            }
        } else {
            // Interior apex: the boundary cycle grows by one vertex.
            let mut nb: Vec<u32> = vec![a, c];
            nb.extend_from_slice(&boundary[1..]);
            let ni: Vec<u32> = interior.iter().copied().filter(|&x| x != c).collect();
            best_region(points, &nb, &ni)
        };
        if let Some((ws, es)) = sub {
            let total = w + ws;
            if best.as_ref().map_or(true, |(bw, _)| total < *bw) {
                let mut e = chosen.clone();
                e.extend(es);
                best = Some((total, e));
            }
        }
    }
    best
}

/// Exact minimum-weight triangulation of a simple polygon (boundary only,
/// every chord allowed) by the same exhaustive recursion; the oracle for
/// the interval DP.
pub fn exhaustive_polygon_mwt(poly: &[Point]) -> Option<(f64, Vec<(u32, u32)>)> {
    let ids: Vec<u32> = poly.iter().map(|p| p.id).collect();
    best_region(poly, &ids, &[])
}

fn split_interior(points: &[Point], region1: &[u32], interior: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let by_id = make_lookup(points);
    let poly1: Vec<Point> = region1.iter().map(|&id| by_id(id)).collect();
    let mut i1 = Vec::new();
    let mut i2 = Vec::new();
    for &p in interior {
        if point_in_polygon(&poly1, by_id(p)) {
            i1.push(p);
        } else {
            i2.push(p);
        }
    }
    (i1, i2)
}

/// A new edge is invalid if it properly crosses the region boundary or
/// passes through any region vertex.
fn edge_invalid(points: &[Point], boundary: &[u32], interior: &[u32], u: u32, v: u32) -> bool {
    let by_id = make_lookup(points);
    let (pu, pv) = (by_id(u), by_id(v));
    for i in 0..boundary.len() {
        let a = boundary[i];
        let b = boundary[(i + 1) % boundary.len()];
        if a == u || a == v || b == u || b == v {
            continue;
        }
        if segments_properly_intersect(pu, pv, by_id(a), by_id(b)) {
            return true;
        }
    }
    for &o in boundary.iter().chain(interior.iter()) {
        if o == u || o == v {
            continue;
        }
        if strictly_between(pu, pv, by_id(o)) {
            return true;
        }
    }
    false
}

pub fn point_in_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    orient(a, b, p) == Orientation::Ccw
        && orient(b, c, p) == Orientation::Ccw
        && orient(c, a, p) == Orientation::Ccw
}

/// Even-odd point-in-polygon; strictly interior on inputs in general
/// position.
pub fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Monotone-chain convex hull returning point ids in CCW boundary order.
/// Collinear points on the boundary are kept, so consecutive hull vertices
/// are always graph-adjacent in a triangulation.
pub fn convex_hull_ids(points: &[Point]) -> Vec<u32> {
    let mut sorted: Vec<&Point> = points.iter().collect();
    sorted.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    if sorted.len() < 3 {
        return sorted.iter().map(|p| p.id).collect();
    }
    let chain = |iter: &mut dyn Iterator<Item = &&Point>| -> Vec<u32> {
        let mut out: Vec<&Point> = Vec::new();
        for p in iter {
            while out.len() >= 2
                && orient(*out[out.len() - 2], *out[out.len() - 1], **p) == Orientation::Cw
            {
                out.pop();
            }
            out.push(*p);
        }
        out.pop();
        out.iter().map(|p| p.id).collect()
    };
    let mut lower = chain(&mut sorted.iter());
    let upper = chain(&mut sorted.iter().rev());
    lower.extend(upper);
    lower
}

/// Brute-force planarity check: no two edges properly intersect.
pub fn is_planar(points: &[Point], edges: &[(u32, u32)]) -> bool {
    let by_id = make_lookup(points);
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if segments_properly_intersect(by_id(a), by_id(b), by_id(c), by_id(d)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Point::new(x, y, i as u32))
            .collect()
    }

    #[test]
    fn hull_of_square_plus_center() {
        let p = pts(&[(0., 0.), (2., 0.), (2., 2.), (0., 2.), (1., 1.)]);
        let mut hull = convex_hull_ids(&p);
        hull.sort_unstable();
        assert_eq!(hull, vec![0, 1, 2, 3]);
    }

    #[test]
    fn hull_keeps_collinear_boundary_points() {
        let p = pts(&[(0., 0.), (1., 0.), (2., 0.), (2., 2.), (0., 2.)]);
        let hull = convex_hull_ids(&p);
        assert_eq!(hull.len(), 5, "mid-edge point must stay on the boundary");
    }

    #[test]
    fn mwt_of_convex_quad_picks_short_diagonal() {
        // Diagonal (1,3) has length sqrt(10) < sqrt(20) of (0,2).
        let p = pts(&[(0., 0.), (3., 0.), (4., 2.), (0., 1.)]);
        let mwt = exhaustive_mwt(&p).unwrap();
        assert!(mwt.edges.contains(&(1, 3)));
        assert!(!mwt.edges.contains(&(0, 2)));
        let hull_perimeter = 3.0
            + ((4.0f64 - 3.0).powi(2) + 4.0).sqrt()
            + (16.0f64 + 1.0).sqrt()
            + 1.0;
        assert!((mwt.weight - hull_perimeter - 10.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn mwt_triangle_plus_centroid_has_six_edges() {
        let p = pts(&[(0., 0.), (3., 0.), (0., 3.), (1., 1.)]);
        let mwt = exhaustive_mwt(&p).unwrap();
        assert_eq!(mwt.edges.len(), 6);
        // 3n - |CH| - 3 = 12 - 3 - 3.
    }

    #[test]
    fn mwt_collinear_returns_none() {
        let p = pts(&[(0., 0.), (1., 0.), (2., 0.)]);
        assert!(exhaustive_mwt(&p).is_none());
    }
}
