//! Exact and fast geometric primitives.
//!
//! Everything downstream reduces to the orientation predicate, which is
//! evaluated with adaptive-precision arithmetic and is never wrong due to
//! rounding. Angular comparisons use pseudo-angles, a cheap monotone
//! surrogate for `atan2`.

use std::cmp::Ordering;

/// A planar point. `id` is the index into the Hilbert-ordered point array
/// once the set has been sorted; before sorting it is the input position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub id: u32,
}

impl Point {
    pub fn new(x: f64, y: f64, id: u32) -> Self {
        Point { x, y, id }
    }

    #[inline]
    pub fn sq_dist(&self, other: &Point) -> f64 {
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.sq_dist(other).sqrt()
    }

    /// Lexicographic (x, y) order; the `s < t` convention used when
    /// emitting each undirected edge exactly once.
    #[inline]
    pub fn lex_less(&self, other: &Point) -> bool {
        (self.x, self.y) < (other.x, other.y)
    }
}

/// Sign of the orientation determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

/// Exact sign of the 2x2 determinant of (b - a, c - a).
///
/// Adaptive precision via Shewchuk's predicates; the result is the true
/// sign for any finite inputs.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    let v = robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    );
    if v > 0.0 {
        Orientation::Ccw
    } else if v < 0.0 {
        Orientation::Cw
    } else {
        Orientation::Collinear
    }
}

/// `true` iff `c` is strictly left of the directed line `a -> b`.
#[inline]
pub fn strictly_left(a: Point, b: Point, c: Point) -> bool {
    orient(a, b, c) == Orientation::Ccw
}

/// Monotone surrogate for the polar angle of `(dx, dy)`, with range
/// `(-2, 2]`: increasing on true angles `[0, pi]` and `(pi, 2pi)`, with the
/// discontinuity at `pi` jumping from `2` to values near `-2`. `sign(0)` is
/// defined as `+1`, so `(-1, 0)` maps to exactly `2`.
///
/// Returns `None` for the zero vector, whose direction is undefined.
#[inline]
pub fn pseudo_angle(dx: f64, dy: f64) -> Option<f64> {
    if dx == 0.0 && dy == 0.0 {
        return None;
    }
    Some((1.0 - dx / (dx.abs() + dy.abs())).copysign(if dy == 0.0 { 1.0 } else { dy }))
}

/// `pseudo_angle` for callers that have already excluded the zero vector.
#[inline]
pub(crate) fn pseudo_angle_unchecked(dx: f64, dy: f64) -> f64 {
    debug_assert!(dx != 0.0 || dy != 0.0);
    (1.0 - dx / (dx.abs() + dy.abs())).copysign(if dy == 0.0 { 1.0 } else { dy })
}

/// Exact circular comparison of two nonzero direction vectors in
/// pseudo-angle order (the `(-2, 2]` linearization that starts just above
/// true angle `pi`). Collinear equal directions compare `Equal`.
pub fn dir_cmp(d1: (f64, f64), d2: (f64, f64)) -> Ordering {
    let c1 = dir_class(d1);
    let c2 = dir_class(d2);
    if c1 != c2 {
        return c1.cmp(&c2);
    }
    // Same half-plane class: cross product sign decides, computed exactly.
    let cross = robust::orient2d(
        robust::Coord { x: 0.0, y: 0.0 },
        robust::Coord { x: d1.0, y: d1.1 },
        robust::Coord { x: d2.0, y: d2.1 },
    );
    if cross > 0.0 {
        Ordering::Less
    } else if cross < 0.0 {
        Ordering::Greater
    } else {
        // Within one class opposite directions cannot collide, so this is
        // the same-direction case.
        Ordering::Equal
    }
}

/// Coarse class along the pseudo-angle linearization:
/// 0: lower half-plane (pa in (-2,0)); 1: +x axis (pa = 0);
/// 2: upper half-plane (pa in (0,2)); 3: -x axis (pa = 2).
#[inline]
fn dir_class(d: (f64, f64)) -> u8 {
    if d.1 < 0.0 {
        0
    } else if d.1 > 0.0 {
        2
    } else if d.0 > 0.0 {
        1
    } else {
        3
    }
}

/// Base angle of the diamond property and quantities derived from it.
#[derive(Debug, Clone, Copy)]
pub struct BaseAngleConfig {
    pub alpha: f64,
    pub tan_alpha: f64,
    pub sin_alpha: f64,
    pub cos_alpha: f64,
    /// Conservative upper bound on |pa(u) - pa(v)| over direction pairs a
    /// true angle `alpha` apart; used to window ring lookups.
    pub pseudo_width: f64,
    /// Squared dead-sector activation factor: a sector created at
    /// squared scan distance `d2` becomes active at `d2 * sq_activation`.
    pub sq_activation: f64,
}

pub const DEFAULT_ALPHA: f64 = std::f64::consts::PI / 4.6;

impl BaseAngleConfig {
    /// `alpha` must lie in (0, pi/3]; the candidate-count theorem and the
    /// whole-triangle-within-disk argument both need it.
    pub fn new(alpha: f64) -> Option<Self> {
        if !(alpha > 0.0 && alpha <= std::f64::consts::FRAC_PI_3) {
            return None;
        }
        // A point at angular offset phi in (0, alpha) from the base ray
        // blocks every farther edge once the edge is at least
        // cos(phi) + sin(phi)/tan(alpha) times as long; the supremum over
        // phi is 2cos(alpha) for alpha < pi/4 and 1/sin(alpha) above.
        let c = (2.0 * alpha.cos()).max(1.0 / alpha.sin());
        let c = c * (1.0 + 1e-9);
        Some(BaseAngleConfig {
            alpha,
            tan_alpha: alpha.tan(),
            sin_alpha: alpha.sin(),
            cos_alpha: alpha.cos(),
            pseudo_width: max_pseudo_span(alpha),
            sq_activation: c * c,
        })
    }

    pub fn default_config() -> Self {
        Self::new(DEFAULT_ALPHA).expect("default alpha is valid")
    }
}

/// Numerically maximized pseudo-angle span of a true-angle arc of width
/// `alpha`, padded to stay an upper bound.
fn max_pseudo_span(alpha: f64) -> f64 {
    let mut max = 0.0f64;
    let steps = 4096;
    for i in 0..steps {
        let theta = 2.0 * std::f64::consts::PI * (i as f64) / (steps as f64);
        let a = pseudo_angle_unchecked(theta.cos(), theta.sin());
        let b = pseudo_angle_unchecked((theta + alpha).cos(), (theta + alpha).sin());
        let mut span = b - a;
        if span < 0.0 {
            span += 4.0;
        }
        max = max.max(span);
    }
    max + 1e-3
}

/// Which of the two isosceles triangles over a directed base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// `true` iff `p` lies strictly inside the isosceles triangle with base
/// `st`, base angle `cfg.alpha`, on the given side of the directed line
/// `s -> t`. Boundary points are outside: that direction can only keep
/// more candidate edges, preserving the filter's superset guarantee.
pub fn in_diamond_triangle(s: Point, t: Point, p: Point, side: Side, cfg: &BaseAngleConfig) -> bool {
    debug_assert!(s.x != t.x || s.y != t.y);
    let base = (t.x - s.x, t.y - s.y);
    match side {
        Side::Left => {
            if orient(s, t, p) != Orientation::Ccw {
                return false;
            }
            // Ray from s rotated +alpha off the base; p must be strictly
            // clockwise of it.
            let rs = rotate(base, cfg.cos_alpha, cfg.sin_alpha);
            if orient(s, offset(s, rs), p) != Orientation::Cw {
                return false;
            }
            // Ray from t rotated -alpha off the reversed base; p strictly
            // counterclockwise of it.
            let rt = rotate((-base.0, -base.1), cfg.cos_alpha, -cfg.sin_alpha);
            orient(t, offset(t, rt), p) == Orientation::Ccw
        }
        Side::Right => {
            if orient(s, t, p) != Orientation::Cw {
                return false;
            }
            let rs = rotate(base, cfg.cos_alpha, -cfg.sin_alpha);
            if orient(s, offset(s, rs), p) != Orientation::Ccw {
                return false;
            }
            let rt = rotate((-base.0, -base.1), cfg.cos_alpha, cfg.sin_alpha);
            orient(t, offset(t, rt), p) == Orientation::Cw
        }
    }
}

#[inline]
fn rotate(v: (f64, f64), cos: f64, sin: f64) -> (f64, f64) {
    (v.0 * cos - v.1 * sin, v.0 * sin + v.1 * cos)
}

#[inline]
fn offset(p: Point, v: (f64, f64)) -> Point {
    Point::new(p.x + v.0, p.y + v.1, u32::MAX)
}

/// Brute-force diamond property test: at least one of the two isosceles
/// triangles on `st` contains no other point of the set. This is the
/// oracle the filtered pipeline is checked against.
pub fn diamond_test_bruteforce(s: Point, t: Point, points: &[Point], cfg: &BaseAngleConfig) -> bool {
    let mut left_blocked = false;
    let mut right_blocked = false;
    for p in points {
        if p.id == s.id || p.id == t.id {
            continue;
        }
        if !left_blocked && in_diamond_triangle(s, t, *p, Side::Left, cfg) {
            left_blocked = true;
        }
        if !right_blocked && in_diamond_triangle(s, t, *p, Side::Right, cfg) {
            right_blocked = true;
        }
        if left_blocked && right_blocked {
            return false;
        }
    }
    true
}

/// `true` iff the open segments `ab` and `cd` share a point interior to
/// both. Shared endpoints do not count.
pub fn segments_properly_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 != o2
        && o3 != o4
        && o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
}

/// `true` iff `p` lies strictly between `a` and `b` on the segment `ab`.
pub fn strictly_between(a: Point, b: Point, p: Point) -> bool {
    if orient(a, b, p) != Orientation::Collinear {
        return false;
    }
    let dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    dot > 0.0 && dot < (b.x - a.x).powi(2) + (b.y - a.y).powi(2)
}
