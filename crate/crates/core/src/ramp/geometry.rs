//! Segment and sweep predicates for unit arms rotating about their centers.
//!
//! Angles live modulo π: an arm at angle `a` is the segment
//! `center ± ½(cos a, sin a)`. Touching counts as intersecting.

use std::f64::consts::PI;

pub const EPSILON: f64 = 1e-9;
pub const HALF: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Self {
        Segment { p, q }
    }

    /// Unit segment centered at `c` with direction angle `a`.
    pub fn arm(c: Point, a: f64) -> Self {
        let h = Point::new(a.cos(), a.sin()).scale(HALF);
        Segment::new(c.sub(h), c.add(h))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    /// Decreasing angle.
    Cw,
    /// Increasing angle.
    Ccw,
}

impl Dir {
    /// Label 1 is clockwise, label 2 counter-clockwise.
    pub fn from_label(l: u32) -> Option<Dir> {
        match l {
            1 => Some(Dir::Cw),
            2 => Some(Dir::Ccw),
            _ => None,
        }
    }

    pub fn label(self) -> u32 {
        match self {
            Dir::Cw => 1,
            Dir::Ccw => 2,
        }
    }
}

/// Reduces an angle into `[0, π)`.
pub fn norm_angle(a: f64) -> f64 {
    let r = a.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

fn dist_point_segment(x: Point, s: &Segment) -> f64 {
    let d = s.q.sub(s.p);
    let len2 = d.dot(d);
    let t = if len2 == 0.0 {
        0.0
    } else {
        (x.sub(s.p).dot(d) / len2).clamp(0.0, 1.0)
    };
    x.sub(s.p.add(d.scale(t))).norm()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    b.sub(a).cross(c.sub(a))
}

fn proper_cross(a: &Segment, b: &Segment, margin: f64) -> bool {
    let la = a.q.sub(a.p).norm().max(f64::MIN_POSITIVE);
    let lb = b.q.sub(b.p).norm().max(f64::MIN_POSITIVE);
    let d1 = orient(a.p, a.q, b.p) / la;
    let d2 = orient(a.p, a.q, b.q) / la;
    let d3 = orient(b.p, b.q, a.p) / lb;
    let d4 = orient(b.p, b.q, a.q) / lb;
    ((d1 > margin && d2 < -margin) || (d1 < -margin && d2 > margin))
        && ((d3 > margin && d4 < -margin) || (d3 < -margin && d4 > margin))
}

/// Euclidean distance between two closed segments.
pub fn segment_distance(a: &Segment, b: &Segment) -> f64 {
    if proper_cross(a, b, 0.0) {
        return 0.0;
    }
    dist_point_segment(a.p, b)
        .min(dist_point_segment(a.q, b))
        .min(dist_point_segment(b.p, a))
        .min(dist_point_segment(b.q, a))
}

/// Closed segments within `eps` of each other.
pub fn segments_intersect(a: &Segment, b: &Segment, eps: f64) -> bool {
    segment_distance(a, b) <= eps
}

/// Near the `eps` boundary and not a clear crossing.
pub fn segments_degenerate(a: &Segment, b: &Segment, eps: f64) -> bool {
    segment_distance(a, b) <= 11.0 * eps && !proper_cross(a, b, 10.0 * eps)
}

/// Angular interval swept by an arm, as `[start, start + len]` mod π with
/// one excluded end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepWedge {
    pub center: Point,
    pub start_angle: f64,
    pub end_angle: f64,
    pub dir: Dir,
    /// Whether the starting orientation itself counts.
    pub include_start: bool,
}

impl SweepWedge {
    pub fn new(center: Point, start_angle: f64, end_angle: f64, dir: Dir) -> Self {
        SweepWedge {
            center,
            start_angle: norm_angle(start_angle),
            end_angle: norm_angle(end_angle),
            dir,
            include_start: false,
        }
    }

    pub fn closed(mut self) -> Self {
        self.include_start = true;
        self
    }

    /// Sweep length in `[0, π)`.
    pub fn length(&self) -> f64 {
        let d = match self.dir {
            Dir::Ccw => self.end_angle - self.start_angle,
            Dir::Cw => self.start_angle - self.end_angle,
        };
        norm_angle(d)
    }

    /// Lowest angle of the arc in the increasing sense, its length, and
    /// which end (if any) is open: `(base, len, open_low, open_high)`.
    fn arc(&self) -> (f64, f64, bool, bool) {
        let len = self.length();
        let open = !self.include_start && len > 0.0;
        match self.dir {
            Dir::Ccw => (self.start_angle, len, open, false),
            Dir::Cw => (self.end_angle, len, false, open),
        }
    }
}

/// Angular image (mod π) of `seg` clipped to the disk of radius `r` about
/// `c`, as `(base, len)`; `None` when the segment misses the disk. A
/// segment through `c` is reported with `len = π`.
fn chord_interval(c: Point, seg: &Segment, r: f64) -> Option<(f64, f64)> {
    let d = seg.q.sub(seg.p);
    let f = seg.p.sub(c);
    let a = d.dot(d);
    let (t0, t1) = if a == 0.0 {
        if f.norm() > r {
            return None;
        }
        (0.0, 0.0)
    } else {
        let b = f.dot(d);
        let cc = f.dot(f) - r * r;
        let disc = b * b - a * cc;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let lo = ((-b - s) / a).max(0.0);
        let hi = ((-b + s) / a).min(1.0);
        if lo > hi {
            return None;
        }
        (lo, hi)
    };
    let x0 = f.add(d.scale(t0));
    let x1 = f.add(d.scale(t1));
    if dist_point_segment(c, seg) == 0.0 {
        return Some((0.0, PI));
    }
    let cross = x0.cross(x1);
    let span = cross.abs().atan2(x0.dot(x1));
    let base = if cross >= 0.0 { x0 } else { x1 };
    Some((norm_angle(base.y.atan2(base.x)), span))
}

/// Whether `[x, y]` (with `x <= y`, both within `[0, π]`) meets the arc
/// `[0, len]` whose ends may be open.
fn meets(x: f64, y: f64, len: f64, open_low: bool, open_high: bool) -> bool {
    let low_ok = if open_low { y > 0.0 } else { y >= 0.0 };
    let high_ok = if open_high { x < len } else { x <= len };
    low_ok && high_ok
}

/// Whether the double wedge swept by the wedge's half-length arm meets
/// `other`, with a distance tolerance of `eps`.
pub fn wedge_hits(w: &SweepWedge, other: &Segment, eps: f64) -> bool {
    let dist = dist_point_segment(w.center, other);
    if dist > HALF + eps {
        return false;
    }
    if dist <= eps {
        return true;
    }
    let Some((cbase, clen)) = chord_interval(w.center, other, HALF + eps) else {
        return false;
    };
    let (sbase, slen, open_low, open_high) = w.arc();
    let u = norm_angle(cbase - sbase);
    let hi = u + clen;
    meets(u, hi.min(PI), slen, open_low, open_high)
        || (hi >= PI && meets(0.0, hi - PI, slen, open_low, open_high))
}

/// Rotation of the arm at `center` from `angle` to `target` in direction
/// `dir` (start orientation excluded, target included) hits `other`.
pub fn sweep_hits(
    center: Point,
    angle: f64,
    dir: Dir,
    target: f64,
    other: &Segment,
    eps: f64,
) -> bool {
    wedge_hits(&SweepWedge::new(center, angle, target, dir), other, eps)
}

/// The sweep test is within `10·eps` of flipping.
pub fn wedge_degenerate(w: &SweepWedge, other: &Segment, eps: f64) -> bool {
    let tol = 10.0 * eps;
    let dist = dist_point_segment(w.center, other);
    if (dist - HALF).abs() <= tol || dist <= tol {
        return true;
    }
    if dist > HALF {
        return false;
    }
    let Some((cbase, clen)) = chord_interval(w.center, other, HALF + eps) else {
        return false;
    };
    let ends = [w.start_angle, w.end_angle];
    let near = |a: f64, b: f64| {
        let d = norm_angle(a - b);
        d.min(PI - d) <= tol
    };
    ends.iter()
        .any(|&e| near(cbase, e) || near(norm_angle(cbase + clen), e))
}
