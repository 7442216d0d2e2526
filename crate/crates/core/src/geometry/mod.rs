//! Rotated-rectangle geometry: corner conversion, exact IoU via convex
//! polygon clipping, a scanline rasterization oracle, and rotated NMS.
//!
//! Boxes follow the long-edge convention: after [`RotatedBox::normalize`],
//! `w >= h` and `theta` lies in `[-pi/2, pi/2)`. All operations here are
//! pure functions over immutable inputs.

mod mbr;
mod nms;

pub use mbr::corners_to_box;
pub use nms::rotated_nms;

use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Tolerance for clipping predicates.
pub(crate) const CLIP_EPS: f64 = 1e-9;
/// Intersections with area below this are treated as empty.
const MIN_AREA: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("degenerate quadrilateral: three vertices are collinear within tolerance")]
    DegenerateQuad,
    #[error("length mismatch: {boxes} boxes vs {scores} scores")]
    LengthMismatch { boxes: usize, scores: usize },
}

/// 2-D point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }
}

/// Oriented rectangle `(cx, cy, w, h, theta)` with `theta` in radians.
///
/// Invariants: `w > 0`, `h > 0`, all fields finite. The canonical form
/// produced by [`RotatedBox::normalize`] additionally has `w >= h` and
/// `theta` in `[-pi/2, pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
    pub theta: f64,
}

impl RotatedBox {
    /// Builds a box. Panics on non-finite or non-positive extents; callers
    /// converting untrusted data go through [`corners_to_box`] instead.
    pub fn new(cx: f64, cy: f64, w: f64, h: f64, theta: f64) -> Self {
        let b = Self { cx, cy, w, h, theta };
        assert!(b.is_valid(), "invalid rotated box: {b:?}");
        b
    }

    pub fn is_valid(&self) -> bool {
        self.w > 0.0
            && self.h > 0.0
            && [self.cx, self.cy, self.w, self.h, self.theta]
                .iter()
                .all(|v| v.is_finite())
    }

    /// Canonical long-edge form: `w >= h`, `theta` in `[-pi/2, pi/2)`.
    /// Idempotent: a box already in canonical form is returned bit-identical.
    pub fn normalize(mut self) -> Self {
        if self.w < self.h {
            std::mem::swap(&mut self.w, &mut self.h);
            self.theta += FRAC_PI_2;
        }
        if !(-FRAC_PI_2..FRAC_PI_2).contains(&self.theta) {
            self.theta = (self.theta + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
            if self.theta >= FRAC_PI_2 {
                self.theta -= PI;
            }
            if self.theta < -FRAC_PI_2 {
                self.theta += PI;
            }
        }
        self
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    /// Four corners in counter-clockwise order (positive shoelace area).
    pub fn corners(&self) -> ConvexPolygon {
        box_to_corners(self)
    }
}

/// Convex polygon with counter-clockwise vertices (signed area >= 0).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvexPolygon {
    pub vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Shoelace area; positive for counter-clockwise vertex order.
    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 0..v.len() {
            let j = (i + 1) % v.len();
            acc += v[i].cross(v[j]);
        }
        0.5 * acc
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let mut c = Point::default();
        for v in &self.vertices {
            c.x += v.x;
            c.y += v.y;
        }
        Point::new(c.x / n, c.y / n)
    }
}

/// Corners of `b` in counter-clockwise order, offsets rotated about the
/// center by `theta`.
pub fn box_to_corners(b: &RotatedBox) -> ConvexPolygon {
    let (s, c) = b.theta.sin_cos();
    let (hw, hh) = (0.5 * b.w, 0.5 * b.h);
    let offsets = [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)];
    let vertices = offsets
        .iter()
        .map(|&(dx, dy)| Point::new(b.cx + dx * c - dy * s, b.cy + dx * s + dy * c))
        .collect();
    ConvexPolygon::new(vertices)
}

/// Clips `subject` against each edge of convex `clipper` (Sutherland-Hodgman).
/// Both polygons must be counter-clockwise.
pub(crate) fn clip_convex(subject: &ConvexPolygon, clipper: &ConvexPolygon) -> ConvexPolygon {
    let mut output = subject.vertices.clone();
    let cv = &clipper.vertices;
    for i in 0..cv.len() {
        if output.is_empty() {
            break;
        }
        let a = cv[i];
        let b = cv[(i + 1) % cv.len()];
        let edge = b.sub(a);
        let input = std::mem::take(&mut output);
        let inside = |p: Point| edge.cross(p.sub(a)) >= -CLIP_EPS;
        for k in 0..input.len() {
            let s = input[k];
            let e = input[(k + 1) % input.len()];
            let (s_in, e_in) = (inside(s), inside(e));
            if e_in {
                if !s_in {
                    output.push(line_intersection(s, e, a, b));
                }
                output.push(e);
            } else if s_in {
                output.push(line_intersection(s, e, a, b));
            }
        }
    }
    ConvexPolygon::new(output)
}

/// Intersection of segment `s-e` with the infinite line through `a-b`.
fn line_intersection(s: Point, e: Point, a: Point, b: Point) -> Point {
    let edge = b.sub(a);
    let d1 = edge.cross(s.sub(a));
    let d2 = edge.cross(e.sub(a));
    let t = d1 / (d1 - d2);
    Point::new(s.x + t * (e.x - s.x), s.y + t * (e.y - s.y))
}

/// Intersection-over-union of two rotated boxes via polygon clipping.
///
/// Symmetric by construction (arguments are ordered canonically before
/// clipping) and exactly 1 for bit-identical boxes. Touching boxes with a
/// zero-area intersection yield 0.
pub fn rotated_iou(a: &RotatedBox, b: &RotatedBox) -> f64 {
    if a == b {
        return 1.0;
    }
    // Canonical argument order makes iou(a, b) bit-identical to iou(b, a).
    let key = |r: &RotatedBox| (r.cx, r.cy, r.w, r.h, r.theta);
    let (first, second) = if key(a) <= key(b) { (a, b) } else { (b, a) };
    let pa = box_to_corners(first);
    let pb = box_to_corners(second);
    let inter = clip_convex(&pa, &pb).area();
    if inter < MIN_AREA {
        return 0.0;
    }
    let union = pa.area() + pb.area() - inter;
    inter / union
}

/// Pixel-grid IoU oracle: counts cell centers of a `grid x grid` lattice over
/// the joint bounding region that fall inside each box. Row spans are
/// computed analytically, so cost is O(grid) per pair, but the result equals
/// the naive per-cell membership count.
pub fn rotated_iou_rasterized(a: &RotatedBox, b: &RotatedBox, grid: usize) -> f64 {
    assert!(grid >= 2, "grid too coarse");
    let pa = box_to_corners(a);
    let pb = box_to_corners(b);
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in pa.vertices.iter().chain(pb.vertices.iter()) {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let dx = (xmax - xmin) / grid as f64;
    let dy = (ymax - ymin) / grid as f64;
    let (mut inter, mut union) = (0u64, 0u64);
    for j in 0..grid {
        let y = ymin + (j as f64 + 0.5) * dy;
        let sa = row_span(a, y);
        let sb = row_span(b, y);
        let ca = span_cell_count(sa, xmin, dx, grid);
        let cb = span_cell_count(sb, xmin, dx, grid);
        let ci = match (sa, sb) {
            (Some((a1, a2)), Some((b1, b2))) => {
                span_cell_count(Some((a1.max(b1), a2.min(b2))), xmin, dx, grid)
            }
            _ => 0,
        };
        inter += ci;
        union += ca + cb - ci;
    }
    if union == 0 {
        return 0.0;
    }
    inter as f64 / union as f64
}

/// X-interval covered by `b` on the horizontal line at height `y`.
fn row_span(b: &RotatedBox, y: f64) -> Option<(f64, f64)> {
    let (s, c) = b.theta.sin_cos();
    let ry = y - b.cy;
    // Box frame: u = dx*c + ry*s, v = -dx*s + ry*c with dx = x - cx.
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (coef, offset, bound) in [(c, ry * s, 0.5 * b.w), (-s, ry * c, 0.5 * b.h)] {
        if coef.abs() < 1e-300 {
            if offset.abs() > bound {
                return None;
            }
            continue;
        }
        let t1 = (-bound - offset) / coef;
        let t2 = (bound - offset) / coef;
        lo = lo.max(t1.min(t2));
        hi = hi.min(t1.max(t2));
    }
    if lo > hi {
        return None;
    }
    Some((b.cx + lo, b.cx + hi))
}

/// Number of cell centers `xmin + (i + 0.5) dx`, `i < grid`, inside the span.
fn span_cell_count(span: Option<(f64, f64)>, xmin: f64, dx: f64, grid: usize) -> u64 {
    let Some((x1, x2)) = span else { return 0 };
    if x2 < x1 {
        return 0;
    }
    let lo = ((x1 - xmin) / dx - 0.5).ceil().max(0.0) as i64;
    let hi = (((x2 - xmin) / dx - 0.5).floor()).min(grid as f64 - 1.0) as i64;
    if hi < lo {
        0
    } else {
        (hi - lo + 1) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sorted_corner_tuples(p: &ConvexPolygon) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = p
            .vertices
            .iter()
            .map(|p| ((p.x * 1e6).round() as i64, (p.y * 1e6).round() as i64))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn corners_axis_aligned_square() {
        let p = box_to_corners(&RotatedBox::new(0.0, 0.0, 2.0, 2.0, 0.0));
        let expected = vec![(-1e6, -1e6), (-1e6, 1e6), (1e6, 1e6), (1e6, -1e6)];
        let mut exp: Vec<(i64, i64)> = expected.iter().map(|&(x, y)| (x as i64, y as i64)).collect();
        exp.sort_unstable();
        assert_eq!(sorted_corner_tuples(&p), exp);
        assert!(p.area() > 0.0, "corners must be counter-clockwise");
    }

    #[test]
    fn corners_square_quarter_turn_symmetry() {
        let a = box_to_corners(&RotatedBox::new(0.0, 0.0, 2.0, 2.0, 0.0));
        let b = box_to_corners(&RotatedBox::new(0.0, 0.0, 2.0, 2.0, FRAC_PI_2));
        assert_eq!(sorted_corner_tuples(&a), sorted_corner_tuples(&b));
    }

    #[test]
    fn corners_rotated_against_direct_rotation() {
        // Offsets (+-2, +-1) rotated by pi/6 about (3, 4), evaluated directly.
        let b = RotatedBox::new(3.0, 4.0, 4.0, 2.0, PI / 6.0);
        let p = box_to_corners(&b);
        let (s, c) = (PI / 6.0).sin_cos();
        let expect: Vec<Point> = [(-2.0, -1.0), (2.0, -1.0), (2.0, 1.0), (-2.0, 1.0)]
            .iter()
            .map(|&(dx, dy): &(f64, f64)| {
                Point::new(3.0 + dx * c - dy * s, 4.0 + dx * s + dy * c)
            })
            .collect();
        for (got, want) in p.vertices.iter().zip(&expect) {
            assert_abs_diff_eq!(got.x, want.x, epsilon = 1e-12);
            assert_abs_diff_eq!(got.y, want.y, epsilon = 1e-12);
        }
        let cen = p.centroid();
        assert_abs_diff_eq!(cen.x, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(cen.y, 4.0, epsilon = 1e-9);
    }

    #[test]
    fn normalize_long_edge_and_idempotent() {
        let b = RotatedBox::new(1.0, 2.0, 2.0, 4.0, 0.3).normalize();
        assert!(b.w >= b.h);
        assert!((-FRAC_PI_2..FRAC_PI_2).contains(&b.theta));
        assert_abs_diff_eq!(b.theta, 0.3 - FRAC_PI_2, epsilon = 1e-12);
        let again = b.normalize();
        assert_eq!(b, again);
    }

    #[test]
    fn iou_identical_is_exactly_one() {
        let b = RotatedBox::new(3.7, -1.2, 5.0, 2.0, 0.71);
        assert_eq!(rotated_iou(&b, &b), 1.0);
    }

    #[test]
    fn iou_disjoint_is_zero() {
        let a = RotatedBox::new(0.0, 0.0, 2.0, 2.0, 0.0);
        let b = RotatedBox::new(10.0, 10.0, 2.0, 2.0, 0.0);
        assert_eq!(rotated_iou(&a, &b), 0.0);
    }

    #[test]
    fn iou_axis_aligned_half_shift() {
        let a = RotatedBox::new(0.0, 0.0, 2.0, 2.0, 0.0);
        let b = RotatedBox::new(1.0, 0.0, 2.0, 2.0, 0.0);
        assert_abs_diff_eq!(rotated_iou(&a, &b), 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn iou_square_vs_diamond_analytic() {
        // Octagon intersection has area 8(sqrt(2)-1); IoU = 1/sqrt(2).
        let a = RotatedBox::new(0.0, 0.0, 2.0, 2.0, 0.0);
        let b = RotatedBox::new(0.0, 0.0, 2.0, 2.0, PI / 4.0);
        assert_abs_diff_eq!(rotated_iou(&a, &b), 1.0 / 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn iou_touching_boxes_is_zero() {
        let a = RotatedBox::new(0.0, 0.0, 2.0, 2.0, 0.0);
        let b = RotatedBox::new(2.0, 0.0, 2.0, 2.0, 0.0);
        assert_eq!(rotated_iou(&a, &b), 0.0);
    }

    #[test]
    fn rasterized_matches_analytic_cases() {
        let a = RotatedBox::new(0.0, 0.0, 2.0, 2.0, 0.0);
        assert_abs_diff_eq!(rotated_iou_rasterized(&a, &a, 1000), 1.0, epsilon = 1e-3);
        let far = RotatedBox::new(10.0, 10.0, 2.0, 2.0, 0.0);
        assert_eq!(rotated_iou_rasterized(&a, &far, 1000), 0.0);
        let d = RotatedBox::new(0.0, 0.0, 2.0, 2.0, PI / 4.0);
        assert_abs_diff_eq!(
            rotated_iou_rasterized(&a, &d, 2000),
            1.0 / 2f64.sqrt(),
            epsilon = 1e-3
        );
    }

    #[test]
    fn rasterized_span_equals_naive_cell_loop() {
        let mut rng = crate::rng::det_rng(7);
        for _ in 0..40 {
            let a = crate::rng::random_box(&mut rng, 20.0);
            let b = crate::rng::random_box(&mut rng, 20.0);
            let grid = 57;
            let fast = rotated_iou_rasterized(&a, &b, grid);
            let naive = naive_raster_iou(&a, &b, grid);
            assert_abs_diff_eq!(fast, naive, epsilon = 1e-12);
        }
    }

    fn point_in_box(b: &RotatedBox, x: f64, y: f64) -> bool {
        let (s, c) = b.theta.sin_cos();
        let (dx, dy) = (x - b.cx, y - b.cy);
        let u = dx * c + dy * s;
        let v = -dx * s + dy * c;
        u.abs() <= 0.5 * b.w && v.abs() <= 0.5 * b.h
    }

    fn naive_raster_iou(a: &RotatedBox, b: &RotatedBox, grid: usize) -> f64 {
        let pa = box_to_corners(a);
        let pb = box_to_corners(b);
        let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in pa.vertices.iter().chain(pb.vertices.iter()) {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        let dx = (xmax - xmin) / grid as f64;
        let dy = (ymax - ymin) / grid as f64;
        let (mut inter, mut union) = (0u64, 0u64);
        for j in 0..grid {
            for i in 0..grid {
                let x = xmin + (i as f64 + 0.5) * dx;
                let y = ymin + (j as f64 + 0.5) * dy;
                let ia = point_in_box(a, x, y);
                let ib = point_in_box(b, x, y);
                inter += (ia && ib) as u64;
                union += (ia || ib) as u64;
            }
        }
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn iou_symmetric_and_bounded(seed in 0u64..10_000) {
            let mut rng = crate::rng::det_rng(seed);
            let a = crate::rng::random_box(&mut rng, 50.0);
            let b = crate::rng::random_box(&mut rng, 50.0);
            let ab = rotated_iou(&a, &b);
            let ba = rotated_iou(&b, &a);
            prop_assert_eq!(ab, ba);
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn iou_rigid_motion_invariant(seed in 0u64..10_000) {
            let mut rng = crate::rng::det_rng(seed.wrapping_add(77));
            let a = crate::rng::random_box(&mut rng, 30.0);
            let mut b = crate::rng::random_box(&mut rng, 30.0);
            b.cx = a.cx + rng.uniform(-3.0, 3.0);
            b.cy = a.cy + rng.uniform(-3.0, 3.0);
            let before = rotated_iou(&a, &b);
            let (tx, ty, phi) = (rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0), rng.uniform(-PI, PI));
            let (s, c) = phi.sin_cos();
            let mv = |r: &RotatedBox| RotatedBox::new(
                r.cx * c - r.cy * s + tx,
                r.cx * s + r.cy * c + ty,
                r.w,
                r.h,
                r.theta + phi,
            );
            let after = rotated_iou(&mv(&a), &mv(&b));
            prop_assert!((before - after).abs() <= 1e-9);
        }

        #[test]
        fn iou_close_to_raster_oracle(seed in 0u64..10_000) {
            let mut rng = crate::rng::det_rng(seed.wrapping_add(1234));
            let a = crate::rng::random_box(&mut rng, 20.0);
            let mut b = crate::rng::random_box(&mut rng, 20.0);
            b.cx = a.cx + rng.uniform(-5.0, 5.0);
            b.cy = a.cy + rng.uniform(-5.0, 5.0);
            let exact = rotated_iou(&a, &b);
            let raster = rotated_iou_rasterized(&a, &b, 1000);
            prop_assert!((exact - raster).abs() <= 2e-3, "exact {exact} raster {raster}");
        }
    }
}
