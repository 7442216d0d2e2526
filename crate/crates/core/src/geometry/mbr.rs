//! Minimum-area enclosing rectangle of a quadrilateral (rotating calipers).

use super::{ConvexPolygon, GeometryError, Point, RotatedBox};

/// Converts four corner points to the minimum-area enclosing rotated box.
///
/// The optimal rectangle has one side collinear with a convex-hull edge, so
/// we evaluate the axis-aligned bounding box in each edge's frame and keep
/// the smallest. The result is normalized to the long-edge convention; a
/// round trip through [`super::box_to_corners`] recovers an exact
/// rectangle's parameters within 1e-6.
pub fn corners_to_box(quad: &ConvexPolygon) -> Result<RotatedBox, GeometryError> {
    let pts = &quad.vertices;
    assert_eq!(pts.len(), 4, "corners_to_box expects exactly 4 vertices");
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                if collinear(pts[i], pts[j], pts[k]) {
                    return Err(GeometryError::DegenerateQuad);
                }
            }
        }
    }
    let hull = convex_hull(pts);
    let mut best: Option<(f64, RotatedBox)> = None;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        let phi = (b.y - a.y).atan2(b.x - a.x);
        let (s, c) = phi.sin_cos();
        let (mut umin, mut umax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &hull {
            // Rotate by -phi into the edge frame.
            let u = p.x * c + p.y * s;
            let v = -p.x * s + p.y * c;
            umin = umin.min(u);
            umax = umax.max(u);
            vmin = vmin.min(v);
            vmax = vmax.max(v);
        }
        let (w, h) = (umax - umin, vmax - vmin);
        let area = w * h;
        if best.as_ref().is_none_or(|(ba, _)| area < *ba) {
            let (uc, vc) = (0.5 * (umin + umax), 0.5 * (vmin + vmax));
            let bx = RotatedBox::new(uc * c - vc * s, uc * s + vc * c, w, h, phi).normalize();
            best = Some((area, bx));
        }
    }
    Ok(best.expect("hull has at least one edge").1)
}

fn collinear(a: Point, b: Point, c: Point) -> bool {
    let ab = b.sub(a);
    let ac = c.sub(a);
    let cross = ab.cross(ac).abs();
    let scale = (ab.x.hypot(ab.y) * ac.x.hypot(ac.y)).max(1e-300);
    cross / scale <= 1e-9
}

/// Andrew monotone chain; returns counter-clockwise hull without repeats.
fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut sorted = pts.to_vec();
    sorted.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    sorted.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if sorted.len() < 3 {
        return sorted;
    }
    let turn = |o: Point, a: Point, b: Point| a.sub(o).cross(b.sub(o));
    let mut chain = |iter: &mut dyn Iterator<Item = Point>| {
        let mut half: Vec<Point> = Vec::new();
        for p in iter {
            while half.len() >= 2 && turn(half[half.len() - 2], half[half.len() - 1], p) <= 0.0 {
                half.pop();
            }
            half.push(p);
        }
        half.pop();
        half
    };
    let mut hull = chain(&mut sorted.iter().copied());
    hull.extend(chain(&mut sorted.iter().rev().copied()));
    hull
}
