//! Class-agnostic rotated non-maximum suppression.

use super::{rotated_iou, GeometryError, RotatedBox};

/// Greedy descending-score suppression. Returns indices of survivors in
/// descending score order; ties are broken by ascending original index so
/// the output is deterministic. `t` is the IoU threshold in `(0, 1]`:
/// a candidate is dropped when its IoU with any survivor exceeds `t`.
pub fn rotated_nms(
    boxes: &[RotatedBox],
    scores: &[f64],
    t: f64,
) -> Result<Vec<usize>, GeometryError> {
    if boxes.len() != scores.len() {
        return Err(GeometryError::LengthMismatch {
            boxes: boxes.len(),
            scores: scores.len(),
        });
    }
    debug_assert!(t > 0.0 && t <= 1.0, "IoU threshold must be in (0, 1]");
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut keep: Vec<usize> = Vec::new();
    for &i in &order {
        if keep
            .iter()
            .all(|&j| rotated_iou(&boxes[i], &boxes[j]) <= t)
        {
            keep.push(i);
        }
    }
    Ok(keep)
}
