//! End-to-end oriented object detection at desk scale.
//!
//! The crate provides the numerical building blocks of a rotated-query
//! detector - rotated-box geometry, a small f64 autodiff engine, multi-scale
//! rotated RoI attention, a decoder with selective distinct queries,
//! Hungarian label assignment with focal/L1/rotated-IoU losses - plus data
//! synthesis, DOTA-format ingestion, evaluation and experiment diagnostics.

pub mod geometry;
pub mod rng;

pub use geometry::{box_to_corners, corners_to_box, rotated_iou, rotated_nms, RotatedBox};
