//! Minimal dense-tensor engine with reverse-mode automatic differentiation
//! over the fixed operator set the detector needs, plus AdamW.
//!
//! Everything is `f64`. A [`Graph`] owns the tape for one forward pass;
//! [`Parameter`]s live outside the graph and are bound per pass, so frozen
//! models can be evaluated from many threads while training keeps a
//! single-writer step cycle.

mod checkpoint;
mod graph;
mod optim;
mod param;

pub mod check;

pub use checkpoint::{read_checkpoint, write_checkpoint, CheckpointError, TensorEntry};
pub use graph::{Graph, Tensor};
pub use optim::AdamW;
pub use param::{apply_param_grads, Parameter, ParamSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch in {op}: {lhs:?} vs {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    #[error("axis {axis} out of range for rank-{rank} tensor")]
    BadAxis { axis: usize, rank: usize },
    #[error("backward requires a scalar loss, got shape {shape:?}")]
    NotScalar { shape: Vec<usize> },
    #[error("tape already consumed; run a fresh forward pass before backward")]
    TapeConsumed,
    #[error("graph is in inference mode; no tape was recorded")]
    NotRecording,
    #[error("parameter {name} has no populated gradient")]
    MissingGrad { name: String },
    #[error("slice [{start}, {start}+{len}) exceeds axis extent {extent}")]
    BadSlice {
        start: usize,
        len: usize,
        extent: usize,
    },
    #[error("row index {index} out of bounds for {rows} rows")]
    BadIndex { index: usize, rows: usize },
}
