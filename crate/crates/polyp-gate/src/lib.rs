//! Integer-only polyp gate for wireless capsule endoscopy frames.
//!
//! Given a captured frame, the gate decides whether the frame likely shows a
//! polyp (and is worth transmitting) using two hardware-friendly features:
//!
//! * a **positive contrast mask** marking bright blobs whose small-window
//!   mean strictly exceeds 1.25x the surrounding large-window mean, computed
//!   in O(1) per pixel from an integral image;
//! * **directional edges** marking bright pixels next to a sufficiently
//!   darker and absolutely dark 4-connected neighbor.
//!
//! Four directional scans fuse the two features into horizontal and vertical
//! support masks whose AND is the final polyp-region mask; a frame is
//! informative when the final mask exceeds an area threshold (500 pixels at
//! the 320x320 reference resolution).
//!
//! The whole pipeline is integer-only: no division, no floating point.
//! See the crate examples for end-to-end usage of each capability.

pub mod edges;
pub mod error;
pub mod eval;
pub mod fusion;
pub mod image;
pub mod mask;
pub mod pcm;
pub mod pipeline;
pub mod pnm;
pub mod stream;

pub use edges::{compute_edges, edge_census, DirectionalEdgeMaps, EdgeConfig};
pub use error::{Error, Result};
pub use eval::{
    benchmark_suite, evaluate, evaluate_images, generate_phantom, load_labels, ConfusionMatrix,
    EvalOutcome, LabeledSet, PhantomSpec, SuiteEntry,
};
pub use fusion::{fuse, FusionOutput};
pub use image::{
    integral, rect_sum, to_intensity, window_sum, GrayImage, IntegralImage, Rect, RgbFrame,
};
pub use mask::BinaryMask;
pub use pcm::{compute_pcm, PcmConfig};
pub use pipeline::{
    detect_frame, detect_gray, Decision, Detection, DetectionReport, PipelineConfig,
};
pub use stream::{run_stream, StreamStats};
