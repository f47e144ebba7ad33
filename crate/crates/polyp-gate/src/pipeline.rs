//! Per-frame detection: intensity -> integral -> positive contrast mask,
//! edges on the gray image, fusion, and the area-threshold decision.

use serde::{Deserialize, Serialize};

use crate::edges::{compute_edges, edge_census, DirectionalEdgeMaps, EdgeConfig};
use crate::error::{Error, Result};
use crate::fusion::{fuse, FusionOutput};
use crate::image::{check_dims, integral, to_intensity, GrayImage, RgbFrame};
use crate::mask::BinaryMask;
use crate::pcm::{compute_pcm, PcmConfig};

/// Reference frame area for optional threshold scaling.
const REFERENCE_AREA: u64 = 320 * 320;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    pub pcm: PcmConfig,
    pub edge: EdgeConfig,
    /// Final-mask pixel count above which a frame is informative.
    pub area_threshold: u64,
    /// When set, the effective threshold scales with frame area relative to
    /// the 320x320 reference, rounded to nearest.
    pub scale_threshold_with_area: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            pcm: PcmConfig::default(),
            edge: EdgeConfig::default(),
            area_threshold: 500,
            scale_threshold_with_area: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.pcm.validate()
    }

    /// The threshold actually applied to a frame of the given size.
    pub fn effective_threshold(&self, width: usize, height: usize) -> u64 {
        if self.scale_threshold_with_area {
            let area = width as u64 * height as u64;
            (self.area_threshold * area + REFERENCE_AREA / 2) / REFERENCE_AREA
        } else {
            self.area_threshold
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Informative,
    NonInformative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub left: u64,
    pub right: u64,
    pub up: u64,
    pub down: u64,
}

/// Per-frame decision and stage statistics. Serializes with stable key
/// order for golden-file tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub frame_id: String,
    pub decision: Decision,
    pub final_count: u64,
    pub pcm_count: u64,
    pub edge_counts: EdgeCounts,
    pub effective_threshold: u64,
}

impl DetectionReport {
    pub fn is_informative(&self) -> bool {
        self.decision == Decision::Informative
    }
}

/// A detection report together with every intermediate plane.
#[derive(Debug, Clone)]
pub struct Detection {
    pub report: DetectionReport,
    pub gray: GrayImage,
    pub pcm: BinaryMask,
    pub edges: DirectionalEdgeMaps,
    pub fusion: FusionOutput,
}

/// Full pipeline on an RGB frame.
pub fn detect_frame(frame: &RgbFrame, cfg: &PipelineConfig, frame_id: &str) -> Result<Detection> {
    detect_gray(to_intensity(frame), cfg, frame_id)
}

/// Pipeline entry for already-gray inputs; skips intensity conversion.
pub fn detect_gray(gray: GrayImage, cfg: &PipelineConfig, frame_id: &str) -> Result<Detection> {
    cfg.validate()?;
    let (w, h) = (gray.width(), gray.height());
    check_dims(w, h)?;
    if cfg.pcm.b > w || cfg.pcm.b > h {
        return Err(Error::Config(format!(
            "frame {}x{} is smaller than the {} outer window",
            w, h, cfg.pcm.b
        )));
    }
    let ii = integral(&gray)?;
    let pcm = compute_pcm(&ii, &cfg.pcm)?;
    let edges = compute_edges(&gray, &cfg.edge);
    let fusion = fuse(&pcm, &edges)?;
    let effective_threshold = cfg.effective_threshold(w, h);
    let (left, right, up, down) = edge_census(&edges);
    let report = DetectionReport {
        frame_id: frame_id.to_string(),
        decision: if fusion.final_count > effective_threshold {
            Decision::Informative
        } else {
            Decision::NonInformative
        },
        final_count: fusion.final_count,
        pcm_count: pcm.count(),
        edge_counts: EdgeCounts {
            left,
            right,
            up,
            down,
        },
        effective_threshold,
    };
    Ok(Detection {
        report,
        gray,
        pcm,
        edges,
        fusion,
    })
}
