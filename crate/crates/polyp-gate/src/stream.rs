//! Gating-loop simulation over an ordered frame sequence: every frame is
//! classified independently and only informative frames count as
//! transmitted. Frames are consumed one at a time; memory stays bounded by
//! a single frame and its masks.

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::pipeline::{detect_frame, detect_gray, Decision, PipelineConfig};
use crate::pnm::PixelSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameStatus {
    Informative,
    NonInformative,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameDecision {
    pub frame_id: String,
    pub decision: FrameStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Exact transmitted/total ratio; serializes as a float alongside the exact
/// counts already present in the stats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn as_f64(&self) -> f64 {
        if self.denominator == 0 {
            0.0
        } else {
            self.numerator as f64 / self.denominator as f64
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamStats {
    pub frames_total: u64,
    pub frames_transmitted: u64,
    pub frames_skipped: u64,
    pub transmission_ratio: Ratio,
    pub bytes_saved: u64,
    pub decisions: Vec<FrameDecision>,
}

/// Consumes an ordered frame source and tallies transmission statistics.
/// Per-frame failures are recorded as skipped entries (neither transmitted
/// nor saved); decisions keep input order.
pub fn run_stream<I>(frames: I, cfg: &PipelineConfig, bytes_per_frame: u64) -> StreamStats
where
    I: IntoIterator<Item = (String, Result<PixelSource>)>,
{
    let mut decisions = Vec::new();
    let (mut total, mut transmitted, mut skipped) = (0u64, 0u64, 0u64);
    for (frame_id, frame) in frames {
        total += 1;
        let report = frame.and_then(|src| match src {
            PixelSource::Rgb(f) => detect_frame(&f, cfg, &frame_id).map(|d| d.report),
            PixelSource::Gray(g) => detect_gray(g, cfg, &frame_id).map(|d| d.report),
        });
        match report {
            Ok(report) => {
                let status = match report.decision {
                    Decision::Informative => {
                        transmitted += 1;
                        FrameStatus::Informative
                    }
                    Decision::NonInformative => FrameStatus::NonInformative,
                };
                decisions.push(FrameDecision {
                    frame_id,
                    decision: status,
                    final_count: Some(report.final_count),
                    error: None,
                });
            }
            Err(e) => {
                skipped += 1;
                decisions.push(FrameDecision {
                    frame_id,
                    decision: FrameStatus::Skipped,
                    final_count: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    let suppressed = total - transmitted - skipped;
    StreamStats {
        frames_total: total,
        frames_transmitted: transmitted,
        frames_skipped: skipped,
        transmission_ratio: Ratio {
            numerator: transmitted,
            denominator: total,
        },
        bytes_saved: suppressed * bytes_per_frame,
        decisions,
    }
}
