//! Positive contrast mask: pixels whose small-window mean strictly exceeds
//! ratio times the large-window mean, evaluated entirely in integers.

use crate::error::{Error, Result};
use crate::image::{window_span, window_sum, IntegralImage};
use crate::mask::BinaryMask;

/// Concentric window pair and contrast ratio for the positive contrast mask.
///
/// The comparison `mean_a > (num/den) * mean_b` is cross-multiplied to
/// `den * b^2 * sum_a > num * a^2 * sum_b`, so no division or floating point
/// is involved. With a, b <= 256 and den small the products stay far below
/// the u64 range (den * b^2 * a^2 * 255 <= den * 2^48).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PcmConfig {
    /// Inner (smoothing) window edge length.
    pub a: usize,
    /// Outer (surround) window edge length.
    pub b: usize,
    /// Contrast ratio numerator.
    pub ratio_num: u32,
    /// Contrast ratio denominator.
    pub ratio_den: u32,
}

impl Default for PcmConfig {
    fn default() -> Self {
        Self {
            a: 16,
            b: 64,
            ratio_num: 5,
            ratio_den: 4,
        }
    }
}

impl PcmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.a < 1 || self.a >= self.b {
            return Err(Error::Config(format!(
                "window sizes must satisfy 1 <= a < b, got a={} b={}",
                self.a, self.b
            )));
        }
        if self.b > 256 {
            return Err(Error::Config(format!(
                "outer window {} exceeds the supported maximum of 256",
                self.b
            )));
        }
        if self.ratio_den == 0 || self.ratio_num <= self.ratio_den {
            return Err(Error::Config(format!(
                "contrast ratio must satisfy num > den > 0, got {}/{}",
                self.ratio_num, self.ratio_den
            )));
        }
        Ok(())
    }
}

/// Computes the positive contrast mask over an integral image.
///
/// A bit is set where the full b-window fits and
/// `den * b^2 * sum_a > num * a^2 * sum_b` holds; border pixels whose
/// b-window overflows the image are always zero.
pub fn compute_pcm(ii: &IntegralImage, cfg: &PcmConfig) -> Result<BinaryMask> {
    cfg.validate()?;
    let (w, h) = (ii.width(), ii.height());
    if cfg.b > w || cfg.b > h {
        return Err(Error::Config(format!(
            "outer window {} does not fit a {}x{} image",
            cfg.b, w, h
        )));
    }
    let mut mask = BinaryMask::empty(w, h);
    let lhs_scale = cfg.ratio_den as u64 * (cfg.b * cfg.b) as u64;
    let rhs_scale = cfg.ratio_num as u64 * (cfg.a * cfg.a) as u64;
    for cy in 0..h {
        if window_span(cy, cfg.b, h).is_none() {
            continue;
        }
        for cx in 0..w {
            if window_span(cx, cfg.b, w).is_none() {
                continue;
            }
            // both spans verified above; a-window is nested inside b-window
            let sum_a = window_sum(ii, cx, cy, cfg.a)? as u64;
            let sum_b = window_sum(ii, cx, cy, cfg.b)? as u64;
            if lhs_scale * sum_a > rhs_scale * sum_b {
                mask.set(cx, cy, true);
            }
        }
    }
    Ok(mask)
}
