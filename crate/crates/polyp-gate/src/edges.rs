//! Customized edge extraction: a bright pixel next to a sufficiently darker
//! (step > tau1) and absolutely dark (< tau2) 4-connected neighbor. The bit
//! is recorded at the bright pixel; the plane names the dark neighbor's side.

use crate::image::GrayImage;
use crate::mask::BinaryMask;

/// Edge thresholds: `tau1` is the minimum intensity step, `tau2` the maximum
/// intensity of the dark neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeConfig {
    pub tau1: u8,
    pub tau2: u8,
}

impl Default for EdgeConfig {
    fn default() -> Self {
        Self { tau1: 2, tau2: 100 }
    }
}

/// Four boolean planes keyed by the direction of the dark neighbor relative
/// to the bright pixel. "Up" is the smaller row index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionalEdgeMaps {
    pub dark_left: BinaryMask,
    pub dark_right: BinaryMask,
    pub dark_up: BinaryMask,
    pub dark_down: BinaryMask,
}

impl DirectionalEdgeMaps {
    pub fn width(&self) -> usize {
        self.dark_left.width()
    }

    pub fn height(&self) -> usize {
        self.dark_left.height()
    }

    /// Union of the four planes.
    pub fn any(&self) -> BinaryMask {
        let (w, h) = (self.width(), self.height());
        let mut out = BinaryMask::empty(w, h);
        for y in 0..h {
            for x in 0..w {
                let b = self.dark_left.get(x, y)
                    || self.dark_right.get(x, y)
                    || self.dark_up.get(x, y)
                    || self.dark_down.get(x, y);
                out.set(x, y, b);
            }
        }
        out
    }
}

#[inline]
fn is_edge(bright: u8, dark: u8, cfg: &EdgeConfig) -> bool {
    bright as u16 > dark as u16 + cfg.tau1 as u16 && dark < cfg.tau2
}

/// Extracts the four directional edge planes. Image-boundary pixels with no
/// neighbor in a direction get zero in that plane.
pub fn compute_edges(gray: &GrayImage, cfg: &EdgeConfig) -> DirectionalEdgeMaps {
    let (w, h) = (gray.width(), gray.height());
    let mut dark_left = BinaryMask::empty(w, h);
    let mut dark_right = BinaryMask::empty(w, h);
    let mut dark_up = BinaryMask::empty(w, h);
    let mut dark_down = BinaryMask::empty(w, h);
    for y in 0..h {
        for x in 0..w {
            let v = gray.get(x, y);
            if x > 0 && is_edge(v, gray.get(x - 1, y), cfg) {
                dark_left.set(x, y, true);
            }
            if x + 1 < w && is_edge(v, gray.get(x + 1, y), cfg) {
                dark_right.set(x, y, true);
            }
            if y > 0 && is_edge(v, gray.get(x, y - 1), cfg) {
                dark_up.set(x, y, true);
            }
            if y + 1 < h && is_edge(v, gray.get(x, y + 1), cfg) {
                dark_down.set(x, y, true);
            }
        }
    }
    DirectionalEdgeMaps {
        dark_left,
        dark_right,
        dark_up,
        dark_down,
    }
}

/// Set-bit count per plane, in (left, right, up, down) order.
pub fn edge_census(maps: &DirectionalEdgeMaps) -> (u64, u64, u64, u64) {
    (
        maps.dark_left.count(),
        maps.dark_right.count(),
        maps.dark_up.count(),
        maps.dark_down.count(),
    )
}
