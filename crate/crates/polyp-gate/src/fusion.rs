//! Four directional scans fuse the positive contrast mask with the edge
//! planes. Each scan walks a row or column, arms on an edge whose dark side
//! faces the scan origin, and keeps marking until the PCM run ends. The
//! horizontal and vertical results are ANDed into the final mask.

use crate::edges::DirectionalEdgeMaps;
use crate::error::Result;
use crate::mask::BinaryMask;

/// Output of the fusion stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionOutput {
    pub h_mask: BinaryMask,
    pub v_mask: BinaryMask,
    pub final_mask: BinaryMask,
    pub final_count: u64,
}

/// Runs the four scans and the final AND.
///
/// In every pass the armed flag resets on a zero PCM pixel and arms on a
/// trigger edge lying on a PCM pixel; while armed, the pass marks its mask.
/// The two horizontal passes accumulate into `h_mask` by OR, the two
/// vertical passes into `v_mask`.
pub fn fuse(pcm: &BinaryMask, edges: &DirectionalEdgeMaps) -> Result<FusionOutput> {
    pcm.same_dims(&edges.dark_left)?;
    pcm.same_dims(&edges.dark_right)?;
    pcm.same_dims(&edges.dark_up)?;
    pcm.same_dims(&edges.dark_down)?;
    let (w, h) = (pcm.width(), pcm.height());

    let mut h_mask = BinaryMask::empty(w, h);
    let mut v_mask = BinaryMask::empty(w, h);

    for y in 0..h {
        let mut armed = false;
        for x in 0..w {
            step(pcm, &edges.dark_left, &mut h_mask, x, y, &mut armed);
        }
        armed = false;
        for x in (0..w).rev() {
            step(pcm, &edges.dark_right, &mut h_mask, x, y, &mut armed);
        }
    }
    for x in 0..w {
        let mut armed = false;
        for y in 0..h {
            step(pcm, &edges.dark_up, &mut v_mask, x, y, &mut armed);
        }
        armed = false;
        for y in (0..h).rev() {
            step(pcm, &edges.dark_down, &mut v_mask, x, y, &mut armed);
        }
    }

    let final_mask = h_mask.and(&v_mask)?;
    let final_count = final_mask.count();
    Ok(FusionOutput {
        h_mask,
        v_mask,
        final_mask,
        final_count,
    })
}

#[inline]
fn step(
    pcm: &BinaryMask,
    trigger: &BinaryMask,
    out: &mut BinaryMask,
    x: usize,
    y: usize,
    armed: &mut bool,
) {
    if !pcm.get(x, y) {
        *armed = false;
    } else if trigger.get(x, y) {
        *armed = true;
    }
    if *armed {
        out.set(x, y, true);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edges::{compute_edges, EdgeConfig};

    fn empty_edges(w: usize, h: usize) -> DirectionalEdgeMaps {
        DirectionalEdgeMaps {
            dark_left: BinaryMask::empty(w, h),
            dark_right: BinaryMask::empty(w, h),
            dark_up: BinaryMask::empty(w, h),
            dark_down: BinaryMask::empty(w, h),
        }
    }

    /// Declarative per-pixel oracle: a pixel is horizontally supported when a
    /// triggering edge exists at-or-before it (in scan order) within its
    /// contiguous PCM run, in at least one of the two horizontal passes;
    /// vertical support is the analogue. Final = H and V.
    pub(crate) fn declarative_fuse(pcm: &BinaryMask, edges: &DirectionalEdgeMaps) -> FusionOutput {
        let (w, h) = (pcm.width(), pcm.height());
        let mut h_mask = BinaryMask::empty(w, h);
        let mut v_mask = BinaryMask::empty(w, h);
        let supported = |x: usize, y: usize, trig: &BinaryMask, dx: isize, dy: isize| -> bool {
            // walk backwards along the scan direction while inside the run
            let (mut cx, mut cy) = (x as isize, y as isize);
            loop {
                if cx < 0 || cy < 0 || cx >= w as isize || cy >= h as isize {
                    return false;
                }
                if !pcm.get(cx as usize, cy as usize) {
                    return false;
                }
                if trig.get(cx as usize, cy as usize) {
                    return true;
                }
                cx -= dx;
                cy -= dy;
            }
        };
        for y in 0..h {
            for x in 0..w {
                if !pcm.get(x, y) {
                    continue;
                }
                if supported(x, y, &edges.dark_left, 1, 0)
                    || supported(x, y, &edges.dark_right, -1, 0)
                {
                    h_mask.set(x, y, true);
                }
                if supported(x, y, &edges.dark_up, 0, 1) || supported(x, y, &edges.dark_down, 0, -1)
                {
                    v_mask.set(x, y, true);
                }
            }
        }
        let final_mask = h_mask.and(&v_mask).unwrap();
        let final_count = final_mask.count();
        FusionOutput {
            h_mask,
            v_mask,
            final_mask,
            final_count,
        }
    }

    #[test]
    fn empty_pcm_yields_empty_output() {
        let pcm = BinaryMask::empty(6, 6);
        let mut edges = empty_edges(6, 6);
        edges.dark_left.set(3, 3, true);
        let out = fuse(&pcm, &edges).unwrap();
        assert_eq!(out.final_count, 0);
        assert_eq!(out.h_mask.count(), 0);
        assert_eq!(out.v_mask.count(), 0);
    }

    #[test]
    fn full_pcm_without_edges_yields_empty_output() {
        let pcm = BinaryMask::from_bits(6, 6, vec![true; 36]).unwrap();
        let out = fuse(&pcm, &empty_edges(6, 6)).unwrap();
        assert_eq!(out.final_count, 0);
    }

    #[test]
    fn hand_worked_8x8_instance() {
        // PCM: 4x4 block covering rows/cols 2..=5; dark_left at (2,3),
        // dark_up at (3,2). H support extends along row 3 from x=2, V support
        // along column 3 from y=2; the intersection is the single pixel (3,3).
        let mut pcm = BinaryMask::empty(8, 8);
        for y in 2..=5 {
            for x in 2..=5 {
                pcm.set(x, y, true);
            }
        }
        let mut edges = empty_edges(8, 8);
        edges.dark_left.set(2, 3, true);
        edges.dark_up.set(3, 2, true);
        let out = fuse(&pcm, &edges).unwrap();
        for x in 0..8 {
            assert_eq!(out.h_mask.get(x, 3), (2..=5).contains(&x), "h at x={x}");
        }
        assert_eq!(out.h_mask.count(), 4);
        for y in 0..8 {
            assert_eq!(out.v_mask.get(3, y), (2..=5).contains(&y), "v at y={y}");
        }
        assert_eq!(out.v_mask.count(), 4);
        assert_eq!(out.final_count, 1);
        assert!(out.final_mask.get(3, 3));
        assert_eq!(out, declarative_fuse(&pcm, &edges));
    }

    #[test]
    fn run_terminates_at_zero_pcm() {
        // one row: PCM run 0..=2, gap at 3, run 4..=6; trigger in first run
        let mut pcm = BinaryMask::empty(7, 1);
        for x in [0, 1, 2, 4, 5, 6] {
            pcm.set(x, 0, true);
        }
        let mut edges = empty_edges(7, 1);
        edges.dark_left.set(0, 0, true);
        let out = fuse(&pcm, &edges).unwrap();
        for x in 0..7 {
            assert_eq!(out.h_mask.get(x, 0), x <= 2, "x={x}");
        }
    }

    #[test]
    fn matches_declarative_oracle_on_random_cases() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let (w, h) = (rng.random_range(1..10), rng.random_range(1..10));
            let pcm =
                BinaryMask::from_bits(w, h, (0..w * h).map(|_| rng.random_bool(0.6)).collect())
                    .unwrap();
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                BinaryMask::from_bits(w, h, (0..w * h).map(|_| rng.random_bool(0.15)).collect())
                    .unwrap()
            };
            let edges = DirectionalEdgeMaps {
                dark_left: mk(&mut rng),
                dark_right: mk(&mut rng),
                dark_up: mk(&mut rng),
                dark_down: mk(&mut rng),
            };
            let fast = fuse(&pcm, &edges).unwrap();
            let slow = declarative_fuse(&pcm, &edges);
            assert_eq!(fast, slow);
            assert!(fast.final_mask.is_subset_of(&fast.h_mask));
            assert!(fast.final_mask.is_subset_of(&fast.v_mask));
            assert!(fast.h_mask.is_subset_of(&pcm));
            assert!(fast.v_mask.is_subset_of(&pcm));
        }
    }

    #[test]
    fn h_mask_ignores_vertical_planes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(55);
        let (w, h) = (9, 9);
        let pcm = BinaryMask::from_bits(w, h, (0..w * h).map(|_| rng.random_bool(0.5)).collect())
            .unwrap();
        let mk = |rng: &mut rand_chacha::ChaCha8Rng, p: f64| {
            BinaryMask::from_bits(w, h, (0..w * h).map(|_| rng.random_bool(p)).collect()).unwrap()
        };
        let base = DirectionalEdgeMaps {
            dark_left: mk(&mut rng, 0.2),
            dark_right: mk(&mut rng, 0.2),
            dark_up: mk(&mut rng, 0.2),
            dark_down: mk(&mut rng, 0.2),
        };
        let swapped_vertical = DirectionalEdgeMaps {
            dark_up: mk(&mut rng, 0.3),
            dark_down: mk(&mut rng, 0.3),
            ..base.clone()
        };
        let a = fuse(&pcm, &base).unwrap();
        let b = fuse(&pcm, &swapped_vertical).unwrap();
        assert_eq!(a.h_mask, b.h_mask);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let pcm = BinaryMask::empty(4, 4);
        let edges = empty_edges(5, 4);
        assert!(fuse(&pcm, &edges).is_err());
    }

    #[test]
    fn end_to_end_mirror_equivariance() {
        use crate::image::GrayImage;
        use crate::pcm::{compute_pcm, PcmConfig};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(321);
        let (w, h) = (40usize, 36usize);
        let img = GrayImage::new(w, h, (0..w * h).map(|_| rng.random()).collect()).unwrap();
        // Even window sizes are asymmetric around their center pixel under
        // the [c - s/2, c + s/2 - 1] span, which shifts the contrast mask by
        // one pixel under mirroring. Exact equivariance needs odd sizes.
        let cfg = PcmConfig {
            a: 5,
            b: 13,
            ..PcmConfig::default()
        };
        let run = |im: &GrayImage| {
            let ii = crate::image::integral(im).unwrap();
            let pcm = compute_pcm(&ii, &cfg).unwrap();
            let edges = compute_edges(im, &EdgeConfig::default());
            fuse(&pcm, &edges).unwrap()
        };
        let out = run(&img);
        let mir = run(&img.mirror_horizontal());
        assert_eq!(mir.final_mask, out.final_mask.mirror_horizontal());
        assert_eq!(mir.final_count, out.final_count);
    }
}
