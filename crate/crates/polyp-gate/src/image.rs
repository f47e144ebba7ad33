//! Frame representation, intensity conversion and the integral image.
//!
//! The integral image stores inclusive prefix sums so that the sum over any
//! axis-aligned rectangle costs four reads. All coordinates are 0-based,
//! row-major; rectangles are inclusive on both bounds.

use crate::error::{Error, Result};

/// An RGB frame as captured by the capsule, 8 bits per channel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbFrame {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RgbFrame {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config("frame dimensions must be nonzero".into()));
        }
        if pixels.len() != width * height * 3 {
            return Err(Error::Config(format!(
                "rgb buffer length {} does not match {}x{}x3",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// (r, g, b) at a pixel.
    pub fn get(&self, x: usize, y: usize) -> (u8, u8, u8) {
        let i = (y * self.width + x) * 3;
        (self.pixels[i], self.pixels[i + 1], self.pixels[i + 2])
    }
}

/// 8-bit intensity image, the working representation of a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config("image dimensions must be nonzero".into()));
        }
        if data.len() != width * height {
            return Err(Error::Config(format!(
                "gray buffer length {} does not match {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    /// Horizontally mirrored copy (same dimensions).
    pub fn mirror_horizontal(&self) -> GrayImage {
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.data.chunks_exact(self.width) {
            data.extend(row.iter().rev());
        }
        GrayImage {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

/// Integer luma. Coefficients sum to 256, so gray inputs map to themselves:
/// R=G=B=v gives (256*v + 128) >> 8 = v.
pub fn to_intensity(frame: &RgbFrame) -> GrayImage {
    let data = frame
        .pixels
        .chunks_exact(3)
        .map(|p| {
            let (r, g, b) = (p[0] as u32, p[1] as u32, p[2] as u32);
            ((77 * r + 150 * g + 29 * b + 128) >> 8) as u8
        })
        .collect();
    GrayImage {
        width: frame.width,
        height: frame.height,
        data,
    }
}

/// Inclusive prefix sums of an intensity image; 32-bit with an explicit
/// dimension guard (320x320x255 = 26,112,000 fits comfortably).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralImage {
    width: usize,
    height: usize,
    sums: Vec<u32>,
}

impl IntegralImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn sums(&self) -> &[u32] {
        &self.sums
    }

    /// Prefix sum at (x, y); out-of-range reads left or above are zero.
    #[inline]
    fn at(&self, x: isize, y: isize) -> u32 {
        if x < 0 || y < 0 {
            0
        } else {
            self.sums[y as usize * self.width + x as usize]
        }
    }
}

/// Single-pass integral image. Rejects images whose total can overflow u32.
pub fn integral(gray: &GrayImage) -> Result<IntegralImage> {
    let (w, h) = (gray.width, gray.height);
    check_dims(w, h)?;
    let mut sums = vec![0u32; w * h];
    for y in 0..h {
        let mut row_sum = 0u32;
        for x in 0..w {
            row_sum += gray.data[y * w + x] as u32;
            let above = if y > 0 { sums[(y - 1) * w + x] } else { 0 };
            sums[y * w + x] = row_sum + above;
        }
    }
    Ok(IntegralImage {
        width: w,
        height: h,
        sums,
    })
}

pub(crate) fn check_dims(width: usize, height: usize) -> Result<()> {
    let max = (width as u64)
        .checked_mul(height as u64)
        .and_then(|n| n.checked_mul(255));
    match max {
        Some(n) if n <= u32::MAX as u64 => Ok(()),
        _ => Err(Error::DimensionOverflow { width, height }),
    }
}

/// Axis-aligned rectangle with inclusive bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Rect {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Result<Self> {
        if x0 > x1 || y0 > y1 {
            return Err(Error::Config(format!(
                "degenerate rectangle ({x0},{y0})-({x1},{y1})"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }
}

/// Sum over an inclusive rectangle from four corner reads, with reads
/// outside the table treated as zero.
pub fn rect_sum(ii: &IntegralImage, r: Rect) -> Result<u32> {
    if r.x1 >= ii.width || r.y1 >= ii.height {
        return Err(Error::RectOutOfBounds {
            x0: r.x0,
            y0: r.y0,
            x1: r.x1,
            y1: r.y1,
            width: ii.width,
            height: ii.height,
        });
    }
    let (x0, y0) = (r.x0 as isize, r.y0 as isize);
    let (x1, y1) = (r.x1 as isize, r.y1 as isize);
    Ok(ii.at(x1, y1) + ii.at(x0 - 1, y0 - 1) - ii.at(x0 - 1, y1) - ii.at(x1, y0 - 1))
}

/// The inclusive span of a size x size window centered at c on one axis.
/// Even sizes span [c - size/2, c + size/2 - 1]; odd sizes are symmetric.
/// Returns None if the window leaves the [0, limit) range.
pub(crate) fn window_span(center: usize, size: usize, limit: usize) -> Option<(usize, usize)> {
    let lo = (center as isize) - (size / 2) as isize;
    if lo < 0 {
        return None;
    }
    let hi = lo as usize + size - 1;
    if hi >= limit {
        return None;
    }
    Some((lo as usize, hi))
}

/// Sum over the size x size window centered at (cx, cy).
pub fn window_sum(ii: &IntegralImage, cx: usize, cy: usize, size: usize) -> Result<u32> {
    let oob = || Error::WindowOutOfBounds {
        cx,
        cy,
        size,
        width: ii.width,
        height: ii.height,
    };
    if size == 0 {
        return Err(Error::Config("window size must be nonzero".into()));
    }
    let (x0, x1) = window_span(cx, size, ii.width).ok_or_else(oob)?;
    let (y0, y1) = window_span(cy, size, ii.height).ok_or_else(oob)?;
    rect_sum(ii, Rect { x0, y0, x1, y1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gray(w: usize, h: usize, data: Vec<u8>) -> GrayImage {
        GrayImage::new(w, h, data).unwrap()
    }

    /// Brute-force prefix sum, the oracle for `integral`.
    fn naive_prefix(img: &GrayImage, x: usize, y: usize) -> u32 {
        let mut s = 0u32;
        for j in 0..=y {
            for i in 0..=x {
                s += img.get(i, j) as u32;
            }
        }
        s
    }

    /// Brute-force box sum, the oracle for `rect_sum`.
    fn naive_rect(img: &GrayImage, r: Rect) -> u32 {
        let mut s = 0u32;
        for y in r.y0..=r.y1 {
            for x in r.x0..=r.x1 {
                s += img.get(x, y) as u32;
            }
        }
        s
    }

    fn rand_image(w: usize, h: usize, seed: u64) -> GrayImage {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        gray(w, h, (0..w * h).map(|_| rng.random()).collect())
    }

    #[test]
    fn intensity_zero_and_white() {
        let black = RgbFrame::new(2, 2, vec![0; 12]).unwrap();
        assert!(to_intensity(&black).data().iter().all(|&v| v == 0));
        let white = RgbFrame::new(2, 2, vec![255; 12]).unwrap();
        assert!(to_intensity(&white).data().iter().all(|&v| v == 255));
    }

    #[test]
    fn intensity_hand_value() {
        // (77*100 + 150*50 + 29*200 + 128) / 256 = 21228 / 256 -> 82
        let f = RgbFrame::new(1, 1, vec![100, 50, 200]).unwrap();
        assert_eq!(to_intensity(&f).get(0, 0), 82);
    }

    #[test]
    fn intensity_fixes_gray_inputs() {
        for v in [0u8, 1, 17, 128, 254, 255] {
            let f = RgbFrame::new(1, 1, vec![v, v, v]).unwrap();
            assert_eq!(to_intensity(&f).get(0, 0), v);
        }
    }

    #[test]
    fn integral_zero_and_ones() {
        let ii = integral(&gray(3, 3, vec![0; 9])).unwrap();
        assert!(ii.sums().iter().all(|&s| s == 0));
        let ii = integral(&gray(3, 3, vec![1; 9])).unwrap();
        assert_eq!(ii.at(2, 2), 9);
    }

    #[test]
    fn integral_matches_naive_on_random_8x8() {
        let img = rand_image(8, 8, 42);
        let ii = integral(&img).unwrap();
        for y in 0..8 {
            for x in 0..8 {
                assert_eq!(ii.at(x as isize, y as isize), naive_prefix(&img, x, y));
            }
        }
    }

    #[test]
    fn integral_rejects_oversized() {
        // 70000 * 70000 * 255 overflows u32; constructing the buffer would be
        // absurd, so only exercise the guard.
        assert!(check_dims(70000, 70000).is_err());
        assert!(check_dims(320, 320).is_ok());
        assert!(check_dims(4104, 4104).is_ok());
        assert!(check_dims(4105, 4105).is_err());
    }

    #[test]
    fn rect_sum_full_and_single() {
        let img = gray(3, 3, vec![1; 9]);
        let ii = integral(&img).unwrap();
        assert_eq!(rect_sum(&ii, Rect::new(0, 0, 2, 2).unwrap()).unwrap(), 9);
        let img = rand_image(5, 4, 3);
        let ii = integral(&img).unwrap();
        for y in 0..4 {
            for x in 0..5 {
                let r = Rect::new(x, y, x, y).unwrap();
                assert_eq!(rect_sum(&ii, r).unwrap(), img.get(x, y) as u32);
            }
        }
    }

    #[test]
    fn rect_sum_out_of_bounds() {
        let ii = integral(&gray(3, 3, vec![0; 9])).unwrap();
        let r = Rect::new(1, 1, 3, 2).unwrap();
        assert!(matches!(
            rect_sum(&ii, r),
            Err(Error::RectOutOfBounds { .. })
        ));
    }

    #[test]
    fn rect_sum_matches_naive_on_random_rects() {
        use rand::{Rng, SeedableRng};
        let img = rand_image(16, 16, 9);
        let ii = integral(&img).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..500 {
            let x0 = rng.random_range(0..16);
            let x1 = rng.random_range(x0..16);
            let y0 = rng.random_range(0..16);
            let y1 = rng.random_range(y0..16);
            let r = Rect { x0, y0, x1, y1 };
            assert_eq!(rect_sum(&ii, r).unwrap(), naive_rect(&img, r));
        }
    }

    #[test]
    fn window_sum_even_conventions() {
        // size 2 at center (1,1) covers [0,1]x[0,1] = the whole 2x2 image
        let ii = integral(&gray(2, 2, vec![1; 4])).unwrap();
        assert_eq!(window_sum(&ii, 1, 1, 2).unwrap(), 4);
        // size 4 window on a constant-7 image
        let ii = integral(&gray(6, 6, vec![7; 36])).unwrap();
        assert_eq!(window_sum(&ii, 3, 3, 4).unwrap(), 112);
        // out of bounds when the left span leaves the image
        assert!(window_sum(&ii, 0, 3, 4).is_err());
    }

    #[test]
    fn window_sum_matches_naive_random() {
        use rand::{Rng, SeedableRng};
        let img = rand_image(20, 20, 5);
        let ii = integral(&img).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let mut checked = 0;
        while checked < 200 {
            let s = rng.random_range(1..=8usize);
            let cx = rng.random_range(0..20);
            let cy = rng.random_range(0..20);
            let (Some((x0, x1)), Some((y0, y1))) = (window_span(cx, s, 20), window_span(cy, s, 20))
            else {
                continue;
            };
            let expect = naive_rect(&img, Rect { x0, y0, x1, y1 });
            assert_eq!(window_sum(&ii, cx, cy, s).unwrap(), expect);
            checked += 1;
        }
    }

    proptest! {
        #[test]
        fn integral_monotone_both_axes(
            w in 1usize..16, h in 1usize..16,
            seed in any::<u64>(),
        ) {
            let img = rand_image(w, h, seed);
            let ii = integral(&img).unwrap();
            for y in 0..h as isize {
                for x in 0..w as isize {
                    prop_assert!(ii.at(x, y) >= ii.at(x - 1, y));
                    prop_assert!(ii.at(x, y) >= ii.at(x, y - 1));
                }
            }
        }

        #[test]
        fn rect_sum_equals_naive_everywhere(
            w in 1usize..12, h in 1usize..12,
            seed in any::<u64>(),
        ) {
            let img = rand_image(w, h, seed);
            let ii = integral(&img).unwrap();
            for y0 in 0..h {
                for x0 in 0..w {
                    for y1 in y0..h {
                        for x1 in x0..w {
                            let r = Rect { x0, y0, x1, y1 };
                            prop_assert_eq!(rect_sum(&ii, r).unwrap(), naive_rect(&img, r));
                        }
                    }
                }
            }
        }

        #[test]
        fn integral_is_linear(
            w in 1usize..10, h in 1usize..10,
            sa in any::<u64>(), sb in any::<u64>(),
        ) {
            // Widened domain: halve inputs so the element-wise sum cannot clip.
            let a0 = rand_image(w, h, sa);
            let b0 = rand_image(w, h, sb);
            let a = gray(w, h, a0.data().iter().map(|&v| v / 2).collect());
            let b = gray(w, h, b0.data().iter().map(|&v| v / 2).collect());
            let sum = gray(w, h, a.data().iter().zip(b.data()).map(|(&x, &y)| x + y).collect());
            let ia = integral(&a).unwrap();
            let ib = integral(&b).unwrap();
            let isum = integral(&sum).unwrap();
            for i in 0..w * h {
                prop_assert_eq!(isum.sums()[i], ia.sums()[i] + ib.sums()[i]);
            }
        }

        #[test]
        fn window_mean_within_pixel_range(
            seed in any::<u64>(),
            cx in 0usize..20, cy in 0usize..20,
            s in 1usize..10,
        ) {
            let img = rand_image(20, 20, seed);
            let ii = integral(&img).unwrap();
            let (Some((x0, x1)), Some((y0, y1))) =
                (window_span(cx, s, 20), window_span(cy, s, 20)) else { return Ok(()); };
            let sum = window_sum(&ii, cx, cy, s).unwrap();
            let mut lo = 255u8;
            let mut hi = 0u8;
            for y in y0..=y1 {
                for x in x0..=x1 {
                    lo = lo.min(img.get(x, y));
                    hi = hi.max(img.get(x, y));
                }
            }
            let n = (s * s) as u32;
            prop_assert!(sum >= lo as u32 * n);
            prop_assert!(sum <= hi as u32 * n);
        }
    }
}
