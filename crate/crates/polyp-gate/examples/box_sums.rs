//! Constant-time box sums over an integral image.
//!
//!     cargo run --example box_sums

use polyp_gate::{integral, rect_sum, window_sum, GrayImage, Rect};

fn main() {
    // 8x8 ramp: pixel value = x + 8*y
    let img = GrayImage::new(8, 8, (0..64).map(|i| i as u8).collect()).unwrap();
    let ii = integral(&img).unwrap();

    let full = rect_sum(&ii, Rect::new(0, 0, 7, 7).unwrap()).unwrap();
    println!("full image sum: {full}");

    let corner = rect_sum(&ii, Rect::new(0, 0, 1, 1).unwrap()).unwrap();
    println!("top-left 2x2:   {corner}");

    // 4x4 window centered at (4,4) spans columns and rows 2..=5
    let w = window_sum(&ii, 4, 4, 4).unwrap();
    println!("4x4 at (4,4):   {w} (mean {})", w / 16);
}
