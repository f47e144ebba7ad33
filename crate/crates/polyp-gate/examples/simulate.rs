//! Gate a short synthetic frame sequence and print transmission stats.
//!
//!     cargo run --example simulate

use polyp_gate::pipeline::PipelineConfig;
use polyp_gate::pnm::PixelSource;
use polyp_gate::{generate_phantom, run_stream, GrayImage, PhantomSpec};

fn main() {
    // Alternate uninformative (flat) and informative (phantom) frames.
    let frames = (0..10).map(|i| {
        let img = if i % 2 == 0 {
            GrayImage::filled(320, 320, 80)
        } else {
            generate_phantom(&PhantomSpec {
                seed: i,
                ..PhantomSpec::default()
            })
            .unwrap()
        };
        (format!("frame_{i:03}"), Ok(PixelSource::Gray(img)))
    });
    let stats = run_stream(frames, &PipelineConfig::default(), 320 * 320);
    println!("{}", serde_json::to_string_pretty(&stats).unwrap());
}
