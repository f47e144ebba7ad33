//! Classify a synthetic frame and print its report plus a mask summary.
//!
//!     cargo run --example detect

use polyp_gate::pipeline::{detect_gray, PipelineConfig};
use polyp_gate::{generate_phantom, PhantomSpec};

fn main() {
    let frame = generate_phantom(&PhantomSpec::default()).unwrap();
    let det = detect_gray(frame, &PipelineConfig::default(), "phantom").unwrap();

    println!("{}", serde_json::to_string_pretty(&det.report).unwrap());
    println!();
    println!("pcm bits:   {}", det.pcm.count());
    println!("h_mask:     {}", det.fusion.h_mask.count());
    println!("v_mask:     {}", det.fusion.v_mask.count());
    println!("final:      {}", det.fusion.final_count);
}
