//! Run the pinned 200-image benchmark suite in memory and print the
//! confusion matrix.
//!
//!     cargo run --release --example evaluate

use polyp_gate::pipeline::PipelineConfig;
use polyp_gate::{benchmark_suite, evaluate_images};

fn main() {
    let items: Vec<_> = benchmark_suite()
        .into_iter()
        .map(|e| (e.id, e.image, e.informative))
        .collect();
    let outcome = evaluate_images(&items, &PipelineConfig::default()).unwrap();
    print!("{}", outcome.matrix.text_table());
    println!("{}", serde_json::to_string(&outcome.matrix).unwrap());
}
