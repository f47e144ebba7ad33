//! Generate a synthetic polyp frame and write it as a PGM file.
//!
//!     cargo run --example phantom [OUT.pgm]

use polyp_gate::pnm::write_pgm;
use polyp_gate::{generate_phantom, PhantomSpec};

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "phantom.pgm".into());
    let spec = PhantomSpec {
        radius: 50,
        noise_amplitude: 8,
        seed: 7,
        ..PhantomSpec::default()
    };
    let img = generate_phantom(&spec).unwrap();
    write_pgm(&out, &img).unwrap();
    println!("wrote {out} ({}x{})", img.width(), img.height());
}
