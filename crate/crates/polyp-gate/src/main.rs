//! Command-line front end: per-frame detection, batch runs, labeled-set
//! evaluation, phantom generation and stream simulation. Exit status encodes
//! operational success (0 ran, 2 I/O or format error, 3 configuration
//! error); the classification itself is data on standard output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polyp_gate::error::Error;
use polyp_gate::eval::{benchmark_suite, evaluate, load_labels, PhantomSpec};
use polyp_gate::pipeline::{detect_frame, detect_gray, Detection, PipelineConfig};
use polyp_gate::pnm::{read_frame, write_mask, write_pgm, PixelSource};
use polyp_gate::stream::run_stream;
use polyp_gate::{EdgeConfig, PcmConfig};

const EXIT_IO: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "polyp-gate",
    version,
    about = "Frame gate for capsule endoscopy video"
)]
struct Cli {
    /// Worker threads for batch, eval and simulate (0 = one per core).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

/// Pipeline overrides; defaults are the standard operating point.
#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Inner (smoothing) window edge length.
    #[arg(long, default_value_t = 16)]
    a: usize,
    /// Outer (surround) window edge length.
    #[arg(long, default_value_t = 64)]
    b: usize,
    /// Minimum edge intensity step.
    #[arg(long, default_value_t = 2)]
    tau1: u8,
    /// Maximum dark-side intensity for edges.
    #[arg(long, default_value_t = 100)]
    tau2: u8,
    /// Final-mask pixel count above which a frame is informative.
    #[arg(long, default_value_t = 500)]
    threshold: u64,
    /// Scale the threshold with frame area relative to 320x320.
    #[arg(long = "scale-threshold", default_value_t = false)]
    scale_threshold: bool,
}

impl ConfigArgs {
    fn build(&self) -> Result<PipelineConfig, Error> {
        let cfg = PipelineConfig {
            pcm: PcmConfig {
                a: self.a,
                b: self.b,
                ..PcmConfig::default()
            },
            edge: EdgeConfig {
                tau1: self.tau1,
                tau2: self.tau2,
            },
            area_threshold: self.threshold,
            scale_threshold_with_area: self.scale_threshold,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single PPM/PGM frame and print its JSON report.
    Detect {
        image: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Also write pcm/edge/hmask/vmask/final masks as PGM files.
        #[arg(long)]
        dump: bool,
        /// Directory for dumped masks (default: beside the input).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Classify many frames; prints a JSON array of reports.
    Batch {
        images: Vec<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Evaluate a labeled set and print the accuracy table plus JSON.
    Eval {
        /// CSV with header `path,label`; relative paths resolve against it.
        #[arg(long)]
        labels: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Write a deterministic synthetic polyp frame (or the pinned suite).
    Phantom {
        /// Output PGM path (single-phantom mode).
        #[arg(long, required_unless_present = "suite_dir")]
        out: Option<PathBuf>,
        /// JSON file with a full phantom spec; flags below are ignored.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Write the pinned 200-image benchmark suite plus labels.csv here.
        #[arg(long)]
        suite_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 320)]
        width: usize,
        #[arg(long, default_value_t = 320)]
        height: usize,
        #[arg(long, default_value_t = 90)]
        background: u8,
        #[arg(long, default_value_t = 160)]
        center_x: usize,
        #[arg(long, default_value_t = 160)]
        center_y: usize,
        #[arg(long, default_value_t = 40)]
        radius: usize,
        #[arg(long, default_value_t = 230)]
        peak: u8,
        #[arg(long, default_value_t = 30)]
        ring: u8,
        #[arg(long, default_value_t = 3)]
        ring_width: usize,
        #[arg(long, default_value_t = 0)]
        noise: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the gating loop over an ordered frame sequence.
    Simulate {
        /// Directory of PPM/PGM frames, consumed in name order.
        frames_dir: Option<PathBuf>,
        /// Newline-delimited manifest of frame paths (alternative input).
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value_t = 307_200)]
        bytes_per_frame: u64,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs != 1 {
        let threads = if cli.jobs == 0 { 0 } else { cli.jobs };
        // num_threads(0) lets rayon pick one thread per core
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("polyp-gate: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("polyp-gate: {e}");
            ExitCode::from(if e.is_config() { EXIT_CONFIG } else { EXIT_IO })
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Detect {
            image,
            config,
            dump,
            out_dir,
        } => {
            let cfg = config.build()?;
            let det = detect_path(&image, &cfg)?;
            if dump {
                dump_masks(&image, out_dir.as_deref(), &det)?;
            }
            println!(
                "{}",
                serde_json::to_string(&det.report).expect("report json")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Batch { images, config } => {
            let cfg = config.build()?;
            let mut reports = Vec::new();
            let mut failed = false;
            for image in &images {
                match detect_path(image, &cfg) {
                    Ok(det) => reports.push(det.report),
                    Err(e) => {
                        failed = true;
                        eprintln!("polyp-gate: {e}");
                    }
                }
            }
            println!("{}", serde_json::to_string(&reports).expect("reports json"));
            Ok(if failed {
                ExitCode::from(EXIT_IO)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Eval { labels, config } => {
            let cfg = config.build()?;
            let set = load_labels(&labels)?;
            let outcome = evaluate(&set, &cfg)?;
            for (path, reason) in &outcome.failures {
                eprintln!("polyp-gate: skipped {}: {reason}", path.display());
            }
            print!("{}", outcome.matrix.text_table());
            println!(
                "{}",
                serde_json::to_string(&outcome.matrix).expect("matrix json")
            );
            Ok(if outcome.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_IO)
            })
        }
        Command::Phantom {
            out,
            spec,
            suite_dir,
            width,
            height,
            background,
            center_x,
            center_y,
            radius,
            peak,
            ring,
            ring_width,
            noise,
            seed,
        } => {
            if let Some(dir) = suite_dir {
                return write_suite(&dir);
            }
            let spec = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    serde_json::from_str::<PhantomSpec>(&text)
                        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
                }
                None => PhantomSpec {
                    width,
                    height,
                    background,
                    center_x,
                    center_y,
                    radius,
                    peak,
                    ring_intensity: ring,
                    ring_width,
                    noise_amplitude: noise,
                    seed,
                },
            };
            let img = polyp_gate::generate_phantom(&spec)?;
            let out = out.expect("clap enforces --out without --suite-dir");
            write_pgm(&out, &img)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            frames_dir,
            manifest,
            bytes_per_frame,
            config,
        } => {
            let cfg = config.build()?;
            let paths = match (frames_dir, manifest) {
                (Some(dir), None) => frames_in_dir(&dir)?,
                (None, Some(man)) => frames_in_manifest(&man)?,
                _ => {
                    return Err(Error::Config(
                        "provide either a frames directory or --manifest".into(),
                    ))
                }
            };
            let frames = paths
                .into_iter()
                .map(|p| (p.display().to_string(), read_frame(&p)));
            let stats = run_stream(frames, &cfg, bytes_per_frame);
            println!("{}", serde_json::to_string(&stats).expect("stats json"));
            Ok(if stats.frames_skipped > 0 {
                ExitCode::from(EXIT_IO)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn detect_path(image: &Path, cfg: &PipelineConfig) -> Result<Detection, Error> {
    let id = image.display().to_string();
    match read_frame(image)? {
        PixelSource::Rgb(frame) => detect_frame(&frame, cfg, &id),
        PixelSource::Gray(gray) => detect_gray(gray, cfg, &id),
    }
}

fn dump_masks(image: &Path, out_dir: Option<&Path>, det: &Detection) -> Result<(), Error> {
    let stem = image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "frame".to_string());
    let dir = match out_dir {
        Some(d) => {
            std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
            d.to_path_buf()
        }
        None => image
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .to_path_buf(),
    };
    let path = |suffix: &str| dir.join(format!("{stem}.{suffix}.pgm"));
    write_mask(path("pcm"), &det.pcm)?;
    write_mask(path("edge.left"), &det.edges.dark_left)?;
    write_mask(path("edge.right"), &det.edges.dark_right)?;
    write_mask(path("edge.up"), &det.edges.dark_up)?;
    write_mask(path("edge.down"), &det.edges.dark_down)?;
    write_mask(path("hmask"), &det.fusion.h_mask)?;
    write_mask(path("vmask"), &det.fusion.v_mask)?;
    write_mask(path("final"), &det.fusion.final_mask)?;
    Ok(())
}

fn write_suite(dir: &Path) -> Result<ExitCode, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut csv = String::from("path,label\n");
    for entry in benchmark_suite() {
        let name = format!("{}.pgm", entry.id);
        write_pgm(dir.join(&name), &entry.image)?;
        let label = if entry.informative {
            "informative"
        } else {
            "non-informative"
        };
        csv.push_str(&format!("{name},{label}\n"));
    }
    let csv_path = dir.join("labels.csv");
    std::fs::write(&csv_path, csv).map_err(|e| Error::io(&csv_path, e))?;
    Ok(ExitCode::SUCCESS)
}

fn frames_in_dir(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("ppm") || e.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    paths.sort();
    Ok(paths)
}

fn frames_in_manifest(manifest: &Path) -> Result<Vec<PathBuf>, Error> {
    let text = std::fs::read_to_string(manifest).map_err(|e| Error::io(manifest, e))?;
    let base = manifest.parent().unwrap_or_else(|| Path::new("."));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let p = Path::new(l);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        })
        .collect())
}
