//! Labeled-set evaluation and the synthetic phantom generator that stands in
//! for the unavailable capsule videos.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::pipeline::{detect_gray, DetectionReport, PipelineConfig};
use crate::pnm::{read_frame, PixelSource};

/// Dark-ring intensities must stay below the edge detector's dark-side
/// threshold, otherwise the ring cannot produce edges.
const RING_INTENSITY_LIMIT: u8 = 100;

/// Margin kept between the phantom's outer ring and the image border so the
/// default 64-pixel surround window fits everywhere on the structure.
const GEOMETRY_MARGIN: usize = 64;

// ---------------------------------------------------------------------------
// labels

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledEntry {
    pub path: PathBuf,
    pub informative: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledSet {
    pub entries: Vec<LabeledEntry>,
}

/// Parses a `path,label` CSV. Relative paths are resolved against the CSV's
/// directory; duplicate paths and unknown labels are rejected with the
/// offending line number.
pub fn load_labels(csv_path: impl AsRef<Path>) -> Result<LabeledSet> {
    let csv_path = csv_path.as_ref();
    let text = fs::read_to_string(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let base = csv_path.parent().unwrap_or_else(|| Path::new("."));
    let err = |line: usize, reason: String| Error::Labels {
        path: csv_path.to_path_buf(),
        line,
        reason,
    };

    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "path,label" => {}
        Some((_, header)) => {
            return Err(err(
                1,
                format!("expected header 'path,label', got {header:?}"),
            ))
        }
        None => return Err(err(1, "empty file".into())),
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (path_part, label_part) = line
            .rsplit_once(',')
            .ok_or_else(|| err(line_no, "missing ',' separator".into()))?;
        let path_part = path_part.trim();
        if path_part.is_empty() {
            return Err(err(line_no, "empty path".into()));
        }
        let informative = match label_part.trim().to_ascii_lowercase().as_str() {
            "informative" => true,
            "non-informative" => false,
            other => return Err(err(line_no, format!("unknown label {other:?}"))),
        };
        if !seen.insert(path_part.to_string()) {
            return Err(err(line_no, format!("duplicate path {path_part:?}")));
        }
        let path = {
            let p = Path::new(path_part);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };
        entries.push(LabeledEntry { path, informative });
    }
    Ok(LabeledSet { entries })
}

// ---------------------------------------------------------------------------
// confusion matrix

fn rate_or_na<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_f64(*r),
        None => s.serialize_str("n/a"),
    }
}

/// 2x2 frame-classification matrix: rows are the detector's result, columns
/// the ground truth; rates are normalized per ground-truth column. Rates
/// over an empty column are reported as explicit "n/a" markers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    #[serde(serialize_with = "rate_or_na")]
    pub tp_rate: Option<f64>,
    #[serde(serialize_with = "rate_or_na")]
    pub fp_rate: Option<f64>,
    #[serde(serialize_with = "rate_or_na")]
    pub fn_rate: Option<f64>,
    #[serde(serialize_with = "rate_or_na")]
    pub tn_rate: Option<f64>,
}

impl ConfusionMatrix {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        let pos = tp + fn_;
        let neg = fp + tn;
        let rate = |n: u64, d: u64| (d > 0).then(|| n as f64 / d as f64);
        Self {
            tp,
            fp,
            fn_,
            tn,
            tp_rate: rate(tp, pos),
            fp_rate: rate(fp, neg),
            fn_rate: rate(fn_, pos),
            tn_rate: rate(tn, neg),
        }
    }

    fn tally(outcomes: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
        for (predicted, truth) in outcomes {
            match (predicted, truth) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => tn += 1,
            }
        }
        Self::from_counts(tp, fp, fn_, tn)
    }

    /// Aligned plain-text rendering: predicted class per row, ground truth
    /// per column, rates normalized within each truth column.
    pub fn text_table(&self) -> String {
        let cell = |r: Option<f64>| match r {
            Some(v) => format!("{v:.4}"),
            None => "n/a".to_string(),
        };
        let mut out = String::new();
        writeln!(
            out,
            "{:<28}{:<22}{}",
            "Our result \\ Real", "Informative (true)", "Non-informative (false)"
        )
        .unwrap();
        writeln!(
            out,
            "{:<28}{:<22}{}",
            "Informative (positive)",
            cell(self.tp_rate),
            cell(self.fp_rate)
        )
        .unwrap();
        writeln!(
            out,
            "{:<28}{:<22}{}",
            "Non-informative (negative)",
            cell(self.fn_rate),
            cell(self.tn_rate)
        )
        .unwrap();
        out
    }
}

/// Result of evaluating a labeled set: the matrix, every per-frame report
/// paired with its ground truth, and any per-file failures.
#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub matrix: ConfusionMatrix,
    pub reports: Vec<(DetectionReport, bool)>,
    pub failures: Vec<(PathBuf, String)>,
}

/// Runs the detector over every entry. Per-file errors are collected rather
/// than fatal; the call fails only when every entry fails.
pub fn evaluate(set: &LabeledSet, cfg: &PipelineConfig) -> Result<EvalOutcome> {
    let results: Vec<_> = set
        .entries
        .par_iter()
        .map(|entry| {
            let id = entry.path.display().to_string();
            let det = read_frame(&entry.path).and_then(|src| match src {
                PixelSource::Gray(g) => detect_gray(g, cfg, &id),
                PixelSource::Rgb(f) => crate::pipeline::detect_frame(&f, cfg, &id),
            });
            (entry, det)
        })
        .collect();

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (entry, det) in results {
        match det {
            Ok(d) => reports.push((d.report, entry.informative)),
            Err(e) => failures.push((entry.path.clone(), e.to_string())),
        }
    }
    if reports.is_empty() && !set.entries.is_empty() {
        return Err(Error::AllEntriesFailed(set.entries.len()));
    }
    let matrix = ConfusionMatrix::tally(
        reports
            .iter()
            .map(|(r, truth)| (r.is_informative(), *truth)),
    );
    Ok(EvalOutcome {
        matrix,
        reports,
        failures,
    })
}

/// In-memory variant of [`evaluate`] used by the benchmark suite and tests.
pub fn evaluate_images(
    items: &[(String, GrayImage, bool)],
    cfg: &PipelineConfig,
) -> Result<EvalOutcome> {
    let reports = items
        .par_iter()
        .map(|(id, img, truth)| detect_gray(img.clone(), cfg, id).map(|d| (d.report, *truth)))
        .collect::<Result<Vec<_>>>()?;
    let matrix = ConfusionMatrix::tally(
        reports
            .iter()
            .map(|(r, truth)| (r.is_informative(), *truth)),
    );
    Ok(EvalOutcome {
        matrix,
        reports,
        failures: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// phantom generator

/// Parameters of a synthetic polyp frame: a bright highlight plateau at the
/// center rolling off toward the background, surrounded at `radius` by a
/// narrow dark ring, over a uniform background with optional uniform noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhantomSpec {
    pub width: usize,
    pub height: usize,
    pub background: u8,
    pub center_x: usize,
    pub center_y: usize,
    pub radius: usize,
    pub peak: u8,
    pub ring_intensity: u8,
    pub ring_width: usize,
    pub noise_amplitude: u8,
    pub seed: u64,
}

impl Default for PhantomSpec {
    fn default() -> Self {
        Self {
            width: 320,
            height: 320,
            background: 90,
            center_x: 160,
            center_y: 160,
            radius: 40,
            peak: 230,
            ring_intensity: 30,
            ring_width: 3,
            noise_amplitude: 0,
            seed: 0,
        }
    }
}

impl PhantomSpec {
    pub fn validate(&self) -> Result<()> {
        let geom = |m: String| Error::Geometry(m);
        if self.peak <= self.background || self.background <= self.ring_intensity {
            return Err(geom(format!(
                "intensities must satisfy peak > background > ring, got {} / {} / {}",
                self.peak, self.background, self.ring_intensity
            )));
        }
        if self.ring_intensity >= RING_INTENSITY_LIMIT {
            return Err(geom(format!(
                "ring intensity {} must stay below {}",
                self.ring_intensity, RING_INTENSITY_LIMIT
            )));
        }
        let reach = self.radius + self.ring_width + GEOMETRY_MARGIN;
        let fits = self.center_x >= reach
            && self.center_y >= reach
            && self.center_x + reach < self.width
            && self.center_y + reach < self.height;
        if !fits {
            return Err(geom(format!(
                "structure of reach {reach} at ({}, {}) leaves no full surround-window margin \
                 in a {}x{} image",
                self.center_x, self.center_y, self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Radius of the bright highlight plateau of a polyp of the given radius.
/// The highlight must stay small against the 64-pixel surround window or the
/// positive contrast test cannot fire next to the highlight's dark rim.
fn highlight_radius(radius: usize) -> f64 {
    (radius as f64).min(12.0)
}

/// Width of the rolloff from the highlight plateau down to background level.
const HIGHLIGHT_ROLLOFF: f64 = 2.0;

/// Deterministic synthetic polyp frame. For a given spec (seed included)
/// the output is bit-identical across runs.
pub fn generate_phantom(spec: &PhantomSpec) -> Result<GrayImage> {
    spec.validate()?;
    let mut img = GrayImage::filled(spec.width, spec.height, spec.background);
    if spec.radius > 0 {
        let core = highlight_radius(spec.radius);
        let r = spec.radius as f64;
        let ring_outer = (spec.radius + spec.ring_width) as f64;
        let (bg, peak) = (spec.background as f64, spec.peak as f64);
        for y in 0..spec.height {
            for x in 0..spec.width {
                let dx = x as f64 - spec.center_x as f64;
                let dy = y as f64 - spec.center_y as f64;
                let d = (dx * dx + dy * dy).sqrt();
                let v = if d <= core {
                    peak
                } else if d <= core + HIGHLIGHT_ROLLOFF {
                    peak - (peak - bg) * (d - core) / HIGHLIGHT_ROLLOFF
                } else if d <= r {
                    bg
                } else if d <= ring_outer {
                    spec.ring_intensity as f64
                } else {
                    continue;
                };
                img.set(x, y, v as u8);
            }
        }
    }
    if spec.noise_amplitude > 0 {
        let amp = spec.noise_amplitude as i32;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for y in 0..spec.height {
            for x in 0..spec.width {
                let v = img.get(x, y) as i32 + rng.random_range(-amp..=amp);
                img.set(x, y, v.clamp(0, 255) as u8);
            }
        }
    }
    Ok(img)
}

// ---------------------------------------------------------------------------
// pinned benchmark suite

/// One entry of the pinned benchmark suite.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub id: String,
    pub image: GrayImage,
    pub informative: bool,
}

/// The pinned 200-image benchmark: 100 phantoms with radius in [25, 60],
/// peak at least 100 above background and a sub-threshold dark ring, plus
/// 50 constant and 50 noise-only negatives. Fully determined by in-repo
/// seeds; a stand-in for the unavailable clinical dataset.
pub fn benchmark_suite() -> Vec<SuiteEntry> {
    let mut entries = Vec::with_capacity(200);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA55);
    for i in 0..100u32 {
        let background = rng.random_range(55..=90u8);
        let peak = rng.random_range(background.saturating_add(100)..=255);
        let radius = rng.random_range(25..=60usize);
        let ring_intensity = rng.random_range(10..50u8).min(background - 1);
        let ring_width = rng.random_range(2..=5usize);
        let noise_amplitude = rng.random_range(0..=10u8);
        let center_x = rng.random_range(130..=190usize);
        let center_y = rng.random_range(130..=190usize);
        let spec = PhantomSpec {
            background,
            peak,
            radius,
            ring_intensity,
            ring_width,
            noise_amplitude,
            center_x,
            center_y,
            seed: 0x9000 + i as u64,
            ..PhantomSpec::default()
        };
        entries.push(SuiteEntry {
            id: format!("phantom_{i:03}"),
            image: generate_phantom(&spec).expect("pinned phantom spec is valid"),
            informative: true,
        });
    }
    for i in 0..50u32 {
        let level: u8 = rng.random();
        entries.push(SuiteEntry {
            id: format!("neg_const_{i:03}"),
            image: GrayImage::filled(320, 320, level),
            informative: false,
        });
    }
    for i in 0..50u32 {
        let base = rng.random_range(40..=180i32);
        let amp = rng.random_range(1..=20i32);
        let mut noise_rng = ChaCha8Rng::seed_from_u64(0xA000 + i as u64);
        let data = (0..320 * 320)
            .map(|_| (base + noise_rng.random_range(-amp..=amp)).clamp(0, 255) as u8)
            .collect();
        entries.push(SuiteEntry {
            id: format!("neg_noise_{i:03}"),
            image: GrayImage::new(320, 320, data).expect("sized buffer"),
            informative: false,
        });
    }
    entries
}
