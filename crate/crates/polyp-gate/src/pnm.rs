//! Binary netpbm readers and writers: P6 (PPM) frames, P5 (PGM) intensity
//! images, and P5 mask serialization with 0/255 levels. Only maxval 255 is
//! accepted; `#` comments in the header are skipped.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{GrayImage, RgbFrame};
use crate::mask::BinaryMask;

/// A frame read from disk, either color or already gray.
#[derive(Debug, Clone)]
pub enum PixelSource {
    Rgb(RgbFrame),
    Gray(GrayImage),
}

impl PixelSource {
    pub fn width(&self) -> usize {
        match self {
            PixelSource::Rgb(f) => f.width(),
            PixelSource::Gray(g) => g.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            PixelSource::Rgb(f) => f.height(),
            PixelSource::Gray(g) => g.height(),
        }
    }
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Advances past whitespace and `#` comments.
    fn skip_separators(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Option<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok).ok()?.parse().ok()
    }

    /// Consumes the single whitespace byte separating header and raster.
    fn raster(mut self) -> Option<&'a [u8]> {
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
            Some(&self.bytes[self.pos..])
        } else {
            None
        }
    }
}

fn parse_header<'a>(bytes: &'a [u8], magic: &str, path: &Path) -> Result<(usize, usize, &'a [u8])> {
    let mut rd = HeaderReader::new(bytes);
    match rd.token() {
        Some(m) if m == magic.as_bytes() => {}
        Some(m) => {
            return Err(Error::pnm(
                path,
                format!(
                    "expected magic {magic}, found {:?}",
                    String::from_utf8_lossy(m)
                ),
            ))
        }
        None => return Err(Error::pnm(path, "empty file")),
    }
    let width = rd
        .number()
        .ok_or_else(|| Error::pnm(path, "missing or invalid width"))?;
    let height = rd
        .number()
        .ok_or_else(|| Error::pnm(path, "missing or invalid height"))?;
    let maxval = rd
        .number()
        .ok_or_else(|| Error::pnm(path, "missing or invalid maxval"))?;
    if maxval != 255 {
        return Err(Error::pnm(
            path,
            format!("maxval must be 255, got {maxval}"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::pnm(path, "zero dimension"));
    }
    let raster = rd
        .raster()
        .ok_or_else(|| Error::pnm(path, "truncated header"))?;
    Ok((width, height, raster))
}

/// Reads an 8-bit binary PPM (P6) frame.
pub fn read_ppm(path: impl AsRef<Path>) -> Result<RgbFrame> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (w, h, raster) = parse_header(&bytes, "P6", path)?;
    let need = w * h * 3;
    if raster.len() < need {
        return Err(Error::pnm(
            path,
            format!("raster has {} bytes, expected {need}", raster.len()),
        ));
    }
    RgbFrame::new(w, h, raster[..need].to_vec())
}

/// Reads an 8-bit binary PGM (P5) intensity image.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (w, h, raster) = parse_header(&bytes, "P5", path)?;
    let need = w * h;
    if raster.len() < need {
        return Err(Error::pnm(
            path,
            format!("raster has {} bytes, expected {need}", raster.len()),
        ));
    }
    GrayImage::new(w, h, raster[..need].to_vec())
}

/// Reads a frame by extension: `.ppm` as P6, `.pgm` as P5.
pub fn read_frame(path: impl AsRef<Path>) -> Result<PixelSource> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("ppm") => Ok(PixelSource::Rgb(read_ppm(path)?)),
        Some(e) if e.eq_ignore_ascii_case("pgm") => Ok(PixelSource::Gray(read_pgm(path)?)),
        _ => Err(Error::pnm(
            path,
            "unsupported extension (want .ppm or .pgm)",
        )),
    }
}

pub fn write_pgm(path: impl AsRef<Path>, gray: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::with_capacity(gray.data().len() + 32);
    write!(out, "P5\n{} {}\n255\n", gray.width(), gray.height()).expect("vec write");
    out.extend_from_slice(gray.data());
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn write_ppm(path: impl AsRef<Path>, frame: &RgbFrame) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::with_capacity(frame.pixels().len() + 32);
    write!(out, "P6\n{} {}\n255\n", frame.width(), frame.height()).expect("vec write");
    out.extend_from_slice(frame.pixels());
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Serializes a mask as P5 with 0 for clear and 255 for set bits.
pub fn write_mask(path: impl AsRef<Path>, mask: &BinaryMask) -> Result<()> {
    let data = mask
        .bits()
        .iter()
        .map(|&b| if b { 255 } else { 0 })
        .collect();
    let gray = GrayImage::new(mask.width(), mask.height(), data)?;
    write_pgm(path, &gray)
}
