//! Binary PGM (`P5`) encoding and decoding.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A decoded grayscale raster, stored row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

impl PgmImage {
    /// Sample at row `i`, column `j`.
    pub fn at(&self, i: usize, j: usize) -> u16 {
        self.pixels[i * self.width + j]
    }
}

pub fn has_pgm_magic(bytes: &[u8]) -> bool {
    bytes.starts_with(b"P5")
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    name: &'a str,
}

impl Cursor<'_> {
    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            file: self.name.to_string(),
            offset: self.pos as u64,
            message: message.into(),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                file: self.name.to_string(),
                offset: start as u64,
                message: format!("{what} out of range"),
            })
    }
}

/// Decodes a `P5` file. `name` labels parse errors.
pub fn parse_pgm(bytes: &[u8], name: &str) -> Result<PgmImage> {
    let mut cur = Cursor { bytes, pos: 0, name };
    if !has_pgm_magic(bytes) {
        return Err(cur.fail("missing P5 magic"));
    }
    cur.pos = 2;
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(cur.fail("image dimensions must be positive"));
    }
    if maxval != 255 && maxval != 65535 {
        cur.pos = maxval_at;
        return Err(cur.fail(format!("maxval {maxval} unsupported (expected 255 or 65535)")));
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(cur.fail("expected a single whitespace byte before the raster")),
    }
    let depth = if maxval > 255 { 2 } else { 1 };
    let count = width * height;
    let raster = &bytes[cur.pos..];
    if raster.len() < count * depth {
        cur.pos = bytes.len();
        return Err(cur.fail(format!("raster truncated: need {} bytes, found {}", count * depth, raster.len())));
    }
    let pixels: Vec<u16> = if depth == 1 {
        raster[..count].iter().map(|&b| b as u16).collect()
    } else {
        raster[..2 * count]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect()
    };
    if let Some(k) = pixels.iter().position(|&p| p as usize > maxval) {
        cur.pos += k * depth;
        return Err(cur.fail("sample exceeds maxval"));
    }
    Ok(PgmImage {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}

pub fn read_pgm(path: &Path) -> Result<PgmImage> {
    let bytes = fs::read(path)?;
    parse_pgm(&bytes, &path.display().to_string())
}

pub fn encode_pgm(img: &PgmImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
    if img.maxval > 255 {
        out.extend(img.pixels.iter().flat_map(|p| p.to_be_bytes()));
    } else {
        out.extend(img.pixels.iter().map(|&p| p as u8));
    }
    out
}

pub fn write_pgm(path: &Path, img: &PgmImage) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}
