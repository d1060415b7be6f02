//! Binary PGM (`P5`) frames.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use telefold_core::silhouette::GrayImage;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("not a binary PGM (expected P5 magic)")]
    Magic,
    #[error("truncated PGM header")]
    Header,
    #[error("bad PGM header field {0:?}")]
    Field(String),
    #[error("PGM maxval {0} is not in 1..=255")]
    MaxVal(u32),
    #[error("PGM pixel data has {got} bytes, expected {want}")]
    Data { got: usize, want: usize },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Frame { path: PathBuf, source: Box<PgmError> },
    #[error("no .pgm frames in {0}")]
    NoFrames(PathBuf),
}

/// Reads one header token, skipping whitespace and `#` comments.
fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8], PgmError> {
    loop {
        match bytes.get(*pos) {
            Some(b'#') => {
                while bytes.get(*pos).is_some_and(|&b| b != b'\n') {
                    *pos += 1;
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
            None => return Err(PgmError::Header),
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(|b| !b.is_ascii_whitespace()) {
        *pos += 1;
    }
    Ok(&bytes[start..*pos])
}

fn number(bytes: &[u8], pos: &mut usize) -> Result<u32, PgmError> {
    let t = token(bytes, pos)?;
    std::str::from_utf8(t)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| PgmError::Field(String::from_utf8_lossy(t).into()))
}

/// Parses a P5 image. Values are rescaled to 0–255 when `maxval < 255`.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let mut pos = 0;
    if token(bytes, &mut pos)? != b"P5" {
        return Err(PgmError::Magic);
    }
    let w = number(bytes, &mut pos)? as usize;
    let h = number(bytes, &mut pos)? as usize;
    let maxval = number(bytes, &mut pos)?;
    if !(1..=255).contains(&maxval) {
        return Err(PgmError::MaxVal(maxval));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    let want = w * h;
    let data = bytes.get(pos..).unwrap_or_default();
    if data.len() < want {
        return Err(PgmError::Data { got: data.len(), want });
    }
    let pixels: Vec<u8> = if maxval == 255 {
        data[..want].to_vec()
    } else {
        data[..want].iter().map(|&v| ((u32::from(v.min(maxval as u8)) * 255 + maxval / 2) / maxval) as u8).collect()
    };
    GrayImage::new(w, h, pixels).map_err(|e| PgmError::Field(e.to_string()))
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn read_pgm(path: &Path) -> Result<GrayImage, PgmError> {
    let bytes = fs::read(path).map_err(|source| PgmError::Io { path: path.into(), source })?;
    parse_pgm(&bytes).map_err(|e| PgmError::Frame { path: path.into(), source: Box::new(e) })
}

/// `*.pgm` files of `dir` in lexicographic file-name order.
pub fn frame_paths(dir: &Path) -> Result<Vec<PathBuf>, PgmError> {
    let io_err = |source| PgmError::Io { path: dir.into(), source };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let p = entry.map_err(io_err)?.path();
        if p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")) {
            paths.push(p);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if paths.is_empty() {
        return Err(PgmError::NoFrames(dir.into()));
    }
    Ok(paths)
}
