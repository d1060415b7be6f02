//! Silhouette metrology on grayscale frames.
//!
//! Each frame is thresholded, opened with a square structuring element, and
//! labelled into 4-connected components. The largest component stands in for
//! the actuator. Its bounding box gives extension and radial growth relative to
//! the smallest box seen in the run, scaled by `alpha` mm/px. The bend angle
//! is taken from the base centre to the highest point. That point is only the
//! physical tip when the actuator does not curl over, so the measurement flags
//! frames where the top is flat or ambiguous.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SilhouetteError {
    #[error("image is empty")]
    EmptyImage,
    #[error("pixel buffer has {got} bytes, expected {expected}")]
    BufferSize { expected: usize, got: usize },
    #[error("no foreground pixels above threshold {0}")]
    NoForeground(u8),
    #[error("base and tip coincide")]
    CoincidentBaseTip,
    #[error("no frames supplied")]
    NoFrames,
    #[error("alpha must be positive and finite (got {0})")]
    BadAlpha(f64),
    #[error("structuring element size must be odd (got {0})")]
    BadKernel(usize),
    #[error("frame {index}: {source}")]
    Frame { index: usize, source: alloc::boxed::Box<SilhouetteError> },
}

/// Row-major 8-bit image; y grows downward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, SilhouetteError> {
        if width == 0 || height == 0 {
            return Err(SilhouetteError::EmptyImage);
        }
        if pixels.len() != width * height {
            return Err(SilhouetteError::BufferSize { expected: width * height, got: pixels.len() });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, SilhouetteError> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    /// Paints the rectangle `[x0, x0 + w) × [y0, y0 + h)`, clipped to the frame.
    pub fn fill_rect(&mut self, x0: usize, y0: usize, w: usize, h: usize, v: u8) {
        for y in y0..(y0 + h).min(self.height) {
            for x in x0..(x0 + w).min(self.width) {
                self.set(x, y, v);
            }
        }
    }
}

/// Extraction settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractConfig {
    /// Pixels strictly above this value are foreground.
    pub threshold: u8,
    /// Side of the square opening element; 1 disables filtering.
    pub kernel: usize,
    pub iterations: usize,
    /// Horizontal spread of the top rows, in px, beyond which the tip is
    /// flagged as ambiguous.
    pub tip_tolerance_px: usize,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self { threshold: 127, kernel: 3, iterations: 1, tip_tolerance_px: 2 }
    }
}

impl ExtractConfig {
    pub fn with_threshold(threshold: u8) -> Self {
        Self { threshold, ..Self::default() }
    }
}

/// Geometry of the selected component, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameMeasurement {
    pub left: usize,
    pub top: usize,
    pub w: usize,
    pub h: usize,
    pub area: usize,
    /// Midpoint of the component's bottom row span.
    pub base: Vec2,
    /// Leftmost of the highest pixels.
    pub tip: Vec2,
    /// Several pixels compete for the highest point.
    pub tip_ambiguous: bool,
}

fn binarize(img: &GrayImage, threshold: u8) -> Vec<bool> {
    img.pixels.iter().map(|&p| p > threshold).collect()
}

/// One pass of min (erode) or max (dilate) over in-bounds neighbours.
fn morph(mask: &[bool], w: usize, h: usize, radius: usize, erode: bool) -> Vec<bool> {
    // Separable: rows then columns.
    let pass = |src: &[bool], horizontal: bool| -> Vec<bool> {
        let mut out = vec![false; src.len()];
        for y in 0..h {
            for x in 0..w {
                let (c, n) = if horizontal { (x, w) } else { (y, h) };
                let lo = c.saturating_sub(radius);
                let hi = (c + radius).min(n - 1);
                let mut acc = erode;
                for t in lo..=hi {
                    let v = if horizontal { src[y * w + t] } else { src[t * w + x] };
                    if erode {
                        acc &= v;
                    } else {
                        acc |= v;
                    }
                }
                out[y * w + x] = acc;
            }
        }
        out
    };
    pass(&pass(mask, true), false)
}

fn open(mask: Vec<bool>, w: usize, h: usize, cfg: &ExtractConfig) -> Vec<bool> {
    let radius = cfg.kernel / 2;
    if radius == 0 {
        return mask;
    }
    let mut m = mask;
    for _ in 0..cfg.iterations {
        m = morph(&m, w, h, radius, true);
    }
    for _ in 0..cfg.iterations {
        m = morph(&m, w, h, radius, false);
    }
    m
}

/// Pixel indices of the largest 4-connected component; raster order breaks ties.
fn largest_component(mask: &[bool], w: usize, h: usize) -> Vec<usize> {
    let mut seen = vec![false; mask.len()];
    let mut best: Vec<usize> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            comp.push(i);
            let (x, y) = (i % w, i / w);
            let mut visit = |j: usize| {
                if mask[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < w {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - w);
            }
            if y + 1 < h {
                visit(i + w);
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}

/// Thresholds, filters and measures the largest region of `img`.
pub fn extract_region(img: &GrayImage, cfg: &ExtractConfig) -> Result<FrameMeasurement, SilhouetteError> {
    if cfg.kernel.is_multiple_of(2) {
        return Err(SilhouetteError::BadKernel(cfg.kernel));
    }
    let (w, h) = (img.width, img.height);
    let mask = open(binarize(img, cfg.threshold), w, h, cfg);
    let comp = largest_component(&mask, w, h);
    if comp.is_empty() {
        return Err(SilhouetteError::NoForeground(cfg.threshold));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (usize::MAX, 0, usize::MAX, 0);
    for &i in &comp {
        let (x, y) = (i % w, i / w);
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (mut bl, mut br) = (usize::MAX, 0);
    let (mut tl, mut tr) = (usize::MAX, 0);
    let (mut band_l, mut band_r) = (usize::MAX, 0);
    for &i in &comp {
        let (x, y) = (i % w, i / w);
        if y == y1 {
            bl = bl.min(x);
            br = br.max(x);
        }
        if y == y0 {
            tl = tl.min(x);
            tr = tr.max(x);
        }
        if y <= y0 + cfg.tip_tolerance_px {
            band_l = band_l.min(x);
            band_r = band_r.max(x);
        }
    }
    Ok(FrameMeasurement {
        left: x0,
        top: y0,
        w: x1 - x0 + 1,
        h: y1 - y0 + 1,
        area: comp.len(),
        base: Vec2::new(0.5 * (bl + br) as f64, y1 as f64),
        tip: Vec2::new(tl as f64, y0 as f64),
        tip_ambiguous: tr > tl || band_r - band_l > cfg.tip_tolerance_px,
    })
}

/// `|atan2(x_tip − x_base, y_base − y_tip)|` in degrees.
pub fn bend_angle(m: &FrameMeasurement) -> Result<f64, SilhouetteError> {
    if m.base == m.tip {
        return Err(SilhouetteError::CoincidentBaseTip);
    }
    Ok(math::to_degrees(math::atan2(m.tip.x - m.base.x, m.base.y - m.tip.y)).abs())
}

/// One frame of a deformation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationRow {
    pub h_px: usize,
    pub w_px: usize,
    /// Extension relative to the shortest frame, in mm.
    pub dl_mm: f64,
    /// Radial growth relative to the narrowest frame, in mm.
    pub dr_mm: f64,
    /// `None` when base and tip coincide.
    pub theta_deg: Option<f64>,
    pub tip_ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationSeries {
    pub alpha: f64,
    pub h_min: usize,
    pub w_min: usize,
    pub rows: Vec<DeformationRow>,
}

/// Minima-referenced extension and radial growth over a run.
pub fn deformation_metrics(frames: &[FrameMeasurement], alpha: f64) -> Result<DeformationSeries, SilhouetteError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(SilhouetteError::BadAlpha(alpha));
    }
    let h_min = frames.iter().map(|f| f.h).min().ok_or(SilhouetteError::NoFrames)?;
    let w_min = frames.iter().map(|f| f.w).min().ok_or(SilhouetteError::NoFrames)?;
    let rows = frames
        .iter()
        .map(|f| DeformationRow {
            h_px: f.h,
            w_px: f.w,
            dl_mm: alpha * (f.h - h_min) as f64,
            dr_mm: alpha * (f.w - w_min) as f64,
            theta_deg: bend_angle(f).ok(),
            tip_ambiguous: f.tip_ambiguous,
        })
        .collect();
    Ok(DeformationSeries { alpha, h_min, w_min, rows })
}

/// Measures every frame, naming the first frame that fails.
pub fn measure_frames(frames: &[GrayImage], cfg: &ExtractConfig) -> Result<Vec<FrameMeasurement>, SilhouetteError> {
    if frames.is_empty() {
        return Err(SilhouetteError::NoFrames);
    }
    frames
        .iter()
        .enumerate()
        .map(|(index, f)| {
            extract_region(f, cfg).map_err(|e| SilhouetteError::Frame { index, source: alloc::boxed::Box::new(e) })
        })
        .collect()
}
