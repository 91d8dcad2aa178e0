//! Raster types and the low-level segmentation chain.
//!
//! The chain runs gray conversion, band thresholding, 8-connected labeling,
//! minimum-area noise removal and largest-region selection. Everything here is
//! a pure function of its inputs.

mod label;
pub mod pnm;

pub use label::{label_regions, largest_region, remove_small_regions, LabelMap, Region};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageError {
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("pixel buffer holds {actual} values, expected {expected}")]
    BufferSize { expected: usize, actual: usize },
    #[error("binary pixel value {0} is not 0 or 1")]
    NotBinary(u8),
    #[error("invalid threshold band: t1 ({t1}) must be below t2 ({t2})")]
    InvalidThreshold { t1: u8, t2: u8 },
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<(), ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::InvalidDimensions { width, height });
    }
    let expected = width * height;
    if len != expected {
        return Err(ImageError::BufferSize {
            expected,
            actual: len,
        });
    }
    Ok(())
}

/// 8-bit RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self, ImageError> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> [u8; 3] {
        self.pixels[row * self.width + col]
    }
}

/// 8-bit intensity raster, row-major. Holds `F[i, j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image filled with one intensity.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
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

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }
}

/// Raster whose pixels are exactly 0 or 1. Holds `B[i, j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        check_dims(width, height, pixels.len())?;
        if let Some(&bad) = pixels.iter().find(|&&p| p > 1) {
            return Err(ImageError::NotBinary(bad));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self, ImageError> {
        Self::new(width, height, vec![0; width * height])
    }

    /// Builds an image from a predicate over (row, col).
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, ImageError> {
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(u8::from(f(row, col)));
            }
        }
        Self::new(width, height, pixels)
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

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.width + col] == 1
    }

    pub fn set(&mut self, row: usize, col: usize, on: bool) {
        self.pixels[row * self.width + col] = u8::from(on);
    }

    /// Mirror about the vertical axis.
    pub fn flip_horizontal(&self) -> Self {
        Self::from_fn(self.width, self.height, |r, c| self.get(r, self.width - 1 - c))
            .expect("dimensions preserved")
    }

    /// Maps foreground to 255 for display or PGM output.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| p * 255).collect(),
        }
    }
}

/// Intensity band `(t1, t2]` selecting the object of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdBand {
    t1: u8,
    t2: u8,
}

impl ThresholdBand {
    pub fn new(t1: u8, t2: u8) -> Result<Self, ImageError> {
        if t1 >= t2 {
            return Err(ImageError::InvalidThreshold { t1, t2 });
        }
        Ok(Self { t1, t2 })
    }

    pub fn t1(&self) -> u8 {
        self.t1
    }

    pub fn t2(&self) -> u8 {
        self.t2
    }

    pub fn contains(&self, value: u8) -> bool {
        self.t1 < value && value <= self.t2
    }
}

impl Default for ThresholdBand {
    fn default() -> Self {
        Self { t1: 180, t2: 255 }
    }
}

/// BT.601 luma, rounded to nearest.
pub fn rgb_to_gray(img: &RgbImage) -> GrayImage {
    let pixels = img
        .pixels
        .iter()
        .map(|&[r, g, b]| {
            let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
            y.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage {
        width: img.width,
        height: img.height,
        pixels,
    }
}

pub fn threshold_band(img: &GrayImage, band: ThresholdBand) -> BinaryImage {
    BinaryImage {
        width: img.width,
        height: img.height,
        pixels: img.pixels.iter().map(|&f| u8::from(band.contains(f))).collect(),
    }
}

/// Number of foreground pixels.
pub fn area(b: &BinaryImage) -> usize {
    b.pixels.iter().filter(|&&p| p == 1).count()
}
