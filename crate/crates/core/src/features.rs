//! Band and sub-segment decomposition of the object mask into fuzzy inputs.
//!
//! The image is cut into five horizontal bands, numbered from the bottom.
//! Each band is split into six sub-segments: the four quadrants
//! (1 upper-left, 2 upper-right, 3 lower-left, 4 lower-right), the upper
//! half (5) and the lower half (6). Quadrant coverage becomes `x1..x4`;
//! the column centroid of the pipe in the upper and lower halves becomes
//! `x5` (far end) and `x6` (near end).

use thiserror::Error;

use crate::imgproc::{
    label_regions, largest_region, remove_small_regions, threshold_band, BinaryImage, GrayImage,
    ThresholdBand,
};

pub const BAND_COUNT: usize = 5;
/// Lower edge of every input universe.
pub const UNIVERSE_MIN: f64 = 0.1;
pub const UNIVERSE_MAX: f64 = 1.0;
/// Universe midpoint, used for "centered" and empty sub-segments.
pub const NEUTRAL: f64 = 0.55;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatureError {
    #[error("image {width}x{height} is too small to split into bands (need at least 2x5)")]
    ImageTooSmall { width: usize, height: usize },
    #[error("no-object: no region survives noise removal")]
    NoObject,
}

/// Half-open pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

impl Rect {
    pub fn pixel_count(&self) -> usize {
        (self.bottom - self.top) * (self.right - self.left)
    }

    fn count_in(&self, obj: &BinaryImage) -> usize {
        (self.top..self.bottom)
            .map(|r| (self.left..self.right).filter(|&c| obj.get(r, c)).count())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandLayout {
    /// 1 is the bottom band.
    pub band_index: usize,
    /// Inclusive `(first_row, last_row)`.
    pub rows: (usize, usize),
    /// Sub-segments 1..=6 stored at indices 0..6.
    pub sub_segments: [Rect; 6],
    pub width: usize,
}

impl BandLayout {
    pub fn sub_segment(&self, n: usize) -> Rect {
        self.sub_segments[n - 1]
    }

    pub fn row_count(&self) -> usize {
        self.rows.1 - self.rows.0 + 1
    }
}

/// Five bands ordered bottom to top. The top band absorbs leftover rows.
pub fn split_bands(width: usize, height: usize) -> Result<Vec<BandLayout>, FeatureError> {
    if height < BAND_COUNT || width < 2 {
        return Err(FeatureError::ImageTooSmall { width, height });
    }
    let base = height / BAND_COUNT;
    let mid_col = width / 2;
    let bands = (1..=BAND_COUNT)
        .map(|band_index| {
            let bottom = height - (band_index - 1) * base;
            let top = if band_index == BAND_COUNT {
                0
            } else {
                bottom - base
            };
            let mid_row = top + (bottom - top) / 2;
            let rect = |top, bottom, left, right| Rect {
                top,
                bottom,
                left,
                right,
            };
            BandLayout {
                band_index,
                rows: (top, bottom - 1),
                sub_segments: [
                    rect(top, mid_row, 0, mid_col),
                    rect(top, mid_row, mid_col, width),
                    rect(mid_row, bottom, 0, mid_col),
                    rect(mid_row, bottom, mid_col, width),
                    rect(top, mid_row, 0, width),
                    rect(mid_row, bottom, 0, width),
                ],
                width,
            }
        })
        .collect();
    Ok(bands)
}

/// Maps a fraction in `[0, 1]` onto the input universe `[0.1, 1.0]`.
pub fn to_universe(fraction: f64) -> f64 {
    UNIVERSE_MIN + (UNIVERSE_MAX - UNIVERSE_MIN) * fraction
}

/// Coverage `(u1, u2, u3, u4)` of the four quadrants.
pub fn coverage_fractions(obj: &BinaryImage, band: &BandLayout) -> [f64; 4] {
    let mut out = [UNIVERSE_MIN; 4];
    for (q, u) in out.iter_mut().enumerate() {
        let rect = band.sub_segments[q];
        let total = rect.pixel_count();
        if total > 0 {
            *u = to_universe(rect.count_in(obj) as f64 / total as f64);
        }
    }
    out
}

fn centroid_location(obj: &BinaryImage, rect: Rect, width: usize) -> f64 {
    let mut count = 0usize;
    let mut col_sum = 0.0;
    for r in rect.top..rect.bottom {
        for c in rect.left..rect.right {
            if obj.get(r, c) {
                count += 1;
                col_sum += c as f64 + 0.5;
            }
        }
    }
    if count == 0 {
        NEUTRAL
    } else {
        to_universe(col_sum / count as f64 / width as f64)
    }
}

/// `(x5, x6)`: pipe column centroid in the upper and lower halves of the band.
pub fn line_locations(obj: &BinaryImage, band: &BandLayout) -> (f64, f64) {
    (
        centroid_location(obj, band.sub_segment(5), band.width),
        centroid_location(obj, band.sub_segment(6), band.width),
    )
}

/// The six fuzzy inputs for one band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub band_index: usize,
    pub values: [f64; 6],
}

impl FeatureVector {
    pub fn new(band_index: usize, values: [f64; 6]) -> Self {
        Self { band_index, values }
    }

    /// A centered, empty-quadrant vector.
    pub fn neutral(band_index: usize) -> Self {
        Self::new(
            band_index,
            [UNIVERSE_MIN, UNIVERSE_MIN, UNIVERSE_MIN, UNIVERSE_MIN, NEUTRAL, NEUTRAL],
        )
    }

    /// Input `n` in `1..=6`.
    pub fn x(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    /// Signed lateral offset of the far end from the image center.
    pub fn delta_x(&self) -> f64 {
        self.values[4] - NEUTRAL
    }

    /// Left-right mirror image of the inputs.
    pub fn mirrored(&self) -> Self {
        let v = self.values;
        let flip = UNIVERSE_MIN + UNIVERSE_MAX;
        Self::new(self.band_index, [v[1], v[0], v[3], v[2], flip - v[4], flip - v[5]])
    }

    pub fn in_universe(&self) -> bool {
        self.values
            .iter()
            .all(|v| (UNIVERSE_MIN..=UNIVERSE_MAX).contains(v))
    }
}

/// Feature vectors for every band of an object mask, bottom band first.
pub fn features_from_mask(obj: &BinaryImage) -> Result<Vec<FeatureVector>, FeatureError> {
    let bands = split_bands(obj.width(), obj.height())?;
    Ok(bands
        .iter()
        .map(|band| {
            let [u1, u2, u3, u4] = coverage_fractions(obj, band);
            let (x5, x6) = line_locations(obj, band);
            FeatureVector::new(band.band_index, [u1, u2, u3, u4, x5, x6])
        })
        .collect())
}

/// Segments the pipe from a gray image and returns its object mask.
pub fn object_mask(
    img: &GrayImage,
    band: ThresholdBand,
    min_area: usize,
) -> Result<BinaryImage, FeatureError> {
    let labels = remove_small_regions(&label_regions(&threshold_band(img, band)), min_area);
    let region = largest_region(&labels).ok_or(FeatureError::NoObject)?;
    Ok(labels.mask(region.label))
}

/// Full chain from gray image to five feature vectors, bottom band first.
pub fn extract_features(
    img: &GrayImage,
    band: ThresholdBand,
    min_area: usize,
) -> Result<Vec<FeatureVector>, FeatureError> {
    split_bands(img.width(), img.height())?;
    features_from_mask(&object_mask(img, band, min_area)?)
}
