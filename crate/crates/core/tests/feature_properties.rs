use pipetrack_core::features::{
    coverage_fractions, extract_features, features_from_mask, split_bands, FeatureError,
    FeatureVector, NEUTRAL,
};
use pipetrack_core::imgproc::{BinaryImage, GrayImage, ThresholdBand};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mask(seed: u64, w: usize, h: usize, density: f64) -> BinaryImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BinaryImage::from_fn(w, h, |_, _| rng.random_bool(density)).unwrap()
}

#[test]
fn bands_partition_the_rows() {
    for (w, h) in [(320, 240), (7, 5), (10, 13), (2, 99)] {
        let bands = split_bands(w, h).unwrap();
        assert_eq!(bands.len(), 5);
        assert_eq!(bands[0].rows.1, h - 1);
        assert_eq!(bands[4].rows.0, 0);
        for pair in bands.windows(2) {
            assert_eq!(pair[1].rows.1 + 1, pair[0].rows.0);
        }
        for b in &bands[..4] {
            assert_eq!(b.row_count(), h / 5);
        }
    }
    assert_eq!(
        split_bands(10, 4),
        Err(FeatureError::ImageTooSmall { width: 10, height: 4 })
    );
}

#[test]
fn vertical_line_location_oracle() {
    let (w, h) = (40, 20);
    for col in 0..w {
        let mask = BinaryImage::from_fn(w, h, |_, c| c == col).unwrap();
        let expected = 0.1 + 0.9 * (col as f64 + 0.5) / w as f64;
        for fv in features_from_mask(&mask).unwrap() {
            assert!((fv.x(5) - expected).abs() < 1e-12);
            assert!((fv.x(6) - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn empty_band_is_neutral() {
    // pipe only in the bottom band
    let mask = BinaryImage::from_fn(20, 20, |r, c| r >= 16 && c < 4).unwrap();
    let fvs = features_from_mask(&mask).unwrap();
    assert!(fvs[0].x(5) < NEUTRAL);
    for fv in &fvs[1..] {
        assert_eq!(*fv, FeatureVector::neutral(fv.band_index));
    }
}

#[test]
fn full_band_saturates_coverage() {
    let mask = BinaryImage::from_fn(16, 10, |_, _| true).unwrap();
    for fv in features_from_mask(&mask).unwrap() {
        for n in 1..=4 {
            assert!((fv.x(n) - 1.0).abs() < 1e-12);
        }
        assert!((fv.x(5) - NEUTRAL).abs() < 1e-12);
    }
}

#[test]
fn centered_synthetic_pipe_reads_as_centered() {
    let (w, h) = (64, 50);
    let pixels = (0..w * h)
        .map(|i| if (28..36).contains(&(i % w)) { 230 } else { 60 })
        .collect();
    let img = GrayImage::new(w, h, pixels).unwrap();
    for fv in extract_features(&img, ThresholdBand::default(), 25).unwrap() {
        assert!((fv.x(5) - NEUTRAL).abs() < 1e-12);
        assert!((fv.x(1) - fv.x(2)).abs() < 1e-12);
    }
}

#[test]
fn missing_object_is_reported() {
    let img = GrayImage::filled(32, 20, 40).unwrap();
    assert_eq!(
        extract_features(&img, ThresholdBand::default(), 25),
        Err(FeatureError::NoObject)
    );
}

proptest! {
    #[test]
    fn features_stay_in_universe(
        w in 2usize..40,
        h in 5usize..40,
        density in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        for fv in features_from_mask(&random_mask(seed, w, h, density)).unwrap() {
            prop_assert!(fv.in_universe(), "{:?}", fv);
        }
    }

    #[test]
    fn flipping_the_mask_mirrors_the_features(
        half in 1usize..20,
        h in 5usize..40,
        density in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let mask = random_mask(seed, 2 * half, h, density);
        let direct = features_from_mask(&mask.flip_horizontal()).unwrap();
        for (a, b) in direct.iter().zip(features_from_mask(&mask).unwrap()) {
            let m = b.mirrored();
            for n in 0..6 {
                prop_assert!((a.values[n] - m.values[n]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrant_coverage_conserves_band_area(
        w in 2usize..40,
        h in 5usize..40,
        density in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let mask = random_mask(seed, w, h, density);
        for band in split_bands(w, h).unwrap() {
            let u = coverage_fractions(&mask, &band);
            let recovered: f64 = (0..4)
                .map(|q| (u[q] - 0.1) / 0.9 * band.sub_segments[q].pixel_count() as f64)
                .sum();
            let direct = (band.rows.0..=band.rows.1)
                .map(|r| (0..w).filter(|&c| mask.get(r, c)).count())
                .sum::<usize>();
            prop_assert!((recovered - direct as f64).abs() < 1e-9);
        }
    }
}
