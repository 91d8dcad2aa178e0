//! Forward-looking pinhole camera over a flat seabed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AuvState, SimError, World};
use crate::imgproc::GrayImage;

#[derive(Debug, Clone, PartialEq)]
pub struct CameraModel {
    /// cm above the seabed.
    pub height: f64,
    /// Degrees below the horizon.
    pub tilt_down: f64,
    /// Horizontal field of view, degrees.
    pub horizontal_fov: f64,
    pub image_width: usize,
    pub image_height: usize,
    pub pipe_intensity: u8,
    pub seabed_intensity: u8,
    /// Additive uniform noise amplitude in intensity units.
    pub noise_amplitude: u8,
    /// Speckle blobs per pixel.
    pub speckle_density: f64,
}

impl Default for CameraModel {
    fn default() -> Self {
        Self {
            height: 40.0,
            tilt_down: 30.0,
            horizontal_fov: 60.0,
            image_width: 320,
            image_height: 240,
            pipe_intensity: 220,
            seabed_intensity: 80,
            noise_amplitude: 30,
            speckle_density: 0.005,
        }
    }
}

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Camera frame at a vehicle pose: right, down and optical axis in world
/// coordinates (z up).
struct Frame {
    origin: Vec3,
    right: Vec3,
    down: Vec3,
    forward: Vec3,
    focal: f64,
    cx: f64,
    cy: f64,
}

impl CameraModel {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidCamera(m));
        if !(self.tilt_down > 0.0 && self.tilt_down < 90.0) {
            return bad(format!("tilt {} must lie in (0, 90)", self.tilt_down));
        }
        if !(self.horizontal_fov > 10.0 && self.horizontal_fov < 170.0) {
            return bad(format!("fov {} must lie in (10, 170)", self.horizontal_fov));
        }
        if !(self.height > 0.0) {
            return bad(format!("height {} must be positive", self.height));
        }
        if self.image_width < 2 || self.image_height < 5 {
            return bad(format!(
                "image {}x{} is too small",
                self.image_width, self.image_height
            ));
        }
        if !(0.0..=1.0).contains(&self.speckle_density) {
            return bad(format!("speckle density {} must lie in [0, 1]", self.speckle_density));
        }
        Ok(())
    }

    fn frame(&self, pose: &AuvState) -> Frame {
        let (dx, dy) = pose.direction();
        let (st, ct) = self.tilt_down.to_radians().sin_cos();
        Frame {
            origin: [pose.x, pose.y, self.height],
            right: [dy, -dx, 0.0],
            down: [-st * dx, -st * dy, -ct],
            forward: [ct * dx, ct * dy, -st],
            focal: 0.5 * self.image_width as f64 / (0.5 * self.horizontal_fov).to_radians().tan(),
            cx: 0.5 * self.image_width as f64,
            cy: 0.5 * self.image_height as f64,
        }
    }

    /// Image coordinates `(u, v)` of a world point, `None` behind the camera.
    /// Pixel `(col, row)` spans `[col, col + 1) x [row, row + 1)`.
    pub fn project(&self, pose: &AuvState, point: Vec3) -> Option<(f64, f64)> {
        let f = self.frame(pose);
        let q = [
            point[0] - f.origin[0],
            point[1] - f.origin[1],
            point[2] - f.origin[2],
        ];
        let z = dot(q, f.forward);
        (z > 1e-9).then(|| (f.cx + f.focal * dot(q, f.right) / z, f.cy + f.focal * dot(q, f.down) / z))
    }

    /// Seabed point seen through image coordinates `(u, v)`, `None` at or
    /// above the horizon.
    pub fn ground_point(&self, pose: &AuvState, u: f64, v: f64) -> Option<(f64, f64)> {
        let f = self.frame(pose);
        let (a, b) = ((u - f.cx) / f.focal, (v - f.cy) / f.focal);
        let dir = [
            f.forward[0] + a * f.right[0] + b * f.down[0],
            f.forward[1] + a * f.right[1] + b * f.down[1],
            f.forward[2] + a * f.right[2] + b * f.down[2],
        ];
        (dir[2] < -1e-12).then(|| {
            let s = -f.origin[2] / dir[2];
            (f.origin[0] + s * dir[0], f.origin[1] + s * dir[1])
        })
    }
}

fn noise_seed(world_seed: u64, capture: u64) -> u64 {
    world_seed ^ capture.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Renders the seabed and pipeline seen from `auv`. Noise and speckle come
/// from a generator seeded by `(world.seed, capture)`.
pub fn render_view(world: &World, auv: &AuvState, cam: &CameraModel, capture: u64) -> GrayImage {
    let (w, h) = (cam.image_width, cam.image_height);
    let half_width = 0.5 * world.pipe_width;
    let mut img = GrayImage::filled(w, h, cam.seabed_intensity).expect("validated camera");
    if !world.pipeline.is_empty() {
        for row in 0..h {
            for col in 0..w {
                let hit = cam
                    .ground_point(auv, col as f64 + 0.5, row as f64 + 0.5)
                    .is_some_and(|(gx, gy)| world.distance_to_pipe(gx, gy) <= half_width);
                if hit {
                    img.set(row, col, cam.pipe_intensity);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(noise_seed(world.seed, capture));
    let speckles = (cam.speckle_density * (w * h) as f64).round() as usize;
    for _ in 0..speckles {
        let side = rng.random_range(1..=3usize);
        let top = rng.random_range(0..h);
        let left = rng.random_range(0..w);
        for r in top..(top + side).min(h) {
            for c in left..(left + side).min(w) {
                img.set(r, c, cam.pipe_intensity);
            }
        }
    }
    if cam.noise_amplitude > 0 {
        let amp = i16::from(cam.noise_amplitude);
        for row in 0..h {
            for col in 0..w {
                let v = i16::from(img.get(row, col)) + rng.random_range(-amp..=amp);
                img.set(row, col, v.clamp(0, 255) as u8);
            }
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose() -> AuvState {
        AuvState::new(75.0, 20.0, 90.0)
    }

    #[test]
    fn optical_axis_projects_to_center() {
        let cam = CameraModel::default();
        // optical axis meets the seabed height / tan(tilt) ahead
        let ahead = cam.height / cam.tilt_down.to_radians().tan();
        let (u, v) = cam.project(&pose(), [75.0, 20.0 + ahead, 0.0]).unwrap();
        assert!((u - 160.0).abs() < 1e-9 && (v - 120.0).abs() < 1e-9);
        let (gx, gy) = cam.ground_point(&pose(), 160.0, 120.0).unwrap();
        assert!((gx - 75.0).abs() < 1e-9 && (gy - 20.0 - ahead).abs() < 1e-9);
    }

    #[test]
    fn projection_and_ray_cast_agree() {
        let cam = CameraModel::default();
        let p = AuvState::new(60.0, 30.0, 75.0);
        for (u, v) in [(10.5, 200.5), (300.0, 130.0), (160.0, 239.0)] {
            let (gx, gy) = cam.ground_point(&p, u, v).unwrap();
            let (pu, pv) = cam.project(&p, [gx, gy, 0.0]).unwrap();
            assert!((pu - u).abs() < 1e-6 && (pv - v).abs() < 1e-6);
        }
    }

    #[test]
    fn heading_right_of_travel_maps_to_right_of_image() {
        let cam = CameraModel::default();
        let (u, _) = cam.project(&pose(), [85.0, 100.0, 0.0]).unwrap();
        assert!(u > 160.0);
    }

    #[test]
    fn pipe_behind_camera_renders_background() {
        let world = World {
            pipeline: vec![(75.0, 0.0), (75.0, 10.0)],
            ..World::default()
        };
        let cam = CameraModel {
            noise_amplitude: 0,
            speckle_density: 0.0,
            ..CameraModel::default()
        };
        let img = render_view(&world, &pose(), &cam, 0);
        assert!(img.pixels().iter().all(|&p| p == cam.seabed_intensity));
        let below = cam.project(&pose(), [75.0, 5.0, 0.0]);
        assert!(below.is_none_or(|(_, v)| v > cam.image_height as f64));
    }

    #[test]
    fn rendering_is_deterministic() {
        let world = World::default();
        let cam = CameraModel::default();
        let a = render_view(&world, &AuvState::new(103.0, 20.0, 90.0), &cam, 3);
        let b = render_view(&world, &AuvState::new(103.0, 20.0, 90.0), &cam, 3);
        assert_eq!(a, b);
        let c = render_view(&world, &AuvState::new(103.0, 20.0, 90.0), &cam, 4);
        assert_ne!(a, c);
    }

    #[test]
    fn camera_validation() {
        let cam = CameraModel {
            tilt_down: 90.0,
            ..CameraModel::default()
        };
        assert!(cam.validate().is_err());
        let cam = CameraModel {
            horizontal_fov: 5.0,
            ..CameraModel::default()
        };
        assert!(cam.validate().is_err());
        assert!(CameraModel::default().validate().is_ok());
    }
}
