use super::SimError;

/// Working area and the pipeline laid on it. Coordinates in cm; `x` across
/// the envelope, `y` along the direction of travel.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    /// `(width_x, depth_y)`.
    pub envelope: (f64, f64),
    /// Pipeline centerline, strictly increasing in `y`. Empty means no pipe.
    pub pipeline: Vec<(f64, f64)>,
    pub pipe_width: f64,
    pub seed: u64,
}

impl Default for World {
    /// 150 x 200 cm envelope with the pipeline stations 47.5 / 58.5 / 69.6 /
    /// 80.8 / 91.9 cm spaced one 22.5 cm step apart, led in by one
    /// extrapolated station under the start pose.
    fn default() -> Self {
        let xs = [103.0, 91.9, 80.8, 69.6, 58.5, 47.5];
        let pipeline = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, 20.0 + 22.5 * i as f64))
            .collect();
        Self {
            envelope: (150.0, 200.0),
            pipeline,
            pipe_width: 10.0,
            seed: 1,
        }
    }
}

impl World {
    pub fn validate(&self) -> Result<(), SimError> {
        let (w, d) = self.envelope;
        if !(w > 0.0 && d > 0.0) {
            return Err(SimError::InvalidWorld(format!("envelope {w} x {d} must be positive")));
        }
        if !(self.pipe_width > 0.0) {
            return Err(SimError::InvalidWorld(format!(
                "pipe width {} must be positive",
                self.pipe_width
            )));
        }
        if self.pipeline.len() == 1 {
            return Err(SimError::InvalidWorld("pipeline needs at least 2 waypoints".into()));
        }
        for &(x, y) in &self.pipeline {
            if !self.inside(x, y) {
                return Err(SimError::InvalidWorld(format!(
                    "waypoint ({x}, {y}) lies outside the envelope"
                )));
            }
        }
        if self.pipeline.windows(2).any(|p| p[1].1 <= p[0].1) {
            return Err(SimError::InvalidWorld("waypoint y values must strictly increase".into()));
        }
        Ok(())
    }

    pub fn inside(&self, x: f64, y: f64) -> bool {
        (0.0..=self.envelope.0).contains(&x) && (0.0..=self.envelope.1).contains(&y)
    }

    /// `y` of the last waypoint, or the envelope depth when there is no pipe.
    pub fn far_end_y(&self) -> f64 {
        self.pipeline.last().map_or(self.envelope.1, |p| p.1)
    }

    /// Pipeline `x` at a given `y` by linear interpolation between waypoints.
    pub fn pipeline_x_at(&self, y: f64) -> Option<f64> {
        self.pipeline.windows(2).find_map(|seg| {
            let ((x0, y0), (x1, y1)) = (seg[0], seg[1]);
            (y0..=y1).contains(&y).then(|| {
                let t = (y - y0) / (y1 - y0);
                x0 * (1.0 - t) + x1 * t
            })
        })
    }

    /// Distance from a seabed point to the pipeline centerline.
    pub fn distance_to_pipe(&self, x: f64, y: f64) -> f64 {
        self.pipeline
            .windows(2)
            .map(|seg| segment_distance((x, y), seg[0], seg[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Reflection about the envelope's vertical midline.
    pub fn mirrored(&self) -> Self {
        let w = self.envelope.0;
        Self {
            pipeline: self.pipeline.iter().map(|&(x, y)| (w - x, y)).collect(),
            ..self.clone()
        }
    }
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}
