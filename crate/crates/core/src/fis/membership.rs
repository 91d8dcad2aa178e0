use std::fmt;

use super::FisError;

/// `exp(-(x - c)^2 / (2 sigma^2))`.
pub fn eval_gaussian(x: f64, sigma: f64, c: f64) -> Result<f64, FisError> {
    if !(sigma > 0.0) {
        return Err(FisError::InvalidParameter(format!(
            "gaussian sigma must be positive, got {sigma}"
        )));
    }
    Ok(gaussian(x, sigma, c))
}

fn gaussian(x: f64, sigma: f64, c: f64) -> f64 {
    let d = x - c;
    (-(d * d) / (2.0 * sigma * sigma)).exp()
}

/// Standard S-curve rising from 0 at `a` to 1 at `c`, with its inflection at
/// `b = (a + c) / 2`. The upper branch is written around `c` so the curve is
/// continuous at `b`.
pub fn eval_s(x: f64, a: f64, b: f64, c: f64) -> Result<f64, FisError> {
    if !(a < c) {
        return Err(FisError::InvalidParameter(format!(
            "S-function needs a < c, got a = {a}, c = {c}"
        )));
    }
    let mid = 0.5 * (a + c);
    if (b - mid).abs() > 1e-12 * (1.0 + mid.abs()) {
        return Err(FisError::InvalidParameter(format!(
            "S-function needs b = (a + c) / 2 = {mid}, got {b}"
        )));
    }
    Ok(s_curve(x, a, c))
}

fn s_curve(x: f64, a: f64, c: f64) -> f64 {
    let mid = 0.5 * (a + c);
    let span = c - a;
    if x <= a {
        0.0
    } else if x <= mid {
        let t = (x - a) / span;
        2.0 * t * t
    } else if x <= c {
        let t = (x - c) / span;
        1.0 - 2.0 * t * t
    } else {
        1.0
    }
}

/// Bell built from two S-curves, peak 1 at `c`, feet at `c - b` and `c + b`.
pub fn eval_pi(x: f64, b: f64, c: f64) -> Result<f64, FisError> {
    if !(b > 0.0) {
        return Err(FisError::InvalidParameter(format!(
            "pi half-width must be positive, got {b}"
        )));
    }
    Ok(pi_curve(x, b, c))
}

fn pi_curve(x: f64, b: f64, c: f64) -> f64 {
    if x <= c {
        s_curve(x, c - b, c)
    } else {
        1.0 - s_curve(x, c, c + b)
    }
}

/// Shape of one fuzzy term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Gaussian { sigma: f64, c: f64 },
    Pi { b: f64, c: f64 },
}

impl MembershipFunction {
    pub fn gaussian(sigma: f64, c: f64) -> Result<Self, FisError> {
        eval_gaussian(c, sigma, c)?;
        Ok(Self::Gaussian { sigma, c })
    }

    pub fn pi(b: f64, c: f64) -> Result<Self, FisError> {
        eval_pi(c, b, c)?;
        Ok(Self::Pi { b, c })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Gaussian { sigma, c } => gaussian(x, sigma, c),
            Self::Pi { b, c } => pi_curve(x, b, c),
        }
    }

    pub fn center(&self) -> f64 {
        match *self {
            Self::Gaussian { c, .. } | Self::Pi { c, .. } => c,
        }
    }

    /// `sigma` for Gaussians, `b` for pi shapes.
    pub fn width(&self) -> f64 {
        match *self {
            Self::Gaussian { sigma, .. } => sigma,
            Self::Pi { b, .. } => b,
        }
    }

    pub fn with_center(self, c: f64) -> Self {
        match self {
            Self::Gaussian { sigma, .. } => Self::Gaussian { sigma, c },
            Self::Pi { b, .. } => Self::Pi { b, c },
        }
    }

    pub fn with_width(self, w: f64) -> Self {
        match self {
            Self::Gaussian { c, .. } => Self::Gaussian { sigma: w, c },
            Self::Pi { c, .. } => Self::Pi { b: w, c },
        }
    }

    pub(crate) fn validate(&self) -> Result<(), FisError> {
        match *self {
            Self::Gaussian { sigma, c } => eval_gaussian(c, sigma, c).map(|_| ()),
            Self::Pi { b, c } => eval_pi(c, b, c).map(|_| ()),
        }
    }
}

/// Prints as the DSL override form, e.g. `gaussian(0.19, 0.55)`.
impl fmt::Display for MembershipFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian { sigma, c } => write!(f, "gaussian({sigma}, {c})"),
            Self::Pi { b, c } => write!(f, "pi({b}, {c})"),
        }
    }
}
