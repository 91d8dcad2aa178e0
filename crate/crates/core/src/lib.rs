//! Vision-guided pipeline tracking with a fuzzy steering controller.
//!
//! The stack has four layers:
//!
//! * [`imgproc`]: raster types, thresholding, 8-connected labeling and
//!   noise removal.
//! * [`features`]: band and sub-segment decomposition of the pipe mask into
//!   the six controller inputs.
//! * [`fis`]: membership functions, the rule language and inference.
//! * [`sim`]: a deterministic closed-loop mission simulator with drift
//!   metrics and a parameter tuner.

// `!(x > 0.0)` style checks are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod features;
pub mod fis;
pub mod imgproc;
pub mod sim;
