//! Finite-section experiments on stable sampling and interpolation.

pub mod calibration;
pub mod frame;
pub mod spectrum;
pub mod sweep;

pub use frame::{
    frame_bounds, interpolation_bound, sampling_matrix, sampling_matrix_with, singulars, FrameBounds, FrameReport,
    Singulars, Thresholds, Verdict,
};
pub use calibration::THRESHOLDS;
pub use spectrum::{make_spectrum, random_spectrum, separated_spectrum};
pub use sweep::{
    default_delta, duality_probe, duality_probe_with, universality_sweep, universality_sweep_with, DualityReport,
    SweepConfig, SweepRow,
};
