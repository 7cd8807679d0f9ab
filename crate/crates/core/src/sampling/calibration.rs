//! Verdict thresholds fixed from oracle runs (`examples/calibrate_sampling.rs`,
//! Fibonacci scheme, `D(Λ_I) = 1`, `L = 500`, `δ = 1/L`, seeds 1–6, 8, 9).
//!
//! Over 160 trials the smallest `Aest` at `ρ = 0.8` was `1.8e-4` and the
//! smallest interpolation bound at `ρ = 1.25` was `2.9e-3`; rank-deficient
//! systems sit at 0 or at round-off (`< 1e-26`).

use super::frame::Thresholds;

pub const THRESHOLDS: Thresholds = Thresholds { theta_a: 1e-4, theta_i: 1e-3 };
