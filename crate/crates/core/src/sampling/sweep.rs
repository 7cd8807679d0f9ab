//! Randomized universality sweeps and duality probes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::frame::{frame_report, FrameInput, FrameReport, Thresholds};
use super::spectrum::{make_spectrum, random_spectrum};
use crate::analysis::theoretical_density;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model_set::{dual_model_set_with, quasicrystal_with, PointKind};
use crate::scheme::CpScheme;
use crate::window::{HalfOpenBox, SpectrumWindow, Window};

/// Frequency resolution matching the Fourier resolution of a box of side `l`.
pub fn default_delta(l: f64) -> f64 {
    1.0 / l
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub interval: (f64, f64),
    pub ratios: Vec<f64>,
    pub trials: usize,
    /// Side `L` of the observation box `[0, L)`.
    pub obs_len: f64,
    pub delta: f64,
    /// Real band holding the random spectra; defaults to
    /// `[0, 2·max(ρ)·D(Λ_I))`.
    pub band: Option<(f64, f64)>,
    pub seed: u64,
    pub thresholds: Thresholds,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub trial: usize,
    pub spectrum: SpectrumWindow,
    pub report: FrameReport,
}

pub fn universality_sweep(scheme: &CpScheme, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    universality_sweep_with(scheme, cfg, Exec::default())
}

/// For each ratio `ρ` and trial, draws a random `K` with
/// `μ(K) ≈ ρ·D(Λ_I)` and reports the frame bounds of `Λ_I ∩ [0, L)`
/// against the `δ`-grid on `K`. Trial `t` of ratio `i` uses stream
/// `i·trials + t` of the seeded generator.
pub fn universality_sweep_with(scheme: &CpScheme, cfg: &SweepConfig, exec: Exec) -> Result<Vec<SweepRow>> {
    let group = scheme.group();
    if scheme.m() != 1 || group.d != 1 {
        return Err(Error::Precondition("universality sweep needs m = d = 1".into()));
    }
    if !(cfg.obs_len > 0.0 && cfg.delta > 0.0) || cfg.trials == 0 || cfg.ratios.is_empty() {
        return Err(Error::Precondition("sweep needs L, δ > 0 and at least one ratio and trial".into()));
    }
    let window = Window::interval(cfg.interval.0, cfg.interval.1);
    let obs = HalfOpenBox::interval(0.0, cfg.obs_len);
    let points = quasicrystal_with(scheme, &window, &obs, exec)?;
    let density = theoretical_density(scheme, window.measure(), PointKind::Quasicrystal);
    let max_ratio = cfg.ratios.iter().copied().fold(0.0, f64::max);
    let band = cfg.band.unwrap_or((0.0, 2.0 * max_ratio * density));
    let order = group.torsion_order() as f64;

    let jobs: Vec<(usize, usize)> =
        (0..cfg.ratios.len()).flat_map(|i| (0..cfg.trials).map(move |t| (i, t))).collect();
    let rows = exec.map(&jobs, |&(i, t)| -> Result<SweepRow> {
        let ratio = cfg.ratios[i];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream((i * cfg.trials + t) as u64);
        let spectrum = random_spectrum(group, ratio * density, band, cfg.delta, &mut rng)?;
        let freqs = make_spectrum(&spectrum, cfg.delta)?;
        let input = FrameInput {
            points: &points,
            freqs: &freqs,
            obs_measure: cfg.obs_len * order,
            cell: cfg.delta / order,
            spectrum_measure: spectrum.measure(&group.torsion),
            density,
        };
        let report = frame_report(&input, &cfg.thresholds, Exec::Sequential)?;
        Ok(SweepRow { ratio, trial: t, spectrum, report })
    });
    rows.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    /// `M_K ∩ [0, L)^m` against the `δ`-grid on `S`.
    pub interpolation: FrameReport,
    /// `Λ_S ∩ [0, L)^d` against the `δ`-grid on `K`.
    pub sampling: FrameReport,
}

pub fn duality_probe(
    scheme: &CpScheme,
    s: &Window,
    k: &SpectrumWindow,
    obs_len: f64,
    delta: f64,
    thresholds: &Thresholds,
) -> Result<DualityReport> {
    duality_probe_with(scheme, s, k, obs_len, delta, thresholds, Exec::default())
}

pub fn duality_probe_with(
    scheme: &CpScheme,
    s: &Window,
    k: &SpectrumWindow,
    obs_len: f64,
    delta: f64,
    thresholds: &Thresholds,
    exec: Exec,
) -> Result<DualityReport> {
    let (m, group) = (scheme.m(), scheme.group());
    let order = group.torsion_order() as f64;
    let mu_k = k.measure(&group.torsion);

    let dual_points = dual_model_set_with(scheme, k, &HalfOpenBox::cube(m, 0.0, obs_len), exec)?;
    let s_freqs = make_spectrum(&SpectrumWindow::real(s.boxes.clone())?, delta)?;
    let interpolation = frame_report(
        &FrameInput {
            points: &dual_points,
            freqs: &s_freqs,
            obs_measure: obs_len.powi(m as i32),
            cell: delta.powi(m as i32),
            spectrum_measure: s.measure(),
            density: theoretical_density(scheme, mu_k, PointKind::DualModelSet),
        },
        thresholds,
        exec,
    )?;

    let points = quasicrystal_with(scheme, s, &HalfOpenBox::cube(group.d, 0.0, obs_len), exec)?;
    let k_freqs = make_spectrum(k, delta)?;
    let sampling = frame_report(
        &FrameInput {
            points: &points,
            freqs: &k_freqs,
            obs_measure: obs_len.powi(group.d as i32) * order,
            cell: delta.powi(group.d as i32) / order,
            spectrum_measure: mu_k,
            density: theoretical_density(scheme, s.measure(), PointKind::Quasicrystal),
        },
        thresholds,
        exec,
    )?;
    Ok(DualityReport { interpolation, sampling })
}
