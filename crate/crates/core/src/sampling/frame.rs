//! Exponential sampling matrices and their singular-value bounds.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::{character_eval, DualElement};
use crate::model_set::PointSet;

/// `E[j, k] = ⟨ξ_k, λ_j⟩`.
pub fn sampling_matrix(ps: &PointSet, freqs: &[DualElement]) -> Result<DMatrix<Complex64>> {
    sampling_matrix_with(ps, freqs, Exec::default())
}

pub fn sampling_matrix_with(ps: &PointSet, freqs: &[DualElement], exec: Exec) -> Result<DMatrix<Complex64>> {
    if ps.is_empty() || freqs.is_empty() {
        return Err(Error::Precondition("sampling matrix needs points and frequencies".into()));
    }
    let rows = exec.map(&ps.points, |p| {
        freqs.iter().map(|xi| character_eval(xi, &p.element, &ps.group)).collect::<Result<Vec<_>>>()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_fn(rows.len(), freqs.len(), |j, k| rows[j][k]))
}

/// Extreme singular values of a sampling matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Singulars {
    pub rows: usize,
    pub cols: usize,
    pub max: f64,
    /// Smallest singular value of the column system (0 if `rows < cols`).
    pub min_cols: f64,
    /// Smallest singular value of the row system (0 if `rows > cols`).
    pub min_rows: f64,
}

pub fn singulars(e: &DMatrix<Complex64>) -> Result<Singulars> {
    if e.is_empty() {
        return Err(Error::Precondition("empty matrix".into()));
    }
    let svd = e.clone().try_svd(false, false, 1e-14, 10_000).ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let sv = svd.singular_values;
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numerical("non-finite singular value".into()));
    }
    let max = sv.max();
    let min = sv.min();
    let (rows, cols) = e.shape();
    Ok(Singulars {
        rows,
        cols,
        max,
        min_cols: if rows >= cols { min } else { 0.0 },
        min_rows: if rows <= cols { min } else { 0.0 },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub a_est: f64,
    pub b_est: f64,
}

/// `(σ_min² / L, σ_max² / L)` of the column system.
pub fn frame_bounds(e: &DMatrix<Complex64>, l: f64) -> Result<FrameBounds> {
    let s = singulars(e)?;
    Ok(bounds_from(&s, l))
}

pub(crate) fn bounds_from(s: &Singulars, l: f64) -> FrameBounds {
    FrameBounds { a_est: s.min_cols.powi(2) / l, b_est: s.max.powi(2) / l }
}

/// Riesz lower bound of the row system, `σ_min(rows)² · cell`, where
/// `cell` is the dual Haar measure of one grid frequency.
pub fn interpolation_bound(e: &DMatrix<Complex64>, cell: f64) -> Result<f64> {
    Ok(singulars(e)?.min_rows.powi(2) * cell)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SamplingLike,
    InterpolationLike,
    Critical,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::SamplingLike => "sampling-like",
            Verdict::InterpolationLike => "interpolation-like",
            Verdict::Critical => "critical",
        })
    }
}

/// Verdict thresholds on `Aest` and the interpolation bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub theta_a: f64,
    pub theta_i: f64,
}

impl Thresholds {
    pub fn verdict(&self, a_est: f64, i_est: f64) -> Verdict {
        if a_est > self.theta_a {
            Verdict::SamplingLike
        } else if i_est > self.theta_i {
            Verdict::InterpolationLike
        } else {
            Verdict::Critical
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub num_points: usize,
    pub num_freqs: usize,
    /// Haar measure of the observation region.
    pub obs_measure: f64,
    pub spectrum_measure: f64,
    pub density: f64,
    pub a_est: f64,
    pub b_est: f64,
    pub i_est: f64,
    /// `σ_max / σ_min` of the column system.
    pub cond: f64,
    pub verdict: Verdict,
}

pub(crate) struct FrameInput<'a> {
    pub points: &'a PointSet,
    pub freqs: &'a [DualElement],
    pub obs_measure: f64,
    pub cell: f64,
    pub spectrum_measure: f64,
    pub density: f64,
}

pub(crate) fn frame_report(input: &FrameInput, thresholds: &Thresholds, exec: Exec) -> Result<FrameReport> {
    let e = sampling_matrix_with(input.points, input.freqs, exec)?;
    let s = singulars(&e)?;
    let b = bounds_from(&s, input.obs_measure);
    let i_est = s.min_rows.powi(2) * input.cell;
    Ok(FrameReport {
        num_points: s.rows,
        num_freqs: s.cols,
        obs_measure: input.obs_measure,
        spectrum_measure: input.spectrum_measure,
        density: input.density,
        a_est: b.a_est,
        b_est: b.b_est,
        i_est,
        cond: if s.min_cols > 0.0 { s.max / s.min_cols } else { f64::INFINITY },
        verdict: thresholds.verdict(b.a_est, i_est),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupElement, GroupSpec};
    use crate::model_set::{Certificate, PointKind, SetPoint};
    use crate::window::HalfOpenBox;

    fn integers(n: usize) -> PointSet {
        let points = (0..n)
            .map(|j| SetPoint {
                coords: vec![j as i64],
                certificate: Certificate::Internal(vec![]),
                element: GroupElement { real: vec![j as f64], torus: vec![], disc: vec![] },
            })
            .collect();
        PointSet {
            kind: PointKind::Quasicrystal,
            group: GroupSpec::real(1),
            obs: HalfOpenBox::interval(0.0, n as f64),
            points,
        }
    }

    fn dft_freqs(n: usize) -> Vec<DualElement> {
        (0..n).map(|k| DualElement { real: vec![k as f64 / n as f64], zfreq: vec![], disc: vec![] }).collect()
    }

    #[test]
    fn dft_is_tight() {
        let n = 16;
        let e = sampling_matrix(&integers(n), &dft_freqs(n)).unwrap();
        assert!(e.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let gram = e.adjoint() * &e;
        assert!((gram - DMatrix::<Complex64>::identity(n, n) * Complex64::new(n as f64, 0.0)).camax() < 1e-10);
        let b = frame_bounds(&e, n as f64).unwrap();
        assert!((b.a_est - 1.0).abs() < 1e-10 && (b.b_est - 1.0).abs() < 1e-10);
        assert!((interpolation_bound(&e, 1.0 / n as f64).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_point_row() {
        let e = sampling_matrix(&integers(1), &dft_freqs(5)).unwrap();
        assert_eq!(e.shape(), (1, 5));
        let s = singulars(&e).unwrap();
        assert!((s.max - 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.min_cols, 0.0);
    }

    #[test]
    fn row_monotone_and_halving() {
        let n = 16;
        let full = sampling_matrix(&integers(n), &dft_freqs(n)).unwrap();
        let mut half = integers(n);
        half.points.retain(|p| p.coords[0] % 2 == 0);
        let e = sampling_matrix(&half, &dft_freqs(n)).unwrap();
        assert_eq!(e, full.select_rows(&(0..n).step_by(2).collect::<Vec<_>>()));
        let b = frame_bounds(&e, n as f64).unwrap();
        assert!(b.b_est <= 1.0 + 1e-12 && b.a_est <= 1.0 + 1e-12);
        assert!(b.a_est <= b.b_est);
    }

    #[test]
    fn duplicate_rows_double_bounds() {
        let n = 8;
        let mut ps = integers(n);
        let e = sampling_matrix(&ps, &dft_freqs(n)).unwrap();
        ps.points.extend(ps.points.clone());
        let e2 = sampling_matrix(&ps, &dft_freqs(n)).unwrap();
        let (b, b2) = (frame_bounds(&e, 5.0).unwrap(), frame_bounds(&e2, 5.0).unwrap());
        assert!((b2.a_est - 2.0 * b.a_est).abs() < 1e-10 && (b2.b_est - 2.0 * b.b_est).abs() < 1e-10);
    }

    #[test]
    fn mismatched_groups_rejected() {
        let f = vec![DualElement { real: vec![0.1], zfreq: vec![], disc: vec![1] }];
        assert!(sampling_matrix(&integers(3), &f).is_err());
    }

    #[test]
    fn verdict_order() {
        let t = Thresholds { theta_a: 0.1, theta_i: 0.2 };
        assert_eq!(t.verdict(0.5, 0.5), Verdict::SamplingLike);
        assert_eq!(t.verdict(0.0, 0.5), Verdict::InterpolationLike);
        assert_eq!(t.verdict(0.05, 0.1), Verdict::Critical);
        assert_eq!(Verdict::SamplingLike.to_string(), "sampling-like");
    }
}
