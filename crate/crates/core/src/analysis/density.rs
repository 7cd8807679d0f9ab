//! Box-counting estimates of Beurling densities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_set::{PointKind, PointSet};
use crate::scheme::CpScheme;
use crate::window::HalfOpenBox;

#[derive(Clone, Debug, Serialize)]
pub struct DensityRow {
    pub side: f64,
    pub counts: Vec<usize>,
    pub densities: Vec<f64>,
    /// `D⁻` estimate: minimum over translates.
    pub lower: f64,
    /// `D⁺` estimate: maximum over translates.
    pub upper: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub translates: Vec<Vec<f64>>,
    pub rows: Vec<DensityRow>,
    pub theoretical: Option<f64>,
    /// Worst relative deviation from `theoretical` at the largest side.
    pub max_rel_error: Option<f64>,
}

impl DensityReport {
    pub fn with_theoretical(mut self, value: f64) -> Self {
        self.theoretical = Some(value);
        self.max_rel_error = self.rows.last().map(|row| {
            row.densities.iter().map(|d| (d / value - 1.0).abs()).fold(0.0, f64::max)
        });
        self
    }
}

/// First `count` points of the additive recurrence with generalized golden
/// ratio steps, in `[0, 1)^dim`.
pub fn quasi_random(dim: usize, count: usize) -> Vec<Vec<f64>> {
    // root of x^{dim+1} = x + 1
    let mut g = 2.0f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (dim as f64 + 1.0));
    }
    let steps: Vec<f64> = (1..=dim).map(|j| g.powi(-(j as i32))).collect();
    (0..count).map(|k| steps.iter().map(|s| (0.5 + s * (k + 1) as f64).fract()).collect()).collect()
}

/// `count` cube centers `a` with `Q_side(a)` inside `obs`.
pub fn default_translates(obs: &HalfOpenBox, side: f64, count: usize) -> Result<Vec<Vec<f64>>> {
    let room: Vec<f64> = obs.lo.iter().zip(&obs.hi).map(|(l, h)| h - l - side).collect();
    if let Some(have) = room.iter().map(|r| r + side).find(|w| *w < side) {
        return Err(Error::ObservationTooSmall { needed: side, have });
    }
    Ok(quasi_random(obs.dim(), count)
        .into_iter()
        .map(|u| u.iter().enumerate().map(|(i, t)| obs.lo[i] + side / 2.0 + t * room[i]).collect())
        .collect())
}

/// `#(points with real part in Q_ℓ(a)) / m(Q_ℓ(a) × T^ℓ × D)` for each
/// side `ℓ` and center `a`, with `Q_ℓ(a) = a + [-ℓ/2, ℓ/2)^d`.
pub fn empirical_density(ps: &PointSet, sides: &[f64], translates: &[Vec<f64>]) -> Result<DensityReport> {
    let d = ps.group.d;
    if d == 0 || sides.is_empty() || translates.is_empty() {
        return Err(Error::Precondition("need a real coordinate, sides and translates".into()));
    }
    let mut reals: Vec<&[f64]> = ps.points.iter().map(|p| p.real()).collect();
    reals.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let key: Vec<f64> = reals.iter().map(|x| x[0]).collect();
    let fiber = ps.group.torsion_order() as f64;
    let mut rows = vec![];
    for &side in sides {
        if !(side > 0.0) {
            return Err(Error::Precondition("box sides must be positive".into()));
        }
        let mut counts = vec![];
        for a in translates {
            let cube = HalfOpenBox {
                lo: a.iter().map(|c| c - side / 2.0).collect(),
                hi: a.iter().map(|c| c + side / 2.0).collect(),
            };
            if !ps.obs.contains_box(&cube) {
                let have = ps.obs.lo.iter().zip(&ps.obs.hi).map(|(l, h)| h - l).fold(f64::INFINITY, f64::min);
                return Err(Error::ObservationTooSmall { needed: side, have });
            }
            let start = key.partition_point(|&x| x < cube.lo[0]);
            let end = key.partition_point(|&x| x < cube.hi[0]);
            counts.push(reals[start..end].iter().filter(|x| cube.contains(x)).count());
        }
        let vol = side.powi(d as i32) * fiber;
        let densities: Vec<f64> = counts.iter().map(|&c| c as f64 / vol).collect();
        let lower = densities.iter().copied().fold(f64::INFINITY, f64::min);
        let upper = densities.iter().copied().fold(0.0, f64::max);
        rows.push(DensityRow { side, counts, densities, lower, upper });
    }
    Ok(DensityReport { translates: translates.to_vec(), rows, theoretical: None, max_rel_error: None })
}

/// `w / s(H)` for `Λ_S` with `|S| = w`, or `w · s(H)` for `M_K` with
/// `μ(K) = w`.
pub fn theoretical_density(scheme: &CpScheme, w: f64, kind: PointKind) -> f64 {
    match kind {
        PointKind::Quasicrystal => w / scheme.section_mass,
        PointKind::DualModelSet => w * scheme.section_mass,
    }
}
