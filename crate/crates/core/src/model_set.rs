//! Quasicrystals `Λ_S = {p2(h) : p1(h) ∈ S}` and dual model sets
//! `M_K = {q1(γ) : q2(γ) ∈ K}` inside observation boxes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::enumerate::enumerate_lattice_with;
use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::geometry::{circle_dist, closest_pair_by, euclid_sq};
use crate::group::{DualElement, GroupElement, GroupSpec};
use crate::scheme::CpScheme;
use crate::window::{HalfOpenBox, SpectrumWindow, Window};

/// Why a point belongs to its set: `p1(h) ∈ S` or `q2(γ) ∈ K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Certificate {
    Internal(Vec<f64>),
    Dual(DualElement),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetPoint {
    /// Lattice coordinates (in `B` or `B^{-T}`) of the generating element.
    pub coords: Vec<i64>,
    pub certificate: Certificate,
    /// The point itself, as an element of [`PointSet::group`].
    pub element: GroupElement,
}

impl SetPoint {
    pub fn real(&self) -> &[f64] {
        &self.element.real
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Quasicrystal,
    DualModelSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSet {
    pub kind: PointKind,
    /// Ambient group of the points: `G` for `Λ_S`, `ℝ^m` for `M_K`.
    pub group: GroupSpec,
    /// Observation box on the real coordinates.
    pub obs: HalfOpenBox,
    pub points: Vec<SetPoint>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.points.iter().map(|p| &p.element)
    }
}

fn lifted_target(scheme: &CpScheme, internal: &HalfOpenBox, physical: &HalfOpenBox) -> HalfOpenBox {
    let l = scheme.layout();
    let mut lo = internal.lo.clone();
    let mut hi = internal.hi.clone();
    lo.extend(&physical.lo);
    hi.extend(&physical.hi);
    lo.extend(std::iter::repeat_n(0.0, l.torus + l.torsion.len()));
    hi.extend(std::iter::repeat_n(1.0, l.torus + l.torsion.len()));
    HalfOpenBox { lo, hi }
}

/// `Λ_S` restricted to real coordinates in `obs`; torus and torsion
/// coordinates are unrestricted.
pub fn quasicrystal(scheme: &CpScheme, window: &Window, obs: &HalfOpenBox) -> Result<PointSet> {
    quasicrystal_with(scheme, window, obs, Exec::default())
}

pub fn quasicrystal_with(scheme: &CpScheme, window: &Window, obs: &HalfOpenBox, exec: Exec) -> Result<PointSet> {
    let group = scheme.group().clone();
    check_dim("observation box", group.d, obs.dim())?;
    if let Some(m) = window.dim() {
        check_dim("window", scheme.m(), m)?;
    }
    let mut points = vec![];
    for piece in window.boxes.iter().filter(|b| !b.is_empty()) {
        let target = lifted_target(scheme, piece, obs);
        for z in enumerate_lattice_with(&scheme.basis.matrix, &target, exec)? {
            let (p1, p2) = scheme.project_point(&z)?;
            if window.contains(&p1) && obs.contains(&p2.real) {
                points.push(SetPoint { coords: z, certificate: Certificate::Internal(p1), element: p2 });
            }
        }
    }
    points.sort_by(|a, b| a.coords.cmp(&b.coords));
    points.dedup_by(|a, b| a.coords == b.coords);
    Ok(PointSet { kind: PointKind::Quasicrystal, group, obs: obs.clone(), points })
}

/// `M_K ∩ obs` with `obs ⊂ ℝ^m`.
pub fn dual_model_set(scheme: &CpScheme, spectrum: &SpectrumWindow, obs: &HalfOpenBox) -> Result<PointSet> {
    dual_model_set_with(scheme, spectrum, obs, Exec::default())
}

pub fn dual_model_set_with(
    scheme: &CpScheme,
    spectrum: &SpectrumWindow,
    obs: &HalfOpenBox,
    exec: Exec,
) -> Result<PointSet> {
    let m = scheme.m();
    let group = scheme.group();
    check_dim("observation box", m, obs.dim())?;
    let ambient = GroupSpec::real(m);
    let mut points = vec![];
    if !spectrum.is_empty() {
        let l = scheme.layout();
        for z in &spectrum.zfreqs {
            check_dim("spectrum frequency", group.torus, z.len())?;
        }
        for r in &spectrum.residues {
            check_dim("spectrum residue", group.torsion.len(), r.len())?;
        }
        for piece in spectrum.real_boxes.iter().filter(|b| !b.is_empty()) {
            check_dim("spectrum box", group.d, piece.dim())?;
            let mut lo = obs.lo.clone();
            let mut hi = obs.hi.clone();
            lo.extend(&piece.lo);
            hi.extend(&piece.hi);
            for k in 0..l.torus {
                let zs = spectrum.zfreqs.iter().map(|z| z[k]);
                lo.push(zs.clone().min().unwrap() as f64 - 0.5);
                hi.push(zs.max().unwrap() as f64 + 0.5);
            }
            for &n in &l.torsion {
                lo.push(-0.5);
                hi.push(n as f64 - 0.5);
            }
            let target = HalfOpenBox { lo, hi };
            for w in enumerate_lattice_with(&scheme.dual_basis.matrix, &target, exec)? {
                let (q1, q2) = scheme.dual_project(&w)?;
                if obs.contains(&q1) && spectrum.contains(&q2.real, &q2.zfreq, &q2.disc) {
                    let element = GroupElement { real: q1, torus: vec![], disc: vec![] };
                    points.push(SetPoint { coords: w, certificate: Certificate::Dual(q2), element });
                }
            }
        }
    }
    points.sort_by(|a, b| a.coords.cmp(&b.coords));
    points.dedup_by(|a, b| a.coords == b.coords);
    Ok(PointSet { kind: PointKind::DualModelSet, group: ambient, obs: obs.clone(), points })
}

/// Minimum pairwise distance under the product metric: Euclidean on the
/// real part, arc length on each circle, and 1 between distinct residues.
pub fn min_separation(ps: &PointSet) -> Result<f64> {
    if ps.len() < 2 {
        return Err(Error::TooFewPoints(ps.len()));
    }
    let d = ps.group.d;
    if d == 0 {
        return Err(Error::Precondition("separation needs a real coordinate".into()));
    }
    let mut fibers: BTreeMap<&[u64], Vec<Vec<f64>>> = BTreeMap::new();
    for p in &ps.points {
        let mut v = p.element.real.clone();
        v.extend(&p.element.torus);
        fibers.entry(&p.element.disc).or_default().push(v);
    }
    let metric = |a: &[f64], b: &[f64]| -> f64 {
        euclid_sq(&a[..d], &b[..d]) + a[d..].iter().zip(&b[d..]).map(|(x, y)| circle_dist(*x, *y).powi(2)).sum::<f64>()
    };
    let within = fibers.values().map(|f| closest_pair_by(f, metric)).fold(f64::INFINITY, f64::min);
    Ok(if fibers.len() > 1 { within.min(1.0) } else { within })
}

/// Whether `-x ∈ Λ` for every `x ∈ Λ` whose mirror image lies inside the
/// observation box (at distance > `tol` from its boundary). Points whose
/// mirrored certificate falls on the open side of the window are skipped.
/// Needs a symmetric window.
pub fn symmetry_check(ps: &PointSet, window: &Window, tol: f64) -> Result<bool> {
    if !window.is_symmetric(tol) {
        return Err(Error::Precondition("symmetry check needs a symmetric window".into()));
    }
    let inner = HalfOpenBox {
        lo: ps.obs.lo.iter().map(|x| x + tol).collect(),
        hi: ps.obs.hi.iter().map(|x| x - tol).collect(),
    };
    let mut sorted: Vec<&GroupElement> = ps.elements().collect();
    sorted.sort_by(|a, b| a.real[0].total_cmp(&b.real[0]));
    let key: Vec<f64> = sorted.iter().map(|g| g.real[0]).collect();
    for point in &ps.points {
        let g = &point.element;
        let mirror = g.neg(&ps.group);
        if !inner.contains(&mirror.real) {
            continue;
        }
        if let Certificate::Internal(p1) = &point.certificate {
            let flipped: Vec<f64> = p1.iter().map(|x| -x).collect();
            if !window.contains(&flipped) {
                continue;
            }
        }
        let start = key.partition_point(|&x| x < mirror.real[0] - tol);
        let found = sorted[start..].iter().take_while(|h| h.real[0] <= mirror.real[0] + tol).any(|h| {
            h.disc == mirror.disc
                && h.real.iter().zip(&mirror.real).all(|(a, b)| (a - b).abs() <= tol)
                && h.torus.iter().zip(&mirror.torus).all(|(a, b)| circle_dist(*a, *b) <= tol)
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}
