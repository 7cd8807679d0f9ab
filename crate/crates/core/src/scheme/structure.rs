use serde::Serialize;

use super::CpScheme;
use crate::error::Result;
use crate::exec::Exec;
use crate::geometry::{circle_dist, closest_pair, closest_pair_by, euclid_sq, torus_covering_radius_with};

/// Numerical proxies for the completeness conditions on a finite patch of
/// `H`: injectivity of `p1` and `p2` (minimum distances) and density of
/// both projections (covering radii modulo the integer lattice).
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub radius: i64,
    pub points: usize,
    pub p1_min_distance: f64,
    pub p2_min_distance: f64,
    pub p1_covering_radius: f64,
    pub p2_covering_radius: f64,
    pub p1_injective: bool,
    pub p2_injective: bool,
}

pub fn structure_check(scheme: &CpScheme, radius: i64, tol: f64) -> Result<StructureReport> {
    structure_check_with(scheme, radius, tol, Exec::default())
}

pub fn structure_check_with(scheme: &CpScheme, radius: i64, tol: f64, exec: Exec) -> Result<StructureReport> {
    let reps = scheme.representatives(radius.max(1));
    let projected = exec.map(&reps, |z| scheme.project_point(z));
    let projected: Vec<_> = projected.into_iter().collect::<Result<_>>()?;
    let group = scheme.group();

    let p1: Vec<Vec<f64>> = projected.iter().map(|(p, _)| p.clone()).collect();
    let p1_min = closest_pair(&p1);

    // fibers of D are at distance >= 1 from each other
    let mut fibers: std::collections::BTreeMap<Vec<u64>, Vec<Vec<f64>>> = Default::default();
    for (_, g) in &projected {
        let mut v = g.real.clone();
        v.extend(&g.torus);
        fibers.entry(g.disc.clone()).or_default().push(v);
    }
    let d = group.d;
    let p2_metric = |a: &[f64], b: &[f64]| -> f64 {
        euclid_sq(&a[..d], &b[..d])
            + a[d..].iter().zip(&b[d..]).map(|(x, y)| circle_dist(*x, *y).powi(2)).sum::<f64>()
    };
    let within = fibers.values().map(|f| closest_pair_by(f, p2_metric)).fold(f64::INFINITY, f64::min);
    let p2_min = if fibers.len() > 1 { within.min(1.0) } else { within };

    let frac = |v: &[f64]| v.iter().map(|x| x - x.floor()).collect::<Vec<f64>>();
    let p1_cover = torus_covering_radius_with(&p1.iter().map(|p| frac(p)).collect::<Vec<_>>(), scheme.m(), exec);
    let dim2 = group.d + group.torus;
    let p2_cover = fibers
        .values()
        .map(|f| torus_covering_radius_with(&f.iter().map(|p| frac(p)).collect::<Vec<_>>(), dim2, exec))
        .fold(0.0, f64::max);
    // a missing fiber leaves D uncovered
    let p2_cover = if (fibers.len() as u64) < group.torsion_order() { f64::INFINITY } else { p2_cover };

    Ok(StructureReport {
        radius,
        points: reps.len(),
        p1_min_distance: p1_min,
        p2_min_distance: p2_min,
        p1_covering_radius: p1_cover,
        p2_covering_radius: p2_cover,
        p1_injective: p1_min > tol,
        p2_injective: p2_min > tol,
    })
}
