//! Riesz-type sums `(1/r^m) Σ_{h∈H} φ((p1(h) - a)/r) ψ(p2(h))` and their
//! large-`r` limit `(1/s(H)) ∫φ ∫ψ`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::tail::{lattice_gaussian_tail, radius_for_budget};
use super::testfn::TestFunctionSpec;
use crate::enumerate::enumerate_lattice_with;
use crate::error::{check_dim, Error, Result};
use crate::exec::{tree_sum, Exec};
use crate::scheme::CpScheme;
use crate::window::HalfOpenBox;

/// Absolute error budget for the neglected terms of a Riesz sum.
pub const RIESZ_TAIL_BUDGET: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    /// Enumerate exactly the terms the tail bound requires.
    Auto,
    /// Sum over representatives whose main lattice coordinates lie in
    /// `[-R, R]`; fails if the tail bound for that range exceeds the budget.
    IndexRadius(i64),
}

#[derive(Clone, Debug, Serialize)]
pub struct RieszSum {
    pub value: Complex64,
    pub terms: usize,
    pub tail_bound: f64,
}

struct Setup {
    /// Per-row scale of the lifted coordinates making the Gaussian isotropic.
    scale: Vec<f64>,
    /// Center of the Gaussian in lifted coordinates.
    center: Vec<f64>,
    /// Multiplier turning a lattice Gaussian tail into a bound on the sum.
    factor: f64,
    scaled: DMatrix<f64>,
}

fn setup(scheme: &CpScheme, spec: &TestFunctionSpec, r: f64, a: &[f64]) -> Result<Setup> {
    let l = scheme.layout();
    let (m, n) = (l.m, l.dim());
    let slab = n - l.main();
    let mut scale = vec![1.0; n];
    let mut center = vec![0.5; n];
    for i in 0..m {
        scale[i] = 1.0 / (r * spec.phi.sigma);
        center[i] = a[i] + r * spec.phi.center[i];
    }
    for i in 0..l.d {
        scale[m + i] = 1.0 / spec.psi.gaussian.sigma;
        center[m + i] = spec.psi.gaussian.center[i];
    }
    let scaled = DMatrix::from_fn(n, n, |i, j| scale[i] * scheme.basis.matrix[(i, j)]);
    // slab coordinates in [0, 1) sit within sqrt(slab)/2 of the center
    let factor = spec.psi.sup_bound() * (std::f64::consts::PI * slab as f64 / 4.0).exp() / r.powi(m as i32);
    Ok(Setup { scale, center, factor, scaled })
}

fn term(scheme: &CpScheme, spec: &TestFunctionSpec, r: f64, a: &[f64], z: &[i64]) -> Result<Complex64> {
    let (p1, p2) = scheme.project_point(z)?;
    let x: Vec<f64> = p1.iter().zip(a).map(|(p, a)| (p - a) / r).collect();
    Ok(spec.psi.eval(&p2, scheme.group()) * spec.phi.eval(&x))
}

pub fn riesz_sum(
    scheme: &CpScheme,
    spec: &TestFunctionSpec,
    r: f64,
    a: &[f64],
    truncation: Truncation,
) -> Result<RieszSum> {
    riesz_sum_with(scheme, spec, r, a, truncation, Exec::default())
}

pub fn riesz_sum_with(
    scheme: &CpScheme,
    spec: &TestFunctionSpec,
    r: f64,
    a: &[f64],
    truncation: Truncation,
    exec: Exec,
) -> Result<RieszSum> {
    spec.validate(scheme.m(), scheme.group())?;
    check_dim("translate", scheme.m(), a.len())?;
    if !(r > 0.0) {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let s = setup(scheme, spec, r, a)?;
    let l = scheme.layout();
    let main = l.main();
    let (zs, tail_bound) = match truncation {
        Truncation::Auto => {
            let t = radius_for_budget(&s.scaled, RIESZ_TAIL_BUDGET / s.factor);
            let mut lo = vec![0.0; l.dim()];
            let mut hi = vec![1.0; l.dim()];
            for i in 0..main {
                lo[i] = s.center[i] - t / s.scale[i];
                hi[i] = s.center[i] + t / s.scale[i];
            }
            let zs = enumerate_lattice_with(&scheme.basis.matrix, &HalfOpenBox { lo, hi }, exec)?;
            (zs, s.factor * lattice_gaussian_tail(&s.scaled, t))
        }
        Truncation::IndexRadius(radius) => {
            let t = covered_radius(scheme, &s, radius)?;
            let bound = s.factor * lattice_gaussian_tail(&s.scaled, t);
            if bound > RIESZ_TAIL_BUDGET {
                return Err(Error::TailBound { bound, budget: RIESZ_TAIL_BUDGET });
            }
            (scheme.representatives(radius), bound)
        }
    };
    let terms = exec.map(&zs, |z| term(scheme, spec, r, a, z));
    let terms: Vec<Complex64> = terms.into_iter().collect::<Result<_>>()?;
    Ok(RieszSum { value: tree_sum(&terms) / r.powi(scheme.m() as i32), terms: zs.len(), tail_bound })
}

/// Largest scaled radius `T` such that every element of `H` whose scaled
/// main coordinates lie within `T` of the center has a representative with
/// main lattice coordinates in `[-radius, radius]`.
fn covered_radius(scheme: &CpScheme, s: &Setup, radius: i64) -> Result<f64> {
    let l = scheme.layout();
    let main = l.main();
    let b = &scheme.basis.matrix;
    let minv = b.view((0, 0), (main, main)).into_owned().lu().try_inverse().ok_or(Error::Singular)?;
    let tors: Vec<usize> = (0..l.torsion.len()).map(|i| l.torsion_row(i)).collect();
    let mut t_max = f64::INFINITY;
    for j in 0..main {
        let mut center = 0.0;
        let mut slope = 0.0;
        let mut spread = 0.0;
        for i in 0..main {
            center += minv[(j, i)] * s.center[i];
            slope += minv[(j, i)].abs() / s.scale[i];
        }
        for (k, &col) in tors.iter().enumerate() {
            let w: f64 = (0..main).map(|i| minv[(j, i)] * b[(i, col)]).sum();
            let half = (l.torsion[k] - 1) as f64 / 2.0;
            center -= w * half;
            spread += w.abs() * half;
        }
        t_max = t_max.min((radius as f64 - center.abs() - spread) / slope);
    }
    Ok(t_max.max(0.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct NlRow {
    pub r: f64,
    /// Relative error per translate (absolute when the limit vanishes).
    pub errors: Vec<f64>,
    pub max_error: f64,
    pub mean_error: f64,
    /// `max - min` of `errors`.
    pub spread: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NlTable {
    pub limit: Complex64,
    pub rows: Vec<NlRow>,
}

/// `(1/s(H)) ∫φ ∫ψ`.
pub fn riesz_limit(scheme: &CpScheme, spec: &TestFunctionSpec) -> Complex64 {
    spec.integral() / scheme.section_mass
}

pub fn nl_convergence(
    scheme: &CpScheme,
    spec: &TestFunctionSpec,
    rs: &[f64],
    translates: &[Vec<f64>],
) -> Result<NlTable> {
    nl_convergence_with(scheme, spec, rs, translates, Exec::default())
}

pub fn nl_convergence_with(
    scheme: &CpScheme,
    spec: &TestFunctionSpec,
    rs: &[f64],
    translates: &[Vec<f64>],
    exec: Exec,
) -> Result<NlTable> {
    if translates.is_empty() {
        return Err(Error::Precondition("no translates".into()));
    }
    let limit = riesz_limit(scheme, spec);
    let norm = if limit.norm() > 0.0 { limit.norm() } else { 1.0 };
    let mut rows = vec![];
    for &r in rs {
        let mut errors = vec![];
        for a in translates {
            let v = riesz_sum_with(scheme, spec, r, a, Truncation::Auto, exec)?.value;
            errors.push((v - limit).norm() / norm);
        }
        let max_error = errors.iter().copied().fold(0.0, f64::max);
        let min_error = errors.iter().copied().fold(f64::INFINITY, f64::min);
        let mean_error = errors.iter().sum::<f64>() / errors.len() as f64;
        rows.push(NlRow { r, errors, max_error, mean_error, spread: max_error - min_error });
    }
    Ok(NlTable { limit, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::testfn::{Gaussian, PsiSpec, TrigTerm};
    use crate::group::GroupSpec;
    use crate::scheme::{build_scheme, SchemeDescriptor};

    fn fib() -> CpScheme {
        build_scheme(&SchemeDescriptor::sturmian(vec![])).unwrap()
    }

    #[test]
    fn matches_double_loop() {
        let s = fib();
        let spec = TestFunctionSpec::gaussian_pair(1, s.group(), 0.6, 0.8);
        let (r, a) = (2.0, 0.3);
        let (al, be) = (1.0 / 2f64.sqrt(), 1.0 / 3f64.sqrt());
        let mut oracle = 0.0;
        for n in -100i64..=100 {
            for k in -100i64..=100 {
                let p1 = n as f64 + al * k as f64;
                let p2 = n as f64 + be * k as f64;
                let u = (p1 - a) / r;
                oracle += (-std::f64::consts::PI * u * u / 0.36).exp() * (-std::f64::consts::PI * p2 * p2 / 0.64).exp();
            }
        }
        oracle /= r;
        let idx = riesz_sum(&s, &spec, r, &[a], Truncation::IndexRadius(100)).unwrap();
        let auto = riesz_sum(&s, &spec, r, &[a], Truncation::Auto).unwrap();
        assert!((idx.value.re - oracle).abs() < 1e-10, "{} vs {oracle}", idx.value);
        assert!((auto.value.re - oracle).abs() < 1e-10, "{} vs {oracle}", auto.value);
        assert!(auto.terms < idx.terms);
    }

    #[test]
    fn small_index_radius_rejected() {
        let s = fib();
        let spec = TestFunctionSpec::gaussian_pair(1, s.group(), 1.0, 1.0);
        let err = riesz_sum(&s, &spec, 50.0, &[0.0], Truncation::IndexRadius(20)).unwrap_err();
        assert!(matches!(err, Error::TailBound { .. }));
    }

    #[test]
    fn approaches_limit() {
        let s = fib();
        let spec = TestFunctionSpec::gaussian_pair(1, s.group(), 1.0, 0.05);
        let table = nl_convergence(&s, &spec, &[10.0, 300.0], &[vec![0.0], vec![17.3]]).unwrap();
        assert!(table.rows[0].max_error > 1e-6);
        assert!(table.rows[1].max_error < table.rows[0].max_error);
        assert!(table.rows[1].max_error < 1e-2);
    }

    #[test]
    fn zero_integral_limit() {
        let s = build_scheme(&SchemeDescriptor::sturmian(vec![2])).unwrap();
        let psi = PsiSpec {
            gaussian: Gaussian::centered(1, 1.0),
            trig: vec![TrigTerm { freq: vec![], coeff: Complex64::new(1.0, 0.0) }],
            weights: vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        };
        let spec = TestFunctionSpec { phi: Gaussian::centered(1, 1.0), psi };
        assert_eq!(riesz_limit(&s, &spec), Complex64::new(0.0, 0.0));
        let v = riesz_sum(&s, &spec, 300.0, &[0.0], Truncation::Auto).unwrap().value;
        assert!(v.norm() < 1e-2, "{v}");
    }

    #[test]
    fn integer_lattice_counting() {
        // H = Z² lift: p1 = n, p2 = k, density 1
        let mut s = fib();
        s.basis.matrix = DMatrix::identity(2, 2);
        s.section_mass = 1.0;
        let spec = TestFunctionSpec::gaussian_pair(1, &GroupSpec::real(1), 1.0, 5.0);
        let v = riesz_sum(&s, &spec, 20.0, &[0.25], Truncation::Auto).unwrap().value;
        let limit = riesz_limit(&s, &spec);
        // Poisson summation: the error is exponentially small in r
        assert!((v - limit).norm() < 1e-10, "{v} vs {limit}");
    }

    #[test]
    fn invariant_under_lattice_shift() {
        let s = fib();
        let spec = TestFunctionSpec::gaussian_pair(1, s.group(), 1.0, 1.0);
        let (p1, p2) = s.project_point(&[3, -2]).unwrap();
        let r = 5.0;
        // a -> a + p1(h0) together with ψ -> ψ(· + p2(h0)) relabels h -> h + h0
        let mut shifted = spec.clone();
        shifted.psi.gaussian.center = vec![-p2.real[0]];
        let v0 = riesz_sum(&s, &spec, r, &[0.4], Truncation::Auto).unwrap().value;
        let v1 = riesz_sum(&s, &shifted, r, &[0.4 + p1[0]], Truncation::Auto).unwrap().value;
        assert!((v0 - v1).norm() < 1e-10);
    }

    #[test]
    fn linear_in_psi() {
        let s = build_scheme(&SchemeDescriptor::sturmian(vec![2])).unwrap();
        let mut spec = TestFunctionSpec::gaussian_pair(1, s.group(), 1.0, 1.0);
        let v1 = riesz_sum(&s, &spec, 4.0, &[0.0], Truncation::Auto).unwrap().value;
        spec.psi.weights = vec![Complex64::new(2.0, 0.0), Complex64::new(2.0, 1.0)];
        let v2 = riesz_sum(&s, &spec, 4.0, &[0.0], Truncation::Auto).unwrap().value;
        spec.psi.weights = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0)];
        let v3 = riesz_sum(&s, &spec, 4.0, &[0.0], Truncation::Auto).unwrap().value;
        assert!((v2 - (v1 + v3)).norm() < 1e-10);
    }
}
