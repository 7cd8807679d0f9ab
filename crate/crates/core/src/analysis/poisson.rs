//! Two-sided evaluation of Poisson summation for Gaussians on a lattice
//! `B·Z^N`: `Σ_z f(x + Bz) = (1/|det B|) Σ_w f̂(B^{-T}w) e^{2πi ⟨B^{-T}w, x⟩}`
//! with `f(y) = e^{-π|y|²/σ²}` and `f̂(ξ) = σ^N e^{-πσ²|ξ|²}`.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::tail::{lattice_gaussian_tail, radius_for_budget};
use crate::enumerate::{apply, enumerate_ball};
use crate::error::{check_dim, Error, Result};
use crate::exec::{tree_sum, tree_sum_real};

/// Tail budget for each side.
pub const POISSON_TAIL_BUDGET: f64 = 1e-13;

#[derive(Clone, Debug, Serialize)]
pub struct PoissonReport {
    pub lhs: f64,
    pub rhs: Complex64,
    pub diff: f64,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub tail_bound: f64,
}

pub fn poisson_check(basis: &DMatrix<f64>, sigma: f64, x: &[f64]) -> Result<PoissonReport> {
    let n = basis.nrows();
    check_dim("point", n, x.len())?;
    if !(sigma > 0.0) {
        return Err(Error::Precondition("σ must be positive".into()));
    }
    let det = basis.determinant();
    let dual = basis.clone().lu().try_inverse().ok_or(Error::Singular)?.transpose();

    let scaled = basis / sigma;
    let r_lhs = radius_for_budget(&scaled, POISSON_TAIL_BUDGET);
    let tail_lhs = lattice_gaussian_tail(&scaled, r_lhs);
    let lhs_terms: Vec<f64> = enumerate_ball(basis, x, r_lhs * sigma)?
        .iter()
        .map(|z| {
            let y = apply(basis, z);
            let r2: f64 = y.iter().zip(x).map(|(a, b)| (a + b).powi(2)).sum();
            (-PI * r2 / (sigma * sigma)).exp()
        })
        .collect();
    let lhs = tree_sum_real(&lhs_terms);

    let amp = sigma.powi(n as i32) / det.abs();
    let scaled_dual = &dual * sigma;
    let r_rhs = radius_for_budget(&scaled_dual, POISSON_TAIL_BUDGET / amp);
    let tail_rhs = amp * lattice_gaussian_tail(&scaled_dual, r_rhs);
    let rhs_terms: Vec<Complex64> = enumerate_ball(&dual, &vec![0.0; n], r_rhs / sigma)?
        .iter()
        .map(|w| {
            let xi = apply(&dual, w);
            let r2: f64 = xi.iter().map(|v| v * v).sum();
            let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
            Complex64::from_polar(amp * (-PI * sigma * sigma * r2).exp(), TAU * phase)
        })
        .collect();
    let rhs = tree_sum(&rhs_terms);

    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::Numerical("non-finite Poisson sum".into()));
    }
    Ok(PoissonReport {
        lhs,
        rhs,
        diff: (rhs - lhs).norm(),
        lhs_terms: lhs_terms.len(),
        rhs_terms: rhs_terms.len(),
        tail_bound: tail_lhs + tail_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn theta_identity() {
        let rep = poisson_check(&DMatrix::identity(1, 1), 1.0, &[0.0]).unwrap();
        let theta: f64 = (-50i64..=50).map(|n| (-PI * (n * n) as f64).exp()).sum();
        assert!((rep.lhs - theta).abs() < 1e-14);
        assert!(rep.diff < 1e-12);
    }

    #[test]
    fn random_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let b = DMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.0 } + rng.gen_range(-0.4..0.4));
            for _ in 0..20 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let rep = poisson_check(&b, 1.0, &x).unwrap();
                assert!(rep.diff < 1e-10, "{}", rep.diff);
            }
        }
    }

    #[test]
    fn periodic_in_x() {
        let b = DMatrix::from_row_slice(2, 2, &[1.3, 0.2, -0.1, 0.7]) * 1.5;
        let x = [0.3, -0.2];
        let shift = apply(&b, &[2, -1]);
        let x2 = [x[0] + shift[0], x[1] + shift[1]];
        let a = poisson_check(&b, 1.0, &x).unwrap();
        let c = poisson_check(&b, 1.0, &x2).unwrap();
        assert!((a.lhs - c.lhs).abs() < 1e-12);
    }
}
