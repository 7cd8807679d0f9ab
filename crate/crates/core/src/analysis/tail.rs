//! Explicit tail bounds for Gaussian sums over shifted lattices.

use nalgebra::DMatrix;
use statrs::function::gamma::{gamma, gamma_ur};

/// LLL-reduced copy of the columns of `basis` (`δ = 0.75`).
pub fn lll_reduce(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let n = basis.ncols();
    let mut b: Vec<Vec<f64>> = (0..n).map(|j| basis.column(j).iter().copied().collect()).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let gso = |b: &[Vec<f64>]| {
        let mut bs: Vec<Vec<f64>> = vec![];
        let mut mu = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                mu[i][j] = dot(&b[i], &bs[j]) / dot(&bs[j], &bs[j]);
                for (x, y) in v.iter_mut().zip(&bs[j]) {
                    *x -= mu[i][j] * y;
                }
            }
            bs.push(v);
        }
        (bs, mu)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gso(&b);
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (bs, mu) = gso(&b);
        let lhs = dot(&bs[k], &bs[k]);
        let rhs = (0.75 - mu[k][k - 1].powi(2)) * dot(&bs[k - 1], &bs[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    DMatrix::from_fn(basis.nrows(), n, |i, j| b[j][i])
}

/// Circumradius of the Gram–Schmidt box of an LLL-reduced basis, a
/// fundamental domain of the lattice.
pub fn cell_radius(basis: &DMatrix<f64>) -> f64 {
    let qr = lll_reduce(basis).qr();
    let r = qr.r();
    0.5 * (0..r.nrows()).map(|i| r[(i, i)].powi(2)).sum::<f64>().sqrt()
}

/// `∫_a^∞ e^{-π s²} s^k ds` for `a ≥ 0`.
fn gauss_moment_tail(k: usize, a: f64) -> f64 {
    let s = (k as f64 + 1.0) / 2.0;
    let q = if a <= 0.0 { 1.0 } else { gamma_ur(s, std::f64::consts::PI * a * a) };
    0.5 * std::f64::consts::PI.powf(-s) * gamma(s) * q
}

/// Upper bound on `Σ e^{-π|y|²}` over the points `y` of any translate of
/// the lattice `A·Z^N` with `|y| > radius`. Infinite when `radius` is
/// below twice the cell radius.
pub fn lattice_gaussian_tail(basis: &DMatrix<f64>, radius: f64) -> f64 {
    let n = basis.ncols();
    let covol = basis.determinant().abs();
    let c = cell_radius(basis);
    let a = radius - 2.0 * c;
    if a < 0.0 || covol == 0.0 {
        return f64::INFINITY;
    }
    let nf = n as f64;
    let sphere = 2.0 * std::f64::consts::PI.powf(nf / 2.0) / gamma(nf / 2.0);
    let integral = if n == 1 {
        gauss_moment_tail(0, a)
    } else {
        2f64.powi(n as i32 - 2) * (gauss_moment_tail(n - 1, a) + c.powi(n as i32 - 1) * gauss_moment_tail(0, a))
    };
    sphere * integral / covol
}

/// Smallest radius on a `0.25` grid above `2·cell_radius` whose tail bound
/// is within `budget`.
pub fn radius_for_budget(basis: &DMatrix<f64>, budget: f64) -> f64 {
    let c = cell_radius(basis);
    let mut r = 2.0 * c + 0.25;
    while lattice_gaussian_tail(basis, r) > budget {
        r += 0.25;
    }
    r
}
