//! Integer points of a lattice `B·Z^N` inside boxes and balls.

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::window::HalfOpenBox;

/// Cartesian product of inclusive integer ranges, lexicographic order.
pub fn grid(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Every `z` with `B z ∈ target`, sorted lexicographically.
///
/// The target is pulled back through `B^{-1}` to an integer bounding box
/// (inflated by one index on each side). Coordinates are then fixed one at
/// a time; each step narrows the next coordinate's range by interval
/// propagation through the box constraints, and the last coordinate is
/// solved exactly along a line. Every candidate is confirmed with the same
/// `B z` product used by projections.
pub fn enumerate_lattice(basis: &DMatrix<f64>, target: &HalfOpenBox) -> Result<Vec<Vec<i64>>> {
    enumerate_lattice_with(basis, target, Exec::default())
}

pub fn enumerate_lattice_with(basis: &DMatrix<f64>, target: &HalfOpenBox, exec: Exec) -> Result<Vec<Vec<i64>>> {
    let n = basis.nrows();
    check_dim("target box", n, target.dim())?;
    if !target.is_bounded() {
        return Err(Error::Precondition("enumeration target must be bounded".into()));
    }
    if target.is_empty() {
        return Ok(vec![]);
    }
    let inv = basis.clone().lu().try_inverse().ok_or(Error::Singular)?;
    if !inv.iter().all(|x| x.is_finite()) {
        return Err(Error::Singular);
    }
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut hi) = (0.0, 0.0);
        for j in 0..n {
            let (a, b) = (inv[(i, j)] * target.lo[j], inv[(i, j)] * target.hi[j]);
            lo += a.min(b);
            hi += a.max(b);
        }
        if (hi - lo) > 1e12 {
            return Err(Error::Precondition("enumeration range too large".into()));
        }
        bounds.push((lo.floor() as i64 - 1, hi.ceil() as i64 + 1));
    }

    // widest coordinate innermost
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (bounds[i].1 - bounds[i].0, i));
    let e = Enumerator { basis, target, bounds: &bounds, order: &order };

    let first = order[0];
    let (f_lo, f_hi) = e.range_for(0, &vec![0.0; n]).unwrap_or((1, 0));
    let firsts: Vec<i64> = if n == 1 { vec![0] } else { (f_lo..=f_hi).collect() };
    let mut out: Vec<Vec<i64>> = if n == 1 {
        let mut acc = vec![];
        e.recurse(0, &mut vec![0; n], &mut vec![0.0; n], &mut acc);
        acc
    } else {
        exec.map(&firsts, |&v| {
            let mut z = vec![0i64; n];
            let mut partial = vec![0.0; n];
            z[first] = v;
            for (r, p) in partial.iter_mut().enumerate() {
                *p = basis[(r, first)] * v as f64;
            }
            let mut acc = vec![];
            e.recurse(1, &mut z, &mut partial, &mut acc);
            acc
        })
        .into_iter()
        .flatten()
        .collect()
    };
    out.sort();
    Ok(out)
}

struct Enumerator<'a> {
    basis: &'a DMatrix<f64>,
    target: &'a HalfOpenBox,
    bounds: &'a [(i64, i64)],
    order: &'a [usize],
}

impl Enumerator<'_> {
    /// Feasible integer range of coordinate `order[level]` given the partial
    /// image of the coordinates already fixed, treating later coordinates as
    /// free within their bounding ranges.
    fn range_for(&self, level: usize, partial: &[f64]) -> Option<(i64, i64)> {
        let n = self.basis.nrows();
        let c = self.order[level];
        let (mut lo, mut hi) = (self.bounds[c].0 as f64, self.bounds[c].1 as f64);
        for r in 0..n {
            let coef = self.basis[(r, c)];
            let (mut rest_lo, mut rest_hi) = (0.0, 0.0);
            for &j in &self.order[level + 1..] {
                let (a, b) = (self.basis[(r, j)] * self.bounds[j].0 as f64, self.basis[(r, j)] * self.bounds[j].1 as f64);
                rest_lo += a.min(b);
                rest_hi += a.max(b);
            }
            let low = self.target.lo[r] - partial[r] - rest_hi;
            let high = self.target.hi[r] - partial[r] - rest_lo;
            if coef.abs() < 1e-300 {
                if low > 0.0 || high < 0.0 {
                    return None;
                }
                continue;
            }
            let (a, b) = if coef > 0.0 { (low / coef, high / coef) } else { (high / coef, low / coef) };
            lo = lo.max(a);
            hi = hi.min(b);
            if lo > hi + 2.0 {
                return None;
            }
        }
        let (lo, hi) = ((lo.floor() as i64 - 1).max(self.bounds[c].0), (hi.ceil() as i64 + 1).min(self.bounds[c].1));
        (lo <= hi).then_some((lo, hi))
    }

    fn recurse(&self, level: usize, z: &mut Vec<i64>, partial: &mut Vec<f64>, acc: &mut Vec<Vec<i64>>) {
        let n = z.len();
        if level == n {
            if self.target.contains(&apply(self.basis, z)) {
                acc.push(z.clone());
            }
            return;
        }
        let Some((lo, hi)) = self.range_for(level, partial) else {
            return;
        };
        let c = self.order[level];
        for v in lo..=hi {
            z[c] = v;
            for r in 0..n {
                partial[r] += self.basis[(r, c)] * v as f64;
            }
            self.recurse(level + 1, z, partial, acc);
            for r in 0..n {
                partial[r] -= self.basis[(r, c)] * v as f64;
            }
        }
        z[c] = 0;
    }
}

/// `B z` accumulated column by column, in the same order as
/// [`crate::scheme::LatticeBasis::apply`].
pub(crate) fn apply(basis: &DMatrix<f64>, z: &[i64]) -> Vec<f64> {
    let n = basis.nrows();
    let mut y = vec![0.0; n];
    for (j, &zj) in z.iter().enumerate() {
        if zj != 0 {
            let zf = zj as f64;
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += basis[(i, j)] * zf;
            }
        }
    }
    y
}

/// Every `z` with `‖B z + shift‖ ≤ radius` (Fincke–Pohst), sorted.
pub fn enumerate_ball(basis: &DMatrix<f64>, shift: &[f64], radius: f64) -> Result<Vec<Vec<i64>>> {
    let n = basis.nrows();
    check_dim("shift", n, shift.len())?;
    let gram = basis.transpose() * basis;
    let chol = gram.cholesky().ok_or(Error::Singular)?;
    let r = chol.l().transpose();
    let inv = basis.clone().lu().try_inverse().ok_or(Error::Singular)?;
    // center c with B c = -shift
    let center: Vec<f64> = (0..n).map(|i| -(0..n).map(|j| inv[(i, j)] * shift[j]).sum::<f64>()).collect();
    let mut out = vec![];
    let mut z = vec![0i64; n];
    ball_rec(&r, &center, n, radius * radius, &mut z, &mut out);
    out.sort();
    Ok(out)
}

fn ball_rec(r: &DMatrix<f64>, c: &[f64], level: usize, budget: f64, z: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if level == 0 {
        out.push(z.clone());
        return;
    }
    let i = level - 1;
    let n = z.len();
    // offset from already-fixed coordinates j > i
    let mut off = 0.0;
    for j in level..n {
        off += r[(i, j)] * (z[j] as f64 - c[j]);
    }
    let rii = r[(i, i)];
    // (rii (z_i - c_i) + off)^2 <= budget
    let mid = c[i] - off / rii;
    let half = budget.max(0.0).sqrt() / rii.abs();
    let (lo, hi) = ((mid - half).ceil() as i64, (mid + half).floor() as i64);
    for v in lo..=hi {
        let t = rii * (v as f64 - c[i]) + off;
        let rem = budget - t * t;
        if rem < -1e-12 * budget.max(1.0) {
            continue;
        }
        z[i] = v;
        ball_rec(r, c, i, rem, z, out);
    }
    z[i] = 0;
}
