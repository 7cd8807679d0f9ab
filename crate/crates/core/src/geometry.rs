//! Closest pairs and covering radii for finite point clouds.

use crate::exec::Exec;

/// Minimum Euclidean distance between points of `pts` (all the same
/// dimension, at least one). Sort-and-sweep on the first coordinate.
pub fn closest_pair(pts: &[Vec<f64>]) -> f64 {
    closest_pair_by(pts, |a, b| euclid_sq(a, b))
}

/// Closest pair under a metric that dominates `|a[0] - b[0]|`.
pub fn closest_pair_by<F>(pts: &[Vec<f64>], dist_sq: F) -> f64
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]));
    let mut best = f64::INFINITY;
    for (k, &i) in idx.iter().enumerate() {
        for &j in &idx[k + 1..] {
            let dx = pts[j][0] - pts[i][0];
            if dx * dx >= best {
                break;
            }
            best = best.min(dist_sq(&pts[i], &pts[j]));
        }
    }
    best.sqrt()
}

pub(crate) fn euclid_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).abs() % 1.0;
    d.min(1.0 - d)
}

fn torus_dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| circle_dist(*x, *y).powi(2)).sum()
}

/// Covering radius of points in `[0,1)^dim` with the flat torus metric.
/// Exact for `dim == 1` (largest circular gap / 2); for higher dimensions
/// the maximum nearest-point distance over a regular probe grid.
pub fn torus_covering_radius(pts: &[Vec<f64>], dim: usize) -> f64 {
    torus_covering_radius_with(pts, dim, Exec::default())
}

pub fn torus_covering_radius_with(pts: &[Vec<f64>], dim: usize, exec: Exec) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    if pts.is_empty() {
        return f64::INFINITY;
    }
    if dim == 1 {
        let mut xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        let mut gap = xs[0] + 1.0 - xs[xs.len() - 1];
        for w in xs.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        return gap / 2.0;
    }
    let per_axis: usize = match dim {
        2 => 64,
        3 => 16,
        4 => 8,
        _ => 4,
    };
    let buckets = Buckets::new(pts, dim);
    let probes = per_axis.pow(dim as u32);
    let dists = exec.map_range(probes, |k| {
        let mut q = Vec::with_capacity(dim);
        let mut rem = k;
        for _ in 0..dim {
            q.push(((rem % per_axis) as f64 + 0.5) / per_axis as f64);
            rem /= per_axis;
        }
        buckets.nearest(&q)
    });
    dists.into_iter().fold(0.0, f64::max)
}

struct Buckets<'a> {
    pts: &'a [Vec<f64>],
    dim: usize,
    cells: usize,
    table: Vec<Vec<usize>>,
}

impl<'a> Buckets<'a> {
    fn new(pts: &'a [Vec<f64>], dim: usize) -> Self {
        let cells = ((pts.len() as f64).powf(1.0 / dim as f64) / 2.0).floor().clamp(1.0, 256.0) as usize;
        let mut table = vec![vec![]; cells.pow(dim as u32)];
        for (i, p) in pts.iter().enumerate() {
            table[Self::flat(&Self::cell_of(p, cells), cells)].push(i);
        }
        Self { pts, dim, cells, table }
    }

    fn cell_of(p: &[f64], cells: usize) -> Vec<usize> {
        p.iter().map(|x| ((x * cells as f64) as usize).min(cells - 1)).collect()
    }

    fn flat(c: &[usize], cells: usize) -> usize {
        c.iter().rev().fold(0, |acc, &v| acc * cells + v)
    }

    fn nearest(&self, q: &[f64]) -> f64 {
        let home = Self::cell_of(q, self.cells);
        let width = 1.0 / self.cells as f64;
        let mut best = f64::INFINITY;
        let mut ring = 0usize;
        loop {
            let span = 2 * ring + 1;
            let wrapped = span >= self.cells;
            let side = if wrapped { self.cells } else { span };
            let total = side.pow(self.dim as u32);
            for k in 0..total {
                let mut rem = k;
                let mut offs = Vec::with_capacity(self.dim);
                let mut on_shell = wrapped;
                for _ in 0..self.dim {
                    let o = rem % side;
                    rem /= side;
                    if !wrapped && (o == 0 || o == side - 1) {
                        on_shell = true;
                    }
                    offs.push(o);
                }
                if !on_shell && ring > 0 {
                    continue;
                }
                let cell: Vec<usize> = home
                    .iter()
                    .zip(&offs)
                    .map(|(&h, &o)| {
                        if wrapped {
                            o
                        } else {
                            (h + self.cells + o - ring) % self.cells
                        }
                    })
                    .collect();
                for &i in &self.table[Self::flat(&cell, self.cells)] {
                    best = best.min(torus_dist_sq(q, &self.pts[i]));
                }
            }
            if wrapped || (best.is_finite() && best.sqrt() <= ring as f64 * width) {
                return best.sqrt();
            }
            ring += 1;
        }
    }
}
