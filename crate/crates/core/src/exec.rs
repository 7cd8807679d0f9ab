//! Execution mode for the data-parallel loops.
//!
//! With the `parallel` feature the hot loops (lattice enumeration, Riesz
//! sums, sweep trials) run on the rayon pool. Without it, or when
//! [`Exec::Sequential`] is requested, the same code runs on the calling
//! thread. Results are identical in both modes: parallel maps keep input
//! order and reductions are done by [`tree_sum`] over the ordered output.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Ordered map over `items`.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Ordered map over `0..n`.
    pub fn map_range<U, F>(self, n: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }
}

/// Pairwise summation in a fixed tree shape, so the result only depends
/// on the order of `terms`.
pub fn tree_sum(terms: &[Complex64]) -> Complex64 {
    match terms.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => terms[0],
        n if n <= 8 => terms.iter().sum(),
        n => {
            let (a, b) = terms.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

pub fn tree_sum_real(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        n if n <= 8 => terms.iter().sum(),
        n => {
            let (a, b) = terms.split_at(n / 2);
            tree_sum_real(a) + tree_sum_real(b)
        }
    }
}
