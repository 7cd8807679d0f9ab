//! Prime table and p-ranks of finite abelian groups.

use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

fn table() -> &'static Mutex<Vec<u64>> {
    static TABLE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(sieve(1 << 12)))
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The `k`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(k: usize) -> u64 {
    assert!(k >= 1, "primes are indexed from 1");
    let mut primes = table().lock().expect("prime table poisoned");
    while primes.len() < k {
        let limit = (*primes.last().unwrap_or(&2) as usize) * 2;
        *primes = sieve(limit);
    }
    primes[k - 1]
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of cyclic factors divisible by `p`, i.e. the `k` with
/// `Z_p^k` the `p`-torsion of `⊕ Z_{n_i}`.
pub fn rank_p(torsion: &[u64], p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(torsion.iter().filter(|&&n| n % p == 0).count())
}

/// `(1/√p_{s+1}, …, 1/√p_{s+n})`. When `eps` is given the offset is raised
/// until the Euclidean norm drops below it. Returns the vector and the
/// offset actually used.
pub fn independent_vector(n: usize, eps: Option<f64>, offset: usize) -> (Vec<f64>, usize) {
    assert!(n >= 1);
    let mut s = offset;
    loop {
        let v: Vec<f64> = (1..=n).map(|k| 1.0 / (nth_prime(s + k) as f64).sqrt()).collect();
        match eps {
            Some(eps) if norm(&v) >= eps => s += 1,
            _ => return (v, s),
        }
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let got: Vec<u64> = (1..=10).map(nth_prime).collect();
        assert_eq!(got, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(nth_prime(1000), 7919);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_p(&[2, 2, 2], 2).unwrap(), 3);
        assert_eq!(rank_p(&[4, 2], 2).unwrap(), 2);
        assert_eq!(rank_p(&[6, 10, 15], 5).unwrap(), 2);
        assert!(matches!(rank_p(&[4], 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn independent_vector_examples() {
        let (v, s) = independent_vector(2, None, 0);
        assert_eq!(s, 0);
        assert!((v[0] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((v[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);

        // oracle: scan the prime table for the first p with 1/sqrt(p) < 0.1
        let first = (1..).map(nth_prime).find(|&p| 1.0 / (p as f64).sqrt() < 0.1).unwrap();
        assert_eq!(first, 101);
        let (v, _) = independent_vector(1, Some(0.1), 0);
        assert_eq!(v, vec![1.0 / 101f64.sqrt()]);
    }

    #[test]
    fn independent_vector_respects_eps() {
        for n in 1..6 {
            for eps in [1.0, 0.5, 0.2, 0.05] {
                let (v, _) = independent_vector(n, Some(eps), 0);
                assert!(norm(&v) < eps);
            }
        }
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(prime_factors(97), vec![(97, 1)]);
        assert!(prime_factors(1).is_empty());
    }
}
