use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::group::{add, character_eval};

fn fib() -> CpScheme {
    build_scheme(&SchemeDescriptor::sturmian(vec![])).unwrap()
}

fn coupled(d: usize, torus: usize, torsion: Vec<u64>) -> CpScheme {
    build_scheme(&SchemeDescriptor::new(1, GroupSpec { d, torus, torsion })).unwrap()
}

#[test]
fn existence_examples() {
    let g = |t: Vec<u64>| GroupSpec { d: 1, torus: 0, torsion: t };
    assert_eq!(scheme_exists(1, &g(vec![2, 2, 2])), Existence::Obstructed { prime: 2, rank: 3 });
    assert_eq!(scheme_exists(1, &g(vec![2, 2])), Existence::Exists);
    assert_eq!(scheme_exists(1, &GroupSpec { d: 3, torus: 2, torsion: vec![] }), Existence::Exists);
    assert_eq!(scheme_exists(2, &g(vec![2, 2, 2])), Existence::Exists);
    // smallest offending prime wins
    assert_eq!(scheme_exists(1, &g(vec![15, 15, 15, 2])), Existence::Obstructed { prime: 3, rank: 3 });
}

#[test]
fn existence_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let t: Vec<u64> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(2..13)).collect();
        let g = GroupSpec { d: 1, torus: 0, torsion: t.clone() };
        if scheme_exists(1, &g) == Existence::Exists {
            for drop in 0..t.len() {
                let mut t2 = t.clone();
                t2.remove(drop);
                let g2 = GroupSpec { torsion: t2, ..g.clone() };
                assert_eq!(scheme_exists(1, &g2), Existence::Exists);
            }
        }
    }
}

#[test]
fn t_matrix_examples() {
    let t = build_t(&[0.0], &[0.3]).unwrap();
    assert_eq!(t, DMatrix::zeros(2, 2));
    let t = build_t(&[0.5], &[1.0 / 3.0]).unwrap();
    assert!((t[(0, 1)] - 1.0 / 6.0).abs() < 1e-16 && (t[(1, 0)] - 1.0 / 6.0).abs() < 1e-16);
    assert_eq!(t[(0, 0)], 0.0);
    assert!(build_t(&[1.0], &[1.0]).is_err());
}

#[test]
fn t_matrix_spectral_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let m = rng.gen_range(1..4);
        let d = rng.gen_range(1..4);
        let a: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.6..0.6)).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.6..0.6)).collect();
        if norm(&a) * norm(&b) >= 1.0 {
            continue;
        }
        let t = build_t(&a, &b).unwrap();
        let sv = t.clone().svd(false, false).singular_values;
        assert!((sv.max() - norm(&a) * norm(&b)).abs() < 1e-10);
        let eye = DMatrix::<f64>::identity(m + d, m + d);
        assert!((eye + t).svd(false, false).singular_values.min() > 0.0);
    }
}

#[test]
fn sturmian_covolume() {
    let s = fib();
    let (a, b) = (1.0 / 2f64.sqrt(), 1.0 / 3f64.sqrt());
    assert_eq!(s.params.alpha, vec![a]);
    assert_eq!(s.params.beta, vec![b]);
    // 2x2 determinant oracle
    let det = 1.0 * b - a * 1.0;
    assert!((s.section_mass - det.abs()).abs() < 1e-14);
    let (p1, p2) = s.project_point(&[3, -2]).unwrap();
    assert!((p1[0] - (3.0 - 2.0 * a)).abs() < 1e-14);
    assert!((p2.real[0] - (3.0 - 2.0 * b)).abs() < 1e-14);
}

#[test]
fn z2_example_generator() {
    let s = build_scheme(&SchemeDescriptor::sturmian(vec![2])).unwrap();
    let (p1, p2) = s.project_point(&[0, 0, 1]).unwrap();
    assert_eq!(p2.disc, vec![1]);
    assert!((p1[0] - 0.5).abs() < 1e-15);
    assert!((p2.real[0] - 0.5).abs() < 1e-15);
    // 2 h_sigma lands in the zero fiber, on the base lattice point (1, 1)
    let (p1, p2) = s.project_point(&[0, 0, 2]).unwrap();
    assert_eq!(p2.disc, vec![0]);
    assert!((p1[0] - 1.0).abs() < 1e-15 && (p2.real[0] - 1.0).abs() < 1e-15);
    // s(H) = |beta - alpha| as for the torsion-free lattice
    assert!((s.section_mass - fib().section_mass).abs() < 1e-14);
}

#[test]
fn z2_squared_uses_second_slot() {
    let s = build_scheme(&SchemeDescriptor::sturmian(vec![2, 2])).unwrap();
    let (a, b) = (s.params.alpha[0], s.params.beta[0]);
    let (p1, p2) = s.project_point(&[0, 0, 0, 1]).unwrap();
    assert_eq!(p2.disc, vec![0, 1]);
    assert!((p1[0] - a / 2.0).abs() < 1e-15 && (p2.real[0] - b / 2.0).abs() < 1e-15);
}

#[test]
fn obstructed_build_is_rejected() {
    let err = build_scheme(&SchemeDescriptor::sturmian(vec![2, 2, 2])).unwrap_err();
    assert!(matches!(err, Error::Obstructed { prime: 2, rank: 3, slots: 2 }));
}

#[test]
fn forced_obstruction_collides_in_p1() {
    let s = build_scheme_forced(&SchemeDescriptor::sturmian(vec![2, 2, 2])).unwrap();
    let (a, _) = s.project_point(&[0, 0, 1, 0, 0]).unwrap();
    let (b, gb) = s.project_point(&[0, 0, 0, 0, 1]).unwrap();
    assert_eq!(a, b);
    assert_eq!(gb.disc, vec![0, 0, 1]);
    let report = structure_check(&s, 3, 1e-9).unwrap();
    assert_eq!(report.p1_min_distance, 0.0);
    assert!(!report.p1_injective);
}

#[test]
fn manual_slot_collision() {
    let mut desc = SchemeDescriptor::new(1, GroupSpec { d: 1, torus: 0, torsion: vec![2, 4] });
    desc.torsion_slots = Some(vec![1, 1]);
    assert!(matches!(build_scheme(&desc), Err(Error::SlotCollision { prime: 2, .. })));
    desc.torsion_slots = Some(vec![1, 2]);
    assert!(build_scheme(&desc).is_ok());
    desc.torsion_slots = Some(vec![1, 3]);
    assert!(matches!(build_scheme(&desc), Err(Error::Precondition(_))));
}

#[test]
fn mixed_primes_need_per_prime_slots() {
    // every pair of factors shares a prime, yet each p-rank is 2 = m + d
    let s = coupled(1, 0, vec![6, 10, 15]);
    let r = structure_check(&s, 4, 1e-9).unwrap();
    assert!(r.p1_injective && r.p2_injective, "{r:?}");
}

#[test]
fn prufer_and_rational_truncations() {
    let mut desc = SchemeDescriptor::new(1, GroupSpec::real(1));
    desc.truncations = vec![Truncation::Prufer { p: 3, s: 2 }, Truncation::Rational { q_denominator: 4 }];
    let s = build_scheme(&desc).unwrap();
    assert_eq!(s.group().torsion, vec![9, 4]);
    assert_eq!(s.params.eta.len(), 1);
    let json: SchemeDescriptor = serde_json::from_str(
        r#"{"m":1,"group":{"d":1,"torus":0,"torsion":[]},"prime_offset":0,"truncations":[{"p":3,"s":2},{"q_denominator":4}]}"#,
    )
    .unwrap();
    assert_eq!(json.truncations, desc.truncations);
    desc.truncations = vec![Truncation::Prufer { p: 4, s: 1 }];
    assert!(matches!(build_scheme(&desc), Err(Error::NotPrime(4))));
}

#[test]
fn norm_condition_raises_offset() {
    let desc = SchemeDescriptor::new(3, GroupSpec::real(3));
    let s = build_scheme(&desc).unwrap();
    assert!(norm(&s.params.alpha) * norm(&s.params.beta) < 1.0);
}

#[test]
fn torus_rows_follow_first_column() {
    let s = coupled(1, 2, vec![]);
    let (a1, g) = (s.params.alpha[0], &s.params.gamma);
    let (_, p2) = s.project_point(&[5, 0, 0, 0]).unwrap();
    for k in 0..2 {
        let want = (5.0 * a1 * g[k]).rem_euclid(1.0);
        assert!((p2.torus[k] - want).abs() < 1e-12);
    }
    // kill columns vanish in G
    let (p1, p2) = s.project_point(&[0, 0, 1, 0]).unwrap();
    assert!(p1[0] == 0.0 && p2.real[0] == 0.0 && p2.torus.iter().all(|&t| t == 0.0));
}

fn schemes() -> Vec<CpScheme> {
    vec![
        fib(),
        build_scheme(&SchemeDescriptor::sturmian(vec![2])).unwrap(),
        coupled(1, 0, vec![]),
        coupled(2, 0, vec![]),
        coupled(1, 1, vec![]),
        coupled(1, 0, vec![2, 2]),
        coupled(1, 0, vec![4, 3]),
        coupled(2, 1, vec![2, 2, 2, 9]),
        build_scheme(&SchemeDescriptor::new(2, GroupSpec { d: 1, torus: 1, torsion: vec![6] })).unwrap(),
    ]
}

#[test]
fn dual_and_mass_invariants() {
    for s in schemes() {
        assert!(s.dual_residual() <= 1e-10);
        assert!((s.section_mass * s.dual_section_mass() - 1.0).abs() <= 1e-9);
    }
}

fn random_z(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

#[test]
fn projection_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in schemes() {
        let n = s.basis.dim();
        for _ in 0..100 {
            let (z1, z2) = (random_z(&mut rng, n, 50), random_z(&mut rng, n, 50));
            let sum: Vec<i64> = z1.iter().zip(&z2).map(|(a, b)| a + b).collect();
            let (a1, a2) = s.project_point(&z1).unwrap();
            let (b1, b2) = s.project_point(&z2).unwrap();
            let (c1, c2) = s.project_point(&sum).unwrap();
            let g = add(&a2, &b2, s.group()).unwrap();
            assert_eq!(g.disc, c2.disc);
            for k in 0..a1.len() {
                assert!((a1[k] + b1[k] - c1[k]).abs() < 1e-9);
            }
            for (x, y) in g.real.iter().zip(&c2.real) {
                assert!((x - y).abs() < 1e-9);
            }
            for (x, y) in g.torus.iter().zip(&c2.torus) {
                assert!(crate::geometry::circle_dist(*x, *y) < 1e-9);
            }
        }
    }
}

#[test]
fn dual_pairing_annihilates() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for s in schemes() {
        let n = s.basis.dim();
        for _ in 0..200 {
            let (z, w) = (random_z(&mut rng, n, 30), random_z(&mut rng, n, 30));
            let (p1, p2) = s.project_point(&z).unwrap();
            let (q1, q2) = s.dual_project(&w).unwrap();
            let inner: f64 = p1.iter().zip(&q1).map(|(a, b)| a * b).sum();
            let v = character_eval(&q2, &p2, s.group()).unwrap() * Complex64::from_polar(1.0, std::f64::consts::TAU * inner);
            assert!((v - 1.0).norm() < 1e-8, "pairing {v}");
        }
    }
}

#[test]
fn zero_coordinates() {
    for s in schemes() {
        let n = s.basis.dim();
        let (p1, p2) = s.project_point(&vec![0; n]).unwrap();
        assert!(p1.iter().all(|&x| x == 0.0));
        assert_eq!(p2, s.group().zero());
        let (q1, q2) = s.dual_project(&vec![0; n]).unwrap();
        assert!(q1.iter().all(|&x| x == 0.0));
        assert_eq!(q2, DualElement::zero(s.group()));
    }
}

#[test]
fn pure_real_dual_is_inverse_transpose() {
    let s = coupled(2, 0, vec![]);
    let a = &s.basis.matrix;
    let want = a.clone().try_inverse().unwrap().transpose();
    assert!((&s.dual_basis.matrix - want).amax() < 1e-14);
}

#[test]
fn structure_on_theorem_scheme() {
    let s = coupled(1, 0, vec![]);
    let r20 = structure_check(&s, 20, 1e-9).unwrap();
    assert!(r20.p1_injective && r20.p2_injective);
    let r10 = structure_check(&s, 10, 1e-9).unwrap();
    let r50 = structure_check(&s, 50, 1e-9).unwrap();
    assert!(r50.p1_covering_radius < r10.p1_covering_radius);
    assert!(r50.p2_covering_radius < r10.p2_covering_radius);
}
