//! Oracle run behind the verdict thresholds in `sampling::calibration`:
//! distributions of `Aest` and the interpolation bound on the Fibonacci
//! scheme with `I = [0, s(H))` and `L = 500`, over seeds other than the
//! acceptance seed.

use quasilattice::sampling::{universality_sweep, SweepConfig, Thresholds};
use quasilattice::{build_scheme, SchemeDescriptor};

fn quantiles(mut v: Vec<f64>) -> String {
    v.sort_by(f64::total_cmp);
    let q = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
    format!("min {:.2e} q05 {:.2e} q50 {:.2e} max {:.2e}", q(0.0), q(0.05), q(0.5), q(1.0))
}

fn main() {
    let s = build_scheme(&SchemeDescriptor::sturmian(vec![])).unwrap();
    let l = 500.0;
    for (name, delta) in [("1/L", 1.0 / l), ("1/(4L)", 1.0 / (4.0 * l))] {
        let seeds: Vec<u64> = if name == "1/L" { vec![1, 2, 3, 4, 5, 6, 8, 9] } else { vec![1] };
        let mut rows = vec![];
        for seed in seeds {
            let cfg = SweepConfig {
                interval: (0.0, s.section_mass),
                ratios: vec![0.8, 1.25],
                trials: 20,
                obs_len: l,
                delta,
                band: None,
                seed,
                thresholds: Thresholds { theta_a: 0.0, theta_i: 0.0 },
            };
            rows.extend(universality_sweep(&s, &cfg).unwrap());
        }
        for ratio in [0.8, 1.25] {
            let sel: Vec<_> = rows.iter().filter(|r| r.ratio == ratio).map(|r| &r.report).collect();
            println!("δ={name} ρ={ratio} n={}", sel.len());
            println!("  Aest {}", quantiles(sel.iter().map(|r| r.a_est).collect()));
            println!("  Iest {}", quantiles(sel.iter().map(|r| r.i_est).collect()));
        }
    }
}
