use quasilattice::analysis::{default_translates, nl_convergence, TestFunctionSpec};
use quasilattice::{build_scheme, HalfOpenBox, SchemeDescriptor};

fn main() {
    let translates = default_translates(&HalfOpenBox::interval(0.0, 200.0), 0.0, 16).unwrap();
    for torsion in [vec![], vec![2]] {
        let s = build_scheme(&SchemeDescriptor::sturmian(torsion.clone())).unwrap();
        for sp in [0.05, 0.1, 0.2, 0.3] {
            let spec = TestFunctionSpec::gaussian_pair(1, s.group(), 1.0, sp);
            let t = nl_convergence(&s, &spec, &[10.0, 100.0, 1000.0], &translates).unwrap();
            for row in &t.rows {
                println!("{torsion:?} σψ={sp} r={} max={:.3e} mean={:.3e} spread={:.3e}", row.r, row.max_error, row.mean_error, row.spread);
            }
        }
    }
}
