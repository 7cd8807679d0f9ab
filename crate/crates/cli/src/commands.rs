use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use quasilattice::analysis::{
    default_translates, empirical_density, nl_convergence_with, poisson_check, theoretical_density, DensityReport,
    TestFunctionSpec,
};
use quasilattice::model_set::{dual_model_set_with, quasicrystal_with, Certificate, PointKind, PointSet};
use quasilattice::sampling::{default_delta, duality_probe_with, universality_sweep_with, FrameReport, SweepConfig, Thresholds, THRESHOLDS};
use quasilattice::scheme::SchemeFile;
use quasilattice::{
    build_scheme, scheme_exists, CpScheme, Exec, Existence, GroupSpec, HalfOpenBox, SchemeDescriptor, SpectrumWindow,
    Window,
};

use crate::io::{parse_box, parse_json, parse_range, read_input, write_file, write_json, CliError, CliResult, Header, Input};
use crate::svg::{scatter, Series};
use crate::{DensityArgs, DualityArgs, ExistsArgs, NlArgs, PointsArgs, PoissonArgs, SweepArgs, WindowArgs};

/// Largest entry-wise deviation tolerated between a stored basis and the
/// rebuilt one.
const BASIS_TOL: f64 = 1e-9;

fn load_scheme(path: &Path) -> CliResult<(CpScheme, Input)> {
    let input = read_input(path)?;
    let value: Value = parse_json(&input)?;
    let scheme = if value.get("params").is_some() {
        let file: SchemeFile =
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", input.name)))?;
        let scheme = CpScheme::from_params(file.params)?;
        let rebuilt = scheme.basis.rows();
        let dev = rebuilt
            .iter()
            .flatten()
            .zip(file.basis.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if rebuilt.len() != file.basis.len() || dev > BASIS_TOL {
            return Err(CliError::Input(format!("{}: stored basis does not match its parameters", input.name)));
        }
        scheme
    } else {
        let desc: SchemeDescriptor =
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", input.name)))?;
        build_scheme(&desc)?
    };
    Ok((scheme, input))
}

fn load_window(args: &WindowArgs, dim: usize) -> CliResult<(Option<Window>, Option<Input>)> {
    if let Some(path) = &args.window {
        let input = read_input(path)?;
        let w: Window = parse_json(&input)?;
        let w = Window::new(w.boxes)?;
        if w.dim().is_some_and(|d| d != dim) {
            return Err(CliError::Input(format!("window has dimension {:?}, scheme needs {dim}", w.dim())));
        }
        return Ok((Some(w), Some(input)));
    }
    if let Some(s) = &args.interval {
        return Ok((Some(Window::new(vec![parse_box(s, dim)?])?), None));
    }
    Ok((None, None))
}

fn load_spectrum(path: &Path, group: &GroupSpec) -> CliResult<(SpectrumWindow, Input)> {
    let input = read_input(path)?;
    let k: SpectrumWindow = parse_json(&input)?;
    let zfreqs = if k.zfreqs.is_empty() { vec![vec![0; group.torus]] } else { k.zfreqs };
    let residues = if k.residues.is_empty() { vec![vec![0; group.torsion.len()]] } else { k.residues };
    let k = SpectrumWindow::new(k.real_boxes, zfreqs, residues)?;
    if let Some(b) = k.real_boxes.iter().find(|b| b.dim() != group.d) {
        return Err(CliError::Input(format!("spectrum box has dimension {}, group needs {}", b.dim(), group.d)));
    }
    Ok((k, input))
}

fn thresholds(theta_a: Option<f64>, theta_i: Option<f64>) -> Thresholds {
    Thresholds { theta_a: theta_a.unwrap_or(THRESHOLDS.theta_a), theta_i: theta_i.unwrap_or(THRESHOLDS.theta_i) }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

pub fn scheme_build(spec: &Path, out: &Path) -> CliResult<u8> {
    let input = read_input(spec)?;
    let desc: SchemeDescriptor = parse_json(&input)?;
    let scheme = build_scheme(&desc)?;
    let file = SchemeFile::new(desc, &scheme);
    write_json(out, &Header::new("scheme build", None, &[&input]), &file)?;
    println!("lattice rank {}, s(H) = {}, wrote {}", scheme.basis.dim(), scheme.section_mass, out.display());
    Ok(0)
}

pub fn exists(args: &ExistsArgs) -> CliResult<u8> {
    let input = read_input(&args.spec)?;
    let value: Value = parse_json(&input)?;
    let (m, group) = if value.get("group").is_some() {
        let desc: SchemeDescriptor =
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", input.name)))?;
        (args.m.unwrap_or(desc.m), desc.effective_group()?)
    } else {
        let group: GroupSpec =
            serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", input.name)))?;
        let m = args.m.ok_or_else(|| CliError::Input("--m is required with a bare group spec".into()))?;
        (m, group)
    };
    group.validate()?;
    match scheme_exists(m, &group) {
        Existence::Exists => {
            println!("exists");
            Ok(0)
        }
        Existence::Obstructed { prime, rank } => {
            println!("obstructed at p={prime}: rank {rank} > m+d = {}", m + group.d);
            Ok(2)
        }
    }
}

fn point_set(
    scheme: &CpScheme,
    window: &WindowArgs,
    spectrum: &Option<std::path::PathBuf>,
    obs: impl Fn(usize) -> CliResult<HalfOpenBox>,
    exec: Exec,
) -> CliResult<(PointSet, f64, Vec<Input>)> {
    let mut inputs = vec![];
    if let Some(path) = spectrum {
        let (k, input) = load_spectrum(path, scheme.group())?;
        inputs.push(input);
        let ps = dual_model_set_with(scheme, &k, &obs(scheme.m())?, exec)?;
        return Ok((ps, k.measure(&scheme.group().torsion), inputs));
    }
    let (w, input) = load_window(window, scheme.m())?;
    let w = w.ok_or_else(|| CliError::Input("need --window, --interval or --spectrum".into()))?;
    inputs.extend(input);
    let ps = quasicrystal_with(scheme, &w, &obs(scheme.group().d)?, exec)?;
    Ok((ps, w.measure(), inputs))
}

pub fn points(args: &PointsArgs, exec: Exec) -> CliResult<u8> {
    let (scheme, scheme_in) = load_scheme(&args.scheme)?;
    let (ps, _, extra) = point_set(&scheme, &args.window, &args.spectrum, |dim| parse_box(&args.obs, dim), exec)?;
    let mut inputs = vec![&scheme_in];
    inputs.extend(extra.iter());
    let header = Header::new("points", None, &inputs);

    let g = &ps.group;
    let mut cols: Vec<String> = (0..ps.points.first().map_or(0, |p| p.coords.len())).map(|i| format!("z{i}")).collect();
    match ps.kind {
        PointKind::Quasicrystal => cols.extend((0..scheme.m()).map(|i| format!("p1_{i}"))),
        PointKind::DualModelSet => {
            let sg = scheme.group();
            cols.extend((0..sg.d).map(|i| format!("q2_real_{i}")));
            cols.extend((0..sg.torus).map(|i| format!("q2_zfreq_{i}")));
            cols.extend((0..sg.torsion.len()).map(|i| format!("q2_disc_{i}")));
        }
    }
    cols.extend((0..g.d).map(|i| format!("real_{i}")));
    cols.extend((0..g.torus).map(|i| format!("torus_{i}")));
    cols.extend((0..g.torsion.len()).map(|i| format!("disc_{i}")));

    let mut csv = header.csv();
    csv.push_str(&cols.join(","));
    csv.push('\n');
    for p in &ps.points {
        let mut row: Vec<String> = p.coords.iter().map(|z| z.to_string()).collect();
        match &p.certificate {
            Certificate::Internal(x) => row.extend(x.iter().map(|v| v.to_string())),
            Certificate::Dual(xi) => {
                row.extend(xi.real.iter().map(|v| v.to_string()));
                row.extend(xi.zfreq.iter().map(|v| v.to_string()));
                row.extend(xi.disc.iter().map(|v| v.to_string()));
            }
        }
        row.extend(p.element.real.iter().map(|v| v.to_string()));
        row.extend(p.element.torus.iter().map(|v| v.to_string()));
        row.extend(p.element.disc.iter().map(|v| v.to_string()));
        writeln!(csv, "{}", row.join(",")).unwrap();
    }
    write_file(&args.out, &csv)?;

    if let Some(svg) = &args.svg {
        if scheme.m() != 1 || scheme.group().d != 1 {
            return Err(CliError::Input("--svg needs m = d = 1".into()));
        }
        let mut fibers: BTreeMap<Vec<u64>, Vec<(f64, f64)>> = BTreeMap::new();
        for p in &ps.points {
            let y = match &p.certificate {
                Certificate::Internal(x) => x[0],
                Certificate::Dual(xi) => xi.real[0],
            };
            let key = match &p.certificate {
                Certificate::Internal(_) => p.element.disc.clone(),
                Certificate::Dual(xi) => xi.disc.clone(),
            };
            fibers.entry(key).or_default().push((p.element.real[0], y));
        }
        let series: Vec<Series> = fibers
            .into_iter()
            .map(|(k, points)| Series { label: format!("disc {k:?}"), points })
            .collect();
        let ylabel = if ps.kind == PointKind::Quasicrystal { "internal coordinate" } else { "dual coordinate" };
        let plot = scatter(&header.svg(), &format!("{} points", ps.len()), "physical coordinate", ylabel, &series);
        write_file(svg, &plot)?;
    }
    println!("{} points written to {}", ps.len(), args.out.display());
    Ok(0)
}

#[derive(Serialize)]
struct DensityOut {
    kind: PointKind,
    window_measure: f64,
    num_points: usize,
    report: DensityReport,
}

pub fn density(args: &DensityArgs, exec: Exec) -> CliResult<u8> {
    if !(args.lmax > 0.0 && args.lmax.is_finite()) || args.translates == 0 {
        return Err(CliError::Input("--lmax must be positive and --translates nonzero".into()));
    }
    let (scheme, scheme_in) = load_scheme(&args.scheme)?;
    let obs = |dim| Ok(HalfOpenBox::cube(dim, 0.0, 2.0 * args.lmax));
    let (ps, w, extra) = point_set(&scheme, &args.window, &args.spectrum, obs, exec)?;
    let sides: Vec<f64> = [100.0, 10.0, 1.0].iter().map(|f| args.lmax / f).collect();
    let translates = default_translates(&ps.obs, args.lmax, args.translates)?;
    let report = empirical_density(&ps, &sides, &translates)?.with_theoretical(theoretical_density(&scheme, w, ps.kind));

    let mut inputs = vec![&scheme_in];
    inputs.extend(extra.iter());
    let header = Header::new("density", None, &inputs);
    for row in &report.rows {
        println!("side {:>10}: D- {:.6}  D+ {:.6}", row.side, row.lower, row.upper);
    }
    if let (Some(t), Some(e)) = (report.theoretical, report.max_rel_error) {
        println!("theoretical {t:.6}, max relative error {e:.3e}");
    }
    let out = DensityOut { kind: ps.kind, window_measure: w, num_points: ps.len(), report };
    write_json(&args.out, &header, &out)?;
    Ok(0)
}

pub fn poisson(args: &PoissonArgs) -> CliResult<u8> {
    let (scheme, scheme_in) = load_scheme(&args.scheme)?;
    let basis = if args.dual { &scheme.dual_basis.matrix } else { &scheme.basis.matrix };
    let n = basis.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut csv = Header::new("poisson", Some(args.seed), &[&scheme_in]).csv();
    csv.push_str("point,x,lhs,rhs_re,rhs_im,diff,lhs_terms,rhs_terms,tail_bound\n");
    let mut worst: f64 = 0.0;
    for i in 0..args.points {
        let u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let x: Vec<f64> = (0..n).map(|r| (0..n).map(|c| basis[(r, c)] * u[c]).sum()).collect();
        let rep = poisson_check(basis, args.sigma, &x)?;
        worst = worst.max(rep.diff);
        writeln!(
            csv,
            "{i},{},{},{},{},{},{},{},{}",
            join(&x),
            rep.lhs,
            rep.rhs.re,
            rep.rhs.im,
            rep.diff,
            rep.lhs_terms,
            rep.rhs_terms,
            rep.tail_bound
        )
        .unwrap();
    }
    if let Some(out) = &args.out {
        write_file(out, &csv)?;
    }
    println!("max |lhs - rhs| = {worst:.3e} over {} points (rank {n})", args.points);
    if !(worst <= args.tol) {
        return Err(CliError::Numerical(format!(
            "Poisson summation identity violated: max |lhs - rhs| = {worst:e} > {:e}",
            args.tol
        )));
    }
    Ok(0)
}

pub fn nl(args: &NlArgs, exec: Exec) -> CliResult<u8> {
    let (scheme, scheme_in) = load_scheme(&args.scheme)?;
    let mut inputs = vec![&scheme_in];
    let fn_in;
    let spec = match &args.test_fn {
        Some(path) => {
            fn_in = read_input(path)?;
            inputs.push(&fn_in);
            parse_json::<TestFunctionSpec>(&fn_in)?
        }
        None => TestFunctionSpec::gaussian_pair(scheme.m(), scheme.group(), args.sigma_phi, args.sigma_psi),
    };
    let rs = match &args.rs {
        Some(rs) => rs.clone(),
        None => {
            let mut rs = vec![];
            let mut r = 10.0;
            while r < args.rmax * (1.0 - 1e-12) {
                rs.push(r);
                r *= 10.0;
            }
            rs.push(args.rmax);
            rs
        }
    };
    if rs.iter().any(|r| !(*r > 0.0 && r.is_finite())) || args.translates == 0 {
        return Err(CliError::Input("radii must be positive and --translates nonzero".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let translates: Vec<Vec<f64>> =
        (0..args.translates).map(|_| (0..scheme.m()).map(|_| rng.gen_range(-100.0..100.0)).collect()).collect();
    let table = nl_convergence_with(&scheme, &spec, &rs, &translates, exec)?;

    let mut csv = Header::new("nl", Some(args.seed), &inputs).csv();
    writeln!(csv, "# limit: {} {}", table.limit.re, table.limit.im).unwrap();
    csv.push_str("r,translate,a,error\n");
    for row in &table.rows {
        for (i, (e, a)) in row.errors.iter().zip(&translates).enumerate() {
            writeln!(csv, "{},{i},{},{e}", row.r, join(a)).unwrap();
        }
        println!("r = {:>10}: max {:.3e}  mean {:.3e}  spread {:.3e}", row.r, row.max_error, row.mean_error, row.spread);
    }
    write_file(&args.out, &csv)?;
    Ok(0)
}

pub fn sweep(args: &SweepArgs, exec: Exec) -> CliResult<u8> {
    let (scheme, scheme_in) = load_scheme(&args.scheme)?;
    let cfg = SweepConfig {
        interval: match &args.interval {
            Some(s) => parse_range(s)?,
            None => (0.0, scheme.section_mass),
        },
        ratios: args.ratios.clone(),
        trials: args.trials,
        obs_len: args.l,
        delta: args.delta.unwrap_or_else(|| default_delta(args.l)),
        band: args.band.as_deref().map(parse_range).transpose()?,
        seed: args.seed,
        thresholds: thresholds(args.theta_a, args.theta_i),
    };
    let rows = universality_sweep_with(&scheme, &cfg, exec)?;
    let header = Header::new("sweep", Some(args.seed), &[&scheme_in]);
    let mut csv = header.csv();
    csv.push_str("ratio,trial,mu_k,a_est,b_est,cond,verdict\n");
    for r in &rows {
        let f = &r.report;
        writeln!(csv, "{},{},{},{},{},{},{}", r.ratio, r.trial, f.spectrum_measure, f.a_est, f.b_est, f.cond, f.verdict)
            .unwrap();
    }
    write_file(&args.out, &csv)?;
    for &ratio in &cfg.ratios {
        let of: Vec<_> = rows.iter().filter(|r| r.ratio == ratio).collect();
        let count = |v: &str| of.iter().filter(|r| r.report.verdict.to_string() == v).count();
        println!(
            "ratio {ratio}: {} sampling-like, {} interpolation-like, {} critical",
            count("sampling-like"),
            count("interpolation-like"),
            count("critical")
        );
    }
    if let Some(svg) = &args.svg {
        let series = vec![Series { label: "Aest".into(), points: rows.iter().map(|r| (r.ratio, r.report.a_est)).collect() }];
        let title = format!("lower frame bound estimate, L = {}", args.l);
        write_file(svg, &scatter(&header.svg(), &title, "mu(K) / D(Lambda)", "Aest", &series))?;
    }
    Ok(0)
}

pub fn duality(args: &DualityArgs, exec: Exec) -> CliResult<u8> {
    let (scheme, scheme_in) = load_scheme(&args.scheme)?;
    let (s, s_in) = load_window(&args.window, scheme.m())?;
    let s = s.ok_or_else(|| CliError::Input("need --window or --interval for S".into()))?;
    let (k, k_in) = load_spectrum(&args.spectrum, scheme.group())?;
    let delta = args.delta.unwrap_or_else(|| default_delta(args.l));
    let th = thresholds(args.theta_a, args.theta_i);
    let rep = duality_probe_with(&scheme, &s, &k, args.l, delta, &th, exec)?;

    let mut inputs = vec![&scheme_in];
    inputs.extend(s_in.iter());
    inputs.push(&k_in);
    let mut csv = Header::new("duality", None, &inputs).csv();
    csv.push_str("probe,num_points,num_freqs,density,spectrum_measure,a_est,b_est,i_est,cond,verdict\n");
    let line = |name: &str, f: &FrameReport| {
        format!(
            "{name},{},{},{},{},{},{},{},{},{}\n",
            f.num_points, f.num_freqs, f.density, f.spectrum_measure, f.a_est, f.b_est, f.i_est, f.cond, f.verdict
        )
    };
    csv.push_str(&line("interpolation", &rep.interpolation));
    csv.push_str(&line("sampling", &rep.sampling));
    write_file(&args.out, &csv)?;
    println!(
        "M_K interpolation: Iest {:.3e} ({}); Lambda_S sampling: Aest {:.3e} ({})",
        rep.interpolation.i_est, rep.interpolation.verdict, rep.sampling.a_est, rep.sampling.verdict
    );
    Ok(0)
}
