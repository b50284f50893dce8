//! Implementations of the four subcommands.

use crate::args::{
    BenchmarkArgs, FamilyFlag, GenerateArgs, MethodFlag, RecoverArgs, SolveArgs, SolverFlags,
};
use crate::report::{
    recovery_metrics, write_json, write_pattern, MetaJson, MethodReport, ResultJson,
};
use covsel_core::ans::AnsParams;
use covsel_core::gsics::{gsics_solve, GsicsParams, Method};
use covsel_core::instgen::{generate, Family, GenConfig};
use covsel_core::linalg::{sym_eigen, PairSet, SymMatrix};
use covsel_core::problem::{validate, Instance};
use covsel_core::spg::SpgParams;
use covsel_core::{io, Error, Result};
use std::fs;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Diagonal perturbation used when validating loaded instances.
const VALIDATE_PERTURB: f64 = 1e-8;

fn gen_config(
    n: usize,
    density: f64,
    seed: u64,
    tau: f64,
    vartheta_gen: f64,
    bandwidth: usize,
    family: Family,
) -> GenConfig {
    GenConfig { n, density, tau, vartheta_gen, seed, family, omega_bandwidth: bandwidth }
}

/// Builds the validated instance solved by every command: uniform penalty
/// `rho_off` everywhere (the constrained set's levels are managed by the
/// outer loop).
fn build_instance(sigma: SymMatrix, omega: PairSet, rho_off: f64) -> Result<Instance> {
    if !(rho_off >= 0.0) || !rho_off.is_finite() {
        return Err(Error::InvalidInput(format!(
            "rho-off must be nonnegative, got {rho_off}"
        )));
    }
    let n = sigma.n();
    let inst = Instance::new(sigma, SymMatrix::constant(n, rho_off), omega)?;
    validate(&inst, VALIDATE_PERTURB)
}

fn gsics_params(flags: &SolverFlags, method: MethodFlag) -> GsicsParams {
    let max_feval = flags.max_iter.saturating_mul(2);
    let method = match method {
        MethodFlag::Aspg => Method::Aspg(SpgParams {
            max_iter: flags.max_iter,
            max_feval,
            ..Default::default()
        }),
        MethodFlag::Ans => Method::Ans(AnsParams {
            max_iter: flags.max_iter,
            max_feval,
            ..Default::default()
        }),
        MethodFlag::Both => unreachable!("expand `both` before building params"),
    };
    GsicsParams {
        eps_o: flags.eps_o,
        eps_c: flags.eps_c,
        r_rho: flags.r_rho,
        rho0_omega: flags.rho0,
        method,
        max_outer: flags.max_outer,
        beta0: flags.beta0,
        r_beta: flags.r_beta,
    }
}

fn expand_methods(flag: MethodFlag) -> Vec<MethodFlag> {
    match flag {
        MethodFlag::Both => vec![MethodFlag::Aspg, MethodFlag::Ans],
        single => vec![single],
    }
}

fn method_name(m: MethodFlag) -> &'static str {
    match m {
        MethodFlag::Aspg => "aspg",
        MethodFlag::Ans => "ans",
        MethodFlag::Both => "both",
    }
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let family = match a.family {
        FamilyFlag::Density => Family::Density,
        FamilyFlag::Spike => Family::Spike,
    };
    let cfg = gen_config(a.n, a.density, a.seed, a.tau, a.vartheta_gen, a.bandwidth, family);
    let g = generate(&cfg)?;
    fs::create_dir_all(&a.out)?;
    io::write_matrix(&a.out.join("sigma.mtx"), &g.sigma)?;
    io::write_matrix(&a.out.join("truth.mtx"), &g.a)?;
    io::write_omega(&a.out.join("omega.pairs"), cfg.n, &g.omega)?;
    let meta = MetaJson {
        n: cfg.n,
        family: method_family_name(family).to_string(),
        density: cfg.density,
        tau: cfg.tau,
        vartheta_gen: cfg.vartheta_gen,
        seed: cfg.seed,
        bandwidth: cfg.omega_bandwidth,
        omega_size: g.omega.len(),
    };
    write_json(&a.out.join("meta.json"), &meta)
}

fn method_family_name(f: Family) -> &'static str {
    match f {
        Family::Density => "density",
        Family::Spike => "spike",
    }
}

pub fn cmd_solve(a: &SolveArgs) -> Result<()> {
    // Read and check everything before touching the output directory, so an
    // input error leaves no partial outputs behind.
    let sigma = io::read_matrix(&a.input.join("sigma.mtx"))?;
    let (dim, omega) = io::read_omega(&a.input.join("omega.pairs"))?;
    if dim != sigma.n() {
        return Err(Error::InvalidInput(format!(
            "omega.pairs is for dimension {dim} but sigma.mtx is {0}x{0}",
            sigma.n()
        )));
    }
    let inst = build_instance(sigma, omega, a.rho_off)?;

    fs::create_dir_all(&a.out)?;
    let mut result = ResultJson::default();
    let methods = expand_methods(a.flags.method);
    for (idx, &m) in methods.iter().enumerate() {
        let name = method_name(m);
        let p = gsics_params(&a.flags, m);
        let start = Instant::now();
        let res = gsics_solve(&inst, &p)?;
        eprintln!("{name}: wall time {:.3}s", start.elapsed().as_secs_f64());
        if idx == 0 {
            io::write_matrix(&a.out.join("xstar.mtx"), &res.x_star)?;
        }
        if methods.len() > 1 {
            io::write_matrix(&a.out.join(format!("xstar_{name}.mtx")), &res.x_star)?;
        }
        let rep = MethodReport::build(&inst, &res, a.trace)?;
        match m {
            MethodFlag::Aspg => result.aspg = Some(rep),
            MethodFlag::Ans => result.ans = Some(rep),
            MethodFlag::Both => unreachable!(),
        }
    }
    write_json(&a.out.join("result.json"), &result)
}

/// One benchmark table row; times are wall-clock seconds and machine
/// dependent, everything else is deterministic in the seed.
#[derive(Debug, Clone)]
pub struct BenchmarkRow {
    pub n: usize,
    pub omega_size: usize,
    pub iters_ans: usize,
    pub iters_aspg: usize,
    pub nf_ans: usize,
    pub nf_aspg: usize,
    pub time_ans_s: f64,
    pub time_aspg_s: f64,
}

fn run_benchmark_row(a: &BenchmarkArgs, n: usize, density: f64, seed: u64) -> Result<BenchmarkRow> {
    let cfg = gen_config(n, density, seed, a.tau, a.vartheta_gen, a.bandwidth, Family::Density);
    let g = generate(&cfg)?;
    let inst = build_instance(g.sigma, g.omega, a.rho_off)?;
    let mut row = BenchmarkRow {
        n,
        omega_size: inst.omega().len(),
        iters_ans: 0,
        iters_aspg: 0,
        nf_ans: 0,
        nf_aspg: 0,
        time_ans_s: 0.0,
        time_aspg_s: 0.0,
    };
    for m in [MethodFlag::Ans, MethodFlag::Aspg] {
        let p = gsics_params(&a.flags, m);
        let start = Instant::now();
        let res = gsics_solve(&inst, &p)?;
        let secs = start.elapsed().as_secs_f64();
        let iters: usize = res.inner_reports.iter().map(|r| r.iterations).sum();
        let fevals: usize = res.inner_reports.iter().map(|r| r.fevals).sum();
        match m {
            MethodFlag::Ans => {
                row.iters_ans = iters;
                row.nf_ans = fevals;
                row.time_ans_s = secs;
            }
            MethodFlag::Aspg => {
                row.iters_aspg = iters;
                row.nf_aspg = fevals;
                row.time_aspg_s = secs;
            }
            MethodFlag::Both => unreachable!(),
        }
    }
    Ok(row)
}

/// Worker cap: COVSEL_THREADS if set, otherwise the machine parallelism.
fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var("COVSEL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
        });
    cap.min(jobs).max(1)
}

/// The benchmark table always carries both methods side by side (that is its
/// point); the shared `--method` flag is accepted but does not narrow the
/// columns.
pub fn cmd_benchmark(a: &BenchmarkArgs) -> Result<()> {
    let combos: Vec<(usize, f64)> = a
        .n
        .iter()
        .flat_map(|&n| a.density.iter().map(move |&d| (n, d)))
        .collect();
    if combos.is_empty() {
        return Err(Error::InvalidInput("benchmark needs at least one (n, density) pair".into()));
    }

    let slots: Mutex<Vec<Option<Result<BenchmarkRow>>>> =
        Mutex::new((0..combos.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = worker_count(combos.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= combos.len() {
                    break;
                }
                let (n, density) = combos[idx];
                let row = run_benchmark_row(a, n, density, a.seed.wrapping_add(idx as u64));
                slots.lock().expect("benchmark worker poisoned the row store")[idx] = Some(row);
            });
        }
    });

    fs::create_dir_all(&a.out)?;
    let mut csv = String::from("n,omega_size,iters_ans,iters_aspg,nf_ans,nf_aspg,time_ans_s,time_aspg_s\n");
    let rows = slots.into_inner().expect("benchmark worker poisoned the row store");
    for slot in rows {
        let row = slot.expect("every benchmark row index is claimed by a worker")?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{:.3},{:.3}\n",
            row.n,
            row.omega_size,
            row.iters_ans,
            row.iters_aspg,
            row.nf_ans,
            row.nf_aspg,
            row.time_ans_s,
            row.time_aspg_s
        ));
    }
    fs::write(a.out.join("benchmark.csv"), csv)?;
    Ok(())
}

pub fn cmd_recover(a: &RecoverArgs) -> Result<()> {
    if a.flags.method == MethodFlag::Both {
        return Err(Error::InvalidInput(
            "recover runs a single method; pass --method aspg or --method ans".into(),
        ));
    }
    let cfg = gen_config(a.n, 0.1, a.seed, a.tau, a.vartheta_gen, a.bandwidth, Family::Spike);
    let g = generate(&cfg)?;
    let inst = build_instance(g.sigma.clone(), g.omega.clone(), a.rho_off)?;
    let p = gsics_params(&a.flags, a.flags.method);
    let start = Instant::now();
    let res = gsics_solve(&inst, &p)?;
    eprintln!(
        "{}: wall time {:.3}s",
        method_name(a.flags.method),
        start.elapsed().as_secs_f64()
    );
    let b_inv = invert(&g.b)?;

    fs::create_dir_all(&a.out)?;
    write_pattern(&a.out.join("pattern_truth.pbm"), &g.a)?;
    write_pattern(&a.out.join("pattern_xstar.pbm"), &res.x_star)?;
    write_pattern(&a.out.join("pattern_binv.pbm"), &b_inv)?;
    let metrics = recovery_metrics(&g.a, &res.x_star, &b_inv, a.seed);
    write_json(&a.out.join("recovery_metrics.json"), &metrics)
}

fn invert(m: &SymMatrix) -> Result<SymMatrix> {
    let dec = sym_eigen(m)?;
    let tiny = 1e-14 * dec.lambda.iter().fold(1.0f64, |acc, l| acc.max(l.abs()));
    if dec.lambda.iter().any(|l| l.abs() <= tiny) {
        return Err(Error::NumericalFailure(
            "matrix is numerically singular; cannot form its inverse pattern".into(),
        ));
    }
    let spectrum: Vec<f64> = dec.lambda.iter().map(|l| 1.0 / l).collect();
    Ok(dec.recompose(&spectrum))
}

/// Dispatches a parsed command line.
pub fn dispatch(cli: crate::args::Cli) -> Result<()> {
    match cli.command {
        crate::args::Command::Generate(a) => cmd_generate(&a),
        crate::args::Command::Solve(a) => cmd_solve(&a),
        crate::args::Command::Benchmark(a) => cmd_benchmark(&a),
        crate::args::Command::Recover(a) => cmd_recover(&a),
    }
}
