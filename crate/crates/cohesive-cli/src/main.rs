//! Command-line front end: model/target loading, forward sweeps,
//! reconstruction, the brute-force oracle, the acceptance suite, and
//! plot-ready CSV exports.

mod output;
mod resolve;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use cohesive::forward::{jump_threshold_table, optimal_profile, CohesiveSolver};
use cohesive::model::expr;
use cohesive::oracle::{brute_force_g, OracleConfig};
use cohesive::reconstruct::{khat_from_omega, omega_from_khat, round_trip};
use cohesive::Error;

use output::{csv_line, Manifest};
use resolve::{CatalogParams, ModelSpec, TargetSpec};

#[derive(Parser)]
#[command(
    name = "cohesive",
    version,
    about = "Effective cohesive laws of 1-D phase-field fracture models",
    long_about = None
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the cohesive law of a model over an opening grid.
    Forward(ForwardArgs),
    /// Reconstruct a model ingredient realizing a target law.
    Reconstruct(ReconstructArgs),
    /// Cross-check the law by direct minimization of the profile functional.
    Oracle(OracleArgs),
    /// Run a validation suite and write a JSON report.
    Validate(ValidateArgs),
    /// List or inspect the built-in law catalog.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct ForwardArgs {
    /// Model: `catalog:NAME` or a TOML file.
    #[arg(long)]
    model: String,
    #[command(flatten)]
    params: CatalogParams,
    /// Opening grid `lo:hi:step`.
    #[arg(long = "s-grid")]
    s_grid: String,
    /// Output CSV (columns s, g, g_prime, m_star).
    #[arg(long)]
    out: PathBuf,
    /// Also tabulate the jump threshold to this CSV (columns m, phi).
    #[arg(long)]
    phi: Option<PathBuf>,
    /// Optimal profiles to export: `m,s;m,s;...` (written next to --out).
    #[arg(long)]
    profiles: Option<String>,
    /// Write a run manifest JSON next to --out.
    #[arg(long)]
    manifest: bool,
    /// Emit a plain-text gnuplot script for the main CSV.
    #[arg(long = "gnuplot-script")]
    gnuplot_script: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Target law: `catalog:NAME` or a TOML file.
    #[arg(long)]
    target: String,
    #[command(flatten)]
    params: CatalogParams,
    /// Fixed ingredient: `khat=EXPR` or `omega=EXPR` (expression in t).
    #[arg(long)]
    fix: String,
    /// Analytic derivative of the fixed khat, when available (expression).
    #[arg(long = "fix-prime")]
    fix_prime: Option<String>,
    /// Regime of the target: linear or superlinear.
    #[arg(long, default_value = "linear")]
    regime: String,
    /// Output directory (produced CSV + manifest.json).
    #[arg(long)]
    out: PathBuf,
    /// Round-trip verification grid `lo:hi:step` (optional).
    #[arg(long = "verify-grid")]
    verify_grid: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    /// Model: `catalog:NAME` or a TOML file.
    #[arg(long)]
    model: String,
    #[command(flatten)]
    params: CatalogParams,
    /// Comma-separated opening values.
    #[arg(long)]
    s: String,
    /// Profile node count.
    #[arg(long, default_value_t = 2000)]
    nodes: usize,
    /// Outer m-grid size.
    #[arg(long = "m-grid", default_value_t = 200)]
    m_grid: usize,
    /// Output CSV (s, g_oracle, g_analytic, rel_err, argmin_m).
    #[arg(long)]
    out: PathBuf,
    /// Write a run manifest JSON next to --out.
    #[arg(long)]
    manifest: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Suite name (only `acceptance`).
    #[arg(long, default_value = "acceptance")]
    suite: String,
    /// JSON report path.
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List the entry names.
    List,
    /// Show one entry (law values, parameters, paired models).
    Show {
        name: String,
        #[command(flatten)]
        params: CatalogParams,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Exit-code contract: 2 for hypothesis violations, 3 for numerical
/// non-convergence, 64 for usage errors, 1 otherwise.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::HypothesisViolation(_) | Error::Incompatible(_) => 2,
        Error::NonConvergent { .. } | Error::NonFinite { .. } | Error::EnvelopeViolated { .. } => 3,
        Error::Parse(_) | Error::BadParameters(_) | Error::UnknownEntry(_) => 64,
        _ => 1,
    }
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Forward(a) => forward_cmd(a),
        Command::Reconstruct(a) => reconstruct_cmd(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Validate(a) => validate_cmd(a),
        Command::Catalog(a) => catalog_cmd(a),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("grid `{spec}` must be lo:hi:step")));
    }
    let lo: f64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad grid lo `{}`", parts[0])))?;
    let hi: f64 = parts[1].parse().map_err(|_| Error::Parse(format!("bad grid hi `{}`", parts[1])))?;
    let step: f64 = parts[2].parse().map_err(|_| Error::Parse(format!("bad grid step `{}`", parts[2])))?;
    if !(step > 0.0 && hi >= lo) {
        return Err(Error::Parse(format!("grid `{spec}` needs hi >= lo and step > 0")));
    }
    let n = ((hi - lo) / step).round() as usize;
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

fn forward_cmd(a: ForwardArgs) -> Result<(), Error> {
    let t0 = Instant::now();
    let spec = ModelSpec::resolve(&a.model, &a.params)?;
    let grid = parse_grid(&a.s_grid)?;
    let solver = CohesiveSolver::new(&spec.model)?;
    if solver.phi.classification == cohesive::forward::PhiClass::NonMonotone {
        eprintln!(
            "warning: jump threshold is non-monotone; values come from a best-effort global scan"
        );
    }
    let curve = solver.curve(&grid)?;

    let mut rows = String::from("s,g,g_prime,m_star\n");
    for i in 0..grid.len() {
        rows.push_str(&csv_line(&[
            curve.s_grid[i],
            curve.g_values[i],
            curve.g_prime_values[i],
            curve.m_star_values[i],
        ]));
    }
    std::fs::write(&a.out, rows).map_err(|e| Error::Parse(format!("write {}: {e}", a.out.display())))?;
    let mut outputs = vec![a.out.display().to_string()];

    if let Some(phi_path) = &a.phi {
        let table = jump_threshold_table(&spec.model, 512)?;
        let mut rows = String::from("m,phi\n");
        for (m, v) in table.table.grid().iter().zip(table.table.values()) {
            rows.push_str(&csv_line(&[*m, *v]));
        }
        std::fs::write(phi_path, rows)
            .map_err(|e| Error::Parse(format!("write {}: {e}", phi_path.display())))?;
        outputs.push(phi_path.display().to_string());
    }

    if let Some(profiles) = &a.profiles {
        let dir = a.out.parent().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        for (idx, pair) in profiles.split(';').enumerate() {
            let nums: Vec<&str> = pair.split(',').collect();
            if nums.len() != 2 {
                return Err(Error::Parse(format!("profile spec `{pair}` must be m,s")));
            }
            let m: f64 = nums[0].trim().parse().map_err(|_| Error::Parse(format!("bad m `{}`", nums[0])))?;
            let s: f64 = nums[1].trim().parse().map_err(|_| Error::Parse(format!("bad s `{}`", nums[1])))?;
            let p = optimal_profile(&spec.model, m, s, 256)?;
            let (t, w) = p.full_profile();
            let mut rows = format!(
                "t,w\n# m = {m}, s = {s}, stress = {:.16e}, jump = {:.16e}\n",
                p.lambda, p.jump
            );
            for (ti, wi) in t.iter().zip(&w) {
                rows.push_str(&csv_line(&[*ti, *wi]));
            }
            let path = dir.join(format!("profile_{idx}.csv"));
            std::fs::write(&path, rows)
                .map_err(|e| Error::Parse(format!("write {}: {e}", path.display())))?;
            outputs.push(path.display().to_string());
        }
    }

    if let Some(gp) = &a.gnuplot_script {
        let script = format!(
            "set datafile separator ','\nset key autotitle columnhead\nset xlabel 's'\nset ylabel 'g(s)'\nplot '{}' using 1:2 with lines\n",
            a.out.display()
        );
        std::fs::write(gp, script).map_err(|e| Error::Parse(format!("write {}: {e}", gp.display())))?;
        outputs.push(gp.display().to_string());
    }

    if a.manifest {
        let manifest = Manifest::new("forward", spec.resolved.clone(), &spec.hashes, outputs, t0)
            .with_diagnostics(serde_json::json!({
                "s_frac": curve.s_frac,
                "two_psi1": curve.two_psi1,
                "best_effort": curve.best_effort,
            }));
        manifest.write(&a.out.with_extension("manifest.json"))?;
    }
    Ok(())
}

fn reconstruct_cmd(a: ReconstructArgs) -> Result<(), Error> {
    let t0 = Instant::now();
    let spec = TargetSpec::resolve(&a.target, &a.params, &a.regime)?;
    let (kind, expr_src) = a
        .fix
        .split_once('=')
        .ok_or_else(|| Error::Parse("--fix must be khat=EXPR or omega=EXPR".into()))?;

    let rec = match kind {
        "khat" => {
            let khat = expr::compile(expr_src)?;
            let prime = a.fix_prime.as_deref().map(expr::compile).transpose()?;
            omega_from_khat(&spec.target, khat, prime, expr_src)?
        }
        "omega" => {
            let omega = expr::compile(expr_src)?;
            khat_from_omega(&spec.target, omega, Vec::new(), expr_src)?
        }
        other => {
            return Err(Error::Parse(format!(
                "--fix ingredient must be khat or omega, got `{other}`"
            )))
        }
    };

    std::fs::create_dir_all(&a.out)
        .map_err(|e| Error::Parse(format!("create {}: {e}", a.out.display())))?;
    let csv_path = a.out.join(format!("{}.csv", rec.produced_kind.file_stem()));
    let mut rows = String::from("t,value\n");
    for (t, v) in rec.table.grid().iter().zip(rec.table.values()) {
        rows.push_str(&csv_line(&[*t, *v]));
    }
    std::fs::write(&csv_path, rows)
        .map_err(|e| Error::Parse(format!("write {}: {e}", csv_path.display())))?;

    let verify = match &a.verify_grid {
        Some(g) => {
            let grid = parse_grid(g)?;
            let rt = round_trip(&spec.target, &rec, &grid)?;
            Some(rt)
        }
        None => None,
    };

    let manifest = Manifest::new(
        "reconstruct",
        serde_json::json!({
            "target": spec.resolved,
            "fix": a.fix,
            "regime": a.regime,
        }),
        &spec.hashes,
        vec![csv_path.display().to_string()],
        t0,
    )
    .with_diagnostics(serde_json::json!({
        "produced": rec.produced_kind.file_stem(),
        "fixed": rec.fixed_descriptor,
        "sigma": rec.sigma_scaling,
        "abel_roundtrip_sup": rec.diagnostics.abel_roundtrip_sup,
        "forward_roundtrip_sup": verify.map(|v| v.sup_rel),
        "forward_roundtrip_mean": verify.map(|v| v.mean_rel),
        "hypotheses_all_passed": rec.diagnostics.hypothesis.all_passed(),
        "grids": {
            "produced_nodes": rec.table.grid().len(),
            "density_nodes": rec.density.table().grid().len(),
        },
    }));
    manifest.write(&a.out.join("manifest.json"))?;
    Ok(())
}

fn oracle_cmd(a: OracleArgs) -> Result<(), Error> {
    let t0 = Instant::now();
    let spec = ModelSpec::resolve(&a.model, &a.params)?;
    let cfg = OracleConfig { n_w: a.nodes, n_m: a.m_grid, ..Default::default() };
    let solver = CohesiveSolver::new(&spec.model)?;
    let mut rows = String::from("s,g_oracle,g_analytic,rel_err,argmin_m\n");
    for part in a.s.split(',') {
        let s: f64 = part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad opening `{part}`")))?;
        let oracle = brute_force_g(&spec.model, s, &cfg)?;
        let analytic = solver.value(s)?;
        let rel = ((oracle.value - analytic) / analytic.abs().max(1e-300)).abs();
        rows.push_str(&csv_line(&[s, oracle.value, analytic, rel, oracle.argmin_m]));
    }
    std::fs::write(&a.out, rows)
        .map_err(|e| Error::Parse(format!("write {}: {e}", a.out.display())))?;
    if a.manifest {
        Manifest::new(
            "oracle",
            serde_json::json!({"nodes": a.nodes, "m_grid": a.m_grid, "s": a.s, "model": spec.resolved}),
            &spec.hashes,
            vec![a.out.display().to_string()],
            t0,
        )
        .write(&a.out.with_extension("manifest.json"))?;
    }
    Ok(())
}

fn validate_cmd(a: ValidateArgs) -> Result<(), Error> {
    if a.suite != "acceptance" {
        return Err(Error::BadParameters(format!("unknown suite `{}`", a.suite)));
    }
    let results = cohesive::acceptance::run_all();
    for r in &results {
        println!(
            "acceptance {:2}: {} — {} [{:.2} s] {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.seconds,
            r.detail
        );
    }
    let all_pass = results.iter().all(|r| r.passed);
    let report = serde_json::json!({
        "suite": "acceptance",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "all_pass": all_pass,
        "criteria": results,
    });
    std::fs::write(&a.report, serde_json::to_string_pretty(&report).unwrap())
        .map_err(|e| Error::Parse(format!("write {}: {e}", a.report.display())))?;
    if all_pass {
        Ok(())
    } else {
        Err(Error::Unsupported("one or more acceptance criteria failed".into()))
    }
}

fn catalog_cmd(a: CatalogArgs) -> Result<(), Error> {
    match a.action {
        CatalogAction::List => {
            for name in cohesive::catalog::names() {
                println!("{name}");
            }
            Ok(())
        }
        CatalogAction::Show { name, params } => {
            let entry = cohesive::catalog::get(&name, &params.to_spec())?;
            println!("name:          {}", entry.name);
            println!(
                "parameters:    k = {}, delta = {}, a = {}, b = {}, k1 = {}, k2 = {}",
                entry.params.k,
                entry.params.delta,
                entry.params.a,
                entry.params.b,
                entry.params.k1,
                entry.params.k2
            );
            println!("g(inf):        {:.12}", entry.target.g_inf);
            println!("s_frac:        {}", entry.target.s_frac0);
            println!("regime:        {:?}", entry.target.regime);
            println!("paired models: {}", entry.models.len());
            for am in &entry.models {
                println!("  - {}", am.label);
            }
            print!("law samples:  ");
            let upper = if entry.target.s_frac0.is_finite() {
                entry.target.s_frac0
            } else {
                2.0 / entry.params.k
            };
            for i in 1..=5 {
                let s = upper * i as f64 / 5.0;
                print!(" g({s:.3}) = {:.6}", (entry.analytic_g)(s));
            }
            println!();
            Ok(())
        }
    }
}
