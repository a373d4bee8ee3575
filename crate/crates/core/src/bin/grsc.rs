use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use reserve_core::bench::{run_bench, write_csv, BenchConfig, RunRecord};
use reserve_core::formulation::{build, VariantId};
use reserve_core::instance::{generate_grid, Instance, ScenarioId};
use reserve_core::io::{parse_instance, write_instance, write_solution};
use reserve_core::milp::{export_lp_file, solve_external, ExternalSolver, SolveStatus};
use reserve_core::oracle::{brute_force, validate};
use reserve_core::render::{render_solution, Layout};
use reserve_core::separation::{CutGenerator, SeparationConfig};
use reserve_core::solution::Solution;
use reserve_core::solver::{infeasibility_reason, solve, Setting, SolveOutcome, SolverConfig};
use reserve_core::Error;

#[derive(Parser)]
#[command(name = "grsc", version, about = "Reserve site selection with buffers and connectivity")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run the grid benchmark and write a CSV of run records.
    Bench(BenchArgs),
    /// Generate a grid instance.
    GenGrid(GenArgs),
    /// Exact optimum by enumeration (small instances only).
    Oracle(OracleArgs),
    /// Write the model of an instance in LP format.
    ExportLp(ExportArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Maximum number of components (overrides the file).
    #[arg(long)]
    k: Option<usize>,
    /// Buffer width (overrides the file).
    #[arg(long)]
    d: Option<usize>,
    /// Sets P1/P2 from a scenario.
    #[arg(long)]
    scenario: Option<ScenarioId>,
    /// Re-derives every quota as ceil(frac * total score).
    #[arg(long)]
    lambda_frac: Option<f64>,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance, Error> {
        let text = fs::read_to_string(&self.instance)
            .map_err(|e| Error::Io(format!("{}: {e}", self.instance.display())))?;
        let mut inst = parse_instance(&text)?;
        if let Some(k) = self.k {
            inst = inst.with_max_components(k);
        }
        if let Some(d) = self.d {
            inst = inst.with_buffer_width(d);
        }
        if let Some(s) = self.scenario {
            inst = inst.apply_scenario(s);
        }
        if let Some(f) = self.lambda_frac {
            inst = inst.derive_lambda(f)?;
        }
        Ok(inst)
    }

    fn stem(&self) -> String {
        self.instance.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, default_value = "grsc-cb")]
    variant: VariantId,
    #[arg(long, default_value = "basic+cp")]
    setting: Setting,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long)]
    node_limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, env = "GRSC_OUT_DIR", default_value = ".")]
    out: PathBuf,
    /// Solve with an external MILP command instead; `{lp}` and `{sol}` are
    /// replaced by the model and solution paths.
    #[arg(long)]
    external: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark sets (1-4).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    set: Vec<u8>,
    /// Grid side; defaults to 8 for sets 1-2 and 10 for sets 3-4.
    #[arg(long)]
    scale: Option<usize>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, value_delimiter = ',', default_value = "A,B,C")]
    scenarios: Vec<ScenarioId>,
    #[arg(long, value_delimiter = ',', default_value = "1,3")]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "grsc-cb")]
    variant: Vec<VariantId>,
    #[arg(long, value_delimiter = ',', default_value = "basic,basic+,basic+cp,basic+cplb")]
    settings: Vec<Setting>,
    /// Seconds per solve.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    /// Seconds for the local branching phase.
    #[arg(long, default_value_t = 180.0)]
    lb_time: f64,
    #[arg(long)]
    node_limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV file; defaults to bench.csv in the output directory.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, env = "GRSC_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Grid side.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    s1: usize,
    #[arg(long, default_value_t = 3)]
    s2: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    scenario: Option<ScenarioId>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    lambda_frac: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, default_value = "grsc-cb")]
    variant: VariantId,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long, default_value = "grsc-cb")]
    variant: VariantId,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Error(Error),
    Infeasible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn solve_with_external(inst: &Instance, variant: VariantId, cmd: &str, dir: &Path) -> Result<SolveOutcome, Error> {
    let form = build(inst, variant)?;
    let mut gen = CutGenerator::new(inst, &form, SeparationConfig::default());
    let solver = ExternalSolver::new(cmd, dir.join("external"));
    let res = solve_external(&form.model, &mut [&mut gen], &solver)?;
    let solution = res.incumbent.as_ref().map(|v| {
        let mut s = Solution::from_vector(&form.vars, v);
        s.canonicalize(inst, variant);
        s
    });
    let objective = solution.as_ref().map_or(f64::INFINITY, |s| s.cost(inst));
    Ok(SolveOutcome {
        status: res.status,
        solution,
        objective,
        dual_bound: objective,
        root_bound: f64::NAN,
        heuristic_objective: None,
        construct_time: 0.0,
        cuts_pooled: res.stats.cuts_added,
        time: res.stats.wall_time,
        stats: res.stats,
    })
}

fn cmd_solve(a: &SolveArgs) -> Result<(), Failure> {
    let inst = a.inst.load()?;
    let out = match &a.external {
        Some(cmd) => solve_with_external(&inst, a.variant, cmd, &a.out)?,
        None => {
            let cfg = SolverConfig {
                setting: a.setting,
                time_limit: Some(Duration::from_secs_f64(a.time_limit)),
                node_limit: a.node_limit,
                seed: a.seed,
                ..Default::default()
            };
            solve(&inst, a.variant, &cfg)?
        }
    };
    if out.status == SolveStatus::Infeasible {
        return Err(Failure::Infeasible(infeasibility_reason(&inst, a.variant)));
    }
    let stem = format!("{}.{}", a.inst.stem(), a.variant);
    let record = RunRecord::from_outcome(&a.inst.stem(), a.inst.scenario, &inst, a.variant, a.setting, &out);
    let mut csv = Vec::new();
    write_csv(&mut csv, std::slice::from_ref(&record))?;
    write_file(&a.out.join(format!("{stem}.csv")), &String::from_utf8_lossy(&csv))?;
    match &out.solution {
        Some(sol) => {
            let report = validate(&inst, a.variant, sol)?;
            if let Some(v) = report.first_violation() {
                return Err(Failure::Error(Error::Infeasible(format!("solution fails validation: {v}"))));
            }
            write_file(&a.out.join(format!("{stem}.sol")), &write_solution(&inst, a.variant, sol))?;
            write_file(&a.out.join(format!("{stem}.svg")), &render_solution(&inst, sol, Layout::Auto))?;
            println!(
                "{} {}: objective {} bound {:.4} gap {:.3}% components {} parcels {} time {:.2}s",
                out.status, a.variant, out.objective, out.dual_bound, record.gap, record.components, record.parcels, out.time
            );
        }
        None => println!("{}: no solution found within the limits", out.status),
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Failure> {
    let mut cfg = BenchConfig {
        sets: a.set.clone(),
        scale: a.scale,
        count: a.count,
        scenarios: a.scenarios.clone(),
        ks: a.k.clone(),
        variants: a.variant.clone(),
        settings: a.settings.clone(),
        seed: a.seed,
        ..Default::default()
    };
    cfg.solver.time_limit = Some(Duration::from_secs_f64(a.time_limit));
    cfg.solver.node_limit = a.node_limit;
    cfg.solver.local_branching.phase_time = Duration::from_secs_f64(a.lb_time);
    let records = run_bench(&cfg, |r| {
        eprintln!(
            "{} {} k={} {} {}: z={} rb={:.3} gap={:.3}% t={:.2}s",
            r.instance, r.scenario, r.k, r.variant, r.setting, r.objective, r.root_bound, r.gap, r.time
        )
    })?;
    let path = a.csv.clone().unwrap_or_else(|| a.out.join("bench.csv"));
    let mut buf = Vec::new();
    write_csv(&mut buf, &records)?;
    write_file(&path, &String::from_utf8_lossy(&buf))?;
    println!("{} records written to {}", records.len(), path.display());
    Ok(())
}

fn cmd_gen(a: &GenArgs) -> Result<(), Failure> {
    let mut inst = generate_grid(a.n, a.s1, a.s2, a.seed)?.with_max_components(a.k);
    if let Some(f) = a.lambda_frac {
        inst = inst.derive_lambda(f)?;
    }
    if let Some(s) = a.scenario {
        inst = inst.apply_scenario(s);
    }
    let text = write_instance(&inst);
    match &a.out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_oracle(a: &OracleArgs) -> Result<(), Failure> {
    let inst = a.inst.load()?;
    match brute_force(&inst, a.variant)? {
        Some((_, sol)) => {
            print!("{}", write_solution(&inst, a.variant, &sol));
            Ok(())
        }
        None => Err(Failure::Infeasible(infeasibility_reason(&inst, a.variant))),
    }
}

fn cmd_export(a: &ExportArgs) -> Result<(), Failure> {
    let inst = a.inst.load()?;
    let text = export_lp_file(&build(&inst, a.variant)?.model);
    match &a.out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::GenGrid(a) => cmd_gen(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::ExportLp(a) => cmd_export(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Error(e @ Error::InvalidParameter(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
