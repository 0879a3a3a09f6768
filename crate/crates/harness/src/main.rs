use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use flexkit::solvers::Method;
use flexkit::verify::{rate_curve, verify_resolvent_counterexample, verify_tseng_counterexample};
use flexkit_harness::bench::{run_benchmark, BenchmarkConfig};
use flexkit_harness::problem::ProblemSpec;
use flexkit_harness::reference::reference_objective;
use flexkit_harness::setup::{DirectionKind, MethodSetup};
use flexkit_harness::trace_io::{fmt_float, write_trace};
use serde_json::json;

#[derive(Parser)]
#[command(name = "flexkit", version, about = "Extragradient-type solvers for monotone inclusions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem with one method and write its trace CSV.
    Run(RunArgs),
    /// Run every cell of a benchmark configuration file.
    Bench {
        config: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory, overriding the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check both counterexamples in exact arithmetic; exits nonzero on failure.
    Verify {
        /// Verdict file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the rate quotients on an interior grid of (0, 1).
    Rates {
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated instance as JSON.
    Datagen {
        #[arg(long)]
        problem: String,
        #[arg(long, env = "FLEXKIT_SEED")]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// e.g. `quadmm:n=20,omega=0,seed=1` or `logistic:path=data.svm,lambda=1/m`.
    #[arg(long)]
    problem: String,
    /// eg, tseng, flex, iflex or proxflex.
    #[arg(long)]
    method: Method,
    #[arg(long)]
    direction: Option<DirectionKind>,
    #[arg(long)]
    memory: Option<usize>,
    #[arg(long)]
    newton_c: Option<f64>,
    #[arg(long)]
    gamma_frac: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    big_m: Option<usize>,
    /// Clip directions to ‖d‖ ≤ D‖R‖.
    #[arg(long)]
    safeguard: Option<f64>,
    /// Maximum number of operator evaluations.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Seed for generated problems that do not name one.
    #[arg(long, env = "FLEXKIT_SEED")]
    seed: Option<u64>,
    /// Record wall-clock time per iteration.
    #[arg(long)]
    timing: bool,
    /// Trace CSV; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let spec: ProblemSpec = a.problem.parse::<ProblemSpec>()?.with_default_seed(a.seed.unwrap_or(0));
    let mut setup = MethodSetup::new(a.method);
    if let Some(d) = a.direction {
        if !a.method.uses_directions() && d != DirectionKind::None {
            bail!("method {} takes no directions", a.method);
        }
        setup.direction = d;
    }
    setup.memory = a.memory.unwrap_or(setup.memory);
    setup.newton_c = a.newton_c.unwrap_or(setup.newton_c);
    let c = &mut setup.config;
    c.gamma_fraction = a.gamma_frac.unwrap_or(c.gamma_fraction);
    c.rho = a.rho.unwrap_or(c.rho);
    c.sigma = a.sigma.unwrap_or(c.sigma);
    c.beta = a.beta.unwrap_or(c.beta);
    c.big_m = a.big_m.unwrap_or(c.big_m);
    c.safeguard_d = a.safeguard.or(c.safeguard_d);
    c.max_operator_evals = a.budget.unwrap_or(c.max_operator_evals);
    c.residual_tolerance = a.tol.unwrap_or(c.residual_tolerance);
    c.max_iterations = a.max_iter.unwrap_or(c.max_iterations);
    c.timing = a.timing;
    c.validate()?;

    let built = spec.build()?;
    let reference = if spec.is_logistic() { Some(reference_objective(&built)?) } else { None };
    let trace = setup.run(&built)?;
    write_trace(&trace, reference, output(a.out.as_deref())?)?;
    let last = trace.last();
    eprintln!(
        "{} on {}: {} after {} iterations, {} operator evaluations, ‖R‖ = {}",
        setup.label(),
        spec,
        trace.termination,
        trace.records.len(),
        trace.counts.total(),
        last.map(|r| fmt_float(r.norm_r)).unwrap_or_else(|| "n/a".into()),
    );
    Ok(())
}

fn cmd_bench(config: &Path, jobs: Option<usize>, out: Option<PathBuf>) -> Result<()> {
    let mut cfg = BenchmarkConfig::load(config)?;
    if let Some(j) = jobs {
        cfg.benchmark.jobs = j;
    }
    if let Some(o) = out {
        cfg.benchmark.output = o;
    }
    let summary = run_benchmark(&cfg)?;
    let failed = summary.failures().count();
    eprintln!("{} cells, {} failed; summary in {}", summary.rows.len(), failed, cfg.benchmark.output.join("summary.csv").display());
    for row in summary.failures() {
        eprintln!("  {} / {} rep {}: {}", row.problem, row.method, row.repetition, row.status);
    }
    Ok(())
}

fn cmd_verify(out: Option<PathBuf>) -> Result<bool> {
    let reports = [verify_tseng_counterexample(), verify_resolvent_counterexample()];
    let mut w = output(out.as_deref())?;
    for r in &reports {
        writeln!(w, "{r}")?;
    }
    w.flush()?;
    Ok(reports.iter().all(|r| r.passed()))
}

fn cmd_rates(grid: usize, out: Option<PathBuf>) -> Result<()> {
    if grid == 0 {
        bail!("grid must be at least 1");
    }
    let mut w = csv::Writer::from_writer(output(out.as_deref())?);
    w.write_record(["x", "quotient_cai", "quotient_tran_dinh"])?;
    for (x, q1, q2) in rate_curve(grid) {
        w.write_record([fmt_float(x), fmt_float(q1), fmt_float(q2)])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_datagen(problem: &str, seed: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    let spec = problem.parse::<ProblemSpec>()?.with_default_seed(seed.unwrap_or(0));
    let built = spec.build()?;
    let inst = &built.instance;
    let rows = |z| {
        inst.jacobian(z).map(|m| (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>())
    };
    let doc = json!({
        "problem": spec.to_string(),
        "dim": inst.dim(),
        "lipschitz": inst.lipschitz(),
        "strong_monotonicity": inst.strong_monotonicity(),
        "regularizer": format!("{:?}", inst.prox_spec()),
        "start": built.start.as_slice(),
        "operator_at_start": inst.eval_f_quiet(&built.start).as_slice(),
        "jacobian_at_start": rows(&built.start),
        "known_solution": inst.known_solution().map(|z| z.as_slice().to_vec()),
    });
    let mut w = output(out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Bench { config, jobs, out } => cmd_bench(&config, jobs, out),
        Command::Verify { out } => match cmd_verify(out) {
            Ok(true) => Ok(()),
            Ok(false) => {
                eprintln!("verification failed");
                return ExitCode::FAILURE;
            }
            Err(e) => Err(e),
        },
        Command::Rates { grid, out } => cmd_rates(grid, out),
        Command::Datagen { problem, seed, out } => cmd_datagen(&problem, seed, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
