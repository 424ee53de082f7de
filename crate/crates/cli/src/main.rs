mod settings;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use ampso::harness::{run_campaign, write_campaign, write_trace_csv, CampaignSpec, ConfigOverrides};
use ampso::{Algorithm, BenchmarkFunction, ObjectiveSpec, RunResult};
use clap::{Args, Parser, Subcommand};

use settings::SeedArg;

/// Adaptive multi-swarm PSO runner.
///
/// Configuration fields can be set in a TOML file (`--config`) and
/// overridden by `AMPSO_<FIELD>` environment variables, e.g.
/// `AMPSO_N_EI=20`. Command-line flags take precedence over both.
#[derive(Parser)]
#[command(name = "ampso", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One run; prints the final error and evaluation count.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write the convergence trace to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Minimum evaluation gap between trace rows.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Repeated seeded runs per (algorithm, function, dimension) cell.
    Bench {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "ampso")]
        algo: Vec<Algorithm>,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        function: Vec<BenchmarkFunction>,
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "10")]
        dim: Vec<usize>,
        #[arg(long, default_value_t = 30)]
        runs: usize,
        /// Run r uses seed `seed + r`.
        #[arg(long, default_value = "1")]
        seed: SeedArg,
        #[arg(long)]
        fe_budget: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// One run with its convergence trace written as CSV.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "ampso")]
    algo: Algorithm,
    #[arg(long)]
    function: BenchmarkFunction,
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// Unsigned integer, or `clock`.
    #[arg(long, default_value = "1")]
    seed: SeedArg,
    #[arg(long)]
    fe_budget: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn env_layer() -> Result<ConfigOverrides, Failure> {
    settings::env_overrides(|k| std::env::var(k).ok()).map_err(usage)
}

fn single_run(common: &Common) -> Result<(RunResult, u64), Failure> {
    let env = env_layer()?;
    let (config, _) =
        settings::resolve(common.dim, common.config.as_deref(), &env, common.fe_budget).map_err(usage)?;
    let objective = ObjectiveSpec::new(common.function, common.dim).map_err(usage)?;
    let seed = common.seed.resolve();
    let result = common.algo.run(&config, &objective, seed).map_err(runtime)?;
    Ok((result, seed))
}

fn summary_line(common: &Common, seed: u64, r: &RunResult) -> String {
    format!(
        "{} {} dim={} seed={} best_error={:e} fe_used={}/{} iterations={} phases={}",
        common.algo,
        common.function,
        common.dim,
        seed,
        r.best_error,
        r.fe_used,
        r.fe_budget,
        r.iterations,
        r.phase_signature()
    )
}

fn write_trace(path: &Path, r: &RunResult, stride: usize) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write_trace_csv(&r.trace, stride, &mut w)?;
    w.flush()?;
    Ok(())
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { common, trace, stride } => {
            let (result, seed) = single_run(&common)?;
            println!("{}", summary_line(&common, seed, &result));
            if let Some(path) = trace {
                write_trace(&path, &result, stride).map_err(runtime)?;
            }
            Ok(())
        }
        Command::Trace { common, out, stride } => {
            let (result, seed) = single_run(&common)?;
            write_trace(&out, &result, stride).map_err(runtime)?;
            println!("{}", summary_line(&common, seed, &result));
            Ok(())
        }
        Command::Bench { algo, function, dim, runs, seed, fe_budget, config, out, jobs } => {
            if runs == 0 {
                return Err(usage(anyhow::anyhow!("--runs must be at least 1")));
            }
            let env = env_layer()?;
            let mut overrides = ConfigOverrides::new();
            for &d in &dim {
                let (_, merged) = settings::resolve(d, config.as_deref(), &env, fe_budget)
                    .with_context(|| format!("configuration for dim {d}"))
                    .map_err(usage)?;
                overrides = merged;
            }
            let spec = CampaignSpec {
                algorithms: algo,
                functions: function,
                dimensions: dim,
                runs,
                base_seed: seed.resolve(),
                overrides,
                jobs,
            };
            let report = run_campaign(&spec).map_err(runtime)?;
            write_campaign(&report, &out)
                .with_context(|| format!("cannot write results to {}", out.display()))
                .map_err(runtime)?;

            let stdout = io::stdout();
            let mut w = stdout.lock();
            for c in &report.cells {
                let _ = writeln!(
                    w,
                    "{:<6} {:<13} dim={:<3} mean={:.4e} std={:.4e} best={:.4e} worst={:.4e} median={:.4e}",
                    c.algorithm, c.function, c.dim, c.mean, c.std, c.best, c.worst, c.median
                );
            }
            for f in &report.failures {
                eprintln!("failed: {} {} dim={}: {}", f.algorithm, f.function, f.dim, f.error);
            }
            if report.failures.is_empty() {
                Ok(())
            } else {
                Err(runtime(anyhow::anyhow!("{} cell(s) failed", report.failures.len())))
            }
        }
    }
}
