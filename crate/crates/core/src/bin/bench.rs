use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dpsbl::config::load_config_file;
use dpsbl::harness::{emit_csv, parse_methods, run_experiment, ExperimentReport, ExperimentSpec, Family, Method};
use dpsbl::{Error, SystemConfig};

#[derive(Parser)]
#[command(name = "bench", version, about = "Monte-Carlo benchmark for the channel estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment family and write the per-seed CSV.
    Run(RunArgs),
    /// List experiment families and methods.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// mse_vs_pilots, mse_vs_snr, mse_vs_iter or mse_vs_p.
    #[arg(long)]
    experiment: String,
    /// `key = value` scenario file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seeds: usize,
    #[arg(long)]
    master_seed: u64,
    /// Comma-separated subset of DirichletMP,Separate,GivenCluster,ScsArray.
    #[arg(long, default_value = "DirichletMP,Separate,GivenCluster,ScsArray")]
    methods: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    #[arg(long)]
    pilots: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    damping: Option<f64>,
    /// Comma-separated sweep values replacing the family default.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    /// Fill wall_time_ms (makes the CSV run-dependent).
    #[arg(long)]
    record_timing: bool,
}

fn build_spec(args: &RunArgs) -> Result<ExperimentSpec, Error> {
    let family: Family = args.experiment.parse()?;
    let mut cfg = SystemConfig::default();
    if let Some(path) = &args.config {
        for (k, v) in load_config_file(path).map_err(|e| with_path(e, path))? {
            cfg.set(&k, &v)?;
        }
    }
    if let Some(t) = args.iters {
        cfg.max_iters = t;
    }
    if let Some(x) = args.snr_db {
        cfg.snr_db = x;
    }
    if let Some(n) = args.pilots {
        cfg.n_pilots = n;
    }
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(d) = args.damping {
        cfg.damping = d;
    }
    cfg.validate()?;
    let methods = parse_methods(&args.methods)?;
    let mut spec = ExperimentSpec::new(family, cfg, methods, args.seeds, args.master_seed);
    if let Some(list) = &args.sweep {
        spec.sweep = list
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad sweep value `{v}`"))))
            .collect::<Result<_, _>>()?;
    }
    spec.record_timing = args.record_timing;
    spec.validate()?;
    Ok(spec)
}

fn summarize(spec: &ExperimentSpec, report: &ExperimentReport) {
    let methods: Vec<Method> = spec.methods.clone();
    print!("{:>12}", spec.family.name().trim_start_matches("mse_vs_"));
    for m in &methods {
        print!(" {:>13}", m.name());
    }
    println!();
    for &v in &spec.sweep {
        print!("{v:>12}");
        for &m in &methods {
            match report.mean_mse_db(m, v) {
                Some(db) => print!(" {db:>13.3}"),
                None => print!(" {:>13}", "-"),
            }
        }
        println!();
    }
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let spec = build_spec(args)?;
    let report = run_experiment(&spec)?;
    emit_csv(&report, &args.out).map_err(|e| with_path(e, &args.out))?;
    summarize(&spec, &report);
    let failed = report.failed_runs();
    if failed > 0 {
        log::warn!("{failed} runs failed; see the CSV footer");
    }
    Ok(())
}

fn with_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Io(e) => Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))),
        other => other,
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            println!("families:");
            for f in Family::ALL {
                println!("  {:<14} {}", f.name(), f.description());
            }
            println!("methods:");
            for m in Method::ALL {
                println!("  {}", m.name());
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code(&e))
            }
        },
    }
}
