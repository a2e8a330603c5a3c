use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dpoisson::job::{run_checks, JobSpec, Report, RunOptions, Task};

/// Exact verification of double Poisson brackets and the Poisson structures
/// they induce on (twisted) representation spaces.
#[derive(Parser)]
#[command(name = "dpoisson", version)]
struct Cli {
    /// Job file
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Seed for sampled checks (overrides the job file)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report here (`-` for standard output)
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Record wall-clock time per check in the report
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Run the checks listed in the job file
    Run,
    /// Double Jacobi identity, adaptedness, and structure-constant properties
    CheckBracket,
    /// Induced Poisson bracket on the coordinate ring of the representation space
    Induce,
    /// Twisted Poisson bracket on the quotient by the involution relations
    InduceTwisted,
    /// Jacobiator against its closed form in terms of the triple bracket
    CheckJacobiator,
    /// Lie-Poisson algebra of o(N) or sp(N) against the twisted KKS bracket
    Centralizer,
    /// Skew and Yang-Baxter conditions of an r-tensor and its quadratic bracket
    Aybe,
}

impl From<Command> for Task {
    fn from(c: Command) -> Task {
        match c {
            Command::Run => Task::Run,
            Command::CheckBracket => Task::CheckBracket,
            Command::Induce => Task::Induce,
            Command::InduceTwisted => Task::InduceTwisted,
            Command::CheckJacobiator => Task::CheckJacobiator,
            Command::Centralizer => Task::Centralizer,
            Command::Aybe => Task::Aybe,
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, String> {
    let path = cli.spec.as_ref().ok_or("--spec FILE is required")?;
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut job = JobSpec::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if cli.seed.is_some() {
        job.seed = cli.seed;
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let checks = Task::from(cli.command).select(&job);
    run_checks(&job, &checks, RunOptions { timings: cli.timings }).map_err(|e| e.to_string())
}

fn summary(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.scope));
        if let Some(x) = &c.counterexample {
            out.push_str(&format!("    at:  {}\n    lhs: {}\n    rhs: {}\n", x.inputs, x.lhs, x.rhs));
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", report.checks.len()));
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cli.json {
        Some(p) if p.as_os_str() == "-" => {
            print!("{}", report.to_json());
            eprint!("{}", summary(&report));
        }
        Some(p) => {
            if let Err(e) = fs::write(p, report.to_json()) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
            print!("{}", summary(&report));
        }
        None => print!("{}", summary(&report)),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
