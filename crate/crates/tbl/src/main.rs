use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use tbl::{parse_scenario, ReproTarget, RunError, RunOptions, Subcommand};

#[derive(Parser)]
#[command(
    name = "tbl",
    version,
    about = "Evaluate Brauer classes at p-adic points and compare boundary data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Evaluate every class at every point.
    Eval(Common),
    /// Tabulate how each point meets the boundary.
    Intersect(Common),
    /// Compare evaluations on sampled strong-equivalent pairs.
    Equiv(Common),
    /// Check the residue diagram on sampled classes and points.
    #[command(name = "verify-thm16")]
    VerifyDiagram(Common),
    /// Local cohomology kernels and E2 orders.
    Cohom(Common),
    /// Run a pinned reproduction.
    Repro {
        #[arg(value_parser = parse_target)]
        name: ReproTarget,
        #[arg(long, default_value_t = tbl_core::DEFAULT_PRECISION)]
        precision: u32,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
}

fn parse_target(s: &str) -> Result<ReproTarget, String> {
    s.parse().map_err(|e| {
        let names: Vec<&str> = ReproTarget::ALL.iter().map(|t| t.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn run_common(cmd: Subcommand, args: &Common) -> Result<tbl::Report, (i32, String)> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| (2, format!("cannot read {}: {e}", args.scenario.display())))?;
    let scenario =
        parse_scenario(&text).map_err(|e| (2, format!("{}: {e}", args.scenario.display())))?;
    let opts = RunOptions {
        seed: args.seed,
        precision: args.precision,
        samples: args.samples,
    };
    tbl::run(cmd, &scenario, &opts).map_err(failure)
}

fn failure(e: RunError) -> (i32, String) {
    if let RunError::Assertion { report, .. } = &e {
        print!("{}", report.render());
    }
    (e.exit_code(), e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => run_common(Subcommand::Eval, a),
        Command::Intersect(a) => run_common(Subcommand::Intersect, a),
        Command::Equiv(a) => run_common(Subcommand::Equiv, a),
        Command::VerifyDiagram(a) => run_common(Subcommand::VerifyDiagram, a),
        Command::Cohom(a) => run_common(Subcommand::Cohom, a),
        Command::Repro { name, precision } => {
            if *precision == 0 {
                Err((2, "precision must be positive".to_string()))
            } else {
                name.run(*precision).map_err(failure)
            }
        }
    };
    match result {
        Ok(report) => {
            print!("{}", report.render());
            ExitCode::SUCCESS
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code as u8)
        }
    }
}
