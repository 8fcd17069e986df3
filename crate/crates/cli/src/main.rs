use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leaky_spectra::error::CliError;
use leaky_spectra::output::write_outputs;
use leaky_spectra::selftest::selftest;
use leaky_spectra::{run, ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(
    name = "leaky-spectra",
    version,
    about = "Bound states of strong delta interactions on curves and surfaces"
)]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    /// Run the oracle-equivalence suite.
    #[arg(long)]
    selftest: bool,

    /// Output directory for --selftest.
    #[arg(long, requires = "selftest")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[output] dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Bound states for each coupling.
    BoundStates(RunArgs),
    /// Comparison-operator spectrum of the shape.
    Comparison(RunArgs),
    /// Residuals of bound states against the comparison spectrum.
    AsymptoticStudy(RunArgs),
    /// Bound-state counts against the Weyl term.
    Counting(RunArgs),
    /// Transverse bound ordering over the coupling ladder.
    TransverseCheck(RunArgs),
    /// Floquet bands and gaps of a periodic chain.
    Bands(RunArgs),
}

impl Command {
    fn split(self) -> (ExperimentKind, RunArgs) {
        match self {
            Command::BoundStates(a) => (ExperimentKind::BoundStates, a),
            Command::Comparison(a) => (ExperimentKind::Comparison, a),
            Command::AsymptoticStudy(a) => (ExperimentKind::AsymptoticStudy, a),
            Command::Counting(a) => (ExperimentKind::Counting, a),
            Command::TransverseCheck(a) => (ExperimentKind::TransverseCheck, a),
            Command::Bands(a) => (ExperimentKind::Bands, a),
        }
    }
}

fn run_experiment(kind: ExperimentKind, args: RunArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::Config {
        line: None,
        field: None,
        message: format!("cannot read {}: {e}", args.config.display()),
    })?;
    let cfg = ExperimentConfig::parse(&text, kind)?;
    let dir = args
        .out
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let output = run(&cfg)?;
    for path in write_outputs(&dir, kind.as_str(), &output.tables, &output.manifest)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_selftest(out: Option<PathBuf>) -> Result<(), CliError> {
    let dir = out.unwrap_or_else(|| PathBuf::from("selftest-out"));
    let results = selftest(&dir)?;
    let mut failed = 0;
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({:.2} s)", r.name, r.elapsed.as_secs_f64());
        for row in r.rows.iter().filter(|row| !row.pass) {
            println!(
                "    {}: {:e} vs {:e} (tol {:e})",
                row.quantity, row.value, row.reference, row.tolerance
            );
        }
        failed += usize::from(!r.passed());
    }
    if failed > 0 {
        return Err(CliError::Acceptance { failed });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match (cli.selftest, cli.command) {
        (true, _) => run_selftest(cli.out),
        (false, Some(cmd)) => {
            let (kind, args) = cmd.split();
            run_experiment(kind, args)
        }
        (false, None) => Err(CliError::Config {
            line: None,
            field: None,
            message: "expected a subcommand or --selftest; see --help".into(),
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
