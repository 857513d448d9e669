use std::fs;
use std::process::ExitCode;

use brst_cli::{load_config, render, run, CliError, Command, Extras, Overrides};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "brst", version, about = "Exact BRST cohomology of quantum Hamiltonian reductions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the setup conditions and list the assumptions that are not checked.
    Validate(Common),
    /// Hilbert-function certificate that the moment components form a regular sequence.
    Flatness(Common),
    /// Truncated BRST cohomology tables per weight sector.
    Brst {
        #[command(flatten)]
        common: Common,
        /// Write the assembled differentials in triplet format to this directory.
        #[arg(long, value_name = "DIR")]
        dump: Option<String>,
    },
    /// Elimination oracle: quotient dimensions and the expected cohomology.
    Oracle(Common),
    /// Closed-form Poincaré polynomials.
    Predict(Common),
    /// Compare computed cohomology with the oracle and predictions.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    config: String,
    #[arg(long, value_name = "N")]
    max_degree: Option<i64>,
    /// `auto` or a list such as `[[0], [1]]`.
    #[arg(long, value_name = "LIST|auto")]
    weights: Option<String>,
    /// `text` or `json`.
    #[arg(long, value_name = "FORMAT")]
    output: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { CliError::EXIT_CODE } else { 0 });
        }
    };
    let (cmd, common, extras) = match cli.command {
        Cmd::Validate(c) => (Command::Validate, c, Extras::default()),
        Cmd::Flatness(c) => (Command::Flatness, c, Extras::default()),
        Cmd::Brst { common, dump } => (Command::Brst, common, Extras { dump }),
        Cmd::Oracle(c) => (Command::Oracle, c, Extras::default()),
        Cmd::Predict(c) => (Command::Predict, c, Extras::default()),
        Cmd::Verify(c) => (Command::Verify, c, Extras::default()),
    };
    let overrides = Overrides {
        max_degree: common.max_degree,
        weights: common.weights,
        format: common.output,
        out: common.out,
        jobs: common.jobs,
    };
    match execute(cmd, &common.config, &overrides, &extras) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::EXIT_CODE)
        }
    }
}

fn execute(cmd: Command, config: &str, overrides: &Overrides, extras: &Extras) -> Result<u8, CliError> {
    let cfg = load_config(config, overrides)?;
    let report = run(cmd, &cfg, extras)?;
    let text = render(&report, cfg.format);
    match &cfg.path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{p}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(report.verdict.exit_code())
}
