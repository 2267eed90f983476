use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scp_cli::commands::{self, StampfliInput};
use scp_cli::{render, run_batch, run_instance, CliError, InstanceCommand, Rendered};

#[derive(Debug, Parser)]
#[command(name = "scp", version)]
#[command(about = "Subnormal completion of two-generation weights on a directed tree")]
struct Cli {
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Verification tolerance (overrides options.tol in the instance).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Run the command on every *.json instance in this directory.
    #[arg(long, global = true)]
    batch: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArg {
    /// Instance file; `-` reads stdin.
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide existence, build a completion and verify it.
    Solve(InstanceArg),
    /// Compute beta(eta) and its regime.
    Beta(InstanceArg),
    /// Check the instance's measures against the moment conditions.
    Verify(InstanceArg),
    /// Classify data with equal second-generation weights.
    ClassifyFlat(InstanceArg),
    /// Check one-generation data (l2 omitted).
    OneGen(InstanceArg),
    /// Stampfli completion of a triple, or of (x, r, theta).
    Stampfli {
        /// Weights x <= y <= z.
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], conflicts_with = "params",
              required_unless_present = "params", allow_negative_numbers = true)]
        triple: Option<Vec<f64>>,
        /// Starting weight and normalised negative moments r, theta > 1.
        #[arg(long, num_args = 3, value_names = ["X", "R", "THETA"], allow_negative_numbers = true)]
        params: Option<Vec<f64>>,
        /// Number of completed weights to print.
        #[arg(short, long, default_value_t = 6)]
        n: usize,
    },
}

fn read_instance(arg: &InstanceArg) -> Result<String, CliError> {
    match arg.file.as_deref() {
        None => Err(CliError::Usage(
            "an instance file or --batch <dir> is required".into(),
        )),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display()))),
    }
}

fn execute(cli: &Cli) -> Rendered {
    let (cmd, arg) = match &cli.command {
        Command::Solve(a) => (InstanceCommand::Solve, a),
        Command::Beta(a) => (InstanceCommand::Beta, a),
        Command::Verify(a) => (InstanceCommand::Verify, a),
        Command::ClassifyFlat(a) => (InstanceCommand::ClassifyFlat, a),
        Command::OneGen(a) => (InstanceCommand::OneGen, a),
        Command::Stampfli { triple, params, n } => return stampfli(triple, params, *n, cli.pretty),
    };
    if let Some(dir) = &cli.batch {
        return run_batch(cmd, dir, cli.tol, cli.pretty);
    }
    match read_instance(arg) {
        Ok(text) => run_instance(cmd, &text, cli.tol, cli.pretty),
        Err(e) => Rendered {
            body: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn stampfli(
    triple: &Option<Vec<f64>>,
    params: &Option<Vec<f64>>,
    n: usize,
    pretty: bool,
) -> Rendered {
    let input = match (triple.as_deref(), params.as_deref()) {
        (Some(&[x, y, z]), _) => StampfliInput::Triple { x, y, z },
        (_, Some(&[x, r, theta])) => StampfliInput::Params { x, r, theta },
        _ => unreachable!("clap enforces exactly one form with three values"),
    };
    // the arguments play the role of the instance for the provenance hash
    let source = format!("{input:?} n={n}");
    match commands::stampfli(input, n) {
        Ok(report) => render("stampfli", source.as_bytes(), &report, pretty),
        Err(e) => Rendered {
            body: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = execute(&cli);
    let to_stderr = out.body.starts_with("error: ");
    match &cli.output {
        Some(path) if !to_stderr => {
            if let Err(e) = std::fs::write(path, &out.body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        _ if to_stderr => eprint!("{}", out.body),
        _ => print!("{}", out.body),
    }
    ExitCode::from(out.code as u8)
}
