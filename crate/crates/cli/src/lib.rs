//! Command-line front end for `scp-core`.
//!
//! Every command reads a JSON instance (see [`instance`]) and writes a JSON
//! report wrapped in an envelope carrying the tool version and the SHA-256 of
//! the instance bytes. Reports are deterministic: identical instance files
//! give byte-identical output.
//!
//! Exit codes: 0 YES / pass, 3 NO / fail, 1 usage or schema error,
//! 2 numerical failure.

pub mod commands;
pub mod error;
pub mod instance;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use commands::Outcome;
pub use error::{CliError, EXIT_INPUT, EXIT_NO, EXIT_NUMERICAL, EXIT_OK};
pub use instance::Instance;

pub const TOOL: &str = "scp";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceCommand {
    Solve,
    Beta,
    Verify,
    ClassifyFlat,
    OneGen,
}

impl InstanceCommand {
    pub fn name(self) -> &'static str {
        match self {
            InstanceCommand::Solve => "solve",
            InstanceCommand::Beta => "beta",
            InstanceCommand::Verify => "verify",
            InstanceCommand::ClassifyFlat => "classify-flat",
            InstanceCommand::OneGen => "one-gen",
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    instance_sha256: String,
    result: T,
}

/// Rendered output and exit code of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub body: String,
    pub code: i32,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Wraps a report in the envelope and renders it as JSON, or as the
/// report's text summary when `pretty` is set.
pub fn render<T: Outcome>(command: &str, source: &[u8], report: &T, pretty: bool) -> Rendered {
    let code = report.exit_code();
    if pretty {
        return Rendered {
            body: report.summary(),
            code,
        };
    }
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        command,
        instance_sha256: sha256_hex(source),
        result: report,
    };
    let mut body = serde_json::to_string_pretty(&env).expect("reports serialise");
    body.push('\n');
    Rendered { body, code }
}

fn render_error(e: &CliError) -> Rendered {
    Rendered {
        body: format!("error: {e}\n"),
        code: e.exit_code(),
    }
}

/// Runs one instance command on the instance text.
pub fn run_instance(cmd: InstanceCommand, text: &str, tol: Option<f64>, pretty: bool) -> Rendered {
    match try_run_instance(cmd, text, tol, pretty) {
        Ok(r) => r,
        Err(e) => render_error(&e),
    }
}

fn try_run_instance(
    cmd: InstanceCommand,
    text: &str,
    tol: Option<f64>,
    pretty: bool,
) -> Result<Rendered, CliError> {
    let inst = Instance::parse(text)?;
    let tol = commands::resolve_tol(tol, Some(&inst));
    let name = cmd.name();
    let src = text.as_bytes();
    Ok(match cmd {
        InstanceCommand::Solve => render(name, src, &commands::solve(&inst, tol)?, pretty),
        InstanceCommand::Beta => render(name, src, &commands::beta_cmd(&inst)?, pretty),
        InstanceCommand::Verify => render(name, src, &commands::verify(&inst, tol)?, pretty),
        InstanceCommand::ClassifyFlat => render(name, src, &commands::classify(&inst)?, pretty),
        InstanceCommand::OneGen => render(name, src, &commands::one_gen(&inst)?, pretty),
    })
}

#[derive(Serialize)]
struct BatchEntry {
    file: String,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct BatchReport<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    results: Vec<BatchEntry>,
}

/// `*.json` files of a directory in name order.
pub fn batch_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs `cmd` on every instance in `dir`, one instance per worker. The
/// combined exit code is the first input or numerical error code if any,
/// else 3 if any instance answered NO, else 0.
pub fn run_batch(cmd: InstanceCommand, dir: &Path, tol: Option<f64>, pretty: bool) -> Rendered {
    let files = match batch_files(dir) {
        Ok(f) => f,
        Err(e) => return render_error(&e),
    };
    let outputs: Vec<(String, Rendered)> = files
        .par_iter()
        .map(|path| {
            let name = path
                .file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            let out = match std::fs::read_to_string(path) {
                Ok(text) => run_instance(cmd, &text, tol, pretty),
                Err(e) => render_error(&CliError::Usage(format!("cannot read {name}: {e}"))),
            };
            (name, out)
        })
        .collect();

    let code = outputs
        .iter()
        .map(|(_, r)| r.code)
        .find(|c| *c == EXIT_INPUT || *c == EXIT_NUMERICAL)
        .or_else(|| outputs.iter().map(|(_, r)| r.code).find(|c| *c == EXIT_NO))
        .unwrap_or(EXIT_OK);

    if pretty {
        let body = outputs
            .iter()
            .map(|(name, r)| format!("== {name} (exit {})\n{}", r.code, r.body))
            .collect();
        return Rendered { body, code };
    }
    let results = outputs
        .into_iter()
        .map(|(file, r)| {
            let parsed = serde_json::from_str::<serde_json::Value>(&r.body).ok();
            let error = parsed.is_none().then(|| r.body.trim_end().to_string());
            BatchEntry {
                file,
                exit_code: r.code,
                report: parsed,
                error,
            }
        })
        .collect();
    let report = BatchReport {
        tool: TOOL,
        version: VERSION,
        command: cmd.name(),
        results,
    };
    let mut body = serde_json::to_string_pretty(&report).expect("reports serialise");
    body.push('\n');
    Rendered { body, code }
}
