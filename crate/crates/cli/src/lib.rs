//! Library side of the `brst` command line tool: config parsing, the
//! subcommands and report rendering.

pub mod commands;
pub mod config;
pub mod report;

use std::fs;

use thiserror::Error;

pub use commands::{run, Command, Extras};
pub use config::{parse_config, Format, RunConfig};
pub use report::{Report, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{source}")]
    Parse { path: String, source: config::ParseError },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub const EXIT_CODE: u8 = 3;
}

/// Command line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub max_degree: Option<i64>,
    pub weights: Option<String>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub jobs: Option<usize>,
}

pub fn load_config(path: &str, o: &Overrides) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let parse_err = |source| CliError::Parse { path: path.to_string(), source };
    let mut cfg = parse_config(&text).map_err(parse_err)?;
    let arg_err = |flag: &str, e: config::ParseError| CliError::Config(format!("{flag}: {}", e.msg));
    if let Some(n) = o.max_degree {
        cfg.max_degree = n;
    }
    if let Some(w) = &o.weights {
        let v = config::parse_value(w).map_err(|e| arg_err("--weights", e))?;
        cfg.weights = config::parse_weight_value(&v).map_err(|e| arg_err("--weights", e))?;
    }
    if let Some(f) = &o.format {
        let v = config::parse_value(f).map_err(|e| arg_err("--output", e))?;
        cfg.format = config::parse_format(&v).map_err(|e| arg_err("--output", e))?;
    }
    if let Some(p) = &o.out {
        cfg.path = Some(p.clone());
    }
    if let Some(j) = o.jobs {
        cfg.jobs = j.max(1);
    }
    if cfg.max_degree < 0 || cfg.max_degree % 2 != 0 {
        return Err(CliError::Config(format!("max_degree must be even and nonnegative, got {}", cfg.max_degree)));
    }
    Ok(cfg)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}
