//! Reading inputs and mapping failures to exit codes.

use matroid_mcmc::io::{parse_fields, parse_graph, parse_matroid};
use matroid_mcmc::{Fields, MatroidSpec, NetworkInstance};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, err: std::io::Error },
    Core(matroid_mcmc::Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Core(matroid_mcmc::Error::TooLarge { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, err } => write!(f, "{}: {err}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<matroid_mcmc::Error> for CliError {
    fn from(e: matroid_mcmc::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Input files read so far, for the manifest digest.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let text = std::fs::read_to_string(path).map_err(|err| CliError::Io { path: path.to_path_buf(), err })?;
        self.hasher.update(path.display().to_string().as_bytes());
        self.hasher.update([0]);
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }

    pub fn graph(&mut self, path: &Path) -> CliResult<NetworkInstance> {
        let text = self.read(path)?;
        parse_graph(&text).map_err(|e| located(path, e))
    }

    pub fn matroid(&mut self, path: &Path) -> CliResult<MatroidSpec> {
        let text = self.read(path)?;
        parse_matroid(&text).map_err(|e| located(path, e))
    }

    /// `--lambda` is a number (constant field) or a path to a field file.
    pub fn fields(&mut self, arg: &str, n: usize) -> CliResult<Fields> {
        if let Ok(x) = arg.parse::<f64>() {
            return Ok(Fields::constant(n, x)?);
        }
        let path = Path::new(arg);
        let text = self.read(path)?;
        parse_fields(&text, n).map_err(|e| located(path, e))
    }
}

fn located(path: &Path, e: matroid_mcmc::Error) -> CliError {
    match e {
        matroid_mcmc::Error::Parse { line, msg } => {
            CliError::Usage(format!("{}:{line}: {msg}", path.display()))
        }
        other => CliError::Core(other),
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|err| CliError::Io { path: p.to_path_buf(), err }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|err| CliError::Io { path: "<stdout>".into(), err })
        }
    }
}
