//! Report metadata and output files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::LoadedConfig;
use crate::error::{CliError, CliResult};
use crate::eval::Score;

/// Identifies what produced a report. No timestamps, so identical inputs
/// give identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub ddforge_version: String,
    pub core_version: String,
}

impl Meta {
    pub fn new(command: &str, config: &LoadedConfig) -> Self {
        Meta {
            command: command.into(),
            config_sha256: config.hash.clone(),
            seed: config.config.seed,
            ddforge_version: env!("CARGO_PKG_VERSION").into(),
            core_version: ddforge_core::VERSION.into(),
        }
    }
}

/// Output directory; created on first use.
#[derive(Clone, Debug)]
pub struct OutDir(pub PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> CliResult<Self> {
        fs::create_dir_all(path).map_err(|source| CliError::Output { path: path.into(), source })?;
        Ok(OutDir(path.into()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn write(&self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|source| CliError::Output { path, source })
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<()> {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        self.write(name, &s)
    }

    pub fn append_line(&self, name: &str, line: &str) -> CliResult<()> {
        let path = self.path(name);
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|source| CliError::Output { path: path.clone(), source })?;
        writeln!(f, "{line}").map_err(|source| CliError::Output { path, source })
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `section,name,strategy,status,mean,stderr,max` rows.
pub fn scores_csv(sections: &[(&str, &[Score])]) -> String {
    let mut s = String::from("section,name,strategy,status,mean,stderr,max\n");
    for (section, scores) in sections {
        for sc in scores.iter() {
            let status = match sc.status {
                crate::eval::Status::Ok => "ok",
                crate::eval::Status::Unsupported => "unsupported",
            };
            let _ = writeln!(
                s,
                "{section},{},{},{status},{},{},{}",
                sc.name,
                sc.strategy.as_deref().unwrap_or(""),
                opt(sc.mean),
                opt(sc.stderr),
                opt(sc.max)
            );
        }
    }
    s
}
