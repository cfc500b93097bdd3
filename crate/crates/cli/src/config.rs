//! Experiment settings: a TOML file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[default]
    Rrt,
    Kingman,
}

/// Keys accepted in a config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub replicates: Option<u64>,
    pub threads: Option<usize>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub model: Option<Model>,
    pub n: Option<u32>,
    pub eps: Option<f64>,
    pub levels: Option<String>,
    pub track: Option<Vec<u32>>,
    pub a: Option<Vec<f64>>,
    pub b: Option<Vec<i32>>,
    pub fdd: Option<String>,
    pub exponents: Option<Vec<u32>>,
    pub thresholds: Option<Vec<u32>>,
    pub target: Option<usize>,
    pub max_attempts: Option<u64>,
    pub c: Option<f64>,
    pub ks_threshold: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Flags shared by every command that runs replicates.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Record output file (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Resolved settings shared by all commands.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub replicates: u64,
    pub threads: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn resolve(experiment: &str, common: &Common, file: &FileConfig, default_replicates: u64) -> Self {
        Self {
            experiment: experiment.into(),
            seed: common.seed.or(file.seed).unwrap_or(1),
            replicates: common.replicates.or(file.replicates).unwrap_or(default_replicates),
            threads: common.threads.or(file.threads),
            format: common.format.or(file.format).unwrap_or_default(),
            output: common.output.clone().or_else(|| file.output.clone()),
        }
    }
}

pub fn load_file(common: &Common) -> Result<FileConfig, CliError> {
    common.config.as_deref().map(FileConfig::load).transpose().map(Option::unwrap_or_default)
}

/// Parses `"l"` or `"lo..hi"` (inclusive).
pub fn parse_levels(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Config(format!("bad level range {s:?}, expected L or LO..HI"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let l = s.trim().parse().map_err(|_| bad())?;
            (l, l)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels() {
        assert_eq!(parse_levels("20").unwrap(), (20, 20));
        assert_eq!(parse_levels("10..14").unwrap(), (10, 14));
        assert!(parse_levels("14..10").is_err());
        assert!(parse_levels("x").is_err());
    }

    #[test]
    fn file_keys() {
        let f: FileConfig = toml::from_str("seed = 3\nformat = \"jsonl\"\na = [1.0, 0.5]\n").unwrap();
        assert_eq!(f.seed, Some(3));
        assert_eq!(f.format, Some(Format::Jsonl));
        assert!(toml::from_str::<FileConfig>("sed = 3").is_err());
        let common = Common { seed: Some(9), ..Default::default() };
        let c = ExperimentConfig::resolve("x", &common, &f, 10);
        assert_eq!((c.seed, c.replicates, c.format), (9, 10, Format::Jsonl));
    }
}
