use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Usage(format!("unknown format {other:?}"))),
        }
    }
}

/// Effective settings of one invocation, echoed into its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Output-table cache; tables are kept in memory only when unset.
    pub cache_dir: Option<PathBuf>,
    pub n: usize,
    pub max_len: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub format: Format,
    pub verbosity: String,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            cache_dir: None,
            n: 2,
            max_len: 12,
            alpha: 0.05,
            epsilon: 0.25,
            seed: 0,
            format: Format::Json,
            verbosity: "warn".into(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {value:?}")))
}

impl Config {
    /// Applies `key = value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn merge_str(mut self, text: &str) -> Result<Self, CliError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
                "n" => self.n = parse(key, value)?,
                "max_len" => self.max_len = parse(key, value)?,
                "alpha" => self.alpha = parse(key, value)?,
                "epsilon" => self.epsilon = parse(key, value)?,
                "seed" => self.seed = parse(key, value)?,
                "format" => self.format = value.parse()?,
                "verbosity" => self.verbosity = value.to_string(),
                _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
            }
        }
        Ok(self)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Config::default().merge_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_file() {
        let c = Config::default()
            .merge_str("# lab defaults\nn = 3\n\nmax_len=14\nformat = CSV\ncache_dir = /tmp/q\nalpha = 0.1\n")
            .unwrap();
        assert_eq!((c.n, c.max_len, c.format), (3, 14, Format::Csv));
        assert_eq!(c.cache_dir, Some(PathBuf::from("/tmp/q")));
        assert_eq!(c.alpha, 0.1);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn bad_lines() {
        assert!(Config::default().merge_str("n 3").is_err());
        assert!(Config::default().merge_str("colour = red").is_err());
        assert!(Config::default().merge_str("n = three").is_err());
        assert!(Config::default().merge_str("format = xml").is_err());
    }
}
