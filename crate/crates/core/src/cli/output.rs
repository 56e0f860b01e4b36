use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::{Config, Format};
use super::CliError;
use crate::proglang::ENCODING_VERSION;

/// Version of the report layout described in `schema/report.schema.json`.
pub const SCHEMA_VERSION: &str = "qkc-report-v1";

/// A command's result, renderable as a JSON envelope or as CSV rows.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    /// Base name for files written under `--out-dir`.
    pub stem: String,
    pub params: Value,
    pub result: Value,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(
        command: &'static str,
        stem: String,
        params: impl Serialize,
        result: impl Serialize,
    ) -> Result<Self, CliError> {
        Ok(Self {
            command,
            stem,
            params: to_value(params)?,
            result: to_value(result)?,
            csv_header: Vec::new(),
            csv_rows: Vec::new(),
        })
    }

    pub fn with_csv(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.csv_header = header.iter().map(|s| s.to_string()).collect();
        self.csv_rows = rows;
        self
    }

    /// Flattens the result into `field,value` rows; used when a command has no
    /// natural table.
    pub fn with_flat_csv(mut self) -> Self {
        let mut rows = Vec::new();
        flatten("", &self.result, &mut rows);
        self.csv_header = vec!["field".into(), "value".into()];
        self.csv_rows = rows.into_iter().map(|(k, v)| vec![k, v]).collect();
        self
    }

    pub fn envelope(&self, config: &Config) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "encoding_version": ENCODING_VERSION,
            "command": self.command,
            "config": config,
            "params": self.params,
            "result": self.result,
        })
    }

    pub fn render(&self, config: &Config) -> Result<String, CliError> {
        match config.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope(config))
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let config_json =
                    serde_json::to_string(config).map_err(|e| CliError::Failed(e.to_string()))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                let mut header = vec!["schema_version".to_string(), "config".to_string()];
                header.extend(self.csv_header.iter().cloned());
                w.write_record(&header).map_err(csv_err)?;
                for row in &self.csv_rows {
                    let mut rec = vec![SCHEMA_VERSION.to_string(), config_json.clone()];
                    rec.extend(row.iter().cloned());
                    w.write_record(&rec).map_err(csv_err)?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Failed(e.to_string()))
            }
        }
    }

    /// Writes the rendered report and its manifest under `dir`; returns both paths.
    pub fn write_files(
        &self,
        config: &Config,
        dir: &Path,
        rendered: &str,
    ) -> Result<(PathBuf, PathBuf), CliError> {
        fs::create_dir_all(dir)?;
        let ext = match config.format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        let report_name = format!("{}.{ext}", self.stem);
        let report_path = dir.join(&report_name);
        fs::write(&report_path, rendered)?;
        let manifest = json!({
            "schema_version": SCHEMA_VERSION,
            "encoding_version": ENCODING_VERSION,
            "crate_version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": config,
            "params": self.params,
            "seed": config.seed,
            "outputs": [{
                "file": report_name,
                "bytes": rendered.len(),
                "sha256": sha256_hex(rendered.as_bytes()),
            }],
        });
        let manifest_path = dir.join(format!("{}.manifest.json", self.stem));
        let mut text =
            serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Failed(e.to_string()))?;
        text.push('\n');
        fs::write(&manifest_path, text)?;
        Ok((report_path, manifest_path))
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Failed(e.to_string())
}

fn to_value(v: impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Failed(e.to_string()))
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_csv_paths() {
        let r = Report::new(
            "t",
            "t".into(),
            json!({}),
            json!({"a": 1, "b": {"c": [true, null]}, "d": "x"}),
        )
        .unwrap()
        .with_flat_csv();
        let keys: Vec<_> = r.csv_rows.iter().map(|r| r[0].as_str()).collect();
        assert_eq!(keys, ["a", "b.c.0", "b.c.1", "d"]);
        assert_eq!(r.csv_rows[1][1], "true");
    }

    #[test]
    fn csv_rows_carry_schema_and_config() {
        let config = Config {
            format: Format::Csv,
            ..Config::default()
        };
        let r = Report::new("t", "t".into(), json!({}), json!({}))
            .unwrap()
            .with_csv(&["x"], vec![vec!["1".into()], vec!["2".into()]]);
        let text = r.render(&config).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(
            rd.headers().unwrap().iter().collect::<Vec<_>>(),
            ["schema_version", "config", "x"]
        );
        let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(&rows[0][0], SCHEMA_VERSION);
        let echoed: Config = serde_json::from_str(&rows[0][1]).unwrap();
        assert_eq!(echoed, config);
    }

    #[test]
    fn manifest_hashes_report() {
        let dir = tempfile::tempdir().unwrap();
        let config = Config::default();
        let r = Report::new("t", "t-n1".into(), json!({"n": 1}), json!({"ok": true})).unwrap();
        let text = r.render(&config).unwrap();
        let (report, manifest) = r.write_files(&config, dir.path(), &text).unwrap();
        assert_eq!(fs::read_to_string(report).unwrap(), text);
        let m: Value = serde_json::from_str(&fs::read_to_string(manifest).unwrap()).unwrap();
        assert_eq!(m["outputs"][0]["sha256"], sha256_hex(text.as_bytes()));
        assert_eq!(m["outputs"][0]["file"], "t-n1.json");
    }
}
