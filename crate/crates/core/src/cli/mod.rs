//! The `qkc` command-line tool.
//!
//! Settings resolve in order: built-in defaults, a `key = value` config file
//! (`--config` or `QKC_CONFIG`), then flags (`--cache-dir` also reads
//! `QKC_CACHE_DIR`). The effective [`Config`] is echoed into every report.
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_FAILED`], [`EXIT_USAGE`] and
//! [`EXIT_NO_ESTIMATE`] for a well-formed query with no finite answer.

mod config;
mod output;

pub use config::{Config, Format};
pub use output::{Report, SCHEMA_VERSION};

use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::census::{
    census, consistency_sweep, joint_bound_report, subadditivity_report, superposed_bit_example,
    uniform_sweep, BasisKind, CensusError, CensusReport, ConsistencySweep, SubadditivityReport,
};
use crate::estimator::{
    exact_estimate_in, k_from_bound, sampled_estimate_in, EstimateRecord, EstimatorError,
    SamplingPlan,
};
use crate::executor::{run, OutputCache, TableStore};
use crate::proglang::{
    decode, decode_conditional, encode, enumerate, Instr, Program, ProgramError,
};
use crate::statevec::StateError;
use crate::ExactState;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_ESTIMATE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<ProgramError> for CliError {
    fn from(e: ProgramError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Io(e) => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qkc",
    version,
    about = "Quantum Kolmogorov complexity on a fixed reference machine"
)]
pub struct Cli {
    /// Key-value config file.
    #[arg(long, global = true, env = "QKC_CONFIG")]
    pub config: Option<PathBuf>,
    /// Directory for persisted output tables.
    #[arg(long, global = true, env = "QKC_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the report and a manifest into this directory.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TargetArgs {
    /// Classical bit string, e.g. `010`.
    #[arg(long)]
    pub classical: Option<String>,
    /// Program whose output is the target (`LEN:HEX` or a bit string).
    #[arg(long)]
    pub program: Option<String>,
    /// Statevector JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the complexity of one target state.
    Estimate {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        /// Conditional program for CALLC (`LEN:HEX` or a bit string).
        #[arg(long)]
        conditional: Option<String>,
        /// Use simulated measurements instead of exact overlaps.
        #[arg(long)]
        sampled: bool,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Trials per program; defaults to the smallest admissible count.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Count basis vectors whose estimate falls below `n - c`.
    Census {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        max_len: Option<usize>,
        /// Use the ROT/CNOT-rotated basis instead of the standard one.
        #[arg(long)]
        rotated: bool,
    },
    /// Compare estimates with penalty-free lengths for every classical string.
    Consistency {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Sub-additivity report for a pair of programs.
    Subadd {
        #[arg(long)]
        px: String,
        #[arg(long)]
        py: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Joint bound `K(x,y) <= K(y) - log2 |<x|y>|^2` for a pair of programs.
    Joint {
        #[arg(long)]
        px: String,
        #[arg(long)]
        py: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// A classical string with one bit rotated into superposition.
    Superpose {
        #[arg(long)]
        bits: String,
        #[arg(long, default_value_t = 0)]
        position: usize,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Fraction of random rational states with estimate at least `n - c`.
    Sweep {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Encode instructions such as `X(0) CNOT(0,1) CALLC`.
    Encode {
        #[arg(long)]
        n: Option<usize>,
        instrs: Vec<String>,
    },
    /// Decode a program.
    Decode {
        #[arg(long, conflicts_with = "program", required_unless_present = "program")]
        bits: Option<String>,
        /// `LEN:HEX`.
        #[arg(long)]
        program: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// List every decodable program up to a length.
    Enumerate {
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Trials per program for a sampled run.
    Kplan {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

/// Rendered output and exit code of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Cli {
    /// Defaults, then the config file, then global flags.
    pub fn resolve_config(&self) -> Result<Config, CliError> {
        let mut config = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        if let Some(dir) = &self.cache_dir {
            config.cache_dir = Some(dir.clone());
        }
        if let Some(f) = self.format {
            config.format = f;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        match self.verbose {
            0 => {}
            1 => config.verbosity = "info".into(),
            2 => config.verbosity = "debug".into(),
            _ => config.verbosity = "trace".into(),
        }
        Ok(config)
    }
}

/// Parses `LEN:HEX` or a plain bit string.
pub fn parse_program(s: &str) -> Result<Program, CliError> {
    let s = s.trim();
    let program = match s.split_once(':') {
        Some((len, hex)) => {
            let len = len
                .parse()
                .map_err(|_| CliError::Usage(format!("bad program length in {s:?}")))?;
            Program::from_hex(len, hex)?
        }
        None => Program::parse_bits(s)?,
    };
    Ok(program)
}

fn program_json(p: &Program) -> serde_json::Value {
    json!({ "len": p.len(), "bits": p.to_bit_string(), "hex": format!("{}:{}", p.len(), p.to_hex()) })
}

fn store_for(config: &Config) -> TableStore {
    match &config.cache_dir {
        Some(dir) => TableStore::cached(OutputCache::new(dir)),
        None => TableStore::in_memory(),
    }
}

/// Runs one parsed invocation.
pub fn run_cli(cli: &Cli) -> Result<Outcome, CliError> {
    let mut config = cli.resolve_config()?;
    let mut store = store_for(&config);
    let mut exit_code = EXIT_OK;

    let report = match &cli.command {
        Command::Estimate {
            target,
            n,
            max_len,
            conditional,
            sampled,
            alpha,
            epsilon,
            k,
        } => {
            let max_len = max_len.unwrap_or(config.max_len);
            let n_flag = *n;
            let (state, target_desc, target_program) =
                load_target(target, n_flag.unwrap_or(config.n))?;
            let n = state.n_qubits();
            if let Some(want) = n_flag.filter(|&want| want != n) {
                return Err(EstimatorError::DimensionMismatch { target: n, n: want }.into());
            }
            config.n = n;
            config.max_len = max_len;
            let cond = conditional
                .as_deref()
                .map(|c| parse_program(c).and_then(|p| Ok(decode_conditional(p.bits(), n)?)))
                .transpose()?;
            let table = store.get(n, max_len, cond.as_ref())?;
            info!("{} halting programs up to length {max_len}", table.len());
            let target_record = target_program.as_ref().and_then(|p| {
                let out = run(p, n, None).output?;
                EstimateRecord::new(p.clone(), crate::statevec::fidelity(&state, &out).ok()?)
            });
            let params = json!({
                "target": target_desc,
                "n": n,
                "max_len": max_len,
                "conditional": cond.as_ref().map(|c| c.to_string()),
                "sampled": sampled,
            });
            let stem = format!(
                "estimate-{}-n{n}-len{max_len}",
                crate::proglang::ENCODING_VERSION
            );
            if *sampled {
                config.alpha = alpha.unwrap_or(config.alpha);
                config.epsilon = epsilon.unwrap_or(config.epsilon);
                let plan = match k {
                    Some(k) => SamplingPlan::with_k(n, config.alpha, config.epsilon, *k)?,
                    None => SamplingPlan::new(n, config.alpha, config.epsilon)?,
                };
                let est = sampled_estimate_in(&state, &table, plan, max_len, config.seed)?;
                if est.estimate().is_none() {
                    exit_code = EXIT_NO_ESTIMATE;
                }
                let rows = est
                    .trace
                    .iter()
                    .map(|t| {
                        vec![
                            t.index.to_string(),
                            t.program.to_bit_string(),
                            t.estimate.to_string(),
                        ]
                    })
                    .collect();
                let result = json!({
                    "estimate": est.estimate(),
                    "ideal": est.ideal,
                    "excess": est.excess(),
                    "detail": est,
                    "target_program_record": target_record,
                });
                Report::new(
                    "estimate",
                    format!("{stem}-sampled-seed{}", config.seed),
                    params,
                    result,
                )?
                .with_csv(&["index", "program", "estimate"], rows)
            } else {
                let est = exact_estimate_in(&state, &table, max_len)?;
                if est.total().is_none() {
                    exit_code = EXIT_NO_ESTIMATE;
                }
                let rows = est
                    .trace
                    .iter()
                    .map(|t| {
                        vec![
                            t.index.to_string(),
                            t.program.to_bit_string(),
                            t.total.to_string(),
                        ]
                    })
                    .collect();
                let result = json!({
                    "total": est.total(),
                    "best": est.best,
                    "trace": est.trace,
                    "candidates": est.candidates,
                    "target_program_record": target_record,
                });
                Report::new("estimate", stem, params, result)?
                    .with_csv(&["index", "program", "total"], rows)
            }
        }
        Command::Census {
            n,
            c,
            max_len,
            rotated,
        } => {
            let (n, max_len) = (n.unwrap_or(config.n), max_len.unwrap_or(config.max_len));
            (config.n, config.max_len) = (n, max_len);
            let kind = if *rotated {
                BasisKind::Rotated
            } else {
                BasisKind::Standard
            };
            let r = census(n, *c, max_len, kind, &mut store)?;
            let stem = format!(
                "census-{}-n{n}-c{c}-len{max_len}-{}",
                r.version,
                if *rotated { "rotated" } else { "standard" }
            );
            let rows = r.csv_rows();
            Report::new(
                "census",
                stem,
                json!({"n": n, "c": c, "max_len": max_len, "basis": kind}),
                &r,
            )?
            .with_csv(CensusReport::csv_header(), rows)
        }
        Command::Consistency { n, max_len } => {
            let (n, max_len) = (n.unwrap_or(config.n), max_len.unwrap_or(config.max_len));
            (config.n, config.max_len) = (n, max_len);
            let r = consistency_sweep(n, max_len, &mut store)?;
            let stem = format!("consistency-{}-n{n}-len{max_len}", r.version);
            let rows = r.csv_rows();
            Report::new("consistency", stem, json!({"n": n, "max_len": max_len}), &r)?
                .with_csv(ConsistencySweep::csv_header(), rows)
        }
        Command::Subadd { px, py, n, max_len } => {
            let max_len = max_len.unwrap_or(config.max_len);
            (config.n, config.max_len) = (*n, max_len);
            let (px, py) = (parse_program(px)?, parse_program(py)?);
            let r = subadditivity_report(&px, &py, *n, max_len, &mut store)?;
            let stem = format!(
                "subadd-{}-n{n}-len{max_len}-{px}-{py}",
                crate::proglang::ENCODING_VERSION
            );
            let params = json!({"p_x": program_json(&px), "p_y": program_json(&py), "n": n, "max_len": max_len});
            Report::new("subadd", stem, params, &r)?
                .with_csv(SubadditivityReport::csv_header(), vec![r.csv_row()])
        }
        Command::Joint { px, py, n, max_len } => {
            let max_len = max_len.unwrap_or(config.max_len);
            (config.n, config.max_len) = (*n, max_len);
            let (px, py) = (parse_program(px)?, parse_program(py)?);
            let r = joint_bound_report(&px, &py, *n, max_len, &mut store)?;
            let stem = format!(
                "joint-{}-n{n}-len{max_len}-{px}-{py}",
                crate::proglang::ENCODING_VERSION
            );
            let params = json!({"p_x": program_json(&px), "p_y": program_json(&py), "n": n, "max_len": max_len});
            Report::new("joint", stem, params, &r)?.with_flat_csv()
        }
        Command::Superpose {
            bits,
            position,
            max_len,
        } => {
            let max_len = max_len.unwrap_or(config.max_len);
            (config.n, config.max_len) = (bits.len(), max_len);
            let r = superposed_bit_example(bits, *position, max_len, &mut store)?;
            let stem = format!(
                "superpose-{}-{bits}-pos{position}-len{max_len}",
                crate::proglang::ENCODING_VERSION
            );
            let params = json!({"bits": bits, "position": position, "max_len": max_len});
            Report::new("superpose", stem, params, &r)?.with_flat_csv()
        }
        Command::Sweep {
            n,
            c,
            max_len,
            samples,
        } => {
            let (n, max_len) = (n.unwrap_or(config.n), max_len.unwrap_or(config.max_len));
            (config.n, config.max_len) = (n, max_len);
            let r = uniform_sweep(n, *c, max_len, *samples, config.seed, &mut store)?;
            let stem = format!(
                "sweep-{}-n{n}-c{c}-len{max_len}-seed{}",
                crate::proglang::ENCODING_VERSION,
                config.seed
            );
            let params = json!({"n": n, "c": c, "max_len": max_len, "samples": samples});
            Report::new("sweep", stem, params, &r)?.with_flat_csv()
        }
        Command::Encode { n, instrs } => {
            let n = n.unwrap_or(config.n);
            config.n = n;
            let parsed = instrs
                .iter()
                .map(|s| s.parse::<Instr>())
                .collect::<Result<Vec<_>, _>>()?;
            let p = encode(&parsed, n)?;
            let listing: Vec<String> = parsed.iter().map(|i| i.to_string()).collect();
            Report::new(
                "encode",
                format!("encode-n{n}"),
                json!({"n": n, "instrs": listing}),
                program_json(&p),
            )?
            .with_flat_csv()
        }
        Command::Decode { bits, program, n } => {
            let n = n.unwrap_or(config.n);
            config.n = n;
            let p = match (bits, program) {
                (Some(b), _) => Program::parse_bits(b)?,
                (None, Some(p)) => parse_program(p)?,
                (None, None) => {
                    return Err(CliError::Usage(
                        "one of --bits or --program is required".into(),
                    ))
                }
            };
            let d = decode(p.bits(), n, true)?;
            let listing: Vec<String> = d.program.instrs().iter().map(|i| i.to_string()).collect();
            let result = json!({"program": program_json(&p), "instrs": listing});
            Report::new("decode", format!("decode-n{n}"), json!({"n": n}), result)?.with_flat_csv()
        }
        Command::Enumerate { max_len, n } => {
            let (n, max_len) = (n.unwrap_or(config.n), max_len.unwrap_or(config.max_len));
            (config.n, config.max_len) = (n, max_len);
            return enumerate_listing(n, max_len, &config);
        }
        Command::Kplan { n, alpha, epsilon } => {
            let n = n.unwrap_or(config.n);
            config.n = n;
            config.alpha = alpha.unwrap_or(config.alpha);
            config.epsilon = epsilon.unwrap_or(config.epsilon);
            let k = k_from_bound(n, config.alpha, config.epsilon)?;
            let params = json!({"n": n, "alpha": config.alpha, "epsilon": config.epsilon});
            Report::new("kplan", format!("kplan-n{n}"), params, json!({"k": k}))?.with_flat_csv()
        }
    };

    let stdout = report.render(&config)?;
    if let Some(dir) = &cli.out_dir {
        let (path, manifest) = report.write_files(&config, dir, &stdout)?;
        info!("wrote {} and {}", path.display(), manifest.display());
    }
    Ok(Outcome { stdout, exit_code })
}

fn load_target(
    target: &TargetArgs,
    n: usize,
) -> Result<(ExactState, serde_json::Value, Option<Program>), CliError> {
    if let Some(bits) = &target.classical {
        let state = ExactState::classical(bits)?;
        return Ok((state, json!({"classical": bits}), None));
    }
    if let Some(p) = &target.program {
        let p = parse_program(p)?;
        let decoded = decode_conditional(p.bits(), n)?;
        let gates: Vec<_> = decoded.gates().copied().collect();
        let state = crate::statevec::prepare(n, &gates)?;
        return Ok((state, json!({"program": program_json(&p)}), Some(p)));
    }
    if let Some(path) = &target.state {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let state = ExactState::from_json_str(&text)?;
        return Ok((state, json!({"state": path.display().to_string()}), None));
    }
    Err(CliError::Usage("no target given".into()))
}

#[derive(Serialize)]
struct ListingLine<'a> {
    schema_version: &'static str,
    config: &'a Config,
    len: usize,
    bits: String,
    hex: String,
    instrs: Vec<String>,
}

/// One line per program: JSON Lines or CSV.
fn enumerate_listing(n: usize, max_len: usize, config: &Config) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut stdout = String::new();
    for p in enumerate(max_len, n) {
        let instrs: Vec<String> = decode(p.bits(), n, true)?
            .program
            .instrs()
            .iter()
            .map(|i| i.to_string())
            .collect();
        match config.format {
            Format::Json => {
                let line = ListingLine {
                    schema_version: SCHEMA_VERSION,
                    config,
                    len: p.len(),
                    bits: p.to_bit_string(),
                    hex: format!("{}:{}", p.len(), p.to_hex()),
                    instrs,
                };
                stdout.push_str(
                    &serde_json::to_string(&line).map_err(|e| CliError::Failed(e.to_string()))?,
                );
                stdout.push('\n');
            }
            Format::Csv => rows.push(vec![
                p.len().to_string(),
                p.to_bit_string(),
                format!("{}:{}", p.len(), p.to_hex()),
                instrs.join(" "),
            ]),
        }
    }
    if config.format == Format::Csv {
        let report = Report::new("enumerate", String::new(), json!({}), json!({}))?
            .with_csv(&["len", "bits", "hex", "instrs"], rows);
        stdout = report.render(config)?;
    }
    Ok(Outcome {
        stdout,
        exit_code: EXIT_OK,
    })
}

/// Entry point shared by the binary: parse, run, print, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let level = cli
        .resolve_config()
        .map(|c| c.verbosity)
        .unwrap_or_else(|_| "warn".into());
    let _ = env_logger::Builder::new().parse_filters(&level).try_init();
    match run_cli(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome, CliError> {
        let mut full = vec!["qkc"];
        full.extend_from_slice(args);
        run_cli(&Cli::try_parse_from(full).map_err(|e| CliError::Usage(e.to_string()))?)
    }

    fn result(out: &Outcome) -> serde_json::Value {
        serde_json::from_str::<serde_json::Value>(&out.stdout).unwrap()["result"].clone()
    }

    #[test]
    fn estimate_classical_zero() {
        let out = run_args(&[
            "estimate",
            "--classical",
            "00",
            "--n",
            "2",
            "--max-len",
            "12",
        ])
        .unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(result(&out)["total"], 1);
    }

    #[test]
    fn estimate_program_target_has_zero_penalty_record() {
        let p = encode(&[crate::statevec::Gate::rot(0).into()], 1).unwrap();
        let arg = format!("{}:{}", p.len(), p.to_hex());
        let out =
            run_args(&["estimate", "--program", &arg, "--n", "1", "--max-len", "10"]).unwrap();
        let r = result(&out);
        assert_eq!(r["target_program_record"]["penalty"], 0);
        assert_eq!(r["total"], 3);
    }

    #[test]
    fn no_finite_estimate_exit_code() {
        let out =
            run_args(&["estimate", "--classical", "1", "--n", "1", "--max-len", "1"]).unwrap();
        assert_eq!(out.exit_code, EXIT_NO_ESTIMATE);
        assert!(result(&out)["total"].is_null());
    }

    #[test]
    fn usage_errors() {
        let e = run_args(&["estimate", "--classical", "01", "--n", "3"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        let e =
            run_args(&["kplan", "--n", "4", "--alpha", "0.01", "--epsilon", "0.6"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        let e = run_args(&["kplan", "--n", "4", "--alpha", "1", "--epsilon", "0.25"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        assert!(run_args(&["estimate", "--classical", "0", "--state", "x.json"]).is_err());
    }

    #[test]
    fn kplan_value() {
        let out = run_args(&["kplan", "--n", "4", "--alpha", "0.01", "--epsilon", "0.25"]).unwrap();
        assert_eq!(result(&out)["k"], 975);
    }

    #[test]
    fn enumerate_and_codec_commands() {
        let out = run_args(&["enumerate", "--max-len", "1", "--n", "2"]).unwrap();
        assert_eq!(out.stdout.lines().count(), 1);
        let out = run_args(&["decode", "--bits", "1", "--n", "2"]).unwrap();
        assert_eq!(result(&out)["instrs"], json!([]));
        let out = run_args(&["encode", "--n", "2", "X(0)", "CNOT(0,1)", "CALLC"]).unwrap();
        let bits = result(&out)["bits"].as_str().unwrap().to_string();
        let out = run_args(&["decode", "--bits", &bits, "--n", "2"]).unwrap();
        assert_eq!(
            result(&out)["instrs"],
            json!(["X(0)", "CNOT(0,1)", "CALLC"])
        );
    }

    #[test]
    fn census_and_consistency_commands() {
        let out = run_args(&["census", "--n", "2", "--c", "1", "--max-len", "12"]).unwrap();
        assert_eq!(result(&out)["verdict"], true);
        let out = run_args(&[
            "--format",
            "csv",
            "consistency",
            "--n",
            "2",
            "--max-len",
            "12",
        ])
        .unwrap();
        let mut rd = csv::Reader::from_reader(out.stdout.as_bytes());
        let gap_col = rd
            .headers()
            .unwrap()
            .iter()
            .position(|h| h == "gap")
            .unwrap();
        let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r[gap_col].parse::<i64>().unwrap() >= 0));
    }

    #[test]
    fn config_file_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("qkc.conf");
        std::fs::write(&cfg, "n = 1\nmax_len = 8\nseed = 9\n").unwrap();
        let cfg = cfg.to_str().unwrap();
        let out = run_args(&[
            "--config",
            cfg,
            "kplan",
            "--alpha",
            "0.5",
            "--epsilon",
            "0.25",
        ])
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["config"]["seed"], 9);
        assert_eq!(v["result"]["k"], 200);
        let out = run_args(&["--config", cfg, "--seed", "4", "kplan"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["config"]["seed"], 4);
    }
}
