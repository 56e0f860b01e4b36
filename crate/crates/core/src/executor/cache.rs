//! JSON-lines cache of halted outputs, one file per
//! `(encoding version, n, max_len, conditional)`.
//!
//! Line 1 is a header; every further line is one halted program in enumeration
//! order, carrying a SHA-256 of its own payload. Any mismatch on load discards the
//! file and recomputes.

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{compile, run};
use crate::proglang::{enumerate, DecodedProgram, Program, ENCODING_VERSION};
use crate::ExactState;

/// One halted program and its output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CachedOutput {
    pub program: Program,
    pub output: ExactState,
    pub steps: u64,
}

/// All halted outputs up to a length bound, in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub n: usize,
    pub max_len: usize,
    pub entries: Vec<CachedOutput>,
}

impl OutputTable {
    /// Runs every enumerated program (in parallel; order is preserved).
    pub fn compute(n: usize, max_len: usize, conditional: Option<&DecodedProgram>) -> Self {
        let programs: Vec<Program> = enumerate(max_len, n).collect();
        let entries = programs
            .par_iter()
            .map(|p| run(p, n, conditional))
            .collect::<Vec<_>>()
            .into_iter()
            .filter_map(|r| {
                Some(CachedOutput {
                    output: r.output?,
                    program: r.program,
                    steps: r.steps,
                })
            })
            .collect();
        Self {
            n,
            max_len,
            entries,
        }
    }

    /// Entries whose program is at most `max_len` bits.
    pub fn up_to(&self, max_len: usize) -> impl Iterator<Item = &CachedOutput> {
        self.entries
            .iter()
            .take_while(move |e| e.program.len() <= max_len)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CacheStats {
    /// Programs simulated by this call.
    pub simulated: usize,
    pub hit: bool,
    /// An existing file was rejected and overwritten.
    pub rebuilt: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Header {
    version: String,
    n: usize,
    max_len: usize,
    conditional: Option<String>,
    count: usize,
}

#[derive(Serialize)]
struct Payload<'a> {
    program: &'a Program,
    output: &'a ExactState,
    steps: u64,
}

#[derive(Serialize, Deserialize)]
struct Line {
    program: Program,
    output: ExactState,
    steps: u64,
    hash: String,
}

fn content_hash(entry: &CachedOutput) -> String {
    let payload = Payload {
        program: &entry.program,
        output: &entry.output,
        steps: entry.steps,
    };
    let bytes = serde_json::to_vec(&payload).expect("payload serializes");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn conditional_key(conditional: Option<&DecodedProgram>) -> Option<String> {
    conditional.map(|c| {
        let digest = Sha256::digest(c.to_string().as_bytes());
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    })
}

/// Directory-backed output cache. Single writer per key; files are replaced
/// atomically by rename.
#[derive(Debug, Clone)]
pub struct OutputCache {
    dir: PathBuf,
}

impl OutputCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(
        &self,
        n: usize,
        max_len: usize,
        conditional: Option<&DecodedProgram>,
    ) -> PathBuf {
        let suffix = conditional_key(conditional)
            .map(|k| format!("-c{k}"))
            .unwrap_or_default();
        self.dir.join(format!(
            "outputs-{ENCODING_VERSION}-n{n}-len{max_len}{suffix}.jsonl"
        ))
    }

    /// All halted outputs up to `max_len`, loading from disk when a valid file
    /// exists and computing and persisting them otherwise.
    pub fn load_or_compute(
        &self,
        n: usize,
        max_len: usize,
        conditional: Option<&DecodedProgram>,
    ) -> io::Result<(OutputTable, CacheStats)> {
        let path = self.path_for(n, max_len, conditional);
        let header = Header {
            version: ENCODING_VERSION.to_string(),
            n,
            max_len,
            conditional: conditional.map(|c| c.to_string()),
            count: 0,
        };
        let mut rebuilt = false;
        if path.exists() {
            match read_table(&path, &header, conditional) {
                Ok(entries) => {
                    let table = OutputTable {
                        n,
                        max_len,
                        entries,
                    };
                    return Ok((
                        table,
                        CacheStats {
                            simulated: 0,
                            hit: true,
                            rebuilt: false,
                        },
                    ));
                }
                Err(reason) => {
                    warn!("discarding cache file {}: {reason}", path.display());
                    rebuilt = true;
                }
            }
        }
        let simulated = enumerate(max_len, n).count();
        let table = OutputTable::compute(n, max_len, conditional);
        fs::create_dir_all(&self.dir)?;
        write_table(
            &path,
            Header {
                count: table.entries.len(),
                ..header
            },
            &table.entries,
        )?;
        Ok((
            table,
            CacheStats {
                simulated,
                hit: false,
                rebuilt,
            },
        ))
    }
}

/// Memoizing source of output tables, optionally backed by an [`OutputCache`].
/// A table for a larger bound is reused for smaller ones.
#[derive(Debug, Default)]
pub struct TableStore {
    cache: Option<OutputCache>,
    memo: Vec<(Option<String>, Arc<OutputTable>)>,
    simulated: usize,
}

impl TableStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn cached(cache: OutputCache) -> Self {
        Self {
            cache: Some(cache),
            ..Self::default()
        }
    }

    /// Programs simulated so far through this store.
    pub fn simulated(&self) -> usize {
        self.simulated
    }

    pub fn get(
        &mut self,
        n: usize,
        max_len: usize,
        conditional: Option<&DecodedProgram>,
    ) -> io::Result<Arc<OutputTable>> {
        let key = conditional.map(|c| c.to_string());
        if let Some((_, t)) = self
            .memo
            .iter()
            .find(|(k, t)| *k == key && t.n == n && t.max_len >= max_len)
        {
            return Ok(Arc::clone(t));
        }
        let table = match &self.cache {
            Some(cache) => {
                let (table, stats) = cache.load_or_compute(n, max_len, conditional)?;
                self.simulated += stats.simulated;
                table
            }
            None => {
                self.simulated += enumerate(max_len, n).count();
                OutputTable::compute(n, max_len, conditional)
            }
        };
        let table = Arc::new(table);
        self.memo.push((key, Arc::clone(&table)));
        Ok(table)
    }
}

fn write_table(path: &Path, header: Header, entries: &[CachedOutput]) -> io::Result<()> {
    let tmp = path.with_extension(format!("jsonl.tmp{}", std::process::id()));
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        serde_json::to_writer(&mut w, &header)?;
        w.write_all(b"\n")?;
        for e in entries {
            let line = Line {
                program: e.program.clone(),
                output: e.output.clone(),
                steps: e.steps,
                hash: content_hash(e),
            };
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)
}

fn read_table(
    path: &Path,
    expected: &Header,
    conditional: Option<&DecodedProgram>,
) -> Result<Vec<CachedOutput>, String> {
    let file = fs::File::open(path).map_err(|e| e.to_string())?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or("empty file")?
        .map_err(|e| e.to_string())?;
    let header: Header = serde_json::from_str(&first).map_err(|e| format!("bad header: {e}"))?;
    if header.version != expected.version {
        return Err(format!(
            "version {} != {}",
            header.version, expected.version
        ));
    }
    if (header.n, header.max_len, &header.conditional)
        != (expected.n, expected.max_len, &expected.conditional)
    {
        return Err("header does not match the requested key".into());
    }

    let mut entries = Vec::with_capacity(header.count);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        let rec: Line = serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", i + 2))?;
        let entry = CachedOutput {
            program: rec.program,
            output: rec.output,
            steps: rec.steps,
        };
        if content_hash(&entry) != rec.hash {
            return Err(format!("hash mismatch on line {}", i + 2));
        }
        if entry.output.n_qubits() != expected.n {
            return Err(format!("wrong dimension on line {}", i + 2));
        }
        entries.push(entry);
    }
    if entries.len() != header.count {
        return Err(format!(
            "expected {} records, found {}",
            header.count,
            entries.len()
        ));
    }
    let halting = enumerate(expected.max_len, expected.n)
        .filter(|p| compile(p, expected.n, conditional).is_some());
    let mut listed = entries.iter().map(|e| &e.program);
    for p in halting {
        if listed.next() != Some(&p) {
            return Err("program list does not match the enumeration".into());
        }
    }
    if listed.next().is_some() {
        return Err("extra programs".into());
    }
    Ok(entries)
}
