//! Append-only JSON-lines store of search results, keyed by problem and parameters.

use anyhow::{Context, Result};
use clusterfree::{SearchResult, Status};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const FILE_NAME: &str = "results.jsonl";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    #[serde(rename = "EX")]
    MultigraphTuran,
    #[serde(rename = "ex")]
    SimpleTuran,
    #[serde(rename = "ex_path")]
    TightPath,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "g")]
    G,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::MultigraphTuran => "EX",
            Problem::SimpleTuran => "ex",
            Problem::TightPath => "ex_path",
            Problem::F => "f",
            Problem::G => "g",
        }
    }
}

/// A number, or one of the words `infeasible` / `unbounded`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CachedValue {
    Finite(u64),
    Word(String),
}

impl std::fmt::Display for CachedValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CachedValue::Finite(v) => write!(f, "{v}"),
            CachedValue::Word(w) => f.write_str(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub problem: Problem,
    pub params: Vec<u64>,
    pub value: CachedValue,
    pub status: String,
    /// sha256 of the canonical witness text, hex encoded.
    pub witness_digest: Option<String>,
    pub witness: Option<String>,
    pub budget: u64,
    #[serde(default)]
    pub stats: serde_json::Value,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl CacheRecord {
    pub fn from_result(problem: Problem, params: Vec<u64>, budget: u64, res: &SearchResult) -> Self {
        let witness = res.witness.as_ref().map(|w| w.to_text());
        CacheRecord {
            problem,
            params,
            value: match res.value.finite() {
                Some(v) => CachedValue::Finite(v),
                None => CachedValue::Word(res.value.to_string()),
            },
            status: res.status.as_str().to_string(),
            witness_digest: witness.as_deref().map(digest),
            witness,
            budget,
            stats: serde_json::to_value(res.stats).unwrap_or_default(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        }
    }

    pub fn status(&self) -> Option<Status> {
        Status::parse(&self.status)
    }

    /// Value and witness digest agree.
    pub fn same_outcome(&self, other: &CacheRecord) -> bool {
        self.value == other.value && self.status == other.status && self.witness_digest == other.witness_digest
    }

    /// Usable for a request with the given budget: settled answers always, lower bounds only
    /// when they came from at least as large a budget.
    fn answers(&self, budget: u64) -> bool {
        match self.status() {
            Some(Status::LowerBoundOnly) => self.budget >= budget,
            Some(_) => true,
            None => false,
        }
    }
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { path: dir.join(FILE_NAME) })
    }

    /// Latest record for the key that can answer a request with `budget`.
    pub fn lookup(&self, problem: Problem, params: &[u64], budget: u64) -> Result<Option<CacheRecord>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e).with_context(|| format!("reading {}", self.path.display())),
        };
        let mut latest = None;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(line) {
                Ok(r) if r.problem == problem && r.params == params => latest = Some(r),
                Ok(_) => {}
                Err(e) => eprintln!("warning: skipping corrupt cache line {}: {e}", i + 1),
            }
        }
        Ok(latest.filter(|r| r.answers(budget)))
    }

    /// Appends one record as a single line.
    pub fn append(&self, record: &CacheRecord) -> Result<()> {
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        file.write_all(line.as_bytes())?;
        Ok(())
    }
}
