//! `clusterfree`: build, verify and search for d-cluster-free families from the command line.
//!
//! Exit codes: 0 success, 1 negative outcome (mismatch, cluster found, lower bound only,
//! infeasible), 2 usage error or malformed input.

mod cache;

/// stdout writes that stop quietly when the reader goes away (for example `| head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

use anyhow::{anyhow, Context};
use cache::{digest, Cache, CacheRecord, Problem};
use clap::{Parser, Subcommand, ValueEnum};
use clusterfree::constructions::{ex_tight_path_3, l3_inner, size_l1, size_l2, size_l3, size_l4, size_l5, size_s};
use clusterfree::search::DEFAULT_BUDGET;
use clusterfree::*;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "clusterfree", version, about = "Exact tools for d-cluster-free set families")]
struct Cli {
    /// Structured JSON output on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Directory holding the result cache.
    #[arg(long, global = true, env = "CLUSTERFREE_CACHE")]
    cache: Option<PathBuf>,
    /// Search node limit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Solver threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// On a cache hit, recompute and compare value and witness digest.
    #[arg(long, global = true)]
    recheck: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named construction and compare its size with the closed form.
    Construct {
        #[arg(ignore_case = true)]
        name: Construction,
        n: u32,
        k: u32,
        nu: u32,
        /// Cluster size (L5 only).
        #[arg(long)]
        d: Option<usize>,
        /// Inner graph file for L3 or L5 (multigraph text format on [n-kν-1]).
        #[arg(long)]
        inner: Option<PathBuf>,
        /// Write the family here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a family file for d-clusters and compute its matching number.
    Verify {
        file: PathBuf,
        #[arg(long, short)]
        d: usize,
        #[arg(long)]
        expected_matching: Option<usize>,
    },
    /// Turán numbers of multigraph patterns and tight 2-paths.
    Turan {
        #[command(subcommand)]
        kind: TuranKind,
    },
    /// Exact f(n,k,d,ν) or g(n,k,d,t).
    Extremal {
        problem: ExtremalProblem,
        n: u32,
        k: u32,
        d: usize,
        /// ν for f, t for g.
        nu_or_t: u32,
        /// Write the witness here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Lower and upper bound report for f(n,k,d,ν) as JSON.
    Report { n: u32, k: u32, d: usize, nu: u32 },
}

#[derive(Subcommand)]
enum TuranKind {
    /// Largest r-multigraph on n vertices in which no v vertices span e edges.
    Pattern {
        n: u32,
        r: u32,
        v: u32,
        e: u64,
        /// Restrict to simple graphs.
        #[arg(long)]
        simple: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Largest simple r-graph on n vertices without a tight path of l edges.
    TightPath {
        n: u32,
        r: u32,
        l: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Construction {
    #[value(name = "S")]
    S,
    #[value(name = "L1")]
    L1,
    #[value(name = "L2")]
    L2,
    #[value(name = "L3")]
    L3,
    #[value(name = "L4")]
    L4,
    #[value(name = "L5")]
    L5,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtremalProblem {
    F,
    G,
}

/// An error together with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } | Error::Verification(_) => 1,
            _ => 2,
        };
        Failure { code, err: e.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        match err.downcast::<Error>() {
            Ok(e) => e.into(),
            Err(err) => Failure { code: 2, err },
        }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            f.code
        }
    };
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Outcome {
    let mut config = SearchConfig::with_budget(cli.budget);
    if let Some(t) = cli.threads {
        config = config.threads(t);
    }
    match &cli.command {
        Command::Construct { name, n, k, nu, d, inner, out } => {
            construct(cli, &config, *name, ConstructionParams::new(*n, *k, *nu), *d, inner.as_deref(), out.as_deref())
        }
        Command::Verify { file, d, expected_matching } => verify(cli, file, *d, *expected_matching),
        Command::Turan { kind } => match *kind {
            TuranKind::Pattern { n, r, v, e, simple, ref out } => {
                let p = ForbiddenPattern::new(v, e, r, simple)?;
                let (problem, params) =
                    (if simple { Problem::SimpleTuran } else { Problem::MultigraphTuran }, vec![n.into(), r.into(), v.into(), e]);
                search(cli, &config, problem, params, out.as_deref(), |c| {
                    if simple {
                        turan_simple(n, &p, c)
                    } else {
                        turan_multigraph(n, &p, c)
                    }
                })
            }
            TuranKind::TightPath { n, r, l, ref out } => {
                search(cli, &config, Problem::TightPath, vec![n.into(), r.into(), l.into()], out.as_deref(), |c| {
                    turan_tight_path(n, r, l, c)
                })
            }
        },
        Command::Extremal { problem, n, k, d, nu_or_t, out } => {
            let (n, k, d, x) = (*n, *k, *d, *nu_or_t);
            let params = vec![n.into(), k.into(), d as u64, x.into()];
            match problem {
                ExtremalProblem::F => search(cli, &config, Problem::F, params, out.as_deref(), |c| compute_f_exact(n, k, d, x, c)),
                ExtremalProblem::G => {
                    search(cli, &config, Problem::G, params, out.as_deref(), |c| compute_g_exact(n, k, d, x as usize, c))
                }
            }
        }
        Command::Report { n, k, d, nu } => {
            let report = bound_report(*n, *k, *d, *nu, &config)?;
            outln!("{}", serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?);
            Ok(0)
        }
    }
}

fn read_inner(path: Option<&Path>) -> anyhow::Result<Option<Multigraph>> {
    path.map(|p| {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        Multigraph::from_text(&text).with_context(|| format!("parsing {}", p.display()))
    })
    .transpose()
}

fn construct(
    cli: &Cli,
    config: &SearchConfig,
    name: Construction,
    p: ConstructionParams,
    d: Option<usize>,
    inner: Option<&Path>,
    out: Option<&Path>,
) -> Outcome {
    let (n, k, nu) = (p.n, p.k, p.nu);
    let inner = read_inner(inner)?;
    let (family, formula) = match name {
        Construction::S => (construct_s(&p)?, size_s(n, k, nu)),
        Construction::L1 => (construct_l1(&p)?, size_l1(n, k, nu)),
        Construction::L2 => {
            let family = construct_l2(&p, config)?;
            (family, size_l2(n, k, nu, ex_tight_path_3(nu, config)?))
        }
        Construction::L3 => {
            let g = match inner {
                Some(g) => g,
                None => {
                    p.layout()?;
                    l3_inner(p.w_size(), k, config)?
                }
            };
            (construct_l3_from(&p, &g)?, size_l3(n, k, g.edge_count()))
        }
        Construction::L4 => (construct_l4(&p)?, size_l4(n, k, nu)),
        Construction::L5 => {
            let d = d.ok_or_else(|| Failure { code: 2, err: anyhow!("L5 needs --d") })?;
            if d < 5 || k < 3 {
                return Err(Error::Parameter("L5 needs d >= 5 and k >= 3".into()).into());
            }
            let p = p.with_d(d);
            p.layout()?;
            let g = match inner {
                Some(g) => g,
                None => {
                    let pattern = ForbiddenPattern::multigraph(k - 1, d as u64 - 2, k - 2)?;
                    let res = turan_multigraph(p.w_size(), &pattern, config)?;
                    if !res.is_proven() {
                        eprintln!("note: inner multigraph search stopped at the budget; using the best graph found");
                    }
                    res.witness.and_then(|w| w.as_multigraph().cloned()).ok_or_else(|| anyhow!("no inner multigraph"))?
                }
            };
            (construct_l5(&p, &g)?, size_l5(n, k, nu, g.edge_count()))
        }
    };
    let canonical = family.to_text();
    let data = if cli.json { family.to_json() + "\n" } else { canonical.clone() };
    let size = family.len() as u128;
    let summary = Summary { name: format!("{name:?}"), size, formula, digest: digest(&canonical), out: out.map(Path::to_path_buf) };
    match out {
        Some(path) => {
            fs::write(path, &data).with_context(|| format!("writing {}", path.display()))?;
            out!("{}", summary.render(cli.json));
        }
        None => {
            out!("{data}");
            eprint!("{}", summary.render(false));
        }
    }
    if size != formula {
        eprintln!("size mismatch: generated {size}, closed form {formula}");
        return Ok(1);
    }
    Ok(0)
}

#[derive(Serialize)]
struct Summary {
    name: String,
    #[serde(serialize_with = "as_string")]
    size: u128,
    #[serde(serialize_with = "as_string")]
    formula: u128,
    digest: String,
    out: Option<PathBuf>,
}

fn as_string<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(*v) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

impl Summary {
    fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string(self).expect("summary serializes") + "\n";
        }
        let mut s = format!("construction {}\nsize {}\nformula {}\ndigest {}\n", self.name, self.size, self.formula, self.digest);
        if let Some(p) = &self.out {
            s.push_str(&format!("out {}\n", p.display()));
        }
        s
    }
}

#[derive(Serialize)]
struct VerifyReport {
    n: u32,
    k: u32,
    members: usize,
    d: usize,
    digest: String,
    cluster_free: bool,
    cluster: Option<Vec<Vec<u32>>>,
    matching: usize,
    matching_members: Vec<Vec<u32>>,
    expected_matching: Option<usize>,
    ok: bool,
}

fn verify(cli: &Cli, file: &Path, d: usize, expected: Option<usize>) -> Outcome {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let family = SetFamily::parse(&text).with_context(|| format!("parsing {}", file.display()))?;
    if d < 2 {
        return Err(Error::Parameter("d must be at least 2".into()).into());
    }
    let cluster = if d <= family.len() { find_d_cluster(&family, d)? } else { None };
    let (matching, mw) = matching_number(&family)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| family.members()[i].clone()).collect::<Vec<_>>();
    let ok = cluster.is_none() && expected.is_none_or(|e| e == matching);
    let report = VerifyReport {
        n: family.n(),
        k: family.k(),
        members: family.len(),
        d,
        digest: digest(&family.to_text()),
        cluster_free: cluster.is_none(),
        cluster: cluster.as_ref().map(|c| pick(&c.indices)),
        matching,
        matching_members: pick(&mw.indices),
        expected_matching: expected,
        ok,
    };
    if cli.json {
        outln!("{}", serde_json::to_string(&report).map_err(anyhow::Error::from)?);
    } else {
        let line = |m: &[u32]| m.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        outln!("members {}", report.members);
        outln!("digest {}", report.digest);
        match &report.cluster {
            None => outln!("cluster-free"),
            Some(c) => {
                outln!("cluster {}", cluster.as_ref().unwrap().indices.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
                for m in c {
                    outln!("cluster-member {}", line(m));
                }
            }
        }
        outln!("matching {matching}");
        for m in &report.matching_members {
            outln!("matching-member {}", line(m));
        }
    }
    if let Some(e) = expected.filter(|&e| e != matching) {
        eprintln!("matching number {matching} differs from the expected {e}");
    }
    if !report.cluster_free {
        eprintln!("family contains a {d}-cluster");
    }
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    #[serde(flatten)]
    record: &'a CacheRecord,
    source: &'static str,
    witness_path: Option<&'a Path>,
}

fn search(
    cli: &Cli,
    config: &SearchConfig,
    problem: Problem,
    params: Vec<u64>,
    out: Option<&Path>,
    compute: impl Fn(&SearchConfig) -> Result<SearchResult>,
) -> Outcome {
    let cache = cli.cache.as_deref().map(Cache::open).transpose()?;
    let hit = match &cache {
        Some(c) => c.lookup(problem, &params, config.budget)?,
        None => None,
    };
    let fresh = |config: &SearchConfig| -> std::result::Result<CacheRecord, Failure> {
        Ok(CacheRecord::from_result(problem, params.clone(), config.budget, &compute(config)?))
    };
    let (record, source) = match hit {
        Some(hit) => {
            if cli.recheck {
                let again = fresh(config)?;
                let settled = hit.status() != Some(Status::LowerBoundOnly);
                if settled && !hit.same_outcome(&again) {
                    eprintln!(
                        "recheck mismatch: cached {} ({}) digest {:?}, recomputed {} ({}) digest {:?}",
                        hit.value, hit.status, hit.witness_digest, again.value, again.status, again.witness_digest
                    );
                    return Ok(1);
                }
                eprintln!("recheck: cached entry reproduced");
            }
            (hit, "cache")
        }
        None => {
            let record = fresh(config)?;
            if let Some(c) = &cache {
                c.append(&record)?;
            }
            (record, "computed")
        }
    };
    if let (Some(path), Some(w)) = (out, &record.witness) {
        fs::write(path, w).with_context(|| format!("writing {}", path.display()))?;
    }
    let witness_path = out.filter(|_| record.witness.is_some());
    if cli.json {
        let o = SearchOutput { record: &record, source, witness_path };
        outln!("{}", serde_json::to_string(&o).map_err(anyhow::Error::from)?);
    } else {
        outln!("value {}", record.value);
        outln!("status {}", record.status);
        outln!("digest {}", record.witness_digest.as_deref().unwrap_or("-"));
        match (witness_path, &record.witness) {
            (Some(p), _) => outln!("witness {}", p.display()),
            (None, Some(w)) => out!("witness\n{w}"),
            (None, None) => {}
        }
    }
    eprintln!("{}{:?}: {} ({}, {source})", problem.name(), record.params, record.value, record.status);
    Ok(match record.status() {
        Some(Status::ProvenOptimal | Status::Unbounded) => 0,
        _ => 1,
    })
}
