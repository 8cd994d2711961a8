//! r-uniform multigraphs, span-based freeness, tight paths and designs.

use crate::bits::{self, Mask, MAX_VERTICES};
use crate::error::{param, Error, Result};
use crate::family::parse_numbers;
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Largest multiplicity the text format will carry.
pub const MAX_SERIALIZED_MULTIPLICITY: u64 = (1 << 31) - 1;

/// An r-uniform multigraph on `[n]`. Edges are keyed by their sorted vertex list.
#[derive(Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: u32,
    r: u32,
    edges: BTreeMap<Vec<u32>, u64>,
    edge_count: u64,
}

impl Multigraph {
    pub fn new(n: u32, r: u32) -> Result<Self> {
        if n > MAX_VERTICES {
            return param(format!("n = {n} exceeds the supported maximum of {MAX_VERTICES}"));
        }
        if r == 0 {
            return param("uniformity must be at least 1");
        }
        Ok(Multigraph { n, r, edges: BTreeMap::new(), edge_count: 0 })
    }

    /// Simple r-graph from a list of edges. Repeated edges raise multiplicities.
    pub fn from_edges<I, E>(n: u32, r: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        let mut g = Multigraph::new(n, r)?;
        for e in edges {
            g.add_edge(e.as_ref(), 1)?;
        }
        Ok(g)
    }

    /// Adds `mult` copies of `edge`. Multiplicity zero is a no-op.
    pub fn add_edge(&mut self, edge: &[u32], mult: u64) -> Result<()> {
        let mut key = edge.to_vec();
        key.sort_unstable();
        if key.len() != self.r as usize {
            return param(format!("edge {edge:?} does not have {} vertices", self.r));
        }
        if key.windows(2).any(|w| w[0] == w[1]) {
            return param(format!("edge {edge:?} repeats a vertex"));
        }
        if key.iter().any(|&v| v == 0 || v > self.n) {
            return param(format!("edge {edge:?} leaves 1..={}", self.n));
        }
        if mult == 0 {
            return Ok(());
        }
        *self.edges.entry(key).or_insert(0) += mult;
        self.edge_count += mult;
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Total number of edges, counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Number of distinct supports.
    pub fn support_size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.edges.iter().map(|(e, &m)| (e.as_slice(), m))
    }

    pub fn multiplicity(&self, edge: &[u32]) -> u64 {
        let mut key = edge.to_vec();
        key.sort_unstable();
        self.edges.get(&key).copied().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.edges.values().copied().max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    pub(crate) fn weighted_masks(&self) -> Vec<(Mask, u64)> {
        self.edges.iter().map(|(e, &m)| (bits::mask_of(e), m)).collect()
    }

    /// Text format: header `n r`, then one line per distinct edge with its vertices and,
    /// unless the graph is simple, a trailing multiplicity.
    pub fn to_text(&self) -> Result<String> {
        let simple = self.is_simple();
        let mut out = format!("{} {}\n", self.n, self.r);
        for (e, &m) in &self.edges {
            if m > MAX_SERIALIZED_MULTIPLICITY {
                return Err(Error::MultiplicityOverflow(m));
            }
            out.push_str(&e.iter().join(" "));
            if !simple {
                out.push_str(&format!(" {m}"));
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, msg: "missing `n r` header".into() })?;
        let head = parse_numbers(header, hline + 1)?;
        let [n, r] = head[..] else {
            return Err(Error::Parse { line: hline + 1, msg: "header must be `n r`".into() });
        };
        let mut g = Multigraph::new(n, r)?;
        for (i, line) in lines {
            let nums = parse_numbers(line, i + 1)?;
            let (edge, mult) = if nums.len() == r as usize {
                (&nums[..], 1)
            } else if nums.len() == r as usize + 1 {
                (&nums[..r as usize], u64::from(nums[r as usize]))
            } else {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {r} vertices and an optional multiplicity"),
                });
            };
            if mult > MAX_SERIALIZED_MULTIPLICITY {
                return Err(Error::MultiplicityOverflow(mult));
            }
            if mult == 0 {
                return Err(Error::Parse { line: i + 1, msg: "multiplicity must be at least 1".into() });
            }
            g.add_edge(edge, mult).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        }
        Ok(g)
    }
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph(n={}, r={}, {:?})", self.n, self.r, self.edges)
    }
}

/// The forbidden configuration "some `v` vertices span `e` edges" for r-uniform graphs.
/// With `simple` set only simple host graphs are considered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForbiddenPattern {
    pub v: u32,
    pub e: u64,
    pub r: u32,
    pub simple: bool,
}

impl ForbiddenPattern {
    pub fn new(v: u32, e: u64, r: u32, simple: bool) -> Result<Self> {
        if r == 0 || r > v {
            return param(format!("pattern needs 1 <= r <= v, got r = {r}, v = {v}"));
        }
        if e == 0 {
            return param("pattern needs e >= 1");
        }
        if v > MAX_VERTICES {
            return param(format!("v = {v} exceeds {MAX_VERTICES}"));
        }
        Ok(ForbiddenPattern { v, e, r, simple })
    }

    pub fn multigraph(v: u32, e: u64, r: u32) -> Result<Self> {
        Self::new(v, e, r, false)
    }

    pub fn simple(v: u32, e: u64, r: u32) -> Result<Self> {
        Self::new(v, e, r, true)
    }
}

/// Outcome of a freeness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Freeness {
    Free,
    Contains,
    /// The host has fewer than `v` vertices, so nothing can embed.
    Vacuous,
}

impl Freeness {
    /// Free in the plain sense (vacuous counts as free).
    pub fn is_free(self) -> bool {
        !matches!(self, Freeness::Contains)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub t: u32,
    pub lambda: u64,
}

fn check_pattern(g: &Multigraph, p: &ForbiddenPattern) -> Result<()> {
    if p.r != g.r {
        return param(format!("pattern is {}-uniform but the graph is {}-uniform", p.r, g.r));
    }
    if p.simple && !g.is_simple() {
        return param("a simple pattern needs a simple host graph");
    }
    Ok(())
}

/// Edge weight (with multiplicity) inside each `v`-subset of the vertex set, visited
/// in parallel. Returns how many `v`-sets reach `threshold`.
fn count_heavy_vsets(g: &Multigraph, v: u32, threshold: u64, stop_at_first: bool) -> u64 {
    let edges = g.weighted_masks();
    if edges.is_empty() {
        return 0;
    }
    let spans = |s: &Vec<u32>| {
        let mask = bits::mask_of(s);
        let w: u64 = edges.iter().filter(|(e, _)| e & !mask == 0).map(|(_, m)| m).sum();
        w >= threshold
    };
    let vsets = (1..=g.n).combinations(v as usize).par_bridge();
    if stop_at_first {
        u64::from(vsets.any(|s| spans(&s)))
    } else {
        vsets.filter(|s| spans(s)).count() as u64
    }
}

/// No `v` vertices span `e` or more edges (with multiplicity unless the pattern is simple).
pub fn is_pattern_free(g: &Multigraph, p: &ForbiddenPattern) -> Result<Freeness> {
    check_pattern(g, p)?;
    if g.n < p.v {
        return Ok(Freeness::Vacuous);
    }
    Ok(if count_heavy_vsets(g, p.v, p.e, true) == 0 {
        Freeness::Free
    } else {
        Freeness::Contains
    })
}

/// Number of `v`-sets of vertices that span at least `e` edges.
pub fn count_pattern_copies(g: &Multigraph, p: &ForbiddenPattern) -> Result<u64> {
    check_pattern(g, p)?;
    if g.n < p.v {
        return Ok(0);
    }
    Ok(count_heavy_vsets(g, p.v, p.e, false))
}

/// Some `l + r - 1` distinct vertices have every window of `r` consecutive ones as an edge.
pub fn contains_tight_path(g: &Multigraph, l: u32) -> Result<bool> {
    if !g.is_simple() {
        return param("tight paths are defined on simple graphs");
    }
    if l == 0 {
        return param("path length must be at least 1");
    }
    Ok(tight_path_in(&g.weighted_masks().iter().map(|(e, _)| *e).collect_vec(), g.r, l))
}

pub(crate) fn tight_path_in(edges: &[Mask], r: u32, l: u32) -> bool {
    if edges.is_empty() {
        return false;
    }
    if l == 1 {
        return true;
    }
    let r = r as usize;
    // completions: (r-1)-set -> vertices extending it to an edge
    let mut ext: HashMap<Mask, Vec<u32>> = HashMap::new();
    for &e in edges {
        for v in bits::vertices_of(e) {
            ext.entry(e & !bits::bit(v)).or_default().push(v);
        }
    }
    let mut seq = Vec::with_capacity(l as usize + r - 1);
    for &e in edges {
        for start in bits::vertices_of(e).into_iter().permutations(r) {
            seq.clear();
            seq.extend_from_slice(&start);
            if extend_path(&ext, &mut seq, e, r, l as usize - 1) {
                return true;
            }
        }
    }
    false
}

fn extend_path(ext: &HashMap<Mask, Vec<u32>>, seq: &mut Vec<u32>, used: Mask, r: usize, more: usize) -> bool {
    if more == 0 {
        return true;
    }
    let tail = bits::mask_of(&seq[seq.len() - (r - 1)..]);
    let Some(next) = ext.get(&tail) else { return false };
    for &w in next {
        if used & bits::bit(w) != 0 {
            continue;
        }
        seq.push(w);
        if extend_path(ext, seq, used | bits::bit(w), r, more - 1) {
            return true;
        }
        seq.pop();
    }
    false
}

/// Every `t`-subset of `[n]` lies in exactly `lambda` edges.
pub fn is_design(g: &Multigraph, d: &DesignParams) -> Result<bool> {
    if !g.is_simple() {
        return param("designs are checked on simple graphs");
    }
    if d.t > g.r || g.r > g.n || d.lambda == 0 {
        return param(format!("design needs t <= r <= n and lambda >= 1 (t = {}, r = {}, n = {})", d.t, g.r, g.n));
    }
    let mut counts: HashMap<Mask, u64> = HashMap::new();
    for (e, _) in g.edges() {
        for sub in e.iter().copied().combinations(d.t as usize) {
            *counts.entry(bits::mask_of(&sub)).or_insert(0) += 1;
        }
    }
    let total = bits::binom(i64::from(g.n), i64::from(d.t));
    Ok(counts.len() as u128 == total && counts.values().all(|&c| c == d.lambda))
}
