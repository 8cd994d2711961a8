//! Exact branch-and-bound solvers.
//!
//! Every solver describes its search tree through [`Space`] and hands it to a common
//! driver. The driver cuts the tree into a fixed list of subtrees (independent of the
//! thread count), searches them in parallel without sharing incumbents, and merges by
//! taking the first subtree, in depth-first order, that reaches the best value. Values,
//! witnesses, statuses and node counts are therefore the same for any number of threads.

mod density;
mod extremal;
mod steiner;
mod turan;

pub use density::{density_sequence, DensityPoint, DensitySequence};
pub use extremal::{compute_f_exact, compute_g_exact};
pub use turan::{turan_multigraph, turan_simple, turan_tight_path};

use crate::family::SetFamily;
use crate::multigraph::Multigraph;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::time::Instant;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Number of subtrees the driver aims for before searching.
const TARGET_UNITS: usize = 32;
const MAX_SPLIT_DEPTH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Node limit for the whole search.
    pub budget: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, threads: None }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        SearchConfig { budget, ..Default::default() }
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvenOptimal,
    LowerBoundOnly,
    Infeasible,
    Unbounded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvenOptimal => "proven-optimal",
            Status::LowerBoundOnly => "lower-bound-only",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Status::ProvenOptimal, Status::LowerBoundOnly, Status::Infeasible, Status::Unbounded]
            .into_iter()
            .find(|st| st.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Finite(u64),
    Infeasible,
    Unbounded,
}

impl Value {
    pub fn finite(self) -> Option<u64> {
        match self {
            Value::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infeasible => f.write_str("infeasible"),
            Value::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Finite(v) => s.serialize_u64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Family(SetFamily),
    Multigraph(Multigraph),
}

impl Witness {
    /// Canonical text serialization (the family or multigraph text format).
    pub fn to_text(&self) -> String {
        match self {
            Witness::Family(f) => f.to_text(),
            Witness::Multigraph(g) => g.to_text().expect("search multiplicities are small"),
        }
    }

    pub fn as_family(&self) -> Option<&SetFamily> {
        match self {
            Witness::Family(f) => Some(f),
            Witness::Multigraph(_) => None,
        }
    }

    pub fn as_multigraph(&self) -> Option<&Multigraph> {
        match self {
            Witness::Multigraph(g) => Some(g),
            Witness::Family(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub units: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: Value,
    pub witness: Option<Witness>,
    pub status: Status,
    pub stats: SearchStats,
}

impl SearchResult {
    pub(crate) fn infeasible() -> Self {
        SearchResult { value: Value::Infeasible, witness: None, status: Status::Infeasible, stats: SearchStats::default() }
    }

    pub(crate) fn unbounded() -> Self {
        SearchResult { value: Value::Unbounded, witness: None, status: Status::Unbounded, stats: SearchStats::default() }
    }

    pub(crate) fn exact(value: u64, witness: Witness) -> Self {
        SearchResult {
            value: Value::Finite(value),
            witness: Some(witness),
            status: Status::ProvenOptimal,
            stats: SearchStats::default(),
        }
    }

    pub fn is_proven(&self) -> bool {
        self.status == Status::ProvenOptimal
    }
}

/// A search tree. Each node stands for a feasible object whose size is `value`.
///
/// `children` lists subtrees in the order they are explored; whenever it is non-empty one
/// child must carry the same object as its parent (the "skip" branch), so cutting the
/// tree at any depth loses no solution. `bound` caps the value of every descendant.
pub(crate) trait Space: Sync {
    type Node: Clone + Send + Sync;

    fn value(&self, node: &Self::Node) -> u64;
    fn bound(&self, node: &Self::Node) -> u64;
    fn children(&self, node: &Self::Node) -> Vec<Self::Node>;
}

pub(crate) struct Solved<N> {
    pub best: Option<(u64, N)>,
    pub proven: bool,
    pub stats: SearchStats,
}

struct UnitRun<N> {
    best: Option<(u64, N)>,
    nodes: u64,
    prunes: u64,
    exhausted: bool,
}

/// Follows the first child down to a leaf: the solver's greedy solution.
pub(crate) fn first_dive<S: Space>(space: &S, root: &S::Node) -> (u64, S::Node) {
    let mut node = root.clone();
    let mut best = (space.value(&node), node.clone());
    loop {
        let mut kids = space.children(&node);
        if kids.is_empty() {
            return best;
        }
        node = kids.swap_remove(0);
        let v = space.value(&node);
        if v > best.0 {
            best = (v, node.clone());
        }
    }
}

/// Searches one subtree, skipping nodes whose bound is below `incumbent` or no better than
/// the best value seen in this subtree.
fn search_unit<S: Space>(space: &S, root: &S::Node, incumbent: u64, budget: u64) -> UnitRun<S::Node> {
    let mut run = UnitRun { best: None, nodes: 0, prunes: 0, exhausted: false };
    visit(space, root, incumbent, budget, &mut run);
    run
}

fn visit<S: Space>(space: &S, node: &S::Node, incumbent: u64, budget: u64, run: &mut UnitRun<S::Node>) {
    run.nodes += 1;
    if run.nodes > budget {
        run.exhausted = true;
        return;
    }
    let v = space.value(node);
    if run.best.as_ref().is_none_or(|(b, _)| v > *b) {
        run.best = Some((v, node.clone()));
    }
    let bound = space.bound(node);
    if bound < incumbent || run.best.as_ref().is_some_and(|(b, _)| bound <= *b) {
        run.prunes += 1;
        return;
    }
    for child in space.children(node) {
        visit(space, &child, incumbent, budget, run);
        if run.exhausted {
            return;
        }
    }
}

/// Cuts the forest below `roots` into roughly [`TARGET_UNITS`] subtrees, in DFS order.
/// Each unit carries the index of its root and whether it lies on that root's first-child path.
fn split<S: Space>(space: &S, roots: Vec<S::Node>) -> Vec<(S::Node, usize, bool)> {
    let mut units: Vec<(S::Node, usize, bool)> = roots.into_iter().enumerate().map(|(i, r)| (r, i, true)).collect();
    for _ in 0..MAX_SPLIT_DEPTH {
        if units.len() >= TARGET_UNITS {
            break;
        }
        let mut grew = false;
        let mut next = Vec::with_capacity(units.len() * 2);
        for (u, root, leftmost) in units {
            let kids = space.children(&u);
            if kids.is_empty() {
                next.push((u, root, leftmost));
            } else {
                grew |= kids.len() > 1;
                next.extend(kids.into_iter().enumerate().map(|(j, kid)| (kid, root, leftmost && j == 0)));
            }
        }
        units = next;
        if !grew {
            break;
        }
    }
    units
}

/// Runs the whole search. The best greedy dive seeds the pruning bound and is returned
/// if the budget runs out before anything better turns up.
pub(crate) fn solve<S: Space>(space: &S, roots: Vec<S::Node>, config: &SearchConfig) -> Solved<S::Node> {
    let start = Instant::now();
    let mut greedy: Option<(u64, S::Node)> = None;
    let mut greedy_root = 0;
    for (i, root) in roots.iter().enumerate() {
        let dive = first_dive(space, root);
        if greedy.as_ref().is_none_or(|(b, _)| dive.0 > *b) {
            greedy = Some(dive);
            greedy_root = i;
        }
    }
    let incumbent = greedy.as_ref().map_or(0, |(v, _)| *v);
    config.install(|| {
        let units = split(space, roots);
        // Units after the one holding the greedy solution only count if they beat it.
        let greedy_unit = units.iter().position(|&(_, r, left)| r == greedy_root && left).unwrap_or(0);
        let threshold = |i: usize| if i > greedy_unit { incumbent + 1 } else { incumbent };
        let count = units.len().max(1) as u64;
        let mut outcome: Vec<Option<UnitRun<S::Node>>> = (0..units.len()).map(|_| None).collect();
        let mut share = vec![(config.budget / count).max(1); units.len()];
        let mut pending: Vec<usize> = (0..units.len()).collect();
        let mut spent = 0u64;
        let mut prunes = 0u64;
        // units that run out are retried with the budget the finished ones left over
        loop {
            let runs: Vec<(usize, UnitRun<S::Node>)> = pending
                .par_iter()
                .map(|&i| (i, search_unit(space, &units[i].0, threshold(i), share[i])))
                .collect();
            let mut still = Vec::new();
            for (i, run) in runs {
                spent += run.nodes;
                prunes += run.prunes;
                if run.exhausted {
                    still.push(i);
                }
                outcome[i] = Some(run);
            }
            if still.is_empty() {
                break;
            }
            let retry = config.budget.saturating_sub(spent) / still.len() as u64;
            if still.iter().any(|&i| retry <= share[i]) {
                break;
            }
            for &i in &still {
                share[i] = retry;
            }
            pending = still;
        }
        let proven = outcome.iter().flatten().all(|r| !r.exhausted);
        let mut best: Option<(u64, S::Node)> = None;
        for run in outcome.into_iter().flatten() {
            if let Some((v, node)) = run.best {
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, node));
                }
            }
        }
        if let Some((g, node)) = greedy {
            if best.as_ref().is_none_or(|(b, _)| g > *b) {
                best = Some((g, node));
            }
        }
        Solved {
            best,
            proven,
            stats: SearchStats {
                nodes: spent,
                prunes,
                units: units.len(),
                elapsed_ms: start.elapsed().as_millis() as u64,
            },
        }
    })
}
