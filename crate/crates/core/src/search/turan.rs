use super::steiner::SteinerSpace;
use super::{solve, SearchConfig, SearchResult, Solved, Space, Status, Value, Witness};
use crate::bits::{self, Mask};
use crate::error::{param, Error, Result};
use crate::multigraph::{contains_tight_path, is_pattern_free, tight_path_in, ForbiddenPattern, Multigraph};
use itertools::Itertools;

/// Multiplicities assigned to the r-sets of `[n]` in lexicographic order, largest first,
/// subject to every v-set spanning at most `e - 1` edges.
struct SpanSpace {
    edges: Vec<Mask>,
    edge_vsets: Vec<Vec<u32>>,
    /// Per-edge multiplicity ceiling (1 for simple graphs).
    edge_cap: u64,
    span_cap: u64,
    /// Number of v-sets holding any fixed r-set.
    vsets_per_edge: u64,
}

#[derive(Clone)]
struct SpanNode {
    pos: usize,
    mult: Vec<u64>,
    span: Vec<u64>,
    slack: u64,
    value: u64,
}

impl SpanSpace {
    fn new(n: u32, p: &ForbiddenPattern) -> Self {
        let edges = bits::k_subset_masks(n, p.r);
        let vsets = bits::k_subset_masks(n, p.v);
        let edge_vsets = edges
            .iter()
            .map(|&e| {
                vsets
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| e & !s == 0)
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        let span_cap = p.e - 1;
        SpanSpace {
            edges,
            edge_vsets,
            edge_cap: if p.simple { span_cap.min(1) } else { span_cap },
            span_cap,
            vsets_per_edge: bits::binom(i64::from(n - p.r), i64::from(p.v - p.r)) as u64,
        }
    }

    fn root(&self, vset_count: usize) -> SpanNode {
        SpanNode {
            pos: 0,
            mult: Vec::with_capacity(self.edges.len()),
            span: vec![0; vset_count],
            slack: self.span_cap * vset_count as u64,
            value: 0,
        }
    }

    fn room(&self, node: &SpanNode, pos: usize) -> u64 {
        self.edge_vsets[pos]
            .iter()
            .map(|&s| self.span_cap - node.span[s as usize])
            .min()
            .unwrap_or(self.span_cap)
            .min(self.edge_cap)
    }

    fn to_multigraph(&self, n: u32, r: u32, node: &SpanNode) -> Multigraph {
        let mut g = Multigraph::new(n, r).expect("valid dimensions");
        for (&e, &m) in self.edges.iter().zip(&node.mult) {
            g.add_edge(&bits::vertices_of(e), m).expect("edge inside [n]");
        }
        g
    }
}

impl Space for SpanSpace {
    type Node = SpanNode;

    fn value(&self, node: &SpanNode) -> u64 {
        node.value
    }

    fn bound(&self, node: &SpanNode) -> u64 {
        let per_edge: u64 = (node.pos..self.edges.len()).map(|q| self.room(node, q)).sum();
        // every remaining edge sits in the same number of v-sets
        let averaged = node.slack / self.vsets_per_edge.max(1);
        node.value + per_edge.min(averaged)
    }

    fn children(&self, node: &SpanNode) -> Vec<SpanNode> {
        if node.pos == self.edges.len() {
            return Vec::new();
        }
        let room = self.room(node, node.pos);
        (0..=room)
            .rev()
            .map(|m| {
                let mut child = node.clone();
                child.mult.push(m);
                if m > 0 {
                    for &s in &self.edge_vsets[node.pos] {
                        child.span[s as usize] += m;
                    }
                    child.slack -= m * self.vsets_per_edge;
                    child.value += m;
                }
                child.pos += 1;
                child
            })
            .collect()
    }
}

fn span_search(n: u32, p: &ForbiddenPattern, config: &SearchConfig) -> Result<SearchResult> {
    let space = SpanSpace::new(n, p);
    let vset_count = bits::binom(i64::from(n), i64::from(p.v)) as usize;
    let Solved { best, proven, stats } = solve(&space, vec![space.root(vset_count)], config);
    let (value, node) = best.expect("the empty graph is always feasible");
    let g = space.to_multigraph(n, p.r, &node);
    if !is_pattern_free(&g, p)?.is_free() || g.edge_count() != value {
        return Err(Error::Verification(format!("Turán witness for n = {n}, {p:?} is not free")));
    }
    Ok(SearchResult {
        value: Value::Finite(value),
        witness: Some(Witness::Multigraph(g)),
        status: if proven { Status::ProvenOptimal } else { Status::LowerBoundOnly },
        stats,
    })
}

/// Maximum number of edges (with multiplicity) of an r-multigraph on `[n]` in which no
/// `v` vertices span `e` edges. Unbounded when `n < v`.
pub fn turan_multigraph(n: u32, p: &ForbiddenPattern, config: &SearchConfig) -> Result<SearchResult> {
    if p.simple {
        return param("turan_multigraph takes a multigraph pattern");
    }
    if n < p.v {
        return Ok(SearchResult::unbounded());
    }
    span_search(n, p, config)
}

/// Maximum number of edges of a simple r-graph on `[n]` in which no `v` vertices span
/// `e` edges. For `n < v` every r-graph qualifies.
pub fn turan_simple(n: u32, p: &ForbiddenPattern, config: &SearchConfig) -> Result<SearchResult> {
    if !p.simple {
        return param("turan_simple takes a simple pattern");
    }
    if n > bits::MAX_VERTICES {
        return param(format!("n = {n} exceeds {}", bits::MAX_VERTICES));
    }
    if n < p.v {
        let g = Multigraph::from_edges(n, p.r, (1..=n).combinations(p.r as usize))?;
        return Ok(SearchResult::exact(g.edge_count(), Witness::Multigraph(g)));
    }
    span_search(n, p, config)
}

/// Simple r-graphs on `[n]` built edge by edge, rejecting edges that close a tight l-path.
struct PathSpace {
    edges: Vec<Mask>,
    r: u32,
    l: u32,
}

impl Space for PathSpace {
    type Node = (usize, Vec<Mask>);

    fn value(&self, node: &Self::Node) -> u64 {
        node.1.len() as u64
    }

    fn bound(&self, node: &Self::Node) -> u64 {
        (node.1.len() + self.edges.len() - node.0) as u64
    }

    fn children(&self, (pos, chosen): &Self::Node) -> Vec<Self::Node> {
        if *pos == self.edges.len() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(2);
        let mut with = chosen.clone();
        with.push(self.edges[*pos]);
        if !tight_path_in(&with, self.r, self.l) {
            out.push((pos + 1, with));
        }
        out.push((pos + 1, chosen.clone()));
        out
    }
}

/// Maximum number of edges of a simple r-graph on `[n]` with no tight path of `l` edges.
pub fn turan_tight_path(n: u32, r: u32, l: u32, config: &SearchConfig) -> Result<SearchResult> {
    if r < 2 {
        return param("tight paths need r >= 2");
    }
    if l == 0 {
        return param("tight paths need l >= 1");
    }
    if n > bits::MAX_VERTICES {
        return param(format!("n = {n} exceeds {}", bits::MAX_VERTICES));
    }
    if n < r {
        let g = Multigraph::new(n, r)?;
        return Ok(SearchResult::exact(0, Witness::Multigraph(g)));
    }
    let (best, proven, stats) = if l == 2 {
        let space = SteinerSpace::new(n, r);
        let Solved { best, proven, stats } = solve(&space, vec![space.root()], config);
        let (v, node) = best.expect("the empty graph is always feasible");
        (Some((v, space.edges(&node).to_vec())), proven, stats)
    } else {
        let space = PathSpace { edges: bits::k_subset_masks(n, r), r, l };
        let Solved { best, proven, stats } = solve(&space, vec![(0, Vec::new())], config);
        (best.map(|(v, (_, e))| (v, e)), proven, stats)
    };
    let (value, edges) = best.expect("the empty graph is always feasible");
    let g = Multigraph::from_edges(n, r, edges.iter().map(|&e| bits::vertices_of(e)))?;
    if contains_tight_path(&g, l)? {
        return Err(Error::Verification(format!("witness for ex({n}, P_{l}^{r}) contains the path")));
    }
    if l == 2 && u128::from(value) * u128::from(r) > bits::binom(i64::from(n), i64::from(r) - 1) {
        return Err(Error::Verification(format!(
            "{value} edges exceed the (r-1)-set packing ceiling for n = {n}, r = {r}"
        )));
    }
    Ok(SearchResult {
        value: Value::Finite(value),
        witness: Some(Witness::Multigraph(g)),
        status: if proven { Status::ProvenOptimal } else { Status::LowerBoundOnly },
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{is_design, DesignParams};

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    /// Every simple r-graph on [n], by subset enumeration.
    fn brute_simple(n: u32, r: u32, admissible: impl Fn(&[Mask]) -> bool) -> u64 {
        let all = bits::k_subset_masks(n, r);
        assert!(all.len() <= 20);
        (0u32..1 << all.len())
            .filter_map(|sel| {
                let chosen: Vec<Mask> = (0..all.len()).filter(|&i| sel >> i & 1 == 1).map(|i| all[i]).collect();
                admissible(&chosen).then_some(chosen.len() as u64)
            })
            .max()
            .unwrap()
    }

    fn spans_ok(v: u32, e: u64) -> impl Fn(&[Mask]) -> bool {
        move |edges: &[Mask]| {
            let n = edges.iter().fold(0u128, |a, &m| a | m);
            let top = 128 - n.leading_zeros();
            bits::k_subset_masks(top.max(v), v)
                .into_iter()
                .all(|s| (edges.iter().filter(|&&x| x & !s == 0).count() as u64) < e)
        }
    }

    #[test]
    fn simple_turan_matches_brute_force() {
        let p = ForbiddenPattern::simple(3, 3, 2).unwrap();
        for n in 3..=6 {
            let expect = brute_simple(n, 2, spans_ok(3, 3));
            let got = turan_simple(n, &p, &cfg()).unwrap();
            assert_eq!(got.value, Value::Finite(expect), "n = {n}");
            assert!(got.is_proven());
        }
        assert_eq!(turan_simple(4, &p, &cfg()).unwrap().value, Value::Finite(4));
        assert_eq!(turan_simple(5, &p, &cfg()).unwrap().value, Value::Finite(6));
    }

    #[test]
    fn simple_below_pattern_size_is_complete() {
        let p = ForbiddenPattern::simple(5, 2, 3).unwrap();
        let r = turan_simple(4, &p, &cfg()).unwrap();
        assert_eq!(r.value, Value::Finite(4));
        assert!(r.is_proven());
    }

    /// All multiplicity vectors with entries below `cap` on the pairs of [n].
    fn brute_multi(n: u32, v: u32, e: u64, cap: u64) -> u64 {
        let pairs = bits::k_subset_masks(n, 2);
        let vsets = bits::k_subset_masks(n, v);
        let mut best = 0;
        let total = (cap + 1).pow(pairs.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mult: Vec<u64> = (0..pairs.len())
                .map(|_| {
                    let m = c % (cap + 1);
                    c /= cap + 1;
                    m
                })
                .collect();
            let ok = vsets.iter().all(|&s| {
                pairs.iter().zip(&mult).filter(|(&p, _)| p & !s == 0).map(|(_, &m)| m).sum::<u64>() < e
            });
            if ok {
                best = best.max(mult.iter().sum());
            }
        }
        best
    }

    #[test]
    fn multigraph_turan_matches_brute_force() {
        assert_eq!(brute_multi(4, 2, 2, 1), 6);
        assert_eq!(brute_multi(3, 2, 3, 2), 6);
        let r = turan_multigraph(4, &ForbiddenPattern::multigraph(2, 2, 2).unwrap(), &cfg()).unwrap();
        assert_eq!(r.value, Value::Finite(6));
        let r = turan_multigraph(3, &ForbiddenPattern::multigraph(2, 3, 2).unwrap(), &cfg()).unwrap();
        assert_eq!(r.value, Value::Finite(6));
        assert_eq!(r.witness.unwrap().as_multigraph().unwrap().max_multiplicity(), 2);
        for n in 3..=4 {
            let expect = brute_multi(n, 3, 3, 2);
            let r = turan_multigraph(n, &ForbiddenPattern::multigraph(3, 3, 2).unwrap(), &cfg()).unwrap();
            assert_eq!(r.value, Value::Finite(expect));
        }
    }

    #[test]
    fn multigraph_unbounded_below_pattern() {
        let r = turan_multigraph(1, &ForbiddenPattern::multigraph(2, 2, 2).unwrap(), &cfg()).unwrap();
        assert_eq!(r.status, Status::Unbounded);
        assert_eq!(r.value, Value::Unbounded);
        assert!(turan_multigraph(4, &ForbiddenPattern::simple(2, 2, 2).unwrap(), &cfg()).is_err());
        assert!(turan_simple(4, &ForbiddenPattern::multigraph(2, 2, 2).unwrap(), &cfg()).is_err());
    }

    #[test]
    fn tight_two_paths() {
        let r = turan_tight_path(8, 2, 2, &cfg()).unwrap();
        assert_eq!(r.value, Value::Finite(4));
        let r = turan_tight_path(7, 3, 2, &cfg()).unwrap();
        assert_eq!(r.value, Value::Finite(7));
        assert!(r.is_proven());
        let fano = r.witness.unwrap();
        assert!(is_design(fano.as_multigraph().unwrap(), &DesignParams { t: 2, lambda: 1 }).unwrap());
        assert_eq!(turan_tight_path(3, 3, 2, &cfg()).unwrap().value, Value::Finite(1));
        assert_eq!(turan_tight_path(2, 3, 2, &cfg()).unwrap().value, Value::Finite(0));
    }

    #[test]
    fn tight_two_paths_match_brute_force() {
        for n in 3..=6 {
            let expect = brute_simple(n, 3, |edges| {
                edges.iter().tuple_combinations().all(|(a, b)| (a & b).count_ones() < 2)
            });
            let got = turan_tight_path(n, 3, 2, &cfg()).unwrap();
            assert_eq!(got.value, Value::Finite(expect), "n = {n}");
            assert!(got.is_proven());
        }
    }

    #[test]
    fn longer_tight_paths() {
        for n in 3..=5 {
            let expect = brute_simple(n, 2, |edges| !tight_path_in(edges, 2, 3));
            let got = turan_tight_path(n, 2, 3, &cfg()).unwrap();
            assert_eq!(got.value, Value::Finite(expect), "n = {n}");
        }
        assert_eq!(turan_tight_path(5, 2, 1, &cfg()).unwrap().value, Value::Finite(0));
    }

    #[test]
    fn steiner_triple_system_on_fifteen_points() {
        let r = turan_tight_path(15, 3, 2, &cfg()).unwrap();
        assert_eq!(r.value, Value::Finite(35));
        assert!(r.is_proven());
    }
}
