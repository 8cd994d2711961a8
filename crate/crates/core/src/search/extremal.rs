//! f(n,k,d,ν) and g(n,k,d,t): largest d-cluster-free k-uniform families with a matching of
//! size ν+1, or without the t-wise intersecting property.
//!
//! Both constraints are certified by a small seed (ν+1 disjoint sets, or t sets with empty
//! intersection) that is fixed up to relabeling; the search then adds the remaining k-sets
//! in lexicographic order, keeping only candidates that would not close a cluster.

use super::{solve, SearchConfig, SearchResult, Solved, Space, Status, Value, Witness};
use crate::bits::{self, Mask, MAX_VERTICES};
use crate::error::{param, Error, Result};
use crate::family::{cluster_completes, is_d_cluster_free, is_t_wise_intersecting, matching_number, SetFamily};
use itertools::Itertools;

struct FamilySpace {
    d: usize,
    limit: u32,
}

#[derive(Clone)]
struct FamilyNode {
    members: Vec<Mask>,
    /// Sets that can still join `members` without creating a cluster, in lex order.
    cands: Vec<Mask>,
}

impl FamilySpace {
    /// Would `members + a + b` contain a cluster through both `a` and `b`?
    fn conflict(&self, members: &[Mask], a: Mask, b: Mask) -> bool {
        cluster_completes(members, 0, a | b, a & b, self.d - 2, self.limit)
    }

    /// Root node for `seed`, or `None` when the seed already holds a cluster.
    fn root(&self, n: u32, k: u32, seed: Vec<Mask>) -> Option<FamilyNode> {
        let f = SetFamily::from_masks(n, k, seed.clone()).ok()?;
        if !is_d_cluster_free(&f, self.d) {
            return None;
        }
        let cands = bits::k_subset_masks(n, k)
            .into_iter()
            .filter(|c| !seed.contains(c))
            .filter(|&c| !cluster_completes(&seed, 0, c, c, self.d - 1, self.limit))
            .collect();
        Some(FamilyNode { members: seed, cands })
    }
}

impl Space for FamilySpace {
    type Node = FamilyNode;

    fn value(&self, node: &FamilyNode) -> u64 {
        node.members.len() as u64
    }

    fn bound(&self, node: &FamilyNode) -> u64 {
        (node.members.len() + node.cands.len()) as u64
    }

    fn children(&self, node: &FamilyNode) -> Vec<FamilyNode> {
        let Some((&c, rest)) = node.cands.split_first() else { return Vec::new() };
        let cands = rest
            .iter()
            .copied()
            .filter(|&o| !self.conflict(&node.members, c, o))
            .collect();
        let mut members = node.members.clone();
        members.push(c);
        vec![FamilyNode { members, cands }, FamilyNode { members: node.members.clone(), cands: rest.to_vec() }]
    }
}

fn check_common(n: u32, k: u32, d: usize) -> Result<()> {
    if k == 0 {
        return param("k must be at least 1");
    }
    if d < 2 {
        return param(format!("d = {d} must be at least 2"));
    }
    if n > MAX_VERTICES {
        return param(format!("n = {n} exceeds {MAX_VERTICES}"));
    }
    Ok(())
}

fn run(
    n: u32,
    k: u32,
    d: usize,
    seeds: Vec<Vec<Mask>>,
    config: &SearchConfig,
    accept: impl Fn(&SetFamily) -> Result<bool>,
) -> Result<SearchResult> {
    let space = FamilySpace { d, limit: 2 * k };
    let roots: Vec<FamilyNode> = seeds.into_iter().filter_map(|s| space.root(n, k, s)).collect();
    if roots.is_empty() {
        return Ok(SearchResult::infeasible());
    }
    let Solved { best, proven, stats } = solve(&space, roots, config);
    let (value, node) = best.expect("every root is feasible");
    let family = SetFamily::from_masks(n, k, node.members)?;
    if family.len() as u64 != value || !is_d_cluster_free(&family, d) || !accept(&family)? {
        return Err(Error::Verification(format!("extremal witness for n = {n}, k = {k}, d = {d} is invalid")));
    }
    Ok(SearchResult {
        value: Value::Finite(value),
        witness: Some(Witness::Family(family)),
        status: if proven { Status::ProvenOptimal } else { Status::LowerBoundOnly },
        stats,
    })
}

/// Largest d-cluster-free family of k-subsets of `[n]` whose matching number is at least
/// `nu + 1`. Infeasible when no such family exists.
pub fn compute_f_exact(n: u32, k: u32, d: usize, nu: u32, config: &SearchConfig) -> Result<SearchResult> {
    check_common(n, k, d)?;
    let blocks = u64::from(nu) + 1;
    if u64::from(n) < u64::from(k) * blocks {
        return Ok(SearchResult::infeasible());
    }
    let seed: Vec<Mask> = (0..nu).map(|i| bits::full(k * (i + 1)) & !bits::full(k * i)).collect();
    let seed = [seed, vec![bits::full(k * (nu + 1)) & !bits::full(k * nu)]].concat();
    run(n, k, d, vec![seed], config, |f| Ok(matching_number(f)?.0 > nu as usize))
}

/// Largest d-cluster-free family of k-subsets of `[n]` that is not t-wise intersecting.
pub fn compute_g_exact(n: u32, k: u32, d: usize, t: usize, config: &SearchConfig) -> Result<SearchResult> {
    check_common(n, k, d)?;
    if t < 2 {
        return param(format!("t = {t} must be at least 2"));
    }
    if t > 12 {
        return param(format!("t = {t} is too large for seed enumeration"));
    }
    let seeds = seeds_without_common_vertex(n, k, t);
    run(n, k, d, seeds, config, |f| Ok(!is_t_wise_intersecting(f, t)?))
}

/// One representative, up to relabeling, of every list of `t` distinct k-subsets of `[n]`
/// with empty common intersection.
///
/// A vertex is described by the set of seed members containing it (its pattern); the seed
/// is determined up to isomorphism by how many vertices carry each pattern. Only count
/// vectors that are least under permutations of the members are kept.
fn seeds_without_common_vertex(n: u32, k: u32, t: usize) -> Vec<Vec<Mask>> {
    let full_pattern = (1u32 << t) - 1;
    let patterns: Vec<u32> = (1..full_pattern).collect();
    let perms: Vec<Vec<usize>> = (0..t).permutations(t).collect();
    let mut out = Vec::new();
    let mut counts = vec![0u32; patterns.len()];
    let mut degree = vec![0u32; t];
    enumerate_counts(&patterns, 0, n, k, &mut counts, &mut degree, &mut |counts| {
        let relabeled = |perm: &[usize]| -> Vec<u32> {
            let mut v = vec![0u32; patterns.len()];
            for (i, &p) in patterns.iter().enumerate() {
                let q = (0..t).filter(|&j| p >> j & 1 == 1).fold(0u32, |a, j| a | 1 << perm[j]);
                v[q as usize - 1] = counts[i];
            }
            v
        };
        if perms.iter().any(|p| relabeled(p).as_slice() > counts) {
            return;
        }
        let mut seed = vec![0 as Mask; t];
        let mut next = 1u32;
        for (i, &p) in patterns.iter().enumerate() {
            for _ in 0..counts[i] {
                for (j, s) in seed.iter_mut().enumerate() {
                    if p >> j & 1 == 1 {
                        *s |= bits::bit(next);
                    }
                }
                next += 1;
            }
        }
        if seed.iter().all_unique() {
            out.push(seed);
        }
    });
    out
}

fn enumerate_counts(
    patterns: &[u32],
    at: usize,
    room: u32,
    k: u32,
    counts: &mut Vec<u32>,
    degree: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if at == patterns.len() {
        if degree.iter().all(|&x| x == k) {
            emit(counts);
        }
        return;
    }
    let p = patterns[at];
    let members: Vec<usize> = (0..degree.len()).filter(|&j| p >> j & 1 == 1).collect();
    let max = members.iter().map(|&j| k - degree[j]).min().unwrap_or(0).min(room);
    for c in 0..=max {
        counts[at] = c;
        for &j in &members {
            degree[j] += c;
        }
        enumerate_counts(patterns, at + 1, room - c, k, counts, degree, emit);
        for &j in &members {
            degree[j] -= c;
        }
    }
    counts[at] = 0;
}
