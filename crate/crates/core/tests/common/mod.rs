//! Naive reference implementations shared by the integration tests. Nothing here calls the
//! library's predicates.
#![allow(dead_code)]

use itertools::Itertools;
use std::collections::BTreeSet;

pub type Set = BTreeSet<u32>;

pub fn to_sets(members: &[Vec<u32>]) -> Vec<Set> {
    members.iter().map(|m| m.iter().copied().collect()).collect()
}

/// First d-subset of member indices (lexicographic) with union <= 2k and empty intersection.
pub fn naive_cluster(sets: &[Set], k: usize, d: usize) -> Option<Vec<usize>> {
    (0..sets.len()).combinations(d).find(|idx| {
        let union: Set = idx.iter().flat_map(|&i| sets[i].iter().copied()).collect();
        let common = idx[1..]
            .iter()
            .fold(sets[idx[0]].clone(), |acc, &i| acc.intersection(&sets[i]).copied().collect());
        union.len() <= 2 * k && common.is_empty()
    })
}

pub fn naive_cluster_free(sets: &[Set], k: usize, d: usize) -> bool {
    d > sets.len() || naive_cluster(sets, k, d).is_none()
}

/// Maximum number of pairwise disjoint sets, by trying every subfamily from the top down.
pub fn naive_matching(sets: &[Set]) -> usize {
    fn grow(sets: &[Set], from: usize, used: &Set) -> usize {
        let mut best = 0;
        for i in from..sets.len() {
            if sets[i].is_disjoint(used) {
                let more: Set = used.union(&sets[i]).copied().collect();
                best = best.max(1 + grow(sets, i + 1, &more));
            }
        }
        best
    }
    grow(sets, 0, &Set::new())
}

pub fn naive_t_wise_intersecting(sets: &[Set], t: usize) -> bool {
    sets.len() < t
        || (0..sets.len()).combinations(t).all(|idx| {
            !idx[1..]
                .iter()
                .fold(sets[idx[0]].clone(), |acc, &i| acc.intersection(&sets[i]).copied().collect())
                .is_empty()
        })
}

/// All k-subsets of [n] as sorted vectors, lexicographic.
pub fn all_k_sets(n: u32, k: u32) -> Vec<Vec<u32>> {
    (1..=n).combinations(k as usize).collect()
}

/// Largest cluster-free family of k-subsets of [n] satisfying `accept`, by enumerating every
/// cluster-free family (depth-first, no bounding). Returns `None` if nothing qualifies.
pub fn brute_extremal(n: u32, k: u32, d: usize, accept: &dyn Fn(&[Set]) -> bool) -> Option<usize> {
    let all: Vec<Set> = to_sets(&all_k_sets(n, k));
    let mut chosen: Vec<Set> = Vec::new();
    let mut best = None;
    fn walk(
        all: &[Set],
        at: usize,
        chosen: &mut Vec<Set>,
        k: usize,
        d: usize,
        accept: &dyn Fn(&[Set]) -> bool,
        best: &mut Option<usize>,
    ) {
        if at == all.len() {
            if accept(chosen) && best.is_none_or(|b| chosen.len() > b) {
                *best = Some(chosen.len());
            }
            return;
        }
        chosen.push(all[at].clone());
        // only clusters through the new set can appear
        let last = chosen.len() - 1;
        let closes = chosen.len() >= d
            && (0..last).combinations(d - 1).any(|mut idx| {
                idx.push(last);
                let sel: Vec<Set> = idx.iter().map(|&i| chosen[i].clone()).collect();
                naive_cluster(&sel, k, d).is_some()
            });
        if !closes {
            walk(all, at + 1, chosen, k, d, accept, best);
        }
        chosen.pop();
        walk(all, at + 1, chosen, k, d, accept, best);
    }
    walk(&all, 0, &mut chosen, k as usize, d, accept, &mut best);
    best
}
