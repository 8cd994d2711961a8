//! k-uniform set families over `[n]` and the exact predicates on them.

use crate::bits::{self, Mask, MAX_VERTICES};
use crate::error::{param, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Node limit for exact matching searches unless the caller picks one.
pub const DEFAULT_MATCHING_BUDGET: u64 = 10_000_000;

/// A k-uniform family of distinct subsets of `[n]`, kept in lexicographic order
/// of the sorted vertex lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: u32,
    k: u32,
    members: Vec<Vec<u32>>,
    masks: Vec<Mask>,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    n: u32,
    k: u32,
    members: Vec<Vec<u32>>,
}

impl SetFamily {
    /// Validates and canonicalizes. Vertices inside a member may come in any order.
    pub fn new<I, M>(n: u32, k: u32, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: AsRef<[u32]>,
    {
        check_dims(n, k)?;
        let mut masks = Vec::new();
        for raw in members {
            let raw = raw.as_ref();
            let mut mask: Mask = 0;
            for &v in raw {
                if v == 0 || v > n {
                    return param(format!("vertex {v} outside 1..={n}"));
                }
                if mask & bits::bit(v) != 0 {
                    return param(format!("vertex {v} repeated in member {raw:?}"));
                }
                mask |= bits::bit(v);
            }
            if bits::size(mask) != k {
                return param(format!("member {raw:?} does not have {k} elements"));
            }
            masks.push(mask);
        }
        Self::from_masks(n, k, masks)
    }

    /// Builds from masks that are already known to be k-subsets of `[n]`.
    pub(crate) fn from_masks(n: u32, k: u32, masks: Vec<Mask>) -> Result<Self> {
        let mut members: Vec<Vec<u32>> = masks.into_iter().map(bits::vertices_of).collect();
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return param(format!("duplicate member {:?}", w[0]));
        }
        let masks = members.iter().map(|m| bits::mask_of(m)).collect();
        Ok(SetFamily { n, k, members, masks })
    }

    pub fn empty(n: u32, k: u32) -> Result<Self> {
        check_dims(n, k)?;
        Ok(SetFamily { n, k, members: Vec::new(), masks: Vec::new() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn contains(&self, member: &[u32]) -> bool {
        let mut sorted = member.to_vec();
        sorted.sort_unstable();
        self.members.binary_search(&sorted).is_ok()
    }

    /// True if every member of `self` is a member of `other`.
    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|m| other.members.binary_search(m).is_ok())
    }

    /// Family with `extra` members added (duplicates of existing members are an error).
    pub fn with_members<I, M>(&self, extra: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: AsRef<[u32]>,
    {
        let more = SetFamily::new(self.n, self.k, extra)?;
        let mut masks = self.masks.clone();
        masks.extend_from_slice(&more.masks);
        Self::from_masks(self.n, self.k, masks)
    }

    /// Text format: a header line `n k`, then one member per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for m in &self.members {
            let line: Vec<String> = m.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, msg: "missing `n k` header".into() })?;
        let head = parse_numbers(header, hline + 1)?;
        let [n, k] = head[..] else {
            return Err(Error::Parse { line: hline + 1, msg: "header must be `n k`".into() });
        };
        let mut members = Vec::new();
        for (i, line) in lines {
            let m = parse_numbers(line, i + 1)?;
            if m.len() != k as usize {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {k} vertices, found {}", m.len()),
                });
            }
            members.push(m);
        }
        SetFamily::new(n, k, members)
    }

    pub fn to_json(&self) -> String {
        let raw = RawFamily { n: self.n, k: self.k, members: self.members.clone() };
        serde_json::to_string(&raw).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFamily = serde_json::from_str(text)?;
        SetFamily::new(raw.n, raw.k, raw.members)
    }

    /// Accepts either format: JSON when the first non-blank character is `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawFamily { n: self.n, k: self.k, members: self.members.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawFamily::deserialize(d)?;
        SetFamily::new(raw.n, raw.k, raw.members).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, k={}, {:?})", self.n, self.k, self.members)
    }
}

fn check_dims(n: u32, k: u32) -> Result<()> {
    if n > MAX_VERTICES {
        return param(format!("n = {n} exceeds the supported maximum of {MAX_VERTICES}"));
    }
    if k > n {
        return param(format!("k = {k} exceeds n = {n}"));
    }
    Ok(())
}

pub(crate) fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("`{tok}` is not a non-negative integer"),
            })
        })
        .collect()
}

/// `d` members whose union has at most `2k` vertices and whose intersection is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterWitness {
    /// Strictly increasing indices into the family's canonical member order.
    pub indices: Vec<usize>,
    pub union_size: u32,
    pub d: usize,
}

/// Pairwise disjoint members.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingWitness {
    pub indices: Vec<usize>,
    pub size: usize,
}

/// Search index for clusters in a fixed list of masks.
///
/// Besides the union bound, a partial selection is dropped when some vertex of its
/// running intersection is contained in every later member that still fits under the
/// union limit: no completion can then empty the intersection.
pub(crate) struct ClusterIndex<'a> {
    masks: &'a [Mask],
    missing: Vec<Vec<u32>>,
    order: Vec<u32>,
}

impl<'a> ClusterIndex<'a> {
    pub(crate) fn new(masks: &'a [Mask], n: u32) -> Self {
        let mut missing = vec![Vec::new(); n as usize];
        for (i, &m) in masks.iter().enumerate() {
            for (v, list) in missing.iter_mut().enumerate() {
                if m >> v & 1 == 0 {
                    list.push(i as u32);
                }
            }
        }
        let mut order: Vec<u32> = (0..n).collect();
        order.sort_by_key(|&v| missing[v as usize].len());
        ClusterIndex { masks, missing, order }
    }

    /// Lexicographically least increasing index tuple of `d` members with union size at
    /// most `limit` and empty common intersection.
    pub(crate) fn first(&self, d: usize, limit: u32) -> Option<Vec<usize>> {
        let m = self.masks.len();
        if d == 0 || d > m {
            return None;
        }
        let root = |i: usize| -> Option<Vec<usize>> {
            let mask = self.masks[i];
            if bits::size(mask) > limit {
                return None;
            }
            let mut chosen = Vec::with_capacity(d);
            chosen.push(i);
            if d == 1 {
                return (mask == 0).then_some(chosen);
            }
            if d > 2 && !self.can_empty(mask, i, mask, limit) {
                return None;
            }
            self.extend(&mut chosen, mask, mask, d - 1, limit).then_some(chosen)
        };
        if m < 64 {
            (0..=m - d).find_map(root)
        } else {
            (0..=m - d).into_par_iter().find_map_first(root)
        }
    }

    fn extend(&self, chosen: &mut Vec<usize>, union: Mask, inter: Mask, need: usize, limit: u32) -> bool {
        let last = *chosen.last().expect("root member chosen");
        let m = self.masks.len();
        if need == 1 {
            return match self.last_member(last, union, inter, limit) {
                Some(j) => {
                    chosen.push(j);
                    true
                }
                None => false,
            };
        }
        for i in last + 1..=m - need {
            let u = union | self.masks[i];
            if bits::size(u) > limit {
                continue;
            }
            let x = inter & self.masks[i];
            if x != 0 && !self.can_empty(x, i, u, limit) {
                continue;
            }
            chosen.push(i);
            if self.extend(chosen, u, x, need - 1, limit) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Least index after `last` that completes a cluster.
    fn last_member(&self, last: usize, union: Mask, inter: Mask, limit: u32) -> Option<usize> {
        let fits = |j: usize| self.masks[j] & inter == 0 && bits::size(union | self.masks[j]) <= limit;
        if inter == 0 {
            return (last + 1..self.masks.len()).find(|&j| fits(j));
        }
        // Any completing member misses the first vertex of `inter` in scan order.
        let v = *self.order.iter().find(|&&v| inter >> v & 1 == 1)?;
        let list = &self.missing[v as usize];
        let start = list.partition_point(|&j| j as usize <= last);
        list[start..].iter().map(|&j| j as usize).find(|&j| fits(j))
    }

    fn can_empty(&self, inter: Mask, after: usize, union: Mask, limit: u32) -> bool {
        for &v in &self.order {
            if inter >> v & 1 == 0 {
                continue;
            }
            let list = &self.missing[v as usize];
            let start = list.partition_point(|&j| j as usize <= after);
            if !list[start..]
                .iter()
                .any(|&j| bits::size(union | self.masks[j as usize]) <= limit)
            {
                return false;
            }
        }
        true
    }
}

/// Is there a choice of `need` further members from `pool[start..]` that, together with
/// the sets already summarized by `union`/`inter`, forms a cluster under `limit`?
pub(crate) fn cluster_completes(
    pool: &[Mask],
    start: usize,
    union: Mask,
    inter: Mask,
    need: usize,
    limit: u32,
) -> bool {
    if need == 0 {
        return inter == 0 && bits::size(union) <= limit;
    }
    if need == 1 {
        return pool[start..]
            .iter()
            .any(|&m| m & inter == 0 && bits::size(union | m) <= limit);
    }
    for i in start..pool.len() {
        if pool.len() - i < need {
            break;
        }
        let u = union | pool[i];
        if bits::size(u) > limit {
            continue;
        }
        if cluster_completes(pool, i + 1, u, inter & pool[i], need - 1, limit) {
            return true;
        }
    }
    false
}

/// The lexicographically least d-cluster of `family`, if any.
pub fn find_d_cluster(family: &SetFamily, d: usize) -> Result<Option<ClusterWitness>> {
    if d < 2 || d > family.len() {
        return param(format!("d = {d} must lie in 2..={}", family.len()));
    }
    let limit = 2 * family.k;
    let index = ClusterIndex::new(&family.masks, family.n);
    Ok(index.first(d, limit).map(|indices| {
        let union = indices.iter().fold(0, |u, &i| u | family.masks[i]);
        ClusterWitness { indices, union_size: bits::size(union), d }
    }))
}

/// No `d` distinct members with union at most `2k` and empty intersection.
/// Vacuously true when the family has fewer than `d` members.
pub fn is_d_cluster_free(family: &SetFamily, d: usize) -> bool {
    if d > family.len() {
        return true;
    }
    assert!(d >= 2, "cluster size must be at least 2");
    matches!(find_d_cluster(family, d), Ok(None))
}

/// Every `t` distinct members share a vertex.
pub fn is_t_wise_intersecting(family: &SetFamily, t: usize) -> Result<bool> {
    if t < 2 {
        return param(format!("t = {t} must be at least 2"));
    }
    if family.len() < t {
        return Ok(true);
    }
    let index = ClusterIndex::new(&family.masks, family.n);
    Ok(index.first(t, MAX_VERTICES).is_none())
}

/// Smallest vertex common to every member. An empty family is a star at vertex 1.
pub fn is_star(family: &SetFamily) -> Option<u32> {
    let common = family.masks.iter().fold(bits::full(family.n), |a, &m| a & m);
    if family.is_empty() {
        return Some(1);
    }
    (common != 0).then(|| common.trailing_zeros() + 1)
}

/// Splits into the members containing `x` and those avoiding it.
pub fn link(family: &SetFamily, x: u32) -> Result<(SetFamily, SetFamily)> {
    if x == 0 || x > family.n {
        return param(format!("vertex {x} outside 1..={}", family.n));
    }
    let (with, without): (Vec<Mask>, Vec<Mask>) =
        family.masks.iter().partition(|&&m| m & bits::bit(x) != 0);
    Ok((
        SetFamily::from_masks(family.n, family.k, with)?,
        SetFamily::from_masks(family.n, family.k, without)?,
    ))
}

/// All `(k-1)`-sets lying inside some member.
pub fn shadow(family: &SetFamily) -> Result<SetFamily> {
    if family.k == 0 {
        return param("shadow needs k >= 1");
    }
    let mut out = BTreeSet::new();
    for &m in &family.masks {
        let mut rest = m;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            out.insert(m & !low);
            rest &= rest - 1;
        }
    }
    SetFamily::from_masks(family.n, family.k - 1, out.into_iter().collect())
}

/// Maximum number of pairwise disjoint members, with a witness.
pub fn matching_number(family: &SetFamily) -> Result<(usize, MatchingWitness)> {
    matching_number_with_budget(family, DEFAULT_MATCHING_BUDGET)
}

pub fn matching_number_with_budget(family: &SetFamily, budget: u64) -> Result<(usize, MatchingWitness)> {
    let masks = &family.masks;
    if masks.is_empty() {
        return Ok((0, MatchingWitness::default()));
    }
    if family.k == 0 {
        // the only possible member is the empty set
        return Ok((1, MatchingWitness { indices: vec![0], size: 1 }));
    }
    let mut search = Packing {
        masks,
        k: family.k,
        best: Vec::new(),
        nodes: 0,
        budget,
    };
    // greedy in canonical order
    let mut used: Mask = 0;
    for (i, &m) in masks.iter().enumerate() {
        if m & used == 0 {
            used |= m;
            search.best.push(i);
        }
    }
    let all: Vec<usize> = (0..masks.len()).collect();
    let ceiling = (bits::size(masks.iter().fold(0, |a, &m| a | m)) / family.k) as usize;
    if search.best.len() < ceiling {
        search.branch(&mut Vec::new(), &all, ceiling)?;
    }
    let mut indices = search.best;
    indices.sort_unstable();
    let size = indices.len();
    Ok((size, MatchingWitness { indices, size }))
}

struct Packing<'a> {
    masks: &'a [Mask],
    k: u32,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Packing<'_> {
    fn branch(&mut self, chosen: &mut Vec<usize>, cands: &[usize], ceiling: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget { budget: self.budget });
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        if cands.is_empty() || self.best.len() >= ceiling {
            return Ok(());
        }
        let cover = cands.iter().fold(0, |a, &c| a | self.masks[c]);
        let bound = chosen.len() + cands.len().min((bits::size(cover) / self.k) as usize);
        if bound <= self.best.len() {
            return Ok(());
        }
        // branch on the lowest vertex still coverable: one of its members, or none of them
        let v = cover & cover.wrapping_neg();
        for &c in cands.iter().filter(|&&c| self.masks[c] & v != 0) {
            let rest: Vec<usize> = cands
                .iter()
                .copied()
                .filter(|&o| self.masks[o] & self.masks[c] == 0)
                .collect();
            chosen.push(c);
            self.branch(chosen, &rest, ceiling)?;
            chosen.pop();
            if self.best.len() >= ceiling {
                return Ok(());
            }
        }
        let rest: Vec<usize> = cands.iter().copied().filter(|&o| self.masks[o] & v == 0).collect();
        self.branch(chosen, &rest, ceiling)
    }
}
