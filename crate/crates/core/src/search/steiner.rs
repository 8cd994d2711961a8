//! Maximum r-graphs in which every (r-1)-set lies in at most one edge.
//!
//! Branching always settles the lexicographically first (r-1)-set that is still free:
//! it is covered by an edge `s + w` (ascending `w`, which must exceed `max(s)`), or it is
//! declared dead. This enumerates edge sets in decreasing order of their characteristic
//! vectors, so the first optimum found is the lexicographically least edge list.

use super::Space;
use crate::bits::{self, Mask};
use itertools::Itertools;
use std::collections::HashMap;

pub(crate) struct SteinerSpace {
    n: u32,
    r: u32,
    faces: Vec<Mask>,
    face_index: HashMap<Mask, u32>,
    face_ridges: Vec<Vec<u32>>,
    ridge_count: usize,
    /// pairs of ridges used by one edge: C(r, 2)
    ridges_per_edge: u64,
}

#[derive(Clone)]
pub(crate) struct SteinerNode {
    used: Vec<u64>,
    free_at_ridge: Vec<u32>,
    free_faces: u64,
    cursor: usize,
    edges: Vec<Mask>,
}

impl SteinerSpace {
    /// Requires `r >= 2` and `n >= r`.
    pub(crate) fn new(n: u32, r: u32) -> Self {
        let faces: Vec<Mask> = (1..=n).combinations(r as usize - 1).map(|c| bits::mask_of(&c)).collect();
        let face_index = faces.iter().enumerate().map(|(i, &f)| (f, i as u32)).collect();
        let ridges: Vec<Mask> = (1..=n).combinations(r as usize - 2).map(|c| bits::mask_of(&c)).collect();
        let ridge_index: HashMap<Mask, u32> = ridges.iter().enumerate().map(|(i, &f)| (f, i as u32)).collect();
        let face_ridges = faces
            .iter()
            .map(|&f| bits::vertices_of(f).into_iter().map(|v| ridge_index[&(f & !bits::bit(v))]).collect())
            .collect();
        SteinerSpace {
            n,
            r,
            faces,
            face_index,
            face_ridges,
            ridge_count: ridges.len(),
            ridges_per_edge: (r as u64) * (r as u64 - 1) / 2,
        }
    }

    pub(crate) fn root(&self) -> SteinerNode {
        let per_ridge = self.n - (self.r - 2);
        SteinerNode {
            used: vec![0; self.faces.len().div_ceil(64)],
            free_at_ridge: vec![per_ridge; self.ridge_count],
            free_faces: self.faces.len() as u64,
            cursor: 0,
            edges: Vec::new(),
        }
    }

    pub(crate) fn edges<'a>(&self, node: &'a SteinerNode) -> &'a [Mask] {
        &node.edges
    }

    fn is_used(node: &SteinerNode, f: usize) -> bool {
        node.used[f / 64] >> (f % 64) & 1 == 1
    }

    fn mark(&self, node: &mut SteinerNode, f: usize) {
        node.used[f / 64] |= 1 << (f % 64);
        node.free_faces -= 1;
        for &t in &self.face_ridges[f] {
            node.free_at_ridge[t as usize] -= 1;
        }
    }

    fn first_free(&self, node: &SteinerNode) -> Option<usize> {
        (node.cursor..self.faces.len()).find(|&f| !Self::is_used(node, f))
    }
}

impl Space for SteinerSpace {
    type Node = SteinerNode;

    fn value(&self, node: &SteinerNode) -> u64 {
        node.edges.len() as u64
    }

    fn bound(&self, node: &SteinerNode) -> u64 {
        let by_faces = node.free_faces / u64::from(self.r);
        let pairs: u64 = node.free_at_ridge.iter().map(|&c| u64::from(c / 2)).sum();
        node.edges.len() as u64 + by_faces.min(pairs / self.ridges_per_edge)
    }

    fn children(&self, node: &SteinerNode) -> Vec<SteinerNode> {
        let Some(s) = self.first_free(node) else { return Vec::new() };
        let face = self.faces[s];
        let top = 128 - face.leading_zeros();
        let mut out = Vec::new();
        for w in top + 1..=self.n {
            let edge = face | bits::bit(w);
            let subfaces: Vec<usize> = bits::vertices_of(edge)
                .into_iter()
                .map(|v| self.face_index[&(edge & !bits::bit(v))] as usize)
                .collect();
            if subfaces.iter().any(|&f| Self::is_used(node, f)) {
                continue;
            }
            let mut child = node.clone();
            for f in subfaces {
                self.mark(&mut child, f);
            }
            child.edges.push(edge);
            child.cursor = s + 1;
            out.push(child);
        }
        let mut dead = node.clone();
        self.mark(&mut dead, s);
        dead.cursor = s + 1;
        out.push(dead);
        out
    }
}
