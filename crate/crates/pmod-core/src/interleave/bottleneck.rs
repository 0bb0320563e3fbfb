//! Exact bottleneck distance between barcodes.
//!
//! Matched bars pay `max(|b−b′|, |d−d′|)`, unmatched bars pay half their
//! length. The distance is found by searching the finite candidate set of
//! pairwise costs and half-lengths, testing feasibility at each threshold
//! with a bipartite matching (bars may also match to the diagonal). This is
//! plumbing used as an independent oracle against the interleaving
//! machinery, so it favors clarity over asymptotics.

use crate::barcode::Barcode;
use crate::error::{Error, Result};
use crate::rational::{Extended, Rational};

#[derive(Clone)]
struct Bar {
    birth: Rational,
    death: Extended,
}

impl Bar {
    // max(|b−b'|, |d−d'|); None encodes an infinite cost.
    fn matching_cost(&self, other: &Bar) -> Option<Rational> {
        let births = (&self.birth - &other.birth).abs();
        match (&self.death, &other.death) {
            (Extended::Finite(d1), Extended::Finite(d2)) => Some(births.max((d1 - d2).abs())),
            (Extended::Infinity, Extended::Infinity) => Some(births),
            _ => None,
        }
    }

    // (d − b)/2; None for infinite bars, which can never go unmatched.
    fn diagonal_cost(&self) -> Option<Rational> {
        match &self.death {
            Extended::Finite(d) => Some(&(d - &self.birth) / &Rational::from_int(2)),
            Extended::Infinity => None,
        }
    }
}

fn expand(bc: &Barcode) -> Vec<Bar> {
    bc.expanded()
        .into_iter()
        .map(|(birth, death)| Bar { birth, death })
        .collect()
}

/// Minimal δ over partial matchings of the two bar multisets.
pub fn bottleneck_distance(a: &Barcode, b: &Barcode) -> Result<Extended> {
    if a.kind() != b.kind() {
        return Err(Error::Param(
            "bottleneck distance needs barcodes over the same index kind".into(),
        ));
    }
    let left = expand(a);
    let right = expand(b);

    let infinite = |bars: &[Bar]| bars.iter().filter(|b| b.death.is_infinite()).count();
    if infinite(&left) != infinite(&right) {
        return Ok(Extended::Infinity);
    }

    let mut candidates: Vec<Rational> = vec![Rational::zero()];
    for l in &left {
        for r in &right {
            if let Some(c) = l.matching_cost(r) {
                candidates.push(c);
            }
        }
    }
    for bar in left.iter().chain(&right) {
        if let Some(c) = bar.diagonal_cost() {
            candidates.push(c);
        }
    }
    candidates.sort();
    candidates.dedup();

    // Feasibility is monotone in δ, so binary search the candidate list.
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    if !feasible(&left, &right, &candidates[hi]) {
        // Cannot happen once infinite-bar counts agree, but stay honest.
        return Ok(Extended::Infinity);
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&left, &right, &candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Extended::Finite(candidates[lo].clone()))
}

// Perfect matching on (left + diagonal copies) × (right + diagonal copies).
fn feasible(left: &[Bar], right: &[Bar], delta: &Rational) -> bool {
    let n_left = left.len();
    let n_right = right.len();
    let total = n_left + n_right;
    // adjacency of node i (left side incl. diagonals) over right side nodes
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            if l.matching_cost(r).is_some_and(|c| &c <= delta) {
                adj[i].push(j);
            }
        }
        if l.diagonal_cost().is_some_and(|c| &c <= delta) {
            for j in n_right..total {
                adj[i].push(j);
            }
        }
    }
    // diagonal left nodes: match any right bar cheap enough to drop, or any
    // diagonal right node
    let mut diagonal_edges: Vec<usize> = right
        .iter()
        .enumerate()
        .filter(|(_, r)| r.diagonal_cost().is_some_and(|c| &c <= delta))
        .map(|(j, _)| j)
        .collect();
    diagonal_edges.extend(n_right..total);
    for edges in adj.iter_mut().skip(n_left) {
        *edges = diagonal_edges.clone();
    }

    let mut matched_right: Vec<Option<usize>> = vec![None; total];
    let mut matches = 0usize;
    for i in 0..total {
        let mut seen = vec![false; total];
        if augment(i, &adj, &mut matched_right, &mut seen) {
            matches += 1;
        }
    }
    matches == total
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    matched_right: &mut Vec<Option<usize>>,
    seen: &mut Vec<bool>,
) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match matched_right[j] {
            None => true,
            Some(owner) => augment(owner, adj, matched_right, seen),
        };
        if free {
            matched_right[j] = Some(i);
            return true;
        }
    }
    false
}
