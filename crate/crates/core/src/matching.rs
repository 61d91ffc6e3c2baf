//! Exact minimum-weight perfect matching on complete graphs of even order.
//!
//! Among all minimum-weight matchings the lexicographically smallest pair
//! sequence is returned: pairs are `(i, j)` with `i < j`, listed by `i`, and
//! two sequences compare by the partner of the first vertex where they differ.

use std::convert::Infallible;

use rustworkx_core::max_weight_matching::max_weight_matching;
use rustworkx_core::petgraph::graph::UnGraph;

use crate::error::{Error, Result};
use crate::instance::DistanceMatrix;

/// Largest vertex count accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MAX: usize = 12;

/// A perfect matching together with its total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMatching {
    pairs: Vec<(usize, usize)>,
    weight: i64,
}

impl PairMatching {
    /// Normalizes pair orientation and order, and recomputes the weight.
    pub fn from_pairs(w: &DistanceMatrix, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let k = w.n();
        let mut seen = vec![false; k];
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        for &(a, b) in &pairs {
            if a == b || b >= k || seen[a] || seen[b] {
                return Err(Error::Validation(format!(
                    "({a}, {b}) is not a valid pair of a perfect matching on {k} vertices"
                )));
            }
            seen[a] = true;
            seen[b] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Validation("matching does not cover every vertex".into()));
        }
        pairs.sort_unstable();
        let weight = pairs.iter().map(|&(a, b)| w.get(a, b)).sum();
        Ok(Self { pairs, weight })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// `mate[v]` is the vertex matched with `v`.
    pub fn mates(&self) -> Vec<usize> {
        let mut mate = vec![0; self.pairs.len() * 2];
        for &(a, b) in &self.pairs {
            mate[a] = b;
            mate[b] = a;
        }
        mate
    }
}

fn check_even(k: usize) -> Result<()> {
    if !k.is_multiple_of(2) {
        return Err(Error::UnsupportedSize {
            n: k,
            reason: "perfect matchings need an even number of vertices",
        });
    }
    Ok(())
}

/// Minimum-weight perfect matching with lexicographic tie-breaking.
///
/// Vertices are fixed one at a time: the smallest unmatched vertex `v` is
/// matched by solving the remaining problem with weights `w·K + r(v, x)`,
/// where `r` is the rank of `x` among the remaining vertices on edges at `v`
/// and 0 elsewhere. `K` exceeds any rank, so the perturbation only breaks
/// ties, and among optimal matchings it picks the smallest partner for `v`.
pub fn min_perfect_matching(w: &DistanceMatrix) -> Result<PairMatching> {
    let k = w.n();
    check_even(k)?;
    let mut remaining: Vec<usize> = (0..k).collect();
    let mut pairs = Vec::with_capacity(k / 2);
    while !remaining.is_empty() {
        let v = remaining[0];
        let partner = if remaining.len() == 2 {
            remaining[1]
        } else {
            smallest_optimal_partner(w, &remaining)
        };
        pairs.push((v, partner));
        remaining.retain(|&x| x != v && x != partner);
    }
    PairMatching::from_pairs(w, pairs)
}

/// Solves the matching on `vertices` and returns the partner of
/// `vertices[0]`, preferring the earliest-listed partner among optima.
fn smallest_optimal_partner(w: &DistanceMatrix, vertices: &[usize]) -> usize {
    let size = vertices.len();
    let scale = size as i128 + 1;
    let mut edges = Vec::with_capacity(size * (size - 1) / 2);
    let mut max_cost = 0i128;
    for a in 0..size {
        for b in a + 1..size {
            let tie = if a == 0 { b as i128 } else { 0 };
            let cost = i128::from(w.get(vertices[a], vertices[b])) * scale + tie;
            max_cost = max_cost.max(cost);
            edges.push((a as u32, b as u32, cost));
        }
    }
    // Max-cardinality on a complete graph is perfect, so maximizing
    // `offset - cost` minimizes the total cost.
    let offset = max_cost + 1;
    let graph = UnGraph::<(), i128>::from_edges(edges.into_iter().map(|(a, b, c)| (a, b, offset - c)));
    let matched = max_weight_matching::<_, _, Infallible>(&graph, true, |e| Ok(*e.weight()), false)
        .unwrap_or_else(|never| match never {});
    let partner = matched
        .iter()
        .find_map(|&(a, b)| match (a, b) {
            (0, x) | (x, 0) => Some(x),
            _ => None,
        })
        .expect("a perfect matching covers vertex 0");
    vertices[partner]
}

/// Exhaustive enumeration over all `(k-1)!!` perfect matchings. Test oracle.
pub fn brute_force_matching(w: &DistanceMatrix) -> Result<PairMatching> {
    let k = w.n();
    check_even(k)?;
    if k > BRUTE_FORCE_MAX {
        return Err(Error::SizeGuard {
            k,
            max: BRUTE_FORCE_MAX,
        });
    }
    let mut used = vec![false; k];
    let mut current = Vec::with_capacity(k / 2);
    let mut best: Option<(i64, Vec<(usize, usize)>)> = None;
    enumerate(w, &mut used, &mut current, 0, &mut best);
    let (_, pairs) = best.expect("even k always admits a perfect matching");
    PairMatching::from_pairs(w, pairs)
}

// Visits matchings in lexicographic order, so keeping only strict
// improvements yields the lexicographically smallest optimum.
fn enumerate(
    w: &DistanceMatrix,
    used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    weight: i64,
    best: &mut Option<(i64, Vec<(usize, usize)>)>,
) {
    let Some(v) = used.iter().position(|u| !u) else {
        if best.as_ref().is_none_or(|(b, _)| weight < *b) {
            *best = Some((weight, current.clone()));
        }
        return;
    };
    used[v] = true;
    for x in v + 1..used.len() {
        if used[x] {
            continue;
        }
        used[x] = true;
        current.push((v, x));
        enumerate(w, used, current, weight + w.get(v, x), best);
        current.pop();
        used[x] = false;
    }
    used[v] = false;
}
