//! Sigma-neighborhoods, boundaries with forbidden coordinates, and
//! sigma-path reachability.
//!
//! Fix a permutation sigma of the axes. A vertex `y` is a *sigma-neighbor*
//! of `x` when `y` differs from `x` in every coordinate and rewriting the
//! coordinates of `x` to those of `y` one axis at a time, in the order
//! given by sigma, passes only through tuples that are vertices of the
//! graph. A *sigma-path* is a vertex sequence in which each vertex is a
//! sigma-neighbor of the previous one and all coordinates over the whole
//! sequence are pairwise distinct; it corresponds to a tight path in the
//! underlying hypergraph.
//!
//! Reachability accumulates, per reached vertex, the coordinates of one
//! chosen path to it; later frontier expansions forbid those coordinates,
//! which is exactly what keeps the stored paths valid.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::linegraph::{Coordinate, LineGraph, VertexId};

/// A permutation of the axes `0..r`, stored 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self, String> {
        let r = image.len();
        let mut seen = vec![false; r];
        for &v in &image {
            if v >= r || seen[v] {
                return Err(format!("{image:?} is not a permutation of 0..{r}"));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(r: usize) -> Self {
        Permutation {
            image: (0..r).collect(),
        }
    }

    pub fn r(&self) -> usize {
        self.image.len()
    }

    /// Axis rewritten at step `i` (0-based).
    pub fn axis_at(&self, i: usize) -> usize {
        self.image[i]
    }

    /// The reverse permutation: `tau(i) = sigma(r+1-i)` in 1-indexed
    /// terms. Reversing twice is the identity.
    pub fn reverse(&self) -> Permutation {
        let r = self.r();
        Permutation {
            image: (0..r).map(|i| self.image[r - 1 - i]).collect(),
        }
    }

    /// Parses the 1-indexed file form, e.g. `2,1,3`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let image: Result<Vec<usize>, String> = s
            .split(',')
            .map(|t| {
                let v: usize = t.trim().parse().map_err(|_| format!("bad axis {t:?}"))?;
                if v == 0 {
                    return Err("axes are 1-indexed in text form".to_string());
                }
                Ok(v - 1)
            })
            .collect();
        Permutation::new(image?)
    }

    /// All r! permutations, in lexicographic order.
    pub fn all(r: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut image: Vec<usize> = (0..r).collect();
        loop {
            out.push(Permutation {
                image: image.clone(),
            });
            // next_permutation
            let Some(i) = (0..r.saturating_sub(1))
                .rev()
                .find(|&i| image[i] < image[i + 1])
            else {
                break;
            };
            let j = (i + 1..r).rev().find(|&j| image[j] > image[i]).unwrap();
            image.swap(i, j);
            image[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.image.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Per-vertex sets of banned coordinates.
#[derive(Debug, Clone, Default)]
pub struct ForbiddenMap {
    map: HashMap<VertexId, HashSet<Coordinate>>,
}

impl ForbiddenMap {
    pub fn empty() -> Self {
        ForbiddenMap::default()
    }

    pub fn insert(&mut self, v: VertexId, coords: impl IntoIterator<Item = Coordinate>) {
        self.map.entry(v).or_default().extend(coords);
    }

    pub fn get(&self, v: VertexId) -> Option<&HashSet<Coordinate>> {
        self.map.get(&v)
    }

    pub fn max_size(&self) -> usize {
        self.map.values().map(|s| s.len()).max().unwrap_or(0)
    }
}

/// A sigma-path stored as coordinate rows (graph-independent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPath {
    pub sigma: Permutation,
    /// Vertex coordinate rows in axis order, `size` of them.
    pub vertices: Vec<Vec<u32>>,
}

impl SigmaPath {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn first(&self) -> &[u32] {
        &self.vertices[0]
    }

    pub fn last(&self) -> &[u32] {
        self.vertices.last().unwrap()
    }

    /// All coordinates on the path, grouped by vertex.
    pub fn coordinates(&self) -> Vec<Coordinate> {
        self.vertices
            .iter()
            .flat_map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(axis, &e)| Coordinate::new(axis, e))
            })
            .collect()
    }

    /// The derived coordinate sequence `a_1..a_{rk}`: each vertex
    /// contributes its coordinates in sigma order.
    pub fn coord_sequence(&self) -> Vec<Coordinate> {
        let r = self.sigma.r();
        self.vertices
            .iter()
            .flat_map(|row| {
                (0..r).map(|j| {
                    let axis = self.sigma.axis_at(j);
                    Coordinate::new(axis, row[axis])
                })
            })
            .collect()
    }

    /// The same path traversed backwards, as a path for the reverse
    /// permutation.
    pub fn reversed(&self) -> SigmaPath {
        SigmaPath {
            sigma: self.sigma.reverse(),
            vertices: self.vertices.iter().rev().cloned().collect(),
        }
    }
}

/// Enumerates the sigma-neighbors of `x`: every `y` differing from `x`
/// in all coordinates such that each intermediate rewrite is a vertex.
/// Sorted ascending.
pub fn sigma_neighbors(g: &LineGraph, x: VertexId, sigma: &Permutation) -> Vec<VertexId> {
    let mut out = sigma_neighbors_filtered(g, x, sigma, None);
    out.sort_unstable();
    out
}

/// Sigma-neighbors of `x` whose coordinates avoid `banned`. The rewrite
/// chain sets each coordinate of `y` exactly once, so pruning on the
/// chosen value filters precisely on the coordinates of `y`.
fn sigma_neighbors_filtered(
    g: &LineGraph,
    x: VertexId,
    sigma: &Permutation,
    banned: Option<&HashSet<Coordinate>>,
) -> Vec<VertexId> {
    let r = g.r();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, VertexId)> = vec![(0, x)];
    while let Some((level, cur)) = stack.pop() {
        let axis = sigma.axis_at(level);
        for &w in g.block_members(cur, axis) {
            if w == cur {
                continue;
            }
            if let Some(b) = banned {
                if b.contains(&g.coordinate(w, axis)) {
                    continue;
                }
            }
            if level + 1 == r {
                out.push(w);
            } else {
                stack.push((level + 1, w));
            }
        }
    }
    out
}

/// The sigma-boundary of `xs` under a forbidden map: vertices that are a
/// sigma-neighbor of some `x` in `xs` with no coordinate in `F(x)`.
/// With an empty map this equals the nested per-axis boundary chain.
/// Sorted ascending.
pub fn sigma_boundary(
    g: &LineGraph,
    xs: &[VertexId],
    sigma: &Permutation,
    forbidden: &ForbiddenMap,
) -> Vec<VertexId> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for &x in xs {
        for y in sigma_neighbors_filtered(g, x, sigma, forbidden.get(x)) {
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Per-axis boundary under a forbidden map: vertices `y` with an
/// axis-differing neighbor `x` in `xs` whose banned set does not contain
/// the axis coordinate of `y`. Sorted ascending.
pub fn axis_boundary_forbidden(
    g: &LineGraph,
    xs: &[VertexId],
    axis: usize,
    forbidden: &ForbiddenMap,
) -> Vec<VertexId> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for &x in xs {
        let fx = forbidden.get(x);
        for &y in g.block_members(x, axis) {
            if y == x || seen[y as usize] {
                continue;
            }
            if let Some(f) = fx {
                if f.contains(&g.coordinate(y, axis)) {
                    continue;
                }
            }
            seen[y as usize] = true;
            out.push(y);
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReachMode {
    /// Report every vertex first reached within the size budget.
    AtMost,
    /// Report only vertices whose stored path has exactly the target size.
    Exactly,
}

/// Reachable set with parent pointers; paths materialize on demand.
#[derive(Debug, Clone)]
pub struct ReachResult {
    sigma: Permutation,
    mode: ReachMode,
    /// In `Exactly` mode, the required path size.
    exact_target: usize,
    /// Round `i` holds vertices whose stored path has size `i+1`, mapped
    /// to their predecessor in round `i-1` (the root maps to itself).
    rounds: Vec<BTreeMap<VertexId, VertexId>>,
}

impl ReachResult {
    /// Round index reported vertices live in, or `None` when nothing is
    /// reported (exact mode whose frontier died early).
    fn report_round(&self, v: VertexId) -> Option<usize> {
        match self.mode {
            ReachMode::AtMost => self.rounds.iter().position(|m| m.contains_key(&v)),
            ReachMode::Exactly => {
                let last = self.rounds.len().checked_sub(1)?;
                if self.rounds.len() != self.exact_target {
                    return None;
                }
                self.rounds[last].contains_key(&v).then_some(last)
            }
        }
    }

    /// Vertices reported under the mode, ascending.
    pub fn reached(&self) -> Vec<VertexId> {
        match self.mode {
            ReachMode::AtMost => {
                let mut all: Vec<VertexId> =
                    self.rounds.iter().flat_map(|m| m.keys().copied()).collect();
                all.sort_unstable();
                all
            }
            ReachMode::Exactly if self.rounds.len() == self.exact_target => self
                .rounds
                .last()
                .map(|m| m.keys().copied().collect())
                .unwrap_or_default(),
            ReachMode::Exactly => Vec::new(),
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.report_round(v).is_some()
    }

    /// Size of the stored path to `v`, when reported.
    pub fn size_to(&self, v: VertexId) -> Option<usize> {
        self.report_round(v).map(|i| i + 1)
    }

    /// Materializes the stored path to `v` by walking parent pointers.
    pub fn path_to(&self, g: &LineGraph, v: VertexId) -> Option<SigmaPath> {
        let round = self.report_round(v)?;
        let mut ids = Vec::with_capacity(round + 1);
        let mut cur = v;
        for i in (0..=round).rev() {
            ids.push(cur);
            cur = *self.rounds[i].get(&cur)?;
        }
        ids.reverse();
        Some(SigmaPath {
            sigma: self.sigma.clone(),
            vertices: ids.iter().map(|&u| g.coords_of(u).to_vec()).collect(),
        })
    }
}

/// Iterative frontier expansion from `x`.
///
/// Round `i` extends each frontier vertex through its sigma-neighbors,
/// forbidding the coordinates of the stored path to the frontier vertex
/// (its own coordinates excluded; a sigma-neighbor differs in every axis
/// anyway). When several predecessors qualify the first in ascending
/// vertex order wins. `max_size` of `None` runs until the frontier dies
/// out, which always happens because paths consume coordinates.
pub fn reach(
    g: &LineGraph,
    x: VertexId,
    sigma: &Permutation,
    max_size: Option<usize>,
    mode: ReachMode,
) -> ReachResult {
    assert!(
        mode == ReachMode::AtMost || max_size.is_some(),
        "exact-size reach needs a target size"
    );
    let cap = max_size.unwrap_or(usize::MAX);
    let exact_target = if mode == ReachMode::Exactly { cap } else { 0 };
    let mut rounds: Vec<BTreeMap<VertexId, VertexId>> = Vec::new();
    if cap == 0 {
        return ReachResult {
            sigma: sigma.clone(),
            mode,
            exact_target,
            rounds,
        };
    }
    let mut first = BTreeMap::new();
    first.insert(x, x);
    rounds.push(first);
    let mut visited: HashSet<VertexId> = HashSet::new();
    visited.insert(x);

    while rounds.len() < cap {
        let frontier: Vec<VertexId> = rounds.last().unwrap().keys().copied().collect();
        let mut next: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for &cur in &frontier {
            let banned = ancestor_coordinates(&rounds, g, cur);
            for y in sigma_neighbors_filtered(g, cur, sigma, Some(&banned)) {
                let fresh = match mode {
                    ReachMode::AtMost => !visited.contains(&y),
                    ReachMode::Exactly => !next.contains_key(&y),
                };
                if fresh {
                    next.insert(y, cur);
                    if mode == ReachMode::AtMost {
                        visited.insert(y);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        rounds.push(next);
    }
    ReachResult {
        sigma: sigma.clone(),
        mode,
        exact_target,
        rounds,
    }
}

/// Coordinates of every vertex strictly before `v` on its stored path,
/// where `v` sits in the last round containing it.
fn ancestor_coordinates(
    rounds: &[BTreeMap<VertexId, VertexId>],
    g: &LineGraph,
    v: VertexId,
) -> HashSet<Coordinate> {
    let mut banned = HashSet::new();
    let Some(round) = rounds.iter().rposition(|m| m.contains_key(&v)) else {
        return banned;
    };
    let mut cur = v;
    for i in (1..=round).rev() {
        cur = rounds[i][&cur];
        for c in g.coordinates(cur) {
            banned.insert(c);
        }
    }
    banned
}

/// Full validation of a sigma-path against a host graph: every vertex
/// row present, all coordinates pairwise distinct, and every window of
/// the derived coordinate sequence a vertex. Window membership covers
/// the intermediate-rewrite requirement of the sigma-neighbor relation.
pub fn validate_sigma_path(g: &LineGraph, p: &SigmaPath) -> bool {
    let r = g.r();
    if p.sigma.r() != r || p.vertices.is_empty() {
        return false;
    }
    for row in &p.vertices {
        if row.len() != r || g.vertex_id(row).is_none() {
            return false;
        }
    }
    let coords = p.coordinates();
    let mut dedup: HashSet<Coordinate> = HashSet::new();
    for &c in &coords {
        if !dedup.insert(c) {
            return false;
        }
    }
    let seq = p.coord_sequence();
    let total = seq.len();
    for start in 0..=total.saturating_sub(r) {
        let mut row = vec![u32::MAX; r];
        for item in &seq[start..start + r] {
            row[item.part] = item.element;
        }
        if row.contains(&u32::MAX) || g.vertex_id(&row).is_none() {
            return false;
        }
    }
    true
}
