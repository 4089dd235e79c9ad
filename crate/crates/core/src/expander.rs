//! Minimum-degree peeling, expander extraction, and expander covers.
//!
//! A graph is a lambda-expander when every vertex set of size at most
//! half the graph has a neighborhood of size at least lambda times its
//! own. Extraction alternates between searching for a sparse cut and
//! peeling small blocks: keeping the cut side when its density stays
//! above `(1-lambda)` times the current density, otherwise keeping the
//! complement of the cut and its neighborhood. Every step deletes at
//! least one vertex, and the surviving density never drops below half
//! the starting floor.
//!
//! Sparse cuts are found exhaustively below a size threshold and by a
//! two-stage heuristic above it (connected-component split, then sweep
//! cuts over BFS orders seeded at blocks). Every cut is re-verified
//! against its defining inequality before being acted on, so a wrong
//! heuristic answer can only cause a missed cut, never a wrong
//! certificate: certificates record whether the final expansion check
//! was exhaustive.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::linegraph::{LineGraph, VertexId};
use crate::rational::{from_int, ratio, Rational};

/// Hard ceiling for exhaustive subset enumeration.
pub const MAX_EXACT_VERIFY: usize = 26;

/// Default exhaustive-verification size threshold.
pub const DEFAULT_EXACT_THRESHOLD: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpanderError {
    #[error("peeling emptied the graph (density {density} below floor {floor})")]
    PeelEmptied { density: Rational, floor: Rational },
    #[error("density {density} fell below the abort floor {floor} during extraction")]
    DensityCollapse { density: Rational, floor: Rational },
    #[error("{n} vertices exceed the exhaustive verification threshold {threshold}")]
    TooLargeForExact { n: usize, threshold: usize },
}

/// Expansion parameters: factor, degree floor, and cover slack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderParams {
    pub lambda: Rational,
    pub d: u32,
    pub epsilon: Rational,
}

impl ExpanderParams {
    pub fn new(lambda: Rational, d: u32, epsilon: Rational) -> Result<Self, String> {
        if lambda <= Rational::zero() || lambda > from_int(1) {
            return Err(format!("lambda must be in (0,1], got {lambda}"));
        }
        if epsilon <= Rational::zero() || epsilon >= from_int(1) {
            return Err(format!("epsilon must be in (0,1), got {epsilon}"));
        }
        if d == 0 {
            return Err("degree floor must be positive".to_string());
        }
        Ok(ExpanderParams { lambda, d, epsilon })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    /// Every candidate set was enumerated.
    Exact,
    /// The heuristic found no cut; expansion is unproven.
    Heuristic,
}

impl fmt::Display for CertMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertMode::Exact => write!(f, "exact"),
            CertMode::Heuristic => write!(f, "heuristic"),
        }
    }
}

/// What an extraction or verification established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderCertificate {
    pub lambda: Rational,
    /// Measured minimum degree of the certified graph.
    pub d: usize,
    pub mode: CertMode,
    /// A non-expanding set, present when expansion was refuted.
    pub witness: Option<Vec<VertexId>>,
}

/// Outcome of exhaustive expansion verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactVerification {
    pub is_expander: bool,
    pub witness: Option<Vec<VertexId>>,
}

/// Repeatedly deletes blocks of size below `d/r`, lowest (axis, block)
/// first. When the density of the input is at least `d` the result is
/// nonempty, has density at least the input's, and minimum degree at
/// least `d/r`; without that precondition the loop may empty the graph,
/// which is reported as an error.
pub fn peel(g: &LineGraph, d: Rational) -> Result<LineGraph, ExpanderError> {
    let r = g.r();
    let entry_density = g.density();
    let pre_holds = entry_density >= d;
    let below = |size: usize| from_int((r * size) as i64) < d;

    let mut sizes: Vec<Vec<usize>> = (0..r)
        .map(|axis| g.blocks_on_axis(axis).iter().map(|b| b.len()).collect())
        .collect();
    let mut alive = vec![true; g.len()];
    let mut n_alive = g.len();
    let mut p_alive = g.num_blocks();
    let mut worklist: BTreeSet<(usize, u32)> = BTreeSet::new();
    for (axis, axis_sizes) in sizes.iter().enumerate() {
        for (b, &s) in axis_sizes.iter().enumerate() {
            if below(s) {
                worklist.insert((axis, b as u32));
            }
        }
    }

    while let Some((axis, b)) = worklist.pop_first() {
        if sizes[axis][b as usize] == 0 {
            continue;
        }
        let dens_before = if p_alive > 0 {
            ratio((r * n_alive) as i64, p_alive as i64)
        } else {
            Rational::zero()
        };
        let victims: Vec<VertexId> = g.blocks_on_axis(axis)[b as usize]
            .iter()
            .copied()
            .filter(|&v| alive[v as usize])
            .collect();
        for v in victims {
            alive[v as usize] = false;
            n_alive -= 1;
            for a2 in 0..r {
                let b2 = g.block_id(v, a2) as usize;
                sizes[a2][b2] -= 1;
                if sizes[a2][b2] == 0 {
                    p_alive -= 1;
                    worklist.remove(&(a2, b2 as u32));
                } else if below(sizes[a2][b2]) {
                    worklist.insert((a2, b2 as u32));
                }
            }
        }
        if pre_holds && p_alive > 0 {
            let dens_after = ratio((r * n_alive) as i64, p_alive as i64);
            debug_assert!(dens_after >= dens_before, "peeling decreased density");
        }
    }

    if n_alive == 0 {
        return Err(ExpanderError::PeelEmptied {
            density: entry_density,
            floor: d,
        });
    }
    let rows = g
        .vertices()
        .filter(|&v| alive[v as usize])
        .map(|v| g.coords_of(v).to_vec())
        .collect();
    Ok(LineGraph::from_rows(r, g.part_sizes().to_vec(), rows))
}

/// Exact check of the cut inequality: `|W| <= n/2` and `|N(W)| < lambda|W|`.
pub fn check_cut(g: &LineGraph, w: &[VertexId], lambda: Rational) -> bool {
    if w.is_empty() || 2 * w.len() > g.len() {
        return false;
    }
    let nb = g.neighborhood(w).len();
    from_int(nb as i64) < lambda * from_int(w.len() as i64)
}

/// Searches for a sparse cut: a set `W` with `|W| <= n/2` and
/// `|N(W)| < lambda|W|`. Below `exact_threshold` vertices the search is
/// exhaustive, so `None` proves expansion; above it, a miss proves
/// nothing. Every returned set is re-verified.
pub fn find_sparse_cut(
    g: &LineGraph,
    lambda: Rational,
    exact_threshold: usize,
) -> Option<Vec<VertexId>> {
    let n = g.len();
    if n <= 1 {
        return None;
    }
    // A smallest component has an empty neighborhood, so it beats any
    // enumeration order.
    if let Some(w) = component_cut(g) {
        if check_cut(g, &w, lambda) {
            return Some(w);
        }
    }
    if n <= exact_threshold.min(MAX_EXACT_VERIFY) {
        let cut = exhaustive_cut(g, lambda);
        if let Some(ref w) = cut {
            debug_assert!(check_cut(g, w, lambda));
        }
        return cut;
    }
    sweep_cut(g, lambda)
}

fn neighbor_masks(g: &LineGraph) -> Vec<u64> {
    let n = g.len();
    let mut masks = vec![0u64; n];
    for v in 0..n as u32 {
        let mut m = 0u64;
        for axis in 0..g.r() {
            for &y in g.block_members(v, axis) {
                m |= 1u64 << y;
            }
        }
        m &= !(1u64 << v);
        masks[v as usize] = m;
    }
    masks
}

fn mask_neighborhood(masks: &[u64], mask: u64) -> u64 {
    let mut nb = 0u64;
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        nb |= masks[v];
        bits &= bits - 1;
    }
    nb & !mask
}

fn mask_to_set(mask: u64) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut bits = mask;
    while bits != 0 {
        out.push(bits.trailing_zeros());
        bits &= bits - 1;
    }
    out
}

fn exhaustive_cut(g: &LineGraph, lambda: Rational) -> Option<Vec<VertexId>> {
    let n = g.len();
    let masks = neighbor_masks(g);
    for mask in 1u64..(1u64 << n) {
        let k = mask.count_ones() as usize;
        if 2 * k > n {
            continue;
        }
        let nb = mask_neighborhood(&masks, mask).count_ones() as i64;
        if from_int(nb) < lambda * from_int(k as i64) {
            return Some(mask_to_set(mask));
        }
    }
    None
}

/// Smallest connected component when the graph is disconnected.
fn component_cut(g: &LineGraph) -> Option<Vec<VertexId>> {
    let n = g.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0usize;
    let mut sizes = Vec::new();
    for start in 0..n as u32 {
        if comp[start as usize] != usize::MAX {
            continue;
        }
        let mut queue = vec![start];
        comp[start as usize] = count;
        let mut size = 0usize;
        while let Some(v) = queue.pop() {
            size += 1;
            for axis in 0..g.r() {
                for &y in g.block_members(v, axis) {
                    if comp[y as usize] == usize::MAX {
                        comp[y as usize] = count;
                        queue.push(y);
                    }
                }
            }
        }
        sizes.push(size);
        count += 1;
    }
    if count < 2 {
        return None;
    }
    let smallest = sizes
        .iter()
        .enumerate()
        .min_by_key(|&(i, &s)| (s, i))
        .map(|(i, _)| i)
        .unwrap();
    Some(
        (0..n as u32)
            .filter(|&v| comp[v as usize] == smallest)
            .collect(),
    )
}

/// Sweep cuts over BFS orders seeded at a spread of blocks; returns the
/// first prefix satisfying the cut inequality. Seeds are capped so the
/// whole search stays near-linear per call.
fn sweep_cut(g: &LineGraph, lambda: Rational) -> Option<Vec<VertexId>> {
    let r = g.r();
    const MAX_SEEDS_PER_AXIS: usize = 8;
    for axis in 0..r {
        let blocks = g.blocks_on_axis(axis);
        let stride = blocks.len().div_ceil(MAX_SEEDS_PER_AXIS).max(1);
        for b in (0..blocks.len()).step_by(stride) {
            let order = bfs_order(g, &blocks[b]);
            if let Some(prefix) = sweep_prefix(g, &order, lambda) {
                let mut w = order[..prefix].to_vec();
                w.sort_unstable();
                if check_cut(g, &w, lambda) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn bfs_order(g: &LineGraph, seed: &[VertexId]) -> Vec<VertexId> {
    let n = g.len();
    let r = g.r();
    let mut visited = vec![false; n];
    let mut block_done: Vec<Vec<bool>> = (0..r)
        .map(|axis| vec![false; g.blocks_on_axis(axis).len()])
        .collect();
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    for &v in seed {
        if !visited[v as usize] {
            visited[v as usize] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for axis in 0..r {
            let b = g.block_id(v, axis) as usize;
            if block_done[axis][b] {
                continue;
            }
            block_done[axis][b] = true;
            for &y in &g.blocks_on_axis(axis)[b] {
                if !visited[y as usize] {
                    visited[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    // Disconnected leftovers keep the sweep well-defined.
    for v in 0..n as u32 {
        if !visited[v as usize] {
            order.push(v);
        }
    }
    order
}

/// Incremental sweep: returns the first prefix length whose cut
/// inequality holds.
fn sweep_prefix(g: &LineGraph, order: &[VertexId], lambda: Rational) -> Option<usize> {
    let n = g.len();
    let r = g.r();
    let mut in_x = vec![false; n];
    let mut cover = vec![0u32; n];
    let mut cnt: Vec<Vec<u32>> = (0..r)
        .map(|axis| vec![0u32; g.blocks_on_axis(axis).len()])
        .collect();
    let mut boundary = 0usize;
    for (k, &v) in order.iter().enumerate() {
        if cover[v as usize] > 0 {
            boundary -= 1;
        }
        in_x[v as usize] = true;
        for axis in 0..r {
            let b = g.block_id(v, axis) as usize;
            cnt[axis][b] += 1;
            if cnt[axis][b] == 1 {
                for &y in &g.blocks_on_axis(axis)[b] {
                    cover[y as usize] += 1;
                    if cover[y as usize] == 1 && !in_x[y as usize] {
                        boundary += 1;
                    }
                }
            }
        }
        let size = k + 1;
        if 2 * size > n {
            break;
        }
        if from_int(boundary as i64) < lambda * from_int(size as i64) {
            return Some(size);
        }
    }
    None
}

/// Exhaustively verifies both the expander inequality for sets of size
/// at most `n/2` and the derived large-set bound
/// `|N(X)| >= (lambda*epsilon/2)|X|` for sets of size at most
/// `(1-epsilon)n`. Returns the first violator of either as a witness.
pub fn verify_expander_exact(
    g: &LineGraph,
    lambda: Rational,
    epsilon: Rational,
    exact_threshold: usize,
) -> Result<ExactVerification, ExpanderError> {
    let n = g.len();
    let threshold = exact_threshold.min(MAX_EXACT_VERIFY);
    if n > threshold {
        return Err(ExpanderError::TooLargeForExact { n, threshold });
    }
    let masks = neighbor_masks(g);
    let large_cap = (from_int(1) - epsilon) * from_int(n as i64);
    let large_factor = lambda * epsilon / from_int(2);
    for mask in 1u64..(1u64 << n) {
        let k = mask.count_ones() as usize;
        let base = 2 * k <= n;
        let large = from_int(k as i64) <= large_cap;
        if !base && !large {
            continue;
        }
        let nb = from_int(mask_neighborhood(&masks, mask).count_ones() as i64);
        if (base && nb < lambda * from_int(k as i64))
            || (large && nb < large_factor * from_int(k as i64))
        {
            return Ok(ExactVerification {
                is_expander: false,
                witness: Some(mask_to_set(mask)),
            });
        }
    }
    Ok(ExactVerification {
        is_expander: true,
        witness: None,
    })
}

/// Extracts an expander subgraph with certificate.
///
/// Peels to the degree floor, then alternates cut-finding with peeling:
/// the cut side is kept when its density is at least `(1-lambda)` times
/// the current density, otherwise the complement of the cut and its
/// neighborhood is kept (one of the two always qualifies for a verified
/// cut). Stops when no cut is found; aborts if density ever falls below
/// `d/2`, which cannot happen when every existing cut is found.
pub fn extract_expander(
    g: &LineGraph,
    lambda: Rational,
    d: Rational,
    exact_threshold: usize,
) -> Result<(LineGraph, ExpanderCertificate), ExpanderError> {
    let floor = d / from_int(2);
    let mut cur = peel(g, d)?;
    loop {
        let dens = cur.density();
        if dens < floor {
            return Err(ExpanderError::DensityCollapse {
                density: dens,
                floor,
            });
        }
        let Some(w) = find_sparse_cut(&cur, lambda, exact_threshold) else {
            let mode = if cur.len() <= exact_threshold.min(MAX_EXACT_VERIFY) {
                CertMode::Exact
            } else {
                CertMode::Heuristic
            };
            let cert = ExpanderCertificate {
                lambda,
                d: cur.min_degree(),
                mode,
                witness: None,
            };
            return Ok((cur, cert));
        };
        let keep_floor = dens * (from_int(1) - lambda);
        let w_side = cur.induced(&w);
        let (next, next_floor) = if w_side.density() >= keep_floor {
            (w_side, keep_floor)
        } else {
            let mut drop = vec![false; cur.len()];
            for &v in &w {
                drop[v as usize] = true;
            }
            for v in cur.neighborhood(&w) {
                drop[v as usize] = true;
            }
            let rest: Vec<VertexId> = cur.vertices().filter(|&v| !drop[v as usize]).collect();
            let rest_side = cur.induced(&rest);
            assert!(
                rest_side.density() >= dens,
                "cut dichotomy violated; the cut inequality cannot have held"
            );
            (rest_side, dens)
        };
        cur = peel(&next, next_floor)?;
    }
}

/// Greedily covers all but an epsilon fraction of the vertices with
/// vertex-disjoint expander subgraphs. While the uncovered remainder
/// exceeds `epsilon * n` vertices its density is at least `epsilon * d`
/// (it has no more blocks than the host), so extraction applies with
/// that floor; pieces certify min degree at least `epsilon*d/(2r)`.
pub fn expander_cover(
    g: &LineGraph,
    lambda: Rational,
    d: Rational,
    epsilon: Rational,
    exact_threshold: usize,
) -> Result<Vec<(LineGraph, ExpanderCertificate)>, ExpanderError> {
    let n = g.len();
    let mut remainder: Vec<VertexId> = g.vertices().collect();
    let mut pieces = Vec::new();
    let stop = epsilon * from_int(n as i64);
    while from_int(remainder.len() as i64) > stop {
        let host = g.induced(&remainder);
        debug_assert!(host.density() >= epsilon * d);
        let (piece, cert) = extract_expander(&host, lambda, epsilon * d, exact_threshold)?;
        let mut covered = vec![false; g.len()];
        for v in piece.vertices() {
            let id = g
                .vertex_id(piece.coords_of(v))
                .expect("piece vertices come from the host");
            covered[id as usize] = true;
        }
        remainder.retain(|&v| !covered[v as usize]);
        pieces.push((piece, cert));
    }
    Ok(pieces)
}
