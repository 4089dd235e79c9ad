//! Ground-truth brute force, independent validation, and generators.
//!
//! Nothing in this module depends on the search pipeline: the validator
//! only reads the hypergraph edge set, and the brute-force detector is a
//! plain DFS over tight paths. The search modules treat these as the
//! final word on whether an emitted cycle is real.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::Hypergraph;

/// Default vertex cap for the exhaustive detector.
pub const DEFAULT_ORACLE_VERTEX_CAP: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive search: {n} vertices > cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("max_len {0} is below r+1")]
    MaxLenTooSmall(usize),
}

/// A tight cycle in a hypergraph: `len >= r+1` distinct vertices whose
/// every cyclic window of r consecutive vertices is an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightCycleWitness {
    pub vertices: Vec<u32>,
}

impl TightCycleWitness {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Checks a witness against the definition alone: distinct vertices,
/// length at least r+1, and every cyclic window an edge.
pub fn validate_tight_cycle(h: &Hypergraph, w: &TightCycleWitness) -> bool {
    let r = h.r();
    let l = w.vertices.len();
    if l < r + 1 {
        return false;
    }
    let mut sorted = w.vertices.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != l {
        return false;
    }
    if w.vertices.iter().any(|&v| v as usize >= h.vertex_count()) {
        return false;
    }
    for i in 0..l {
        let window: Vec<u32> = (0..r).map(|j| w.vertices[(i + j) % l]).collect();
        if !h.has_edge(&window) {
            return false;
        }
    }
    true
}

/// Exhaustive shortest-tight-cycle search with the default vertex cap.
pub fn brute_force_tight_cycle(
    h: &Hypergraph,
    max_len: usize,
) -> Result<Option<TightCycleWitness>, OracleError> {
    brute_force_tight_cycle_with_cap(h, max_len, DEFAULT_ORACLE_VERTEX_CAP)
}

/// Exhaustive shortest-tight-cycle search.
///
/// Iterative deepening on the cycle length: for each target length the
/// DFS enumerates tight paths, extending `x_1..x_k` by `x_{k+1}` only
/// when the last window is an edge, and closing only when all wrap
/// windows are edges. Rotations are pruned by forcing `x_1` to be the
/// smallest vertex on the cycle. Returns a shortest witness, or `None`
/// if no tight cycle of length `<= max_len` exists.
pub fn brute_force_tight_cycle_with_cap(
    h: &Hypergraph,
    max_len: usize,
    vertex_cap: usize,
) -> Result<Option<TightCycleWitness>, OracleError> {
    let r = h.r();
    let n = h.vertex_count();
    if n > vertex_cap {
        return Err(OracleError::TooLarge { n, cap: vertex_cap });
    }
    if max_len < r + 1 {
        return Err(OracleError::MaxLenTooSmall(max_len));
    }
    for target in (r + 1)..=max_len.min(n) {
        if let Some(w) = search_length(h, target) {
            debug_assert!(validate_tight_cycle(h, &w));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn search_length(h: &Hypergraph, target: usize) -> Option<TightCycleWitness> {
    let n = h.vertex_count();
    let mut path = Vec::with_capacity(target);
    let mut used = vec![false; n];
    for start in 0..n as u32 {
        path.push(start);
        used[start as usize] = true;
        if let Some(w) = extend(h, target, &mut path, &mut used) {
            return Some(w);
        }
        used[start as usize] = false;
        path.pop();
    }
    None
}

fn extend(
    h: &Hypergraph,
    target: usize,
    path: &mut Vec<u32>,
    used: &mut [bool],
) -> Option<TightCycleWitness> {
    let r = h.r();
    let k = path.len();
    if k == target {
        return if wraps_close(h, path) {
            Some(TightCycleWitness {
                vertices: path.clone(),
            })
        } else {
            None
        };
    }
    let start = path[0];
    for next in (start + 1)..h.vertex_count() as u32 {
        if used[next as usize] {
            continue;
        }
        // Window constraint applies once the path is long enough.
        if k + 1 >= r {
            let mut window: Vec<u32> = path[k + 1 - r..].to_vec();
            window.push(next);
            if !h.has_edge(&window) {
                continue;
            }
        }
        path.push(next);
        used[next as usize] = true;
        if let Some(w) = extend(h, target, path, used) {
            return Some(w);
        }
        used[next as usize] = false;
        path.pop();
    }
    None
}

fn wraps_close(h: &Hypergraph, path: &[u32]) -> bool {
    let r = h.r();
    let l = path.len();
    for i in (l - r + 1)..l {
        let window: Vec<u32> = (0..r).map(|j| path[(i + j) % l]).collect();
        if !h.has_edge(&window) {
            return false;
        }
    }
    true
}

/// The star: all r-subsets of `{0..n}` containing vertex 0. It has
/// `C(n-1, r-1)` edges and no tight cycle.
pub fn gen_star(n: usize, r: usize) -> Hypergraph {
    assert!(n >= r && r >= 2);
    let edges = (1..n as u32).combinations(r - 1).map(|mut rest| {
        let mut e = vec![0u32];
        e.append(&mut rest);
        e
    });
    Hypergraph::new(r, n, edges, None).unwrap()
}

/// Complete multipartite hypergraph: every rainbow tuple is an edge.
pub fn gen_complete_multipartite(part_sizes: &[usize]) -> Hypergraph {
    let r = part_sizes.len();
    assert!(r >= 2 && part_sizes.iter().all(|&s| s >= 1));
    let n: usize = part_sizes.iter().sum();
    let mut offsets = vec![0usize; r];
    for i in 1..r {
        offsets[i] = offsets[i - 1] + part_sizes[i - 1];
    }
    let edges = part_sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| (offsets[i] as u32..(offsets[i] + s) as u32).collect::<Vec<_>>())
        .multi_cartesian_product();
    Hypergraph::new(r, n, edges, Some(part_sizes.to_vec())).unwrap()
}

/// The tight cycle of length `len` itself: vertices `0..len`, one edge
/// per cyclic window.
pub fn gen_tight_cycle(len: usize, r: usize) -> Hypergraph {
    assert!(len > r && r >= 2);
    let edges = (0..len).map(|i| (0..r).map(|j| ((i + j) % len) as u32).collect::<Vec<_>>());
    Hypergraph::new(r, len, edges, None).unwrap()
}

/// Random r-partite hypergraph with parts of size `m`: each rainbow
/// tuple is an edge independently with probability `p`.
pub fn gen_random_rpartite(m: usize, r: usize, p: f64, seed: u64) -> Hypergraph {
    assert!(m >= 1 && r >= 2 && (0.0..=1.0).contains(&p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut offsets = vec![0usize; r];
    for i in 1..r {
        offsets[i] = offsets[i - 1] + m;
    }
    let edges = (0..r)
        .map(|i| (offsets[i] as u32..(offsets[i] + m) as u32).collect::<Vec<_>>())
        .multi_cartesian_product()
        .filter(|_| rng.gen_bool(p));
    Hypergraph::new(r, m * r, edges, Some(vec![m; r])).unwrap()
}

/// The full grid: all m^r rainbow tuples.
pub fn gen_full_grid(m: usize, r: usize) -> Hypergraph {
    gen_complete_multipartite(&vec![m; r])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_edge_counts() {
        let h = gen_star(5, 3);
        assert_eq!(h.edge_count(), 6);
        assert_eq!(gen_star(3, 3).edge_count(), 1);
    }

    #[test]
    fn star_has_no_tight_cycle() {
        for n in 4..=10 {
            let h = gen_star(n, 3);
            assert_eq!(brute_force_tight_cycle(&h, n).unwrap(), None, "n={n}");
        }
    }

    #[test]
    fn complete_k4_has_cycle_of_length_4() {
        let edges = (0u32..4).combinations(3);
        let h = Hypergraph::new(3, 4, edges, None).unwrap();
        let w = brute_force_tight_cycle(&h, 4).unwrap().unwrap();
        assert_eq!(w.len(), 4);
        assert!(validate_tight_cycle(&h, &w));
    }

    #[test]
    fn generated_cycle_found() {
        let h = gen_tight_cycle(6, 3);
        assert_eq!(h.edge_count(), 6);
        let w = brute_force_tight_cycle(&h, 6).unwrap().unwrap();
        assert_eq!(w.len(), 6);
    }

    #[test]
    fn k222_shortest_cycle_is_6() {
        let h = gen_complete_multipartite(&[2, 2, 2]);
        assert_eq!(h.edge_count(), 8);
        let w = brute_force_tight_cycle(&h, 8).unwrap().unwrap();
        assert_eq!(w.len(), 6);
    }

    #[test]
    fn validator_rejects_bad_witnesses() {
        let h = gen_tight_cycle(6, 3);
        let good = brute_force_tight_cycle(&h, 6).unwrap().unwrap();
        assert!(validate_tight_cycle(&h, &good));

        let mut repeated = good.clone();
        repeated.vertices[1] = repeated.vertices[0];
        assert!(!validate_tight_cycle(&h, &repeated));

        // Length r is never a tight cycle.
        let short = TightCycleWitness {
            vertices: vec![0, 1, 2],
        };
        assert!(!validate_tight_cycle(&h, &short));
    }

    #[test]
    fn oracle_refuses_oversized() {
        let h = gen_star(20, 3);
        assert!(matches!(
            brute_force_tight_cycle(&h, 10),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(brute_force_tight_cycle_with_cap(&h, 10, 20).is_ok());
    }

    #[test]
    fn random_p1_is_full_grid() {
        let h = gen_random_rpartite(3, 3, 1.0, 42);
        assert_eq!(h.edge_count(), 27);
        assert_eq!(h, gen_full_grid(3, 3));
    }

    #[test]
    fn random_is_seed_deterministic() {
        let a = gen_random_rpartite(4, 3, 0.4, 7);
        let b = gen_random_rpartite(4, 3, 0.4, 7);
        assert_eq!(a, b);
        let c = gen_random_rpartite(4, 3, 0.4, 8);
        assert_ne!(a, c);
    }
}
