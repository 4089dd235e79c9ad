//! r-uniform hypergraphs: the source and sink of all conversions.
//!
//! A hypergraph is a set of r-element vertex subsets over vertices
//! `0..n`. A *partitioned* hypergraph additionally carries an r-partition
//! of its vertex set into contiguous id ranges (part 0 first, then part 1,
//! and so on); every edge of a partitioned hypergraph meets each part
//! exactly once.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("edge {0:?} does not have exactly r distinct vertices")]
    BadEdgeArity(Vec<u32>),
    #[error("edge {0:?} references vertex out of range")]
    VertexOutOfRange(Vec<u32>),
    #[error("edge {0:?} does not meet every part exactly once")]
    NotRainbow(Vec<u32>),
    #[error("part sizes {0:?} do not sum to the vertex count {1}")]
    BadPartSizes(Vec<usize>, usize),
    #[error("uniformity must be at least 2, got {0}")]
    BadUniformity(usize),
}

/// An r-uniform hypergraph with optional contiguous r-partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    /// Edges stored as sorted vertex lists, in canonical set order.
    edges: BTreeSet<Vec<u32>>,
    /// Part sizes when partitioned; part `i` owns the id range
    /// `[offset_i, offset_i + parts[i])`.
    parts: Option<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(
        r: usize,
        n: usize,
        edges: impl IntoIterator<Item = Vec<u32>>,
        parts: Option<Vec<usize>>,
    ) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::BadUniformity(r));
        }
        if let Some(ref p) = parts {
            if p.len() != r || p.iter().sum::<usize>() != n {
                return Err(HypergraphError::BadPartSizes(p.clone(), n));
            }
        }
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.len() != r {
                return Err(HypergraphError::BadEdgeArity(e));
            }
            if e.iter().any(|&v| v as usize >= n) {
                return Err(HypergraphError::VertexOutOfRange(e));
            }
            if let Some(ref p) = parts {
                let mut seen = vec![false; r];
                for &v in &e {
                    let part = part_of(p, v);
                    if seen[part] {
                        return Err(HypergraphError::NotRainbow(e));
                    }
                    seen[part] = true;
                }
            }
            set.insert(e);
        }
        Ok(Hypergraph {
            r,
            n,
            edges: set,
            parts,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.edges.iter()
    }

    pub fn has_edge(&self, e: &[u32]) -> bool {
        let mut e = e.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn is_partitioned(&self) -> bool {
        self.parts.is_some()
    }

    pub fn part_sizes(&self) -> Option<&[usize]> {
        self.parts.as_deref()
    }

    /// Part index of a vertex; only meaningful when partitioned.
    pub fn part_of(&self, v: u32) -> Option<usize> {
        self.parts.as_deref().map(|p| part_of(p, v))
    }

    pub fn part_offset(&self, part: usize) -> Option<usize> {
        self.parts
            .as_deref()
            .map(|p| p[..part].iter().sum::<usize>())
    }
}

fn part_of(parts: &[usize], v: u32) -> usize {
    let mut v = v as usize;
    for (i, &size) in parts.iter().enumerate() {
        if v < size {
            return i;
        }
        v -= size;
    }
    parts.len() - 1
}

/// Extracts an r-partite sub-hypergraph by random vertex partitioning.
///
/// Tries `trials` seeded random r-labelings, keeping the best one (most
/// rainbow edges). If none of them retains at least `ceil(r!/r^r * |E|)`
/// edges, sampling continues until one does; a labeling achieving the
/// bound exists because the rainbow count meets it in expectation. The
/// result is relabeled so parts occupy contiguous id ranges, and all `n`
/// vertices are kept. A hypergraph that already carries parts is returned
/// unchanged.
pub fn make_r_partite(h: &Hypergraph, seed: u64, trials: usize) -> Hypergraph {
    if h.is_partitioned() {
        return h.clone();
    }
    let r = h.r;
    let n = h.n;
    let bound = rainbow_bound(r, h.edge_count());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut attempts = 0usize;
    loop {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..r)).collect();
        let kept = h.edges.iter().filter(|e| is_rainbow(e, &labels, r)).count();
        if best.as_ref().is_none_or(|(b, _)| kept > *b) {
            best = Some((kept, labels));
        }
        attempts += 1;
        let best_kept = best.as_ref().unwrap().0;
        // Take the best of `trials` labelings, but never return one below
        // the expectation bound: keep sampling until it is met (a labeling
        // achieving it exists, so this terminates).
        if (attempts >= trials.max(1) && best_kept >= bound) || best_kept == h.edge_count() {
            break;
        }
    }
    let (_, labels) = best.unwrap();
    relabel_by_parts(h, &labels)
}

/// `ceil(r!/r^r * m)` without overflow at the scales used here.
fn rainbow_bound(r: usize, m: usize) -> usize {
    let mut fact = 1u128;
    for i in 2..=r {
        fact *= i as u128;
    }
    let pow = (r as u128).pow(r as u32);
    ((fact * m as u128) + pow - 1).div_euclid(pow) as usize
}

fn is_rainbow(edge: &[u32], labels: &[usize], r: usize) -> bool {
    let mut seen = [false; 16];
    debug_assert!(r <= 16);
    for &v in edge {
        let l = labels[v as usize];
        if seen[l] {
            return false;
        }
        seen[l] = true;
    }
    true
}

/// Renumbers vertices part-major (ascending old id within each part) and
/// keeps exactly the rainbow edges.
fn relabel_by_parts(h: &Hypergraph, labels: &[usize]) -> Hypergraph {
    let r = h.r;
    let mut sizes = vec![0usize; r];
    for &l in labels {
        sizes[l] += 1;
    }
    let mut offsets = vec![0usize; r];
    for i in 1..r {
        offsets[i] = offsets[i - 1] + sizes[i - 1];
    }
    let mut next = offsets.clone();
    let mut new_id = vec![0u32; h.n];
    for v in 0..h.n {
        new_id[v] = next[labels[v]] as u32;
        next[labels[v]] += 1;
    }
    let edges = h
        .edges
        .iter()
        .filter(|e| is_rainbow(e, labels, r))
        .map(|e| e.iter().map(|&v| new_id[v as usize]).collect::<Vec<_>>());
    Hypergraph::new(r, h.n, edges, Some(sizes)).expect("relabeling preserves validity")
}
