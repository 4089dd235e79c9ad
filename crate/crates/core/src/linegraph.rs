//! The r-line-graph: r-tuples adjacent when they differ in one coordinate.
//!
//! Vertices live in `A_1 x ... x A_r` where part `i` is the id range
//! `0..part_sizes[i]`. For each axis `i`, the *i-blocks* (maximal sets of
//! vertices agreeing on every coordinate except axis `i`) partition the
//! vertex set and are cliques. The density of a graph is `r*n / p` where
//! `p` is the total number of blocks over all axes, i.e. the average block
//! size; the minimum degree is the minimum block size.
//!
//! A `LineGraph` is immutable after construction: subgraph operations
//! build new graphs. Vertex ids are dense and assigned in lexicographic
//! coordinate order, so equal vertex sets always produce identical graphs.

use std::collections::HashMap;

use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::rational::{from_int, Rational};

pub type VertexId = u32;

/// One coordinate of a vertex: an element of part `part`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coordinate {
    pub part: usize,
    pub element: u32,
}

impl Coordinate {
    pub fn new(part: usize, element: u32) -> Self {
        Coordinate { part, element }
    }
}

/// Per-axis block structure: a block id per vertex plus member lists.
#[derive(Debug, Clone)]
struct AxisBlocks {
    block_of: Vec<u32>,
    members: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone)]
pub struct LineGraph {
    r: usize,
    part_sizes: Vec<usize>,
    /// Vertex coordinates, row-major (`n * r` elements), rows sorted
    /// lexicographically.
    coords: Vec<u32>,
    index: HashMap<Vec<u32>, VertexId>,
    blocks: Vec<AxisBlocks>,
}

impl PartialEq for LineGraph {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.part_sizes == other.part_sizes && self.coords == other.coords
    }
}
impl Eq for LineGraph {}

/// Exact statistics of a line graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityStats {
    pub num_vertices: usize,
    pub num_blocks: usize,
    /// `r*n / p`, exactly; 0 for the empty graph.
    pub density: Rational,
    /// Minimum block size over all axes; 0 for the empty graph.
    pub min_degree: usize,
}

impl LineGraph {
    /// Builds a line graph from coordinate rows. Rows are sorted and
    /// deduplicated; every element must be in range for its part.
    pub fn from_rows(r: usize, part_sizes: Vec<usize>, mut rows: Vec<Vec<u32>>) -> Self {
        assert!(r >= 1 && part_sizes.len() == r);
        for row in &rows {
            assert_eq!(row.len(), r, "row arity mismatch");
            for (i, &e) in row.iter().enumerate() {
                assert!((e as usize) < part_sizes[i], "element out of part range");
            }
        }
        rows.sort_unstable();
        rows.dedup();
        let n = rows.len();
        let mut coords = Vec::with_capacity(n * r);
        let mut index = HashMap::with_capacity(n);
        for (id, row) in rows.iter().enumerate() {
            coords.extend_from_slice(row);
            index.insert(row.clone(), id as VertexId);
        }
        let mut blocks = Vec::with_capacity(r);
        for axis in 0..r {
            let mut key_to_block: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut block_of = vec![0u32; n];
            let mut members: Vec<Vec<VertexId>> = Vec::new();
            for v in 0..n {
                let mut key = rows[v].clone();
                key[axis] = u32::MAX;
                let next = members.len() as u32;
                let b = *key_to_block.entry(key).or_insert(next);
                if b == next {
                    members.push(Vec::new());
                }
                block_of[v] = b;
                members[b as usize].push(v as VertexId);
            }
            blocks.push(AxisBlocks { block_of, members });
        }
        LineGraph {
            r,
            part_sizes,
            coords,
            index,
            blocks,
        }
    }

    pub fn empty(r: usize, part_sizes: Vec<usize>) -> Self {
        Self::from_rows(r, part_sizes, Vec::new())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.r.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.len() as VertexId
    }

    pub fn coords_of(&self, v: VertexId) -> &[u32] {
        let r = self.r;
        &self.coords[v as usize * r..(v as usize + 1) * r]
    }

    pub fn coordinate(&self, v: VertexId, axis: usize) -> Coordinate {
        Coordinate::new(axis, self.coords_of(v)[axis])
    }

    /// All r coordinates of a vertex.
    pub fn coordinates(&self, v: VertexId) -> Vec<Coordinate> {
        self.coords_of(v)
            .iter()
            .enumerate()
            .map(|(i, &e)| Coordinate::new(i, e))
            .collect()
    }

    /// Id of the vertex with the given coordinate row, if present.
    pub fn vertex_id(&self, row: &[u32]) -> Option<VertexId> {
        self.index.get(row).copied()
    }

    pub fn block_id(&self, v: VertexId, axis: usize) -> u32 {
        self.blocks[axis].block_of[v as usize]
    }

    /// Members of the block containing `v` along `axis` (including `v`),
    /// in ascending id order.
    pub fn block_members(&self, v: VertexId, axis: usize) -> &[VertexId] {
        let b = self.blocks[axis].block_of[v as usize];
        &self.blocks[axis].members[b as usize]
    }

    pub fn blocks_on_axis(&self, axis: usize) -> &[Vec<VertexId>] {
        &self.blocks[axis].members
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().map(|a| a.members.len()).sum()
    }

    /// Block size containing `v` on `axis` (the axis degree of `v`).
    pub fn degree(&self, v: VertexId, axis: usize) -> usize {
        self.block_members(v, axis).len()
    }

    pub fn stats(&self) -> DensityStats {
        let n = self.len();
        if n == 0 {
            return DensityStats {
                num_vertices: 0,
                num_blocks: 0,
                density: from_int(0),
                min_degree: 0,
            };
        }
        let p = self.num_blocks();
        let min_degree = self
            .blocks
            .iter()
            .flat_map(|a| a.members.iter().map(|m| m.len()))
            .min()
            .unwrap();
        DensityStats {
            num_vertices: n,
            num_blocks: p,
            density: Rational::new((self.r * n) as i64, p as i64),
            min_degree,
        }
    }

    pub fn density(&self) -> Rational {
        self.stats().density
    }

    pub fn min_degree(&self) -> usize {
        self.stats().min_degree
    }

    /// The axis boundary of `xs`: vertices with a neighbor in `xs`
    /// differing from them in coordinate `axis`. Returns
    /// `(boundary, boundary \ xs)`, both sorted.
    pub fn axis_boundary(&self, xs: &[VertexId], axis: usize) -> (Vec<VertexId>, Vec<VertexId>) {
        let n = self.len();
        let mut in_x = vec![false; n];
        for &v in xs {
            in_x[v as usize] = true;
        }
        let mut count_in_block = HashMap::new();
        for &v in xs {
            *count_in_block
                .entry(self.block_id(v, axis))
                .or_insert(0usize) += 1;
        }
        let mut boundary = Vec::new();
        let mut outside = Vec::new();
        let mut touched: Vec<u32> = count_in_block.keys().copied().collect();
        touched.sort_unstable();
        for b in touched {
            let cnt = count_in_block[&b];
            for &y in &self.blocks[axis].members[b as usize] {
                let inside = in_x[y as usize];
                // y needs an axis-differing neighbor in xs other than itself.
                let witnesses = if inside { cnt - 1 } else { cnt };
                if witnesses > 0 {
                    boundary.push(y);
                    if !inside {
                        outside.push(y);
                    }
                }
            }
        }
        boundary.sort_unstable();
        outside.sort_unstable();
        (boundary, outside)
    }

    /// The full neighborhood `N(xs)`: vertices outside `xs` adjacent to
    /// some vertex of `xs`, sorted.
    pub fn neighborhood(&self, xs: &[VertexId]) -> Vec<VertexId> {
        let n = self.len();
        let mut in_x = vec![false; n];
        for &v in xs {
            in_x[v as usize] = true;
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for &v in xs {
            for axis in 0..self.r {
                for &y in self.block_members(v, axis) {
                    if !in_x[y as usize] && !seen[y as usize] {
                        seen[y as usize] = true;
                        out.push(y);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Induced subgraph on the given vertex ids.
    pub fn induced(&self, xs: &[VertexId]) -> LineGraph {
        let rows = xs.iter().map(|&v| self.coords_of(v).to_vec()).collect();
        LineGraph::from_rows(self.r, self.part_sizes.clone(), rows)
    }

    /// Removes every vertex having one of the given coordinates, keeping
    /// the coordinate universe (part sizes) intact.
    pub fn delete_coordinates(&self, banned: &[Coordinate]) -> LineGraph {
        let mut banned_sets: Vec<Vec<bool>> =
            self.part_sizes.iter().map(|&s| vec![false; s]).collect();
        for c in banned {
            if c.part < self.r && (c.element as usize) < self.part_sizes[c.part] {
                banned_sets[c.part][c.element as usize] = true;
            }
        }
        let rows = self
            .vertices()
            .filter(|&v| {
                self.coords_of(v)
                    .iter()
                    .enumerate()
                    .all(|(i, &e)| !banned_sets[i][e as usize])
            })
            .map(|v| self.coords_of(v).to_vec())
            .collect();
        LineGraph::from_rows(self.r, self.part_sizes.clone(), rows)
    }

    /// Converts back to a partitioned hypergraph: one hyperedge per
    /// vertex, with the contiguous global id `offset(part) + element`.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let offsets = self.part_offsets();
        let edges = self.vertices().map(|v| {
            self.coords_of(v)
                .iter()
                .enumerate()
                .map(|(i, &e)| (offsets[i] + e as usize) as u32)
                .collect::<Vec<_>>()
        });
        let n = self.part_sizes.iter().sum();
        Hypergraph::new(self.r, n, edges, Some(self.part_sizes.clone()))
            .expect("line graph rows are rainbow by construction")
    }

    pub fn part_offsets(&self) -> Vec<usize> {
        let mut offsets = vec![0usize; self.r];
        for i in 1..self.r {
            offsets[i] = offsets[i - 1] + self.part_sizes[i - 1];
        }
        offsets
    }

    /// Translates a coordinate to the global hypergraph vertex id used by
    /// `to_hypergraph`.
    pub fn global_id(&self, c: Coordinate) -> u32 {
        (self.part_offsets()[c.part] + c.element as usize) as u32
    }
}

/// Identifies a partitioned hypergraph with its line graph: one vertex
/// per hyperedge, coordinate `i` being the edge's element in part `i`
/// (as a part-local id).
pub fn from_hypergraph(h: &Hypergraph) -> Result<LineGraph, HypergraphError> {
    let parts = h
        .part_sizes()
        .ok_or(HypergraphError::BadPartSizes(vec![], h.vertex_count()))?
        .to_vec();
    let r = h.r();
    let mut offsets = vec![0usize; r];
    for i in 1..r {
        offsets[i] = offsets[i - 1] + parts[i - 1];
    }
    let rows = h
        .edges()
        .map(|e| {
            let mut row = vec![0u32; r];
            for &v in e {
                let part = h.part_of(v).unwrap();
                row[part] = v - offsets[part] as u32;
            }
            row
        })
        .collect();
    Ok(LineGraph::from_rows(r, parts, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{gen_complete_multipartite, gen_full_grid};
    use crate::rational::ratio;

    fn grid(m: usize, r: usize) -> LineGraph {
        from_hypergraph(&gen_full_grid(m, r)).unwrap()
    }

    #[test]
    fn single_edge_linegraph() {
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2]], Some(vec![1, 1, 1])).unwrap();
        let g = from_hypergraph(&h).unwrap();
        assert_eq!(g.len(), 1);
        let s = g.stats();
        assert_eq!(s.num_blocks, 3);
        assert_eq!(s.density, from_int(1));
        assert_eq!(s.min_degree, 1);
    }

    #[test]
    fn k222_stats() {
        let g = from_hypergraph(&gen_complete_multipartite(&[2, 2, 2])).unwrap();
        assert_eq!(g.len(), 8);
        let s = g.stats();
        assert_eq!(s.num_blocks, 12);
        assert_eq!(s.density, from_int(2));
        assert_eq!(s.min_degree, 2);
    }

    #[test]
    fn full_grid_stats() {
        let g = grid(3, 3);
        let s = g.stats();
        assert_eq!(s.num_vertices, 27);
        assert_eq!(s.num_blocks, 27);
        assert_eq!(s.density, from_int(3));
        assert_eq!(s.min_degree, 3);
    }

    #[test]
    fn empty_graph_stats() {
        let g = LineGraph::empty(3, vec![2, 2, 2]);
        let s = g.stats();
        assert_eq!(s.density, from_int(0));
        assert_eq!(s.min_degree, 0);
    }

    #[test]
    fn boundary_of_full_block() {
        let g = grid(3, 2);
        let block: Vec<u32> = g.block_members(0, 0).to_vec();
        assert!(block.len() >= 2);
        let (boundary, outside) = g.axis_boundary(&block, 0);
        assert_eq!(boundary, block);
        assert!(outside.is_empty());
    }

    #[test]
    fn boundary_of_empty_set() {
        let g = grid(2, 2);
        let (b, n) = g.axis_boundary(&[], 0);
        assert!(b.is_empty() && n.is_empty());
    }

    #[test]
    fn singleton_neighborhood_in_grid() {
        let g = grid(3, 3);
        let v = g.vertex_id(&[0, 0, 0]).unwrap();
        assert_eq!(g.neighborhood(&[v]).len(), 6);
    }

    #[test]
    fn singleton_not_in_own_axis_boundary() {
        let g = grid(2, 2);
        let v = g.vertex_id(&[0, 0]).unwrap();
        let (boundary, outside) = g.axis_boundary(&[v], 0);
        let w = g.vertex_id(&[1, 0]).unwrap();
        assert_eq!(boundary, vec![w]);
        assert_eq!(outside, vec![w]);
    }

    #[test]
    fn delete_nothing_is_identity() {
        let g = grid(3, 3);
        assert_eq!(g.delete_coordinates(&[]), g);
    }

    #[test]
    fn delete_one_element_of_first_part() {
        let g = grid(3, 3);
        let out = g.delete_coordinates(&[Coordinate::new(0, 1)]);
        assert_eq!(out.len(), 18);
    }

    #[test]
    fn delete_bounds_match_min_degree() {
        // Random instances: deleting u coordinates keeps min degree and
        // vertex count within the exact bounds.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..50 {
            let m = rng.gen_range(3..6);
            let p = 0.5 + rng.gen_range(0.0..0.5);
            let h = crate::oracle::gen_random_rpartite(m, 3, p, trial);
            let g = from_hypergraph(&h).unwrap();
            if g.is_empty() {
                continue;
            }
            let delta = g.min_degree();
            let u = rng.gen_range(0..=delta.saturating_sub(1).min(3));
            let mut banned = Vec::new();
            for part in 0..3 {
                if banned.len() < u {
                    banned.push(Coordinate::new(part, rng.gen_range(0..m as u32)));
                }
            }
            banned.dedup();
            let out = g.delete_coordinates(&banned);
            let u = banned.len();
            if !out.is_empty() {
                assert!(out.min_degree() + u >= delta);
            }
            // n' >= (1 - u/delta) * n, exactly.
            let lhs = from_int(out.len() as i64);
            let rhs = (from_int(1) - ratio(u as i64, delta as i64)) * from_int(g.len() as i64);
            assert!(lhs >= rhs);
        }
    }

    #[test]
    fn induced_identity_and_empty() {
        let g = grid(2, 3);
        let all: Vec<u32> = g.vertices().collect();
        assert_eq!(g.induced(&all), g);
        assert!(g.induced(&[]).is_empty());
    }

    #[test]
    fn induced_single_block_density() {
        // A single axis-block of size b has p = b(r-1) + 1 blocks.
        let g = grid(4, 3);
        let block: Vec<u32> = g.block_members(0, 0).to_vec();
        let b = block.len();
        let sub = g.induced(&block);
        let s = sub.stats();
        assert_eq!(s.num_blocks, b * 2 + 1);
        assert_eq!(s.density, ratio((3 * b) as i64, (b * 2 + 1) as i64));
    }

    #[test]
    fn blocks_partition_every_axis() {
        let g = grid(3, 3);
        for axis in 0..3 {
            let total: usize = g.blocks_on_axis(axis).iter().map(|b| b.len()).sum();
            assert_eq!(total, g.len());
        }
    }

    #[test]
    fn hypergraph_roundtrip() {
        let h = gen_complete_multipartite(&[2, 3, 2]);
        let g = from_hypergraph(&h).unwrap();
        assert_eq!(g.to_hypergraph(), h);
        let g2 = from_hypergraph(&g.to_hypergraph()).unwrap();
        assert_eq!(g2, g);
    }

    #[test]
    fn rejects_unpartitioned() {
        let h = Hypergraph::new(3, 4, vec![vec![0, 1, 2]], None).unwrap();
        assert!(from_hypergraph(&h).is_err());
    }

    #[test]
    fn queries_are_shareable_across_threads() {
        fn assert_sync_send<T: Sync + Send>() {}
        assert_sync_send::<LineGraph>();
    }
}
