//! Balanced partitioning, the two-sided connector, cycle assembly, and
//! the density-increment outer search.
//!
//! The connector tries to link two coordinate-disjoint vertices by a
//! sigma-path. It splits every part into two balanced sides so that `x`
//! lives in the all-side-1 cell and `y` in the all-side-2 cell, covers
//! both cells with expander subgraphs, grows sigma-paths from `x` (and
//! reverse paths from `y`) to representatives of the cover pieces,
//! re-grows inside each piece with the used-up coordinates forbidden,
//! and finally looks for a sigma-edge between the two grown sets. Any
//! cover piece that is simultaneously small and dense short-circuits the
//! whole search as a dense-subgraph certificate, which is what the outer
//! density-increment loop recurses into.
//!
//! Soundness is absolute: a cycle is emitted only after the spliced
//! coordinate sequence is revalidated from scratch against the host
//! graph and the hypergraph-level validator. Guarantees of success are
//! not: any stage may come up empty at this scale, and that is reported
//! as an honest failure with the stage name.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expander::{expander_cover, extract_expander, ExpanderCertificate};
use crate::linegraph::{Coordinate, LineGraph, VertexId};
use crate::oracle::{validate_tight_cycle, TightCycleWitness};
use crate::rational::{ceil_log2, from_int, ratio, Rational};
use crate::sigma::{
    reach, sigma_neighbors, validate_sigma_path, Permutation, ReachMode, SigmaPath,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("cycle length {len} is not divisible by the uniformity {r}")]
    LengthNotDivisible { len: usize, r: usize },
    #[error("cycle length {len} is below the minimum 2r = {min}")]
    LengthTooShort { len: usize, min: usize },
    #[error("no balanced partition found after {retries} retries")]
    PartitionFailed { retries: usize },
}

/// Tunable search parameters. Unset fields resolve per graph: lambda to
/// `1/(2 ceil(log2 n))`, the degree floor to the measured density, the
/// shrink factor K to `2^(r+2)`, epsilon to `2^-(r+6)`, and the dense
/// certificate ratio `c4` to `epsilon/(6r)`.
#[derive(Debug, Clone)]
pub struct SearchParams {
    pub seed: u64,
    pub lambda: Option<Rational>,
    pub dmin: Option<u32>,
    pub k_factor: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub c4: Option<Rational>,
    /// Reach size budget; `None` runs every reach to saturation.
    pub max_path_size: Option<usize>,
    pub partition_retries: usize,
    pub pair_samples: usize,
    pub exact_threshold: usize,
}

impl SearchParams {
    pub fn new(seed: u64) -> Self {
        SearchParams {
            seed,
            lambda: None,
            dmin: None,
            k_factor: None,
            epsilon: None,
            c4: None,
            max_path_size: None,
            partition_retries: 256,
            pair_samples: 1000,
            exact_threshold: crate::expander::DEFAULT_EXACT_THRESHOLD,
        }
    }

    pub fn resolve_lambda(&self, n: usize) -> Rational {
        self.lambda
            .unwrap_or_else(|| ratio(1, 2 * ceil_log2(n.max(2)).max(1) as i64))
    }

    pub fn resolve_epsilon(&self, r: usize) -> Rational {
        self.epsilon.unwrap_or_else(|| ratio(1, 1i64 << (r + 6)))
    }

    pub fn resolve_k(&self, r: usize) -> Rational {
        self.k_factor.unwrap_or_else(|| from_int(1i64 << (r + 2)))
    }

    pub fn resolve_c4(&self, r: usize) -> Rational {
        self.c4
            .unwrap_or_else(|| self.resolve_epsilon(r) / from_int(6 * r as i64))
    }

    pub fn resolve_d(&self, g: &LineGraph) -> Rational {
        match self.dmin {
            Some(d) => from_int(d as i64),
            None => from_int(g.density().floor().to_integer().max(1)),
        }
    }
}

/// The proof-side constants, for reporting. Only `c4` (and through it
/// the chain ratio `c3' = c4/(4r)`) participates in any runtime check;
/// the rest bound preconditions that desk-scale instances cannot meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c1_prime: f64,
    pub c2_prime: f64,
    pub c3_prime: f64,
}

impl ProofConstants {
    pub fn for_r(r: usize, epsilon: f64) -> Self {
        let rf = r as f64;
        let c1 = epsilon * epsilon / (240.0 * rf.powi(4));
        let c2 = 1e5 * rf.powi(5) / epsilon.powi(3);
        let c3 = 40.0 * rf / epsilon;
        let c4 = epsilon / (6.0 * rf);
        ProofConstants {
            c1,
            c2,
            c3,
            c4,
            c1_prime: (64.0 * rf * c2).max(256.0 * rf.powi(3) * c3),
            c2_prime: c1 / (32.0 * rf * rf),
            c3_prime: c4 / (4.0 * rf),
        }
    }
}

/// Where a search gave up. A closed set: these names appear verbatim in
/// experiment CSV rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    EmptyGraph,
    Extract,
    NoDisjointPair,
    Partition,
    Cover,
    SigmaSide,
    TauSide,
    Meet,
    Splice,
    DensityAboveSize,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::EmptyGraph => "empty-graph",
            Stage::Extract => "extract",
            Stage::NoDisjointPair => "no-disjoint-pair",
            Stage::Partition => "partition",
            Stage::Cover => "cover",
            Stage::SigmaSide => "sigma-side",
            Stage::TauSide => "tau-side",
            Stage::Meet => "meet",
            Stage::Splice => "splice",
            Stage::DensityAboveSize => "density-above-size",
        };
        write!(f, "{s}")
    }
}

/// A subgraph certificate: small relative to its host and dense in the
/// minimum-degree sense. The reported numbers are recomputed from the
/// graph itself at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSubgraph {
    pub graph: LineGraph,
    pub size: usize,
    pub min_degree: usize,
    /// Degree basis the connector was running with when this fired.
    pub d_basis: Rational,
    /// The `c4 * d_basis` floor the min degree was checked against.
    pub threshold: Rational,
}

/// A tight cycle in line-graph coordinates: `len` coordinates in cyclic
/// order, every window of r consecutive ones a vertex of the host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightCycle {
    pub r: usize,
    pub coords: Vec<Coordinate>,
}

impl TightCycle {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Translates to a hypergraph witness over the global contiguous ids
    /// of any graph sharing the host's part universe.
    pub fn to_witness(&self, g: &LineGraph) -> TightCycleWitness {
        TightCycleWitness {
            vertices: self.coords.iter().map(|&c| g.global_id(c)).collect(),
        }
    }
}

/// Revalidates a cycle from raw coordinates: length, distinctness, and
/// every cyclic window a vertex with one coordinate per axis.
pub fn validate_line_cycle(g: &LineGraph, c: &TightCycle) -> bool {
    let r = g.r();
    let l = c.coords.len();
    if c.r != r || l < r + 1 {
        return false;
    }
    let mut seen = HashSet::new();
    for &cd in &c.coords {
        if !seen.insert(cd) {
            return false;
        }
    }
    for start in 0..l {
        let mut row = vec![u32::MAX; r];
        for j in 0..r {
            let cd = c.coords[(start + j) % l];
            if cd.part >= r || row[cd.part] != u32::MAX {
                return false;
            }
            row[cd.part] = cd.element;
        }
        if row.contains(&u32::MAX) || g.vertex_id(&row).is_none() {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Path(SigmaPath),
    Cycle(TightCycle),
    Dense(DenseSubgraph),
    Failure(Stage),
}

impl SearchOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            SearchOutcome::Path(_) => "path",
            SearchOutcome::Cycle(_) => "cycle",
            SearchOutcome::Dense(_) => "dense-subgraph",
            SearchOutcome::Failure(_) => "failure",
        }
    }
}

/// A two-coloring of every part together with the induced cell
/// decomposition of the vertex set.
#[derive(Debug, Clone)]
pub struct BalancedPartition {
    r: usize,
    /// Side (1 or 2) per (axis, element).
    sides: Vec<Vec<u8>>,
    /// Cell mask -> vertex ids; bit `i` set means axis `i` is on side 2.
    cells: Vec<Vec<VertexId>>,
}

impl BalancedPartition {
    pub fn side(&self, c: Coordinate) -> u8 {
        self.sides[c.part][c.element as usize]
    }

    pub fn cell_of(&self, g: &LineGraph, v: VertexId) -> usize {
        let mut mask = 0usize;
        for (axis, &e) in g.coords_of(v).iter().enumerate() {
            if self.sides[axis][e as usize] == 2 {
                mask |= 1 << axis;
            }
        }
        mask
    }

    pub fn cell_vertices(&self, mask: usize) -> &[VertexId] {
        &self.cells[mask]
    }

    pub fn subgraph(&self, g: &LineGraph, mask: usize) -> LineGraph {
        g.induced(&self.cells[mask])
    }

    /// The all-side-1 cell (contains `x`).
    pub fn side1(&self, g: &LineGraph) -> LineGraph {
        self.subgraph(g, 0)
    }

    /// The all-side-2 cell (contains `y`).
    pub fn side2(&self, g: &LineGraph) -> LineGraph {
        self.subgraph(g, (1 << self.r) - 1)
    }

    /// Exact re-verification of the block-balance and cell-balance
    /// properties at slack `epsilon`.
    pub fn verify(&self, g: &LineGraph, epsilon: Rational) -> bool {
        self.verify_blocks(g, epsilon) && self.verify_cells(g, epsilon)
    }

    /// Every block meeting a cell does so with between `(1-eps/2r)/2` and
    /// `(1+eps/2r)/2` of its size. Only the two cells compatible with a
    /// block's off-axis coordinates can be nonempty.
    fn verify_blocks(&self, g: &LineGraph, epsilon: Rational) -> bool {
        let r = g.r();
        let slack = epsilon / from_int(2 * r as i64);
        for axis in 0..r {
            for members in g.blocks_on_axis(axis) {
                let total = members.len();
                let side1 = members
                    .iter()
                    .filter(|&&v| self.side(g.coordinate(v, axis)) == 1)
                    .count();
                let lo = (from_int(1) - slack) / from_int(2) * from_int(total as i64);
                let hi = (from_int(1) + slack) / from_int(2) * from_int(total as i64);
                for count in [side1, total - side1] {
                    if count == 0 {
                        continue;
                    }
                    let c = from_int(count as i64);
                    if c < lo || c > hi {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every one of the `2^r` cells holds between `(1-eps)/2^r` and
    /// `(1+eps)/2^r` of the vertices.
    fn verify_cells(&self, g: &LineGraph, epsilon: Rational) -> bool {
        let r = g.r();
        let n = from_int(g.len() as i64);
        let cell_count = from_int(1i64 << r);
        let lo = (from_int(1) - epsilon) / cell_count * n;
        let hi = (from_int(1) + epsilon) / cell_count * n;
        let mut counts = vec![0i64; 1 << r];
        for v in g.vertices() {
            counts[self.cell_of(g, v)] += 1;
        }
        counts
            .iter()
            .all(|&c| from_int(c) >= lo && from_int(c) <= hi)
    }
}

/// Randomly splits every part into two sides with `x` forced all-side-1
/// and `y` all-side-2, retrying until the exact balance verifier passes.
/// Small blocks make the balance properties unsatisfiable (an integer
/// count cannot sit in a narrow window around half a small block), so
/// failure after all retries is an expected, honest outcome.
pub fn balanced_partition(
    g: &LineGraph,
    x: VertexId,
    y: VertexId,
    epsilon: Rational,
    seed: u64,
    max_retries: usize,
) -> Result<BalancedPartition, SearchError> {
    let r = g.r();
    assert!(
        shares_no_coordinate(g, x, y),
        "endpoints must be coordinate-disjoint"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_retries {
        let mut sides: Vec<Vec<u8>> = g
            .part_sizes()
            .iter()
            .map(|&s| {
                (0..s)
                    .map(|_| if rng.gen_bool(0.5) { 1 } else { 2 })
                    .collect()
            })
            .collect();
        for axis in 0..r {
            sides[axis][g.coords_of(x)[axis] as usize] = 1;
            sides[axis][g.coords_of(y)[axis] as usize] = 2;
        }
        let mut bp = BalancedPartition {
            r,
            sides,
            cells: vec![Vec::new(); 1 << r],
        };
        if bp.verify_blocks(g, epsilon) {
            for v in g.vertices() {
                let mask = bp.cell_of(g, v);
                bp.cells[mask].push(v);
            }
            if bp.verify_cells(g, epsilon) {
                return Ok(bp);
            }
        }
    }
    Err(SearchError::PartitionFailed {
        retries: max_retries,
    })
}

pub fn shares_no_coordinate(g: &LineGraph, a: VertexId, b: VertexId) -> bool {
    a != b
        && g.coords_of(a)
            .iter()
            .zip(g.coords_of(b))
            .all(|(ca, cb)| ca != cb)
}

/// Path-size mode for the connector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectMode {
    AtMost,
    /// Emit a path with exactly this many vertices.
    Exactly(usize),
}

/// Connects `x` to `y` by a sigma-path in `g`, or returns a small dense
/// subgraph, or an honest failure. `lambda` and `d` describe the
/// expansion `g` was certified for; `d` is the basis for the dense
/// certificate threshold `c4 * d`.
pub fn connect(
    g: &LineGraph,
    x: VertexId,
    y: VertexId,
    sigma: &Permutation,
    lambda: Rational,
    d: Rational,
    mode: ConnectMode,
    params: &SearchParams,
) -> SearchOutcome {
    if !shares_no_coordinate(g, x, y) {
        return SearchOutcome::Failure(Stage::NoDisjointPair);
    }
    match mode {
        ConnectMode::AtMost => connect_pipeline(g, x, y, sigma, lambda, d, params),
        ConnectMode::Exactly(k) => connect_exact(g, x, y, sigma, k, params),
    }
}

fn connect_pipeline(
    g: &LineGraph,
    x: VertexId,
    y: VertexId,
    sigma: &Permutation,
    lambda: Rational,
    d: Rational,
    params: &SearchParams,
) -> SearchOutcome {
    let r = g.r();
    let n = g.len();
    let epsilon = params.resolve_epsilon(r);
    let k_factor = params.resolve_k(r);
    let c4 = params.resolve_c4(r);
    let tau = sigma.reverse();

    let Ok(bp) = balanced_partition(g, x, y, epsilon, params.seed, params.partition_retries) else {
        return SearchOutcome::Failure(Stage::Partition);
    };

    // Cover both endpoint cells; blocks survive the partition at a third
    // of the degree floor, so the covers run at d/3.
    let side1 = bp.side1(g);
    let side2 = bp.side2(g);
    let mut covers: Vec<Vec<(LineGraph, ExpanderCertificate)>> = Vec::new();
    for side in [&side1, &side2] {
        if side.is_empty() {
            return SearchOutcome::Failure(Stage::Cover);
        }
        match expander_cover(
            side,
            lambda,
            d / from_int(3),
            epsilon,
            params.exact_threshold,
        ) {
            Ok(pieces) => covers.push(pieces),
            Err(_) => return SearchOutcome::Failure(Stage::Cover),
        }
    }

    // A piece that is small relative to g and dense in min degree wins
    // immediately as a certificate.
    let dense_floor = c4 * d;
    for (piece, _) in covers.iter().flatten() {
        if from_int(piece.len() as i64) * k_factor <= from_int(n as i64) {
            let delta = piece.min_degree();
            if from_int(delta as i64) >= dense_floor {
                return SearchOutcome::Dense(DenseSubgraph {
                    graph: piece.clone(),
                    size: piece.len(),
                    min_degree: delta,
                    d_basis: d,
                    threshold: dense_floor,
                });
            }
        }
    }

    // Sigma-paths from x, with y's coordinates removed from play.
    let g_no_y = g.delete_coordinates(&g.coordinates(y));
    let x_in = g_no_y
        .vertex_id(g.coords_of(x))
        .expect("x is coordinate-disjoint from y");
    let reach_x = reach(
        &g_no_y,
        x_in,
        sigma,
        params.max_path_size,
        ReachMode::AtMost,
    );
    let reps1 = pick_representatives(&covers[0], &g_no_y, &reach_x);
    if reps1.is_empty() {
        return SearchOutcome::Failure(Stage::SigmaSide);
    }
    let u1 = path_coordinates(reps1.iter().map(|(_, p)| p));

    // Reverse paths from y, avoiding every coordinate used on the x side.
    let g_no_u1 = g.delete_coordinates(&u1);
    let Some(y_in) = g_no_u1.vertex_id(g.coords_of(y)) else {
        return SearchOutcome::Failure(Stage::TauSide);
    };
    let reach_y = reach(
        &g_no_u1,
        y_in,
        &tau,
        params.max_path_size,
        ReachMode::AtMost,
    );
    let reps2 = pick_representatives(&covers[1], &g_no_u1, &reach_y);
    if reps2.is_empty() {
        return SearchOutcome::Failure(Stage::TauSide);
    }
    let u2 = path_coordinates(reps2.iter().map(|(_, p)| p));

    let mut all_used = u1.clone();
    all_used.extend_from_slice(&u2);

    // Regrow inside each piece with every used coordinate forbidden,
    // except the entry representative's own.
    let x_side_paths = grow_inside_pieces(&covers[0], &reps1, &all_used, sigma);
    let y_side_paths = grow_inside_pieces(&covers[1], &reps2, &all_used, &tau);

    // Meet: a sigma-edge from the x-grown set into the y-grown set.
    let y_by_coords: HashMap<Vec<u32>, &SigmaPath> = y_side_paths
        .iter()
        .map(|p| (p.last().to_vec(), p))
        .collect();
    let mut ordered: Vec<&SigmaPath> = x_side_paths.iter().collect();
    ordered.sort_by_key(|p| (p.size(), p.last().to_vec()));
    for pz in ordered {
        let z_id = g.vertex_id(pz.last()).expect("grown vertices live in g");
        for z2 in sigma_neighbors(g, z_id, sigma) {
            let Some(py) = y_by_coords.get(g.coords_of(z2)) else {
                continue;
            };
            let mut vertices = pz.vertices.clone();
            vertices.extend(py.reversed().vertices);
            let candidate = SigmaPath {
                sigma: sigma.clone(),
                vertices,
            };
            if candidate.first() == g.coords_of(x)
                && candidate.last() == g.coords_of(y)
                && validate_sigma_path(g, &candidate)
            {
                debug_assert!(paths_avoid(pz, &u2) && paths_avoid(py, &u1));
                return SearchOutcome::Path(candidate);
            }
        }
    }
    SearchOutcome::Failure(Stage::Meet)
}

/// For each cover piece, the lowest reached vertex together with its
/// stored path from the endpoint. Pieces nobody reached are dropped.
fn pick_representatives(
    pieces: &[(LineGraph, ExpanderCertificate)],
    host: &LineGraph,
    reached: &crate::sigma::ReachResult,
) -> Vec<(usize, SigmaPath)> {
    let mut reps = Vec::new();
    for (idx, (piece, _)) in pieces.iter().enumerate() {
        for v in piece.vertices() {
            let Some(host_id) = host.vertex_id(piece.coords_of(v)) else {
                continue;
            };
            if reached.contains(host_id) {
                let path = reached
                    .path_to(host, host_id)
                    .expect("reached implies a path");
                reps.push((idx, path));
                break;
            }
        }
    }
    reps
}

/// Deduplicated coordinates over a family of paths.
fn path_coordinates<'a>(paths: impl Iterator<Item = &'a SigmaPath>) -> Vec<Coordinate> {
    let mut set = HashSet::new();
    let mut out = Vec::new();
    for p in paths {
        for c in p.coordinates() {
            if set.insert(c) {
                out.push(c);
            }
        }
    }
    out.sort_unstable();
    out
}

fn paths_avoid(p: &SigmaPath, banned: &[Coordinate]) -> bool {
    let set: HashSet<Coordinate> = banned.iter().copied().collect();
    p.coordinates().iter().all(|c| !set.contains(c))
}

/// Inside each represented piece, delete every used coordinate except
/// the representative's own, then grow from the representative and
/// splice its entry path onto everything reached.
fn grow_inside_pieces(
    pieces: &[(LineGraph, ExpanderCertificate)],
    reps: &[(usize, SigmaPath)],
    used: &[Coordinate],
    direction: &Permutation,
) -> Vec<SigmaPath> {
    let mut out = Vec::new();
    for (idx, entry_path) in reps {
        let piece = &pieces[*idx].0;
        let rep_coords = entry_path.last();
        let keep: HashSet<Coordinate> = rep_coords
            .iter()
            .enumerate()
            .map(|(axis, &e)| Coordinate::new(axis, e))
            .collect();
        let banned: Vec<Coordinate> = used.iter().copied().filter(|c| !keep.contains(c)).collect();
        let restricted = piece.delete_coordinates(&banned);
        let Some(rep_id) = restricted.vertex_id(rep_coords) else {
            continue;
        };
        let grown = reach(&restricted, rep_id, direction, None, ReachMode::AtMost);
        for v in grown.reached() {
            let inner = grown
                .path_to(&restricted, v)
                .expect("reached implies a path");
            let mut vertices = entry_path.vertices.clone();
            vertices.extend(inner.vertices.into_iter().skip(1));
            out.push(SigmaPath {
                sigma: direction.clone(),
                vertices,
            });
        }
    }
    out
}

/// Exact-size connector: for every split `a + b = k` it grows size-`a`
/// sigma-paths from `x` (avoiding `y`'s coordinates) and size-`b`
/// reverse paths from `y` (avoiding `x`'s), then looks for a sigma-edge
/// between the two sets. Full validation at the meet rejects any
/// coordinate collision between the two sides; a bounded fallback
/// recomputes the `y` side with one candidate's whole path removed.
fn connect_exact(
    g: &LineGraph,
    x: VertexId,
    y: VertexId,
    sigma: &Permutation,
    k: usize,
    _params: &SearchParams,
) -> SearchOutcome {
    const FALLBACK_CANDIDATES: usize = 8;
    if k < 2 {
        return SearchOutcome::Failure(Stage::Meet);
    }
    let tau = sigma.reverse();
    let g_no_y = g.delete_coordinates(&g.coordinates(y));
    let g_no_x = g.delete_coordinates(&g.coordinates(x));
    let x_in = g_no_y.vertex_id(g.coords_of(x)).unwrap();
    let y_in = g_no_x.vertex_id(g.coords_of(y)).unwrap();
    for a in 1..k {
        let b = k - a;
        let from_x = reach(&g_no_y, x_in, sigma, Some(a), ReachMode::Exactly);
        let x_set = from_x.reached();
        if x_set.is_empty() {
            continue;
        }
        let from_y = reach(&g_no_x, y_in, &tau, Some(b), ReachMode::Exactly);
        let y_paths: HashMap<Vec<u32>, SigmaPath> = from_y
            .reached()
            .into_iter()
            .map(|v| {
                let p = from_y.path_to(&g_no_x, v).unwrap();
                (p.last().to_vec(), p)
            })
            .collect();
        if !y_paths.is_empty() {
            if let Some(path) = meet_exact(g, x, y, sigma, &from_x, &g_no_y, &x_set, &y_paths) {
                return SearchOutcome::Path(path);
            }
        }
        // Fallback: recompute the y side per candidate z with the whole
        // path to z removed, so collisions cannot occur.
        for &z in x_set.iter().take(FALLBACK_CANDIDATES) {
            let pz = from_x.path_to(&g_no_y, z).unwrap();
            let g_z = g.delete_coordinates(&pz.coordinates());
            let Some(y_z) = g_z.vertex_id(g.coords_of(y)) else {
                continue;
            };
            let from_y2 = reach(&g_z, y_z, &tau, Some(b), ReachMode::Exactly);
            let y_paths2: HashMap<Vec<u32>, SigmaPath> = from_y2
                .reached()
                .into_iter()
                .map(|v| {
                    let p = from_y2.path_to(&g_z, v).unwrap();
                    (p.last().to_vec(), p)
                })
                .collect();
            if let Some(path) = meet_exact(g, x, y, sigma, &from_x, &g_no_y, &[z], &y_paths2) {
                return SearchOutcome::Path(path);
            }
        }
    }
    SearchOutcome::Failure(Stage::Meet)
}

fn meet_exact(
    g: &LineGraph,
    x: VertexId,
    y: VertexId,
    sigma: &Permutation,
    from_x: &crate::sigma::ReachResult,
    x_host: &LineGraph,
    x_set: &[VertexId],
    y_paths: &HashMap<Vec<u32>, SigmaPath>,
) -> Option<SigmaPath> {
    for &z in x_set {
        let pz = from_x.path_to(x_host, z)?;
        let z_in_g = g.vertex_id(pz.last()).expect("subgraph vertex lives in g");
        for z2 in sigma_neighbors(g, z_in_g, sigma) {
            let Some(py) = y_paths.get(g.coords_of(z2)) else {
                continue;
            };
            let mut vertices = pz.vertices.clone();
            vertices.extend(py.reversed().vertices);
            let candidate = SigmaPath {
                sigma: sigma.clone(),
                vertices,
            };
            if candidate.first() == g.coords_of(x)
                && candidate.last() == g.coords_of(y)
                && validate_sigma_path(g, &candidate)
            {
                return Some(candidate);
            }
        }
    }
    None
}

/// First coordinate-disjoint pair in scan order, with a seeded random
/// fallback.
fn disjoint_pair(g: &LineGraph, seed: u64, samples: usize) -> Option<(VertexId, VertexId)> {
    let n = g.len();
    for x in 0..n.min(32) as u32 {
        for y in 0..n as u32 {
            if shares_no_coordinate(g, x, y) {
                return Some((x, y));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for _ in 0..samples {
        let x = rng.gen_range(0..n as u32);
        let y = rng.gen_range(0..n as u32);
        if shares_no_coordinate(g, x, y) {
            return Some((x, y));
        }
    }
    None
}

/// Splices a path from `x` to `y` with a return path from `y` to `x`
/// into a cycle: the full coordinate sequence of the first, then the
/// interior of the second. Revalidated from scratch; `None` means the
/// splice does not form a cycle (never expected, but never trusted).
fn splice_cycle(g: &LineGraph, forward: &SigmaPath, back: &SigmaPath) -> Option<TightCycle> {
    let r = g.r();
    let k2 = back.size();
    if forward.size() < 2 || k2 < 2 {
        return None;
    }
    let mut coords = forward.coord_sequence();
    let back_seq = back.coord_sequence();
    coords.extend_from_slice(&back_seq[r..r * (k2 - 1)]);
    let cycle = TightCycle { r, coords };
    if !validate_line_cycle(g, &cycle) {
        return None;
    }
    // Cross-check through the hypergraph-level validator.
    let witness = cycle.to_witness(g);
    if !validate_tight_cycle(&g.to_hypergraph(), &witness) {
        return None;
    }
    Some(cycle)
}

/// Extracts an expander, picks a coordinate-disjoint pair, connects them
/// both ways (the return trip in the graph with the first path's
/// interior coordinates deleted), and splices the two paths into a
/// validated tight cycle. Dense-subgraph certificates pass through.
pub fn assemble_cycle(g: &LineGraph, params: &SearchParams, sigma: &Permutation) -> SearchOutcome {
    if g.is_empty() {
        return SearchOutcome::Failure(Stage::EmptyGraph);
    }
    let lambda = params.resolve_lambda(g.len());
    let d = params.resolve_d(g);
    let Ok((h, cert)) = extract_expander(g, lambda, d, params.exact_threshold) else {
        return SearchOutcome::Failure(Stage::Extract);
    };
    let Some((x, y)) = disjoint_pair(&h, params.seed, params.pair_samples) else {
        return SearchOutcome::Failure(Stage::NoDisjointPair);
    };
    let d_cert = from_int(cert.d.max(1) as i64);
    let forward = match connect(&h, x, y, sigma, lambda, d_cert, ConnectMode::AtMost, params) {
        SearchOutcome::Path(p) => p,
        other => return other,
    };

    // Remove the interior coordinates and connect back.
    let interior = path_coordinates(std::iter::once(&forward))
        .into_iter()
        .filter(|c| {
            let e = c.element;
            h.coords_of(x)[c.part] != e && h.coords_of(y)[c.part] != e
        })
        .collect::<Vec<_>>();
    let h2 = h.delete_coordinates(&interior);
    let (Some(y2), Some(x2)) = (h2.vertex_id(h.coords_of(y)), h2.vertex_id(h.coords_of(x))) else {
        return SearchOutcome::Failure(Stage::Splice);
    };
    let lambda2 = lambda / from_int(2);
    let d2 = from_int(h2.min_degree().max(1) as i64);
    let back = match connect(&h2, y2, x2, sigma, lambda2, d2, ConnectMode::AtMost, params) {
        SearchOutcome::Path(p) => p,
        other => return other,
    };
    match splice_cycle(g, &forward, &back) {
        Some(cycle) => SearchOutcome::Cycle(cycle),
        None => SearchOutcome::Failure(Stage::Splice),
    }
}

/// Like `assemble_cycle` but both legs use exact-size connection so the
/// spliced cycle has exactly `len` coordinates. `len` must be a multiple
/// of r and at least 2r (each leg contributes at least one vertex
/// block).
pub fn find_cycle_of_length(
    g: &LineGraph,
    len: usize,
    params: &SearchParams,
    sigma: &Permutation,
) -> Result<SearchOutcome, SearchError> {
    let r = g.r();
    if !len.is_multiple_of(r) {
        return Err(SearchError::LengthNotDivisible { len, r });
    }
    if len < 2 * r {
        return Err(SearchError::LengthTooShort { len, min: 2 * r });
    }
    if g.is_empty() {
        return Ok(SearchOutcome::Failure(Stage::EmptyGraph));
    }
    let lambda = params.resolve_lambda(g.len());
    let d = params.resolve_d(g);
    let Ok((h, _cert)) = extract_expander(g, lambda, d, params.exact_threshold) else {
        return Ok(SearchOutcome::Failure(Stage::Extract));
    };
    let total = len / r + 2;
    let Some((x, y)) = disjoint_pair(&h, params.seed, params.pair_samples) else {
        return Ok(SearchOutcome::Failure(Stage::NoDisjointPair));
    };
    for k1 in 2..=(total - 2) {
        let k2 = total - k1;
        let forward = match connect(&h, x, y, sigma, lambda, d, ConnectMode::Exactly(k1), params) {
            SearchOutcome::Path(p) => p,
            _ => continue,
        };
        let interior: Vec<Coordinate> = path_coordinates(std::iter::once(&forward))
            .into_iter()
            .filter(|c| {
                let e = c.element;
                h.coords_of(x)[c.part] != e && h.coords_of(y)[c.part] != e
            })
            .collect();
        let h2 = h.delete_coordinates(&interior);
        let (Some(y2), Some(x2)) = (h2.vertex_id(h.coords_of(y)), h2.vertex_id(h.coords_of(x)))
        else {
            continue;
        };
        let back = match connect(
            &h2,
            y2,
            x2,
            sigma,
            lambda,
            d,
            ConnectMode::Exactly(k2),
            params,
        ) {
            SearchOutcome::Path(p) => p,
            _ => continue,
        };
        if let Some(cycle) = splice_cycle(g, &forward, &back) {
            debug_assert_eq!(cycle.len(), len);
            return Ok(SearchOutcome::Cycle(cycle));
        }
    }
    Ok(SearchOutcome::Failure(Stage::Meet))
}

/// One level of the density-increment chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub n: usize,
    pub density: Rational,
    pub min_degree: usize,
    /// Set when this level descended into a dense subgraph:
    /// `(d_basis, c4 * d_basis)` in force at the firing connector.
    pub dense_fire: Option<(Rational, Rational)>,
}

#[derive(Debug, Clone)]
pub struct IncrementResult {
    pub outcome: SearchOutcome,
    pub chain: Vec<ChainStep>,
}

/// The outer loop: assemble a cycle, and on a dense-subgraph certificate
/// recurse into it (its vertex count shrinks by the configured factor at
/// every descent, so the chain is finite). Stops with a cycle, an empty
/// graph, a graph with fewer vertices than its density, or the first
/// stage failure; the full chain is returned alongside.
pub fn density_increment_search(g: &LineGraph, params: &SearchParams) -> IncrementResult {
    let sigma = Permutation::identity(g.r());
    let mut chain: Vec<ChainStep> = Vec::new();
    let mut cur = g.clone();
    loop {
        if cur.is_empty() {
            return IncrementResult {
                outcome: SearchOutcome::Failure(Stage::EmptyGraph),
                chain,
            };
        }
        let stats = cur.stats();
        chain.push(ChainStep {
            n: stats.num_vertices,
            density: stats.density,
            min_degree: stats.min_degree,
            dense_fire: None,
        });
        if from_int(stats.num_vertices as i64) < stats.density {
            return IncrementResult {
                outcome: SearchOutcome::Failure(Stage::DensityAboveSize),
                chain,
            };
        }
        match assemble_cycle(&cur, params, &sigma) {
            SearchOutcome::Cycle(c) => {
                return IncrementResult {
                    outcome: SearchOutcome::Cycle(c),
                    chain,
                };
            }
            SearchOutcome::Dense(ds) => {
                chain.last_mut().unwrap().dense_fire = Some((ds.d_basis, ds.threshold));
                cur = ds.graph;
            }
            SearchOutcome::Failure(stage) => {
                return IncrementResult {
                    outcome: SearchOutcome::Failure(stage),
                    chain,
                };
            }
            SearchOutcome::Path(_) => unreachable!("assemble never returns a bare path"),
        }
    }
}
