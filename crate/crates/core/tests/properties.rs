//! Property tests for the structural invariants.

use proptest::prelude::*;

use tightcycle::expander::peel;
use tightcycle::format::{parse_hypergraph, serialize_hypergraph};
use tightcycle::hypergraph::make_r_partite;
use tightcycle::linegraph::{from_hypergraph, Coordinate, LineGraph};
use tightcycle::oracle::gen_random_rpartite;
use tightcycle::rational::{from_int, ratio};
use tightcycle::sigma::{reach, sigma_boundary, ForbiddenMap, Permutation, ReachMode};
use tightcycle::Hypergraph;

fn small_partite() -> impl Strategy<Value = Hypergraph> {
    (2usize..=3, 1usize..=4, 0.0f64..=1.0, any::<u64>())
        .prop_map(|(r, m, p, seed)| gen_random_rpartite(m, r, p, seed))
}

fn small_linegraph() -> impl Strategy<Value = LineGraph> {
    small_partite().prop_map(|h| from_hypergraph(&h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypergraph_text_roundtrips(h in small_partite()) {
        let text = serialize_hypergraph(&h);
        let back = parse_hypergraph(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(serialize_hypergraph(&back), text);
    }

    #[test]
    fn blocks_partition_and_density_identity(g in small_linegraph()) {
        let n = g.len();
        for axis in 0..g.r() {
            let total: usize = g.blocks_on_axis(axis).iter().map(|b| b.len()).sum();
            prop_assert_eq!(total, n);
        }
        let s = g.stats();
        if n > 0 {
            prop_assert_eq!(s.density, ratio((g.r() * n) as i64, s.num_blocks as i64));
            // Average block size is at least the minimum block size.
            prop_assert!(s.density >= from_int(s.min_degree as i64));
        } else {
            prop_assert_eq!(s.density, from_int(0));
        }
    }

    #[test]
    fn linegraph_hypergraph_roundtrip(g in small_linegraph()) {
        let back = from_hypergraph(&g.to_hypergraph()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn boundary_monotone_in_sources_antitone_in_bans(
        g in small_linegraph(),
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..6),
        ban_part in 0usize..3,
        ban_elem in 0u32..4,
    ) {
        prop_assume!(g.len() >= 2);
        let sigma = Permutation::identity(g.r());
        let mut xs: Vec<u32> = picks.iter().map(|i| i.index(g.len()) as u32).collect();
        xs.sort_unstable();
        xs.dedup();
        let smaller = &xs[..xs.len().div_ceil(2)];

        let empty = ForbiddenMap::empty();
        let b_small = sigma_boundary(&g, smaller, &sigma, &empty);
        let b_full = sigma_boundary(&g, &xs, &sigma, &empty);
        for v in &b_small {
            prop_assert!(b_full.contains(v));
        }

        let mut banned = ForbiddenMap::empty();
        let part = ban_part % g.r();
        let elem = ban_elem % g.part_sizes()[part] as u32;
        for &x in &xs {
            banned.insert(x, [Coordinate::new(part, elem)]);
        }
        let b_banned = sigma_boundary(&g, &xs, &sigma, &banned);
        for v in &b_banned {
            prop_assert!(b_full.contains(v));
        }
    }

    #[test]
    fn reach_paths_validate_and_nest(g in small_linegraph(), cap in 1usize..5) {
        prop_assume!(!g.is_empty());
        let sigma = Permutation::identity(g.r());
        let shorter = reach(&g, 0, &sigma, Some(cap), ReachMode::AtMost);
        let longer = reach(&g, 0, &sigma, Some(cap + 1), ReachMode::AtMost);
        for v in shorter.reached() {
            prop_assert!(longer.contains(v));
            let p = shorter.path_to(&g, v).unwrap();
            prop_assert!(tightcycle::sigma::validate_sigma_path(&g, &p));
        }
    }

    #[test]
    fn peel_meets_degree_and_density_bounds(g in small_linegraph()) {
        prop_assume!(!g.is_empty());
        let dens = g.density();
        let d = dens.floor().to_integer().max(1);
        let out = peel(&g, from_int(d)).unwrap();
        prop_assert!(out.density() >= dens);
        let delta = out.min_degree() as i64;
        // Integer min degree at least d/r means delta >= ceil(d/r).
        prop_assert!(delta >= (d + g.r() as i64 - 1) / g.r() as i64);
    }

    #[test]
    fn partite_extraction_meets_expectation_bound(
        edges in proptest::collection::btree_set(
            proptest::collection::btree_set(0u32..9, 3),
            0..25,
        ),
        seed in any::<u64>(),
    ) {
        let edges: Vec<Vec<u32>> = edges
            .into_iter()
            .map(|e| e.into_iter().collect::<Vec<u32>>())
            .collect();
        let m = edges.len();
        let h = Hypergraph::new(3, 9, edges, None).unwrap();
        let out = make_r_partite(&h, seed, 8);
        // ceil(r!/r^r * m) with r = 3.
        let bound = (6 * m).div_ceil(27);
        prop_assert!(out.edge_count() >= bound);
        prop_assert!(out.is_partitioned());
    }
}
