mod common;

use std::collections::{BTreeSet, HashSet};

use common::{sampled_instance, sampled_pair_instance};
use proptest::prelude::*;
use qlext_core::fixed_order::{build_conflict_graph, fixed_order_min_pages};
use qlext_core::gen::{gen_random, DeletionPolicy, RandomGenConfig};
use qlext_core::io::{InstanceFile, SolutionFile, SolutionStats};
use qlext_core::oracle::{solve_brute_force, OracleBudget};
use qlext_core::{
    enumerate_placements, is_nesting, placement_count, solve, solve_2sat, validate_layout, Algorithm, Edge, Graph,
    Lit, PageSet, SolverConfig, SpineOrder, TwoSatFormula, VertexId,
};

fn solvable(inst: &qlext_core::Instance) -> bool {
    solve_brute_force(inst, &OracleBudget::default()).unwrap().is_solved()
}

fn spine_and_edge() -> impl Strategy<Value = (Vec<usize>, (usize, usize), (usize, usize))> {
    (4usize..9).prop_flat_map(|n| {
        let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), pair.clone(), pair)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn nesting_is_strict_containment((order, (a, b), (c, d)) in spine_and_edge()) {
        let ids: Vec<VertexId> = order.iter().map(|&i| VertexId::from(i)).collect();
        let spine = SpineOrder::new(ids).unwrap();
        let (e, f) = (Edge::new(VertexId::from(a), VertexId::from(b)), Edge::new(VertexId::from(c), VertexId::from(d)));
        let span = |e: Edge| spine.span(e).unwrap();
        let ((l1, r1), (l2, r2)) = (span(e), span(f));
        let expected = (l1 < l2 && r2 < r1) || (l2 < l1 && r1 < r2);
        prop_assert_eq!(is_nesting(&spine, e, f).unwrap(), expected);
        prop_assert_eq!(is_nesting(&spine, f, e).unwrap(), expected);
        if e.shares_endpoint(f) {
            prop_assert!(!expected);
        }
    }

    #[test]
    fn page_sets_behave_like_sets(ell in 1usize..130, ops in prop::collection::vec((any::<bool>(), 0usize..130), 0..60)) {
        let mut set = PageSet::empty(ell);
        let mut model = BTreeSet::new();
        for (insert, p) in ops {
            let p = p % ell;
            if insert { set.insert(p); model.insert(p); } else { set.remove(p); model.remove(&p); }
        }
        prop_assert_eq!(set.iter().collect::<Vec<_>>(), model.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(set.len(), model.len());
        prop_assert_eq!(set.first(), model.first().copied());
        prop_assert!(set.is_subset(&PageSet::full(ell)));
    }

    #[test]
    fn two_sat_matches_exhaustive_search(
        vars in 1usize..8,
        raw in prop::collection::vec((0u32..8, any::<bool>(), 0u32..8, any::<bool>()), 0..20),
    ) {
        let lit = |v: u32, pos: bool| {
            let v = v % vars as u32;
            if pos { Lit::pos(v) } else { Lit::neg(v) }
        };
        let clauses = raw.iter().map(|&(a, pa, b, pb)| (lit(a, pa), lit(b, pb))).collect();
        let f = TwoSatFormula::from_clauses(vars, clauses).unwrap();
        let exists = (0u32..1 << vars).any(|mask| {
            let assignment: Vec<bool> = (0..vars).map(|i| mask >> i & 1 == 1).collect();
            f.is_satisfied_by(&assignment)
        });
        match solve_2sat(&f) {
            Some(assignment) => prop_assert!(f.is_satisfied_by(&assignment)),
            None => prop_assert!(!exists),
        }
    }

    #[test]
    fn placements_are_distinct_extensions(seed in 0u64..5000) {
        let inst = sampled_instance(seed, 8, 2, 4);
        let mut seen = HashSet::new();
        for p in enumerate_placements(&inst) {
            let spine = p.spine(&inst);
            prop_assert!(inst.spine_extends_h(&spine));
            prop_assert!(seen.insert(spine.order().to_vec()));
        }
        prop_assert_eq!(seen.len() as u128, placement_count(inst.old_order().len(), inst.n_add()));
    }

    #[test]
    fn every_solver_returns_a_valid_extension(seed in 0u64..100_000) {
        let inst = if seed % 3 == 0 { sampled_pair_instance(seed, 8, 3, 6) } else { sampled_instance(seed, 8, 3, 6) };
        let truth = solvable(&inst);
        for algo in Algorithm::ALL {
            let Ok(report) = solve(&inst, algo, &SolverConfig::default()) else { continue };
            prop_assert_eq!(report.definitive(), Some(truth), "{}", algo);
            if let Some(layout) = report.layout() {
                prop_assert!(inst.is_solution(layout).unwrap());
            }
        }
    }

    #[test]
    fn dropping_new_edges_keeps_solvability(seed in 0u64..100_000, mask in any::<u16>()) {
        let inst = sampled_instance(seed, 7, 3, 6);
        if solvable(&inst) {
            let keep: Vec<usize> = inst.new_edge_ids().filter(|&id| mask >> (id % 16) & 1 == 1).collect();
            prop_assert!(solvable(&inst.restrict_new_edges(&keep).unwrap()));
        }
    }

    #[test]
    fn extra_page_keeps_solvability(seed in 0u64..100_000) {
        let inst = sampled_instance(seed, 7, 2, 6);
        if solvable(&inst) {
            let mut file = InstanceFile::from_instance(&inst, None);
            file.ell += 1;
            prop_assert!(solvable(&file.to_instance().unwrap()));
        }
    }

    #[test]
    fn files_round_trip(seed in 0u64..100_000) {
        let inst = sampled_instance(seed, 8, 3, 6);
        let file = InstanceFile::from_instance(&inst, None);
        let text = file.to_json();
        let parsed = InstanceFile::from_json(&text).unwrap();
        prop_assert_eq!(&parsed, &file);
        let rebuilt = parsed.to_instance().unwrap();
        prop_assert_eq!(InstanceFile::from_instance(&rebuilt, None).to_json(), text);
        if let Some(layout) = solve(&inst, Algorithm::Auto, &SolverConfig::default()).unwrap().layout() {
            let sol = SolutionFile::from_layout(&inst, layout, "auto", SolutionStats::default());
            let back = SolutionFile::from_json(&sol.to_json()).unwrap();
            prop_assert_eq!(&back.load_against(&rebuilt).unwrap(), layout);
        }
    }

    #[test]
    fn min_pages_equals_largest_rainbow(
        n in 2usize..8,
        raw in prop::collection::vec((0usize..8, 0usize..8), 0..14),
    ) {
        let vertices: Vec<VertexId> = (0..n).map(VertexId::from).collect();
        let mut edges: Vec<Edge> = raw
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| Edge::new(vertices[a], vertices[b]))
            .collect();
        edges.sort_unstable_by_key(|e| e.endpoints());
        edges.dedup();
        let g = Graph::new(vertices.clone(), edges).unwrap();
        let spine = SpineOrder::new(vertices).unwrap();
        let (pages, witness) = fixed_order_min_pages(&g, &spine).unwrap();
        prop_assert!(validate_layout(&g, &witness).unwrap().ok());
        // Largest clique of the conflict graph, by subsets.
        let cg = build_conflict_graph(&g, &spine).unwrap();
        let m = cg.node_count();
        let clique = (0u32..1 << m)
            .filter(|&s| (0..m).all(|a| (a + 1..m).all(|b| s >> a & 1 == 0 || s >> b & 1 == 0 || cg.is_adjacent(a, b))))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0);
        prop_assert_eq!(pages, clique);
    }

    #[test]
    fn generated_instances_keep_their_promise(seed in 0u64..10_000, vertices in 3usize..8, pages in 1usize..3) {
        let cfg = RandomGenConfig {
            vertex_count: vertices,
            edge_probability: 0.5,
            page_count: pages,
            deletion: DeletionPolicy { vertices: 1, edges: 1 },
            scramble_h: seed % 2 == 0,
            seed,
        };
        let (a, b) = match (gen_random(&cfg), gen_random(&cfg)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(x), Err(y)) => {
                prop_assert_eq!(x.to_string(), y.to_string());
                return Ok(());
            }
            _ => return Err(TestCaseError::fail("generator is not deterministic")),
        };
        prop_assert_eq!(
            InstanceFile::from_instance(&a.instance, None).to_json(),
            InstanceFile::from_instance(&b.instance, None).to_json()
        );
        if a.known_solvable {
            prop_assert!(solvable(&a.instance));
        }
    }
}
