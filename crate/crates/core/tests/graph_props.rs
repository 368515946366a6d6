mod common;

use common::{brute_dominating, brute_induced_path, random_graph, set_of};
use makerbreaker::graph::{
    contains_induced_k_path, er_graph, flower_snark, grid_graph, is_dominating, Graph, VertexSet,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_and_mask() -> impl Strategy<Value = (Graph, Vec<bool>)> {
    (1usize..=10, 0.0f64..=1.0, any::<u64>()).prop_flat_map(|(n, p, seed)| {
        let g = random_graph(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
        (Just(g), proptest::collection::vec(any::<bool>(), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn induced_path_matches_brute_force((g, mask) in graph_and_mask(), k in 1usize..=5) {
        prop_assert_eq!(contains_induced_k_path(&g, &set_of(&mask), k), brute_induced_path(&g, &mask, k));
    }

    #[test]
    fn domination_matches_brute_force((g, mask) in graph_and_mask()) {
        prop_assert_eq!(is_dominating(&g, &set_of(&mask)), brute_dominating(&g, &mask));
    }

    #[test]
    fn domination_is_monotone((g, mask) in graph_and_mask(), extra in 0usize..10) {
        let mut bigger = mask.clone();
        bigger[extra % g.n()] = true;
        if is_dominating(&g, &set_of(&mask)) {
            prop_assert!(is_dominating(&g, &set_of(&bigger)));
        }
    }

    #[test]
    fn shorter_paths_exist_inside_longer_ones((g, mask) in graph_and_mask(), k in 2usize..=5) {
        if contains_induced_k_path(&g, &set_of(&mask), k) {
            prop_assert!(contains_induced_k_path(&g, &set_of(&mask), k - 1));
        }
    }

    #[test]
    fn edge_list_round_trips(n in 1usize..30, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = er_graph(n, p, seed).unwrap();
        prop_assert_eq!(&Graph::from_edge_list(&g.to_edge_list()).unwrap(), &g);
        prop_assert_eq!(&er_graph(n, p, seed).unwrap(), &g);
    }

    #[test]
    fn grid_degrees_sum_to_twice_the_edges(rows in 1usize..15, cols in 1usize..15) {
        let g = grid_graph(rows, cols).unwrap();
        let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
        prop_assert_eq!(g.edge_count(), rows * (cols - 1) + cols * (rows - 1));
    }
}

#[test]
fn flower_snarks_are_cubic_and_match_fixtures() {
    for t in [5, 7, 9, 11] {
        let g = flower_snark(t).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4 * t, 6 * t));
        assert!((0..g.n()).all(|v| g.degree(v) == 3));
    }
    for t in [5, 7] {
        let path = format!("{}/fixtures/flower_snark_{t}.txt", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(Graph::from_edge_list(&text).unwrap(), flower_snark(t).unwrap());
    }
}

#[test]
fn empty_marking_dominates_nothing_but_the_empty_graph() {
    let g = grid_graph(2, 3).unwrap();
    assert!(!is_dominating(&g, &VertexSet::empty()));
    assert!(is_dominating(&g, &VertexSet::all(6)));
}
