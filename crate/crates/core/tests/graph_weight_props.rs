use proptest::prelude::*;
use toric_core::graph::{self, named, Graph};
use toric_core::linalg;
use toric_core::weight::{
    compare_curve_t_with_graph, consani_deligne, curve_chow_data, monodromy_matrix, verify_n_isogeny,
};

/// Connected multigraph: a random spanning tree plus extra edges, loops allowed.
fn connected_graph() -> impl Strategy<Value = Graph> {
    (1usize..=5)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<prop::sample::Index>(), n.saturating_sub(1)),
                proptest::collection::vec((0..n, 0..n), 0..5),
            )
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(k, ix)| (ix.index(k + 1), k + 1)).collect();
            edges.extend(extra);
            Graph::from_indices(n, &edges)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curve_t_groups_match_graph(g in connected_graph()) {
        let t = compare_curve_t_with_graph(&g).unwrap();
        prop_assert_eq!(t.t_harm.free_rank, g.cycle_rank());
        prop_assert_eq!(t.t_h1.free_rank, g.cycle_rank());
    }

    #[test]
    fn monodromy_determinant_is_cycle_pairing_determinant(g in connected_graph()) {
        let data = curve_chow_data(&g);
        let n = monodromy_matrix(&data, -1, 1).unwrap();
        let gram = graph::cycle_pairing_matrix(&graph::harmonic_basis(&g));
        if g.cycle_rank() > 0 {
            prop_assert_eq!(linalg::determinant(&n).unwrap().abs(), linalg::determinant(&gram).unwrap().abs());
            prop_assert!(verify_n_isogeny(&data, 1, 0).unwrap().passed());
        }
    }

    #[test]
    fn consani_exact_sequence(g in connected_graph(), k in 0i64..=1, r in 0i64..=2) {
        let c = consani_deligne(&curve_chow_data(&g), k, r).unwrap();
        prop_assert!(c.les_holds());
        if k + 1 < 2 * r && c.ker_dim == 0 {
            prop_assert_eq!(c.dimension, c.coker_dim);
        }
    }
}

#[test]
fn cycle_examples() {
    for n in 1..=6 {
        let data = curve_chow_data(&named::cycle(n));
        let m = monodromy_matrix(&data, -1, 1).unwrap();
        assert_eq!(m.to_rows(), vec![vec![n as i128]]);
        assert_eq!(consani_deligne(&data, 1, 1).unwrap().dimension, 1);
    }
    let theta = curve_chow_data(&named::theta());
    assert_eq!(linalg::determinant(&monodromy_matrix(&theta, -1, 1).unwrap()).unwrap().abs(), 3);
}
