use levelraise::cosets::{
    level_matrix, map_i, map_iplus, old_new_decomposition, pairing, random_biregular, CosetGraph,
    EdgeForm, FormTriple,
};
use levelraise::kernel::{rational, Rational};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = CosetGraph> {
    (1usize..=3, any::<u64>()).prop_map(|(n0, seed)| random_biregular(2, n0, seed).unwrap())
}

fn values(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=3).prop_map(|(a, b)| rational(a, b)), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn text_round_trip(g in graph()) {
        prop_assert_eq!(CosetGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn old_and_new_dimensions(g in graph(), h in graph()) {
        let u = g.disjoint_union(&h).unwrap();
        prop_assert_eq!(u.num_components(), g.num_components() + h.num_components());
        prop_assert!(!u.is_connected());
        for x in [&g, &u] {
            let d = old_new_decomposition(x).unwrap();
            prop_assert!(d.orthogonal && d.spans_everything);
            prop_assert_eq!(d.old_dim() + d.new_dim(), x.num_edges());
            prop_assert_eq!(d.old_dim(), x.n0() + x.n1() - x.num_components());
        }
    }

    #[test]
    fn i_and_iplus_are_adjoint(
        (g, f0, f1, m) in graph().prop_flat_map(|g| {
            let (a, b, e) = (g.n0(), g.n1(), g.num_edges());
            (Just(g), values(a), values(b), values(e))
        })
    ) {
        let t = FormTriple { f0, f1 };
        let e = EdgeForm { m };
        let lhs = pairing(&map_i(&t, &g).unwrap().m, &e.m, &()).unwrap();
        let back = map_iplus(&e, &g, &()).unwrap();
        let rhs = pairing(&t.f0, &back.f0, &()).unwrap() + pairing(&t.f1, &back.f1, &()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn level_matrix_identity_on_random_graphs(g in graph()) {
        prop_assert!(level_matrix(&g).unwrap().passed());
    }
}

#[test]
fn unions_need_matching_l() {
    let a = CosetGraph::complete_bipartite(2, 1, 3, 3).unwrap();
    let b = CosetGraph::complete_bipartite(3, 1, 7, 4).unwrap();
    assert!(a.disjoint_union(&b).is_err());
}
