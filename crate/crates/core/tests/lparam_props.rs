use levelraise::kernel::{int, Matrix, Rational};
use levelraise::lparam::{
    component_representatives, components_through, degeneration_witness, jordan_partition,
    nilpotent_orbits, partitions, solution_space, Partition,
};
use levelraise::Exec;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn conjugator(n: usize, ops: &[(usize, usize, i64)]) -> Matrix<Rational> {
    let mut g = Matrix::identity(n, ());
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let e = Matrix::from_fn(n, n, (), |r, k| {
            if r == k {
                Rational::one()
            } else if r == i && k == j {
                int(c)
            } else {
                Rational::zero()
            }
        });
        g = g.mul(&e).unwrap();
    }
    g
}

#[test]
fn partition_counts() {
    let counts: Vec<usize> = (1..=7).map(|n| partitions(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
    let p3: Vec<String> = partitions(3).iter().map(|p| p.to_string()).collect();
    assert_eq!(p3, vec!["(3)", "(2,1)", "(1,1,1)"]);
}

#[test]
fn orbit_representatives_have_their_type() {
    for n in 1..=5 {
        for (p, m) in nilpotent_orbits(n) {
            assert_eq!(jordan_partition(&m).unwrap(), p);
        }
    }
}

#[test]
fn representatives_carry_witnesses() {
    let l = int(3);
    let s = Matrix::diagonal(&[int(9), int(3), int(3), int(1)], ());
    let rep = components_through(&s, &l, Exec::Sequential).unwrap();
    let reps = component_representatives(&s, &l, Exec::Sequential).unwrap();
    assert!(rep.exact);
    assert_eq!(rep.realized.len(), reps.len());
    for (p, n) in &reps {
        assert_eq!(&jordan_partition(n).unwrap(), p);
        assert!(degeneration_witness(&s, n, &l).unwrap().verified());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jordan_type_is_conjugation_invariant(
        n in 1usize..=5,
        pick in 0usize..100,
        ops in prop::collection::vec((0usize..5, 0usize..5, -2i64..=2), 0..10),
    ) {
        let all = partitions(n);
        let p: &Partition = &all[pick % all.len()];
        let g = conjugator(n, &ops);
        let conj = g.mul(&p.jordan_matrix()).unwrap().mul(&g.inverse().unwrap()).unwrap();
        prop_assert_eq!(&jordan_partition(&conj).unwrap(), p);
    }

    #[test]
    fn solution_dim_counts_ratio_pairs(
        exps in prop::collection::vec(0u32..=3, 1..=4),
        l in prop::sample::select(vec![2i64, 3, 5]),
    ) {
        let d: Vec<Rational> = exps.iter().map(|&e| int(l.pow(e))).collect();
        let s = Matrix::diagonal(&d, ());
        let lr = int(l);
        let pairs = d.iter().flat_map(|a| d.iter().map(move |b| (a, b))).filter(|(a, b)| **a == *b * &lr).count();
        let basis = solution_space(&s, &lr).unwrap();
        prop_assert_eq!(basis.len(), pairs);
        for b in &basis {
            prop_assert_eq!(s.mul(b).unwrap(), b.mul(&s).unwrap().scale(&lr));
        }
    }

    #[test]
    fn dominance_is_a_partial_order(n in 1usize..=6, a in 0usize..50, b in 0usize..50) {
        let all = partitions(n);
        let (p, q) = (&all[a % all.len()], &all[b % all.len()]);
        prop_assert!(p.dominates(p));
        if p.dominates(q) && q.dominates(p) {
            prop_assert_eq!(p, q);
        }
        prop_assert!(all[0].dominates(p));
        prop_assert!(p.dominates(all.last().unwrap()));
    }
}
