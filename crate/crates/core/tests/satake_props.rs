use std::collections::BTreeSet;

use levelraise::kernel::{int, rational, Rational};
use levelraise::satake::{
    classify_principal_series, deg_inert_tl, gaussian_binomial, spherical_eigenvalue,
    very_eisenstein_check, PrincipalSeries, SatakeParam, SplitEigensystem,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

/// A finite field given by addition and multiplication tables on `0..q`.
struct Field {
    q: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

impl Field {
    fn prime(p: usize) -> Self {
        Field {
            q: p,
            add: (0..p)
                .map(|a| (0..p).map(|b| (a + b) % p).collect())
                .collect(),
            mul: (0..p)
                .map(|a| (0..p).map(|b| a * b % p).collect())
                .collect(),
        }
    }

    /// `F_4 = F_2[x]/(x² + x + 1)`, element `a + bx` encoded as `a + 2b`.
    fn four() -> Self {
        let mul_poly = |a: usize, b: usize| {
            let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
            let c0 = a0 * b0 + a1 * b1;
            let c1 = a0 * b1 + a1 * b0 + a1 * b1;
            (c0 % 2) | ((c1 % 2) << 1)
        };
        Field {
            q: 4,
            add: (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
            mul: (0..4)
                .map(|a| (0..4).map(|b| mul_poly(a, b)).collect())
                .collect(),
        }
    }

    fn vectors(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn span(&self, gens: &[&Vec<usize>], n: usize) -> BTreeSet<Vec<usize>> {
        let mut space = BTreeSet::from([vec![0; n]]);
        for g in gens {
            let mut next = BTreeSet::new();
            for v in &space {
                for c in 0..self.q {
                    let w: Vec<usize> = v
                        .iter()
                        .zip(g.iter())
                        .map(|(&a, &b)| self.add[a][self.mul[c][b]])
                        .collect();
                    next.insert(w);
                }
            }
            space = next;
        }
        space
    }

    /// Number of `i`-dimensional subspaces of `F^n`, by enumerating spans of
    /// all `i`-subsets of nonzero vectors.
    fn count_subspaces(&self, n: usize, i: usize) -> usize {
        let vs: Vec<Vec<usize>> = self
            .vectors(n)
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        let size = self.q.pow(i as u32);
        let mut found = BTreeSet::new();
        let mut chosen = Vec::new();
        self.collect(&vs, 0, i, n, size, &mut chosen, &mut found);
        found.len()
    }

    #[allow(clippy::too_many_arguments)]
    fn collect(
        &self,
        vs: &[Vec<usize>],
        from: usize,
        left: usize,
        n: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        found: &mut BTreeSet<BTreeSet<Vec<usize>>>,
    ) {
        if left == 0 {
            let gens: Vec<&Vec<usize>> = chosen.iter().map(|&k| &vs[k]).collect();
            let s = self.span(&gens, n);
            if s.len() == size {
                found.insert(s);
            }
            return;
        }
        for k in from..vs.len() {
            chosen.push(k);
            self.collect(vs, k + 1, left - 1, n, size, chosen, found);
            chosen.pop();
        }
    }
}

#[test]
fn gaussian_binomial_counts_subspaces() {
    let fields = [
        (2u64, Field::prime(2)),
        (3, Field::prime(3)),
        (4, Field::four()),
    ];
    for (q, f) in &fields {
        for n in 0..=3usize {
            for i in 0..=n {
                let brute = f.count_subspaces(n, i);
                let formula = gaussian_binomial(n as u32, i as u32, *q).unwrap();
                assert_eq!(formula, BigInt::from(brute), "q={} n={} i={}", q, n, i);
            }
        }
    }
}

#[test]
fn inert_degree_counts_distance_two() {
    for l in [2u64, 3, 5, 7] {
        let deg = deg_inert_tl(l).unwrap();
        // l³+1 special neighbors, each with l further hyperspecial neighbors.
        assert_eq!(deg, BigInt::from((l * l * l + 1) * l));
    }
    assert!(deg_inert_tl(9).is_err());
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=40)
        .prop_filter("nonzero", |(a, _)| *a != 0)
        .prop_map(|(a, b)| rational(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_symmetry(n in 0u32..=7, i in 0u32..=7, q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9])) {
        prop_assume!(i <= n);
        prop_assert_eq!(
            gaussian_binomial(n, i, q).unwrap(),
            gaussian_binomial(n, n - i, q).unwrap()
        );
    }

    #[test]
    fn lambda_symmetric_and_dictionary(alpha in nonzero_rational(), l in prop::sample::select(vec![2u64, 3, 5])) {
        let s = SatakeParam::new(alpha, l).unwrap();
        let lambda = spherical_eigenvalue(&s);
        prop_assert_eq!(&lambda, &spherical_eigenvalue(&s.inverse()));
        let li = l as i64;
        let top = int(li * (li * li * li + 1));
        let bottom = int(-(li * li * li + 1));
        let class = classify_principal_series(&s);
        prop_assert_eq!(class == PrincipalSeries::CharacterPlusSteinberg, lambda == top);
        prop_assert_eq!(class == PrincipalSeries::TwoUnramifiedFactors, lambda == bottom);
    }

    #[test]
    fn very_eisenstein_determines_psi(psi in nonzero_rational(), other in nonzero_rational(), q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let qi = q as i64;
        let deg = int(1 + qi + qi * qi);
        let inv = psi.recip();
        let es = SplitEigensystem {
            q,
            t1: &deg * &inv,
            t2: &deg * &inv * &inv,
            t3: &inv * &inv * &inv,
        };
        prop_assert!(very_eisenstein_check(&es, &psi).unwrap());
        prop_assert_eq!(very_eisenstein_check(&es, &other).unwrap(), other == psi);
        prop_assert!(very_eisenstein_check(&es, &Rational::zero()).is_err());
    }
}
