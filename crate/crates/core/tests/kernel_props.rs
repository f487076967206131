use levelraise::kernel::{
    rational, smith_decomposition, smith_normal_form, Matrix, PAdic, PAdicCtx, Rational, Scalar,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize, data: Vec<i64>) -> Matrix<BigInt> {
    Matrix::from_fn(rows, cols, (), |i, j| BigInt::from(data[i * cols + j]))
}

/// Product of elementary integer operations, hence unimodular.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Matrix<BigInt> {
    let mut g = Matrix::identity(n, ());
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        let e = if i == j {
            // Sign flip of a row.
            Matrix::from_fn(n, n, (), |r, k| {
                if r == k {
                    BigInt::from(if r == i { -1 } else { 1 })
                } else {
                    BigInt::zero()
                }
            })
        } else {
            Matrix::from_fn(n, n, (), |r, k| {
                if r == k {
                    BigInt::one()
                } else if r == i && k == j {
                    BigInt::from(c)
                } else {
                    BigInt::zero()
                }
            })
        };
        g = g.mul(&e).unwrap();
    }
    g
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-6i64..=6, r * c)))
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_is_unimodular_invariant((r, c, data) in small_matrix(), left in ops(), right in ops()) {
        let m = int_matrix(r, c, data);
        let u = unimodular(r, &left);
        let v = unimodular(c, &right);
        let moved = u.mul(&m).unwrap().mul(&v).unwrap();
        prop_assert_eq!(smith_normal_form(&m), smith_normal_form(&moved));
    }

    #[test]
    fn snf_transforms_diagonalize((r, c, data) in small_matrix()) {
        let m = int_matrix(r, c, data);
        let d = smith_decomposition(&m);
        let prod = d.left.mul(&m).unwrap().mul(&d.right).unwrap();
        for i in 0..r {
            for j in 0..c {
                let expected = if i == j { d.invariants[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(prod.get(i, j), &expected);
            }
        }
        for w in d.invariants.windows(2) {
            prop_assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
        prop_assert!(d.left.mul(&d.left_inv).unwrap() == Matrix::identity(r, ()));
    }

    #[test]
    fn cayley_hamilton(n in 1usize..=4, data in prop::collection::vec((-9i64..=9, 1i64..=4), 16)) {
        let m = Matrix::from_fn(n, n, (), |i, j| {
            let (a, b) = data[i * 4 + j];
            rational(a, b)
        });
        let chi = m.char_poly().unwrap();
        prop_assert_eq!(chi.degree(), Some(n));
        prop_assert!(chi.eval_matrix(&m).unwrap().is_zero());
        // Constant term is (−1)^n det.
        let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
        prop_assert_eq!(chi.coeff(0), sign * m.det().unwrap());
    }

    #[test]
    fn det_is_multiplicative(a in prop::collection::vec(-5i64..=5, 9), b in prop::collection::vec(-5i64..=5, 9)) {
        let ma = Matrix::from_fn(3, 3, (), |i, j| Rational::from_integer(a[i * 3 + j].into()));
        let mb = Matrix::from_fn(3, 3, (), |i, j| Rational::from_integer(b[i * 3 + j].into()));
        prop_assert_eq!(
            ma.mul(&mb).unwrap().det().unwrap(),
            ma.det().unwrap() * mb.det().unwrap()
        );
    }

    #[test]
    fn padic_ring_laws(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        xs in prop::collection::vec((-200i64..=200, 1i64..=50), 3),
    ) {
        let ctx = PAdicCtx { p, precision: 20 };
        let [a, b, c] = [0, 1, 2].map(|k| PAdic::from_rational(&rational(xs[k].0, xs[k].1), ctx));
        let assoc = a.times(&b).times(&c).minus(&a.times(&b.times(&c)));
        prop_assert!(assoc.vanishes());
        let distrib = a.times(&b.plus(&c)).minus(&a.times(&b).plus(&a.times(&c)));
        prop_assert!(distrib.vanishes());
        prop_assert!(a.plus(&b).minus(&b).minus(&a).vanishes());
        if !a.vanishes() {
            prop_assert!(a.times(&a.inverse().unwrap()).minus(&PAdic::one_in(&ctx)).vanishes());
        }
    }

    #[test]
    fn padic_rational_round_trip(
        p in prop::sample::select(vec![2u64, 3, 5]),
        n in -300i64..=300,
        d in 1i64..=300,
    ) {
        let x = rational(n, d);
        let ctx = PAdicCtx { p, precision: 30 };
        prop_assert_eq!(PAdic::from_rational(&x, ctx).to_rational(), Some(x));
    }
}

#[test]
fn singular_inverse_is_rejected() {
    let m = Matrix::from_fn(2, 2, (), |i, _| {
        Rational::from_integer(BigInt::from(i as i64))
    });
    assert!(m.inverse().is_err());
}
