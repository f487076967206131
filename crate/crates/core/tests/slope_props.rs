use levelraise::kernel::{int, Matrix, PAdic, Polynomial, Rational, Scalar};
use levelraise::slope::{
    fredholm_series, newton_polygon, padic_ctx, padic_matrix, padic_poly, rational_valuation,
    slope_decomposition, slope_factorization,
};
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

fn planted(p: u64) -> impl Strategy<Value = Vec<(u32, i64)>> {
    let units: Vec<i64> = [1i64, -1, 2, -2, 3, -3]
        .into_iter()
        .filter(|u| u.rem_euclid(p as i64) != 0)
        .collect();
    prop::collection::vec((0u32..=3, prop::sample::select(units)), 1..=4)
}

type Ops = Vec<(usize, usize, i64)>;

fn case() -> impl Strategy<Value = (u64, Vec<(u32, i64)>, Ops, Ops, u32)> {
    prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| {
        (
            Just(p),
            planted(p),
            prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8),
            prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8),
            0u32..=3,
        )
    })
}

fn eigenvalues(p: u64, plant: &[(u32, i64)]) -> Vec<Rational> {
    plant
        .iter()
        .map(|&(v, u)| int((p as i64).pow(v) * u))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn polygon_slopes_are_planted_valuations((p, plant, _, _, _) in case()) {
        let ctx = padic_ctx(p, 20).unwrap();
        let eig = eigenvalues(p, &plant);
        let mut poly = Polynomial::<PAdic>::one(ctx);
        for lam in &eig {
            poly = poly.mul(&padic_poly(&[int(1), -lam], ctx));
        }
        let np = newton_polygon(&poly).unwrap();
        let mut slopes: Vec<Rational> = np
            .segments()
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.slope.clone(), s.length))
            .collect();
        slopes.sort();
        let mut planted: Vec<Rational> = eig.iter().map(|x| int(rational_valuation(x, p).unwrap())).collect();
        planted.sort();
        prop_assert_eq!(slopes, planted);
    }

    #[test]
    fn decomposition_is_invariant_under_base_change((p, plant, g1, g2, h) in case()) {
        let n = plant.len();
        let d = Matrix::diagonal(&eigenvalues(p, &plant), ());
        let ctx = padic_ctx(p, 20).unwrap();
        let h = int(h as i64);
        let mut dims = Vec::new();
        let mut qs = Vec::new();
        for ops in [&g1, &g2] {
            let g = conjugator(n, ops);
            let u = g.mul(&d).unwrap().mul(&g.inverse().unwrap()).unwrap();
            let dec = slope_decomposition(&padic_matrix(&u, ctx), &h, 20).unwrap();
            prop_assert!(dec.checks.passed(), "{:?}", dec.checks);
            dims.push((dec.q_part.len(), dec.complement.len()));
            qs.push(dec.factorization.q.clone());
        }
        prop_assert_eq!(dims[0], dims[1]);
        prop_assert!(qs[0].sub(&qs[1]).coeffs().iter().all(|c| c.vanishes()));
        let expected = plant.iter().filter(|(v, _)| int(*v as i64) <= h).count();
        prop_assert_eq!(dims[0].0, expected);
    }

    #[test]
    fn factorization_multiplies_back((p, plant, g1, _, h) in case()) {
        let n = plant.len();
        let g = conjugator(n, &g1);
        let d = Matrix::diagonal(&eigenvalues(p, &plant), ());
        let u = g.mul(&d).unwrap().mul(&g.inverse().unwrap()).unwrap();
        let ctx = padic_ctx(p, 20).unwrap();
        let series = fredholm_series(&padic_matrix(&u, ctx)).unwrap();
        let f = slope_factorization(&series, &int(h as i64), 20).unwrap();
        prop_assert!(series.sub(&f.q.mul(&f.s)).coeffs().iter().all(|c| c.vanishes()));
        prop_assert!(f.q.coeff(0).minus(&PAdic::one_in(&ctx)).vanishes());
        prop_assert!(f.s.coeff(0).minus(&PAdic::one_in(&ctx)).vanishes());
    }
}
