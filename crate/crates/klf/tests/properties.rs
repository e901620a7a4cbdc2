//! Property tests for the exact-arithmetic substrate.

use klf::cyclotomic::CycInt;
use klf::poly::{IntPoly, IntSeries, RatFunc};
use klf::polygon;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn cyc(p: u64, raw: &[i64]) -> CycInt {
    let v: Vec<BigInt> = raw.iter().map(|&x| BigInt::from(x)).collect();
    CycInt::from_coeffs(p, &v)
}

fn small_coeffs(p: u64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, p as usize)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7]),
                   a in prop::collection::vec(-20i64..=20, 7),
                   b in prop::collection::vec(-20i64..=20, 7),
                   c in prop::collection::vec(-20i64..=20, 7)) {
        let (a, b, c) = (cyc(p, &a), cyc(p, &b), cyc(p, &c));
        // associativity and distributivity, exactly
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn valuation_is_additive(p in prop::sample::select(vec![2u64, 3, 5]),
                             a in prop::collection::vec(-9i64..=9, 5),
                             b in prop::collection::vec(-9i64..=9, 5)) {
        let (a, b) = (cyc(p, &a), cyc(p, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let va = a.lambda_valuation().unwrap();
        let vb = b.lambda_valuation().unwrap();
        let vab = a.mul(&b).unwrap().lambda_valuation().unwrap();
        prop_assert_eq!(vab, va + vb);
    }

    #[test]
    fn embedding_modulus_is_multiplicative(p in prop::sample::select(vec![3u64, 5, 7]),
                                           a in prop::collection::vec(-50i64..=50, 7),
                                           b in prop::collection::vec(-50i64..=50, 7)) {
        let (a, b) = (cyc(p, &a), cyc(p, &b));
        let ab = a.mul(&b).unwrap();
        let (va, ea) = a.complex_embeddings(128);
        let (vb, eb) = b.complex_embeddings(128);
        let (vab, eab) = ab.complex_embeddings(128);
        for i in 0..(p - 1) as usize {
            let ma = (va[i].0.powi(2) + va[i].1.powi(2)).sqrt();
            let mb = (vb[i].0.powi(2) + vb[i].1.powi(2)).sqrt();
            let mab = (vab[i].0.powi(2) + vab[i].1.powi(2)).sqrt();
            let tol = 1e-9 * (1.0 + ma * mb) + ea + eb + eab;
            prop_assert!((mab - ma * mb).abs() <= tol);
        }
    }

    #[test]
    fn reconstruction_recovers_rational_functions(
        nums in prop::collection::vec(-9i64..=9, 0..4),
        dens in prop::collection::vec(-9i64..=9, 0..3)) {
        // random num/den with constant terms 1
        let mut n = vec![1i64];
        n.extend(nums);
        let mut d = vec![1i64];
        d.extend(dens);
        let rf = RatFunc::new_reduced(IntPoly::from_i64(&n), IntPoly::from_i64(&d)).unwrap();
        let order = rf.num.degree() + rf.den.degree() + 4;
        let series = IntSeries::new(rf.series(order + 1).unwrap()).unwrap();
        let back = lfunction_reconstruct(&series, rf.num.degree(), rf.den.degree());
        prop_assert_eq!(back, rf);
    }

    #[test]
    fn hodge_polygon_is_newton_of_linear_product(
        h in prop::collection::vec(0u32..4, 1..5),
        q in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assume!(h.iter().sum::<u32>() > 0);
        let hd = polygon::HodgeData { h: h.iter().map(|&x| BigInt::from(x)).collect(), exact: true };
        let hp = polygon::hodge_polygon(&hd).unwrap();
        let mut f = IntPoly::one();
        for (i, &hi) in h.iter().enumerate() {
            let lin = IntPoly::one_minus(BigInt::from(q).pow(i as u32), 1);
            f = f.mul(&lin.pow(hi));
        }
        let np = polygon::newton_polygon(&f, q, 1).unwrap();
        prop_assert_eq!(np, hp);
    }

    #[test]
    fn lower_hull_is_valid_and_below_points(
        ys in prop::collection::vec(0i64..30, 2..8)) {
        let pts: Vec<(BigRational, BigRational)> = ys
            .iter()
            .enumerate()
            .map(|(x, &y)| (BigRational::from_integer(BigInt::from(x as i64)),
                            BigRational::from_integer(BigInt::from(y))))
            .collect();
        let hull = polygon::Polygon::lower_hull(&pts).unwrap();
        // x strictly increasing, slopes nondecreasing
        let slopes = hull.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0].0 <= w[1].0));
        for (x, y) in &pts {
            let v = hull.value_at(x).unwrap();
            prop_assert!(v <= *y);
        }
    }

    #[test]
    fn series_of_product_is_product_of_series(
        a in prop::collection::vec(-5i64..=5, 0..4),
        b in prop::collection::vec(-5i64..=5, 0..4)) {
        let mut ac = vec![1i64];
        ac.extend(a);
        let mut bc = vec![1i64];
        bc.extend(b);
        let fa = RatFunc::from_poly(IntPoly::from_i64(&ac));
        let fb = RatFunc::from_poly(IntPoly::from_i64(&bc));
        let prod = fa.mul(&fb).unwrap();
        let d = 10usize;
        let sa = fa.series(d).unwrap();
        let sb = fb.series(d).unwrap();
        let sp = prod.series(d).unwrap();
        for m in 0..d {
            let mut acc = BigInt::from(0);
            for j in 0..=m {
                acc += &sa[j] * &sb[m - j];
            }
            prop_assert_eq!(&acc, &sp[m]);
        }
    }
}

fn lfunction_reconstruct(series: &IntSeries, num: usize, den: usize) -> RatFunc {
    klf::lfunction::reconstruct(series, num, den, 3).unwrap()
}
