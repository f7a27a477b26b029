use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tbl_core::brauer::{check_residue_diagram, compare_evaluations, evaluate, spanning_classes};
use tbl_core::sample::Sampler;
use tbl_core::scheme::{eval_poly, ideal_equality_a1, strong_equiv, Component};
use tbl_core::{BrauerInvariant, ClassExpr, OPoint, PAdic, Poly, SchemeModel};

fn x() -> Poly {
    Poly::var(1, 0)
}

fn d1_models(p: u64) -> Vec<SchemeModel> {
    let one = Poly::int(1, 1);
    let two = Poly::int(1, 2);
    vec![
        SchemeModel::multiplicative_group(p).unwrap(),
        SchemeModel::new(p, 1, vec![x().sub(&one)], true).unwrap(),
        SchemeModel::new(p, 1, vec![x().pow(2).sub(&two)], true).unwrap(),
    ]
}

fn point(p: u64, v: &BigInt) -> OPoint {
    OPoint::from_rationals(p, 24, &[BigRational::from_integer(v.clone())]).unwrap()
}

proptest! {
    #[test]
    fn multiplicity_is_additive(
        p in prop::sample::select(vec![3u64, 5, 7]),
        u in 1i64..100_000,
        a in 0i64..50, b in 0i64..50,
    ) {
        let f = x().sub(&Poly::int(1, a));
        let g = x().sub(&Poly::int(1, b));
        prop_assume!(u != a && u != b);
        let pt = point(p, &BigInt::from(u));
        let vf = eval_poly(&f, &pt).unwrap().valuation().unwrap();
        let vg = eval_poly(&g, &pt).unwrap().valuation().unwrap();
        let vfg = eval_poly(&f.mul(&g), &pt).unwrap().valuation().unwrap();
        prop_assert_eq!(vfg, vf + vg);
        if a != b {
            let m = SchemeModel::new(p, 1, vec![f, g], true).unwrap();
            prop_assert_eq!(m.multiplicity(Component::Horizontal(0), &pt).unwrap() as i64, vf);
            prop_assert_eq!(m.multiplicity(Component::Horizontal(1), &pt).unwrap() as i64, vg);
        }
    }

    #[test]
    fn strong_equiv_is_an_equivalence(seed in any::<u64>()) {
        let p = 5;
        let m = &d1_models(p)[2];
        let mut s = Sampler::new(seed);
        let pts: Vec<_> = (0..3).map(|_| s.point_off_boundary(m, 16, 3)).collect();
        let data: Vec<_> = pts.iter().map(|x| m.intersection_data(x).unwrap()).collect();
        prop_assert!(strong_equiv(&data[0], &data[0]));
        prop_assert_eq!(strong_equiv(&data[0], &data[1]), strong_equiv(&data[1], &data[0]));
        if strong_equiv(&data[0], &data[1]) && strong_equiv(&data[1], &data[2]) {
            prop_assert!(strong_equiv(&data[0], &data[2]));
        }
    }

    #[test]
    fn evaluation_is_additive(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7])) {
        let models = d1_models(p);
        let mut s = Sampler::new(seed);
        let m = &models[s.below(3) as usize];
        let a = s.class_term(m, 2, true);
        let b = s.class_term(m, 4, true);
        let pt = s.point_off_boundary(m, 24, 4);
        let sum = ClassExpr::Product(vec![a.clone(), b.clone()]);
        prop_assert_eq!(
            evaluate(&sum, m, &pt).unwrap(),
            evaluate(&a, m, &pt).unwrap() + evaluate(&b, m, &pt).unwrap()
        );
    }

    #[test]
    fn diagram_commutes_under_hypothesis(
        seed in any::<u64>(),
        case in prop::sample::select(vec![(5u64, 3u64), (2, 3), (3, 5), (7, 5)]),
    ) {
        let (p, n) = case;
        let models = d1_models(p);
        let mut s = Sampler::new(seed);
        let m = &models[s.below(3) as usize];
        let e = s.class(m, &[n], false);
        let pt = s.point_off_boundary(m, 24, 4);
        let r = check_residue_diagram(&e, m, &pt).unwrap();
        prop_assert!(r.equal, "{} {:?}", e, r);
    }

    #[test]
    fn strong_equivalent_points_evaluate_alike(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7])) {
        let models = d1_models(p);
        let mut s = Sampler::new(seed);
        let m = &models[s.below(3) as usize];
        let x1 = s.point_off_boundary(m, 24, 4);
        let data = m.intersection_data(&x1).unwrap();
        let max_m = data.components.iter().map(|c| c.multiplicity).max().unwrap();
        let exact = x1.coords()[0].exact_value().unwrap().clone();
        let shift = BigInt::from(p).pow(max_m + 1) * (s.below(1000) as i64 + 1);
        let x2 = OPoint::from_rationals(p, 24, &[exact + BigRational::from_integer(shift)]).unwrap();
        let orders: Vec<u64> = [2u64, 3, 4, 5].into_iter().filter(|n| n % p != 0).collect();
        let classes: Vec<_> = (0..4).map(|_| s.class(m, &orders, true)).collect();
        let r = compare_evaluations(m, &x1, &x2, &classes).unwrap();
        prop_assert!(r.strong_equiv);
        prop_assert!(r.violations.is_empty());
    }
}

#[test]
fn ideal_equality_matches_strong_equiv_exhaustively() {
    for p in [3u64, 5] {
        let m = SchemeModel::multiplicative_group(p).unwrap();
        let units: Vec<i64> = (1..(p * p) as i64).filter(|v| v % p as i64 != 0).collect();
        let mut pts = Vec::new();
        for l in 0..3u32 {
            for &v in &units {
                pts.push(BigInt::from(v) * BigInt::from(p).pow(l));
            }
        }
        for u1 in &pts {
            for u2 in &pts {
                let a = PAdic::from_bigint(p, 16, u1).unwrap();
                let b = PAdic::from_bigint(p, 16, u2).unwrap();
                let d1 = m.intersection_data(&point(p, u1)).unwrap();
                let d2 = m.intersection_data(&point(p, u2)).unwrap();
                assert_eq!(
                    ideal_equality_a1(&a, &b).unwrap(),
                    strong_equiv(&d1, &d2),
                    "{u1} {u2}"
                );
            }
        }
    }
}

#[test]
fn spanning_classes_separate_exactly() {
    for p in [3u64, 5, 7] {
        let m = SchemeModel::multiplicative_group(p).unwrap();
        let classes = spanning_classes(p, 3).unwrap();
        let pts: Vec<BigInt> = (0..=3u32)
            .flat_map(|l| {
                (1..2 * p as i64)
                    .filter(move |v| v % p as i64 != 0)
                    .map(move |v| BigInt::from(v) * BigInt::from(p).pow(l))
            })
            .collect();
        let evals: Vec<Vec<BrauerInvariant>> = pts
            .iter()
            .map(|u| {
                classes
                    .iter()
                    .map(|c| evaluate(c, &m, &point(p, u)).unwrap())
                    .collect()
            })
            .collect();
        for (i, u1) in pts.iter().enumerate() {
            for (j, u2) in pts.iter().enumerate() {
                let a = PAdic::from_bigint(p, 16, u1).unwrap();
                let b = PAdic::from_bigint(p, 16, u2).unwrap();
                assert_eq!(
                    evals[i] == evals[j],
                    ideal_equality_a1(&a, &b).unwrap(),
                    "p={p} {u1} {u2}"
                );
            }
        }
    }
}
