use deltoid_algebra::linalg::{rational_rank, rational_rank_sparse};
use deltoid_algebra::{graded_rank, int, rat, AnyPoly, MPoly, QSqrt3, Rational};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn small_poly(nvars: usize) -> impl Strategy<Value = MPoly<Rational>> {
    prop::collection::vec(((0u32..4, 0u32..4, 0u32..3), small_rational()), 0..6).prop_map(move |terms| {
        MPoly::from_terms(
            nvars,
            terms.into_iter().map(|((a, b, c), r)| {
                let e = if nvars == 3 { [a, b, c] } else { [a, b, 0] };
                (e, r)
            }),
        )
    })
}

fn matrix() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(int(0)), 2 => small_rational()], c), r)
    })
}

proptest! {
    #[test]
    fn addition_is_associative(p in small_poly(2), q in small_poly(2), r in small_poly(2)) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
    }

    #[test]
    fn multiplication_distributes(p in small_poly(3), q in small_poly(3), r in small_poly(3)) {
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn partials_commute(p in small_poly(3)) {
        let xy = p.diff(0).unwrap().diff(1).unwrap();
        let yx = p.diff(1).unwrap().diff(0).unwrap();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn homogenize_then_dehomogenize(p in small_poly(2)) {
        let d = p.degree() + 2;
        prop_assert_eq!(p.homogenize(d).unwrap().dehomogenize().unwrap(), p);
    }

    #[test]
    fn qsqrt3_norm_identity(a in small_rational(), b in small_rational()) {
        let v = QSqrt3::new(a.clone(), b.clone());
        let prod = v.clone() * v.conjugate();
        prop_assert!(prod.is_rational());
        prop_assert_eq!(prod.a, &a * &a - int(3) * &b * &b);
    }

    #[test]
    fn rank_routes_agree(m in matrix()) {
        prop_assert_eq!(rational_rank(&m), rational_rank_sparse(&m));
    }

    #[test]
    fn rank_ignores_row_order_and_scaling(m in matrix(), s in 1i64..7) {
        let base = graded_rank(&m);
        let mut shuffled: Vec<Vec<Rational>> = m.iter().rev().cloned().collect();
        for row in shuffled.iter_mut().step_by(2) {
            for v in row.iter_mut() {
                *v = &*v * rat(-s, 3);
            }
        }
        prop_assert_eq!(graded_rank(&shuffled), base);
    }

    #[test]
    fn exact_json_round_trip(p in small_poly(3)) {
        let doc = AnyPoly::Rational(p);
        prop_assert_eq!(AnyPoly::from_json(&doc.to_json()).unwrap(), doc);
    }
}
