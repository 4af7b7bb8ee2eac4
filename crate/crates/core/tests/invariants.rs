use std::f64::consts::PI;

use deltoid_algebra::{int, MPoly, MonomialOrder, Rational};
use deltoid_core::critical::{enumerate, zeta, zeta_cubed, CriticalFamily, ZetaBranch};
use deltoid_core::family::{build_pd, index_range, CoefficientMode, FamilyCurve, LineSpec};
use deltoid_core::milnor::{milnor_dims_with_order, smooth_dims, threshold_report, thresholds, HomogeneousCurve};
use deltoid_core::Angle;
use proptest::prelude::*;

// points `foot + t·dir` on a line, for `t` in a few fixed spots
fn points_on(line: &LineSpec) -> Vec<[f64; 2]> {
    let [a, b, c] = line.coeffs;
    let n2 = a * a + b * b;
    let foot = [-a * c / n2, -b * c / n2];
    let dir = [-b / n2.sqrt(), a / n2.sqrt()];
    [-1.7, -0.6, 0.0, 0.45, 1.3].iter().map(|t| [foot[0] + t * dir[0], foot[1] + t * dir[1]]).collect()
}

fn zero_tolerance(curve: &FamilyCurve, p: [f64; 2]) -> f64 {
    1e-9 * curve.scale() * (1.0 + p[0].hypot(p[1])).powi(curve.d as i32)
}

fn rotate(p: [f64; 2], a: f64) -> [f64; 2] {
    [a.cos() * p[0] - a.sin() * p[1], a.sin() * p[0] + a.cos() * p[1]]
}

fn linear_form(a: i64, b: i64, c: i64) -> MPoly<Rational> {
    MPoly::from_terms(3, [([1, 0, 0], int(a)), ([0, 1, 0], int(b)), ([0, 0, 1], int(c))])
}

fn proportional(u: [i64; 3], v: [i64; 3]) -> bool {
    u[0] * v[1] == u[1] * v[0] && u[0] * v[2] == u[2] * v[0] && u[1] * v[2] == u[2] * v[1]
}

fn arrangement() -> impl Strategy<Value = Vec<[i64; 3]>> {
    (3usize..=5).prop_flat_map(|d| prop::collection::vec(prop::array::uniform3(-3i64..=3), d)).prop_filter(
        "distinct nonzero lines",
        |ls| {
            ls.iter().all(|l| l.iter().any(|&c| c != 0))
                && (0..ls.len()).all(|i| (0..i).all(|j| !proportional(ls[i], ls[j])))
        },
    )
}

#[test]
fn index_range_has_d_values() {
    for d in 1..=12 {
        let (lo, hi) = index_range(d);
        assert_eq!((hi - lo + 1) as u32, d);
    }
}

#[test]
fn abc_points_do_not_move_with_mu() {
    for d in 4..=8 {
        let grid: Vec<_> = (0..12).map(|k| Angle::Radians(0.05 + 0.5 * k as f64)).collect();
        let base = enumerate(d, &grid[0]).unwrap();
        for mu in &grid[1..] {
            let pts = enumerate(d, mu).unwrap();
            for f in [CriticalFamily::A, CriticalFamily::B, CriticalFamily::C] {
                let a: Vec<_> = base.iter().filter(|p| p.family == f).collect();
                let b: Vec<_> = pts.iter().filter(|p| p.family == f).collect();
                assert_eq!(a.len(), b.len());
                for (p, q) in a.iter().zip(&b) {
                    assert_eq!((p.k, p.l), (q.k, q.l));
                    assert!((p.xy[0] - q.xy[0]).hypot(p.xy[1] - q.xy[1]) < 1e-10);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lines_lie_on_the_zero_set(d in 1u32..=8, mu in -7.0f64..7.0) {
        let curve = build_pd(d, &Angle::Radians(mu), CoefficientMode::Float).unwrap();
        prop_assert_eq!(curve.poly.degree(), d);
        prop_assert_eq!(curve.lines.len(), d as usize);
        for line in &curve.lines {
            for p in points_on(line) {
                prop_assert!(curve.eval(p[0], p[1]).abs() < zero_tolerance(&curve, p));
            }
        }
    }

    // μ ↦ μ + 2π/3 turns every line by −2π/(3d), which is a rotation of the
    // whole arrangement by ±2π/3 only when 3 ∤ d
    #[test]
    fn rotation_by_a_third_turn(d in (1u32..=8).prop_filter("3 ∤ d", |d| d % 3 != 0), mu in -4.0f64..4.0) {
        let turn = if d % 3 == 2 { 2.0 * PI / 3.0 } else { -2.0 * PI / 3.0 };
        let here = build_pd(d, &Angle::Radians(mu), CoefficientMode::Float).unwrap();
        let there = build_pd(d, &Angle::Radians(mu + 2.0 * PI / 3.0), CoefficientMode::Float).unwrap();
        for line in &here.lines {
            for p in points_on(line) {
                let q = rotate(p, turn);
                prop_assert!(there.eval(q[0], q[1]).abs() < 10.0 * zero_tolerance(&there, q));
            }
        }
    }

    #[test]
    fn zeta_collapses_to_a_cube(mu in -10.0f64..10.0) {
        for b in [ZetaBranch::M, ZetaBranch::M1, ZetaBranch::M2] {
            let a = Angle::Radians(mu);
            prop_assert!((zeta(b, &a) - zeta_cubed(b, &a)).abs() < 1e-12);
        }
    }

    #[test]
    fn zeta_collapses_on_pi_fractions(num in -48i64..48, den in 1i64..24) {
        for b in [ZetaBranch::M, ZetaBranch::M1, ZetaBranch::M2] {
            let a = Angle::pi_frac(num, den);
            prop_assert!((zeta(b, &a) - zeta_cubed(b, &a)).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn line_arrangement_thresholds(lines in arrangement()) {
        let f = lines.iter().fold(MPoly::constant(3, int(1)), |acc, l| &acc * &linear_form(l[0], l[1], l[2]));
        let curve = HomogeneousCurve::new(f).unwrap();
        let r = threshold_report(&curve, None).unwrap();
        let smooth = smooth_dims(r.d, r.dims.len() as u32 - 1);
        let ct = r.ct as usize;
        prop_assert_eq!(&r.dims[..=ct], &smooth[..=ct]);
        if r.free {
            prop_assert_eq!(r.ct + r.st, r.t);
        }
        let reversed = thresholds(&milnor_dims_with_order(&curve, r.dims.len() as u32 - 1, MonomialOrder::Reversed).unwrap()).unwrap();
        prop_assert_eq!(reversed.dims, r.dims);
    }
}
