use deltoid_core::critical::{enumerate, CriticalPoint, HessianClass};
use deltoid_core::family::{build_pd, CoefficientMode};
use deltoid_core::flow::{
    integrate, monotone_decreasing, orbit_orientation, orthogonality_check, FieldKind, FlowConfig, Orientation,
    VectorField,
};
use deltoid_core::Angle;
use rayon::prelude::*;

fn field(d: u32, mu: &Angle, kind: FieldKind) -> VectorField {
    VectorField::from_curve(&build_pd(d, mu, CoefficientMode::Float).unwrap(), kind).unwrap()
}

fn centers(d: u32, mu: &Angle) -> Vec<CriticalPoint> {
    enumerate(d, mu)
        .unwrap()
        .into_iter()
        .filter(|p| !p.boundary && matches!(p.hessian_class, HessianClass::Max | HessianClass::Min))
        .collect()
}

fn ring(c: [f64; 2], r: f64, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / n as f64 + 0.3;
            [c[0] + r * a.cos(), c[1] + r * a.sin()]
        })
        .collect()
}

#[test]
fn energy_drift_over_long_runs() {
    let cases = [(5, Angle::zero()), (6, Angle::zero()), (6, Angle::pi_frac(1, 12))];
    let config = FlowConfig::default();
    for (d, mu) in cases {
        let f = field(d, &mu, FieldKind::Hamiltonian);
        let seeds: Vec<[f64; 2]> = centers(d, &mu).iter().map(|p| [p.xy[0] + 0.05, p.xy[1]]).collect();
        assert!(!seeds.is_empty());
        seeds.par_iter().for_each(|&s| {
            let tr = integrate(&f, s, &config).unwrap();
            assert!(!tr.escaped);
            assert!((tr.samples.last().unwrap()[0] - 100.0).abs() < 1e-9);
            let bound = 1e-6 * f.energy(s).abs() + 1e-9;
            assert!(tr.energy_drift < bound, "d={d} mu={mu} seed={s:?}: {} >= {bound}", tr.energy_drift);
        });
    }
}

#[test]
fn stationary_at_a_critical_point() {
    let mu = Angle::zero();
    let f = field(5, &mu, FieldKind::Hamiltonian);
    let p = &centers(5, &mu)[0];
    let tr = integrate(&f, p.xy, &FlowConfig { t_end: 10.0, ..FlowConfig::default() }).unwrap();
    for q in tr.points() {
        assert!((q[0] - p.xy[0]).hypot(q[1] - p.xy[1]) < 1e-9);
    }
    assert!(tr.energy_drift < 1e-12);
}

#[test]
fn orientation_law() {
    let config = FlowConfig { t_end: 60.0, ..FlowConfig::default() };
    for d in [5, 6] {
        for mu in [Angle::zero(), Angle::pi_frac(1, 12)] {
            let f = field(d, &mu, FieldKind::Hamiltonian);
            let cs = centers(d, &mu);
            assert!(cs.iter().any(|p| p.hessian_class == HessianClass::Max));
            assert!(cs.iter().any(|p| p.hessian_class == HessianClass::Min));
            cs.par_iter().for_each(|p| {
                let want = match p.hessian_class {
                    HessianClass::Max => Orientation::Anticlockwise,
                    _ => Orientation::Clockwise,
                };
                for s in ring(p.xy, 1e-2, 4) {
                    let tr = integrate(&f, s, &config).unwrap();
                    assert_eq!(orbit_orientation(&tr), want, "d={d} mu={mu} center={:?}", p.xy);
                }
            });
        }
    }
}

#[test]
fn saddle_seeds_leave_the_neighbourhood() {
    let config = FlowConfig { t_end: 60.0, ..FlowConfig::default() };
    for d in [5, 6] {
        let mu = Angle::zero();
        let f = field(d, &mu, FieldKind::Hamiltonian);
        let saddles: Vec<CriticalPoint> = enumerate(d, &mu)
            .unwrap()
            .into_iter()
            .filter(|p| !p.boundary && p.hessian_class == HessianClass::Saddle)
            .collect();
        assert!(!saddles.is_empty());
        for p in &saddles {
            for s in ring(p.xy, 1e-2, 4) {
                let tr = integrate(&f, s, &config).unwrap();
                let far = tr.points().map(|q| (q[0] - p.xy[0]).hypot(q[1] - p.xy[1])).fold(0.0, f64::max);
                assert!(far > 0.1, "d={d} saddle={:?} seed={s:?} stayed within {far}", p.xy);
            }
        }
    }
}

#[test]
fn opposite_orientation_after_half_turn() {
    let config = FlowConfig { t_end: 60.0, ..FlowConfig::default() };
    let (a, b) = (Angle::zero(), Angle::pi_frac(1, 1));
    let fa = field(6, &a, FieldKind::Hamiltonian);
    let fb = field(6, &b, FieldKind::Hamiltonian);
    let cs = centers(6, &a);
    assert!(!cs.is_empty());
    for p in &cs {
        let s = [p.xy[0] + 1e-2, p.xy[1]];
        let oa = orbit_orientation(&integrate(&fa, s, &config).unwrap());
        let ob = orbit_orientation(&integrate(&fb, s, &config).unwrap());
        assert_ne!(oa, Orientation::Open);
        assert_ne!(ob, Orientation::Open);
        assert_ne!(oa, ob, "center {:?}", p.xy);
    }
}

#[test]
fn gradient_flow_decreases() {
    let config = FlowConfig { t_end: 5.0, escape_radius: 6.0, ..FlowConfig::default() };
    for (d, mu) in [(5, Angle::zero()), (6, Angle::pi_frac(1, 12)), (7, Angle::Radians(0.4))] {
        let f = field(d, &mu, FieldKind::Gradient);
        for s in [[0.3, 0.2], [-1.0, 0.5], [1.5, -1.1], [0.0, 0.0], [2.2, 2.2]] {
            let tr = integrate(&f, s, &config).unwrap();
            assert!(monotone_decreasing(&tr, 1e-10), "d={d} seed={s:?}");
        }
    }
}

#[test]
fn fields_are_orthogonal() {
    for d in [3, 5, 6, 8] {
        let r = orthogonality_check(d, &Angle::pi_frac(1, 7), 100, 11).unwrap();
        assert!(r.max_dot < 1e-12 * r.scale_squared, "{r:?}");
        assert_eq!(r.symbolic_max_coeff, 0.0);
    }
}

#[test]
fn integrators_agree() {
    let mu = Angle::zero();
    let f = field(5, &mu, FieldKind::Hamiltonian);
    let p = &centers(5, &mu)[0];
    let s = [p.xy[0] + 0.05, p.xy[1]];
    let short = FlowConfig { t_end: 2.0, max_step: 2e-4, ..FlowConfig::default() };
    let rk = integrate(&f, s, &short).unwrap();
    let mid = integrate(&f, s, &FlowConfig { integrator: "implicit-midpoint".into(), ..short.clone() }).unwrap();
    let a = rk.samples.last().unwrap();
    let b = mid.samples.last().unwrap();
    assert!((a[1] - b[1]).hypot(a[2] - b[2]) < 1e-4, "{a:?} vs {b:?}");
    assert!(mid.energy_drift < 1e-6 * f.energy(s).abs() + 1e-9);
}
