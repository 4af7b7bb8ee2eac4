use deltoid_core::family::{golden_curve, GoldenCurve};
use deltoid_core::milnor::{mk_number, parse_singularities, threshold_report, HomogeneousCurve};

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use deltoid_core::milnor::ThresholdReport;

fn report(which: GoldenCurve) -> ThresholdReport {
    static CACHE: OnceLock<Mutex<HashMap<&'static str, ThresholdReport>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(which.name()) {
        return r.clone();
    }
    let c = HomogeneousCurve::from_affine(&golden_curve(which)).unwrap();
    let r = threshold_report(&c, None).unwrap();
    cache.lock().unwrap().insert(which.name(), r.clone());
    r
}

#[test]
fn c9_thresholds() {
    let r = report(GoldenCurve::C9);
    assert_eq!((r.tau, r.ct, r.st, r.t), (48, 11, 10, 21));
    assert!(r.free);
    assert!(!r.maximising);
    assert_eq!(r.ct + r.st, r.t);
}

#[test]
fn m8_tilde_maximising() {
    let r = report(GoldenCurve::M8Tilde);
    assert_eq!(r.tau, 37);
    assert!(r.free && r.maximising);
    assert_eq!(r.exponents, Some((3, 4)));
    assert_eq!(r.ct + r.st, r.t);
    let (tau, _) = mk_number(&parse_singularities("3E7+D6+D4+6A1").unwrap());
    assert_eq!(tau as usize, r.tau);
}

#[test]
fn m10_maximising() {
    let r = report(GoldenCurve::M10);
    assert_eq!(r.tau, 61);
    assert!(r.free && r.maximising);
    assert_eq!(r.exponents, Some((4, 5)));
    assert_eq!(r.ct + r.st, r.t);
    let (tau, _) = mk_number(&parse_singularities("3E7+3D6+4D4+6A1").unwrap());
    assert_eq!(tau as usize, r.tau);
}

#[test]
fn dims_follow_smooth_series_up_to_ct() {
    for which in [GoldenCurve::C9, GoldenCurve::M8Tilde, GoldenCurve::M10] {
        let r = report(which);
        let s = deltoid_core::milnor::smooth_dims(r.d, r.dims.len() as u32 - 1);
        let ct = r.ct as usize;
        assert_eq!(r.dims[..=ct], s[..=ct]);
        assert_ne!(r.dims[ct + 1], s[ct + 1]);
    }
}
