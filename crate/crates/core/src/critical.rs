//! Closed-form critical points of `P_d(x, y, μ)`: lattice families in the
//! fundamental region `W`, their images in the plane, critical values and
//! Hessian classes.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use deltoid_algebra::{int, rat, Coeff, MPoly, Rational};
use serde::{Serialize, Serializer};

use crate::angle::{cos_pi, sin_pi, Angle};
use crate::error::{CoreError, Result};
use crate::family::{build_pd, deltoid_value, CoefficientMode, FamilyCurve};

/// Relative tolerance for gradient residuals and Hessian degeneracy.
pub const REL_TOL: f64 = 1e-7;
/// `|Q_δ(x, y)|` below this counts as lying on the deltoid.
pub const ON_DELTOID_TOL: f64 = 1e-8;
/// Float lattice points closer than this to `∂W` are treated as on it.
pub const UV_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CriticalFamily {
    A,
    B,
    C,
    D1,
    D2,
    D3,
}

impl CriticalFamily {
    pub const ALL: [CriticalFamily; 6] = [
        CriticalFamily::A,
        CriticalFamily::B,
        CriticalFamily::C,
        CriticalFamily::D1,
        CriticalFamily::D2,
        CriticalFamily::D3,
    ];

    pub fn is_d(self) -> bool {
        matches!(self, CriticalFamily::D1 | CriticalFamily::D2 | CriticalFamily::D3)
    }

    /// The ζ branch carried by families A, B, C.
    pub fn branch(self) -> Option<ZetaBranch> {
        match self {
            CriticalFamily::A => Some(ZetaBranch::M),
            CriticalFamily::B => Some(ZetaBranch::M1),
            CriticalFamily::C => Some(ZetaBranch::M2),
            _ => None,
        }
    }

    fn lattice_f64(self, d: f64, k: f64, l: f64, t: f64) -> [f64; 2] {
        let half = |j: f64| (6.0 * j - 1.0) / (6.0 * d) - t / d;
        let third = |j: f64| (3.0 * j + 1.0) / (3.0 * d) + 2.0 * t / d;
        match self {
            CriticalFamily::A => [(3.0 * k + 1.0) / (3.0 * d), (3.0 * l + 1.0) / (3.0 * d)],
            CriticalFamily::B => [(3.0 * k + 2.0) / (3.0 * d), (3.0 * l + 2.0) / (3.0 * d)],
            CriticalFamily::C => [k / d, l / d],
            CriticalFamily::D1 => [half(k), half(l)],
            CriticalFamily::D2 => [half(k), third(l)],
            CriticalFamily::D3 => [third(k), half(l)],
        }
    }

    /// `(u, v)` as affine functions of `t = μ/π`: `(a_u + b_u·t, a_v + b_v·t)`.
    fn lattice(self, d: i64, k: i64, l: i64) -> [(Rational, Rational); 2] {
        let z = || int(0);
        let shift_half = |j: i64| (rat(6 * j - 1, 6 * d), rat(-1, d));
        let shift_third = |j: i64| (rat(3 * j + 1, 3 * d), rat(2, d));
        match self {
            CriticalFamily::A => [(rat(3 * k + 1, 3 * d), z()), (rat(3 * l + 1, 3 * d), z())],
            CriticalFamily::B => [(rat(3 * k + 2, 3 * d), z()), (rat(3 * l + 2, 3 * d), z())],
            CriticalFamily::C => [(rat(k, d), z()), (rat(l, d), z())],
            CriticalFamily::D1 => [shift_half(k), shift_half(l)],
            CriticalFamily::D2 => [shift_half(k), shift_third(l)],
            CriticalFamily::D3 => [shift_third(k), shift_half(l)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZetaBranch {
    M,
    M1,
    M2,
}

impl ZetaBranch {
    pub const ALL: [ZetaBranch; 3] = [ZetaBranch::M, ZetaBranch::M1, ZetaBranch::M2];

    /// Offset added to `μ`, as a multiple of `π`.
    fn offset(self) -> Rational {
        match self {
            ZetaBranch::M => int(0),
            ZetaBranch::M1 => rat(-2, 3),
            ZetaBranch::M2 => rat(2, 3),
        }
    }
}

/// `ζ(μ) = 6cos(μ + offset) + 2cos 3μ`.
pub fn zeta(which: ZetaBranch, mu: &Angle) -> f64 {
    match mu.pi_multiple() {
        Some(r) => 6.0 * cos_pi(&(r + which.offset())) + 2.0 * cos_pi(&(r * int(3))),
        None => {
            let m = mu.radians();
            6.0 * (m + which.offset().to_f64() * PI).cos() + 2.0 * (3.0 * m).cos()
        }
    }
}

/// The collapsed form `8cos³(μ + offset)`.
pub fn zeta_cubed(which: ZetaBranch, mu: &Angle) -> f64 {
    let c = match mu.pi_multiple() {
        Some(r) => cos_pi(&(r + which.offset())),
        None => (mu.radians() + which.offset().to_f64() * PI).cos(),
    };
    8.0 * c * c * c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HessianClass {
    Max,
    Min,
    Saddle,
    Degenerate,
}

/// The triangle `max{−2v, v} < u < (1 − v)/2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FundamentalRegion;

impl FundamentalRegion {
    pub fn interior(&self, u: &Rational, v: &Rational) -> bool {
        let lower = (v * int(-2)).max(v.clone());
        &lower < u && u < &((int(1) - v) / int(2))
    }

    pub fn closed(&self, u: &Rational, v: &Rational) -> bool {
        let lower = (v * int(-2)).max(v.clone());
        &lower <= u && u <= &((int(1) - v) / int(2))
    }

    pub fn interior_f64(&self, u: f64, v: f64) -> bool {
        self.interior_margin(u, v, 0.0)
    }

    /// Interior with every inequality holding by more than `margin`.
    pub fn interior_margin(&self, u: f64, v: f64, margin: f64) -> bool {
        (-2.0 * v).max(v) + margin < u && u + margin < (1.0 - v) / 2.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub family: CriticalFamily,
    pub k: i64,
    pub l: i64,
    pub uv: [f64; 2],
    #[serde(serialize_with = "ser_exact_uv")]
    pub uv_exact: Option<(Rational, Rational)>,
    pub xy: [f64; 2],
    pub value: f64,
    pub hessian_class: HessianClass,
    pub hessian_det: f64,
    pub on_deltoid: bool,
    /// On the border of `W`; only kept for `μ ∈ Λ_S`.
    pub boundary: bool,
}

fn ser_exact_uv<S: Serializer>(uv: &Option<(Rational, Rational)>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match uv {
        Some((u, v)) => [u.to_string(), v.to_string()].serialize(s),
        None => s.serialize_none(),
    }
}

/// Plane image of a lattice point.
pub fn uv_to_xy(u: f64, v: f64) -> [f64; 2] {
    let (a, b, c) = (2.0 * PI * (u + v), 2.0 * PI * u, 2.0 * PI * v);
    [a.cos() + b.cos() + c.cos(), a.sin() - b.sin() - c.sin()]
}

fn uv_to_xy_exact(u: &Rational, v: &Rational) -> [f64; 2] {
    let (a, b, c) = ((u + v) * int(2), u * int(2), v * int(2));
    [cos_pi(&a) + cos_pi(&b) + cos_pi(&c), sin_pi(&a) - sin_pi(&b) - sin_pi(&c)]
}

/// First and second partials of a float polynomial in `x, y`.
#[derive(Clone, Debug)]
pub struct CurveDerivatives {
    pub p: MPoly<f64>,
    pub px: MPoly<f64>,
    pub py: MPoly<f64>,
    pub pxx: MPoly<f64>,
    pub pxy: MPoly<f64>,
    pub pyy: MPoly<f64>,
    pub scale: f64,
}

impl CurveDerivatives {
    pub fn new(p: &MPoly<f64>) -> Result<Self> {
        let px = p.diff(0)?;
        let py = p.diff(1)?;
        Ok(CurveDerivatives {
            pxx: px.diff(0)?,
            pxy: px.diff(1)?,
            pyy: py.diff(1)?,
            px,
            py,
            p: p.clone(),
            scale: p.max_abs_coeff().max(f64::MIN_POSITIVE),
        })
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [self.px.eval_f64(&[x, y]), self.py.eval_f64(&[x, y])]
    }

    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let xy = [x, y];
        let h = self.pxy.eval_f64(&xy);
        [[self.pxx.eval_f64(&xy), h], [h, self.pyy.eval_f64(&xy)]]
    }

    pub fn is_critical(&self, x: f64, y: f64) -> bool {
        let [gx, gy] = self.gradient(x, y);
        gx.hypot(gy) < REL_TOL * self.scale
    }

    /// Hessian class and determinant; `|det| ≤ 1e−7·scale` is degenerate.
    pub fn classify(&self, x: f64, y: f64) -> (HessianClass, f64) {
        let h = self.hessian(x, y);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let tol = REL_TOL * self.scale;
        let class = if det > tol {
            if h[0][0] + h[1][1] < 0.0 {
                HessianClass::Max
            } else {
                HessianClass::Min
            }
        } else if det < -tol {
            HessianClass::Saddle
        } else {
            HessianClass::Degenerate
        };
        (class, det)
    }
}

pub fn classify(point: &CriticalPoint, curve: &FamilyCurve) -> Result<HessianClass> {
    if curve.d < 2 {
        return Err(CoreError::DegreeTooLow { d: curve.d, min: 2 });
    }
    Ok(CurveDerivatives::new(&curve.poly)?.classify(point.xy[0], point.xy[1]).0)
}

/// `μ` as an exact multiple of `π` when it is one (radians within 1e−12 of a
/// multiple of `π/6` are snapped).
fn exact_t(mu: &Angle) -> Option<Rational> {
    match mu {
        Angle::PiMultiple(r) => Some(r.clone()),
        Angle::Radians(_) => mu.sixths().map(|k| rat(k, 6)),
    }
}

/// All critical points for `(d, μ)`.
pub fn enumerate(d: u32, mu: &Angle) -> Result<Vec<CriticalPoint>> {
    let curve = build_pd(d, mu, CoefficientMode::Float)?;
    enumerate_for(&curve)
}

pub fn enumerate_for(curve: &FamilyCurve) -> Result<Vec<CriticalPoint>> {
    let d = curve.d;
    if d < 2 {
        return Err(CoreError::DegreeTooLow { d, min: 2 });
    }
    let mu = &curve.mu;
    let der = CurveDerivatives::new(&curve.poly)?;
    let exact = exact_t(mu);
    let t_f = mu.radians() / PI;
    let with_boundary = mu.in_lambda_s();
    let region = FundamentalRegion;
    let values: Vec<f64> = ZetaBranch::ALL.iter().map(|&b| zeta(b, mu)).collect();
    let di = d as i64;
    let mut out = Vec::new();
    let mut seen_boundary = BTreeSet::new();
    for family in CriticalFamily::ALL {
        for k in -2 * di..=2 * di {
            for l in -2 * di..=2 * di {
                let [uf, vf] = family.lattice_f64(d as f64, k as f64, l as f64, t_f);
                if !region.interior_margin(uf, vf, -1e-9) {
                    continue;
                }
                let [(au, bu), (av, bv)] = family.lattice(di, k, l);
                // A/B/C do not move with μ, so they are always exact
                let t_exact = if family.is_d() { exact.clone() } else { Some(int(0)) };
                let (uv, uv_exact, interior, boundary) = match &t_exact {
                    Some(t) => {
                        let u = &au + &bu * t;
                        let v = &av + &bv * t;
                        let interior = region.interior(&u, &v);
                        let boundary = !interior && with_boundary && family.is_d() && region.closed(&u, &v);
                        ([u.to_f64(), v.to_f64()], Some((u, v)), interior, boundary)
                    }
                    None => {
                        let u = au.to_f64() + bu.to_f64() * t_f;
                        let v = av.to_f64() + bv.to_f64() * t_f;
                        ([u, v], None, region.interior_margin(u, v, UV_MARGIN), false)
                    }
                };
                if !interior && !boundary {
                    continue;
                }
                let xy = match &uv_exact {
                    Some((u, v)) => uv_to_xy_exact(u, v),
                    None => uv_to_xy(uv[0], uv[1]),
                };
                if boundary {
                    // border lattice points are not all critical
                    if !der.is_critical(xy[0], xy[1]) || !seen_boundary.insert(uv_exact.clone()) {
                        continue;
                    }
                }
                let value = match family.branch() {
                    Some(b) => values[b as usize],
                    None => 0.0,
                };
                let (hessian_class, hessian_det) = der.classify(xy[0], xy[1]);
                out.push(CriticalPoint {
                    family,
                    k,
                    l,
                    uv,
                    uv_exact,
                    xy,
                    value,
                    hessian_class,
                    hessian_det,
                    on_deltoid: deltoid_value(xy[0], xy[1]).abs() < ON_DELTOID_TOL,
                    boundary,
                });
            }
        }
    }
    Ok(out)
}

pub fn family_count(points: &[CriticalPoint], family: CriticalFamily) -> usize {
    points.iter().filter(|p| p.family == family && !p.boundary).count()
}

/// Expected interior sizes of families A, B, C.
pub fn expected_abc(d: u32) -> [usize; 3] {
    let d = d as usize;
    if d % 3 == 0 {
        let n = d * (d - 3) / 6;
        [n, n, n + 1]
    } else {
        let n = (d - 1) * (d - 2) / 6;
        [n, n, n]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub d: u32,
    pub p1: Verdict,
    pub p2: Verdict,
    pub p3: Verdict,
    pub p4: Verdict,
    pub p5: Verdict,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        [&self.p1, &self.p2, &self.p3, &self.p4, &self.p5].iter().all(|v| v.pass)
    }
}

fn mu_grid() -> Vec<Angle> {
    let mut g: Vec<Angle> = (0..12).map(|k| Angle::pi_frac(k, 6)).collect();
    g.extend([0.21, 0.77, 1.3, 2.2, 2.9, 3.7, 4.4, 5.1, 5.9].map(Angle::Radians));
    g.push(Angle::pi_frac(1, 5));
    g
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Checks (p1)–(p5) for degree `d`.
pub fn verify_properties(d: u32) -> Result<PropertyReport> {
    if d < 2 {
        return Err(CoreError::DegreeTooLow { d, min: 2 });
    }
    let grid = mu_grid();
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    let mut p3 = Vec::new();
    let mut p4 = Vec::new();
    let mut p5 = Vec::new();
    let mut reference: Option<Vec<(CriticalFamily, [f64; 2])>> = None;
    let s3 = 3.0 * 3f64.sqrt();

    for mu in &grid {
        let curve = build_pd(d, mu, CoefficientMode::Float)?;
        let der = CurveDerivatives::new(&curve.poly)?;
        let pts = enumerate_for(&curve)?;
        let allowed: Vec<f64> = std::iter::once(0.0).chain(ZetaBranch::ALL.iter().map(|&b| zeta(b, mu))).collect();

        // (p1) every observed value is one of the four
        for p in &pts {
            let observed = der.p.eval_f64(&p.xy);
            if !allowed.iter().any(|&z| close(observed, z)) {
                p1.push(format!("μ={mu}: value {observed} at {:?}", p.xy));
            }
        }

        // (p2) A/B/C keep their coordinates and stay critical
        let abc: Vec<(CriticalFamily, [f64; 2])> =
            pts.iter().filter(|p| !p.family.is_d()).map(|p| (p.family, p.xy)).collect();
        for (_, xy) in &abc {
            if !der.is_critical(xy[0], xy[1]) {
                p2.push(format!("μ={mu}: {xy:?} not critical"));
            }
        }
        match &reference {
            None => reference = Some(abc),
            Some(r) => {
                let same = r.len() == abc.len()
                    && r.iter().zip(&abc).all(|(a, b)| a.0 == b.0 && (a.1[0] - b.1[0]).hypot(a.1[1] - b.1[1]) < 1e-10);
                if !same {
                    p2.push(format!("μ={mu}: A/B/C coordinates moved"));
                }
            }
        }

        let extrema = |class: HessianClass| -> Vec<f64> {
            pts.iter().filter(|p| p.hessian_class == class).map(|p| der.p.eval_f64(&p.xy)).collect()
        };
        let (maxima, minima) = (extrema(HessianClass::Max), extrema(HessianClass::Min));

        if mu.in_lambda_sigma() {
            let plus = maxima.iter().all(|&v| close(v, 8.0)) && minima.iter().all(|&v| close(v, -1.0));
            let minus = minima.iter().all(|&v| close(v, -8.0)) && maxima.iter().all(|&v| close(v, 1.0));
            if !(plus || minus) || maxima.is_empty() && minima.is_empty() {
                p3.push(format!("μ={mu}: maxima {maxima:?} minima {minima:?}"));
            }
        }
        if mu.in_lambda_s() {
            let ok = maxima.iter().all(|&v| close(v, s3)) && minima.iter().all(|&v| close(v, -s3));
            if !ok {
                p4.push(format!("μ={mu}: maxima {maxima:?} minima {minima:?}"));
            }
        }
        if mu.in_lambda3() {
            let mut z: Vec<f64> = ZetaBranch::ALL.iter().map(|&b| zeta(b, mu)).collect();
            z.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
            let (z1, z2, z3) = (z[0], z[1], z[2]);
            let ordered =
                0.0 < z3.abs() && z3.abs() < 1.0 && 1.0 < z2.abs() && z2.abs() < s3 && s3 < z1.abs() && z1.abs() < 8.0;
            let signs = z1.signum() != z2.signum() && z2.signum() == z3.signum();
            let nonzero: Vec<f64> = pts.iter().map(|p| der.p.eval_f64(&p.xy)).filter(|v| v.abs() > 1e-6).collect();
            let covered = nonzero.iter().all(|&v| z.iter().any(|&w| close(v, w)));
            if !(ordered && signs && covered) {
                p5.push(format!("μ={mu}: ζ = {z:?}"));
            }
        }
    }
    let verdict = |fails: Vec<String>, ok: &str| {
        if fails.is_empty() {
            Verdict::new(true, ok)
        } else {
            Verdict::new(false, fails.join("; "))
        }
    };
    Ok(PropertyReport {
        d,
        p1: verdict(p1, "all critical values in {0, ζ_M, ζ_m1, ζ_m2}"),
        p2: verdict(p2, "A/B/C points fixed and critical across the μ grid"),
        p3: verdict(p3, "extrema 8 / −1 (or −8 / 1) on Λ_Σ"),
        p4: verdict(p4, "extrema ±3√3 on Λ_S"),
        p5: verdict(p5, "ordering and sign pattern on Λ₃ samples"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(pts: &[CriticalPoint], f: CriticalFamily) -> usize {
        family_count(pts, f)
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(ZetaBranch::M, &Angle::zero()) - 8.0).abs() < 1e-15);
        assert!((zeta(ZetaBranch::M, &Angle::pi_frac(1, 6)) - 3.0 * 3f64.sqrt()).abs() < 1e-14);
        for i in 0..100 {
            let mu = Angle::Radians(i as f64 * 0.0731);
            for b in ZetaBranch::ALL {
                assert!((zeta(b, &mu) - zeta_cubed(b, &mu)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn d5_family_a() {
        let pts = enumerate(5, &Angle::zero()).unwrap();
        let a: Vec<_> = pts.iter().filter(|p| p.family == CriticalFamily::A).collect();
        assert_eq!(a.len(), 2);
        let uv: Vec<_> = a.iter().map(|p| p.uv_exact.clone().unwrap()).collect();
        assert!(uv.contains(&(rat(4, 15), rat(1, 15))));
        assert!(uv.contains(&(rat(7, 15), rat(-2, 15))));
        assert!(a.iter().all(|p| p.hessian_class == HessianClass::Max));
        let dpts: Vec<_> = pts.iter().filter(|p| p.family.is_d()).collect();
        assert!(dpts.iter().all(|p| p.hessian_class == HessianClass::Saddle));
    }

    #[test]
    fn generic_d_total() {
        for d in [4u32, 5, 6, 7] {
            let pts = enumerate(d, &Angle::Radians(0.4)).unwrap();
            let n: usize =
                [CriticalFamily::D1, CriticalFamily::D2, CriticalFamily::D3].iter().map(|&f| count(&pts, f)).sum();
            assert_eq!(n, (d * (d - 1) / 2) as usize, "d={d}");
        }
    }

    #[test]
    fn abc_counts() {
        for d in [4u32, 5, 6, 7, 9] {
            let pts = enumerate(d, &Angle::zero()).unwrap();
            let got = [CriticalFamily::A, CriticalFamily::B, CriticalFamily::C].map(|f| count(&pts, f));
            assert_eq!(got, expected_abc(d), "d={d}");
        }
    }

    #[test]
    fn collapse_is_degenerate() {
        let pts = enumerate(5, &Angle::pi_frac(1, 6)).unwrap();
        let b: Vec<_> = pts.iter().filter(|p| p.family == CriticalFamily::B).collect();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|p| p.hessian_class == HessianClass::Degenerate));
        let on = pts.iter().filter(|p| p.on_deltoid).count();
        assert_eq!(on, 4);
    }

    #[test]
    fn gradient_residuals() {
        for d in 2..=8u32 {
            for mu in [Angle::zero(), Angle::Radians(0.3), Angle::pi_frac(1, 2), Angle::pi_frac(5, 6)] {
                let curve = build_pd(d, &mu, CoefficientMode::Float).unwrap();
                let der = CurveDerivatives::new(&curve.poly).unwrap();
                for p in enumerate_for(&curve).unwrap() {
                    assert!(der.is_critical(p.xy[0], p.xy[1]), "d={d} μ={mu} {p:?}");
                }
            }
        }
    }

    #[test]
    fn properties_small_degrees() {
        for d in [4u32, 5] {
            let r = verify_properties(d).unwrap();
            assert!(r.all_pass(), "{r:?}");
        }
    }
}
