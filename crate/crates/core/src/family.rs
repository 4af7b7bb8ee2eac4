//! The degree-`d` family `P_d(x, y, μ)`: `λ_{d,μ}` times the product of `d`
//! deltoid tangent lines with equally spaced orientations.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;

use deltoid_algebra::{int, rat, Coeff, MPoly, QSqrt3, Rational};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::angle::{cos_pi, sin_pi, Angle};
use crate::error::{CoreError, Result};

/// Tolerance for merging float intersection points.
pub const CLUSTER_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientMode {
    Exact,
    Float,
}

/// One line `A·x + B·y + C = 0` of the arrangement.
#[derive(Clone, Debug, Serialize)]
pub struct LineSpec {
    pub s: i32,
    /// Orientation angle in radians.
    pub phi: f64,
    pub vertical: bool,
    /// `(A, B, C)`; `B = 1` for non-vertical lines, `(1, 0, 1)` for `x + 1 = 0`.
    pub coeffs: [f64; 3],
    #[serde(skip)]
    pub exact: Option<[QSqrt3; 3]>,
}

impl LineSpec {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.coeffs[0] * x + self.coeffs[1] * y + self.coeffs[2]
    }
}

/// `λ_{d,μ}` and, in the vertical-line case, the integer `m` with
/// `μ = (6m − 3d − 1)π/6`.
#[derive(Clone, Debug, Serialize)]
pub struct Lambda {
    pub value: f64,
    pub vertical_m: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct FamilyCurve {
    pub d: u32,
    pub mu: Angle,
    pub lines: Vec<LineSpec>,
    pub lambda: Lambda,
    pub mode: CoefficientMode,
    /// Expanded polynomial in floating point (always present).
    pub poly: MPoly<f64>,
    /// Exact rational expansion, present in exact mode.
    pub exact: Option<MPoly<Rational>>,
}

impl FamilyCurve {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.poly.eval_f64(&[x, y])
    }

    pub fn scale(&self) -> f64 {
        self.poly.max_abs_coeff()
    }
}

/// Legal line indices `s` for degree `d`.
pub fn index_range(d: u32) -> (i32, i32) {
    let d = d as i32;
    (-(d - 2).div_euclid(2), (d + 1).div_euclid(2))
}

/// `φ/π` when μ is a rational multiple of π.
fn phi_over_pi(d: u32, mu: &Angle, s: i32) -> Option<Rational> {
    let r = mu.pi_multiple()?;
    let d = d as i64;
    Some(rat(6 * s as i64 - 1, 6 * d) - r / int(d))
}

fn phi_radians(d: u32, mu: &Angle, s: i32) -> f64 {
    match phi_over_pi(d, mu, s) {
        Some(q) => Coeff::to_f64(&q) * PI,
        None => PI * (6.0 * s as f64 - 1.0) / (6.0 * d as f64) - mu.radians() / d as f64,
    }
}

fn is_vertical(d: u32, mu: &Angle, s: i32) -> bool {
    match phi_over_pi(d, mu, s) {
        Some(q) => (q - rat(1, 2)).is_integer(),
        None => phi_radians(d, mu, s).cos().abs() < 1e-12,
    }
}

// Exact values for multiples of π/12 and π/6 inside Q(√3).
fn q3(a: Rational, b: Rational) -> QSqrt3 {
    QSqrt3::new(a, b)
}

fn tan_twelfth(j: i64) -> Option<QSqrt3> {
    let j = j.rem_euclid(12);
    let (a, b) = match j {
        0 => (int(0), int(0)),
        1 => (int(2), int(-1)),
        2 => (int(0), rat(1, 3)),
        3 => (int(1), int(0)),
        4 => (int(0), int(1)),
        5 => (int(2), int(1)),
        6 => return None,
        7 => (int(-2), int(-1)),
        8 => (int(0), int(-1)),
        9 => (int(-1), int(0)),
        10 => (int(0), rat(-1, 3)),
        _ => (int(-2), int(1)),
    };
    Some(q3(a, b))
}

fn cos_sixth(k: i64) -> QSqrt3 {
    let (a, b) = match k.rem_euclid(12) {
        0 => (int(1), int(0)),
        1 => (int(0), rat(1, 2)),
        2 => (rat(1, 2), int(0)),
        3 => (int(0), int(0)),
        4 => (rat(-1, 2), int(0)),
        5 => (int(0), rat(-1, 2)),
        6 => (int(-1), int(0)),
        7 => (int(0), rat(-1, 2)),
        8 => (rat(-1, 2), int(0)),
        9 => (int(0), int(0)),
        10 => (rat(1, 2), int(0)),
        _ => (int(0), rat(1, 2)),
    };
    q3(a, b)
}

fn sin_sixth(k: i64) -> QSqrt3 {
    cos_sixth(k - 3)
}

/// Line `L_{d,μ,s}`. The vertical case is the line `x + 1 = 0`.
pub fn line_for(d: u32, mu: &Angle, s: i32) -> Result<LineSpec> {
    if d == 0 {
        return Err(CoreError::DegreeTooLow { d, min: 1 });
    }
    let (lo, hi) = index_range(d);
    if s < lo || s > hi {
        return Err(CoreError::LineIndexOutOfRange { d, s, lo, hi });
    }
    let phi = phi_radians(d, mu, s);
    let exact = phi_over_pi(d, mu, s)
        .map(|q| q * int(12))
        .filter(|j| j.is_integer())
        .and_then(|j| j.to_integer().to_i64())
        .map(|j| exact_line(j));
    if is_vertical(d, mu, s) {
        return Ok(LineSpec {
            s,
            phi,
            vertical: true,
            coeffs: [1.0, 0.0, 1.0],
            exact: Some([QSqrt3::one(), QSqrt3::zero(), QSqrt3::one()]),
        });
    }
    let (t, c2, s2) = match phi_over_pi(d, mu, s) {
        Some(q) => {
            let two_q = &q * int(2);
            (sin_pi(&q) / cos_pi(&q), cos_pi(&two_q), sin_pi(&two_q))
        }
        None => (phi.tan(), (2.0 * phi).cos(), (2.0 * phi).sin()),
    };
    Ok(LineSpec { s, phi, vertical: false, coeffs: [-t, 1.0, c2 * t + s2], exact: exact.flatten() })
}

// Literal λ·∏L coefficients for φ = jπ/12; `None` in the vertical case.
fn exact_line(j: i64) -> Option<[QSqrt3; 3]> {
    let t = tan_twelfth(j)?;
    let c = cos_sixth(j) * t.clone() + sin_sixth(j);
    Some([-t, QSqrt3::one(), c])
}

/// `λ_{d,μ}`.
pub fn lambda_of(d: u32, mu: &Angle) -> Lambda {
    if let Some(k) = mu.sixths() {
        // μ = kπ/6 = (6m − 3d − 1)π/6
        let num = k + 3 * d as i64 + 1;
        if num.rem_euclid(6) == 0 {
            let m = num / 6;
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            return Lambda { value: sign * 2.0 * d as f64, vertical_m: Some(m) };
        }
    }
    let shifted = match mu.pi_multiple() {
        Some(r) => cos_pi(&(r + rat(3 * d as i64 + 4, 6))),
        None => (mu.radians() + d as f64 * PI / 2.0 + 2.0 * PI / 3.0).cos(),
    };
    Lambda { value: 2.0 * shifted, vertical_m: None }
}

pub fn exact_mode_available(d: u32, mu: &Angle) -> bool {
    d > 0 && 12 % d == 0 && mu.pi_multiple().is_some() && lambda_of(d, mu).vertical_m.is_some()
}

/// Expands `P_d(x, y, μ)`.
pub fn build_pd(d: u32, mu: &Angle, mode: CoefficientMode) -> Result<FamilyCurve> {
    if d == 0 {
        return Err(CoreError::DegreeTooLow { d, min: 1 });
    }
    let (lo, hi) = index_range(d);
    let lines = (lo..=hi).map(|s| line_for(d, mu, s)).collect::<Result<Vec<_>>>()?;
    let lambda = lambda_of(d, mu);
    let (poly, exact) = match mode {
        CoefficientMode::Float => (float_product(d, mu, lo, hi), None),
        CoefficientMode::Exact => {
            if !exact_mode_available(d, mu) {
                return Err(CoreError::ExactModeUnavailable { d, mu: mu.to_string() });
            }
            let p = exact_product(&lines, lambda.vertical_m.expect("vertical case"), d)?;
            (p.to_float(), Some(p))
        }
    };
    Ok(FamilyCurve { d, mu: mu.clone(), lines, lambda, mode, poly, exact })
}

// λ·∏L = (−1)^(d+s0)·2^d·∏(y cosφ − x sinφ + sin 3φ), which stays bounded as
// a line turns vertical.
fn float_product(d: u32, mu: &Angle, lo: i32, hi: i32) -> MPoly<f64> {
    let sign = if (d as i32 + lo).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mut acc = MPoly::constant(2, sign * 2f64.powi(d as i32));
    for s in lo..=hi {
        let (sin_p, cos_p, sin_3p) = match phi_over_pi(d, mu, s) {
            Some(q) => (sin_pi(&q), cos_pi(&q), sin_pi(&(q * int(3)))),
            None => {
                let phi = phi_radians(d, mu, s);
                (phi.sin(), phi.cos(), (3.0 * phi).sin())
            }
        };
        let line = MPoly::from_terms(2, [([1, 0, 0], -sin_p), ([0, 1, 0], cos_p), ([0, 0, 0], sin_3p)]);
        acc = &acc * &line;
    }
    acc
}

fn exact_product(lines: &[LineSpec], m: i64, d: u32) -> Result<MPoly<Rational>> {
    let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut acc = MPoly::constant(2, QSqrt3::from_i64(sign * 2 * d as i64));
    for l in lines {
        let [a, b, c] = l.exact.clone().ok_or(CoreError::IrrationalCoefficients)?;
        let line = MPoly::from_terms(2, [([1, 0, 0], a), ([0, 1, 0], b), ([0, 0, 0], c)]);
        acc = &acc * &line;
    }
    let mut terms = Vec::with_capacity(acc.len());
    for (e, c) in acc.terms() {
        terms.push((*e, c.as_rational().ok_or(CoreError::IrrationalCoefficients)?.clone()));
    }
    Ok(MPoly::from_terms(2, terms))
}

/// The deltoid quartic `Q_δ = (x²+y²)² − 8(x³−3xy²) + 18(x²+y²) − 27`.
pub fn deltoid() -> MPoly<Rational> {
    MPoly::from_terms(
        2,
        [
            ([4, 0, 0], int(1)),
            ([2, 2, 0], int(2)),
            ([0, 4, 0], int(1)),
            ([3, 0, 0], int(-8)),
            ([1, 2, 0], int(24)),
            ([2, 0, 0], int(18)),
            ([0, 2, 0], int(18)),
            ([0, 0, 0], int(-27)),
        ],
    )
}

pub fn deltoid_value(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    r2 * r2 - 8.0 * (x * x * x - 3.0 * x * y * y) + 18.0 * r2 - 27.0
}

/// The named curves with printed equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GoldenCurve {
    M10,
    M8Tilde,
    C9,
    Deltoid,
}

impl GoldenCurve {
    pub const ALL: [GoldenCurve; 4] = [GoldenCurve::M10, GoldenCurve::M8Tilde, GoldenCurve::C9, GoldenCurve::Deltoid];

    pub fn name(self) -> &'static str {
        match self {
            GoldenCurve::M10 => "M10",
            GoldenCurve::M8Tilde => "M8tilde",
            GoldenCurve::C9 => "C9",
            GoldenCurve::Deltoid => "deltoid",
        }
    }

    pub fn degree(self) -> u32 {
        match self {
            GoldenCurve::M10 => 10,
            GoldenCurve::M8Tilde => 8,
            GoldenCurve::C9 => 9,
            GoldenCurve::Deltoid => 4,
        }
    }
}

impl FromStr for GoldenCurve {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        GoldenCurve::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CoreError::UnknownCurve(s.to_string()))
    }
}

fn rpoly(terms: &[([u32; 2], Rational)]) -> MPoly<Rational> {
    MPoly::from_terms(2, terms.iter().map(|(e, c)| ([e[0], e[1], 0], c.clone())))
}

/// Affine equation of a golden curve, exact over Q.
pub fn golden_curve(which: GoldenCurve) -> MPoly<Rational> {
    let mut factors = golden_factors(which).into_iter();
    let first = factors.next().expect("at least one factor");
    factors.fold(first, |acc, f| &acc * &f)
}

/// The factors a golden curve is printed as.
pub fn golden_factors(which: GoldenCurve) -> Vec<MPoly<Rational>> {
    match which {
        GoldenCurve::Deltoid => vec![deltoid()],
        GoldenCurve::M10 => {
            let p6 = build_pd(6, &Angle::pi_frac(5, 6), CoefficientMode::Exact)
                .expect("P6(5π/6) is exact")
                .exact
                .expect("exact polynomial");
            vec![p6, deltoid()]
        }
        GoldenCurve::C9 => {
            let (quintic, quartic) = c9_factors();
            vec![quintic, quartic]
        }
        GoldenCurve::M8Tilde => {
            let lines = rpoly(&[
                ([2, 1], int(-18)),
                ([3, 1], int(9)),
                ([2, 2], int(-9)),
                ([0, 3], int(2)),
                ([1, 3], int(-1)),
                ([0, 4], int(1)),
            ]);
            let rescaled_deltoid = rpoly(&[
                ([0, 0], int(-27)),
                ([2, 0], int(18)),
                ([3, 0], int(-8)),
                ([4, 0], int(1)),
                ([0, 2], int(6)),
                ([1, 2], int(8)),
                ([2, 2], rat(2, 3)),
                ([0, 4], rat(1, 9)),
            ]);
            vec![lines, rescaled_deltoid]
        }
    }
}

/// The two printed factors of C₉: five lines and a quartic.
pub fn c9_factors() -> (MPoly<Rational>, MPoly<Rational>) {
    let quintic = rpoly(&[
        ([2, 1], int(-48)),
        ([3, 1], int(48)),
        ([4, 1], int(-12)),
        ([0, 3], int(16)),
        ([1, 3], int(-16)),
        ([2, 3], int(40)),
        ([0, 5], int(-12)),
    ]);
    let quartic = rpoly(&[
        ([0, 0], int(-27)),
        ([2, 0], int(18)),
        ([3, 0], int(-8)),
        ([4, 0], int(1)),
        ([0, 2], int(18)),
        ([1, 2], int(24)),
        ([2, 2], int(2)),
        ([0, 4], int(1)),
    ]);
    (quintic, quartic)
}

/// How the golden curves relate: C₉ is M₁₀ without the line `x + 1 = 0`,
/// and C₉ keeps the deltoid as a factor.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub m10_remainder_zero: bool,
    /// `c` with `M₁₀ / (x + 1) = c · C₉`, if one exists.
    #[serde(serialize_with = "ser_opt_rational")]
    pub m10_over_c9: Option<Rational>,
    pub c9_quartic_is_deltoid: bool,
}

impl StructureReport {
    pub fn passes(&self) -> bool {
        self.m10_remainder_zero && self.m10_over_c9.is_some() && self.c9_quartic_is_deltoid
    }
}

pub(crate) fn ser_opt_rational<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub fn structure_report() -> Result<StructureReport> {
    let m10 = golden_curve(GoldenCurve::M10);
    let c9 = golden_curve(GoldenCurve::C9);
    let line = rpoly(&[([1, 0], int(1)), ([0, 0], int(1))]);
    let (q, r) = m10.div_rem(&line)?;
    let m10_over_c9 = match (q.terms().next_back(), c9.terms().next_back()) {
        (Some((eq, cq)), Some((ec, cc))) if eq == ec => {
            let c = cq / cc;
            q.checked_sub(&c9.scale(&c))?.is_zero().then_some(c)
        }
        _ => None,
    };
    Ok(StructureReport {
        m10_remainder_zero: r.is_zero(),
        m10_over_c9,
        c9_quartic_is_deltoid: c9_factors().1 == deltoid(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrangementPoint {
    pub x: f64,
    pub y: f64,
    /// Number of lines through the point.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrangementCensus {
    pub exact: bool,
    pub points: Vec<ArrangementPoint>,
    /// multiplicity → number of points
    pub by_multiplicity: BTreeMap<usize, usize>,
}

impl ArrangementCensus {
    pub fn count(&self, multiplicity: usize) -> usize {
        self.by_multiplicity.get(&multiplicity).copied().unwrap_or(0)
    }
}

/// Intersection points of the arrangement's lines, grouped by how many
/// lines pass through each.
pub fn singularity_census(curve: &FamilyCurve) -> Result<ArrangementCensus> {
    let all_exact = curve.mode == CoefficientMode::Exact && curve.lines.iter().all(|l| l.exact.is_some());
    let points = if all_exact { exact_points(&curve.lines)? } else { float_points(&curve.lines)? };
    let mut by_multiplicity = BTreeMap::new();
    for p in &points {
        *by_multiplicity.entry(p.multiplicity).or_insert(0) += 1;
    }
    Ok(ArrangementCensus { exact: all_exact, points, by_multiplicity })
}

fn float_points(lines: &[LineSpec]) -> Result<Vec<ArrangementPoint>> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let [a1, b1, c1] = lines[i].coeffs;
            let [a2, b2, c2] = lines[j].coeffs;
            let det = a1 * b2 - a2 * b1;
            let scale = (a1.hypot(b1) * a2.hypot(b2)).max(f64::MIN_POSITIVE);
            if det.abs() < 1e-12 * scale {
                let n1 = a1.hypot(b1).max(c1.abs());
                let n2 = a2.hypot(b2).max(c2.abs());
                if (a1 * c2 - a2 * c1).abs() < 1e-12 * n1 * n2 && (b1 * c2 - b2 * c1).abs() < 1e-12 * n1 * n2 {
                    return Err(CoreError::DuplicateLines(i, j));
                }
                continue;
            }
            let x = (b1 * c2 - b2 * c1) / det;
            let y = (c1 * a2 - c2 * a1) / det;
            if !pts.iter().any(|&(px, py)| (px - x).abs() <= CLUSTER_TOL && (py - y).abs() <= CLUSTER_TOL) {
                pts.push((x, y));
            }
        }
    }
    Ok(pts
        .into_iter()
        .map(|(x, y)| {
            let multiplicity =
                lines.iter().filter(|l| l.eval(x, y).abs() / l.coeffs[0].hypot(l.coeffs[1]) < CLUSTER_TOL).count();
            ArrangementPoint { x, y, multiplicity }
        })
        .collect())
}

fn exact_points(lines: &[LineSpec]) -> Result<Vec<ArrangementPoint>> {
    let coeffs: Vec<[QSqrt3; 3]> = lines.iter().map(|l| l.exact.clone().expect("exact line")).collect();
    let mut pts: Vec<(QSqrt3, QSqrt3)> = Vec::new();
    for i in 0..coeffs.len() {
        for j in i + 1..coeffs.len() {
            let [a1, b1, c1] = coeffs[i].clone();
            let [a2, b2, c2] = coeffs[j].clone();
            let det = a1.clone() * b2.clone() - a2.clone() * b1.clone();
            if det.is_zero() {
                let ac = a1.clone() * c2.clone() - a2.clone() * c1.clone();
                let bc = b1.clone() * c2.clone() - b2.clone() * c1.clone();
                if ac.is_zero() && bc.is_zero() {
                    return Err(CoreError::DuplicateLines(i, j));
                }
                continue;
            }
            let inv = det.inv()?;
            let x = (b1 * c2.clone() - b2 * c1.clone()) * inv.clone();
            let y = (c1 * a2 - c2 * a1) * inv;
            if !pts.iter().any(|p| p.0 == x && p.1 == y) {
                pts.push((x, y));
            }
        }
    }
    Ok(pts
        .into_iter()
        .map(|(x, y)| {
            let multiplicity = coeffs
                .iter()
                .filter(|[a, b, c]| (a.clone() * x.clone() + b.clone() * y.clone() + c.clone()).is_zero())
                .count();
            ArrangementPoint { x: x.to_f64(), y: y.to_f64(), multiplicity }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn index_counts() {
        for d in 1..=12 {
            let (lo, hi) = index_range(d);
            assert_eq!((hi - lo + 1) as u32, d, "d = {d}");
        }
        assert_eq!(index_range(1), (1, 1));
        assert_eq!(index_range(6), (-2, 3));
    }

    #[test]
    fn horizontal_tangent() {
        // d=6, μ=5π/6, s=1 gives φ = 0: the line y = 0.
        let l = line_for(6, &Angle::pi_frac(5, 6), 1).unwrap();
        assert!(!l.vertical);
        assert!(close(l.phi, 0.0, 1e-15));
        assert_eq!(l.coeffs, [-0.0, 1.0, 0.0]);
        let [a, b, c] = l.exact.unwrap();
        assert!(a.is_zero() && b == QSqrt3::one() && c.is_zero());
    }

    #[test]
    fn vertical_special_line() {
        let l = line_for(6, &Angle::pi_frac(5, 6), -2).unwrap();
        assert!(l.vertical);
        assert!(close(l.phi, -PI / 2.0, 1e-15));
        assert_eq!(l.coeffs, [1.0, 0.0, 1.0]);
        assert!(matches!(line_for(6, &Angle::pi_frac(5, 6), 4), Err(CoreError::LineIndexOutOfRange { .. })));
    }

    #[test]
    fn degree_one_line() {
        let l = line_for(1, &Angle::zero(), 1).unwrap();
        assert!(close(l.phi, 5.0 * PI / 6.0, 1e-15));
        assert_eq!(build_pd(1, &Angle::zero(), CoefficientMode::Float).unwrap().poly.degree(), 1);
    }

    #[test]
    fn lambda_values() {
        let l = lambda_of(6, &Angle::pi_frac(5, 6));
        assert_eq!((l.value, l.vertical_m), (12.0, Some(4)));
        let l = lambda_of(5, &Angle::zero());
        assert!(close(l.value, -(3f64).sqrt(), 1e-15));
        assert_eq!(l.vertical_m, None);
        let l = lambda_of(2, &Angle::pi_frac(-1, 6));
        assert_eq!((l.value, l.vertical_m), (-4.0, Some(1)));
    }

    #[test]
    fn exact_sextic_is_rational_and_matches_float() {
        let mu = Angle::pi_frac(5, 6);
        let exact = build_pd(6, &mu, CoefficientMode::Exact).unwrap();
        let p = exact.exact.as_ref().unwrap();
        assert_eq!(p.degree(), 6);
        let float = build_pd(6, &mu, CoefficientMode::Float).unwrap();
        let diff = &p.to_float() - &float.poly;
        assert!(diff.max_abs_coeff() < 1e-12 * float.scale(), "{diff}");
    }

    #[test]
    fn exact_mode_domain() {
        for d in [1, 2, 3, 4, 6, 12] {
            for m in -1..3 {
                let mu = Angle::pi_frac(6 * m - 3 * d as i64 - 1, 6);
                let c = build_pd(d, &mu, CoefficientMode::Exact).unwrap();
                let f = build_pd(d, &mu, CoefficientMode::Float).unwrap();
                let diff = &c.exact.unwrap().to_float() - &f.poly;
                assert!(diff.max_abs_coeff() < 1e-11 * f.scale(), "d={d} m={m}");
            }
        }
        assert!(matches!(
            build_pd(5, &Angle::pi_frac(1, 6), CoefficientMode::Exact),
            Err(CoreError::ExactModeUnavailable { .. })
        ));
        assert!(matches!(
            build_pd(6, &Angle::zero(), CoefficientMode::Exact),
            Err(CoreError::ExactModeUnavailable { .. })
        ));
    }

    #[test]
    fn float_agrees_with_line_product_near_vertical() {
        // Slightly off the vertical-line angle the tan form is still usable.
        let d = 4;
        let mu = Angle::Radians(-13.0 * PI / 6.0 + 1e-3);
        let c = build_pd(d, &mu, CoefficientMode::Float).unwrap();
        for (x, y) in [(0.3, -0.2), (1.1, 0.7), (-0.5, 0.4)] {
            let direct: f64 = c.lambda.value * c.lines.iter().map(|l| l.eval(x, y)).product::<f64>();
            assert!(close(c.eval(x, y), direct, 1e-9 * direct.abs().max(1.0)));
        }
    }

    #[test]
    fn lines_lie_on_zero_set() {
        let c = build_pd(7, &Angle::Radians(0.91), CoefficientMode::Float).unwrap();
        for l in &c.lines {
            let [a, b, cc] = l.coeffs;
            let n2 = a * a + b * b;
            let n = n2.sqrt();
            for t in [-1.0, 0.0, 0.5, 2.0] {
                let x = -a * cc / n2 - b / n * t;
                let y = -b * cc / n2 + a / n * t;
                assert!(c.eval(x, y).abs() < 1e-9 * c.scale());
            }
        }
    }

    #[test]
    fn family_a_value_is_eight() {
        let c = build_pd(5, &Angle::zero(), CoefficientMode::Float).unwrap();
        let (u, v) = (4.0 / 15.0, 1.0 / 15.0);
        let t = 2.0 * PI;
        let x = (t * (u + v)).cos() + (t * u).cos() + (t * v).cos();
        let y = (t * (u + v)).sin() - (t * u).sin() - (t * v).sin();
        assert!(close(c.eval(x, y), 8.0, 1e-10));
    }

    #[test]
    fn m10_minus_a_line_is_c9() {
        let r = structure_report().unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn golden_names() {
        for g in GoldenCurve::ALL {
            assert_eq!(g.name().parse::<GoldenCurve>().unwrap(), g);
            assert_eq!(golden_curve(g).degree(), g.degree());
        }
        assert!("T8".parse::<GoldenCurve>().is_err());
    }

    #[test]
    fn census_simple_arrangement() {
        let c = build_pd(5, &Angle::zero(), CoefficientMode::Float).unwrap();
        let census = singularity_census(&c).unwrap();
        assert_eq!(census.count(2), 10);
        assert_eq!(census.count(3), 0);
    }

    #[test]
    fn census_triple_points() {
        let c = build_pd(5, &Angle::pi_frac(1, 6), CoefficientMode::Float).unwrap();
        let census = singularity_census(&c).unwrap();
        assert_eq!(census.count(3), 2);
        assert_eq!(census.count(2), 10 - 2 * 3);
    }

    #[test]
    fn census_two_lines() {
        let c = build_pd(2, &Angle::Radians(0.4), CoefficientMode::Float).unwrap();
        let census = singularity_census(&c).unwrap();
        assert_eq!(census.points.len(), 1);
        assert_eq!(census.count(2), 1);
    }

    #[test]
    fn exact_census_of_m10_lines() {
        let c = build_pd(6, &Angle::pi_frac(5, 6), CoefficientMode::Exact).unwrap();
        let census = singularity_census(&c).unwrap();
        assert!(census.exact);
        // simplicial arrangement: four triple points plus the remaining doubles
        assert_eq!(census.count(3), 4);
        assert_eq!(census.count(2), 15 - 4 * 3);
    }

    #[test]
    fn duplicate_lines_rejected() {
        let mut c = build_pd(3, &Angle::Radians(0.2), CoefficientMode::Float).unwrap();
        c.lines[1] = c.lines[0].clone();
        assert!(matches!(singularity_census(&c), Err(CoreError::DuplicateLines(0, 1))));
    }
}
