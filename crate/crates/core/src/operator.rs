//! The second-order operator `L₂`, its carré-du-champ, the eigenfunction
//! identity for `J_d`, pointwise flatness of the cometric, and the `Z`-map.

use deltoid_algebra::{int, rat, Coeff, MPoly, Rational};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angle::{cos_pi, Angle};
use crate::error::{CoreError, Result};
use crate::family::{build_pd, deltoid, CoefficientMode};

/// `L f = Σ g^{ij} ∂ᵢ∂ⱼ f + Σ bⁱ ∂ᵢ f` on two variables.
#[derive(Clone, Debug)]
pub struct DiffusionOperator<C: Coeff> {
    pub gij: [[MPoly<C>; 2]; 2],
    pub bi: [MPoly<C>; 2],
}

fn poly2(terms: &[([u32; 3], (i64, i64))]) -> MPoly<Rational> {
    MPoly::from_terms(2, terms.iter().map(|(e, (n, d))| (*e, rat(*n, *d))))
}

/// Cometric entries of `L₂` over the rationals.
pub fn l2_cometric() -> [[MPoly<Rational>; 2]; 2] {
    // g11 = −¼(3x² − y² − 6x − 9)
    let g11 = poly2(&[([2, 0, 0], (-3, 4)), ([0, 2, 0], (1, 4)), ([1, 0, 0], (3, 2)), ([0, 0, 0], (9, 4))]);
    // g12 = −½(2xy + 3y)
    let g12 = poly2(&[([1, 1, 0], (-1, 1)), ([0, 1, 0], (-3, 2))]);
    // g22 = −¼(3y² − x² + 6x − 9)
    let g22 = poly2(&[([0, 2, 0], (-3, 4)), ([2, 0, 0], (1, 4)), ([1, 0, 0], (-3, 2)), ([0, 0, 0], (9, 4))]);
    [[g11, g12.clone()], [g12, g22]]
}

impl<C: Coeff> DiffusionOperator<C> {
    pub fn l2() -> Self {
        let g = l2_cometric();
        let conv = |p: &MPoly<Rational>| p.map_coeffs(C::from_rational);
        DiffusionOperator {
            gij: [[conv(&g[0][0]), conv(&g[0][1])], [conv(&g[1][0]), conv(&g[1][1])]],
            bi: [-&MPoly::var(2, 0), -&MPoly::var(2, 1)],
        }
    }

    pub fn apply(&self, f: &MPoly<C>) -> Result<MPoly<C>> {
        let mut out = MPoly::zero(2);
        for i in 0..2 {
            let fi = f.diff(i)?;
            out = out.checked_add(&self.bi[i].checked_mul(&fi)?)?;
            for j in 0..2 {
                let fij = fi.diff(j)?;
                out = out.checked_add(&self.gij[i][j].checked_mul(&fij)?)?;
            }
        }
        Ok(out)
    }

    /// `Γ(f, g) = ½(L(fg) − f·Lg − g·Lf)`.
    pub fn gamma(&self, f: &MPoly<C>, g: &MPoly<C>) -> Result<MPoly<C>> {
        let lfg = self.apply(&f.checked_mul(g)?)?;
        let flg = f.checked_mul(&self.apply(g)?)?;
        let glf = g.checked_mul(&self.apply(f)?)?;
        let half = C::from_rational(&rat(1, 2));
        Ok(lfg.checked_sub(&flg)?.checked_sub(&glf)?.scale(&half))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub d: u32,
    pub mu: String,
    pub mode: CoefficientMode,
    /// Exact mode: residual polynomial is identically zero.
    pub exact_zero: Option<bool>,
    pub max_residual: f64,
    pub max_coefficient: f64,
    pub relative_residual: f64,
}

impl EigenReport {
    pub fn passes(&self, rel_tol: f64) -> bool {
        match self.exact_zero {
            Some(z) => z,
            None => self.relative_residual < rel_tol,
        }
    }
}

/// `2cos 3μ`, exact when `3μ` is a multiple of `π/2`.
fn two_cos_3mu(mu: &Angle) -> (f64, Option<Rational>) {
    if let Some(k) = mu.sixths() {
        let c = [1, 0, -1, 0][k.rem_euclid(4) as usize];
        return (2.0 * c as f64, Some(int(2 * c)));
    }
    let v = match mu.pi_multiple() {
        Some(r) => cos_pi(&(r * int(3))),
        None => (3.0 * mu.radians()).cos(),
    };
    (2.0 * v, None)
}

/// Residual of `L₂J_d + d²J_d` with `J_d = P_d − 2cos 3μ`.
pub fn verify_eigen(d: u32, mu: &Angle, mode: CoefficientMode) -> Result<EigenReport> {
    let curve = build_pd(d, mu, mode)?;
    let (c_f, c_q) = two_cos_3mu(mu);
    let d2 = (d as i64) * (d as i64);
    let report = |exact_zero, max_residual: f64, max_coefficient: f64| EigenReport {
        d,
        mu: mu.to_string(),
        mode,
        exact_zero,
        max_residual,
        max_coefficient,
        relative_residual: if max_coefficient > 0.0 { max_residual / max_coefficient } else { max_residual },
    };
    match (&curve.exact, c_q) {
        (Some(p), Some(c)) => {
            let j = p.checked_sub(&MPoly::constant(2, c))?;
            let op = DiffusionOperator::<Rational>::l2();
            let res = op.apply(&j)?.checked_add(&j.scale(&int(d2)))?;
            Ok(report(Some(res.is_zero()), res.max_abs_coeff(), j.max_abs_coeff()))
        }
        _ => {
            let j = curve.poly.checked_sub(&MPoly::constant(2, c_f))?;
            let op = DiffusionOperator::<f64>::l2();
            let res = op.apply(&j)?.checked_add(&j.scale(&(d2 as f64)))?;
            Ok(report(None, res.max_abs_coeff(), j.max_abs_coeff()))
        }
    }
}

type M2 = [[Rational; 2]; 2];

fn m2_zero() -> M2 {
    [[Rational::zero(), Rational::zero()], [Rational::zero(), Rational::zero()]]
}

fn m2_mul(a: &M2, b: &M2) -> M2 {
    let mut out = m2_zero();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        }
    }
    out
}

fn m2_add(a: &M2, b: &M2) -> M2 {
    let mut out = m2_zero();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &a[i][j] + &b[i][j];
        }
    }
    out
}

fn m2_neg(a: &M2) -> M2 {
    let mut out = m2_zero();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = -&a[i][j];
        }
    }
    out
}

fn m2_det(a: &M2) -> Rational {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

/// Exact metric data at one rational point.
#[derive(Clone, Debug)]
pub struct MetricPointData {
    pub point: (Rational, Rational),
    /// `g^{ij}`.
    pub cometric: M2,
    /// `g_ij`.
    pub metric: M2,
    /// `∂_k g_ij`, indexed `[k][i][j]`.
    pub dmetric: [M2; 2],
    /// `Γ^m_{jk}`, indexed `[m][j][k]`.
    pub christoffel: [M2; 2],
    /// `R^m_{ijk}`, indexed `[m][i][j][k]`.
    pub riemann: [[M2; 2]; 2],
    pub ricci: M2,
    pub scalar: Rational,
    pub det_cometric: Rational,
    pub det_metric: Rational,
    pub q_delta: Rational,
}

impl MetricPointData {
    pub fn riemann_components(&self) -> impl Iterator<Item = &Rational> {
        self.riemann.iter().flatten().flatten().flatten()
    }

    pub fn is_flat(&self) -> bool {
        self.riemann_components().all(Zero::is_zero)
            && self.ricci.iter().flatten().all(Zero::is_zero)
            && self.scalar.is_zero()
    }

    /// `det g^{ij} = −(3/16)·Q_δ` at the point.
    pub fn determinant_matches(&self) -> bool {
        self.det_cometric == &self.q_delta * rat(-3, 16)
    }

    pub fn summary(&self) -> FlatnessSummary {
        FlatnessSummary {
            point: [self.point.0.to_string(), self.point.1.to_string()],
            nonzero_riemann: self.riemann_components().filter(|r| !r.is_zero()).count(),
            ricci_zero: self.ricci.iter().flatten().all(Zero::is_zero),
            scalar_zero: self.scalar.is_zero(),
            det_cometric: self.det_cometric.to_string(),
            det_metric: self.det_metric.to_string(),
            q_delta: self.q_delta.to_string(),
            determinant_matches: self.determinant_matches(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessSummary {
    pub point: [String; 2],
    pub nonzero_riemann: usize,
    pub ricci_zero: bool,
    pub scalar_zero: bool,
    pub det_cometric: String,
    pub det_metric: String,
    pub q_delta: String,
    pub determinant_matches: bool,
}

fn eval_m2(g: &[[MPoly<Rational>; 2]; 2], p: &[Rational; 2]) -> Result<M2> {
    let mut out = m2_zero();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = g[i][j].eval(p)?;
        }
    }
    Ok(out)
}

fn diff_m2(g: &[[MPoly<Rational>; 2]; 2], k: usize) -> Result<[[MPoly<Rational>; 2]; 2]> {
    Ok([[g[0][0].diff(k)?, g[0][1].diff(k)?], [g[1][0].diff(k)?, g[1][1].diff(k)?]])
}

/// Christoffel symbols and Riemann tensor of `g_ij = (g^{ij})⁻¹` at `(x, y)`.
pub fn flatness_at(x: &Rational, y: &Rational) -> Result<MetricPointData> {
    let p = [x.clone(), y.clone()];
    let q_delta = deltoid().eval(&p)?;
    let gpoly = l2_cometric();
    let cg = eval_m2(&gpoly, &p)?;
    let det_c = m2_det(&cg);
    if det_c.is_zero() {
        return Err(CoreError::DegenerateMetric(x.to_string(), y.to_string()));
    }
    let g = [[&cg[1][1] / &det_c, -&cg[0][1] / &det_c], [-&cg[1][0] / &det_c, &cg[0][0] / &det_c]];
    let dpoly = [diff_m2(&gpoly, 0)?, diff_m2(&gpoly, 1)?];
    let dcg = [eval_m2(&dpoly[0], &p)?, eval_m2(&dpoly[1], &p)?];
    let mut ddcg = [[m2_zero(), m2_zero()], [m2_zero(), m2_zero()]];
    for l in 0..2 {
        for k in 0..2 {
            ddcg[l][k] = eval_m2(&diff_m2(&dpoly[k], l)?, &p)?;
        }
    }
    // ∂_k g = −g (∂_k G) g
    let dg = [0, 1].map(|k| m2_neg(&m2_mul(&m2_mul(&g, &dcg[k]), &g)));
    // ∂_l ∂_k g = −(∂_l g)(∂_k G)g − g(∂_l∂_k G)g − g(∂_k G)(∂_l g)
    let mut ddg = [[m2_zero(), m2_zero()], [m2_zero(), m2_zero()]];
    for l in 0..2 {
        for k in 0..2 {
            let a = m2_mul(&m2_mul(&dg[l], &dcg[k]), &g);
            let b = m2_mul(&m2_mul(&g, &ddcg[l][k]), &g);
            let c = m2_mul(&m2_mul(&g, &dcg[k]), &dg[l]);
            ddg[l][k] = m2_neg(&m2_add(&m2_add(&a, &b), &c));
        }
    }

    let half = rat(1, 2);
    // Γ^m_{jk} and ∂_l Γ^m_{jk}
    let mut chr = [m2_zero(), m2_zero()];
    let mut dchr = [[m2_zero(), m2_zero()], [m2_zero(), m2_zero()]]; // [l][m][j][k]
    for m in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let mut acc = Rational::zero();
                let mut dacc = [Rational::zero(), Rational::zero()];
                for i in 0..2 {
                    let bracket = &dg[k][i][j] + &dg[j][k][i] - &dg[i][j][k];
                    acc += &cg[i][m] * &bracket;
                    for l in 0..2 {
                        let dbracket = &ddg[l][k][i][j] + &ddg[l][j][k][i] - &ddg[l][i][j][k];
                        dacc[l] += &dcg[l][i][m] * &bracket + &cg[i][m] * &dbracket;
                    }
                }
                chr[m][j][k] = &acc * &half;
                for l in 0..2 {
                    dchr[l][m][j][k] = &dacc[l] * &half;
                }
            }
        }
    }
    let mut riemann = [[m2_zero(), m2_zero()], [m2_zero(), m2_zero()]];
    for m in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut r = &dchr[j][m][k][i] - &dchr[k][m][i][j];
                    for s in 0..2 {
                        r += &chr[s][k][i] * &chr[m][j][s] - &chr[s][i][j] * &chr[m][k][s];
                    }
                    riemann[m][i][j][k] = r;
                }
            }
        }
    }
    let mut ricci = m2_zero();
    for i in 0..2 {
        for k in 0..2 {
            ricci[i][k] = &riemann[0][i][0][k] + &riemann[1][i][1][k];
        }
    }
    let mut scalar = Rational::zero();
    for i in 0..2 {
        for k in 0..2 {
            scalar += &cg[i][k] * &ricci[i][k];
        }
    }
    let det_metric = m2_det(&g);
    Ok(MetricPointData {
        point: (x.clone(), y.clone()),
        cometric: cg,
        metric: g,
        dmetric: dg,
        christoffel: chr,
        riemann,
        ricci,
        scalar,
        det_cometric: det_c,
        det_metric,
        q_delta,
    })
}

/// True when `(x, y)` is strictly inside the deltoid.
pub fn inside_deltoid(x: &Rational, y: &Rational) -> bool {
    deltoid().eval(&[x.clone(), y.clone()]).map(|q| q.is_negative()).unwrap_or(false)
}

/// `n` seeded random rational points `p/q` with `q ≤ 97` strictly inside the
/// deltoid.
pub fn sample_interior_rationals(n: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let den = rng.gen_range(1..=97i64);
        let x = rat(rng.gen_range(-3 * den..=3 * den), den);
        let y = rat(rng.gen_range(-3 * den..=3 * den), den);
        if inside_deltoid(&x, &y) {
            out.push((x, y));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub samples: usize,
    pub seed: u64,
    pub flat: bool,
    pub determinant_matches: bool,
    pub points: Vec<FlatnessSummary>,
}

pub fn flatness_batch(samples: usize, seed: u64) -> Result<FlatnessReport> {
    let data =
        sample_interior_rationals(samples, seed).iter().map(|(x, y)| flatness_at(x, y)).collect::<Result<Vec<_>>>()?;
    Ok(FlatnessReport {
        samples,
        seed,
        flat: data.iter().all(MetricPointData::is_flat),
        determinant_matches: data.iter().all(MetricPointData::determinant_matches),
        points: data.iter().map(MetricPointData::summary).collect(),
    })
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

// a·z = Re(a z̄) with a ∈ {1, ω, ω̄}.
fn root_dots(x1: f64, x2: f64) -> [f64; 3] {
    [x1, -0.5 * x1 + 0.5 * SQRT3 * x2, -0.5 * x1 - 0.5 * SQRT3 * x2]
}

/// `Z(z) = e^{i(1·z)} + e^{i(ω·z)} + e^{i(ω̄·z)}`.
pub fn z_map(z: Complex64) -> Complex64 {
    root_dots(z.re, z.im).iter().map(|&t| Complex64::from_polar(1.0, t)).sum()
}

/// The printed Jacobian `4√3(cos 3x₁ − cos √3x₂)·sin √3x₂`.
pub fn jacobian_z(x1: f64, x2: f64) -> f64 {
    4.0 * SQRT3 * ((3.0 * x1).cos() - (SQRT3 * x2).cos()) * (SQRT3 * x2).sin()
}

/// Jacobian of `(Re Z, Im Z)` for `Z` as defined by [`z_map`]. It equals
/// `jacobian_z(x₁/2, x₂/2)/4`: the printed formula belongs to `z ↦ Z(2z)`.
pub fn jacobian_z_true(x1: f64, x2: f64) -> f64 {
    SQRT3 * ((1.5 * x1).cos() - (0.5 * SQRT3 * x2).cos()) * (0.5 * SQRT3 * x2).sin()
}

/// Sample points on the printed zero lines `3x₁ = ±√3x₂ + 2kπ`, `√3x₂ = lπ`.
pub fn jacobian_zero_lines(k: i32, l: i32, t: f64) -> [(f64, f64); 3] {
    use std::f64::consts::PI;
    let x2 = t;
    [
        ((SQRT3 * x2 + 2.0 * k as f64 * PI) / 3.0, x2),
        ((-SQRT3 * x2 + 2.0 * k as f64 * PI) / 3.0, x2),
        (t, l as f64 * PI / SQRT3),
    ]
}

/// Central-difference Laplacian of `Z`.
pub fn laplacian_fd(z: Complex64, h: f64) -> Complex64 {
    let f = |dx: f64, dy: f64| z_map(Complex64::new(z.re + dx, z.im + dy));
    (f(h, 0.0) + f(-h, 0.0) + f(0.0, h) + f(0.0, -h) - 4.0 * f(0.0, 0.0)) / (h * h)
}

/// `Γ(z,z)`, `Γ(z,z̄)`, `Γ(z̄,z̄)` at `(x, y)` from the real cometric by
/// bilinearity.
pub fn complex_gamma(x: f64, y: f64) -> [Complex64; 3] {
    let g = l2_cometric();
    let v = |p: &MPoly<Rational>| p.to_float().eval_f64(&[x, y]);
    let (g11, g12, g22) = (v(&g[0][0]), v(&g[0][1]), v(&g[1][1]));
    [Complex64::new(g11 - g22, 2.0 * g12), Complex64::new(g11 + g22, 0.0), Complex64::new(g11 - g22, -2.0 * g12)]
}

/// The printed complex form `−z² + 3z̄`, `9 − zz̄`, `−z̄² + 3z`.
pub fn printed_complex_gamma(z: Complex64) -> [Complex64; 3] {
    let zb = z.conj();
    [-z * z + 3.0 * zb, Complex64::new(9.0, 0.0) - z * zb, -zb * zb + 3.0 * z]
}

#[derive(Clone, Debug, Serialize)]
pub struct ZmapReport {
    pub samples: usize,
    pub max_laplacian_error: f64,
    pub max_deltoid_value: f64,
    pub max_gamma_zz_error: f64,
    pub max_gamma_zzbar_error: f64,
    /// `Γ(z,z̄)` against `(9 − zz̄)/2`.
    pub max_gamma_zzbar_half_error: f64,
    pub max_jacobian_line_value: f64,
    pub max_jacobian_true_error: f64,
}

/// Runs the `Z`-map checks on the given sample points.
pub fn zmap_checks(points: &[(f64, f64)]) -> ZmapReport {
    let mut r = ZmapReport {
        samples: points.len(),
        max_laplacian_error: 0.0,
        max_deltoid_value: f64::NEG_INFINITY,
        max_gamma_zz_error: 0.0,
        max_gamma_zzbar_error: 0.0,
        max_gamma_zzbar_half_error: 0.0,
        max_jacobian_line_value: 0.0,
        max_jacobian_true_error: 0.0,
    };
    for (i, &(x1, x2)) in points.iter().enumerate() {
        let z = Complex64::new(x1, x2);
        let big_z = z_map(z);
        r.max_laplacian_error = r.max_laplacian_error.max((laplacian_fd(z, 1e-4) + big_z).norm());
        r.max_deltoid_value = r.max_deltoid_value.max(crate::family::deltoid_value(big_z.re, big_z.im));

        // compare at the image point so that the Γ check lives inside δ
        let got = complex_gamma(big_z.re, big_z.im);
        let want = printed_complex_gamma(big_z);
        r.max_gamma_zz_error = r.max_gamma_zz_error.max((got[0] - want[0]).norm()).max((got[2] - want[2]).norm());
        r.max_gamma_zzbar_error = r.max_gamma_zzbar_error.max((got[1] - want[1]).norm());
        r.max_gamma_zzbar_half_error = r.max_gamma_zzbar_half_error.max((got[1] - want[1] * 0.5).norm());

        for (a, b) in jacobian_zero_lines(i as i32 % 5 - 2, i as i32 % 7 - 3, x2) {
            r.max_jacobian_line_value = r.max_jacobian_line_value.max(jacobian_z(a, b).abs());
        }
        let fd = fd_jacobian(x1, x2, 1e-5);
        r.max_jacobian_true_error = r.max_jacobian_true_error.max((fd - jacobian_z_true(x1, x2)).abs());
    }
    r
}

fn fd_jacobian(x1: f64, x2: f64, h: f64) -> f64 {
    let a = (z_map(Complex64::new(x1 + h, x2)) - z_map(Complex64::new(x1 - h, x2))) / (2.0 * h);
    let b = (z_map(Complex64::new(x1, x2 + h)) - z_map(Complex64::new(x1, x2 - h))) / (2.0 * h);
    a.re * b.im - a.im * b.re
}
