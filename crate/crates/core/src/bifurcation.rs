//! Parameter values `μ` where critical points of the Hamiltonian system
//! collide: three saddles and a center merging into one degenerate point.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::angle::Angle;
use crate::critical::{enumerate, CriticalFamily, CriticalPoint, HessianClass, ZetaBranch};
use crate::error::{CoreError, Result};

/// Gap below which a refined minimum counts as a collision.
pub const DETECTION_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_GRID: usize = 2000;
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct DegeneracyIndicator {
    pub mu: f64,
    pub min_hessian_det: f64,
    pub min_family_gap: f64,
    /// The A/B/C family nearest to a D point.
    pub nearest_family: Option<CriticalFamily>,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn indicator_of(mu: f64, pts: &[CriticalPoint]) -> DegeneracyIndicator {
    let min_hessian_det = pts.iter().map(|p| p.hessian_det.abs()).fold(f64::INFINITY, f64::min);
    let mut min_family_gap = f64::INFINITY;
    let mut nearest_family = None;
    for a in pts.iter().filter(|p| p.family.is_d()) {
        for b in pts.iter().filter(|p| !p.family.is_d()) {
            let g = dist(a.xy, b.xy);
            if g < min_family_gap {
                min_family_gap = g;
                nearest_family = Some(b.family);
            }
        }
    }
    DegeneracyIndicator { mu, min_hessian_det, min_family_gap, nearest_family }
}

pub fn indicator(d: u32, mu: &Angle) -> Result<DegeneracyIndicator> {
    if d < 3 {
        return Err(CoreError::DegreeTooLow { d, min: 3 });
    }
    Ok(indicator_of(mu.radians(), &enumerate(d, mu)?))
}

/// The interval scanned for `d`: `[0, 2π/3)` unless `3 | d`, then `[0, 2π)`.
pub fn fundamental_interval(d: u32) -> (f64, f64) {
    if d % 3 == 0 {
        (0.0, 2.0 * PI)
    } else {
        (0.0, 2.0 * PI / 3.0)
    }
}

/// The predicted bifurcation values on the fundamental interval.
pub fn expected_points(d: u32) -> Vec<f64> {
    if d % 3 == 0 {
        (0..6).map(|l| (2 * l + 1) as f64 * PI / 6.0).collect()
    } else {
        vec![PI / 6.0, PI / 2.0]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BifurcationPoint {
    pub mu: f64,
    pub mu_over_pi: f64,
    pub evidence: DegeneracyIndicator,
    pub families: Vec<String>,
    /// The ζ branch with `cos(μ + offset) ≈ 0`.
    pub zeta_zero: Option<ZetaBranch>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BifurcationReport {
    pub d: u32,
    pub interval: [f64; 2],
    pub grid: usize,
    pub refine_tol: f64,
    pub points: Vec<BifurcationPoint>,
    pub expected: Vec<f64>,
    pub matches_expected: bool,
}

fn gap(d: u32, mu: f64) -> Result<f64> {
    Ok(indicator(d, &Angle::Radians(mu))?.min_family_gap)
}

fn golden_min(d: u32, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut e = a + r * (b - a);
    let (mut fc, mut fe) = (gap(d, c)?, gap(d, e)?);
    while b - a > tol {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - r * (b - a);
            fc = gap(d, c)?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + r * (b - a);
            fe = gap(d, e)?;
        }
    }
    Ok((a + b) / 2.0)
}

fn zeta_zero(mu: f64) -> Option<ZetaBranch> {
    let offsets = [(ZetaBranch::M, 0.0), (ZetaBranch::M1, -2.0 * PI / 3.0), (ZetaBranch::M2, 2.0 * PI / 3.0)];
    offsets.iter().find(|(_, o)| (mu + o).cos().abs() < 1e-7).map(|(b, _)| *b)
}

pub fn scan(d: u32, grid_size: usize, refine_tol: f64) -> Result<BifurcationReport> {
    match scan_once(d, grid_size, refine_tol) {
        Err(CoreError::UnresolvedCandidate { .. }) => scan_once(d, grid_size * 4, refine_tol),
        r => r,
    }
}

fn scan_once(d: u32, grid_size: usize, refine_tol: f64) -> Result<BifurcationReport> {
    if d < 3 {
        return Err(CoreError::DegreeTooLow { d, min: 3 });
    }
    let (lo, hi) = fundamental_interval(d);
    let expected = expected_points(d);
    if grid_size < 8 * expected.len() {
        return Err(CoreError::ScanGridTooCoarse(grid_size));
    }
    let step = (hi - lo) / grid_size as f64;
    let gaps = (0..grid_size).into_par_iter().map(|i| gap(d, lo + i as f64 * step)).collect::<Result<Vec<f64>>>()?;

    let n = gaps.len();
    let mut found: Vec<f64> = Vec::new();
    for i in 0..n {
        let (prev, next) = (gaps[(i + n - 1) % n], gaps[(i + 1) % n]);
        if !(gaps[i] <= prev && gaps[i] <= next) {
            continue;
        }
        let c = lo + i as f64 * step;
        let mu = golden_min(d, c - step, c + step, refine_tol)?;
        let mu = (mu - lo).rem_euclid(hi - lo) + lo;
        if gap(d, mu)? >= DETECTION_THRESHOLD {
            continue;
        }
        if found.iter().any(|&f| (f - mu).abs() < 10.0 * refine_tol.max(1e-9)) {
            continue;
        }
        if let Some(&f) = found.iter().find(|&&f| (f - mu).abs() < step) {
            return Err(CoreError::UnresolvedCandidate { mu: f });
        }
        found.push(mu);
    }
    found.sort_by(f64::total_cmp);

    let points = found
        .iter()
        .map(|&mu| {
            let pts = enumerate(d, &Angle::Radians(mu))?;
            let evidence = indicator_of(mu, &pts);
            let mut families: Vec<String> = evidence.nearest_family.iter().map(|f| format!("{f:?}")).collect();
            families.push("D".into());
            Ok(BifurcationPoint { mu, mu_over_pi: mu / PI, evidence, families, zeta_zero: zeta_zero(mu) })
        })
        .collect::<Result<Vec<_>>>()?;
    let matches_expected =
        points.len() == expected.len() && points.iter().zip(&expected).all(|(p, e)| (p.mu - e).abs() < 1e-6);
    Ok(BifurcationReport { d, interval: [lo, hi], grid: grid_size, refine_tol, points, expected, matches_expected })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LocalCensus {
    pub saddles: usize,
    pub centers: usize,
    pub degenerate: usize,
}

impl LocalCensus {
    fn add(&mut self, c: HessianClass) {
        match c {
            HessianClass::Saddle => self.saddles += 1,
            HessianClass::Max | HessianClass::Min => self.centers += 1,
            HessianClass::Degenerate => self.degenerate += 1,
        }
    }

    pub fn is_split(&self) -> bool {
        self.saddles == 3 && self.centers == 1 && self.degenerate == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseSite {
    pub xy: [f64; 2],
    pub radius: f64,
    pub before: LocalCensus,
    pub at: LocalCensus,
    pub after: LocalCensus,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitCensus {
    pub d: u32,
    pub mu_star: f64,
    pub delta: f64,
    pub sites: Vec<CollapseSite>,
    pub on_deltoid: usize,
    pub transition_ok: bool,
}

/// Counts critical points near each degenerate site at `μ* − δ`, `μ*`,
/// `μ* + δ`.
pub fn split_census(d: u32, mu_star: &Angle, delta: f64) -> Result<SplitCensus> {
    if d < 3 {
        return Err(CoreError::DegreeTooLow { d, min: 3 });
    }
    // neighbouring bifurcations sit π/3 apart
    if !(delta > 0.0 && delta < PI / 3.0 - 1e-9) {
        return Err(CoreError::DeltaTooLarge { delta });
    }
    let m = mu_star.radians();
    let at = enumerate(d, mu_star)?;
    let before = enumerate(d, &Angle::Radians(m - delta))?;
    let after = enumerate(d, &Angle::Radians(m + delta))?;

    let mut centres: Vec<[f64; 2]> = Vec::new();
    for p in at.iter().filter(|p| !p.boundary && p.hessian_class == HessianClass::Degenerate) {
        if centres.iter().all(|c| dist(*c, p.xy) > 1e-6) {
            centres.push(p.xy);
        }
    }
    let census = |pts: &[CriticalPoint], c: [f64; 2], r: f64| {
        let mut lc = LocalCensus::default();
        for p in pts.iter().filter(|p| dist(p.xy, c) < r) {
            lc.add(p.hessian_class);
        }
        lc
    };
    let mut sites = Vec::new();
    for &c in &centres {
        let radius = 0.5 * at.iter().map(|p| dist(p.xy, c)).filter(|&r| r > 1e-6).fold(f64::INFINITY, f64::min);
        let mut at_c = LocalCensus::default();
        // coincident labels at the site are one point
        at_c.add(HessianClass::Degenerate);
        sites.push(CollapseSite {
            xy: c,
            radius,
            before: census(&before, c, radius),
            at: at_c,
            after: census(&after, c, radius),
        });
    }
    let transition_ok = !sites.is_empty() && sites.iter().all(|s| s.before.is_split() && s.after.is_split());
    Ok(SplitCensus {
        d,
        mu_star: m,
        delta,
        on_deltoid: at.iter().filter(|p| p.on_deltoid).count(),
        sites,
        transition_ok,
    })
}
