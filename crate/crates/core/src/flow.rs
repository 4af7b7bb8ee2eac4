//! The Hamiltonian system `ẋ = ∂_y P, ẏ = −∂_x P` and its orthogonal gradient
//! system, with integrators looked up by name.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use deltoid_algebra::{MPoly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::critical::CurveDerivatives;
use crate::error::{CoreError, Result};
use crate::family::{build_pd, CoefficientMode, FamilyCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Hamiltonian,
    Gradient,
}

#[derive(Clone, Debug)]
pub struct VectorField {
    pub kind: FieldKind,
    pub der: CurveDerivatives,
}

impl VectorField {
    pub fn new(p: &MPoly<f64>, kind: FieldKind) -> Result<Self> {
        Ok(VectorField { kind, der: CurveDerivatives::new(p)? })
    }

    pub fn from_curve(curve: &FamilyCurve, kind: FieldKind) -> Result<Self> {
        Self::new(&curve.poly, kind)
    }

    pub fn eval(&self, p: [f64; 2]) -> [f64; 2] {
        let [px, py] = self.der.gradient(p[0], p[1]);
        match self.kind {
            FieldKind::Hamiltonian => [py, -px],
            FieldKind::Gradient => [-px, -py],
        }
    }

    pub fn jacobian(&self, p: [f64; 2]) -> [[f64; 2]; 2] {
        let h = self.der.hessian(p[0], p[1]);
        match self.kind {
            FieldKind::Hamiltonian => [[h[0][1], h[1][1]], [-h[0][0], -h[0][1]]],
            FieldKind::Gradient => [[-h[0][0], -h[0][1]], [-h[1][0], -h[1][1]]],
        }
    }

    pub fn energy(&self, p: [f64; 2]) -> f64 {
        self.der.p.eval_f64(&p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowConfig {
    pub t_end: f64,
    pub integrator: String,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Integration stops once `|r|` exceeds this.
    pub escape_radius: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            t_end: 100.0,
            integrator: "adaptive-rk".into(),
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            max_step: 0.05,
            escape_radius: 10.0,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CoreError::BadFlowConfig(m.into()));
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad("t_end must be positive");
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.max_step > 0.0) {
            return bad("max_step must be positive");
        }
        if !(self.escape_radius > 0.0) {
            return bad("escape_radius must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub kind: FieldKind,
    pub seed: [f64; 2],
    /// `(t, x, y)` rows.
    pub samples: Vec<[f64; 3]>,
    pub energy: Vec<f64>,
    pub energy_drift: f64,
    pub escaped: bool,
    pub config: FlowConfig,
}

impl Trajectory {
    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.samples.iter().map(|s| [s[1], s[2]])
    }
}

/// Result of stepping an initial value problem: accepted `(t, x, y)` rows
/// and whether the escape radius was crossed.
pub struct Steps {
    pub samples: Vec<[f64; 3]>,
    pub escaped: bool,
}

pub trait Integrator: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, field: &VectorField, seed: [f64; 2], config: &FlowConfig) -> Result<Steps>;
}

pub struct IntegratorRegistry {
    entries: BTreeMap<&'static str, Box<dyn Integrator>>,
}

impl IntegratorRegistry {
    pub fn empty() -> Self {
        IntegratorRegistry { entries: BTreeMap::new() }
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(DormandPrince));
        r.register(Box::new(ImplicitMidpoint));
        r
    }

    pub fn register(&mut self, integrator: Box<dyn Integrator>) {
        self.entries.insert(integrator.name(), integrator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Integrator> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| CoreError::UnknownIntegrator(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

pub fn registry() -> &'static IntegratorRegistry {
    static REG: OnceLock<IntegratorRegistry> = OnceLock::new();
    REG.get_or_init(IntegratorRegistry::with_defaults)
}

pub fn integrate(field: &VectorField, seed: [f64; 2], config: &FlowConfig) -> Result<Trajectory> {
    integrate_with(registry(), field, seed, config)
}

pub fn integrate_with(
    reg: &IntegratorRegistry,
    field: &VectorField,
    seed: [f64; 2],
    config: &FlowConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if !(seed[0].is_finite() && seed[1].is_finite()) {
        return Err(CoreError::BadFlowConfig("seed must be finite".into()));
    }
    let steps = reg.get(&config.integrator)?.run(field, seed, config)?;
    let energy: Vec<f64> = steps.samples.iter().map(|s| field.energy([s[1], s[2]])).collect();
    let e0 = energy[0];
    let energy_drift = energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
    Ok(Trajectory {
        kind: field.kind,
        seed,
        samples: steps.samples,
        energy,
        energy_drift,
        escaped: steps.escaped,
        config: config.clone(),
    })
}

fn axpy(y: [f64; 2], h: f64, k: [f64; 2]) -> [f64; 2] {
    [y[0] + h * k[0], y[1] + h * k[1]]
}

fn escaped(y: [f64; 2], r: f64) -> bool {
    y[0].hypot(y[1]) > r || !y[0].is_finite() || !y[1].is_finite()
}

/// Dormand–Prince 5(4) with FSAL and standard step control.
pub struct DormandPrince;

const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

impl Integrator for DormandPrince {
    fn name(&self) -> &'static str {
        "adaptive-rk"
    }

    fn run(&self, field: &VectorField, seed: [f64; 2], cfg: &FlowConfig) -> Result<Steps> {
        let mut t = 0.0;
        let mut y = seed;
        let mut samples = vec![[0.0, y[0], y[1]]];
        let mut k = [[0.0; 2]; 7];
        k[0] = field.eval(y);
        if k[0] == [0.0, 0.0] {
            samples.push([cfg.t_end, y[0], y[1]]);
            return Ok(Steps { samples, escaped: false });
        }
        let mut h = cfg.max_step.min(cfg.t_end) * 0.1;
        while t < cfg.t_end {
            if t + h > cfg.t_end {
                h = cfg.t_end - t;
            }
            for s in 1..7 {
                let mut yi = y;
                for (j, a) in DP_A[s].iter().enumerate().take(s) {
                    yi = axpy(yi, h * a, k[j]);
                }
                k[s] = field.eval(yi);
            }
            let mut y5 = y;
            let mut err = 0.0f64;
            for i in 0..2 {
                let mut s5 = 0.0;
                let mut s4 = 0.0;
                for s in 0..7 {
                    s5 += DP_B5[s] * k[s][i];
                    s4 += DP_B4[s] * k[s][i];
                }
                y5[i] = y[i] + h * s5;
                let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y5[i].abs());
                err = err.max((h * (s5 - s4) / sc).abs());
            }
            if !y5.iter().all(|v| v.is_finite()) {
                err = f64::INFINITY;
            }
            if err <= 1.0 {
                t += h;
                y = y5;
                samples.push([t, y[0], y[1]]);
                if escaped(y, cfg.escape_radius) {
                    return Ok(Steps { samples, escaped: true });
                }
                k[0] = k[6];
            }
            if err.is_finite() {
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h = (h * factor).min(cfg.max_step);
            } else {
                h *= 0.1;
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(CoreError::StepUnderflow { t });
            }
        }
        Ok(Steps { samples, escaped: false })
    }
}

/// Implicit midpoint with Newton solves at step `max_step`; symplectic for
/// the Hamiltonian field.
pub struct ImplicitMidpoint;

impl Integrator for ImplicitMidpoint {
    fn name(&self) -> &'static str {
        "implicit-midpoint"
    }

    fn run(&self, field: &VectorField, seed: [f64; 2], cfg: &FlowConfig) -> Result<Steps> {
        let mut t = 0.0;
        let mut y = seed;
        let mut samples = vec![[0.0, y[0], y[1]]];
        let mut h = cfg.max_step;
        while t < cfg.t_end {
            let step = h.min(cfg.t_end - t);
            match midpoint_step(field, y, step, cfg) {
                Some(next) => {
                    t += step;
                    y = next;
                    samples.push([t, y[0], y[1]]);
                    if escaped(y, cfg.escape_radius) {
                        return Ok(Steps { samples, escaped: true });
                    }
                    h = (h * 2.0).min(cfg.max_step);
                }
                None => {
                    h *= 0.5;
                    if h < 1e-14 * t.abs().max(1.0) {
                        return Err(CoreError::StepUnderflow { t });
                    }
                }
            }
        }
        Ok(Steps { samples, escaped: false })
    }
}

fn midpoint_step(field: &VectorField, y0: [f64; 2], h: f64, cfg: &FlowConfig) -> Option<[f64; 2]> {
    let mut y1 = axpy(y0, h, field.eval(y0));
    for _ in 0..50 {
        let m = [(y0[0] + y1[0]) / 2.0, (y0[1] + y1[1]) / 2.0];
        let f = field.eval(m);
        let g = [y1[0] - y0[0] - h * f[0], y1[1] - y0[1] - h * f[1]];
        let j = field.jacobian(m);
        let a = [[1.0 - 0.5 * h * j[0][0], -0.5 * h * j[0][1]], [-0.5 * h * j[1][0], 1.0 - 0.5 * h * j[1][1]]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.abs() < f64::MIN_POSITIVE {
            return None;
        }
        let dx = (a[1][1] * g[0] - a[0][1] * g[1]) / det;
        let dy = (a[0][0] * g[1] - a[1][0] * g[0]) / det;
        y1 = [y1[0] - dx, y1[1] - dy];
        let tol = 1e-3 * cfg.abs_tol + 1e-3 * cfg.rel_tol * y1[0].abs().max(y1[1].abs());
        if !y1[0].is_finite() || !y1[1].is_finite() {
            return None;
        }
        if dx.hypot(dy) <= tol.max(4.0 * f64::EPSILON * y1[0].abs().max(y1[1].abs())) {
            return Some(y1);
        }
    }
    None
}

/// Max `|H·G|` of the two fields at `samples` random points of `[−3, 3]²`,
/// plus the max coefficient of the polynomial `H·G`.
#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub max_dot: f64,
    pub scale_squared: f64,
    pub symbolic_max_coeff: f64,
}

pub fn orthogonality_check(d: u32, mu: &Angle, samples: usize, seed: u64) -> Result<OrthogonalityReport> {
    let curve = build_pd(d, mu, CoefficientMode::Float)?;
    let h = VectorField::from_curve(&curve, FieldKind::Hamiltonian)?;
    let g = VectorField::from_curve(&curve, FieldKind::Gradient)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dot = 0.0f64;
    for _ in 0..samples {
        let p = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let (a, b) = (h.eval(p), g.eval(p));
        max_dot = max_dot.max((a[0] * b[0] + a[1] * b[1]).abs());
    }
    // every f64 is a dyadic rational, so this product is exact
    let exact = |q: &MPoly<f64>| q.map_coeffs(|c| Rational::from_float(*c).unwrap_or_default());
    let (px, py) = (exact(&h.der.px), exact(&h.der.py));
    let symbolic = &(&py * &(-&px)) + &(&(-&px) * &(-&py));
    Ok(OrthogonalityReport {
        max_dot,
        scale_squared: curve.scale() * curve.scale(),
        symbolic_max_coeff: symbolic.max_abs_coeff(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Clockwise,
    Anticlockwise,
    Open,
}

/// Phase-space distance for deciding that an orbit has closed.
pub const CLOSURE_TOL: f64 = 1e-3;

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let s = if len2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0) };
    (p[0] - a[0] - s * ab[0]).hypot(p[1] - a[1] - s * ab[1])
}

/// Orientation of the first loop of a trajectory, by shoelace area.
pub fn orbit_orientation(traj: &Trajectory) -> Orientation {
    orientation_of(&traj.points().collect::<Vec<_>>())
}

/// Index of the sample that closes the first loop: the path must first get
/// `5·CLOSURE_TOL` away from the seed, then pass within `CLOSURE_TOL` of it.
pub fn first_return(pts: &[[f64; 2]]) -> Option<usize> {
    let &seed = pts.first()?;
    let mut left = false;
    for i in 1..pts.len() {
        if !left {
            left = (pts[i][0] - seed[0]).hypot(pts[i][1] - seed[1]) > 5.0 * CLOSURE_TOL;
            continue;
        }
        if segment_distance(seed, pts[i - 1], pts[i]) < CLOSURE_TOL {
            return Some(i);
        }
    }
    None
}

pub fn orientation_of(pts: &[[f64; 2]]) -> Orientation {
    let Some(end) = first_return(pts) else {
        return Orientation::Open;
    };
    let loop_pts = &pts[..=end];
    let mut area = 0.0;
    for i in 0..loop_pts.len() {
        let a = loop_pts[i];
        let b = loop_pts[(i + 1) % loop_pts.len()];
        area += a[0] * b[1] - b[0] * a[1];
    }
    if area > 0.0 {
        Orientation::Anticlockwise
    } else if area < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Open
    }
}

/// `true` when the energy never rises by more than `slack`.
pub fn monotone_decreasing(traj: &Trajectory, slack: f64) -> bool {
    traj.energy.windows(2).all(|w| w[1] <= w[0] + slack)
}
