//! Marching-squares contours and deterministic SVG output for level sets,
//! the deltoid, critical points and trajectories.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use deltoid_algebra::MPoly;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::critical::{enumerate_for, HessianClass};
use crate::error::{CoreError, Result};
use crate::family::{build_pd, deltoid, golden_curve, golden_factors, CoefficientMode, GoldenCurve};
use crate::flow::{first_return, integrate, FieldKind, FlowConfig, VectorField};

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "deltoid-dynamics/1";

pub const MIN_RESOLUTION: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    LevelSet,
    Deltoid,
    Critical,
    Trajectories,
}

impl std::str::FromStr for Layer {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "levelset" => Ok(Layer::LevelSet),
            "deltoid" => Ok(Layer::Deltoid),
            "critical" => Ok(Layer::Critical),
            "trajectories" => Ok(Layer::Trajectories),
            other => Err(CoreError::BadPlotSpec(format!("unknown layer `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Style {
    pub size_px: u32,
    pub levelset: String,
    pub deltoid: String,
    pub trajectory: String,
    pub axes: String,
    pub stroke: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            size_px: 600,
            levelset: "#1f3b73".into(),
            deltoid: "#b03a2e".into(),
            trajectory: "#7f8c8d".into(),
            axes: "#cccccc".into(),
            stroke: 1.2,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlotSpec {
    /// `[x_min, x_max, y_min, y_max]`.
    pub window: [f64; 4],
    pub layers: Vec<Layer>,
    pub resolution: usize,
    pub style: Style,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            window: [-3.2, 3.2, -3.2, 3.2],
            layers: vec![Layer::LevelSet, Layer::Deltoid],
            resolution: 256,
            style: Style::default(),
        }
    }
}

impl PlotSpec {
    pub fn validate(&self) -> Result<()> {
        let [x0, x1, y0, y1] = self.window;
        if !(x0 < x1 && y0 < y1) || self.window.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::BadPlotSpec("window is empty".into()));
        }
        if self.resolution < MIN_RESOLUTION {
            return Err(CoreError::BadPlotSpec(format!("resolution must be at least {MIN_RESOLUTION}")));
        }
        Ok(())
    }

    fn cell(&self) -> (f64, f64) {
        let [x0, x1, y0, y1] = self.window;
        ((x1 - x0) / self.resolution as f64, (y1 - y0) / self.resolution as f64)
    }

    pub fn cell_diagonal(&self) -> f64 {
        let (dx, dy) = self.cell();
        dx.hypot(dy)
    }

    pub fn has(&self, layer: Layer) -> bool {
        self.layers.contains(&layer)
    }
}

pub type Polyline = Vec<[f64; 2]>;

// A grid edge: horizontal edges are (i, j, 0) from (i, j) to (i+1, j),
// vertical ones (i, j, 1) from (i, j) to (i, j+1).
type EdgeKey = (usize, usize, u8);

/// Polylines of `{p = level}` by marching squares over the spec's grid.
pub fn contour(p: &MPoly<f64>, level: f64, spec: &PlotSpec) -> Result<Vec<Polyline>> {
    spec.validate()?;
    let n = spec.resolution;
    let [x0, _, y0, _] = spec.window;
    let (dx, dy) = spec.cell();
    let at = |i: usize, j: usize| [x0 + i as f64 * dx, y0 + j as f64 * dy];
    let mut vals = vec![0.0; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            vals[j * (n + 1) + i] = p.eval_f64(&at(i, j)) - level;
        }
    }
    let v = |i: usize, j: usize| vals[j * (n + 1) + i];
    let edge_point = |e: EdgeKey| -> [f64; 2] {
        let (i, j, dir) = e;
        let (a, b) = if dir == 0 { ((i, j), (i + 1, j)) } else { ((i, j), (i, j + 1)) };
        let (va, vb) = (v(a.0, a.1), v(b.0, b.1));
        let t = if va == vb { 0.5 } else { (va / (va - vb)).clamp(0.0, 1.0) };
        let (pa, pb) = (at(a.0, a.1), at(b.0, b.1));
        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let bottom = (i, j, 0);
            let top = (i, j + 1, 0);
            let left = (i, j, 1);
            let right = (i + 1, j, 1);
            let b = |x: f64| x >= 0.0;
            let case = (b(v(i, j)) as u8)
                | (b(v(i + 1, j)) as u8) << 1
                | (b(v(i + 1, j + 1)) as u8) << 2
                | (b(v(i, j + 1)) as u8) << 3;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 | 10 => {
                    let c = at(i, j);
                    let mid = p.eval_f64(&[c[0] + dx / 2.0, c[1] + dy / 2.0]) - level;
                    // corners 0 and 2 share a sign; join them through the middle if it agrees
                    let joined = b(mid) == (case == 5);
                    if joined {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    Ok(chain(&segments).into_iter().map(|keys| keys.into_iter().map(edge_point).collect()).collect())
}

// Joins segments sharing an edge into maximal chains, in a fixed order.
fn chain(segments: &[(EdgeKey, EdgeKey)]) -> Vec<Vec<EdgeKey>> {
    let mut incident: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        incident.entry(*a).or_default().push(s);
        incident.entry(*b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let next_from = |key: EdgeKey, used: &[bool]| incident[&key].iter().copied().find(|&s| !used[s]);
    // open chains start at an edge with a single segment
    let mut order: Vec<usize> = (0..segments.len())
        .filter(|&s| incident[&segments[s].0].len() == 1 || incident[&segments[s].1].len() == 1)
        .collect();
    order.extend(0..segments.len());
    for start in order {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let (first, second) = if incident[&b].len() == 1 { (b, a) } else { (a, b) };
        let mut keys = vec![first, second];
        let mut tip = second;
        while let Some(s) = next_from(tip, &used) {
            used[s] = true;
            let (a, b) = segments[s];
            tip = if a == tip { b } else { a };
            keys.push(tip);
        }
        out.push(keys);
    }
    out
}

/// Largest `|p(v)| / (G·diag)` over contour vertices, where `G` bounds
/// `|∇p|` on the grid corners around `v`.
pub fn contour_residual_ratio(p: &MPoly<f64>, level: f64, lines: &[Polyline], spec: &PlotSpec) -> Result<f64> {
    let px = p.diff(0)?;
    let py = p.diff(1)?;
    let [x0, _, y0, _] = spec.window;
    let (dx, dy) = spec.cell();
    let diag = spec.cell_diagonal();
    let mut worst = 0.0f64;
    for v in lines.iter().flatten() {
        let ci = ((v[0] - x0) / dx).floor();
        let cj = ((v[1] - y0) / dy).floor();
        let mut g = 0.0f64;
        for a in -1..=2 {
            for b in -1..=2 {
                let q = [x0 + (ci + a as f64) * dx, y0 + (cj + b as f64) * dy];
                g = g.max(px.eval_f64(&q).hypot(py.eval_f64(&q)));
            }
        }
        let r = (p.eval_f64(v) - level).abs();
        if r > 0.0 {
            worst = worst.max(r / (g * diag).max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct Marker {
    pub xy: [f64; 2],
    pub class: HessianClass,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Scene {
    pub title: String,
    pub levelset: Vec<Polyline>,
    pub deltoid: Vec<Polyline>,
    pub critical: Vec<Marker>,
    pub trajectories: Vec<Polyline>,
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Serializes a scene to SVG 1.1. Output depends only on the inputs.
pub fn render_svg(scene: &Scene, spec: &PlotSpec) -> Result<String> {
    spec.validate()?;
    let [x0, x1, y0, y1] = spec.window;
    let size = spec.style.size_px as f64;
    let sx = size / (x1 - x0);
    let sy = size / (y1 - y0);
    let px = |p: [f64; 2]| [(p[0] - x0) * sx, (y1 - p[1]) * sy];
    let st = &spec.style;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        st.size_px
    )
    .unwrap();
    if !scene.title.is_empty() {
        writeln!(out, "<title>{}</title>", escape(&scene.title)).unwrap();
    }
    writeln!(out, r#"<rect x="0" y="0" width="{0}" height="{0}" fill="white"/>"#, st.size_px).unwrap();

    writeln!(out, r#"<g id="axes" stroke="{}" stroke-width="0.8">"#, st.axes).unwrap();
    if x0 <= 0.0 && 0.0 <= x1 {
        let a = px([0.0, y0]);
        let b = px([0.0, y1]);
        writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, fmt6(a[0]), fmt6(a[1]), fmt6(b[0]), fmt6(b[1]))
            .unwrap();
    }
    if y0 <= 0.0 && 0.0 <= y1 {
        let a = px([x0, 0.0]);
        let b = px([x1, 0.0]);
        writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, fmt6(a[0]), fmt6(a[1]), fmt6(b[0]), fmt6(b[1]))
            .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    let mut polylines = |id: &str, lines: &[Polyline], color: &str, width: f64| {
        writeln!(out, r#"<g id="{id}" fill="none" stroke="{color}" stroke-width="{}">"#, fmt6(width)).unwrap();
        for line in lines.iter().filter(|l| l.len() >= 2) {
            // points closer than half a pixel to the last one kept add nothing
            let mut kept: Vec<[f64; 2]> = Vec::with_capacity(line.len());
            for (i, &p) in line.iter().enumerate() {
                let q = px(p);
                let last = i + 1 == line.len();
                match kept.last() {
                    Some(k) if !last && (q[0] - k[0]).hypot(q[1] - k[1]) < 0.5 => {}
                    _ => kept.push(q),
                }
            }
            let pts: Vec<String> = kept.iter().map(|q| format!("{},{}", fmt6(q[0]), fmt6(q[1]))).collect();
            writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" ")).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    };
    if spec.has(Layer::Trajectories) {
        polylines("trajectories", &scene.trajectories, &st.trajectory, st.stroke * 0.6);
    }
    if spec.has(Layer::Deltoid) {
        polylines("deltoid", &scene.deltoid, &st.deltoid, st.stroke);
    }
    if spec.has(Layer::LevelSet) {
        polylines("levelset", &scene.levelset, &st.levelset, st.stroke);
    }
    if spec.has(Layer::Critical) {
        writeln!(out, r#"<g id="critical">"#).unwrap();
        for m in &scene.critical {
            let q = px(m.xy);
            let fill = match m.class {
                HessianClass::Max => "#c0392b",
                HessianClass::Min => "#2471a3",
                HessianClass::Saddle => "#239b56",
                HessianClass::Degenerate => "#000000",
            };
            writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="{fill}"/>"#, fmt6(q[0]), fmt6(q[1])).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

pub fn render(scene: &Scene, spec: &PlotSpec, out: &Path) -> Result<()> {
    let svg = render_svg(scene, spec)?;
    std::fs::write(out, svg)?;
    Ok(())
}

fn deltoid_lines(spec: &PlotSpec) -> Result<Vec<Polyline>> {
    contour(&deltoid().to_float(), 0.0, spec)
}

/// Zero set of a golden curve, optionally with the deltoid. Each printed
/// factor is contoured on its own: where a line touches the quartic the
/// product changes sign twice inside one cell and marching squares would
/// miss both crossings.
pub fn golden_scene(which: GoldenCurve, spec: &PlotSpec) -> Result<Scene> {
    let mut levelset = Vec::new();
    if spec.has(Layer::LevelSet) {
        for f in golden_factors(which) {
            levelset.extend(contour(&f.to_float(), 0.0, spec)?);
        }
    }
    Ok(Scene {
        title: format!("{} zero set", which.name()),
        levelset,
        deltoid: if spec.has(Layer::Deltoid) { deltoid_lines(spec)? } else { Vec::new() },
        ..Scene::default()
    })
}

/// Level curve `P_d = 0` with optional deltoid, critical points and
/// Hamiltonian orbits seeded next to every center.
pub fn family_scene(d: u32, mu: &Angle, spec: &PlotSpec) -> Result<Scene> {
    let curve = build_pd(d, mu, CoefficientMode::Float)?;
    let mut scene = Scene { title: format!("P{d} level set, mu = {mu}"), ..Scene::default() };
    if spec.has(Layer::LevelSet) {
        scene.levelset = contour(&curve.poly, 0.0, spec)?;
    }
    if spec.has(Layer::Deltoid) {
        scene.deltoid = deltoid_lines(spec)?;
    }
    let needs_points = spec.has(Layer::Critical) || spec.has(Layer::Trajectories);
    let points = if needs_points && d >= 2 { enumerate_for(&curve)? } else { Vec::new() };
    if spec.has(Layer::Critical) {
        scene.critical = points.iter().map(|p| Marker { xy: p.xy, class: p.hessian_class }).collect();
    }
    if spec.has(Layer::Trajectories) {
        let field = VectorField::from_curve(&curve, FieldKind::Hamiltonian)?;
        let [x0, x1, y0, y1] = spec.window;
        let config = FlowConfig {
            t_end: 4.0,
            max_step: 0.02,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            escape_radius: (x1 - x0).abs().max((y1 - y0).abs()),
            ..FlowConfig::default()
        };
        for p in points.iter().filter(|p| matches!(p.hessian_class, HessianClass::Max | HessianClass::Min)) {
            for r in [0.08, 0.16] {
                let tr = integrate(&field, [p.xy[0] + r, p.xy[1]], &config)?;
                let mut pts: Polyline = tr.points().collect();
                if let Some(end) = first_return(&pts) {
                    pts.truncate(end + 1);
                }
                scene.trajectories.push(pts);
            }
        }
    }
    Ok(scene)
}

/// A named figure: its scene, the spec it was built for, and the curve
/// whose zero set forms the level-set layer.
pub struct Figure {
    pub name: String,
    pub scene: Scene,
    pub spec: PlotSpec,
    pub curve: MPoly<f64>,
}

impl Figure {
    pub fn svg(&self) -> Result<String> {
        render_svg(&self.scene, &self.spec)
    }
}

pub fn m10_figure() -> Result<Figure> {
    let spec = PlotSpec { layers: vec![Layer::LevelSet], ..PlotSpec::default() };
    Ok(Figure {
        name: "m10".into(),
        scene: golden_scene(GoldenCurve::M10, &spec)?,
        spec,
        curve: golden_curve(GoldenCurve::M10).to_float(),
    })
}

/// Level curves of `P₆` with orbits at `μ = kπ/36`, `k = 0, 6, …, 30`.
pub fn sextic_panels() -> Result<Vec<Figure>> {
    let spec = PlotSpec { layers: vec![Layer::LevelSet, Layer::Deltoid, Layer::Trajectories], ..PlotSpec::default() };
    (0..6)
        .map(|i| {
            let mu = Angle::pi_frac(6 * i, 36);
            Ok(Figure {
                name: format!("p6-k{:02}", 6 * i),
                scene: family_scene(6, &mu, &spec)?,
                spec: spec.clone(),
                curve: build_pd(6, &mu, CoefficientMode::Float)?.poly,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> MPoly<f64> {
        MPoly::from_terms(2, [([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 0], -1.0)])
    }

    #[test]
    fn unit_circle() {
        let spec = PlotSpec { window: [-2.0, 2.0, -2.0, 2.0], resolution: 64, ..PlotSpec::default() };
        let lines = contour(&circle(), 0.0, &spec).unwrap();
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(l.first(), l.last());
        let cell = 4.0 / 64.0;
        for v in l {
            assert!((v[0].hypot(v[1]) - 1.0).abs() < 2.0 * cell);
        }
        assert!(contour_residual_ratio(&circle(), 0.0, &lines, &spec).unwrap() < 1.0);
    }

    #[test]
    fn deltoid_reaches_cusps() {
        let spec = PlotSpec::default();
        let lines = contour(&deltoid().to_float(), 0.0, &spec).unwrap();
        let far = lines.iter().flatten().map(|v| v[0]).fold(f64::MIN, f64::max);
        assert!((far - 3.0).abs() < 0.05, "{far}");
    }

    #[test]
    fn five_lines_are_straight() {
        let spec = PlotSpec::default();
        let curve = build_pd(5, &Angle::zero(), CoefficientMode::Float).unwrap();
        let lines = contour(&curve.poly, 0.0, &spec).unwrap();
        let diag = spec.cell_diagonal();
        for v in lines.iter().flatten() {
            let near = curve.lines.iter().map(|l| {
                let n = l.coeffs[0].hypot(l.coeffs[1]);
                l.eval(v[0], v[1]).abs() / n
            });
            assert!(near.fold(f64::MAX, f64::min) < diag, "{v:?}");
        }
    }

    #[test]
    fn empty_scene_has_axes() {
        let svg = render_svg(&Scene::default(), &PlotSpec::default()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"<g id="axes""#));
        assert_eq!(svg.matches("<line ").count(), 2);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn bad_specs() {
        let small = PlotSpec { resolution: 10, ..PlotSpec::default() };
        assert!(small.validate().is_err());
        let empty = PlotSpec { window: [1.0, 1.0, 0.0, 1.0], ..PlotSpec::default() };
        assert!(empty.validate().is_err());
        assert!("bogus".parse::<Layer>().is_err());
    }

    #[test]
    fn deterministic() {
        let spec = PlotSpec { layers: vec![Layer::LevelSet, Layer::Deltoid, Layer::Critical], ..PlotSpec::default() };
        let a = render_svg(&family_scene(4, &Angle::pi_frac(1, 7), &spec).unwrap(), &spec).unwrap();
        let b = render_svg(&family_scene(4, &Angle::pi_frac(1, 7), &spec).unwrap(), &spec).unwrap();
        assert_eq!(a, b);
    }
}
