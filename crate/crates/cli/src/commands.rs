use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use deltoid_algebra::{AnyPoly, MPoly, Rational};
use deltoid_core::bifurcation::{scan, split_census};
use deltoid_core::critical::{enumerate, expected_abc, family_count, verify_properties, CriticalFamily, HessianClass};
use deltoid_core::family::{build_pd, golden_curve, structure_report, CoefficientMode, GoldenCurve};
use deltoid_core::flow::{
    integrate, monotone_decreasing, orbit_orientation, FieldKind, FlowConfig, Orientation, Trajectory, VectorField,
};
use deltoid_core::milnor::{mk_number, parse_singularities, threshold_report, HomogeneousCurve};
use deltoid_core::operator::{flatness_batch, verify_eigen as eigen_report, zmap_checks};
use deltoid_core::render::{
    contour_residual_ratio, family_scene, golden_scene, m10_figure, render, sextic_panels, Figure, PlotSpec,
};
use deltoid_core::Angle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{document, Report};
use crate::{FlowArgs, Kind, PlotArgs};

fn write_json(path: &Path, command: &str, body: &Value) -> Result<()> {
    let doc = document(command, None, body);
    std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

pub fn curve_build(d: u32, mu: &Angle, exact: bool, out: Option<&Path>) -> Result<Report> {
    let mode = if exact { CoefficientMode::Exact } else { CoefficientMode::Float };
    let curve = build_pd(d, mu, mode)?;
    let poly = match &curve.exact {
        Some(p) => AnyPoly::Rational(p.clone()),
        None => AnyPoly::Float(curve.poly.clone()),
    };
    let body = json!({
        "d": d,
        "mu": mu,
        "mode": curve.mode,
        "lambda": curve.lambda,
        "lines": curve.lines,
        "polynomial": poly.to_doc(),
    });
    let mut text = format!("P{d}(x, y, {mu}): {} terms, {:?} coefficients\n", poly.to_doc().terms.len(), curve.mode);
    for l in &curve.lines {
        let [a, b, c] = l.coeffs.map(|v| v + 0.0);
        writeln!(text, "  s = {:>3}: {a:+.12} x {b:+.12} y {c:+.12} = 0", l.s)?;
    }
    if let Some(path) = out {
        write_json(path, "curve build", &body)?;
        writeln!(text, "written to {}", path.display())?;
    }
    Report::new("curve build", true, body, text)
}

pub fn curve_golden(which: GoldenCurve, out: Option<&Path>) -> Result<Report> {
    let p = golden_curve(which);
    let body =
        json!({ "name": which.name(), "degree": which.degree(), "polynomial": AnyPoly::Rational(p.clone()).to_doc() });
    let mut text = format!("{}: degree {}, {} terms\n", which.name(), p.degree(), p.len());
    if let Some(path) = out {
        write_json(path, "curve golden", &body)?;
        writeln!(text, "written to {}", path.display())?;
    }
    Report::new("curve golden", true, body, text)
}

pub fn verify_eigen(d: u32, mu: &Angle, exact: bool, tol: f64) -> Result<Report> {
    let mode = if exact { CoefficientMode::Exact } else { CoefficientMode::Float };
    let r = eigen_report(d, mu, mode)?;
    let ok = r.passes(tol);
    let text = match r.exact_zero {
        Some(z) => {
            format!("L2 J{d} + {}·J{d} at μ = {mu}: exact residual is {}zero\n", d * d, if z { "" } else { "not " })
        }
        None => format!(
            "L2 J{d} + {}·J{d} at μ = {mu}: max residual {:.3e}, relative {:.3e} (tolerance {tol:e})\n",
            d * d,
            r.max_residual,
            r.relative_residual
        ),
    };
    Report::new("verify eigen", ok, r, text)
}

pub fn verify_flatness(samples: usize, seed: u64) -> Result<Report> {
    let r = flatness_batch(samples, seed)?;
    let ok = r.flat && r.determinant_matches;
    let text = format!(
        "{samples} rational points (seed {seed}): curvature {}, |g| = -(3/16)Q_δ {}\n",
        if r.flat { "zero" } else { "NONZERO" },
        if r.determinant_matches { "holds" } else { "FAILS" }
    );
    Report::new("verify flatness", ok, r, text)
}

pub fn verify_zmap(samples: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..samples).map(|_| (rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0))).collect();
    let r = zmap_checks(&pts);
    let ok = r.max_laplacian_error < 1e-5
        && r.max_deltoid_value <= 1e-9
        && r.max_gamma_zz_error < 1e-9
        && r.max_gamma_zzbar_half_error < 1e-9
        && r.max_jacobian_line_value < 1e-10
        && r.max_jacobian_true_error < 1e-6;
    let text = format!(
        "{samples} points (seed {seed})\n  ΔZ + Z           {:.2e}\n  Q_δ(Z) max       {:.2e}\n  Γ(z,z), Γ(z̄,z̄)   {:.2e}\n  Γ(z,z̄) - (9-zz̄)/2 {:.2e}\n  Γ(z,z̄) - (9-zz̄)   {:.2e} (printed form, not checked)\n  Jacobian on lines {:.2e}\n  Jacobian formula  {:.2e}\n",
        r.max_laplacian_error,
        r.max_deltoid_value,
        r.max_gamma_zz_error,
        r.max_gamma_zzbar_half_error,
        r.max_gamma_zzbar_error,
        r.max_jacobian_line_value,
        r.max_jacobian_true_error
    );
    Report::new("verify zmap", ok, r, text)
}

pub fn verify_structure() -> Result<Report> {
    let r = structure_report()?;
    let text = format!(
        "M10 = (x+1)·q with zero remainder: {}\nq = c·C9: {}\nC9 quartic factor = Q_δ: {}\n",
        r.m10_remainder_zero,
        r.m10_over_c9.as_ref().map(|c| format!("c = {c}")).unwrap_or_else(|| "no".into()),
        r.c9_quartic_is_deltoid
    );
    Report::new("verify structure", r.passes(), r, text)
}

fn read_exact_poly(path: &Path) -> Result<MPoly<Rational>> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
    let doc = value.get("polynomial").cloned().unwrap_or(value);
    let poly = AnyPoly::from_json(&doc.to_string())?;
    match poly {
        AnyPoly::Rational(p) => Ok(p),
        AnyPoly::QSqrt3(p) => {
            if p.terms().any(|(_, c)| c.b != deltoid_algebra::int(0)) {
                bail!("coefficients involve √3; the Milnor algebra is computed over Q");
            }
            Ok(p.map_coeffs(|c| c.a.clone()))
        }
        AnyPoly::Float(_) => bail!("float coefficients; rebuild the curve with exact coefficients"),
    }
}

pub fn milnor_report(input: Option<&Path>, golden: Option<GoldenCurve>, kmax: Option<u32>) -> Result<Report> {
    let f = match (input, golden) {
        (Some(path), _) => read_exact_poly(path)?,
        (None, Some(g)) => golden_curve(g),
        (None, None) => bail!("need --input or --golden"),
    };
    let curve = if f.is_homogeneous() && f.nvars() == 3 {
        HomogeneousCurve::new(f)?
    } else {
        HomogeneousCurve::from_affine(&f)?
    };
    let r = threshold_report(&curve, kmax)?;
    let mut text = format!(
        "degree {}: τ = {}, ct = {}, st = {}, T = {}\nfree: {}, maximising: {}\n",
        r.d, r.tau, r.ct, r.st, r.t, r.free, r.maximising
    );
    if let Some((a, b)) = r.exponents {
        writeln!(text, "exponents: ({a}, {b})")?;
    }
    writeln!(text, "dims: {:?}", r.dims)?;
    Report::new("milnor report", true, r, text)
}

pub fn mk(spec: &str) -> Result<Report> {
    let specs = parse_singularities(spec)?;
    let (tau, m) = mk_number(&specs);
    let m_f = deltoid_algebra::rational::to_f64(&m);
    let body = json!({
        "spec": specs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("+"),
        "tau_total": tau,
        "m": deltoid_algebra::format_rational(&m),
        "m_decimal": m_f,
    });
    Report::new("mk", true, body, format!("τ = {tau}, m = {m} = {m_f}\n"))
}

#[derive(Serialize)]
struct FamilyCounts {
    family: CriticalFamily,
    count: usize,
    expected: Option<usize>,
}

pub fn critical_list(d: u32, mu: &Angle) -> Result<Report> {
    let points = enumerate(d, mu)?;
    let expected = expected_abc(d);
    let counts: Vec<FamilyCounts> = CriticalFamily::ALL
        .iter()
        .map(|&f| FamilyCounts {
            family: f,
            count: family_count(&points, f),
            expected: match f {
                CriticalFamily::A => Some(expected[0]),
                CriticalFamily::B => Some(expected[1]),
                CriticalFamily::C => Some(expected[2]),
                _ if mu.in_lambda3() => None,
                _ => None,
            },
        })
        .collect();
    let d_total: usize = counts.iter().filter(|c| c.family.is_d()).map(|c| c.count).sum();
    let d_expected = mu.in_lambda3().then(|| (d * (d - 1) / 2) as usize);
    let properties = verify_properties(d)?;
    let ok = counts.iter().all(|c| c.expected.map_or(true, |e| e == c.count))
        && d_expected.map_or(true, |e| e == d_total)
        && properties.all_pass();

    let mut text = format!("P{d} at μ = {mu}: {} critical points\n", points.len());
    for c in &counts {
        let exp = c.expected.map(|e| format!(" (expected {e})")).unwrap_or_default();
        writeln!(text, "  {:?}: {}{exp}", c.family, c.count)?;
    }
    if let Some(e) = d_expected {
        writeln!(text, "  D total: {d_total} (expected {e})")?;
    }
    for p in &points {
        writeln!(
            text,
            "  {:<2} ({:>3},{:>3})  x = {:+.10}  y = {:+.10}  {:?}{}{}",
            format!("{:?}", p.family),
            p.k,
            p.l,
            p.xy[0],
            p.xy[1],
            p.hessian_class,
            if p.on_deltoid { "  on δ" } else { "" },
            if p.boundary { "  boundary" } else { "" }
        )?;
    }
    for (name, v) in [
        ("p1", &properties.p1),
        ("p2", &properties.p2),
        ("p3", &properties.p3),
        ("p4", &properties.p4),
        ("p5", &properties.p5),
    ] {
        writeln!(text, "  {name}: {} {}", if v.pass { "pass" } else { "FAIL" }, v.detail)?;
    }
    let body = json!({
        "d": d,
        "mu": mu,
        "counts": counts,
        "d_total": d_total,
        "d_total_expected": d_expected,
        "points": points,
        "properties": properties,
    });
    Report::new("critical list", ok, body, text)
}

fn parse_pair(s: &str) -> Result<[f64; 2]> {
    let (x, y) = s.split_once(',').with_context(|| format!("bad seed `{s}`, expected x,y"))?;
    Ok([x.trim().parse()?, y.trim().parse()?])
}

fn seeds(spec: &str, d: u32, mu: &Angle) -> Result<Vec<[f64; 2]>> {
    if spec == "centers" {
        return Ok(enumerate(d, mu)?
            .iter()
            .filter(|p| !p.boundary && matches!(p.hessian_class, HessianClass::Max | HessianClass::Min))
            .map(|p| [p.xy[0] + 1e-2, p.xy[1]])
            .collect());
    }
    if let Some(rest) = spec.strip_prefix("grid:") {
        let (n, window) = match rest.split_once(':') {
            Some((n, w)) => {
                let v: Vec<f64> = w.split(',').map(|t| t.trim().parse()).collect::<std::result::Result<_, _>>()?;
                if v.len() != 4 {
                    bail!("grid window needs xmin,xmax,ymin,ymax");
                }
                (n, [v[0], v[1], v[2], v[3]])
            }
            None => (rest, [-2.0, 2.0, -2.0, 2.0]),
        };
        let n: usize = n.parse().with_context(|| format!("bad grid size `{n}`"))?;
        if n == 0 {
            bail!("grid size must be positive");
        }
        let at = |lo: f64, hi: f64, i: usize| {
            if n == 1 {
                (lo + hi) / 2.0
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        return Ok((0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .map(|(i, j)| [at(window[0], window[1], i), at(window[2], window[3], j)])
            .collect());
    }
    let path = Path::new(spec);
    if path.exists() {
        let raw = std::fs::read_to_string(path)?;
        let pts: Vec<[f64; 2]> = serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(pts);
    }
    spec.split(';').filter(|s| !s.trim().is_empty()).map(parse_pair).collect()
}

#[derive(Serialize)]
struct SeedSummary {
    seed: [f64; 2],
    samples: usize,
    energy_drift: f64,
    escaped: bool,
    orientation: Orientation,
    monotone: bool,
    ok: bool,
}

pub fn flow_simulate(args: &FlowArgs) -> Result<Report> {
    let curve = build_pd(args.d, &args.mu, CoefficientMode::Float)?;
    let kind = match args.kind {
        Kind::Hamiltonian => FieldKind::Hamiltonian,
        Kind::Gradient => FieldKind::Gradient,
    };
    let field = VectorField::from_curve(&curve, kind)?;
    let defaults = FlowConfig::default();
    let config = FlowConfig {
        t_end: args.t,
        integrator: args.integrator.clone(),
        rel_tol: args.rel_tol.unwrap_or(defaults.rel_tol),
        abs_tol: args.abs_tol.unwrap_or(defaults.abs_tol),
        max_step: args.max_step.unwrap_or(defaults.max_step),
        ..defaults
    };
    let seeds = seeds(&args.seeds, args.d, &args.mu)?;
    if seeds.is_empty() {
        bail!("no seeds");
    }
    let trajectories: Vec<Trajectory> =
        seeds.iter().map(|&s| integrate(&field, s, &config)).collect::<deltoid_core::Result<_>>()?;
    let summaries: Vec<SeedSummary> = trajectories
        .iter()
        .map(|tr| {
            let monotone = monotone_decreasing(tr, 1e-10);
            let bound = 1e-6 * field.energy(tr.seed).abs() + 1e-9;
            // escaping orbits reach huge energies; only bounded ones are held to the drift bound
            let ok = match kind {
                FieldKind::Hamiltonian => tr.escaped || tr.energy_drift < bound,
                FieldKind::Gradient => monotone,
            };
            SeedSummary {
                seed: tr.seed,
                samples: tr.samples.len(),
                energy_drift: tr.energy_drift,
                escaped: tr.escaped,
                orientation: orbit_orientation(tr),
                monotone,
                ok,
            }
        })
        .collect();
    let ok = summaries.iter().all(|s| s.ok);
    let mut text = format!("P{} at μ = {}, {:?} field, t = {}, {} seeds\n", args.d, args.mu, kind, args.t, seeds.len());
    for s in &summaries {
        writeln!(
            text,
            "  ({:+.6}, {:+.6})  {:>6} samples  drift {:.2e}  {:?}{}{}",
            s.seed[0],
            s.seed[1],
            s.samples,
            s.energy_drift,
            s.orientation,
            if s.escaped { "  escaped" } else { "" },
            if s.ok { "" } else { "  FAIL" }
        )?;
    }
    if let Some(path) = &args.out {
        let body = json!({ "d": args.d, "mu": args.mu, "kind": kind, "config": config, "trajectories": trajectories });
        write_json(path, "flow simulate", &body)?;
        writeln!(text, "trajectories written to {}", path.display())?;
    }
    let body = json!({ "d": args.d, "mu": args.mu, "kind": kind, "config": config, "seeds": summaries });
    Report::new("flow simulate", ok, body, text)
}

pub fn bifurcate(d: u32, grid: usize, tol: f64, split: f64) -> Result<Report> {
    let r = scan(d, grid, tol)?;
    let censuses = r
        .points
        .iter()
        .map(|p| split_census(d, &Angle::Radians(p.mu), split))
        .collect::<deltoid_core::Result<Vec<_>>>()?;
    let ok = r.matches_expected && censuses.iter().all(|c| c.transition_ok);
    let mut text = format!("d = {d} on [{:.6}, {:.6}), grid {grid}\n", r.interval[0], r.interval[1]);
    for (p, c) in r.points.iter().zip(&censuses) {
        writeln!(
            text,
            "  μ* = {:.10} = {:.8}π  gap {:.1e}  det {:.1e}  {} sites, split {}",
            p.mu,
            p.mu_over_pi,
            p.evidence.min_family_gap,
            p.evidence.min_hessian_det,
            c.sites.len(),
            if c.transition_ok { "3 saddles + 1 center" } else { "NOT CONFIRMED" }
        )?;
    }
    writeln!(
        text,
        "expected {:?}π: {}",
        r.expected.iter().map(|e| e / std::f64::consts::PI).collect::<Vec<_>>(),
        if r.matches_expected { "match" } else { "MISMATCH" }
    )?;
    let body = json!({ "scan": r, "splits": censuses });
    Report::new("bifurcate scan", ok, body, text)
}

fn check_figure(fig: &Figure) -> Result<f64> {
    Ok(contour_residual_ratio(&fig.curve, 0.0, &fig.scene.levelset, &fig.spec)?)
}

pub fn plot(args: &PlotArgs) -> Result<Report> {
    let mut written = Vec::new();
    if let Some(dir) = &args.figures {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut figs = vec![m10_figure()?];
        figs.extend(sextic_panels()?);
        for fig in &figs {
            let path = dir.join(format!("{}.svg", fig.name));
            render(&fig.scene, &fig.spec, &path)?;
            written.push((path, check_figure(fig)?));
        }
    } else {
        let mut spec = PlotSpec { layers: args.layers.clone(), resolution: args.resolution, ..PlotSpec::default() };
        if let Some(w) = &args.window {
            if w.len() != 4 {
                bail!("--window needs xmin,xmax,ymin,ymax");
            }
            spec.window = [w[0], w[1], w[2], w[3]];
        }
        spec.validate()?;
        let (scene, curve) = match (args.d, &args.mu, args.golden) {
            (Some(d), Some(mu), _) => (family_scene(d, mu, &spec)?, build_pd(d, mu, CoefficientMode::Float)?.poly),
            (None, _, Some(g)) => (golden_scene(g, &spec)?, golden_curve(g).to_float()),
            _ => bail!("plot needs --d with --mu, --golden or --figures"),
        };
        let path = args.out.clone().context("--out is required")?;
        render(&scene, &spec, &path)?;
        let fig = Figure { name: String::new(), scene, spec, curve };
        written.push((path, check_figure(&fig)?));
    }
    let ok = written.iter().all(|(_, r)| *r < 1.0);
    let mut text = String::new();
    for (p, r) in &written {
        writeln!(text, "{}  contour residual {:.3} of bound", p.display(), r)?;
    }
    let body = json!({
        "files": written.iter().map(|(p, r)| json!({ "path": p, "residual_ratio": r })).collect::<Vec<_>>(),
    });
    Report::new("plot", ok, body, text)
}
