//! `deltoid`: build the curves, run the checks, scan for bifurcations and
//! draw the figures.
//!
//! Exit status is 0 when every check of the command passes, 1 when a check
//! fails and 2 on bad input or a runtime error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltoid_core::family::GoldenCurve;
use deltoid_core::render::Layer;
use deltoid_core::Angle;

#[derive(Parser)]
#[command(name = "deltoid", version, about = "Deltoid-tangent polynomials: curves, invariants, flows and figures")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build P_d(x, y, μ) or one of the named curves.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Operator, metric and Z-map identities.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Graded Milnor algebra invariants of a plane curve.
    #[command(subcommand)]
    Milnor(MilnorCmd),
    /// MK number of a singularity multiset, e.g. "3E7+3D6+4D4+6A1".
    Mk {
        #[arg(long)]
        spec: String,
    },
    /// Critical points of P_d.
    #[command(subcommand)]
    Critical(CriticalCmd),
    /// Hamiltonian and gradient trajectories.
    #[command(subcommand)]
    Flow(FlowCmd),
    /// Parameter values where critical points collide.
    #[command(subcommand)]
    Bifurcate(BifurcateCmd),
    /// Render level sets, the deltoid, critical points and orbits to SVG.
    Plot(PlotArgs),
}

#[derive(Subcommand)]
enum CurveCmd {
    Build {
        #[arg(long)]
        d: u32,
        /// `<int>pi/<int>`, `pi/<int>` or radians.
        #[arg(long, allow_hyphen_values = true)]
        mu: Angle,
        /// Expand exactly over Q(√3); needs d | 12 and a vertical-line μ.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Golden {
        /// M10, M8tilde, C9 or deltoid.
        name: GoldenCurve,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// L₂J_d = −d²J_d.
    Eigen {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        mu: Angle,
        #[arg(long)]
        exact: bool,
        /// Relative residual allowed in float mode.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Zero curvature and |g| = −(3/16)Q_δ at random rational points.
    Flatness {
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks of the map z ↦ Z(z) at random points.
    Zmap {
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// M10/(x+1) against C9, and C9's quartic factor against Q_δ.
    Structure,
}

#[derive(Subcommand)]
enum MilnorCmd {
    Report {
        /// Polynomial JSON, bare or as written by `curve build`.
        #[arg(long, conflicts_with = "golden", required_unless_present = "golden")]
        input: Option<PathBuf>,
        #[arg(long)]
        golden: Option<GoldenCurve>,
        #[arg(long)]
        kmax: Option<u32>,
    },
}

#[derive(Subcommand)]
enum CriticalCmd {
    List {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        mu: Angle,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hamiltonian,
    Gradient,
}

#[derive(Subcommand)]
enum FlowCmd {
    Simulate(FlowArgs),
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, allow_hyphen_values = true)]
    mu: Angle,
    /// `centers`, `grid:N`, `grid:N:xmin,xmax,ymin,ymax`, `x,y;x,y;…` or a
    /// JSON file of `[x, y]` pairs.
    #[arg(long, default_value = "centers", allow_hyphen_values = true)]
    seeds: String,
    #[arg(long, default_value_t = 100.0)]
    t: f64,
    #[arg(long, value_enum, default_value_t = Kind::Hamiltonian)]
    kind: Kind,
    #[arg(long, default_value = "adaptive-rk")]
    integrator: String,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BifurcateCmd {
    Scan {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = deltoid_core::bifurcation::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = deltoid_core::bifurcation::DEFAULT_REFINE_TOL)]
        tol: f64,
        /// Offset δ for the saddle/center census around each value found.
        #[arg(long, default_value_t = 0.05)]
        split: f64,
    },
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, requires = "mu", conflicts_with_all = ["golden", "figures"])]
    d: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<Angle>,
    #[arg(long, conflicts_with = "figures")]
    golden: Option<GoldenCurve>,
    /// Write the M10 figure and the six P6 panels into this directory.
    #[arg(long)]
    figures: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "levelset,deltoid")]
    layers: Vec<Layer>,
    #[arg(long, default_value_t = 256)]
    resolution: usize,
    /// `xmin,xmax,ymin,ymax`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    window: Option<Vec<f64>>,
    #[arg(long, required_unless_present = "figures")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curve(CurveCmd::Build { d, mu, exact, out }) => commands::curve_build(d, &mu, exact, out.as_deref()),
        Command::Curve(CurveCmd::Golden { name, out }) => commands::curve_golden(name, out.as_deref()),
        Command::Verify(VerifyCmd::Eigen { d, mu, exact, tol }) => commands::verify_eigen(d, &mu, exact, tol),
        Command::Verify(VerifyCmd::Flatness { samples, seed }) => commands::verify_flatness(samples, seed),
        Command::Verify(VerifyCmd::Zmap { samples, seed }) => commands::verify_zmap(samples, seed),
        Command::Verify(VerifyCmd::Structure) => commands::verify_structure(),
        Command::Milnor(MilnorCmd::Report { input, golden, kmax }) => {
            commands::milnor_report(input.as_deref(), golden, kmax)
        }
        Command::Mk { spec } => commands::mk(&spec),
        Command::Critical(CriticalCmd::List { d, mu }) => commands::critical_list(d, &mu),
        Command::Flow(FlowCmd::Simulate(args)) => commands::flow_simulate(&args),
        Command::Bifurcate(BifurcateCmd::Scan { d, grid, tol, split }) => commands::bifurcate(d, grid, tol, split),
        Command::Plot(args) => commands::plot(&args),
    };
    match result {
        Ok(report) => {
            report.emit(cli.json);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", report::error_json(&e));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
