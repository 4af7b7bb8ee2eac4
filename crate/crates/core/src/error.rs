use deltoid_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("line index s = {s} outside {lo}..={hi} for degree {d}")]
    LineIndexOutOfRange { d: u32, s: i32, lo: i32, hi: i32 },
    #[error("degree must be at least {min}, got {d}")]
    DegreeTooLow { d: u32, min: u32 },
    #[error("exact construction needs d | 12 and μ = (6m−3d−1)π/6; got d = {d}, μ = {mu}")]
    ExactModeUnavailable { d: u32, mu: String },
    #[error("exact expansion left irrational coefficients")]
    IrrationalCoefficients,
    #[error("arrangement contains identical lines {0} and {1}")]
    DuplicateLines(usize, usize),
    #[error("cannot parse angle `{0}`")]
    BadAngle(String),
    #[error("metric is degenerate at ({0}, {1}): the point lies on the deltoid")]
    DegenerateMetric(String, String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("jacobian of the curve vanishes identically")]
    ZeroJacobian,
    #[error("graded dimensions not stable by k = {k_max}")]
    NotStabilized { k_max: u32 },
    #[error("invalid singularity `{0}`")]
    BadSingularity(String),
    #[error("Hirzebruch bound is for even degree, got {0}")]
    OddDegree(u32),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("unknown integrator `{0}`")]
    UnknownIntegrator(String),
    #[error("invalid flow configuration: {0}")]
    BadFlowConfig(String),
    #[error("unknown golden curve `{0}`")]
    UnknownCurve(String),
    #[error("offset δ = {delta} crosses another bifurcation")]
    DeltaTooLarge { delta: f64 },
    #[error("scan grid of {0} points is too coarse")]
    ScanGridTooCoarse(usize),
    #[error("candidates near μ = {mu} remain unresolved after refinement")]
    UnresolvedCandidate { mu: f64 },
    #[error("invalid plot specification: {0}")]
    BadPlotSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
