//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by caplab operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid set description: {0}")]
    InvalidSet(String),

    #[error("invalid curve sample: {0}")]
    InvalidSample(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pushforward map failed on atom {index} at ({re}, {im})")]
    PushforwardFailed { index: usize, re: f64, im: f64 },

    #[error("atom count {n} exceeds the triple-sum cap {cap}; subsample the measure or raise the cap")]
    AtomCapExceeded { n: usize, cap: usize },

    #[error("measure support escapes the set: {count} offending atoms, first at ({re}, {im}) with distance {dist}")]
    SupportViolation { count: usize, re: f64, im: f64, dist: f64 },

    #[error("set not asserted connected; Leja estimates logarithmic capacity, which equals gamma only for connected sets (pass the override to label the result as logcap only)")]
    NotConnected,

    #[error("infeasible pole placement: {0}")]
    InfeasiblePole(String),

    #[error("LP solver did not converge: {0}")]
    LpFailure(String),

    #[error("|w| = {modulus} is too close to 1 for the blow-up budget; use an offset of at least {suggested}")]
    BoettcherTooClose { modulus: f64, suggested: f64 },

    #[error("branch ambiguity in the Böttcher pull-back at level {level}: candidate distances {d0} and {d1}")]
    BranchAmbiguity { level: u32, d0: f64, d1: f64 },

    #[error("parameter c = ({re}, {im}) is outside the main cardioid; the curve trace is undefined there")]
    OutsideMainCardioid { re: f64, im: f64 },

    #[error("parameter c = ({re}, {im}) escapes: not in the Mandelbrot set within the iteration budget")]
    OutsideMandelbrot { re: f64, im: f64 },

    #[error("point ({re}, {im}) is outside the motion's domain of definition")]
    OutsideMotionDomain { re: f64, im: f64 },

    #[error("lambda = ({re}, {im}) is outside the open unit disk")]
    LambdaOutsideDisk { re: f64, im: f64 },

    #[error("Blaschke zero ({re}, {im}) is not inside the open unit disk")]
    BlaschkeZeroOutsideDisk { re: f64, im: f64 },

    #[error("inverse of the base motion did not converge at ({re}, {im})")]
    MotionInverseFailed { re: f64, im: f64 },

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("evaluation point coincides with an atom at ({re}, {im})")]
    PointAtAtom { re: f64, im: f64 },

    #[error("not a curve variant: {0}")]
    NotACurve(String),

    #[error("point ({re}, {im}) is not on the curve (distance {dist})")]
    PointOffCurve { re: f64, im: f64, dist: f64 },

    #[error("contradictory metadata flags: {0}")]
    ContradictoryFlags(String),

    #[error("too few resolved scales: {resolved} (need at least {needed})")]
    TooFewScales { resolved: usize, needed: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
