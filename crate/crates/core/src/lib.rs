//! caplab: a numerical laboratory for analytic capacity and continuous
//! analytic capacity of planar compact sets.
//!
//! The crate provides:
//!
//! * geometric set descriptions and discrete rectifiability diagnostics
//!   ([`sets`]),
//! * discrete positive measures with density and maximal functionals
//!   ([`measures`]),
//! * Menger curvature of triples and measures and the associated potential
//!   ([`menger`]),
//! * capacity engines: closed-form rules, Leja/logarithmic capacity, a
//!   semi-infinite LP lower bound and a curvature-potential lower bound
//!   ([`capacity`]),
//! * quadratic dynamics: escape times, the Böttcher coordinate, Julia curve
//!   tracing and harmonic-measure sampling ([`julia`]),
//! * composable holomorphic motions and observable scans over a parameter
//!   path ([`motion`]),
//! * a discrete Cauchy transform and Vitushkin localization on grid
//!   functions ([`transforms`]).
//!
//! Core numerics are generic over the scalar type through the [`real::Real`]
//! trait; the aliases below fix the `f64` instantiations used by the CLI and
//! the test suites.

pub mod capacity;
pub mod error;
pub mod json;
pub mod julia;
pub mod measures;
pub mod menger;
pub mod motion;
pub mod props;
pub mod real;
pub mod sample;
pub mod sets;
pub mod transforms;

pub use error::Error;
pub use real::{Cplx, Real};

/// `f64` complex number, the working precision of the CLI.
pub type C64 = Cplx<f64>;
/// Set description at `f64` precision.
pub type SetSpec64 = sets::SetSpec<f64>;
/// Boundary sample at `f64` precision.
pub type CurveSample64 = sets::CurveSample<f64>;
/// Discrete measure at `f64` precision.
pub type DiscreteMeasure64 = measures::DiscreteMeasure<f64>;
/// Capacity estimate at `f64` precision.
pub type CapacityEstimate64 = capacity::CapacityEstimate<f64>;
/// Julia iteration parameters at `f64` precision.
pub type JuliaParams64 = julia::JuliaParams<f64>;
/// Holomorphic motion description at `f64` precision.
pub type MotionSpec64 = motion::MotionSpec<f64>;
/// Grid function at `f64` precision.
pub type GridFunction64 = transforms::GridFunction<f64>;

/// Result alias used throughout the crate.
pub type Result<V> = std::result::Result<V, Error>;
