//! Capacity engines for gamma, the rule chain for alpha, and the Jordan-curve
//! classification machinery.
//!
//! Four engines coexist, each with its own contract:
//! * `rules`: closed forms, exact.
//! * `leja`: greedy logarithmic-capacity points; equals gamma for connected
//!   sets in the limit.
//! * `lp`: certified lower bounds from pole expansions with a max-modulus
//!   check.
//! * `tolsa`: admissible-measure lower estimates through the curvature
//!   potential (comparable up to an absolute constant).
//!
//! There is no implemented exact method for general disconnected sets; the
//! crate reports lower bounds plus the H^1 upper bound when a length is
//! derivable, and never multiplies by unspecified comparability constants.

mod classify;
mod estimate;
mod gag;
pub mod leja;
pub mod lp;
pub mod rules;
mod semiadd;
pub mod tolsa;

pub use classify::{
    classify_jordan_curve, implication_consistent, ClassificationReport, ConditionVerdict,
    Verdict, TANGENT_EVIDENCE_THRESHOLD,
};
pub use estimate::{BoundKind, CapacityEstimate, Certificate};
pub use gag::{gamelin_garnett_profile, GagRow};
pub use leja::leja_logcap;
pub use lp::{lp_lower_bound, LpParams};
pub use rules::{alpha_evaluate, closed_form_gamma, h1_upper_bound, AlphaResult};
pub use semiadd::{
    pommerenke_table, semiadditivity_check, SemiadditivityReport, SeparationRow,
};
pub use tolsa::{default_potential_grid, tolsa_lower_bound, TolsaParams};
