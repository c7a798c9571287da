//! Capacity estimate values with bound kind, method provenance and
//! certificates.

use std::collections::BTreeMap;

use crate::real::Real;

/// How a reported value relates to the true capacity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Closed-form rule; the value is the capacity.
    Exact,
    /// Certified from a feasible competitor; never exceeds the truth by more
    /// than the recorded safety factor.
    LowerBound,
    /// Comparable to the capacity up to an absolute constant that the theory
    /// leaves unspecified.
    Comparable,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::Exact => write!(f, "exact"),
            BoundKind::LowerBound => write!(f, "lower_bound"),
            BoundKind::Comparable => write!(f, "comparable"),
        }
    }
}

/// Diagnostic payload attached to an estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<T: Real> {
    /// Feasibility certificate of the LP engine: the maximum modulus found on
    /// the refined boundary check, before and after the final rescale, plus
    /// the resolution the check was carried to.
    MaxModulus {
        max_abs_raw: T,
        max_abs_final: T,
        checked_points: usize,
        spike_search: bool,
        pole_clearance: T,
    },
    /// Potential certificate of the curvature engine: grid maximum of U_mu
    /// before scaling and the admissible scale factor.
    PotentialGrid {
        u_max_before: T,
        scale: T,
        grid_points: usize,
        theta_profile: Option<Vec<(T, T)>>,
    },
    /// Running Leja estimates (step, value) for convergence diagnostics.
    Leja { checkpoints: Vec<(usize, T)> },
    /// Closed-form rule citation.
    Rule { citation: String },
}

/// A capacity value plus the contract it satisfies.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityEstimate<T: Real> {
    pub value: T,
    pub kind: BoundKind,
    pub method: String,
    pub params: BTreeMap<String, String>,
    pub certificate: Option<Certificate<T>>,
}

impl<T: Real> CapacityEstimate<T> {
    pub fn exact(value: T, method: &str, citation: &str) -> Self {
        CapacityEstimate {
            value,
            kind: BoundKind::Exact,
            method: method.to_string(),
            params: BTreeMap::new(),
            certificate: Some(Certificate::Rule { citation: citation.to_string() }),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}
