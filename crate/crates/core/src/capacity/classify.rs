//! Classification of Jordan curves through the seven-condition equivalence:
//! (1) Dirichlet algebra, (2) mutually singular harmonic measures,
//! (3) tangent points of zero length, (4) alpha = gamma on all subarcs,
//! (5) alpha comparable to gamma on all subarcs, and for quasicircles also
//! (6) harmonic measures singular with length and (7) pure unrectifiability.
//!
//! Verdicts propagate only along the proven implication graph: for general
//! Jordan curves (1)-(5) are equivalent and (7) => (6) => (1)-(5); for
//! quasicircles all seven are equivalent. Nothing is upgraded without a
//! certificate.

use crate::error::Error;
use crate::julia::in_main_cardioid;
use crate::real::Real;
use crate::sets::{ProfileEntry, SetKind, SetSpec};
use crate::Result;

/// Scale threshold for treating a tangent profile as tangent-free evidence.
/// A repo convention, not a theorem; recorded in the evidence string.
pub const TANGENT_EVIDENCE_THRESHOLD: f64 = 0.05;

/// Three-valued verdict for one condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::True => write!(f, "true"),
            Verdict::False => write!(f, "false"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Verdict plus where it came from.
#[derive(Clone, Debug)]
pub struct ConditionVerdict {
    pub verdict: Verdict,
    pub evidence: String,
}

/// Classification outcome for a Jordan curve or arc.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    /// Verdicts for conditions (1)..(7), indexed 0..7.
    pub conditions: Vec<ConditionVerdict>,
    pub alpha_gamma: String,
    /// Existence of an extremal function; `None` when undetermined.
    pub extremal_exists: Option<bool>,
    pub extremal_note: String,
}

fn tangent_free_from_profile<T: Real>(profile: &[ProfileEntry<T>]) -> Option<(bool, String)> {
    // Use the finest scale that is resolved at every point carrying it.
    let mut scales: Vec<T> = profile.iter().map(|e| e.scale).collect();
    scales.sort_by(|a, b| a.partial_cmp(b).unwrap());
    scales.dedup();
    for scale in scales {
        let entries: Vec<&ProfileEntry<T>> =
            profile.iter().filter(|e| e.scale == scale).collect();
        if entries.is_empty() || entries.iter().any(|e| e.value.is_none()) {
            continue;
        }
        let min_osc = entries
            .iter()
            .filter_map(|e| e.value)
            .fold(T::infinity(), |a, b| a.min(b));
        let threshold = T::of(TANGENT_EVIDENCE_THRESHOLD);
        let verdict = min_osc > threshold;
        return Some((
            verdict,
            format!(
                "tangent profile at scale {}: min oscillation {} vs threshold {} (repo convention)",
                scale.as_f64(),
                min_osc.as_f64(),
                TANGENT_EVIDENCE_THRESHOLD
            ),
        ));
    }
    None
}

/// Classifies a curve-variant set. Tangent-profile diagnostics, when given,
/// supply evidence for condition (3).
pub fn classify_jordan_curve<T: Real>(
    s: &SetSpec<T>,
    tangent_diagnostics: Option<&[ProfileEntry<T>]>,
) -> Result<ClassificationReport> {
    let is_arc = match &s.kind {
        SetKind::Disk { .. } => return Err(Error::NotACurve("disk is a region, not a curve".into())),
        SetKind::Union { .. } => return Err(Error::NotACurve("union is not a single curve".into())),
        SetKind::CircleArcs { arcs } if arcs.len() > 1 => {
            return Err(Error::NotACurve("several arcs are not a single curve".into()))
        }
        SetKind::Segment { .. } | SetKind::Polyline { .. } => true,
        SetKind::CircleArcs { .. } => !s.is_unit_circle(),
        SetKind::Julia { .. } | SetKind::PointCloud { .. } => false,
    };

    // Condition (3): H^1 of the tangent-point set vanishes.
    let mut c3 = ConditionVerdict {
        verdict: Verdict::Inconclusive,
        evidence: "no certificate".into(),
    };
    let mut quasicircle: Option<bool> = s.meta.is_quasicircle;
    match &s.kind {
        SetKind::Julia { c } => {
            if c.norm() == T::zero() {
                c3 = ConditionVerdict {
                    verdict: Verdict::False,
                    evidence: "the circle has a tangent at every point".into(),
                };
                quasicircle = Some(true);
            } else if in_main_cardioid(*c) {
                c3 = ConditionVerdict {
                    verdict: Verdict::True,
                    evidence: "attracting-fixed-point Julia curves with c != 0 have no tangent point"
                        .into(),
                };
                quasicircle = Some(true);
            }
        }
        SetKind::Segment { .. } | SetKind::Polyline { .. } => {
            c3 = ConditionVerdict {
                verdict: Verdict::False,
                evidence: "piecewise-linear curves have tangents off the corner set".into(),
            };
        }
        SetKind::CircleArcs { .. } => {
            c3 = ConditionVerdict {
                verdict: Verdict::False,
                evidence: "circular arcs have a tangent at every point".into(),
            };
            if s.is_unit_circle() {
                quasicircle = Some(true);
            }
        }
        _ => {}
    }
    if c3.verdict == Verdict::Inconclusive {
        if s.meta.is_analytic_boundary == Some(true) {
            c3 = ConditionVerdict {
                verdict: Verdict::False,
                evidence: "analytic curves have tangents everywhere (flag)".into(),
            };
        } else if s.meta.tangent_free_certificate == Some(true) {
            let prov = s
                .meta
                .provenance
                .get("tangent_free_certificate")
                .cloned()
                .unwrap_or_else(|| "user-asserted".into());
            c3 = ConditionVerdict {
                verdict: Verdict::True,
                evidence: format!("tangent-free certificate ({prov})"),
            };
        } else if let Some(profile) = tangent_diagnostics {
            if let Some((free, evidence)) = tangent_free_from_profile(profile) {
                c3 = ConditionVerdict {
                    verdict: if free { Verdict::True } else { Verdict::False },
                    evidence,
                };
            }
        }
    }

    let propagate = |v: Verdict| ConditionVerdict {
        verdict: v,
        evidence: "propagated from (3) along the equivalence (1)-(5)".into(),
    };
    let mut conditions = vec![
        propagate(c3.verdict),
        propagate(c3.verdict),
        c3.clone(),
        propagate(c3.verdict),
        propagate(c3.verdict),
    ];

    // (6) and (7): equivalent to the rest only on quasicircles; in general
    // only (7) => (6) => (1)-(5) holds, so a failed (3) still refutes them.
    let (v67, ev67) = match c3.verdict {
        Verdict::True => match quasicircle {
            Some(true) => (Verdict::True, "quasicircle: all seven conditions are equivalent".into()),
            _ => (
                Verdict::Inconclusive,
                "true (1)-(5) lifts to (6),(7) only for quasicircles".to_string(),
            ),
        },
        Verdict::False => (
            Verdict::False,
            "(7) implies (6) implies (1)-(5); a failed (3) refutes both".into(),
        ),
        Verdict::Inconclusive => (Verdict::Inconclusive, "no certificate".into()),
    };
    conditions.push(ConditionVerdict { verdict: v67, evidence: ev67.clone() });
    conditions.push(ConditionVerdict { verdict: v67, evidence: ev67 });

    let alpha_gamma = match c3.verdict {
        Verdict::True => "alpha(J') = gamma(J') for every subarc J'".to_string(),
        Verdict::False => {
            "tangents carry positive length: subarcs are rectifiable pieces with alpha = 0 < gamma"
                .to_string()
        }
        Verdict::Inconclusive => "relationship undetermined without a certificate".to_string(),
    };

    let (extremal_exists, extremal_note) = match (is_arc, c3.verdict) {
        (true, Verdict::True) => (
            Some(false),
            "tangent-free Jordan arc: no extremal function attains alpha".to_string(),
        ),
        (false, Verdict::False) => (
            Some(true),
            "analytic closed curve: the exterior conformal map attains gamma".to_string(),
        ),
        _ => (None, "existence undetermined".to_string()),
    };

    Ok(ClassificationReport { conditions, alpha_gamma, extremal_exists, extremal_note })
}

/// Consistency of a report with the implication graph: no (3) = true with a
/// false entry among (1)-(5), and no true (6)/(7) above a false (1)-(5).
pub fn implication_consistent(report: &ClassificationReport) -> bool {
    let v: Vec<Verdict> = report.conditions.iter().map(|c| c.verdict).collect();
    let first_five_true = v[..5].iter().all(|&x| x == Verdict::True);
    let first_five_false = v[..5].iter().all(|&x| x == Verdict::False);
    let mixed_first_five = !first_five_true
        && !first_five_false
        && v[..5].iter().any(|&x| x != Verdict::Inconclusive);
    if mixed_first_five {
        return false;
    }
    if (v[5] == Verdict::True || v[6] == Verdict::True) && !first_five_true {
        return false;
    }
    true
}
