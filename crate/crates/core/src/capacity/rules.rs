//! Closed-form capacity rules and the rule chain for continuous analytic
//! capacity.
//!
//! gamma rules: closed disk -> r; segment -> |a - b|/4; subsets of the real
//! line -> H^1/4; finite point sets -> 0; main-cardioid Julia curves and the
//! unit circle -> 1 (exterior map normalized z + O(1/z)). Unions drop
//! null parts and duplicate parts before matching.
//!
//! alpha rules: sigma-finite length -> 0; analytic boundary -> alpha = gamma;
//! main-cardioid Julia curves (c != 0) -> 1; tangent-free quasicircles
//! -> alpha = gamma; otherwise the interval [0, gamma-estimate].

use crate::capacity::estimate::CapacityEstimate;
use crate::error::Error;
use crate::julia::in_main_cardioid;
use crate::real::Real;
use crate::sets::{SetKind, SetSpec};
use crate::Result;

/// Result of the alpha rule chain: either a determined estimate or the
/// trivial interval [0, gamma].
#[derive(Clone, Debug)]
pub enum AlphaResult<T: Real> {
    Estimate(CapacityEstimate<T>),
    /// No rule applies; alpha is only known to lie in [0, upper] where
    /// `upper` is the closed-form gamma when one exists.
    Interval { upper: Option<CapacityEstimate<T>>, note: String },
}

impl<T: Real> AlphaResult<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            AlphaResult::Estimate(e) => Some(e.value),
            AlphaResult::Interval { .. } => None,
        }
    }
}

/// Exact gamma when a closed-form rule matches; `None` means "no rule", not
/// an error.
pub fn closed_form_gamma<T: Real>(s: &SetSpec<T>) -> Option<CapacityEstimate<T>> {
    match &s.kind {
        SetKind::Disk { radius, .. } => Some(
            CapacityEstimate::exact(*radius, "rules", "gamma(closed disk of radius r) = r")
                .with_param("rule", "disk"),
        ),
        SetKind::Segment { a, b } => {
            let value = (*b - *a).norm() / T::of(4.0);
            Some(
                CapacityEstimate::exact(value, "rules", "gamma([a,b]) = |a-b|/4")
                    .with_param("rule", "segment"),
            )
        }
        SetKind::PointCloud { .. } => Some(
            CapacityEstimate::exact(T::zero(), "rules", "finite sets are H^1-null, gamma <= H^1")
                .with_param("rule", "finite"),
        ),
        SetKind::Julia { c } => {
            if in_main_cardioid(*c) {
                Some(
                    CapacityEstimate::exact(
                        T::one(),
                        "rules",
                        "exterior map normalized z + O(1/z) carries gamma of the closed unit disk",
                    )
                    .with_param("rule", "julia-main-cardioid"),
                )
            } else {
                None
            }
        }
        SetKind::CircleArcs { .. } => {
            if s.is_unit_circle() {
                Some(
                    CapacityEstimate::exact(
                        T::one(),
                        "rules",
                        "gamma(E) = gamma of the outer boundary; circle bounds the unit disk",
                    )
                    .with_param("rule", "unit-circle"),
                )
            } else {
                None
            }
        }
        SetKind::Polyline { .. } => s.real_line_intervals().map(|iv| {
            let mut total = T::zero();
            for (lo, hi) in iv {
                total = total + (hi - lo);
            }
            CapacityEstimate::exact(total / T::of(4.0), "rules", "gamma(E in R) = H^1(E)/4")
                .with_param("rule", "real-line")
        }),
        SetKind::Union { parts } => {
            // Null parts do not change gamma; identical duplicates collapse.
            let mut kept: Vec<&SetSpec<T>> = Vec::new();
            for p in parts {
                if let Some(est) = closed_form_gamma(p) {
                    if est.value == T::zero() {
                        continue;
                    }
                }
                if kept.iter().any(|k| **k == *p) {
                    continue;
                }
                kept.push(p);
            }
            match kept.len() {
                0 => Some(
                    CapacityEstimate::exact(T::zero(), "rules", "union of gamma-null sets")
                        .with_param("rule", "union-null"),
                ),
                1 => closed_form_gamma(kept[0]).map(|e| e.with_param("union", "null parts dropped")),
                _ => {
                    // All parts on the real line: merge intervals, H^1/4.
                    if let Some(iv) = s.real_line_intervals() {
                        let mut total = T::zero();
                        for (lo, hi) in iv {
                            total = total + (hi - lo);
                        }
                        Some(
                            CapacityEstimate::exact(
                                total / T::of(4.0),
                                "rules",
                                "gamma(E in R) = H^1(E)/4",
                            )
                            .with_param("rule", "real-line"),
                        )
                    } else {
                        None
                    }
                }
            }
        }
    }
}

/// Upper bound gamma <= H^1 when the length is derivable.
pub fn h1_upper_bound<T: Real>(s: &SetSpec<T>) -> Option<T> {
    s.finite_length()
}

fn contradictory_flags<T: Real>(s: &SetSpec<T>) -> Option<String> {
    let m = &s.meta;
    if m.is_analytic_boundary == Some(true) && m.tangent_free_certificate == Some(true) {
        return Some("analytic boundary has tangents everywhere but the set is flagged tangent-free".into());
    }
    if let SetKind::Julia { c } = &s.kind {
        let c = *c;
        if in_main_cardioid(c) && c.norm() > T::zero() && m.has_sigma_finite_length == Some(true) {
            return Some("main-cardioid Julia curves are purely unrectifiable, not sigma-finite".into());
        }
    }
    if m.has_sigma_finite_length == Some(true) && m.is_analytic_boundary == Some(true) {
        if let SetKind::Disk { .. } = &s.kind {
            return Some("a disk has positive area, not sigma-finite length".into());
        }
    }
    None
}

/// The alpha rule chain.
pub fn alpha_evaluate<T: Real>(s: &SetSpec<T>) -> Result<AlphaResult<T>> {
    if let Some(msg) = contradictory_flags(s) {
        return Err(Error::ContradictoryFlags(msg));
    }

    // Julia parameters resolve exactly.
    if let SetKind::Julia { c } = &s.kind {
        let c = *c;
        if c.norm() == T::zero() {
            return Ok(AlphaResult::Estimate(
                CapacityEstimate::exact(T::zero(), "alpha-rules", "finite length forces alpha = 0")
                    .with_param("rule", "circle"),
            ));
        }
        if in_main_cardioid(c) {
            return Ok(AlphaResult::Estimate(
                CapacityEstimate::exact(
                    T::one(),
                    "alpha-rules",
                    "main-cardioid Julia curves: alpha = gamma = 1",
                )
                .with_param("rule", "julia-main-cardioid"),
            ));
        }
        return Ok(AlphaResult::Interval {
            upper: None,
            note: "parameter outside the main cardioid: no alpha rule".into(),
        });
    }

    // Sigma-finite length wipes out alpha.
    let finite_len = s.meta.has_sigma_finite_length == Some(true) || s.finite_length().is_some();
    if finite_len {
        return Ok(AlphaResult::Estimate(
            CapacityEstimate::exact(
                T::zero(),
                "alpha-rules",
                "sigma-finite length forces alpha = 0",
            )
            .with_param("rule", "sigma-finite"),
        ));
    }

    // Analytic boundary: alpha equals gamma.
    let analytic = s.meta.is_analytic_boundary == Some(true)
        || matches!(&s.kind, SetKind::Disk { .. });
    if analytic {
        if let Some(gamma) = closed_form_gamma(s) {
            let mut est = gamma;
            est.method = "alpha-rules".into();
            est.params.insert("rule".into(), "analytic-boundary: alpha = gamma".into());
            return Ok(AlphaResult::Estimate(est));
        }
        return Ok(AlphaResult::Interval {
            upper: None,
            note: "alpha = gamma (analytic boundary) but no closed-form gamma; supply an engine estimate".into(),
        });
    }

    // Tangent-free quasicircle: alpha equals gamma on the curve and subarcs.
    if s.meta.is_quasicircle == Some(true) && s.meta.tangent_free_certificate == Some(true) {
        if let Some(gamma) = closed_form_gamma(s) {
            let mut est = gamma;
            est.method = "alpha-rules".into();
            est.params
                .insert("rule".into(), "tangent-free quasicircle: alpha = gamma".into());
            return Ok(AlphaResult::Estimate(est));
        }
        return Ok(AlphaResult::Interval {
            upper: None,
            note: "alpha = gamma (tangent-free quasicircle) but no closed-form gamma; supply an engine estimate".into(),
        });
    }

    Ok(AlphaResult::Interval {
        upper: closed_form_gamma(s),
        note: "no rule: alpha only bounded by 0 <= alpha <= gamma".into(),
    })
}
