//! Local alpha-density profile on a curve: the ratio alpha(B(z, delta) cap J)
//! / delta over shrinking radii. The density criterion for Dirichlet algebras
//! asks whether the liminf stays positive; these rows report the computable
//! rule-based surrogate with provenance per row.

use crate::error::Error;
use crate::julia::in_main_cardioid;
use crate::real::{Cplx, Real};
use crate::sample::{boundary_sample, rough_diameter};
use crate::sets::{diameter, SetKind, SetSpec};
use crate::Result;

/// One radius row of the profile.
#[derive(Clone, Debug)]
pub struct GagRow<T: Real> {
    pub delta: T,
    /// Ratio alpha-hat / delta; `None` when no rule applies.
    pub ratio: Option<T>,
    pub rule: String,
    pub out_of_regime: bool,
}

/// Profile of alpha-hat(closed ball cap J)/delta at a curve point.
pub fn gamelin_garnett_profile<T: Real>(
    s: &SetSpec<T>,
    z: Cplx<T>,
    deltas: &[T],
) -> Result<Vec<GagRow<T>>> {
    if deltas.is_empty() {
        return Err(Error::InvalidArgument("no radii given".into()));
    }
    let curve_like = matches!(
        &s.kind,
        SetKind::Segment { .. } | SetKind::Polyline { .. } | SetKind::CircleArcs { .. } | SetKind::Julia { .. }
    );
    if !curve_like {
        return Err(Error::NotACurve("profile needs a curve variant".into()));
    }
    let diam = rough_diameter(s)?;
    let samples = boundary_sample(s, 4096)?;
    let pts = samples.all_points();
    let mut nearest = 0usize;
    let mut nearest_d = T::infinity();
    for (i, p) in pts.iter().enumerate() {
        let d = (*p - z).norm();
        if d < nearest_d {
            nearest_d = d;
            nearest = i;
        }
    }
    let tol = T::of(1e-3) * diam;
    if nearest_d > tol {
        return Err(Error::PointOffCurve {
            re: z.re.as_f64(),
            im: z.im.as_f64(),
            dist: nearest_d.as_f64(),
        });
    }

    let finite_length = s.finite_length().is_some();
    let alpha_equals_gamma = match &s.kind {
        SetKind::Julia { c } => c.norm() > T::zero() && in_main_cardioid(*c),
        _ => {
            s.meta.is_quasicircle == Some(true) && s.meta.tangent_free_certificate == Some(true)
        }
    };

    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        if !(delta > T::zero()) {
            return Err(Error::InvalidArgument("radii must be positive".into()));
        }
        if delta > diam {
            rows.push(GagRow {
                delta,
                ratio: None,
                rule: "ball exceeds the curve diameter".into(),
                out_of_regime: true,
            });
            continue;
        }
        if finite_length {
            rows.push(GagRow {
                delta,
                ratio: Some(T::zero()),
                rule: "subarc has finite length, so alpha = 0".into(),
                out_of_regime: false,
            });
            continue;
        }
        if alpha_equals_gamma {
            // The contiguous subarc through z inside the closed ball; its
            // diameter lower-bounds 4 alpha via gamma >= diam/4.
            let n = pts.len();
            let inside = |i: usize| (pts[i] - z).norm() <= delta;
            let mut lo = nearest;
            let mut hi = nearest;
            for step in 1..n {
                let i = (nearest + n - step) % n;
                if inside(i) {
                    lo = i;
                } else {
                    break;
                }
            }
            for step in 1..n {
                let i = (nearest + step) % n;
                if inside(i) {
                    hi = i;
                } else {
                    break;
                }
            }
            let mut arc = Vec::new();
            let mut i = lo;
            loop {
                arc.push(pts[i]);
                if i == hi {
                    break;
                }
                i = (i + 1) % n;
            }
            let d = diameter(&arc)?;
            rows.push(GagRow {
                delta,
                ratio: Some(d / (T::of(4.0) * delta)),
                rule: "alpha = gamma on subarcs; gamma >= diam/4 for connected sets".into(),
                out_of_regime: false,
            });
            continue;
        }
        rows.push(GagRow { delta, ratio: None, rule: "no rule".into(), out_of_regime: false });
    }
    Ok(rows)
}
