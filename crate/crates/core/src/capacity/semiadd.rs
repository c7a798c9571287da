//! Semiadditivity experiments: gamma(E u F) against gamma(E) + gamma(F), and
//! separation tables for translate families approaching additivity. The
//! semiadditivity constant is unknown, so reports carry ratios without a
//! pass/fail judgement.

use crate::capacity::estimate::CapacityEstimate;
use crate::real::{Cplx, Real};
use crate::sets::{SetKind, SetSpec};
use crate::Result;

/// Engine used by the checks: any closure producing a gamma estimate.
pub type GammaEngine<'a, T> = dyn Fn(&SetSpec<T>) -> Result<CapacityEstimate<T>> + 'a;

/// Comparison of a union estimate against the sum of the parts.
#[derive(Clone, Debug)]
pub struct SemiadditivityReport<T: Real> {
    pub gamma_e: CapacityEstimate<T>,
    pub gamma_f: CapacityEstimate<T>,
    pub gamma_union: CapacityEstimate<T>,
    /// gamma(E u F) / (gamma(E) + gamma(F)).
    pub ratio: T,
}

/// Estimates gamma for both sets and their union with the supplied engine.
pub fn semiadditivity_check<T: Real>(
    e: &SetSpec<T>,
    f: &SetSpec<T>,
    engine: &GammaEngine<'_, T>,
) -> Result<SemiadditivityReport<T>> {
    let gamma_e = engine(e)?;
    let gamma_f = engine(f)?;
    let union = SetSpec::union(vec![e.clone(), f.clone()])?;
    let gamma_union = engine(&union)?;
    let denom = gamma_e.value + gamma_f.value;
    let ratio = if denom > T::zero() { gamma_union.value / denom } else { T::zero() };
    Ok(SemiadditivityReport { gamma_e, gamma_f, gamma_union, ratio })
}

/// One separation row of a translate-family table.
#[derive(Clone, Debug)]
pub struct SeparationRow<T: Real> {
    pub separation: T,
    pub gamma_union: T,
    pub gamma_sum: T,
    pub ratio: T,
}

/// Table of gamma(E u (F + d)) over separations d, exhibiting the approach
/// to additivity for far translates.
pub fn pommerenke_table<T: Real>(
    e: &SetSpec<T>,
    f: &SetSpec<T>,
    separations: &[T],
    engine: &GammaEngine<'_, T>,
) -> Result<Vec<SeparationRow<T>>> {
    fn translate<T: Real>(s: &SetSpec<T>, d: Cplx<T>) -> SetSpec<T> {
        let kind = match &s.kind {
            SetKind::Disk { center, radius } => SetKind::Disk { center: *center + d, radius: *radius },
            SetKind::Segment { a, b } => SetKind::Segment { a: *a + d, b: *b + d },
            SetKind::Polyline { points } => {
                SetKind::Polyline { points: points.iter().map(|p| *p + d).collect() }
            }
            SetKind::PointCloud { points } => {
                SetKind::PointCloud { points: points.iter().map(|p| *p + d).collect() }
            }
            SetKind::Union { parts } => {
                SetKind::Union { parts: parts.iter().map(|p| translate(p, d)).collect() }
            }
            // Arcs and Julia sets are anchored; translating them leaves the
            // symbolic form, so wrap as a translated cloud of samples is not
            // attempted here. Callers use translatable variants.
            other => other.clone(),
        };
        SetSpec { kind, meta: s.meta.clone() }
    }

    let gamma_e = engine(e)?.value;
    let mut rows = Vec::with_capacity(separations.len());
    for &d in separations {
        let shifted = translate(f, Cplx::new(d, T::zero()));
        let gamma_f = engine(&shifted)?.value;
        let union = SetSpec::union(vec![e.clone(), shifted])?;
        let gamma_union = engine(&union)?.value;
        let gamma_sum = gamma_e + gamma_f;
        let ratio = if gamma_sum > T::zero() { gamma_union / gamma_sum } else { T::zero() };
        rows.push(SeparationRow { separation: d, gamma_union, gamma_sum, ratio });
    }
    Ok(rows)
}
