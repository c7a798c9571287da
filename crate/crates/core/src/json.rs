//! JSON wire formats: set descriptions tagged by "kind" with complex numbers
//! as [re, im] pairs and flags under "meta"; measures as arrays of
//! {"z": [re, im], "w": weight}; estimates and reports as plain objects.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::capacity::{CapacityEstimate, Certificate, ClassificationReport};
use crate::error::Error;
use crate::measures::DiscreteMeasure;
use crate::real::{Cplx, Real};
use crate::sets::{MetaFlags, SetKind, SetSpec};
use crate::Result;

#[derive(Serialize, Deserialize, Default)]
struct MetaDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    is_connected: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    is_quasicircle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    has_sigma_finite_length: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    is_analytic_boundary: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tangent_free_certificate: Option<bool>,
    #[serde(default, skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    provenance: std::collections::BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct SetDto {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parts: Option<Vec<SetDto>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<MetaDto>,
}

fn cx<T: Real>(p: [f64; 2]) -> Cplx<T> {
    Cplx::new(T::of(p[0]), T::of(p[1]))
}

fn px<T: Real>(z: Cplx<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn meta_from_dto(dto: MetaDto) -> MetaFlags {
    MetaFlags {
        is_connected: dto.is_connected,
        is_quasicircle: dto.is_quasicircle,
        has_sigma_finite_length: dto.has_sigma_finite_length,
        is_analytic_boundary: dto.is_analytic_boundary,
        tangent_free_certificate: dto.tangent_free_certificate,
        provenance: dto.provenance,
    }
}

fn meta_to_dto(meta: &MetaFlags) -> Option<MetaDto> {
    if *meta == MetaFlags::default() {
        return None;
    }
    Some(MetaDto {
        is_connected: meta.is_connected,
        is_quasicircle: meta.is_quasicircle,
        has_sigma_finite_length: meta.has_sigma_finite_length,
        is_analytic_boundary: meta.is_analytic_boundary,
        tangent_free_certificate: meta.tangent_free_certificate,
        provenance: meta.provenance.clone(),
    })
}

fn set_from_dto<T: Real>(dto: SetDto) -> Result<SetSpec<T>> {
    let missing = |field: &str, kind: &str| {
        Error::InvalidSet(format!("'{kind}' requires field '{field}'"))
    };
    let kind = match dto.kind.as_str() {
        "disk" => SetKind::Disk {
            center: cx(dto.center.ok_or_else(|| missing("center", "disk"))?),
            radius: T::of(dto.radius.ok_or_else(|| missing("radius", "disk"))?),
        },
        "segment" => SetKind::Segment {
            a: cx(dto.a.ok_or_else(|| missing("a", "segment"))?),
            b: cx(dto.b.ok_or_else(|| missing("b", "segment"))?),
        },
        "polyline" => SetKind::Polyline {
            points: dto
                .points
                .ok_or_else(|| missing("points", "polyline"))?
                .into_iter()
                .map(cx)
                .collect(),
        },
        "arcs" => SetKind::CircleArcs {
            arcs: dto
                .arcs
                .ok_or_else(|| missing("arcs", "arcs"))?
                .into_iter()
                .map(|p| (T::of(p[0]), T::of(p[1])))
                .collect(),
        },
        "union" => SetKind::Union {
            parts: dto
                .parts
                .ok_or_else(|| missing("parts", "union"))?
                .into_iter()
                .map(set_from_dto)
                .collect::<Result<Vec<_>>>()?,
        },
        "julia" => SetKind::Julia { c: cx(dto.c.ok_or_else(|| missing("c", "julia"))?) },
        "cloud" => SetKind::PointCloud {
            points: dto
                .points
                .ok_or_else(|| missing("points", "cloud"))?
                .into_iter()
                .map(cx)
                .collect(),
        },
        other => return Err(Error::InvalidSet(format!("unknown kind '{other}'"))),
    };
    let mut spec = SetSpec::new(kind)?;
    if let Some(meta) = dto.meta {
        spec.meta = meta_from_dto(meta);
    }
    Ok(spec)
}

fn set_to_dto<T: Real>(s: &SetSpec<T>) -> SetDto {
    let mut dto = SetDto {
        kind: String::new(),
        center: None,
        radius: None,
        a: None,
        b: None,
        points: None,
        arcs: None,
        parts: None,
        c: None,
        meta: meta_to_dto(&s.meta),
    };
    match &s.kind {
        SetKind::Disk { center, radius } => {
            dto.kind = "disk".into();
            dto.center = Some(px(*center));
            dto.radius = Some(radius.as_f64());
        }
        SetKind::Segment { a, b } => {
            dto.kind = "segment".into();
            dto.a = Some(px(*a));
            dto.b = Some(px(*b));
        }
        SetKind::Polyline { points } => {
            dto.kind = "polyline".into();
            dto.points = Some(points.iter().map(|&p| px(p)).collect());
        }
        SetKind::CircleArcs { arcs } => {
            dto.kind = "arcs".into();
            dto.arcs = Some(arcs.iter().map(|&(s, e)| [s.as_f64(), e.as_f64()]).collect());
        }
        SetKind::Union { parts } => {
            dto.kind = "union".into();
            dto.parts = Some(parts.iter().map(set_to_dto).collect());
        }
        SetKind::Julia { c } => {
            dto.kind = "julia".into();
            dto.c = Some(px(*c));
        }
        SetKind::PointCloud { points } => {
            dto.kind = "cloud".into();
            dto.points = Some(points.iter().map(|&p| px(p)).collect());
        }
    }
    dto
}

/// Parses a set description from JSON text.
pub fn set_from_json<T: Real>(text: &str) -> Result<SetSpec<T>> {
    let dto: SetDto = serde_json::from_str(text)?;
    set_from_dto(dto)
}

/// Serializes a set description to JSON.
pub fn set_to_json<T: Real>(s: &SetSpec<T>) -> Value {
    serde_json::to_value(set_to_dto(s)).expect("set serialization cannot fail")
}

#[derive(Serialize, Deserialize)]
struct AtomDto {
    z: [f64; 2],
    w: f64,
}

/// Parses a measure from a JSON array of {"z": [re, im], "w": weight}.
pub fn measure_from_json<T: Real>(text: &str) -> Result<DiscreteMeasure<T>> {
    let atoms: Vec<AtomDto> = serde_json::from_str(text)?;
    DiscreteMeasure::new(
        atoms.iter().map(|a| cx(a.z)).collect(),
        atoms.iter().map(|a| T::of(a.w)).collect(),
    )
}

/// Serializes a measure to JSON.
pub fn measure_to_json<T: Real>(m: &DiscreteMeasure<T>) -> Value {
    let atoms: Vec<AtomDto> = m
        .atoms()
        .iter()
        .zip(m.weights())
        .map(|(a, w)| AtomDto { z: px(*a), w: w.as_f64() })
        .collect();
    serde_json::to_value(atoms).expect("measure serialization cannot fail")
}

/// Serializes a capacity estimate with its certificate.
pub fn estimate_to_json<T: Real>(e: &CapacityEstimate<T>) -> Value {
    let certificate = e.certificate.as_ref().map(|c| match c {
        Certificate::MaxModulus {
            max_abs_raw,
            max_abs_final,
            checked_points,
            spike_search,
            pole_clearance,
        } => json!({
            "type": "max_modulus",
            "max_abs_raw": max_abs_raw.as_f64(),
            "max_abs_final": max_abs_final.as_f64(),
            "checked_points": checked_points,
            "spike_search": spike_search,
            "pole_clearance": pole_clearance.as_f64(),
        }),
        Certificate::PotentialGrid { u_max_before, scale, grid_points, theta_profile } => json!({
            "type": "potential_grid",
            "u_max_before": u_max_before.as_f64(),
            "scale": scale.as_f64(),
            "grid_points": grid_points,
            "theta_profile": theta_profile.as_ref().map(|rows| {
                rows.iter().map(|(a, b)| vec![a.as_f64(), b.as_f64()]).collect::<Vec<_>>()
            }),
        }),
        Certificate::Leja { checkpoints } => json!({
            "type": "leja",
            "checkpoints": checkpoints
                .iter()
                .map(|(k, v)| json!([k, v.as_f64()]))
                .collect::<Vec<_>>(),
        }),
        Certificate::Rule { citation } => json!({
            "type": "rule",
            "citation": citation,
        }),
    });
    json!({
        "value": e.value.as_f64(),
        "kind": e.kind.to_string(),
        "method": e.method,
        "params": e.params,
        "certificate": certificate,
    })
}

/// Serializes a classification report.
pub fn classification_to_json(r: &ClassificationReport) -> Value {
    json!({
        "conditions": r.conditions.iter().enumerate().map(|(i, c)| json!({
            "condition": i + 1,
            "verdict": c.verdict.to_string(),
            "evidence": c.evidence,
        })).collect::<Vec<_>>(),
        "alpha_gamma": r.alpha_gamma,
        "extremal_exists": r.extremal_exists,
        "extremal_note": r.extremal_note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::cplx;

    #[test]
    fn set_roundtrip() {
        let mut disk = SetSpec::disk(cplx::<f64>(1.0, -2.0), 3.0).unwrap();
        disk.meta.assert_flag("is_connected", true, "user");
        let union = SetSpec::union(vec![
            disk,
            SetSpec::segment(cplx::<f64>(0.0, 0.0), cplx(1.0, 1.0)).unwrap(),
            SetSpec::julia(cplx::<f64>(0.2, 0.1)).unwrap(),
        ])
        .unwrap();
        let text = set_to_json(&union).to_string();
        let back: SetSpec<f64> = set_from_json(&text).unwrap();
        assert_eq!(union, back);
    }

    #[test]
    fn schema_shape_matches_contract() {
        let s = SetSpec::disk(cplx::<f64>(0.0, 0.0), 1.0).unwrap();
        let v = set_to_json(&s);
        assert_eq!(v["kind"], "disk");
        assert_eq!(v["center"], json!([0.0, 0.0]));
        assert_eq!(v["radius"], json!(1.0));

        let parsed: SetSpec<f64> =
            set_from_json(r#"{"kind":"cloud","points":[[0,0],[1,2]]}"#).unwrap();
        assert!(matches!(parsed.kind, SetKind::PointCloud { .. }));

        let parsed: SetSpec<f64> = set_from_json(
            r#"{"kind":"segment","a":[0,0],"b":[4,0],"meta":{"is_connected":true}}"#,
        )
        .unwrap();
        assert_eq!(parsed.meta.is_connected, Some(true));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(set_from_json::<f64>(r#"{"kind":"disk"}"#).is_err());
        assert!(set_from_json::<f64>(r#"{"kind":"nope"}"#).is_err());
        assert!(set_from_json::<f64>("{").is_err());
        assert!(set_from_json::<f64>(r#"{"kind":"disk","center":[0,0],"radius":-1}"#).is_err());
    }

    #[test]
    fn measure_roundtrip() {
        let m = DiscreteMeasure::new(
            vec![cplx::<f64>(0.0, 0.0), cplx(1.0, -1.0)],
            vec![0.25, 0.75],
        )
        .unwrap();
        let text = measure_to_json(&m).to_string();
        let back: DiscreteMeasure<f64> = measure_from_json(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn estimate_serialization_includes_certificate() {
        let e = CapacityEstimate::<f64>::exact(1.0, "rules", "disk rule");
        let v = estimate_to_json(&e);
        assert_eq!(v["kind"], "exact");
        assert_eq!(v["certificate"]["type"], "rule");
    }
}
