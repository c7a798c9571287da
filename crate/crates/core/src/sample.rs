//! Boundary sampling of set descriptions and distance queries against them.
//! Capacity engines consume these samples as constraint points; the motion
//! module uses them as the material a motion moves.

use crate::julia::{trace_julia, JuliaParams};
use crate::real::{Cplx, Real};
use crate::sets::{SetKind, SetSpec};
use crate::Result;

/// One boundary component: ordered points, closed or open. Point clouds
/// produce one single-point component per point.
#[derive(Clone, Debug)]
pub struct BoundaryComponent<T: Real> {
    pub points: Vec<Cplx<T>>,
    pub closed: bool,
}

/// Boundary sample split into components, preserving order along each.
#[derive(Clone, Debug)]
pub struct BoundarySamples<T: Real> {
    pub components: Vec<BoundaryComponent<T>>,
}

impl<T: Real> BoundarySamples<T> {
    pub fn all_points(&self) -> Vec<Cplx<T>> {
        self.components.iter().flat_map(|c| c.points.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.components.iter().map(|c| c.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn circle_points<T: Real>(center: Cplx<T>, radius: T, n: usize) -> Vec<Cplx<T>> {
    (0..n)
        .map(|k| {
            let theta = T::of(2.0) * T::PI() * T::of(k as f64 / n as f64);
            center + Cplx::from_polar(radius, theta)
        })
        .collect()
}

fn segment_points<T: Real>(a: Cplx<T>, b: Cplx<T>, n: usize) -> Vec<Cplx<T>> {
    let n = n.max(2);
    (0..n)
        .map(|k| a + (b - a) * T::of(k as f64 / (n - 1) as f64))
        .collect()
}

/// Rough linear extent of a set, used to split sample budgets across union
/// parts.
fn extent<T: Real>(s: &SetSpec<T>) -> T {
    match &s.kind {
        SetKind::Disk { radius, .. } => T::of(2.0) * T::PI() * *radius,
        SetKind::Segment { a, b } => (*b - *a).norm(),
        SetKind::Polyline { points } => {
            let mut total = T::zero();
            for w in points.windows(2) {
                total = total + (w[1] - w[0]).norm();
            }
            total
        }
        SetKind::CircleArcs { arcs } => {
            let mut total = T::zero();
            for (st, en) in arcs {
                total = total + (*en - *st);
            }
            total
        }
        SetKind::Union { parts } => {
            let mut total = T::zero();
            for p in parts {
                total = total + extent(p);
            }
            total
        }
        SetKind::Julia { .. } => T::of(2.0) * T::PI(),
        SetKind::PointCloud { points } => T::of(points.len() as f64),
    }
}

/// Samples the boundary of a set with roughly `n` points in total.
pub fn boundary_sample<T: Real>(s: &SetSpec<T>, n: usize) -> Result<BoundarySamples<T>> {
    let n = n.max(4);
    let components = match &s.kind {
        SetKind::Disk { center, radius } => {
            vec![BoundaryComponent { points: circle_points(*center, *radius, n), closed: true }]
        }
        SetKind::Segment { a, b } => {
            vec![BoundaryComponent { points: segment_points(*a, *b, n), closed: false }]
        }
        SetKind::Polyline { points } => {
            let mut lens = Vec::new();
            let mut total = T::zero();
            for w in points.windows(2) {
                let l = (w[1] - w[0]).norm();
                lens.push(l);
                total = total + l;
            }
            let mut pts = Vec::with_capacity(n + points.len());
            for (w, l) in points.windows(2).zip(&lens) {
                let share =
                    ((*l / total).as_f64() * n as f64).ceil().max(2.0) as usize;
                let seg = segment_points(w[0], w[1], share);
                if !pts.is_empty() {
                    pts.extend_from_slice(&seg[1..]);
                } else {
                    pts.extend_from_slice(&seg);
                }
            }
            vec![BoundaryComponent { points: pts, closed: false }]
        }
        SetKind::CircleArcs { arcs } => {
            let total: T = {
                let mut t = T::zero();
                for (st, en) in arcs {
                    t = t + (*en - *st);
                }
                t
            };
            let full = s.is_unit_circle();
            arcs.iter()
                .map(|(st, en)| {
                    let share = (((*en - *st) / total).as_f64() * n as f64).ceil().max(4.0) as usize;
                    let points = (0..share)
                        .map(|k| {
                            let denom = if full { share } else { share - 1 };
                            let t = T::of(k as f64 / denom as f64);
                            let theta = *st + (*en - *st) * t;
                            Cplx::from_polar(T::one(), theta)
                        })
                        .collect();
                    BoundaryComponent { points, closed: full }
                })
                .collect()
        }
        SetKind::Union { parts } => {
            let total = extent(s);
            let mut components = Vec::new();
            for p in parts {
                let share = ((extent(p) / total).as_f64() * n as f64).ceil().max(8.0) as usize;
                components.extend(boundary_sample(p, share)?.components);
            }
            components
        }
        SetKind::Julia { c } => {
            let p = JuliaParams::new(*c);
            let n_pow = n.next_power_of_two().max(4);
            let trace = trace_julia(&p, n_pow)?;
            vec![BoundaryComponent { points: trace.points, closed: true }]
        }
        SetKind::PointCloud { points } => points
            .iter()
            .map(|&p| BoundaryComponent { points: vec![p], closed: false })
            .collect(),
    };
    Ok(BoundarySamples { components })
}

fn dist_point_segment<T: Real>(z: Cplx<T>, a: Cplx<T>, b: Cplx<T>) -> T {
    let ab = b - a;
    let denom = ab.norm_sqr();
    if denom == T::zero() {
        return (z - a).norm();
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / denom;
    let t = t.max(T::zero()).min(T::one());
    (z - (a + ab * t)).norm()
}

/// Distance from a point to the set. For disks the set includes the interior;
/// for Julia sets the distance is measured against a trace at the given
/// resolution, so it carries the trace accuracy.
pub fn dist_to_set<T: Real>(s: &SetSpec<T>, z: Cplx<T>, resolution: usize) -> Result<T> {
    let d = match &s.kind {
        SetKind::Disk { center, radius } => ((z - *center).norm() - *radius).max(T::zero()),
        SetKind::Segment { a, b } => dist_point_segment(z, *a, *b),
        SetKind::Polyline { points } => {
            let mut best = T::infinity();
            for w in points.windows(2) {
                best = best.min(dist_point_segment(z, w[0], w[1]));
            }
            best
        }
        SetKind::CircleArcs { arcs } => {
            let theta = {
                let mut t = z.im.atan2(z.re);
                if t < T::zero() {
                    t = t + T::of(2.0) * T::PI();
                }
                t
            };
            let mut best = T::infinity();
            for (st, en) in arcs {
                // Closest angle on the arc, allowing the 2*pi wrap.
                for shift in [-1.0, 0.0, 1.0] {
                    let th = theta + T::of(2.0) * T::PI() * T::of(shift);
                    let clamped = th.max(*st).min(*en);
                    let p = Cplx::from_polar(T::one(), clamped);
                    best = best.min((z - p).norm());
                }
            }
            best
        }
        SetKind::Union { parts } => {
            let mut best = T::infinity();
            for p in parts {
                best = best.min(dist_to_set(p, z, resolution)?);
            }
            best
        }
        SetKind::Julia { c } => {
            let p = JuliaParams::new(*c);
            let trace = trace_julia(&p, resolution.next_power_of_two().max(256))?;
            let mut best = T::infinity();
            for k in 0..trace.points.len() {
                let a = trace.points[k];
                let b = trace.points[(k + 1) % trace.points.len()];
                best = best.min(dist_point_segment(z, a, b));
            }
            best
        }
        SetKind::PointCloud { points } => {
            let mut best = T::infinity();
            for p in points {
                best = best.min((z - *p).norm());
            }
            best
        }
    };
    Ok(d)
}

/// Rough diameter of the set from a coarse boundary sample.
pub fn rough_diameter<T: Real>(s: &SetSpec<T>) -> Result<T> {
    let sample = boundary_sample(s, 128)?;
    crate::sets::diameter(&sample.all_points())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn disk_sampling_and_distance() {
        let s = SetSpec::disk(c(1.0, 2.0), 3.0).unwrap();
        let b = boundary_sample(&s, 64).unwrap();
        assert_eq!(b.len(), 64);
        for p in b.all_points() {
            assert!(((p - c(1.0, 2.0)).norm() - 3.0).abs() < 1e-12);
        }
        assert_eq!(dist_to_set(&s, c(1.0, 2.0), 64).unwrap(), 0.0);
        assert!((dist_to_set(&s, c(5.0, 2.0), 64).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn union_sampling_splits_by_extent() {
        let s = SetSpec::union(vec![
            SetSpec::disk(c(-50.0, 0.0), 1.0).unwrap(),
            SetSpec::disk(c(50.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let b = boundary_sample(&s, 200).unwrap();
        assert_eq!(b.components.len(), 2);
        let n0 = b.components[0].points.len();
        let n1 = b.components[1].points.len();
        assert!(n0 >= 90 && n1 >= 90, "{n0} {n1}");
    }

    #[test]
    fn segment_distance() {
        let s = SetSpec::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((dist_to_set(&s, c(0.5, 0.25), 16).unwrap() - 0.25).abs() < 1e-12);
        assert!((dist_to_set(&s, c(2.0, 0.0), 16).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_circle_sampling_is_closed_and_even() {
        let s = SetSpec::<f64>::unit_circle();
        let b = boundary_sample(&s, 16).unwrap();
        assert_eq!(b.components.len(), 1);
        assert!(b.components[0].closed);
        for p in &b.components[0].points {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }
}
