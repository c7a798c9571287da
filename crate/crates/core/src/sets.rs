//! Geometric data model for compact sets and discrete rectifiability
//! diagnostics: diameters, chord lengths, a greedy Hausdorff premeasure,
//! and local flatness / tangent-direction profiles.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Error;
use crate::real::{Cplx, Real};
use crate::Result;

/// Metadata flags a set description may carry. Flags are never derived
/// silently: each one is user-asserted or produced by a diagnostic, and the
/// `provenance` map records where it came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetaFlags {
    pub is_connected: Option<bool>,
    pub is_quasicircle: Option<bool>,
    pub has_sigma_finite_length: Option<bool>,
    pub is_analytic_boundary: Option<bool>,
    pub tangent_free_certificate: Option<bool>,
    pub provenance: BTreeMap<String, String>,
}

impl MetaFlags {
    /// Sets a flag together with its provenance string.
    pub fn assert_flag(&mut self, name: &str, value: bool, provenance: &str) {
        match name {
            "is_connected" => self.is_connected = Some(value),
            "is_quasicircle" => self.is_quasicircle = Some(value),
            "has_sigma_finite_length" => self.has_sigma_finite_length = Some(value),
            "is_analytic_boundary" => self.is_analytic_boundary = Some(value),
            "tangent_free_certificate" => self.tangent_free_certificate = Some(value),
            _ => {}
        }
        self.provenance.insert(name.to_string(), provenance.to_string());
    }
}

/// Variants of a compact-set description.
#[derive(Clone, Debug, PartialEq)]
pub enum SetKind<T: Real> {
    Disk { center: Cplx<T>, radius: T },
    Segment { a: Cplx<T>, b: Cplx<T> },
    Polyline { points: Vec<Cplx<T>> },
    /// Arcs of the unit circle, given as (start, end) angles in radians with
    /// `start < end`.
    CircleArcs { arcs: Vec<(T, T)> },
    Union { parts: Vec<SetSpec<T>> },
    /// Julia set of z^2 + c.
    Julia { c: Cplx<T> },
    PointCloud { points: Vec<Cplx<T>> },
}

/// Symbolic description of a compact plane set plus metadata flags.
#[derive(Clone, Debug, PartialEq)]
pub struct SetSpec<T: Real> {
    pub kind: SetKind<T>,
    pub meta: MetaFlags,
}

impl<T: Real> SetSpec<T> {
    pub fn new(kind: SetKind<T>) -> Result<Self> {
        match &kind {
            SetKind::Disk { radius, .. } => {
                if !(*radius > T::zero()) {
                    return Err(Error::InvalidSet("disk radius must be positive".into()));
                }
            }
            SetKind::Segment { a, b } => {
                if a == b {
                    return Err(Error::InvalidSet("segment endpoints coincide".into()));
                }
            }
            SetKind::Polyline { points } => {
                if points.len() < 2 {
                    return Err(Error::InvalidSet("polyline needs at least 2 points".into()));
                }
            }
            SetKind::CircleArcs { arcs } => {
                if arcs.is_empty() {
                    return Err(Error::InvalidSet("arc list is empty".into()));
                }
                for (s, e) in arcs {
                    if !(*e > *s) {
                        return Err(Error::InvalidSet("degenerate arc: end must exceed start".into()));
                    }
                    if *e - *s > T::of(2.0) * T::PI() + T::of(1e-12) {
                        return Err(Error::InvalidSet("arc longer than the full circle".into()));
                    }
                }
            }
            SetKind::Union { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidSet("union of no sets".into()));
                }
            }
            SetKind::Julia { .. } => {}
            SetKind::PointCloud { points } => {
                if points.is_empty() {
                    return Err(Error::InvalidSet("point cloud is empty".into()));
                }
            }
        }
        Ok(SetSpec { kind, meta: MetaFlags::default() })
    }

    pub fn with_meta(mut self, meta: MetaFlags) -> Self {
        self.meta = meta;
        self
    }

    pub fn disk(center: Cplx<T>, radius: T) -> Result<Self> {
        Self::new(SetKind::Disk { center, radius })
    }

    pub fn segment(a: Cplx<T>, b: Cplx<T>) -> Result<Self> {
        Self::new(SetKind::Segment { a, b })
    }

    pub fn polyline(points: Vec<Cplx<T>>) -> Result<Self> {
        Self::new(SetKind::Polyline { points })
    }

    pub fn julia(c: Cplx<T>) -> Result<Self> {
        Self::new(SetKind::Julia { c })
    }

    pub fn point_cloud(points: Vec<Cplx<T>>) -> Result<Self> {
        Self::new(SetKind::PointCloud { points })
    }

    pub fn union(parts: Vec<SetSpec<T>>) -> Result<Self> {
        Self::new(SetKind::Union { parts })
    }

    /// The full unit circle as a single arc.
    pub fn unit_circle() -> Self {
        SetSpec {
            kind: SetKind::CircleArcs { arcs: vec![(T::zero(), T::of(2.0) * T::PI())] },
            meta: MetaFlags::default(),
        }
    }

    /// True when the variant is the full unit circle.
    pub fn is_unit_circle(&self) -> bool {
        match &self.kind {
            SetKind::CircleArcs { arcs } => {
                arcs.len() == 1
                    && arcs[0].0 == T::zero()
                    && (arcs[0].1 - T::of(2.0) * T::PI()).abs() < T::of(1e-12)
            }
            _ => false,
        }
    }

    /// Connectivity derivable from the variant alone, ignoring flags.
    pub fn intrinsically_connected(&self) -> Option<bool> {
        match &self.kind {
            SetKind::Disk { .. } | SetKind::Segment { .. } | SetKind::Polyline { .. } => Some(true),
            SetKind::CircleArcs { arcs } => Some(arcs.len() == 1),
            SetKind::PointCloud { points } => Some(points.len() == 1),
            SetKind::Julia { .. } => None, // connected iff c is in the Mandelbrot set
            SetKind::Union { .. } => None,
        }
    }

    /// Whether the set is asserted or derivable as connected.
    pub fn connected(&self) -> bool {
        self.meta.is_connected.or_else(|| self.intrinsically_connected()).unwrap_or(false)
    }

    /// One-dimensional Hausdorff measure when it is finite and derivable from
    /// the variant. `None` means "not derivable here", not "infinite".
    pub fn finite_length(&self) -> Option<T> {
        match &self.kind {
            SetKind::Segment { a, b } => Some((*b - *a).norm()),
            SetKind::Polyline { points } => {
                let mut total = T::zero();
                for w in points.windows(2) {
                    total = total + (w[1] - w[0]).norm();
                }
                Some(total)
            }
            SetKind::CircleArcs { arcs } => {
                let mut total = T::zero();
                for (s, e) in arcs {
                    total = total + (*e - *s);
                }
                Some(total)
            }
            SetKind::PointCloud { .. } => Some(T::zero()),
            SetKind::Union { parts } => {
                let mut total = T::zero();
                for p in parts {
                    total = total + p.finite_length()?;
                }
                Some(total)
            }
            SetKind::Julia { c } => {
                if c.norm() == T::zero() {
                    Some(T::of(2.0) * T::PI())
                } else {
                    None
                }
            }
            SetKind::Disk { .. } => None,
        }
    }

    /// If the set lies on the real axis, returns its intervals merged into a
    /// disjoint cover, for the rule gamma(E in R) = H^1(E)/4.
    pub fn real_line_intervals(&self) -> Option<Vec<(T, T)>> {
        fn merge<T: Real>(mut iv: Vec<(T, T)>) -> Vec<(T, T)> {
            iv.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut out: Vec<(T, T)> = Vec::new();
            for (s, e) in iv {
                if let Some(last) = out.last_mut() {
                    if s <= last.1 {
                        if e > last.1 {
                            last.1 = e;
                        }
                        continue;
                    }
                }
                out.push((s, e));
            }
            out
        }
        let real = |z: &Cplx<T>| z.im == T::zero();
        match &self.kind {
            SetKind::Segment { a, b } => {
                if real(a) && real(b) {
                    let (lo, hi) = if a.re <= b.re { (a.re, b.re) } else { (b.re, a.re) };
                    Some(vec![(lo, hi)])
                } else {
                    None
                }
            }
            SetKind::Polyline { points } => {
                if !points.iter().all(real) {
                    return None;
                }
                let mut iv = Vec::new();
                for w in points.windows(2) {
                    let (lo, hi) = if w[0].re <= w[1].re { (w[0].re, w[1].re) } else { (w[1].re, w[0].re) };
                    iv.push((lo, hi));
                }
                Some(merge(iv))
            }
            SetKind::PointCloud { points } => {
                if points.iter().all(real) {
                    Some(Vec::new())
                } else {
                    None
                }
            }
            SetKind::Union { parts } => {
                let mut iv = Vec::new();
                for p in parts {
                    iv.extend(p.real_line_intervals()?);
                }
                Some(merge(iv))
            }
            _ => None,
        }
    }
}

/// Ordered boundary sample of a curve: points plus a strictly increasing
/// parameter (external angle or arc parameter in [0, 1]).
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSample<T: Real> {
    pub points: Vec<Cplx<T>>,
    pub params: Vec<T>,
    pub closed: bool,
    /// Free-form provenance, e.g. the boundary offset used to produce the
    /// sample.
    pub provenance: BTreeMap<String, String>,
}

impl<T: Real> CurveSample<T> {
    pub fn new(points: Vec<Cplx<T>>, params: Vec<T>, closed: bool) -> Result<Self> {
        if points.len() != params.len() {
            return Err(Error::InvalidSample("points and params lengths differ".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidSample("empty sample".into()));
        }
        for w in params.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidSample("params must be strictly increasing".into()));
            }
        }
        if closed && params.len() > 1 {
            let span = *params.last().unwrap() - params[0];
            if span >= T::one() {
                return Err(Error::InvalidSample(
                    "closed sample params must stay within one period of length 1".into(),
                ));
            }
        }
        Ok(CurveSample { points, params, closed, provenance: BTreeMap::new() })
    }

    /// Uniformly parametrized sample of the unit circle.
    pub fn unit_circle(n: usize) -> Result<Self> {
        let mut points = Vec::with_capacity(n);
        let mut params = Vec::with_capacity(n);
        for k in 0..n {
            let t = T::of(k as f64 / n as f64);
            let theta = T::of(2.0) * T::PI() * t;
            points.push(Cplx::new(theta.cos(), theta.sin()));
            params.push(t);
        }
        CurveSample::new(points, params, true)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Maximum pairwise distance of a point set; 0 for a singleton.
pub fn diameter<T: Real>(points: &[Cplx<T>]) -> Result<T> {
    if points.is_empty() {
        return Err(Error::EmptyInput("diameter of an empty point set".into()));
    }
    let mut best = T::zero();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = (points[i] - points[j]).norm();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Sum of consecutive chord lengths, plus the closing chord when the sample
/// is closed.
pub fn discrete_length<T: Real>(s: &CurveSample<T>) -> Result<T> {
    if s.len() < 2 {
        return Err(Error::InvalidSample("length needs at least 2 points".into()));
    }
    let mut total = T::zero();
    for w in s.points.windows(2) {
        total = total + (w[1] - w[0]).norm();
    }
    if s.closed {
        total = total + (s.points[0] - *s.points.last().unwrap()).norm();
    }
    Ok(total)
}

/// Greedy upper estimate of the Hausdorff premeasure H^s_delta using balls of
/// diameter delta. Balls covering a single point shrink to that point and
/// contribute zero. The true infimum is NP-hard; only the relative behavior
/// of these values is used downstream.
pub fn hausdorff_premeasure<T: Real>(points: &[Cplx<T>], s: T, delta: T) -> Result<T> {
    if points.is_empty() {
        return Err(Error::EmptyInput("premeasure of an empty point set".into()));
    }
    if !(s > T::zero()) || s > T::of(2.0) {
        return Err(Error::InvalidArgument("exponent s must lie in (0, 2]".into()));
    }
    if !(delta > T::zero()) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let n = points.len();
    let mut covered = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    // Deterministic anchor order: lexicographic by (re, im).
    order.sort_by(|&i, &j| {
        (points[i].re, points[i].im)
            .partial_cmp(&(points[j].re, points[j].im))
            .unwrap()
    });
    let half = delta / T::of(2.0);
    let mut value = T::zero();
    for &anchor in &order {
        if covered[anchor] {
            continue;
        }
        // Farthest uncovered point within delta of the anchor; the ball is
        // centered midway so both extremes fit in diameter delta.
        let mut far = anchor;
        let mut far_d = T::zero();
        for j in 0..n {
            if covered[j] {
                continue;
            }
            let d = (points[j] - points[anchor]).norm();
            if d <= delta && d > far_d {
                far_d = d;
                far = j;
            }
        }
        let center = (points[anchor] + points[far]) / T::of(2.0);
        let mut count = 0usize;
        for j in 0..n {
            if !covered[j] && (points[j] - center).norm() <= half {
                covered[j] = true;
                count += 1;
            }
        }
        if !covered[anchor] {
            // The anchor always fits: |anchor - center| = far_d/2 <= delta/2.
            covered[anchor] = true;
            count += 1;
        }
        if count > 1 {
            value = value + delta.powf(s);
        }
    }
    Ok(value)
}

/// One row of a flatness or tangent profile. `value` is `None` when the scale
/// is unresolved at that point.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileEntry<T: Real> {
    pub point_index: usize,
    pub scale: T,
    pub value: Option<T>,
}

fn local_spacing<T: Real>(s: &CurveSample<T>, i: usize) -> T {
    let n = s.len();
    let mut best = T::infinity();
    if i > 0 {
        best = best.min((s.points[i] - s.points[i - 1]).norm());
    }
    if i + 1 < n {
        best = best.min((s.points[i] - s.points[i + 1]).norm());
    }
    if s.closed {
        if i == 0 {
            best = best.min((s.points[0] - s.points[n - 1]).norm());
        }
        if i == n - 1 {
            best = best.min((s.points[n - 1] - s.points[0]).norm());
        }
    }
    best
}

/// Flatness profile: for each point and scale r, the maximal distance of the
/// neighbors inside the ball of diameter r to their total-least-squares line,
/// divided by r. Zero for collinear neighborhoods; values lie in [0, 1].
pub fn beta_profile<T: Real>(s: &CurveSample<T>, scales: &[T]) -> Result<Vec<ProfileEntry<T>>> {
    if s.len() < 3 {
        return Err(Error::InvalidSample("beta profile needs at least 3 points".into()));
    }
    if scales.is_empty() {
        return Err(Error::InvalidArgument("no scales given".into()));
    }
    for r in scales {
        if !(*r > T::zero()) {
            return Err(Error::InvalidArgument("scales must be positive".into()));
        }
    }
    let pts = &s.points;
    let entries: Vec<ProfileEntry<T>> = (0..pts.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let spacing = local_spacing(s, i);
            scales.iter().map(move |&r| {
                let rad = r / T::of(2.0);
                if rad < spacing {
                    return ProfileEntry { point_index: i, scale: r, value: None };
                }
                let mut nb: Vec<Cplx<T>> = Vec::new();
                for p in pts.iter() {
                    if (*p - pts[i]).norm() <= rad {
                        nb.push(*p);
                    }
                }
                if nb.len() < 3 {
                    return ProfileEntry { point_index: i, scale: r, value: None };
                }
                let m = T::of(nb.len() as f64);
                let mut cx = T::zero();
                let mut cy = T::zero();
                for p in &nb {
                    cx = cx + p.re;
                    cy = cy + p.im;
                }
                cx = cx / m;
                cy = cy / m;
                let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
                for p in &nb {
                    let dx = p.re - cx;
                    let dy = p.im - cy;
                    sxx = sxx + dx * dx;
                    sxy = sxy + dx * dy;
                    syy = syy + dy * dy;
                }
                // Principal axis of the 2x2 covariance, in closed form.
                let theta = (T::of(2.0) * sxy).atan2(sxx - syy) / T::of(2.0);
                let (ux, uy) = (theta.cos(), theta.sin());
                let mut dev = T::zero();
                for p in &nb {
                    let dx = p.re - cx;
                    let dy = p.im - cy;
                    let d = (ux * dy - uy * dx).abs();
                    if d > dev {
                        dev = d;
                    }
                }
                ProfileEntry { point_index: i, scale: r, value: Some(dev / r) }
            })
        })
        .collect();
    Ok(entries)
}

/// Tangent profile: for each point and scale, the angular oscillation of the
/// chord directions arg(eta(t) - eta(t0)) around the best split theta /
/// theta + pi over the neighbors in that scale bucket. The reported value is
/// half the width of the minimal arc enclosing the folded directions, the
/// minimizer of the maximal deviation; ties in the enclosing arc are broken
/// by the first maximal gap in sorted order.
pub fn tangent_profile<T: Real>(s: &CurveSample<T>, scales: &[T]) -> Result<Vec<ProfileEntry<T>>> {
    if s.len() < 5 {
        return Err(Error::InvalidSample("tangent profile needs at least 5 points".into()));
    }
    if scales.is_empty() {
        return Err(Error::InvalidArgument("no scales given".into()));
    }
    for r in scales {
        if !(*r > T::zero()) {
            return Err(Error::InvalidArgument("scales must be positive".into()));
        }
    }
    let pts = &s.points;
    let params = &s.params;
    let closed = s.closed;
    let two_pi = T::of(2.0) * T::PI();
    let entries: Vec<ProfileEntry<T>> = (0..pts.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let spacing = local_spacing(s, i);
            scales.iter().map(move |&r| {
                let rad = r / T::of(2.0);
                if rad < spacing {
                    return ProfileEntry { point_index: i, scale: r, value: None };
                }
                let mut dirs: Vec<T> = Vec::new();
                let mut plus = 0usize;
                let mut minus = 0usize;
                for (j, p) in pts.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let d = *p - pts[i];
                    if d.norm() > rad || d.norm() == T::zero() {
                        continue;
                    }
                    let mut dp = params[j] - params[i];
                    if closed {
                        // Wrap into (-1/2, 1/2] of the unit parameter period.
                        while dp > T::of(0.5) {
                            dp = dp - T::one();
                        }
                        while dp <= T::of(-0.5) {
                            dp = dp + T::one();
                        }
                    }
                    let mut a = d.im.atan2(d.re);
                    if dp < T::zero() {
                        a = a - T::PI();
                    }
                    if dp > T::zero() {
                        plus += 1;
                    } else {
                        minus += 1;
                    }
                    // Normalize to [0, 2*pi).
                    while a < T::zero() {
                        a = a + two_pi;
                    }
                    while a >= two_pi {
                        a = a - two_pi;
                    }
                    dirs.push(a);
                }
                if plus == 0 || minus == 0 {
                    return ProfileEntry { point_index: i, scale: r, value: None };
                }
                dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut max_gap = two_pi - (*dirs.last().unwrap() - dirs[0]);
                for w in dirs.windows(2) {
                    let g = w[1] - w[0];
                    if g > max_gap {
                        max_gap = g;
                    }
                }
                let osc = (two_pi - max_gap) / T::of(2.0);
                ProfileEntry { point_index: i, scale: r, value: Some(osc) }
            })
        })
        .collect();
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn diameter_examples() {
        let d = diameter(&[c(0.0, 0.0), c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_relative_eq!(d, 5.0, max_relative = 1e-15);
        assert_eq!(diameter(&[c(1.0, 2.0)]).unwrap(), 0.0);
        assert!(diameter::<f64>(&[]).is_err());
        let circ = CurveSample::<f64>::unit_circle(1024).unwrap();
        let d = diameter(&circ.points).unwrap();
        assert!((d - 2.0).abs() < 1e-4);
    }

    #[test]
    fn discrete_length_examples() {
        let circ = CurveSample::<f64>::unit_circle(4096).unwrap();
        let len = discrete_length(&circ).unwrap();
        assert!((len - std::f64::consts::TAU).abs() < 1e-3);

        let seg = CurveSample::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![0.0, 1.0], false).unwrap();
        assert_relative_eq!(discrete_length(&seg).unwrap(), 1.0);
    }

    #[test]
    fn discrete_length_refinement_monotone() {
        // Nested vertex sets of the same curve can only gain length.
        let coarse = CurveSample::<f64>::unit_circle(256).unwrap();
        let fine = CurveSample::<f64>::unit_circle(2048).unwrap();
        assert!(discrete_length(&fine).unwrap() >= discrete_length(&coarse).unwrap());
    }

    /// Independent 1D oracle: optimal interval cover of points on a line.
    fn interval_cover_value(xs: &mut Vec<f64>, s: f64, delta: f64) -> f64 {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut count = 0usize;
        let mut i = 0usize;
        while i < xs.len() {
            let start = xs[i];
            let mut j = i;
            while j + 1 < xs.len() && xs[j + 1] - start <= delta {
                j += 1;
            }
            if j > i {
                count += 1;
            }
            i = j + 1;
        }
        count as f64 * delta.powf(s)
    }

    #[test]
    fn hausdorff_premeasure_interval() {
        let pts: Vec<Cplx<f64>> = (0..100).map(|k| c(k as f64 / 99.0, 0.0)).collect();
        let v = hausdorff_premeasure(&pts, 1.0, 0.1).unwrap();
        let mut xs: Vec<f64> = pts.iter().map(|p| p.re).collect();
        let oracle = interval_cover_value(&mut xs, 1.0, 0.1);
        assert_relative_eq!(oracle, 1.0, max_relative = 1e-12);
        assert!(v >= 1.0 - 1e-12 && v <= 1.2, "premeasure {v} outside [1.0, 1.2]");
    }

    #[test]
    fn hausdorff_premeasure_singleton_and_errors() {
        assert_eq!(hausdorff_premeasure(&[c(0.3, 0.7)], 1.5, 0.2).unwrap(), 0.0);
        assert!(hausdorff_premeasure(&[c(0.0, 0.0)], 0.0, 0.1).is_err());
        assert!(hausdorff_premeasure(&[c(0.0, 0.0)], 1.0, 0.0).is_err());
    }

    #[test]
    fn hausdorff_premeasure_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Cplx<f64>> = (0..80).map(|_| c(rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let doubled: Vec<Cplx<f64>> = pts.iter().map(|p| p * 2.0).collect();
        let v1 = hausdorff_premeasure(&pts, 1.0, 0.25).unwrap();
        let v2 = hausdorff_premeasure(&doubled, 1.0, 0.5).unwrap();
        assert_relative_eq!(v2, 2.0 * v1, max_relative = 1e-12);
    }

    #[test]
    fn hausdorff_premeasure_delta_monotone_on_clouds() {
        // Non-increasing in delta in the resolved regime, 10 random clouds.
        for seed in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Cplx<f64>> =
                (0..400).map(|_| c(rng.gen::<f64>(), rng.gen::<f64>())).collect();
            let v_coarse = hausdorff_premeasure(&pts, 1.0, 0.5).unwrap();
            let v_mid = hausdorff_premeasure(&pts, 1.0, 0.25).unwrap();
            let v_fine = hausdorff_premeasure(&pts, 1.0, 0.125).unwrap();
            assert!(v_mid >= v_coarse - 1e-12, "seed {seed}: {v_mid} < {v_coarse}");
            assert!(v_fine >= v_mid - 1e-12, "seed {seed}: {v_fine} < {v_mid}");
        }
    }

    #[test]
    fn beta_profile_collinear_is_zero() {
        let pts: Vec<Cplx<f64>> = (0..32).map(|k| c(k as f64 / 31.0, 0.0)).collect();
        let params: Vec<f64> = (0..32).map(|k| k as f64 / 31.0).collect();
        let s = CurveSample::new(pts, params, false).unwrap();
        let prof = beta_profile(&s, &[0.3, 0.7]).unwrap();
        for e in prof {
            if let Some(v) = e.value {
                assert!(v < 1e-12, "collinear flatness {v}");
            }
        }
    }

    #[test]
    fn beta_profile_circle_matches_sagitta_oracle() {
        let s = CurveSample::<f64>::unit_circle(4096).unwrap();
        for &r in &[0.2, 0.5, 1.0] {
            let prof = beta_profile(&s, &[r]).unwrap();
            // Closed-form oracle for the arc within chord distance r/2 of a
            // point: maximal deviation from the vertical line through the
            // centroid, divided by r.
            let phi = 2.0 * (r / 4.0).asin();
            let xbar = phi.sin() / phi;
            let oracle = (1.0 - xbar).max(xbar - phi.cos()) / r;
            let vals: Vec<f64> = prof.iter().filter_map(|e| e.value).collect();
            assert!(!vals.is_empty());
            for v in &vals {
                assert!((v - oracle).abs() < 5e-3, "r={r}: {v} vs oracle {oracle}");
                assert!(*v < 0.2, "circle flatness should stay small, got {v}");
            }
        }
    }

    #[test]
    fn beta_profile_unresolved_flag() {
        let s = CurveSample::<f64>::unit_circle(64).unwrap();
        // Scale far below the sample spacing (~0.1) must be flagged.
        let prof = beta_profile(&s, &[1e-4]).unwrap();
        assert!(prof.iter().all(|e| e.value.is_none()));
    }

    #[test]
    fn tangent_profile_circle_oscillation_decreases() {
        let s = CurveSample::<f64>::unit_circle(2048).unwrap();
        let scales = [0.8, 0.4, 0.2, 0.1];
        let prof = tangent_profile(&s, &scales).unwrap();
        // Average oscillation per scale must decrease towards zero.
        let mut avg = vec![(0.0, 0usize); scales.len()];
        for e in &prof {
            if let Some(v) = e.value {
                let k = scales.iter().position(|&r| r == e.scale).unwrap();
                avg[k].0 += v;
                avg[k].1 += 1;
            }
        }
        let means: Vec<f64> = avg.iter().map(|(s, n)| s / *n as f64).collect();
        for w in means.windows(2) {
            assert!(w[1] < w[0], "oscillation should decrease with scale: {means:?}");
        }
        assert!(*means.last().unwrap() < 0.1);
    }

    #[test]
    fn tangent_profile_corner_oscillation() {
        // L-shape: arm along +x then arm up in +y; corner at index 16.
        let mut pts = Vec::new();
        for k in 0..=16 {
            pts.push(c(1.0 - k as f64 / 16.0, 0.0));
        }
        for k in 1..=16 {
            pts.push(c(0.0, k as f64 / 16.0));
        }
        let params: Vec<f64> = (0..pts.len()).map(|k| k as f64 / (pts.len() - 1) as f64).collect();
        let s = CurveSample::new(pts, params, false).unwrap();
        let prof = tangent_profile(&s, &[0.25, 0.5, 1.0]).unwrap();
        for e in prof.iter().filter(|e| e.point_index == 16) {
            let v = e.value.expect("corner resolved");
            assert!(v >= std::f64::consts::FRAC_PI_4 - 1e-9, "corner oscillation {v}");
        }
    }

    #[test]
    fn profiles_rigid_motion_invariant() {
        let s = CurveSample::<f64>::unit_circle(256).unwrap();
        let rot = Cplx::from_polar(1.0, 0.83);
        let shift = c(-2.5, 1.25);
        let moved = CurveSample::new(
            s.points.iter().map(|p| p * rot + shift).collect(),
            s.params.clone(),
            true,
        )
        .unwrap();
        let scales = [0.5, 0.25];
        let a = beta_profile(&s, &scales).unwrap();
        let b = beta_profile(&moved, &scales).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            match (x.value, y.value) {
                (Some(u), Some(v)) => assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0)),
                (None, None) => {}
                _ => panic!("resolution flags disagree under rigid motion"),
            }
        }
        let ta = tangent_profile(&s, &scales).unwrap();
        let tb = tangent_profile(&moved, &scales).unwrap();
        for (x, y) in ta.iter().zip(tb.iter()) {
            if let (Some(u), Some(v)) = (x.value, y.value) {
                assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0));
            }
        }
    }

    #[test]
    fn scaling_covariance_of_metrics() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let pts: Vec<Cplx<f64>> =
                (0..40).map(|_| c(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0)).collect();
            let scale = 0.5 + rng.gen::<f64>() * 3.0;
            let shift = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let moved: Vec<Cplx<f64>> = pts.iter().map(|p| p * scale + shift).collect();
            let d0 = diameter(&pts).unwrap();
            let d1 = diameter(&moved).unwrap();
            assert_relative_eq!(d1, scale * d0, max_relative = 1e-12);
        }
    }
}
