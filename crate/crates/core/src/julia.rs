//! Quadratic dynamics for p_c(z) = z^2 + c: membership tests, the Böttcher
//! coordinate on the basin of infinity, Julia-curve tracing for main-cardioid
//! parameters, two independent samplers of exterior harmonic measure, and
//! box-counting dimension estimation.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::measures::DiscreteMeasure;
use crate::real::{Cplx, Real};
use crate::sets::{discrete_length, CurveSample};
use crate::Result;

/// Iteration parameters for the quadratic family.
#[derive(Clone, Debug, PartialEq)]
pub struct JuliaParams<T: Real> {
    pub c: Cplx<T>,
    pub escape_radius: T,
    pub max_iter: usize,
    pub boettcher_blowup: T,
    /// Radial offset epsilon: boundary values are approximated at |w| = 1 +
    /// epsilon, where the pull-back is stable; the offset is recorded in
    /// every trace.
    pub trace_offset: T,
}

impl<T: Real> JuliaParams<T> {
    /// Parameters with the standard defaults. The escape radius 2 is valid
    /// for |c| <= 2 and is raised to |c| + 1 otherwise.
    pub fn new(c: Cplx<T>) -> Self {
        let two = T::of(2.0);
        let escape_radius = if c.norm() <= two { two } else { c.norm() + T::one() };
        JuliaParams {
            c,
            escape_radius,
            max_iter: 256,
            boettcher_blowup: T::of(1e8),
            trace_offset: T::of((0.5f64).powi(20)),
        }
    }
}

/// Escape classification of an orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EscapeResult {
    /// First index m (checked before iterating, so m = 0 means the seed
    /// already lies outside the escape radius).
    Escaped(usize),
    /// Still inside the escape radius after the iteration budget.
    Bounded,
}

/// Attracting-fixed-point test for the main cardioid: |1 - sqrt(1 - 4c)| < 1
/// with the principal branch.
pub fn in_main_cardioid<T: Real>(c: Cplx<T>) -> bool {
    let one = Cplx::new(T::one(), T::zero());
    let root = (one - c * T::of(4.0)).sqrt();
    (one - root).norm() < T::one()
}

/// First iterate escaping the radius, or `Bounded` within the budget.
pub fn escape_time<T: Real>(p: &JuliaParams<T>, z: Cplx<T>) -> EscapeResult {
    let mut z = z;
    for m in 0..=p.max_iter {
        if z.norm() > p.escape_radius {
            return EscapeResult::Escaped(m);
        }
        z = z * z + p.c;
    }
    EscapeResult::Bounded
}

/// Number of squarings needed to push |w| past the blow-up threshold.
fn blowup_level<T: Real>(p: &JuliaParams<T>, w_norm: T) -> Result<u32> {
    const MAX_LEVEL: u32 = 40;
    let mut r = w_norm;
    for n in 0..=MAX_LEVEL {
        if r > p.boettcher_blowup {
            return Ok(n);
        }
        r = r * r;
    }
    // |w|^(2^40) <= blowup means |w| - 1 is below ~1e-13.
    let suggested = (p.boettcher_blowup.as_f64().ln() / 2f64.powi(MAX_LEVEL as i32)).exp() - 1.0;
    Err(Error::BoettcherTooClose { modulus: w_norm.as_f64(), suggested })
}

/// Böttcher coordinate B_c(w) for |w| >= 1 + trace_offset, normalized by
/// B_c(w) = w + O(1/w) at infinity.
///
/// The value is computed by squaring w up to a level N where B is the
/// identity to within the blow-up budget, then pulling back through
/// z -> sqrt(z - c), choosing at each level the branch nearer to the
/// reference orbit w^(2^k). An ambiguous branch choice is an error rather
/// than a guess.
pub fn boettcher_map<T: Real>(p: &JuliaParams<T>, w: Cplx<T>) -> Result<Cplx<T>> {
    let wn = w.norm();
    // Half-offset guard: points constructed at radius 1 + eps may round a
    // few ulps under it.
    if wn < T::one() + p.trace_offset / T::of(2.0) {
        return Err(Error::BoettcherTooClose {
            modulus: wn.as_f64(),
            suggested: p.trace_offset.as_f64(),
        });
    }
    if p.c == Cplx::new(T::zero(), T::zero()) {
        // B_0 is the identity.
        return Ok(w);
    }
    let levels = blowup_level(p, wn)?;
    // Forward references w^(2^k), k = 0..levels.
    let mut refs = Vec::with_capacity(levels as usize + 1);
    let mut r = w;
    refs.push(r);
    for _ in 0..levels {
        r = r * r;
        refs.push(r);
    }
    let mut z = refs[levels as usize];
    for k in (0..levels).rev() {
        let root = (z - p.c).sqrt();
        let reference = refs[k as usize];
        let d0 = (root - reference).norm();
        let d1 = (-root - reference).norm();
        let (near, far) = if d0 <= d1 { (d0, d1) } else { (d1, d0) };
        if far - near < T::of(0.25) * far {
            return Err(Error::BranchAmbiguity {
                level: k,
                d0: d0.as_f64(),
                d1: d1.as_f64(),
            });
        }
        z = if d0 <= d1 { root } else { -root };
    }
    Ok(z)
}

/// Conjugacy residual |B(w)^2 + c - B(w^2)| of the defining functional
/// equation.
pub fn boettcher_residual<T: Real>(p: &JuliaParams<T>, w: Cplx<T>) -> Result<T> {
    let bw = boettcher_map(p, w)?;
    let bw2 = boettcher_map(p, w * w)?;
    Ok((bw * bw + p.c - bw2).norm())
}

/// Trace of the Julia curve for a main-cardioid parameter: the images of
/// n equispaced external angles at radius 1 + epsilon. The n-point trace is a
/// subsequence of the 2n-point trace at the same angles.
pub fn trace_julia<T: Real>(p: &JuliaParams<T>, n_angles: usize) -> Result<CurveSample<T>> {
    if n_angles < 4 || !n_angles.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "n_angles must be a power of two >= 4, got {n_angles}"
        )));
    }
    if !in_main_cardioid(p.c) {
        return Err(Error::OutsideMainCardioid {
            re: p.c.re.as_f64(),
            im: p.c.im.as_f64(),
        });
    }
    let radius = T::one() + p.trace_offset;
    let results: Vec<Result<Cplx<T>>> = (0..n_angles)
        .into_par_iter()
        .map(|k| {
            let t = T::of(k as f64 / n_angles as f64);
            let theta = T::of(2.0) * T::PI() * t;
            let w = Cplx::from_polar(radius, theta);
            boettcher_map(p, w)
        })
        .collect();
    let mut points = Vec::with_capacity(n_angles);
    let mut params = Vec::with_capacity(n_angles);
    for (k, r) in results.into_iter().enumerate() {
        points.push(r?);
        params.push(T::of(k as f64 / n_angles as f64));
    }
    let mut sample = CurveSample::new(points, params, true)?;
    sample
        .provenance
        .insert("epsilon".into(), format!("{}", p.trace_offset.as_f64()));
    sample.provenance.insert(
        "c".into(),
        format!("{},{}", p.c.re.as_f64(), p.c.im.as_f64()),
    );
    Ok(sample)
}

/// Exterior harmonic measure sampler: i.i.d. uniform external angles pushed
/// through w -> B_c((1 + eps) e^(i theta)), equal weights 1/n.
pub fn harmonic_samples<T: Real>(
    p: &JuliaParams<T>,
    n: usize,
    seed: u64,
) -> Result<DiscreteMeasure<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if !in_main_cardioid(p.c) {
        return Err(Error::OutsideMainCardioid {
            re: p.c.re.as_f64(),
            im: p.c.im.as_f64(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = T::one() + p.trace_offset;
    let thetas: Vec<T> = (0..n)
        .map(|_| T::of(rng.gen::<f64>() * 2.0 * std::f64::consts::PI))
        .collect();
    let results: Vec<Result<Cplx<T>>> = thetas
        .par_iter()
        .map(|&theta| boettcher_map(p, Cplx::from_polar(radius, theta)))
        .collect();
    let mut points = Vec::with_capacity(n);
    for r in results {
        points.push(r?);
    }
    DiscreteMeasure::uniform(points)
}

/// Independent sampler of the same exterior harmonic measure by random
/// inverse iteration: each sample applies `depth` random pull-backs
/// z -> +-sqrt(z - c) to the repelling fixed point, so samples are i.i.d.
pub fn inverse_iteration_samples<T: Real>(
    p: &JuliaParams<T>,
    n: usize,
    depth: usize,
    seed: u64,
) -> Result<DiscreteMeasure<T>> {
    if n == 0 || depth == 0 {
        return Err(Error::InvalidArgument("need n >= 1 samples and depth >= 1".into()));
    }
    if escape_time(p, Cplx::new(T::zero(), T::zero())) != EscapeResult::Bounded {
        return Err(Error::OutsideMandelbrot {
            re: p.c.re.as_f64(),
            im: p.c.im.as_f64(),
        });
    }
    // Repelling fixed point (1 + sqrt(1 - 4c))/2 lies on the Julia set.
    let one = Cplx::new(T::one(), T::zero());
    let beta = (one + (one - p.c * T::of(4.0)).sqrt()) / T::of(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let mut z = beta;
        for _ in 0..depth {
            let root = (z - p.c).sqrt();
            z = if rng.gen::<bool>() { root } else { -root };
        }
        points.push(z);
    }
    DiscreteMeasure::uniform(points)
}

/// One row of the length-growth table.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthRow<T: Real> {
    pub depth: usize,
    pub n_angles: usize,
    pub length: T,
}

/// Discrete length of the trace at dyadic resolutions n = 2^d. Nondecreasing
/// in d because the vertex sets are nested.
pub fn length_growth<T: Real>(p: &JuliaParams<T>, depths: &[usize]) -> Result<Vec<LengthRow<T>>> {
    let mut rows = Vec::with_capacity(depths.len());
    for &d in depths {
        if d < 2 || d > 24 {
            return Err(Error::InvalidArgument(format!("depth {d} out of range 2..=24")));
        }
        let n = 1usize << d;
        let trace = trace_julia(p, n)?;
        rows.push(LengthRow { depth: d, n_angles: n, length: discrete_length(&trace)? });
    }
    Ok(rows)
}

/// One scale of a box-counting table.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxRow<T: Real> {
    pub scale: T,
    pub count: usize,
    pub resolved: bool,
}

/// Box-counting dimension estimate with fit diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimEstimate<T: Real> {
    pub slope: T,
    pub r_squared: T,
    pub rows: Vec<BoxRow<T>>,
}

/// Least-squares slope of log N(delta) against log(1/delta) over the
/// resolved scales. A scale is resolved when the count is at least 4 and at
/// most a quarter of the point count (guarding both saturation ends).
pub fn box_dimension<T: Real>(points: &[Cplx<T>], scales: &[T]) -> Result<BoxDimEstimate<T>> {
    if points.len() < 1000 {
        return Err(Error::InvalidArgument(format!(
            "box dimension needs at least 1000 points, got {}",
            points.len()
        )));
    }
    let mut rows = Vec::with_capacity(scales.len());
    for &delta in scales {
        if !(delta > T::zero()) {
            return Err(Error::InvalidArgument("scales must be positive".into()));
        }
        let mut boxes: HashSet<(i64, i64)> = HashSet::new();
        for p in points {
            let i = (p.re / delta).floor().as_f64() as i64;
            let j = (p.im / delta).floor().as_f64() as i64;
            boxes.insert((i, j));
        }
        let count = boxes.len();
        let resolved = count >= 8 && count * 4 <= points.len();
        rows.push(BoxRow { scale: delta, count, resolved });
    }
    let resolved: Vec<&BoxRow<T>> = rows.iter().filter(|r| r.resolved).collect();
    if resolved.len() < 3 {
        return Err(Error::TooFewScales { resolved: resolved.len(), needed: 3 });
    }
    let n = T::of(resolved.len() as f64);
    let xs: Vec<T> = resolved.iter().map(|r| (T::one() / r.scale).ln()).collect();
    let ys: Vec<T> = resolved.iter().map(|r| T::of(r.count as f64).ln()).collect();
    let sx: T = xs.iter().copied().sum();
    let sy: T = ys.iter().copied().sum();
    let sxx: T = xs.iter().map(|&x| x * x).sum();
    let sxy: T = xs.iter().zip(&ys).map(|(&x, &y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let mut ss_res = T::zero();
    let mut ss_tot = T::zero();
    for (&x, &y) in xs.iter().zip(&ys) {
        let fit = slope * x + intercept;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot > T::zero() { T::one() - ss_res / ss_tot } else { T::one() };
    Ok(BoxDimEstimate { slope, r_squared, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::diameter;
    use approx::assert_relative_eq;

    fn c64(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    #[test]
    fn main_cardioid_membership() {
        assert!(in_main_cardioid(c64(0.0, 0.0)));
        assert!(in_main_cardioid(c64(0.2, 0.0)));
        assert!(in_main_cardioid(c64(-0.6, 0.0)));
        assert!(in_main_cardioid(c64(0.2, 0.1)));
        assert!(!in_main_cardioid(c64(1.0, 0.0)));
        assert!(!in_main_cardioid(c64(0.26, 0.0)));
        assert!(!in_main_cardioid(c64(-0.76, 0.0)));
    }

    #[test]
    fn escape_time_examples() {
        let p = JuliaParams::new(c64(0.0, 0.0));
        assert_eq!(escape_time(&p, c64(3.0, 0.0)), EscapeResult::Escaped(0));
        assert_eq!(escape_time(&p, c64(0.5, 0.0)), EscapeResult::Bounded);
        let p = JuliaParams::new(c64(0.2, 0.0));
        assert_eq!(escape_time(&p, c64(0.0, 0.0)), EscapeResult::Bounded);
    }

    #[test]
    fn escape_time_matches_analytic_rule_for_c_zero() {
        // For c = 0 the orbit is bounded iff |z| <= 1.
        let p = JuliaParams { max_iter: 2000, ..JuliaParams::new(c64(0.0, 0.0)) };
        for k in 0..200 {
            let r = 0.02 + k as f64 * 0.011;
            let z = Cplx::from_polar(r, k as f64);
            let bounded = escape_time(&p, z) == EscapeResult::Bounded;
            // Skip the tiny annulus where the dyadic blow-up needs more
            // iterations than any finite budget.
            if (r - 1.0).abs() > 1e-3 {
                assert_eq!(bounded, r <= 1.0, "radius {r}");
            }
        }
    }

    #[test]
    fn boettcher_identity_at_zero() {
        let p = JuliaParams::new(c64(0.0, 0.0));
        for k in 0..20 {
            let w = Cplx::from_polar(1.1 + 0.3 * k as f64, 0.37 * k as f64);
            let b = boettcher_map(&p, w).unwrap();
            assert!((b - w).norm() < 1e-12);
        }
    }

    #[test]
    fn boettcher_conjugacy_residual() {
        let p = JuliaParams::new(c64(0.2, 0.0));
        let w = Cplx::from_polar(2.0, std::f64::consts::PI / 5.0);
        let res = boettcher_residual(&p, w).unwrap();
        assert!(res < 1e-8, "residual {res}");
    }

    #[test]
    fn boettcher_normalization_at_infinity() {
        let p = JuliaParams::new(c64(0.2, 0.0));
        for k in 0..16 {
            let w = Cplx::from_polar(10.0, k as f64 * 0.4);
            let b = boettcher_map(&p, w).unwrap();
            assert!((b - w).norm() <= 1.0 / w.norm(), "normalization at {w}");
        }
    }

    #[test]
    fn boettcher_conjugate_symmetry_for_real_c() {
        let p = JuliaParams::new(c64(-0.6, 0.0));
        for k in 0..25 {
            let w = Cplx::from_polar(1.3 + 0.1 * k as f64, 0.7 * k as f64);
            let b = boettcher_map(&p, w).unwrap();
            let bc = boettcher_map(&p, w.conj()).unwrap();
            assert!((bc - b.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn boettcher_rejects_too_close() {
        let p = JuliaParams::new(c64(0.2, 0.0));
        match boettcher_map(&p, Cplx::from_polar(1.0 + 1e-9, 0.3)) {
            Err(Error::BoettcherTooClose { .. }) => {}
            other => panic!("expected too-close error, got {other:?}"),
        }
    }

    #[test]
    fn trace_julia_circle_case() {
        let p = JuliaParams::new(c64(0.0, 0.0));
        let trace = trace_julia(&p, 8).unwrap();
        assert_eq!(trace.len(), 8);
        assert!(trace.closed);
        let radius = 1.0 + p.trace_offset;
        for pt in &trace.points {
            assert_relative_eq!(pt.norm(), radius, max_relative = 1e-12);
        }
        for w in trace.params.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(trace.provenance.contains_key("epsilon"));
    }

    #[test]
    fn trace_julia_noncircular_is_longer() {
        let p = JuliaParams::new(c64(0.2, 0.0));
        let trace = trace_julia(&p, 4096).unwrap();
        let len = discrete_length(&trace).unwrap();
        assert!(len > std::f64::consts::TAU, "length {len}");
    }

    #[test]
    fn trace_refinement_is_nested() {
        let p = JuliaParams::new(c64(0.2, 0.1));
        let coarse = trace_julia(&p, 64).unwrap();
        let fine = trace_julia(&p, 128).unwrap();
        for (k, pt) in coarse.points.iter().enumerate() {
            assert_eq!(*pt, fine.points[2 * k], "angle {k} moved under refinement");
        }
    }

    #[test]
    fn trace_rejects_outside_cardioid() {
        let p = JuliaParams::new(c64(1.0, 0.0));
        assert!(matches!(trace_julia(&p, 64), Err(Error::OutsideMainCardioid { .. })));
    }

    #[test]
    fn harmonic_samples_circle_and_mass() {
        let p = JuliaParams::new(c64(0.0, 0.0));
        let m = harmonic_samples(&p, 2000, 7).unwrap();
        let radius = 1.0 + p.trace_offset;
        for a in m.atoms() {
            assert_relative_eq!(a.norm(), radius, max_relative = 1e-12);
        }
        let mass = crate::measures::total_mass(&m);
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_samples_deterministic_in_seed() {
        let p = JuliaParams::new(c64(0.2, 0.0));
        let a = harmonic_samples(&p, 500, 99).unwrap();
        let b = harmonic_samples(&p, 500, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_iteration_stays_on_circle_for_c_zero() {
        let p = JuliaParams::new(c64(0.0, 0.0));
        let m = inverse_iteration_samples(&p, 500, 40, 3).unwrap();
        for a in m.atoms() {
            assert!((a.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn inverse_iteration_support_inside_escape_radius() {
        let p = JuliaParams::new(c64(0.2, 0.0));
        let m = inverse_iteration_samples(&p, 1000, 40, 4).unwrap();
        for a in m.atoms() {
            assert!(a.norm() <= p.escape_radius);
        }
    }

    /// Two-sample Kolmogorov-Smirnov statistic on sorted samples.
    pub(crate) fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let (n, m) = (a.len(), b.len());
        let (mut i, mut j) = (0usize, 0usize);
        let mut d: f64 = 0.0;
        while i < n && j < m {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
        }
        d
    }

    #[test]
    fn samplers_agree_in_distribution() {
        for &(re, seed) in &[(0.0, 11u64), (0.2, 12u64), (-0.6, 13u64)] {
            let p = JuliaParams::new(c64(re, 0.0));
            let h = harmonic_samples(&p, 10_000, seed).unwrap();
            let inv = inverse_iteration_samples(&p, 10_000, 40, seed + 100).unwrap();
            let angles = |m: &DiscreteMeasure<f64>| -> Vec<f64> {
                m.atoms().iter().map(|a| a.im.atan2(a.re)).collect()
            };
            let d = ks_statistic(angles(&h), angles(&inv));
            assert!(d < 0.02, "c = {re}: KS statistic {d}");
        }
    }

    #[test]
    fn length_growth_examples() {
        let depths: Vec<usize> = (6..=10).collect();
        let p0 = JuliaParams::new(c64(0.0, 0.0));
        let rows = length_growth(&p0, &depths).unwrap();
        for r in &rows {
            assert!(
                (r.length - std::f64::consts::TAU).abs() < 1e-3 * std::f64::consts::TAU,
                "depth {}: {}",
                r.depth,
                r.length
            );
        }
        let p = JuliaParams::new(c64(0.2, 0.0));
        let rows = length_growth(&p, &depths).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].length > w[0].length, "length growth must be strict for c = 0.2");
        }
    }

    #[test]
    fn box_dimension_smooth_curves() {
        let circle: Vec<Cplx<f64>> = (0..4096)
            .map(|k| Cplx::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 4096.0))
            .collect();
        let scales: Vec<f64> = (2..=7).map(|k| (0.5f64).powi(k)).collect();
        let est = box_dimension(&circle, &scales).unwrap();
        assert!((est.slope - 1.0).abs() < 0.05, "circle slope {}", est.slope);
        assert!(est.r_squared > 0.99);

        let segment: Vec<Cplx<f64>> =
            (0..2048).map(|k| c64(k as f64 / 2047.0 * 2.0 - 1.0, 0.0)).collect();
        let est = box_dimension(&segment, &scales).unwrap();
        assert!((est.slope - 1.0).abs() < 0.05, "segment slope {}", est.slope);
    }

    #[test]
    fn box_dimension_julia_exceeds_one() {
        let p = JuliaParams::new(c64(-0.6, 0.0));
        let trace = trace_julia(&p, 1 << 14).unwrap();
        assert!(diameter(&trace.points).unwrap() > 1.0);
        let scales: Vec<f64> = (3..=8).map(|k| (0.5f64).powi(k)).collect();
        let est = box_dimension(&trace.points, &scales).unwrap();
        assert!(est.slope >= 1.03, "J(-0.6) box dimension {}", est.slope);
    }

    #[test]
    fn box_dimension_errors() {
        let few: Vec<Cplx<f64>> = (0..10).map(|k| c64(k as f64, 0.0)).collect();
        assert!(box_dimension(&few, &[0.5, 0.25, 0.125]).is_err());
        let circle: Vec<Cplx<f64>> = (0..2000)
            .map(|k| Cplx::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 2000.0))
            .collect();
        // Only saturated scales: everything unresolved.
        assert!(matches!(
            box_dimension(&circle, &[100.0, 200.0, 400.0]),
            Err(Error::TooFewScales { .. })
        ));
    }
}
