//! Holomorphic motions as composable objects, and scans of observables along
//! a parameter path.
//!
//! The base motion is the Böttcher family h(lambda, z) = B_{lambda/4}(z),
//! defined on the closed exterior of the (1 + eps)-circle; that domain covers
//! every set the constructions move. Combinators translate a moved copy next
//! to an unmoved one, and reparametrize the disk through a finite Blaschke
//! product, which relocates a discontinuity at 0 to each of its zeros.

use std::collections::BTreeMap;

use crate::capacity::{alpha_evaluate, closed_form_gamma, leja_logcap, AlphaResult, BoundKind};
use crate::error::Error;
use crate::julia::{box_dimension, trace_julia, JuliaParams};
use crate::real::{Cplx, Real};
use crate::sample::boundary_sample;
use crate::sets::{discrete_length, CurveSample, SetSpec};
use crate::Result;

/// Radial margin of the Böttcher motion's domain of definition.
pub fn boettcher_domain_offset<T: Real>() -> T {
    T::of((0.5f64).powi(20))
}

/// Composable description of a holomorphic motion.
#[derive(Clone, Debug, PartialEq)]
pub enum MotionSpec<T: Real> {
    /// h(lambda, z) = B_{lambda/4}(z) on |z| >= 1 + eps.
    Boettcher,
    /// Moves z near the translated copy via the inner motion conjugated by
    /// the translation, and z in the inner domain directly: the moved set is
    /// (E_lambda + d) u F_lambda.
    TranslateUnion { inner: Box<MotionSpec<T>>, offset: Cplx<T> },
    /// Reparametrizes the inner motion by a finite Blaschke product b, with
    /// the base point re-anchored so that lambda = 0 is the identity.
    BlaschkeReparam { inner: Box<MotionSpec<T>>, zeros: Vec<Cplx<T>> },
}

impl<T: Real> MotionSpec<T> {
    /// Whether z lies in the motion's domain of definition. The radial test
    /// carries the same half-offset slack as the Böttcher evaluation, so
    /// points constructed at radius 1 + eps stay inside after rounding.
    pub fn domain_contains(&self, z: Cplx<T>) -> bool {
        match self {
            MotionSpec::Boettcher => {
                z.norm() >= T::one() + boettcher_domain_offset::<T>() / T::of(2.0)
            }
            MotionSpec::TranslateUnion { inner, offset } => {
                inner.domain_contains(z) || inner.domain_contains(z - offset)
            }
            MotionSpec::BlaschkeReparam { inner, .. } => inner.domain_contains(z),
        }
    }
}

/// Finite Blaschke product with the zero-normalizing factors -|b|/b; zeros at
/// the origin contribute plain factors z.
pub fn blaschke_eval<T: Real>(zeros: &[Cplx<T>], z: Cplx<T>) -> Result<Cplx<T>> {
    if z.norm() >= T::one() {
        return Err(Error::LambdaOutsideDisk { re: z.re.as_f64(), im: z.im.as_f64() });
    }
    let mut out = Cplx::new(T::one(), T::zero());
    for beta in zeros {
        if beta.norm() >= T::one() {
            return Err(Error::BlaschkeZeroOutsideDisk {
                re: beta.re.as_f64(),
                im: beta.im.as_f64(),
            });
        }
        if beta.norm() == T::zero() {
            out = out * z;
        } else {
            let norm_factor = -Cplx::new(beta.norm(), T::zero()) / beta;
            let moebius = (z - beta) / (Cplx::new(T::one(), T::zero()) - beta.conj() * z);
            out = out * norm_factor * moebius;
        }
    }
    Ok(out)
}

fn check_lambda<T: Real>(lambda: Cplx<T>) -> Result<()> {
    if lambda.norm() >= T::one() {
        return Err(Error::LambdaOutsideDisk {
            re: lambda.re.as_f64(),
            im: lambda.im.as_f64(),
        });
    }
    Ok(())
}

/// Inverse of the Böttcher map by Newton iteration with a numerical
/// derivative; the normalization z + O(1/z) makes the map itself a good
/// starting point.
fn inverse_boettcher<T: Real>(p: &JuliaParams<T>, y: Cplx<T>) -> Result<Cplx<T>> {
    if p.c == Cplx::new(T::zero(), T::zero()) {
        return Ok(y);
    }
    let mut w = y;
    let h = T::of(1e-7);
    for _ in 0..60 {
        let bw = boettcher_map(p, w)?;
        let err = bw - y;
        if err.norm() < T::of(1e-13) * y.norm().max(T::one()) {
            return Ok(w);
        }
        let step = Cplx::new(h, T::zero()) * w.norm().max(T::one());
        let d = (boettcher_map(p, w + step)? - bw) / step;
        if d.norm() == T::zero() {
            break;
        }
        let mut next = w - err / d;
        // Keep the iterate inside the domain of definition.
        let floor = T::one() + p.trace_offset;
        if next.norm() < floor {
            next = next / next.norm() * floor;
        }
        w = next;
    }
    Err(Error::MotionInverseFailed { re: y.re.as_f64(), im: y.im.as_f64() })
}

use crate::julia::boettcher_map;

/// Evaluates the motion at (lambda, z). lambda = 0 is the identity for every
/// variant.
pub fn motion_eval<T: Real>(m: &MotionSpec<T>, lambda: Cplx<T>, z: Cplx<T>) -> Result<Cplx<T>> {
    check_lambda(lambda)?;
    if !m.domain_contains(z) {
        return Err(Error::OutsideMotionDomain { re: z.re.as_f64(), im: z.im.as_f64() });
    }
    if lambda == Cplx::new(T::zero(), T::zero()) {
        return Ok(z);
    }
    match m {
        MotionSpec::Boettcher => {
            let p = JuliaParams::new(lambda / T::of(4.0));
            boettcher_map(&p, z)
        }
        MotionSpec::TranslateUnion { inner, offset } => {
            // Both pieces live in the inner domain; membership goes to the
            // nearer copy (the pieces are separated by construction).
            let translated_is_closer = (z - offset).norm() < z.norm();
            if translated_is_closer && inner.domain_contains(z - offset) {
                Ok(motion_eval(inner, lambda, z - offset)? + offset)
            } else if inner.domain_contains(z) {
                motion_eval(inner, lambda, z)
            } else {
                Ok(motion_eval(inner, lambda, z - offset)? + offset)
            }
        }
        MotionSpec::BlaschkeReparam { inner, zeros } => {
            let lam_eff = blaschke_eval(zeros, lambda)?;
            let base = blaschke_eval(zeros, Cplx::new(T::zero(), T::zero()))?;
            // Re-anchor: pull z back through the inner motion at b(0), then
            // push forward at b(lambda).
            let z0 = match inner.as_ref() {
                MotionSpec::Boettcher => {
                    let p = JuliaParams::new(base / T::of(4.0));
                    inverse_boettcher(&p, z)?
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "Blaschke reparametrization inverts only the Boettcher base motion".into(),
                    ))
                }
            };
            motion_eval(inner, lam_eff, z0)
        }
    }
}

/// Moves a curve sample pointwise; parameters are preserved.
pub fn move_set<T: Real>(
    m: &MotionSpec<T>,
    lambda: Cplx<T>,
    s: &CurveSample<T>,
) -> Result<CurveSample<T>> {
    let mut points = Vec::with_capacity(s.len());
    for p in &s.points {
        points.push(motion_eval(m, lambda, *p)?);
    }
    let mut out = CurveSample::new(points, s.params.clone(), s.closed)?;
    out.provenance = s.provenance.clone();
    out.provenance.insert(
        "lambda".into(),
        format!("{},{}", lambda.re.as_f64(), lambda.im.as_f64()),
    );
    Ok(out)
}

/// Observables a scan can evaluate per parameter value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    GammaLeja,
    GammaRules,
    AlphaRules,
    Length,
    BoxDim,
}

impl Observable {
    pub fn name(&self) -> &'static str {
        match self {
            Observable::GammaLeja => "gamma_leja",
            Observable::GammaRules => "gamma_rules",
            Observable::AlphaRules => "alpha_rules",
            Observable::Length => "length",
            Observable::BoxDim => "box_dim",
        }
    }
}

impl std::str::FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" | "gamma_leja" => Ok(Observable::GammaLeja),
            "gamma_rules" => Ok(Observable::GammaRules),
            "alpha" | "alpha_rules" => Ok(Observable::AlphaRules),
            "length" => Ok(Observable::Length),
            "box_dim" | "dim" => Ok(Observable::BoxDim),
            other => Err(Error::InvalidArgument(format!("unknown observable '{other}'"))),
        }
    }
}

/// Scan configuration.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// log2 of the number of trace points used for moved-set samples.
    pub trace_depth: usize,
    pub leja_budget: usize,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { trace_depth: 12, leja_budget: 256, seed: 1 }
    }
}

/// One row of a scan table.
#[derive(Clone, Debug)]
pub struct ScanRow<T: Real> {
    pub lambda: Cplx<T>,
    pub observable: Observable,
    pub value: Option<T>,
    pub kind: String,
    pub notes: String,
}

/// Scan output plus engine provenance.
#[derive(Clone, Debug)]
pub struct ScanResult<T: Real> {
    pub rows: Vec<ScanRow<T>>,
    pub provenance: BTreeMap<String, String>,
}

fn canon_bits<T: Real>(x: T) -> u64 {
    let v = x.as_f64();
    // Collapse -0 with +0 so reparametrized zeros hash like a literal 0.
    let v = if v == 0.0 { 0.0 } else { v };
    v.to_bits()
}

fn fnv1a(parts: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for p in parts {
        for b in p.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Per-row seed derived from the root seed, the effective parameter value
/// and the observable, so composed scans that land on the same effective
/// parameter reproduce the same row bit for bit.
fn row_seed<T: Real>(config: &ScanConfig, lambda_eff: Cplx<T>, obs: Observable) -> u64 {
    fnv1a(&[
        config.seed,
        canon_bits(lambda_eff.re),
        canon_bits(lambda_eff.im),
        obs as u64,
    ])
}

/// Resolves composed reparametrizations down to the base motion and the
/// effective parameter: scanning the reparametrized motion at lambda is
/// scanning the inner motion at b(lambda).
fn resolve_target<T: Real>(m: &MotionSpec<T>, lambda: Cplx<T>) -> Result<(MotionSpec<T>, Cplx<T>)> {
    match m {
        MotionSpec::BlaschkeReparam { inner, zeros } => {
            let mapped = blaschke_eval(zeros, lambda)?;
            resolve_target(inner, mapped)
        }
        other => Ok((other.clone(), lambda)),
    }
}

fn scan_row_value<T: Real>(
    base: &MotionSpec<T>,
    lambda_eff: Cplx<T>,
    s: &SetSpec<T>,
    obs: Observable,
    config: &ScanConfig,
) -> Result<(Option<T>, String, String)> {
    let zero = Cplx::new(T::zero(), T::zero());
    let n_points = 1usize << config.trace_depth;

    // Symbolic form of the moved set when one is known.
    let moved_spec: Option<SetSpec<T>> = if lambda_eff == zero {
        Some(s.clone())
    } else if matches!(base, MotionSpec::Boettcher) && s.is_unit_circle() {
        Some(SetSpec::julia(lambda_eff / T::of(4.0))?)
    } else {
        None
    };

    let sample_points = || -> Result<CurveSample<T>> {
        if lambda_eff == zero {
            let b = boundary_sample(s, n_points)?;
            let pts = b.all_points();
            let n = pts.len();
            let params: Vec<T> = (0..n).map(|k| T::of(k as f64 / n as f64)).collect();
            CurveSample::new(pts, params, b.components.len() == 1 && b.components[0].closed)
        } else if matches!(base, MotionSpec::Boettcher) && s.is_unit_circle() {
            let p = JuliaParams::new(lambda_eff / T::of(4.0));
            trace_julia(&p, n_points)
        } else {
            let b = boundary_sample(s, n_points)?;
            let pts = b.all_points();
            let n = pts.len();
            let params: Vec<T> = (0..n).map(|k| T::of(k as f64 / n as f64)).collect();
            let sample =
                CurveSample::new(pts, params, b.components.len() == 1 && b.components[0].closed)?;
            move_set(base, lambda_eff, &sample)
        }
    };

    match obs {
        Observable::GammaRules => match &moved_spec {
            Some(spec) => match closed_form_gamma(spec) {
                Some(e) => Ok((Some(e.value), e.kind.to_string(), e.method)),
                None => Ok((None, "none".into(), "no closed form".into())),
            },
            None => Ok((None, "none".into(), "moved set has no symbolic form".into())),
        },
        Observable::AlphaRules => match &moved_spec {
            Some(spec) => match alpha_evaluate(spec)? {
                AlphaResult::Estimate(e) => Ok((Some(e.value), e.kind.to_string(), e.method)),
                AlphaResult::Interval { note, .. } => Ok((None, "interval".into(), note)),
            },
            None => Ok((None, "none".into(), "moved set has no symbolic form".into())),
        },
        Observable::GammaLeja => {
            let sample = sample_points()?;
            let connected = moved_spec
                .as_ref()
                .map(|sp| sp.connected() || matches!(&sp.kind, crate::sets::SetKind::Julia { .. }))
                .unwrap_or(true);
            let est = leja_logcap(&sample.points, config.leja_budget, connected, true)?;
            Ok((
                Some(est.value),
                BoundKind::Comparable.to_string(),
                format!("{} (budget {})", est.method, config.leja_budget),
            ))
        }
        Observable::Length => {
            let sample = sample_points()?;
            Ok((
                Some(discrete_length(&sample)?),
                "sample".into(),
                format!("discrete length at 2^{} points", config.trace_depth),
            ))
        }
        Observable::BoxDim => {
            let sample = sample_points()?;
            let scales: Vec<T> = (3..=8).map(|k| T::of((0.5f64).powi(k))).collect();
            let est = box_dimension(&sample.points, &scales)?;
            Ok((
                Some(est.slope),
                "fit".into(),
                format!("box-count slope, R^2 = {}", est.r_squared.as_f64()),
            ))
        }
    }
}

/// Runs the observables over the parameter path. The path must contain
/// lambda = 0, the base row of every scan. Row failures are recorded in the
/// notes and the scan continues.
pub fn motion_scan<T: Real>(
    m: &MotionSpec<T>,
    s: &SetSpec<T>,
    lambdas: &[Cplx<T>],
    observables: &[Observable],
    config: &ScanConfig,
) -> Result<ScanResult<T>> {
    if observables.is_empty() {
        return Err(Error::InvalidArgument("no observables requested".into()));
    }
    let zero = Cplx::new(T::zero(), T::zero());
    if !lambdas.contains(&zero) {
        return Err(Error::InvalidArgument("the scan path must contain lambda = 0".into()));
    }
    let mut rows = Vec::with_capacity(lambdas.len() * observables.len());
    for &lambda in lambdas {
        check_lambda(lambda)?;
        for &obs in observables {
            match resolve_target(m, lambda) {
                Ok((base, lambda_eff)) => {
                    let seed = row_seed(config, lambda_eff, obs);
                    match scan_row_value(&base, lambda_eff, s, obs, config) {
                        Ok((value, kind, notes)) => rows.push(ScanRow {
                            lambda,
                            observable: obs,
                            value,
                            kind,
                            notes: format!("{notes}; row_seed={seed}"),
                        }),
                        Err(err) => rows.push(ScanRow {
                            lambda,
                            observable: obs,
                            value: None,
                            kind: "error".into(),
                            notes: err.to_string(),
                        }),
                    }
                }
                Err(err) => rows.push(ScanRow {
                    lambda,
                    observable: obs,
                    value: None,
                    kind: "error".into(),
                    notes: err.to_string(),
                }),
            }
        }
    }
    let mut provenance = BTreeMap::new();
    provenance.insert("seed".into(), config.seed.to_string());
    provenance.insert("trace_depth".into(), config.trace_depth.to_string());
    provenance.insert("leja_budget".into(), config.leja_budget.to_string());
    Ok(ScanResult { rows, provenance })
}
