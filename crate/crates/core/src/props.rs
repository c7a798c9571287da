//! User-facing property suites: the module invariants packaged as named
//! checks with machine-readable outcomes, runnable from the CLI.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::capacity::{
    alpha_evaluate, closed_form_gamma, implication_consistent, leja_logcap,
    classify_jordan_curve, AlphaResult,
};
use crate::error::Error;
use crate::julia::{
    boettcher_map, boettcher_residual, escape_time, in_main_cardioid, trace_julia, EscapeResult,
    JuliaParams,
};
use crate::measures::{ball_mass, maximal_function, pushforward, total_mass, DiscreteMeasure};
use crate::menger::{menger_curvature, total_curvature};
use crate::motion::{blaschke_eval, motion_eval, MotionSpec};
use crate::real::{cplx, Cplx};
use crate::sample::boundary_sample;
use crate::sets::{diameter, discrete_length, hausdorff_premeasure, CurveSample, SetSpec};
use crate::Result;

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of a suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

fn random_rule_sets(seed: u64) -> Vec<(SetSpec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::new();
    for _ in 0..10 {
        let r = 0.5 + rng.gen::<f64>() * 3.0;
        let center = cplx(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
        sets.push((SetSpec::disk(center, r).unwrap(), r));
    }
    for _ in 0..10 {
        let a: Cplx<f64> = cplx(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
        let b: Cplx<f64> = cplx(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
        if a == b {
            continue;
        }
        let gamma = (b - a).norm() / 4.0;
        sets.push((SetSpec::segment(a, b).unwrap(), gamma));
    }
    sets
}

fn covariance_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // P2 on rule engines: gamma(cE + d) = |c| gamma(E) for 20 random sets.
    let mut worst: f64 = 0.0;
    for (s, gamma) in random_rule_sets(seed) {
        let scale = 0.5 + rng.gen::<f64>() * 2.0;
        let rot = rng.gen::<f64>() * std::f64::consts::TAU;
        let c = Cplx::from_polar(scale, rot);
        let d = cplx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        let moved = match &s.kind {
            crate::sets::SetKind::Disk { center, radius } => {
                SetSpec::disk(center * c + d, radius * scale).unwrap()
            }
            crate::sets::SetKind::Segment { a, b } => {
                SetSpec::segment(a * c + d, b * c + d).unwrap()
            }
            _ => continue,
        };
        let base = closed_form_gamma(&s).unwrap().value;
        let transformed = closed_form_gamma(&moved).unwrap().value;
        worst = worst.max((transformed - scale * base).abs() / transformed.max(1e-12));
        let _ = gamma;
    }
    checks.push(check(
        "P2 rules covariance",
        worst <= 1e-6,
        format!("worst relative deviation {worst:.3e} (tolerance 1e-6)"),
    ));

    // P2 for the Leja engine on circle samples.
    let base_pts = boundary_sample(&SetSpec::<f64>::unit_circle(), 512)
        .unwrap()
        .all_points();
    let c = cplx(1.3, 0.7);
    let d = cplx(-0.4, 2.0);
    let moved: Vec<Cplx<f64>> = base_pts.iter().map(|p| p * c + d).collect();
    let v1 = leja_logcap(&base_pts, 128, true, false).unwrap().value;
    let v2 = leja_logcap(&moved, 128, true, false).unwrap().value;
    let dev = (v2 - c.norm() * v1).abs() / v2.max(1e-12);
    checks.push(check(
        "P2 leja covariance",
        dev <= 1e-6,
        format!("relative deviation {dev:.3e}"),
    ));

    // Maximal-function dilation covariance (exact).
    let atoms: Vec<Cplx<f64>> = (0..40).map(|_| cplx(rng.gen(), rng.gen())).collect();
    let weights: Vec<f64> = (0..40).map(|_| rng.gen::<f64>() + 0.01).collect();
    let m = DiscreteMeasure::new(atoms.clone(), weights.clone()).unwrap();
    let t = 2.75;
    let md = DiscreteMeasure::new(atoms.iter().map(|a| a * t).collect(), weights).unwrap();
    let x = cplx(-0.3, 0.9);
    let v = maximal_function(&m, x).finite().unwrap();
    let vd = maximal_function(&md, x * t).finite().unwrap();
    let dev = (vd - v / t).abs() / v.max(1e-12);
    checks.push(check(
        "maximal function dilation covariance",
        dev <= 1e-12,
        format!("relative deviation {dev:.3e}"),
    ));

    // Menger curvature dilation covariance (exact).
    let x = cplx(0.1, 0.2);
    let y = cplx(1.0, -0.4);
    let z = cplx(-0.7, 0.9);
    let base = menger_curvature(x, y, z);
    let scaled = menger_curvature(x * t, y * t, z * t);
    let dev = (scaled - base / t).abs() / base.max(1e-12);
    checks.push(check(
        "menger curvature dilation covariance",
        dev <= 1e-12,
        format!("relative deviation {dev:.3e}"),
    ));

    // Geometry covariance: diameter and premeasure under scaling.
    let pts: Vec<Cplx<f64>> = (0..60).map(|_| cplx(rng.gen(), rng.gen())).collect();
    let scaled: Vec<Cplx<f64>> = pts.iter().map(|p| p * 2.0).collect();
    let d0 = diameter(&pts).unwrap();
    let d1 = diameter(&scaled).unwrap();
    let h0 = hausdorff_premeasure(&pts, 1.0, 0.25).unwrap();
    let h1 = hausdorff_premeasure(&scaled, 1.0, 0.5).unwrap();
    checks.push(check(
        "diameter and premeasure scale covariance",
        (d1 - 2.0 * d0).abs() < 1e-12 && (h1 - 2.0 * h0).abs() < 1e-12,
        format!("diameter {d0} -> {d1}, premeasure {h0} -> {h1}"),
    ));
    checks
}

fn monotonicity_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // P3 on nested closed forms.
    let mut ok = true;
    for _ in 0..10 {
        let r1 = 0.5 + rng.gen::<f64>();
        let r2 = r1 + rng.gen::<f64>() * 2.0;
        let center = cplx(rng.gen::<f64>(), rng.gen::<f64>());
        let g1 = closed_form_gamma(&SetSpec::disk(center, r1).unwrap()).unwrap().value;
        let g2 = closed_form_gamma(&SetSpec::disk(center, r2).unwrap()).unwrap().value;
        ok &= g1 <= g2;
        let a: Cplx<f64> = cplx(rng.gen::<f64>(), rng.gen::<f64>());
        let dir = Cplx::from_polar(1.0, rng.gen::<f64>() * 6.28);
        let l1 = rng.gen::<f64>() + 0.5;
        let l2 = l1 + rng.gen::<f64>();
        let s1 = closed_form_gamma(&SetSpec::segment(a, a + dir * l1).unwrap()).unwrap().value;
        let s2 = closed_form_gamma(&SetSpec::segment(a, a + dir * l2).unwrap()).unwrap().value;
        ok &= s1 <= s2;
    }
    checks.push(check("P3 monotone on nested rule sets", ok, "disks and segments".into()));

    // P10: connected estimates dominate diam/4.
    let mut ok = true;
    let mut detail = String::new();
    for (name, s) in [
        ("circle", SetSpec::<f64>::unit_circle()),
        ("segment", SetSpec::segment(cplx(-2.0, 0.0), cplx(2.0, 0.0)).unwrap()),
        ("julia(0.2)", SetSpec::julia(cplx(0.2, 0.0)).unwrap()),
    ] {
        let pts = boundary_sample(&s, 1024).unwrap().all_points();
        let v = leja_logcap(&pts, 192, true, false).unwrap().value;
        let lower = diameter(&pts).unwrap() / 4.0;
        let fine = v >= lower - 0.05 * lower;
        ok &= fine;
        detail.push_str(&format!("{name}: {v:.4} vs diam/4 = {lower:.4}; "));
    }
    checks.push(check("P10 gamma >= diam/4 on connected sets", ok, detail));

    // Ball mass nondecreasing in r.
    let atoms: Vec<Cplx<f64>> = (0..50).map(|_| cplx(rng.gen(), rng.gen())).collect();
    let m = DiscreteMeasure::new(atoms, vec![0.02; 50]).unwrap();
    let mut ok = true;
    let mut prev = 0.0;
    for k in 1..40 {
        let v = ball_mass(&m, cplx(0.5, 0.5), k as f64 * 0.05);
        ok &= v >= prev;
        prev = v;
    }
    checks.push(check("ball mass monotone in radius", ok, "50-atom random measure".into()));

    // Premeasure non-increasing in delta on clouds.
    let mut ok = true;
    for s in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ s);
        let pts: Vec<Cplx<f64>> = (0..300).map(|_| cplx(rng.gen(), rng.gen())).collect();
        let coarse = hausdorff_premeasure(&pts, 1.0, 0.5).unwrap();
        let fine = hausdorff_premeasure(&pts, 1.0, 0.25).unwrap();
        ok &= fine >= coarse - 1e-12;
    }
    checks.push(check("premeasure non-increasing in delta", ok, "5 random clouds".into()));
    checks
}

fn closed_forms_suite(_seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let disk = closed_form_gamma(&SetSpec::disk(cplx::<f64>(0.0, 0.0), 3.0).unwrap()).unwrap();
    checks.push(check("gamma(disk r=3) = 3", disk.value == 3.0, format!("{}", disk.value)));
    let seg =
        closed_form_gamma(&SetSpec::segment(cplx::<f64>(0.0, 0.0), cplx(0.0, 4.0)).unwrap())
            .unwrap();
    checks.push(check("gamma(segment |4i|) = 1", seg.value == 1.0, format!("{}", seg.value)));
    let real = closed_form_gamma(
        &SetSpec::union(vec![
            SetSpec::segment(cplx::<f64>(0.0, 0.0), cplx(1.0, 0.0)).unwrap(),
            SetSpec::segment(cplx::<f64>(2.0, 0.0), cplx(3.0, 0.0)).unwrap(),
        ])
        .unwrap(),
    )
    .unwrap();
    checks.push(check(
        "gamma(real set, length 2) = 0.5",
        real.value == 0.5,
        format!("{}", real.value),
    ));

    // P1: alpha <= gamma wherever both rules fire.
    let mut ok = true;
    let mut detail = String::new();
    for (name, s) in [
        ("disk", SetSpec::disk(cplx::<f64>(0.0, 0.0), 2.0).unwrap()),
        ("circle", SetSpec::<f64>::unit_circle()),
        ("julia(0.2)", SetSpec::julia(cplx(0.2, 0.0)).unwrap()),
        ("segment", SetSpec::segment(cplx(-2.0, 0.0), cplx(2.0, 0.0)).unwrap()),
    ] {
        let gamma = closed_form_gamma(&s).map(|e| e.value);
        let alpha = match alpha_evaluate(&s) {
            Ok(AlphaResult::Estimate(e)) => Some(e.value),
            _ => None,
        };
        if let (Some(a), Some(g)) = (alpha, gamma) {
            ok &= a <= g;
            detail.push_str(&format!("{name}: alpha {a} <= gamma {g}; "));
        }
    }
    checks.push(check("P1 alpha <= gamma", ok, detail));

    // P19: null parts are transparent for both capacities.
    let point = SetSpec::point_cloud(vec![cplx::<f64>(9.0, 9.0)]).unwrap();
    let disk = SetSpec::disk(cplx::<f64>(0.0, 0.0), 1.0).unwrap();
    let union = SetSpec::union(vec![point, disk]).unwrap();
    let g = closed_form_gamma(&union).unwrap();
    checks.push(check(
        "P19 gamma(point u disk) = gamma(disk)",
        g.value == 1.0,
        format!("{}", g.value),
    ));
    checks
}

fn curvature_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut ok = true;
    for _ in 0..100 {
        let p = [
            cplx::<f64>(rng.gen(), rng.gen()),
            cplx(rng.gen(), rng.gen()),
            cplx(rng.gen(), rng.gen()),
        ];
        let base = menger_curvature(p[0], p[1], p[2]);
        for perm in [[0, 2, 1], [1, 0, 2], [2, 1, 0], [1, 2, 0], [2, 0, 1]] {
            ok &= base == menger_curvature(p[perm[0]], p[perm[1]], p[perm[2]]);
        }
    }
    checks.push(check("curvature permutation symmetry", ok, "100 random triples".into()));

    checks.push(check(
        "collinear triples vanish",
        menger_curvature(cplx::<f64>(0.0, 0.0), cplx(1.0, 0.0), cplx(2.0, 0.0)) == 0.0,
        "exact zero".into(),
    ));

    let n = 200;
    let atoms: Vec<Cplx<f64>> = (0..n)
        .map(|k| Cplx::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let m = DiscreteMeasure::new(atoms, vec![1.0 / n as f64; n]).unwrap();
    let v = total_curvature(&m).unwrap();
    checks.push(check(
        "unit-circle total curvature near 1",
        (v - 1.0).abs() < 0.02,
        format!("{v}"),
    ));
    checks
}

fn julia_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Conjugacy residual grid.
    let mut worst: f64 = 0.0;
    for &c in &[cplx::<f64>(0.1, 0.0), cplx(0.2, 0.0), cplx(-0.6, 0.0), cplx(0.2, 0.1)] {
        let p = JuliaParams::new(c);
        for _ in 0..25 {
            let w = Cplx::from_polar(1.05 + rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 6.28);
            worst = worst.max(boettcher_residual(&p, w).unwrap());
        }
    }
    checks.push(check(
        "Boettcher conjugacy residual < 1e-8",
        worst < 1e-8,
        format!("worst residual {worst:.3e}"),
    ));

    // Identity at c = 0.
    let p0 = JuliaParams::new(cplx::<f64>(0.0, 0.0));
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let w = Cplx::from_polar(1.01 + rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 6.28);
        worst = worst.max((boettcher_map(&p0, w).unwrap() - w).norm());
    }
    checks.push(check("B_0 is the identity", worst < 1e-12, format!("worst {worst:.3e}")));

    // Escape rule for c = 0.
    let p = JuliaParams { max_iter: 2000, ..JuliaParams::new(cplx::<f64>(0.0, 0.0)) };
    let mut ok = true;
    for k in 0..100 {
        let r = 0.05 + k as f64 * 0.02;
        if (r - 1.0).abs() < 1e-3 {
            continue;
        }
        let bounded = escape_time(&p, Cplx::from_polar(r, k as f64)) == EscapeResult::Bounded;
        ok &= bounded == (r <= 1.0);
    }
    checks.push(check("escape rule |z| <= 1 at c = 0", ok, "radial sweep".into()));

    // Trace nesting.
    let p = JuliaParams::new(cplx::<f64>(0.2, 0.0));
    let coarse = trace_julia(&p, 64).unwrap();
    let fine = trace_julia(&p, 128).unwrap();
    let nested = coarse.points.iter().enumerate().all(|(k, pt)| *pt == fine.points[2 * k]);
    checks.push(check("trace refinement nests exactly", nested, "64 vs 128 angles".into()));

    checks.push(check(
        "main cardioid membership",
        in_main_cardioid(cplx::<f64>(0.2, 0.0)) && !in_main_cardioid(cplx::<f64>(1.0, 0.0)),
        "c = 0.2 in, c = 1 out".into(),
    ));
    checks
}

fn motion_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let motions: Vec<(&str, MotionSpec<f64>)> = vec![
        ("boettcher", MotionSpec::Boettcher),
        (
            "translate-union",
            MotionSpec::TranslateUnion {
                inner: Box::new(MotionSpec::Boettcher),
                offset: cplx(40.0, 0.0),
            },
        ),
        (
            "blaschke",
            MotionSpec::BlaschkeReparam {
                inner: Box::new(MotionSpec::Boettcher),
                zeros: vec![cplx(0.3, 0.0), cplx(0.0, 0.5)],
            },
        ),
    ];
    let mut ok = true;
    for (_, m) in &motions {
        for _ in 0..20 {
            let z = Cplx::from_polar(1.1 + rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 6.28);
            ok &= motion_eval(m, cplx(0.0, 0.0), z).unwrap() == z;
        }
    }
    checks.push(check("axiom (iii): identity at lambda = 0", ok, "all variants".into()));

    // Injectivity spot check on the base motion.
    let m = MotionSpec::<f64>::Boettcher;
    let lambda = cplx(0.5, 0.3);
    let mut ok = true;
    for _ in 0..1000 {
        let z1 = Cplx::from_polar(1.1 + rng.gen::<f64>(), rng.gen::<f64>() * 6.28);
        let z2 = Cplx::from_polar(1.1 + rng.gen::<f64>(), rng.gen::<f64>() * 6.28);
        if (z1 - z2).norm() < 1e-9 {
            continue;
        }
        let w1 = motion_eval(&m, lambda, z1).unwrap();
        let w2 = motion_eval(&m, lambda, z2).unwrap();
        ok &= (w1 - w2).norm() > 1e-12;
    }
    checks.push(check("axiom (ii) spot check: injectivity", ok, "1000 random pairs".into()));

    // Blaschke bound.
    let zeros = vec![cplx::<f64>(0.3, 0.0), cplx(0.0, 0.5), cplx(-0.7, 0.0)];
    let mut ok = true;
    for _ in 0..1000 {
        let z = Cplx::from_polar(rng.gen::<f64>() * 0.999, rng.gen::<f64>() * 6.28);
        ok &= blaschke_eval(&zeros, z).unwrap().norm() < 1.0;
    }
    checks.push(check("Blaschke modulus < 1", ok, "1000 random disk points".into()));

    // Circle length against the moved-curve length at a nonzero parameter.
    let offset = crate::motion::boettcher_domain_offset::<f64>();
    let n = 1024;
    let pts: Vec<Cplx<f64>> = (0..n)
        .map(|k| Cplx::from_polar(1.0 + offset, std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let params: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    let circle = CurveSample::new(pts, params, true).unwrap();
    let moved = crate::motion::move_set(&m, cplx(0.8, 0.0), &circle).unwrap();
    let l0 = discrete_length(&circle).unwrap();
    let l1 = discrete_length(&moved).unwrap();
    checks.push(check(
        "moved circle gains length",
        l1 > l0,
        format!("{l0} -> {l1} at lambda = 0.8"),
    ));
    checks
}

fn classification_consistency(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let specs = vec![
        SetSpec::<f64>::unit_circle(),
        SetSpec::julia(cplx(0.2, 0.0)).unwrap(),
        SetSpec::point_cloud(vec![cplx(0.0, 0.0), cplx(1.0, 0.0)]).unwrap(),
        SetSpec::segment(cplx(0.0, 0.0), cplx(1.0, 0.0)).unwrap(),
    ];
    let mut ok = true;
    for s in &specs {
        if let Ok(r) = classify_jordan_curve(s, None) {
            ok &= implication_consistent(&r);
        }
    }
    let _ = seed;
    checks.push(check("classification implication graph", ok, format!("{} specs", specs.len())));
    checks
}

/// Measure bookkeeping checks shared by several suites.
fn measure_suite(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms: Vec<Cplx<f64>> = (0..100).map(|_| cplx(rng.gen(), rng.gen())).collect();
    let weights: Vec<f64> = (0..100).map(|_| rng.gen::<f64>() + 0.01).collect();
    let m = DiscreteMeasure::new(atoms, weights).unwrap();
    let rot = Cplx::from_polar(1.0, 0.833);
    let img = pushforward(&m, |z| Some(z * rot)).unwrap();
    vec![check(
        "pushforward preserves mass exactly",
        total_mass(&img) == total_mass(&m),
        format!("{}", total_mass(&m)),
    )]
}

/// Runs a named suite.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let checks = match name {
        "covariance" => {
            let mut c = covariance_suite(seed);
            c.extend(measure_suite(seed));
            c
        }
        "monotonicity" => monotonicity_suite(seed),
        "closed_forms" => closed_forms_suite(seed),
        "curvature" => curvature_suite(seed),
        "julia" => julia_suite(seed),
        "motion" => {
            let mut c = motion_suite(seed);
            c.extend(classification_consistency(seed));
            c
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite '{other}'; available: covariance, monotonicity, closed_forms, curvature, julia, motion"
            )))
        }
    };
    Ok(SuiteReport { suite: name.to_string(), checks })
}

/// All suite names in run order.
pub const ALL_SUITES: [&str; 6] =
    ["closed_forms", "covariance", "monotonicity", "curvature", "julia", "motion"];
