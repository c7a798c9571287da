//! caplab: command-line driver for the capacity laboratory.
//!
//! Subcommands map onto the library modules: `capacity` runs the gamma/alpha
//! engines on a set description, `julia` traces and samples quadratic Julia
//! sets, `curvature` and `measures` operate on discrete measures, `motion`
//! scans observables along a holomorphic-motion path, `transforms` exercises
//! the grid operators, `classify` runs the Jordan-curve report and `props`
//! runs the invariant suites. Every file-producing run also writes a
//! manifest recording the command, parameters, seed and outputs.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage or parse error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use caplab_core::capacity::{
    self, alpha_evaluate, classify_jordan_curve, closed_form_gamma, default_potential_grid,
    gamelin_garnett_profile, leja_logcap, lp_lower_bound, tolsa_lower_bound, AlphaResult,
    LpParams, TolsaParams,
};
use caplab_core::json as wire;
use caplab_core::julia::{
    box_dimension, harmonic_samples, inverse_iteration_samples, length_growth, trace_julia,
    JuliaParams,
};
use caplab_core::measures::{
    ball_mass, linear_density, maximal_function, pushforward, total_mass,
};
use caplab_core::menger::{tolsa_potential_block, DEFAULT_ATOM_CAP, DEFAULT_BLOCK};
use caplab_core::motion::{blaschke_eval, motion_eval, motion_scan, MotionSpec, Observable, ScanConfig};
use caplab_core::props;
use caplab_core::sample::boundary_sample;
use caplab_core::transforms::{
    cauchy_transform_measure, dbar, partition_of_unity, vitushkin_pair, weak_pairing,
    GridFunction,
};
use caplab_core::{C64, DiscreteMeasure64, SetSpec64};

#[derive(Parser)]
#[command(name = "caplab", version, about = "Numerical laboratory for analytic capacity")]
struct Cli {
    /// Worker threads for the parallel kernels (default: logical cores;
    /// 1 forces single-threaded execution).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Root seed; falls back to the CAPLAB_SEED environment variable, then 1.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity engines on a set description.
    Capacity(CapacityArgs),
    /// Quadratic Julia set operations.
    Julia(JuliaArgs),
    /// Curvature report for a discrete measure.
    Curvature(CurvatureArgs),
    /// Measure functionals.
    Measures(MeasuresArgs),
    /// Holomorphic motion scans and evaluations.
    Motion(MotionArgs),
    /// Grid transforms: Cauchy convolution and Vitushkin localization.
    Transforms(TransformsArgs),
    /// Jordan-curve classification report.
    Classify(ClassifyArgs),
    /// Invariant property suites.
    Props(PropsArgs),
}

#[derive(Args)]
struct CapacityArgs {
    /// Set description: a JSON file, or a builtin name (circle, disk).
    #[arg(long)]
    set: String,
    /// Engine: rules, leja, lp, or tolsa.
    #[arg(long, default_value = "rules")]
    engine: String,
    /// Quantity: gamma or alpha (alpha uses the rule chain).
    #[arg(long, default_value = "gamma")]
    quantity: String,
    /// Boundary sample size for leja / lp.
    #[arg(long, default_value_t = 2048)]
    n: usize,
    /// Leja point budget.
    #[arg(long, default_value_t = 256)]
    budget: usize,
    /// Treat the set as connected even without a flag (leja).
    #[arg(long)]
    allow_disconnected: bool,
    /// Pole list for the lp engine: "re,im;re,im;...".
    #[arg(long)]
    poles: Option<String>,
    /// Highest pole order for the lp engine.
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// Measure file for the tolsa engine.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Also report the grid-limited density profile (tolsa alpha variant).
    #[arg(long)]
    alpha_variant: bool,
    /// Gamelin-Garnett profile point "re,im" (runs the profile instead).
    #[arg(long)]
    gag_at: Option<String>,
    /// Radii for the profile, comma separated.
    #[arg(long)]
    deltas: Option<String>,
    /// Output path, or - for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct JuliaArgs {
    /// Operation: trace, sample, invsample, length, or dim.
    op: String,
    /// Parameter c as "re,im" or "re".
    #[arg(long, default_value = "0.2,0")]
    c: String,
    /// Dyadic depth (trace: 2^depth angles; invsample: pull-back depth).
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Depth range for the length table, e.g. "6..13".
    #[arg(long, default_value = "6..13")]
    depths: String,
    /// Sample count.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Output path, or - for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct CurvatureArgs {
    /// Measure file (JSON array of {"z": [re, im], "w": weight}).
    #[arg(long)]
    measure: PathBuf,
    /// Query grid file; defaults to the midpoint grid convention.
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Atom cap for the O(n^3) triple sum.
    #[arg(long, default_value_t = DEFAULT_ATOM_CAP)]
    cap: usize,
    /// Kernel block size.
    #[arg(long, default_value_t = DEFAULT_BLOCK)]
    block: usize,
    /// Output format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct MeasuresArgs {
    /// Operation: mass, ball, maximal, density, or push.
    op: String,
    #[arg(long)]
    measure: PathBuf,
    /// Query point "re,im".
    #[arg(long, default_value = "0,0")]
    x: String,
    /// Ball radius.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Decreasing radius grid, comma separated.
    #[arg(long, default_value = "0.4,0.2,0.1,0.05")]
    grid: String,
    /// Pushforward translation "re,im".
    #[arg(long, default_value = "0,0")]
    translate: String,
    /// Pushforward scale factor.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct MotionArgs {
    /// Operation: scan, eval, or blaschke.
    op: String,
    /// Motion: boettcher, or blaschke (reparametrized Böttcher).
    #[arg(long, default_value = "boettcher")]
    motion: String,
    /// Set to move (builtin "circle" or a JSON file).
    #[arg(long, default_value = "circle")]
    set: String,
    /// Lambda path: comma list of values ("0", "0.5", "1/3") or the
    /// generator "1/(n+2):n=1..8" (0 is added automatically for scans).
    #[arg(long, default_value = "0,1/(n+2):n=1..8")]
    lambdas: String,
    /// Observables: comma list of gamma, gamma_rules, alpha, length, box_dim.
    #[arg(long, default_value = "gamma,alpha,length")]
    obs: String,
    /// Blaschke zeros "re,im;re,im;..." (or a JSON file of [re, im] pairs).
    #[arg(long)]
    zeros: Option<String>,
    /// Trace depth (2^depth points per moved sample).
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Leja budget for the gamma observable.
    #[arg(long, default_value_t = 256)]
    budget: usize,
    /// Evaluation parameter "re,im" for eval/blaschke.
    #[arg(long, default_value = "0,0")]
    lambda: String,
    /// Point to move or evaluate at, "re,im".
    #[arg(long, default_value = "1.5,0")]
    z: String,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct TransformsArgs {
    /// Operation: cauchy, dbar, pou, vitushkin, or pairing.
    op: String,
    /// Measure file for cauchy.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Query point "re,im".
    #[arg(long, default_value = "2,0")]
    z: String,
    /// Input grid (flat binary with JSON sidecar).
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Second grid (phi for vitushkin, b for pairing).
    #[arg(long)]
    grid2: Option<PathBuf>,
    /// Grid geometry for pou: "origin_re,origin_im,h,width,height".
    #[arg(long)]
    geometry: Option<String>,
    /// Partition cell side.
    #[arg(long, default_value_t = 0.5)]
    cell: f64,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    set: String,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct PropsArgs {
    /// Suite name, or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value = "-")]
    out: String,
}

/// Usage-class errors exit with 2, computation errors with 1.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<caplab_core::Error> for Failure {
    fn from(e: caplab_core::Error) -> Self {
        match e {
            caplab_core::Error::Json(err) => Failure::Usage(format!(
                "json parse error at line {}, column {}: {err}",
                err.line(),
                err.column()
            )),
            caplab_core::Error::InvalidArgument(m) => Failure::Usage(m),
            caplab_core::Error::InvalidSet(m) => Failure::Usage(format!("invalid set: {m}")),
            other => Failure::Compute(other.to_string()),
        }
    }
}

type CliResult<V> = Result<V, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_complex(text: &str) -> CliResult<C64> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(C64::new(
            re.trim().parse().map_err(|_| usage(format!("bad number '{re}'")))?,
            0.0,
        )),
        [re, im] => Ok(C64::new(
            re.trim().parse().map_err(|_| usage(format!("bad number '{re}'")))?,
            im.trim().parse().map_err(|_| usage(format!("bad number '{im}'")))?,
        )),
        _ => Err(usage(format!("expected 're,im', got '{text}'"))),
    }
}

fn parse_complex_list(text: &str) -> CliResult<Vec<C64>> {
    text.split(';').map(|p| parse_complex(p.trim())).collect()
}

/// Accepts "0.5", "1/3", and the generator "1/(n+2):n=1..8".
fn parse_lambdas(text: &str) -> CliResult<Vec<C64>> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some(rest) = tok.strip_prefix("1/(n+2):n=") {
            let (lo, hi) = rest
                .split_once("..")
                .ok_or_else(|| usage(format!("bad generator '{tok}'")))?;
            let lo: i64 = lo.parse().map_err(|_| usage(format!("bad range in '{tok}'")))?;
            let hi: i64 = hi.parse().map_err(|_| usage(format!("bad range in '{tok}'")))?;
            for n in lo..=hi {
                out.push(C64::new(1.0 / (n as f64 + 2.0), 0.0));
            }
            continue;
        }
        if let Some((num, den)) = tok.split_once('/') {
            let num: f64 = num.parse().map_err(|_| usage(format!("bad fraction '{tok}'")))?;
            let den: f64 = den.parse().map_err(|_| usage(format!("bad fraction '{tok}'")))?;
            if den == 0.0 {
                return Err(usage(format!("zero denominator in '{tok}'")));
            }
            out.push(C64::new(num / den, 0.0));
            continue;
        }
        out.push(parse_complex(tok)?);
    }
    Ok(out)
}

fn load_set(spec: &str) -> CliResult<SetSpec64> {
    match spec {
        "circle" | "unit-circle" => Ok(SetSpec64::unit_circle()),
        "disk" | "unit-disk" => Ok(SetSpec64::disk(C64::new(0.0, 0.0), 1.0)?),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read set file '{path}': {e}")))?;
            Ok(wire::set_from_json(&text)?)
        }
    }
}

fn load_measure(path: &Path) -> CliResult<DiscreteMeasure64> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read measure file '{}': {e}", path.display())))?;
    Ok(wire::measure_from_json(&text)?)
}

/// Writes content to the path or stdout, returning the written path if any.
fn emit(out: &str, content: &str) -> CliResult<Option<PathBuf>> {
    if out == "-" {
        let mut stdout = std::io::stdout();
        stdout
            .write_all(content.as_bytes())
            .and_then(|_| stdout.write_all(b"\n"))
            .map_err(|e| Failure::Compute(e.to_string()))?;
        Ok(None)
    } else {
        std::fs::write(out, content).map_err(|e| Failure::Compute(e.to_string()))?;
        Ok(Some(PathBuf::from(out)))
    }
}

/// Writes the run manifest next to the output file.
fn write_manifest(
    out_path: Option<&PathBuf>,
    command: &str,
    params: serde_json::Value,
    seed: u64,
    started: Instant,
    outputs: &[PathBuf],
) -> CliResult<()> {
    let Some(out) = out_path else { return Ok(()) };
    let manifest = json!({
        "tool": "caplab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
        "seed": seed,
        "wall_ms": started.elapsed().as_millis() as u64,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    let path = out.with_extension(format!(
        "{}manifest.json",
        out.extension().map(|e| format!("{}.", e.to_string_lossy())).unwrap_or_default()
    ));
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap())
        .map_err(|e| Failure::Compute(e.to_string()))?;
    Ok(())
}

fn float(v: f64) -> String {
    format!("{v}")
}

fn run_capacity(args: &CapacityArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let set = load_set(&args.set)?;

    if let Some(at) = &args.gag_at {
        let z = parse_complex(at)?;
        let deltas: Vec<f64> = args
            .deltas
            .as_deref()
            .unwrap_or("0.5,0.25,0.125,0.0625")
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| usage(format!("bad delta '{s}'"))))
            .collect::<CliResult<_>>()?;
        let rows = gamelin_garnett_profile(&set, z, &deltas)?;
        let mut csv = String::from("delta,ratio,rule,out_of_regime\n");
        for r in rows {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                float(r.delta),
                r.ratio.map(float).unwrap_or_default(),
                r.rule.replace(',', ";"),
                r.out_of_regime
            ));
        }
        let path = emit(&args.out, &csv)?;
        return write_manifest(
            path.as_ref(),
            "capacity",
            json!({"set": args.set, "gag_at": at, "deltas": args.deltas}),
            seed,
            started,
            path.as_slice(),
        );
    }

    let value = if args.quantity == "alpha" {
        match alpha_evaluate(&set)? {
            AlphaResult::Estimate(e) => wire::estimate_to_json(&e),
            AlphaResult::Interval { upper, note } => json!({
                "interval": [0.0, upper.as_ref().map(|e| e.value)],
                "upper": upper.map(|e| wire::estimate_to_json(&e)),
                "note": note,
            }),
        }
    } else {
        match args.engine.as_str() {
            "rules" => {
                let Some(e) = closed_form_gamma(&set) else {
                    let v = json!({"no_rule": true, "note": "no closed form matches this set"});
                    let path = emit(&args.out, &v.to_string())?;
                    return write_manifest(
                        path.as_ref(),
                        "capacity",
                        json!({"set": args.set, "engine": "rules"}),
                        seed,
                        started,
                        path.as_slice(),
                    );
                };
                wire::estimate_to_json(&e)
            }
            "leja" => {
                let pts = boundary_sample(&set, args.n)?.all_points();
                let e = leja_logcap(&pts, args.budget, set.connected(), args.allow_disconnected)?;
                wire::estimate_to_json(&e)
            }
            "lp" => {
                let poles = parse_complex_list(
                    args.poles.as_deref().ok_or_else(|| usage("lp engine needs --poles"))?,
                )?;
                let e = lp_lower_bound(&set, &poles, &LpParams::new(args.degree, args.n))?;
                wire::estimate_to_json(&e)
            }
            "tolsa" => {
                let m = load_measure(
                    args.measure.as_deref().ok_or_else(|| usage("tolsa engine needs --measure"))?,
                )?;
                let grid = default_potential_grid(&m);
                let params = TolsaParams { alpha_variant: args.alpha_variant, ..Default::default() };
                let e = tolsa_lower_bound(&set, &m, &grid, &params)?;
                wire::estimate_to_json(&e)
            }
            other => return Err(usage(format!("unknown engine '{other}'"))),
        }
    };
    let path = emit(&args.out, &value.to_string())?;
    write_manifest(
        path.as_ref(),
        "capacity",
        json!({
            "set": args.set, "engine": args.engine, "quantity": args.quantity,
            "n": args.n, "budget": args.budget, "degree": args.degree,
            "poles": args.poles,
        }),
        seed,
        started,
        path.as_slice(),
    )
}

fn parse_depth_range(text: &str) -> CliResult<Vec<usize>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.parse().map_err(|_| usage(format!("bad depth range '{text}'")))?;
        let hi: usize = hi.parse().map_err(|_| usage(format!("bad depth range '{text}'")))?;
        Ok((lo..=hi).collect())
    } else {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| usage(format!("bad depth '{s}'"))))
            .collect()
    }
}

fn run_julia(args: &JuliaArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let c = parse_complex(&args.c)?;
    let p = JuliaParams::new(c);
    let params = json!({
        "c": args.c, "depth": args.depth, "depths": args.depths, "n": args.n,
    });
    match args.op.as_str() {
        "trace" => {
            let trace = trace_julia(&p, 1usize << args.depth)?;
            let mut csv = String::from("param,re,im\n");
            for (t, z) in trace.params.iter().zip(&trace.points) {
                csv.push_str(&format!("{},{},{}\n", float(*t), float(z.re), float(z.im)));
            }
            let path = emit(&args.out, &csv)?;
            write_manifest(path.as_ref(), "julia trace", params, seed, started, path.as_slice())
        }
        "sample" | "invsample" => {
            let m = if args.op == "sample" {
                harmonic_samples(&p, args.n, seed)?
            } else {
                inverse_iteration_samples(&p, args.n, args.depth.max(1), seed)?
            };
            let path = emit(&args.out, &wire::measure_to_json(&m).to_string())?;
            write_manifest(path.as_ref(), "julia sample", params, seed, started, path.as_slice())
        }
        "length" => {
            let depths = parse_depth_range(&args.depths)?;
            let rows = length_growth(&p, &depths)?;
            let mut csv = String::from("depth,n_angles,length\n");
            for r in rows {
                csv.push_str(&format!("{},{},{}\n", r.depth, r.n_angles, float(r.length)));
            }
            let path = emit(&args.out, &csv)?;
            write_manifest(path.as_ref(), "julia length", params, seed, started, path.as_slice())
        }
        "dim" => {
            let trace = trace_julia(&p, 1usize << args.depth)?;
            let scales: Vec<f64> = (3..=8).map(|k| (0.5f64).powi(k)).collect();
            let est = box_dimension(&trace.points, &scales)?;
            let v = json!({
                "slope": est.slope,
                "r_squared": est.r_squared,
                "rows": est.rows.iter().map(|r| json!({
                    "scale": r.scale, "count": r.count, "resolved": r.resolved,
                })).collect::<Vec<_>>(),
            });
            let path = emit(&args.out, &v.to_string())?;
            write_manifest(path.as_ref(), "julia dim", params, seed, started, path.as_slice())
        }
        other => Err(usage(format!("unknown julia op '{other}'"))),
    }
}

fn run_curvature(args: &CurvatureArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let m = load_measure(&args.measure)?;
    let queries = match &args.queries {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read queries: {e}")))?;
            let pairs: Vec<[f64; 2]> = serde_json::from_str(&text).map_err(caplab_core::Error::from)?;
            pairs.into_iter().map(|p| C64::new(p[0], p[1])).collect()
        }
        None => default_potential_grid(&m),
    };
    let report = tolsa_potential_block(&m, &queries, args.cap, args.block)?;
    let content = if args.format == "csv" {
        let mut csv = String::from("atom_index,energy\n");
        for (i, e) in report.per_atom_energy.iter().enumerate() {
            csv.push_str(&format!("{i},{}\n", float(*e)));
        }
        csv
    } else {
        json!({
            "total_curvature": report.total,
            "per_atom_energy": report.per_atom_energy,
            "query_potentials": report.query_potentials.iter().map(|p| p.finite()).collect::<Vec<_>>(),
            "max_potential": report.max_potential.finite(),
            "max_potential_infinite": report.max_potential.is_infinite(),
        })
        .to_string()
    };
    let path = emit(&args.out, &content)?;
    write_manifest(
        path.as_ref(),
        "curvature",
        json!({"measure": args.measure.display().to_string(), "cap": args.cap, "block": args.block}),
        seed,
        started,
        path.as_slice(),
    )
}

fn run_measures(args: &MeasuresArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let m = load_measure(&args.measure)?;
    let x = parse_complex(&args.x)?;
    let params = json!({
        "measure": args.measure.display().to_string(), "op": args.op, "x": args.x, "r": args.r,
    });
    let (content, label) = match args.op.as_str() {
        "mass" => (json!({"total_mass": total_mass(&m)}).to_string(), "measures mass"),
        "ball" => (
            json!({"ball_mass": ball_mass(&m, x, args.r), "x": [x.re, x.im], "r": args.r})
                .to_string(),
            "measures ball",
        ),
        "maximal" => {
            let v = maximal_function(&m, x);
            (
                json!({"maximal": v.finite(), "infinite": v.is_infinite()}).to_string(),
                "measures maximal",
            )
        }
        "density" => {
            let grid: Vec<f64> = args
                .grid
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| usage(format!("bad radius '{s}'"))))
                .collect::<CliResult<_>>()?;
            let table = linear_density(&m, x, &grid)?;
            let mut csv = String::from("r,ratio\n");
            for row in &table.rows {
                csv.push_str(&format!("{},{}\n", float(row.r), float(row.ratio)));
            }
            csv.push_str(&format!(
                "# theta={} theta_star={} label={} diverges={}\n",
                float(table.theta),
                float(table.theta_star),
                table.label,
                table.diverges
            ));
            (csv, "measures density")
        }
        "push" => {
            let d = parse_complex(&args.translate)?;
            let s = args.scale;
            let img = pushforward(&m, |z| Some(z * s + d))?;
            (wire::measure_to_json(&img).to_string(), "measures push")
        }
        other => return Err(usage(format!("unknown measures op '{other}'"))),
    };
    let path = emit(&args.out, &content)?;
    write_manifest(path.as_ref(), label, params, seed, started, path.as_slice())
}

fn build_motion(args: &MotionArgs) -> CliResult<MotionSpec<f64>> {
    match args.motion.as_str() {
        "boettcher" => Ok(MotionSpec::Boettcher),
        "blaschke" => {
            let zeros = parse_complex_list(
                args.zeros.as_deref().ok_or_else(|| usage("blaschke motion needs --zeros"))?,
            )?;
            Ok(MotionSpec::BlaschkeReparam { inner: Box::new(MotionSpec::Boettcher), zeros })
        }
        other => Err(usage(format!("unknown motion '{other}'"))),
    }
}

fn run_motion(args: &MotionArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let params = json!({
        "op": args.op, "motion": args.motion, "set": args.set, "lambdas": args.lambdas,
        "obs": args.obs, "zeros": args.zeros, "depth": args.depth, "budget": args.budget,
    });
    match args.op.as_str() {
        "scan" => {
            let m = build_motion(args)?;
            let set = load_set(&args.set)?;
            let mut lambdas = parse_lambdas(&args.lambdas)?;
            if !lambdas.contains(&C64::new(0.0, 0.0)) {
                lambdas.insert(0, C64::new(0.0, 0.0));
            }
            let observables: Vec<Observable> = args
                .obs
                .split(',')
                .map(|s| s.trim().parse().map_err(Failure::from))
                .collect::<CliResult<_>>()?;
            let config = ScanConfig { trace_depth: args.depth, leja_budget: args.budget, seed };
            let result = motion_scan(&m, &set, &lambdas, &observables, &config)?;
            let mut csv = String::from("lambda_re,lambda_im,observable,value,kind,notes\n");
            for row in &result.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    float(row.lambda.re),
                    float(row.lambda.im),
                    row.observable.name(),
                    row.value.map(float).unwrap_or_default(),
                    row.kind.replace(',', ";"),
                    row.notes.replace(',', ";")
                ));
            }
            let path = emit(&args.out, &csv)?;
            write_manifest(path.as_ref(), "motion scan", params, seed, started, path.as_slice())
        }
        "eval" => {
            let m = build_motion(args)?;
            let lambda = parse_complex(&args.lambda)?;
            let z = parse_complex(&args.z)?;
            let w = motion_eval(&m, lambda, z)?;
            let path = emit(&args.out, &json!({"moved": [w.re, w.im]}).to_string())?;
            write_manifest(path.as_ref(), "motion eval", params, seed, started, path.as_slice())
        }
        "blaschke" => {
            let zeros = parse_complex_list(
                args.zeros.as_deref().ok_or_else(|| usage("blaschke needs --zeros"))?,
            )?;
            let z = parse_complex(&args.z)?;
            let v = blaschke_eval(&zeros, z)?;
            let path = emit(&args.out, &json!({"value": [v.re, v.im]}).to_string())?;
            write_manifest(path.as_ref(), "motion blaschke", params, seed, started, path.as_slice())
        }
        other => Err(usage(format!("unknown motion op '{other}'"))),
    }
}

fn load_grid(path: &Path) -> CliResult<GridFunction<f64>> {
    Ok(GridFunction::read_binary(path)?)
}

fn save_grid(g: &GridFunction<f64>, out: &str) -> CliResult<Option<PathBuf>> {
    if out == "-" {
        return Err(usage("grid outputs are binary; pass --out FILE"));
    }
    let path = PathBuf::from(out);
    g.write_binary(&path)?;
    // JSON sidecar with the geometry.
    let sidecar = path.with_extension(format!(
        "{}json",
        path.extension().map(|e| format!("{}.", e.to_string_lossy())).unwrap_or_default()
    ));
    std::fs::write(
        &sidecar,
        json!({
            "origin": [g.origin.re, g.origin.im],
            "h": g.h,
            "width": g.width,
            "height": g.height,
            "layout": "row-major re/im little-endian f64",
        })
        .to_string(),
    )
    .map_err(|e| Failure::Compute(e.to_string()))?;
    Ok(Some(path))
}

fn run_transforms(args: &TransformsArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let params = json!({"op": args.op, "cell": args.cell});
    match args.op.as_str() {
        "cauchy" => {
            let m = load_measure(
                args.measure.as_deref().ok_or_else(|| usage("cauchy needs --measure"))?,
            )?;
            let z = parse_complex(&args.z)?;
            let v = cauchy_transform_measure(&m, z)?;
            let path = emit(&args.out, &json!({"value": [v.re, v.im]}).to_string())?;
            write_manifest(path.as_ref(), "transforms cauchy", params, seed, started, path.as_slice())
        }
        "dbar" => {
            let g = load_grid(args.grid.as_deref().ok_or_else(|| usage("dbar needs --grid"))?)?;
            let d = dbar(&g);
            let path = save_grid(&d, &args.out)?;
            write_manifest(path.as_ref(), "transforms dbar", params, seed, started, path.as_slice())
        }
        "pou" => {
            let geom = args
                .geometry
                .as_deref()
                .ok_or_else(|| usage("pou needs --geometry 'ore,oim,h,width,height'"))?;
            let parts: Vec<&str> = geom.split(',').collect();
            if parts.len() != 5 {
                return Err(usage("geometry must be 'ore,oim,h,width,height'"));
            }
            let ore: f64 = parts[0].parse().map_err(|_| usage("bad origin"))?;
            let oim: f64 = parts[1].parse().map_err(|_| usage("bad origin"))?;
            let h: f64 = parts[2].parse().map_err(|_| usage("bad h"))?;
            let width: usize = parts[3].parse().map_err(|_| usage("bad width"))?;
            let height: usize = parts[4].parse().map_err(|_| usage("bad height"))?;
            let template = GridFunction::from_fn(C64::new(ore, oim), h, width, height, |_| {
                C64::new(0.0, 0.0)
            })?;
            let bumps = partition_of_unity(&template, args.cell)?;
            if args.out == "-" {
                return Err(usage("pou writes one grid per bump; pass --out PREFIX"));
            }
            let mut outputs = Vec::new();
            for (k, b) in bumps.iter().enumerate() {
                let path = PathBuf::from(format!("{}_{k:03}.grid", args.out));
                b.write_binary(&path)?;
                outputs.push(path);
            }
            println!("wrote {} bumps with prefix {}", bumps.len(), args.out);
            write_manifest(outputs.first(), "transforms pou", params, seed, started, &outputs)
        }
        "vitushkin" => {
            let f = load_grid(args.grid.as_deref().ok_or_else(|| usage("vitushkin needs --grid"))?)?;
            let phi =
                load_grid(args.grid2.as_deref().ok_or_else(|| usage("vitushkin needs --grid2"))?)?;
            let (primary, _alt, diff) = vitushkin_pair(&f, &phi)?;
            let path = save_grid(&primary, &args.out)?;
            println!("formula difference (max interior): {diff}");
            write_manifest(path.as_ref(), "transforms vitushkin", params, seed, started, path.as_slice())
        }
        "pairing" => {
            let a = load_grid(args.grid.as_deref().ok_or_else(|| usage("pairing needs --grid"))?)?;
            let b = load_grid(args.grid2.as_deref().ok_or_else(|| usage("pairing needs --grid2"))?)?;
            let v = weak_pairing(&a, &b)?;
            let path = emit(&args.out, &json!({"pairing": [v.re, v.im]}).to_string())?;
            write_manifest(path.as_ref(), "transforms pairing", params, seed, started, path.as_slice())
        }
        other => Err(usage(format!("unknown transforms op '{other}'"))),
    }
}

fn run_classify(args: &ClassifyArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let set = load_set(&args.set)?;
    let report = classify_jordan_curve(&set, None)?;
    let consistent = capacity::implication_consistent(&report);
    let mut v = wire::classification_to_json(&report);
    v["implication_consistent"] = json!(consistent);
    let path = emit(&args.out, &v.to_string())?;
    write_manifest(
        path.as_ref(),
        "classify",
        json!({"set": args.set}),
        seed,
        started,
        path.as_slice(),
    )
}

fn run_props(args: &PropsArgs, seed: u64) -> CliResult<()> {
    let started = Instant::now();
    let suites: Vec<&str> = if args.suite == "all" {
        props::ALL_SUITES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut all = Vec::new();
    let mut failed = false;
    for name in suites {
        let report = props::run_suite(name, seed)?;
        for c in &report.checks {
            println!(
                "[{}] {} {}: {}",
                report.suite,
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
            failed |= !c.passed;
        }
        all.push(json!({
            "suite": report.suite,
            "passed": report.passed(),
            "checks": report.checks.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "detail": c.detail,
            })).collect::<Vec<_>>(),
        }));
    }
    if args.out != "-" {
        let path = emit(&args.out, &json!(all).to_string())?;
        write_manifest(
            path.as_ref(),
            "props",
            json!({"suite": args.suite}),
            seed,
            started,
            path.as_slice(),
        )?;
    }
    if failed {
        return Err(Failure::Compute("one or more property checks failed".into()));
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    let seed = cli
        .seed
        .or_else(|| std::env::var("CAPLAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1);
    let result = match &cli.command {
        Command::Capacity(args) => run_capacity(args, seed),
        Command::Julia(args) => run_julia(args, seed),
        Command::Curvature(args) => run_curvature(args, seed),
        Command::Measures(args) => run_measures(args, seed),
        Command::Motion(args) => run_motion(args, seed),
        Command::Transforms(args) => run_transforms(args, seed),
        Command::Classify(args) => run_classify(args, seed),
        Command::Props(args) => run_props(args, seed),
    };
    match result {
        Ok(()) => {}
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}
