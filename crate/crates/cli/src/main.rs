//! `magtool`: magnitude, diversity, ℓ1 pixel geometry and closed-form oracles
//! from the command line. Every run prints one JSON report (or a CSV table).

mod input;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magnitude::diversity::{
    dimension_estimate, max_diversity_exact, max_diversity_with, DimensionMethod, DimensionOptions,
    DiversityError, DiversityOptions,
};
use magnitude::ell1::{
    check_l1_convex, convex_body_pixel_bounds, format_rational, magnitude_via_intrinsic_exact, parse_pixel_set,
    parse_rational, probe_grid, verify_weight_measure, weight_measure, weight_measure_ie, ConvexBodySpec,
    Ell1Error, PixelSet, Rational,
};
use magnitude::engine::{
    approximate_compact_magnitude, definiteness_report, magnitude_function, solve_weighting_with, t_grid, Backend,
    EngineError, SimilarityMatrix, SolverOptions, SpaceFamily, WeightingStatus,
};
use magnitude::euclid::{
    asymptotic_prediction, ball_magnitude, ball_magnitude_exact, conjecture_compare, conjectured_ball_value_exact,
    sphere_magnitude_even, OracleError,
};
use magnitude::line::{
    cantor_magnitude, compact_r_magnitude, interval_magnitude, interval_weight_masses, line_magnitude,
    GapDecomposition, LineError,
};
use magnitude::metric::MetricError;
use serde_json::{json, Value};

use input::{parse_levels, parse_list, Inputs, SpaceArgs};
use report::{num, opt, Output, RunReport, Table};

const EXIT_INPUT: u8 = 2;
const EXIT_UNDEFINED: u8 = 3;
const EXIT_NONCONVERGENCE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "magtool", version, about = "Magnitude of metric spaces, maximum diversity and exact oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Solver tolerance (weighting residual, diversity KKT gap).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomly sampled spaces; overrides the seed in a spec.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Magnitude of a finite space at scale t (exit 3 when undefined).
    Mag {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        t: f64,
    },
    /// Magnitude function over a grid of scales; undefined samples are reported inline.
    Magfn {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Geometric instead of arithmetic spacing.
        #[arg(long)]
        log: bool,
    },
    /// Weighting vector at scale t.
    Weights {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        t: f64,
    },
    /// Positive definiteness at sampled scales and the negative-type test.
    Check {
        #[command(flatten)]
        space: SpaceArgs,
        /// Comma-separated scales.
        #[arg(long, default_value = "0.01,0.1,1,10,100")]
        ts: String,
    },
    /// Maximum diversity and a maximizing distribution at scale t.
    Diversity {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        t: f64,
        /// Enumerate supports instead (at most 15 points).
        #[arg(long)]
        exact: bool,
    },
    /// Dimension estimate from growth of diversity or covering numbers.
    Dim {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = DimMethod::Diversity)]
        method: DimMethod,
        /// Fit all samples, including the smallest and largest scale.
        #[arg(long)]
        keep_extremes: bool,
    },
    /// Exact geometry of pixelated sets in ℓ1ⁿ.
    Pixel(PixelArgs),
    /// Closed-form magnitudes.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
    /// Magnitudes of successive finite approximations of a compact space.
    Approx {
        /// Family as inline JSON or a file, e.g. {"family":"cantor_endpoints","length":1}.
        #[arg(long, value_name = "JSON|FILE")]
        family: String,
        /// Comma-separated refinement levels.
        #[arg(long)]
        levels: String,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DimMethod {
    Diversity,
    Covering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Dense,
    Line,
    Auto,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["weights", "intrinsic", "convexity", "bounds"])))]
struct PixelArgs {
    /// Pixel art (`#` filled, `.` empty, rows separated by newlines or a literal `\n`).
    #[arg(long, conflicts_with = "file")]
    ascii: Option<String>,
    /// Pixel set file: pixel art or `dim n scale p/q` followed by one cell per line.
    #[arg(long)]
    file: Option<String>,
    /// Weight measure on open faces.
    #[arg(long)]
    weights: bool,
    /// Cube-Steiner coefficients and the magnitude at --t.
    #[arg(long)]
    intrinsic: bool,
    /// ℓ1-convexity verdict with a witness pair.
    #[arg(long)]
    convexity: bool,
    /// Bracket for a convex body from its outer pixelation (needs --body, --lambda).
    #[arg(long)]
    bounds: bool,
    /// With --weights: use inclusion–exclusion over cells (at most 20 cells).
    #[arg(long)]
    ie: bool,
    /// With --weights: check the potential equals 1 on a probe grid.
    #[arg(long)]
    verify: bool,
    /// Scale; rational for --intrinsic, real for --bounds.
    #[arg(long, default_value = "1")]
    t: String,
    /// Convex body as inline JSON or a file.
    #[arg(long, value_name = "JSON|FILE")]
    body: Option<String>,
    /// Grid spacing for --bounds, e.g. 1/8.
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Oracle {
    /// Finite subset of ℝ.
    Line {
        #[arg(long, allow_hyphen_values = true)]
        points_1d: String,
        #[arg(long)]
        t: f64,
    },
    /// Interval [a, b] with its weight measure.
    Interval {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        t: f64,
    },
    /// Middle-thirds Cantor set of the given length.
    Cantor {
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long)]
        t: f64,
        /// Truncation depth; chosen automatically when absent.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Compact subset of ℝ given by hull and gaps, e.g. {"hull":[0,1],"gaps":[[0.2,0.3]]}.
    Gaps {
        #[arg(long, value_name = "JSON|FILE")]
        gaps: String,
        #[arg(long)]
        t: f64,
    },
    /// Euclidean ball of radius r in dimension 3 or 5.
    Ball {
        #[arg(long)]
        n: usize,
        /// Radius; a rational p/q also yields the exact value.
        #[arg(long)]
        r: String,
    },
    /// Round sphere of radius r in even dimension.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
    },
    /// Leading coefficient of magnitude growth for a convex body of given volume.
    Asymptotic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        volume: f64,
    },
    /// Ball magnitude against the intrinsic-volume expression.
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: String,
    },
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::input(e.to_string())
            }
        }
    )*};
}

input_errors!(MetricError, Ell1Error, LineError, OracleError, serde_json::Error);

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::MonotonicityViolation { .. } => EXIT_NONCONVERGENCE,
            EngineError::Undefined { .. } => EXIT_UNDEFINED,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<DiversityError> for Failure {
    fn from(e: DiversityError) -> Self {
        let code = match e {
            DiversityError::NonConvergence { .. } => EXIT_NONCONVERGENCE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn rational(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::input(format!("bad rational {s:?}")))
}

fn solver_options(tol: Option<f64>) -> SolverOptions {
    let mut o = SolverOptions::default();
    if let Some(tol) = tol {
        o.residual_tol = tol;
    }
    o
}

fn status_name(s: WeightingStatus) -> &'static str {
    match s {
        WeightingStatus::UniquePD => "UniquePD",
        WeightingStatus::UniqueInvertible => "UniqueInvertible",
        WeightingStatus::Undefined => "Undefined",
    }
}

/// Runs a command; an `Err` aborts with its code, an `Ok` with a nonzero
/// code still prints the report.
fn run(cli: &Cli, inputs: &mut Inputs) -> Result<(Output, u8), Failure> {
    match &cli.command {
        Command::Mag { space, t } => {
            let space = inputs.space(space)?;
            check_scale(*t)?;
            let res = solve_weighting_with(&SimilarityMatrix::new(&space, *t), &solver_options(cli.tol));
            let mut out = Output::new(json!({
                "t": t,
                "n_points": space.len(),
                "magnitude": res.magnitude,
                "status": res.status,
                "positive_definite": res.status == WeightingStatus::UniquePD,
                "condition_estimate": res.condition_estimate,
                "residual": res.residual,
                "failure": res.failure,
            }));
            let mut table = Table::new(vec!["t", "magnitude", "status", "positive_definite", "condition_estimate", "residual"]);
            table.push(vec![
                num(*t),
                opt(res.magnitude),
                status_name(res.status).into(),
                (res.status == WeightingStatus::UniquePD).to_string(),
                num(res.condition_estimate),
                num(res.residual),
            ]);
            out = out.with_table(table);
            match res.status {
                WeightingStatus::Undefined => {
                    out.warn(format!("magnitude undefined at t = {t}"));
                    Ok((out, EXIT_UNDEFINED))
                }
                WeightingStatus::UniqueInvertible => {
                    out.warn(format!(
                        "similarity matrix is not positive definite at t = {t}; the value is the weighting sum and need not be monotone in t"
                    ));
                    Ok((out, 0))
                }
                WeightingStatus::UniquePD => Ok((out, 0)),
            }
        }
        Command::Magfn { space, tmin, tmax, steps, log } => {
            let space = inputs.space(space)?;
            if *steps == 0 || !(tmin <= tmax) || *log && *tmin <= 0.0 {
                return Err(Failure::input("need steps ≥ 1 and 0 < tmin ≤ tmax"));
            }
            let f = magnitude_function(&space, &t_grid(*tmin, *tmax, *steps, *log))?;
            let mut table = Table::new(vec!["t", "magnitude", "status", "positive_definite", "residual"]);
            for s in &f.samples {
                table.push(vec![
                    num(s.t),
                    opt(s.magnitude),
                    status_name(s.status).into(),
                    s.positive_definite.to_string(),
                    num(s.residual),
                ]);
            }
            let mut out = Output::new(serde_json::to_value(&f)?).with_table(table);
            let undefined = f.samples.iter().filter(|s| s.magnitude.is_none()).count();
            if undefined > 0 {
                out.warn(format!("{undefined} samples undefined"));
            }
            Ok((out, 0))
        }
        Command::Weights { space, t } => {
            let space = inputs.space(space)?;
            check_scale(*t)?;
            let res = solve_weighting_with(&SimilarityMatrix::new(&space, *t), &solver_options(cli.tol));
            let mut table = Table::new(vec!["index", "weight"]);
            if res.is_defined() {
                for (i, w) in res.weighting.iter().enumerate() {
                    table.push(vec![i.to_string(), num(*w)]);
                }
            }
            let mut out = Output::new(json!({
                "t": t,
                "weighting": if res.is_defined() { json!(res.weighting) } else { Value::Null },
                "magnitude": res.magnitude,
                "status": res.status,
                "residual": res.residual,
                "failure": res.failure,
            }))
            .with_table(table);
            if !res.is_defined() {
                out.warn(format!("no weighting at t = {t}"));
            }
            Ok((out, 0))
        }
        Command::Check { space, ts } => {
            let space = inputs.space(space)?;
            let ts = parse_list(ts)?;
            for &t in &ts {
                check_scale(t)?;
            }
            let r = definiteness_report(&space, &ts);
            let mut table = Table::new(vec!["t", "positive_definite"]);
            for (t, pd) in &r.positive_definite_at {
                table.push(vec![num(*t), pd.to_string()]);
            }
            Ok((Output::new(serde_json::to_value(&r)?).with_table(table), 0))
        }
        Command::Diversity { space, t, exact } => {
            let space = inputs.space(space)?;
            let mut opts = DiversityOptions::default();
            if let Some(tol) = cli.tol {
                opts.tol = tol;
            }
            let r = if *exact { max_diversity_exact(&space, *t)? } else { max_diversity_with(&space, *t, &opts)? };
            let mut table = Table::new(vec!["index", "mu"]);
            for (i, m) in r.optimizer.weights.iter().enumerate() {
                table.push(vec![i.to_string(), num(*m)]);
            }
            let mut out = Output::new(serde_json::to_value(&r)?).with_table(table);
            if r.non_convex {
                out.warn("similarity matrix is indefinite; the maximizer is the best of several local searches");
            }
            Ok((out, 0))
        }
        Command::Dim { space, tmin, tmax, samples, method, keep_extremes } => {
            let space = inputs.space(space)?;
            let mut opts = DimensionOptions { samples: *samples, drop_extremes: !keep_extremes, ..Default::default() };
            if let Some(tol) = cli.tol {
                opts.diversity.tol = tol;
            }
            let method = match method {
                DimMethod::Diversity => DimensionMethod::DiversityGrowth,
                DimMethod::Covering => DimensionMethod::CoveringGrowth,
            };
            let est = dimension_estimate(&space, (*tmin, *tmax), method, &opts)?;
            let mut table = Table::new(vec!["t", "quantity"]);
            for (t, q) in &est.samples {
                table.push(vec![num(*t), num(*q)]);
            }
            let mut out = Output::new(serde_json::to_value(&est)?).with_table(table);
            if !est.within_resolution {
                out.warn("t_max times the smallest distance exceeds 1; the finite sample no longer resolves the set");
            }
            Ok((out, 0))
        }
        Command::Pixel(args) => pixel(args, inputs),
        Command::Oracle { which } => Ok((oracle(which, inputs)?, 0)),
        Command::Approx { family, levels, t, backend } => {
            let family: SpaceFamily = serde_json::from_str(&inputs.json_text(family)?)?;
            let levels = parse_levels(levels)?;
            let backend = match backend {
                BackendArg::Dense => Backend::Dense,
                BackendArg::Line => Backend::Line,
                BackendArg::Auto => Backend::Auto,
            };
            let steps = approximate_compact_magnitude(&family, &levels, *t, backend)?;
            let mut table = Table::new(vec!["level", "n_points", "magnitude", "increment"]);
            for s in &steps {
                table.push(vec![s.level.to_string(), s.n_points.to_string(), opt(s.magnitude), opt(s.increment)]);
            }
            let mut out = Output::new(json!({ "t": t, "steps": steps })).with_table(table);
            if steps.iter().any(|s| s.magnitude.is_none()) {
                out.warn("some levels have no weighting");
            }
            Ok((out, 0))
        }
    }
}

fn check_scale(t: f64) -> Result<(), Failure> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Failure::input(format!("scale must be positive and finite, got {t}")))
    }
}

fn pixel_set(args: &PixelArgs, inputs: &mut Inputs) -> Result<PixelSet, Failure> {
    let text = match (&args.ascii, &args.file) {
        (Some(a), _) => a.replace("\\n", "\n"),
        (None, Some(path)) => {
            String::from_utf8(inputs.read_file(path)?).map_err(|_| Failure::input(format!("{path}: not utf-8")))?
        }
        (None, None) => return Err(Failure::input("give --ascii or --file")),
    };
    Ok(parse_pixel_set(&text)?)
}

fn pixel(args: &PixelArgs, inputs: &mut Inputs) -> Result<(Output, u8), Failure> {
    if args.bounds {
        let body = args.body.as_ref().ok_or_else(|| Failure::input("--bounds needs --body"))?;
        let lam = rational(args.lambda.as_deref().ok_or_else(|| Failure::input("--bounds needs --lambda"))?)?;
        let t: f64 = args.t.parse().map_err(|_| Failure::input(format!("bad scale {:?}", args.t)))?;
        check_scale(t)?;
        let spec = ConvexBodySpec::from_json(&inputs.json_text(body)?)?;
        let b = convex_body_pixel_bounds(&spec, &lam, t)?;
        return Ok((Output::new(serde_json::to_value(&b)?), 0));
    }
    let p = pixel_set(args, inputs)?;
    if args.convexity {
        let v = check_l1_convex(&p);
        return Ok((Output::new(serde_json::to_value(&v)?), 0));
    }
    if args.intrinsic {
        let m = magnitude_via_intrinsic_exact(&p, &rational(&args.t)?)?;
        let mut table = Table::new(vec!["i", "V"]);
        for (i, v) in m.intrinsic_volumes.iter().enumerate() {
            table.push(vec![i.to_string(), v.clone()]);
        }
        let mut out = Output::new(serde_json::to_value(&m)?).with_table(table);
        if m.upper_bound_candidate {
            out.warn("set is not ℓ1-convex; the value is only a candidate upper bound");
        }
        return Ok((out, 0));
    }
    let mu = if args.ie { weight_measure_ie(&p)? } else { weight_measure(&p) }.pruned();
    let mut table = Table::new(vec!["anchor", "open_axes", "dim", "coefficient"]);
    let faces: Vec<Value> = mu
        .faces
        .iter()
        .map(|(f, c)| {
            let anchor = f.anchor.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            table.push(vec![anchor, f.open_axes.to_string(), f.dim().to_string(), format_rational(c)]);
            json!({ "anchor": f.anchor, "open_axes": f.open_axes, "dim": f.dim(), "coefficient": format_rational(c) })
        })
        .collect();
    let deviation = if args.verify { Some(verify_weight_measure(&p, &mu, &probe_grid(&p))?) } else { None };
    let out = Output::new(json!({
        "dim": mu.dim,
        "scale": format_rational(&mu.scale),
        "total_mass": format_rational(&mu.total_mass()),
        "faces": faces,
        "potential_deviation": deviation,
    }))
    .with_table(table);
    Ok((out, 0))
}

fn oracle(which: &Oracle, inputs: &mut Inputs) -> Result<Output, Failure> {
    let out = match which {
        Oracle::Line { points_1d, t } => {
            let mut x = parse_list(points_1d)?;
            x.sort_by(f64::total_cmp);
            let (m, w) = line_magnitude(&x, *t)?;
            let mut table = Table::new(vec!["x", "weight"]);
            for (a, b) in x.iter().zip(&w) {
                table.push(vec![num(*a), num(*b)]);
            }
            Output::new(json!({ "magnitude": m, "points": x, "weighting": w })).with_table(table)
        }
        Oracle::Interval { a, b, t } => Output::new(json!({
            "magnitude": interval_magnitude(*a, *b, *t)?,
            "weight_measure": interval_weight_masses(*a, *b, *t)?,
        })),
        Oracle::Cantor { length, t, depth } => {
            check_scale(*t)?;
            if !(*length > 0.0 && length.is_finite()) {
                return Err(Failure::input("length must be positive"));
            }
            let v = cantor_magnitude(*length, *t, *depth);
            Output::new(json!({ "magnitude": v.value, "tail_bound": v.tail_bound, "depth": v.depth }))
        }
        Oracle::Gaps { gaps, t } => {
            let g = GapDecomposition::from_json(&inputs.json_text(gaps)?).map_err(Failure::input)?;
            Output::new(json!({ "magnitude": compact_r_magnitude(&g, *t)?, "measure": g.measure() }))
        }
        Oracle::Ball { n, r } => {
            let exact = parse_rational(r);
            let rf: f64 = match &exact {
                Some(q) => num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN),
                None => r.parse().map_err(|_| Failure::input(format!("bad radius {r:?}")))?,
            };
            let exact = exact.map(|q| ball_magnitude_exact(*n, &q)).transpose()?;
            Output::new(json!({
                "n": n,
                "r": rf,
                "magnitude": ball_magnitude(*n, rf)?,
                "exact": exact.as_ref().map(format_rational),
            }))
        }
        Oracle::Sphere { n, r } => Output::new(json!({ "n": n, "r": r, "magnitude": sphere_magnitude_even(*n, *r)? })),
        Oracle::Asymptotic { n, p, volume } => Output::new(serde_json::to_value(asymptotic_prediction(*n, *p, *volume)?)?),
        Oracle::Conjecture { n, r } => {
            let q = parse_rational(r);
            let rf: f64 = match &q {
                Some(q) => num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN),
                None => r.parse().map_err(|_| Failure::input(format!("bad radius {r:?}")))?,
            };
            let c = conjecture_compare(*n, rf)?;
            let exact = match &q {
                Some(q) if n % 2 == 1 => {
                    let m = ball_magnitude_exact(*n, q)?;
                    let conj = conjectured_ball_value_exact(*n, q)?;
                    Some(json!({
                        "exact": format_rational(&m),
                        "conjectured": format_rational(&conj),
                        "difference": format_rational(&(m - conj)),
                    }))
                }
                _ => None,
            };
            Output::new(json!({
                "n": n,
                "r": rf,
                "exact": c.exact,
                "conjectured": c.conjectured,
                "difference": c.difference,
                "rational": exact,
            }))
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let args = argv[1..].to_vec();
    let mut inputs = Inputs::new(&args, cli.seed);
    let start = Instant::now();
    let outcome = run(&cli, &mut inputs);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Ok((out, code)) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let text = match cli.format {
                Format::Json => {
                    let report = RunReport {
                        command: args,
                        version: env!("CARGO_PKG_VERSION"),
                        inputs_digest: inputs.digest(),
                        result: out.result,
                        warnings: out.warnings,
                        timing_ms: elapsed,
                    };
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
                Format::Csv => match out.csv_table().to_csv() {
                    Ok(s) => s,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_INPUT);
                    }
                },
            };
            print!("{text}");
            ExitCode::from(code)
        }
    }
}
