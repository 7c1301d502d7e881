use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use arlab::figures::{figure, trace_figure, FigureName};
use arlab::monodromy::{all_roots, trace_roots, EngineError, Polynomial};
use arlab::paths::{PathBundle, PathSpec};
use arlab::perm::Permutation;
use arlab::radical::ExprError;
use arlab::report::RunManifest;
use arlab::solvers::{max_residual, solve_cubic, solve_quadratic, solve_quartic};
use arlab::witness::{
    cubic_control, quadratic_control, Construction, ControlReport, FailureKind, WitnessConfig,
    WitnessReport,
};
use arlab::{Error, Tolerances, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VERDICT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "arlab",
    version,
    about = "Monodromy experiments on polynomial roots"
)]
struct Cli {
    /// Print machine-readable JSON on standard output instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roots of a monic polynomial from c_{n-1} down to c_0.
    Solve(SolveArgs),
    /// Follow roots along a coefficient loop.
    Trace(TraceArgs),
    /// Run a commutator-word witness or a positive control.
    Witness(WitnessArgs),
    /// Write one of the SVG figures.
    Figure(FigureArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Coefficients c_{n-1} … c_0, each real or complex like `1-2i`.
    #[arg(required = true, allow_negative_numbers = true)]
    coefficients: Vec<String>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    /// Start polynomial JSON: {"degree": n, "coefficients": [[re, im], …]}.
    #[arg(long)]
    poly: PathBuf,
    /// Coefficient loop JSON: one path per coefficient, c_0 first.
    #[arg(long)]
    path: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG of the loop and the root trajectories.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    tol_closure: Option<f64>,
    #[arg(long)]
    tol_collision: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Control {
    QuadraticFormula,
    CubicFormula,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, default_value_t = 5)]
    degree: usize,
    /// Commutator depth N.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Generated expressions per depth.
    #[arg(long, default_value_t = 20)]
    exprs: usize,
    /// Largest generated expression depth (defaults to N).
    #[arg(long)]
    max_expr_depth: Option<usize>,
    #[arg(long, env = "ARLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Target permutation in cycle notation, e.g. "(1 2 3)".
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    tol_closure: Option<f64>,
    #[arg(long)]
    tol_collision: Option<f64>,
    /// Use the commutator of commutators of transpositions (degree ≥ 4, N = 2).
    #[arg(long)]
    table2: bool,
    /// Run a positive control instead of a witness.
    #[arg(long, value_enum)]
    control: Option<Control>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1, fig2, fig4 or fig5.
    name: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Perm(_) | Error::Json(_) | Error::Io(_) => EXIT_INPUT,
            Error::Expr(ExprError::Parse { .. }) => EXIT_INPUT,
            Error::Engine(EngineError::InvalidArgument(_) | EngineError::WidthMismatch { .. }) => {
                EXIT_INPUT
            }
            Error::Witness(w) if w.kind == FailureKind::Input => EXIT_INPUT,
            _ => EXIT_NUMERICAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

macro_rules! from_via_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}

from_via_error!(
    arlab::witness::WitnessError,
    EngineError,
    arlab::paths::PathError,
    arlab::perm::PermError,
    serde_json::Error,
    std::io::Error
);

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a, cli.json),
        Command::Trace(a) => trace(a, cli.json),
        Command::Witness(a) => witness(a, cli.json),
        Command::Figure(a) => figure_cmd(a, cli.json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn tolerances(closure: Option<f64>, collision: Option<f64>) -> Result<Tolerances, Failure> {
    let mut t = Tolerances::default();
    for (v, slot) in [(closure, &mut t.closure), (collision, &mut t.collision)] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Failure::input(format!("tolerance {v} must be positive")));
            }
            *slot = v;
        }
    }
    Ok(t)
}

fn write_with_manifest(
    out: &Path,
    body: &str,
    subcommand: &str,
    config: serde_json::Value,
    seeds: Vec<u64>,
    extra_outputs: &[&Path],
) -> Result<(), Failure> {
    fs::write(out, body)?;
    let mut m = RunManifest::new(subcommand, config);
    m.seeds = seeds;
    m.record_output(out.display().to_string());
    for p in extra_outputs {
        m.record_output(p.display().to_string());
    }
    let mut manifest = out.as_os_str().to_owned();
    manifest.push(".manifest.json");
    fs::write(manifest, m.to_json()? + "\n")?;
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    schema: &'static str,
    degree: usize,
    /// c_0 first.
    coefficients: Vec<C64>,
    method: &'static str,
    roots: Vec<C64>,
    residuals: Vec<f64>,
    max_residual: f64,
    note: Option<String>,
}

fn solve(a: SolveArgs, json: bool) -> CmdResult {
    let mut coeffs = a
        .coefficients
        .iter()
        .map(|s| {
            s.parse::<C64>()
                .map_err(|_| Failure::input(format!("bad coefficient '{s}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    coeffs.reverse();
    let n = coeffs.len();
    if let Some(d) = a.degree {
        if d != n {
            return Err(Failure::input(format!("--degree {d} but {n} coefficients")));
        }
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Failure::input("coefficients must be finite"));
    }
    let (method, roots, note): (_, Vec<C64>, _) = match n {
        1 => ("linear", vec![-coeffs[0]], None),
        2 => (
            "quadratic formula",
            solve_quadratic(coeffs[1], coeffs[0]).to_vec(),
            None,
        ),
        3 => (
            "cubic formula",
            solve_cubic(coeffs[2], coeffs[1], coeffs[0]).to_vec(),
            None,
        ),
        4 => (
            "quartic via resolvent cubic",
            solve_quartic(coeffs[3], coeffs[2], coeffs[1], coeffs[0]).to_vec(),
            None,
        ),
        _ => {
            let poly = Polynomial::new(coeffs.clone())?;
            let roots = all_roots(&poly, Tolerances::default().root_residual)?;
            (
                "numeric (simultaneous iteration)",
                roots,
                Some(format!(
                    "no radical formula exists for the general equation of degree {n}; see `arlab witness --degree {n}`"
                )),
            )
        }
    };
    let poly = Polynomial::new(coeffs.clone())?;
    let residuals: Vec<f64> = roots.iter().map(|&z| poly.residual(z)).collect();
    let report = SolveReport {
        schema: "solve-v1",
        degree: n,
        max_residual: max_residual(&coeffs, &roots),
        coefficients: coeffs,
        method,
        roots,
        residuals,
        note,
    };
    let body = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(out) = &a.out {
        let config = serde_json::json!({ "coefficients": a.coefficients });
        write_with_manifest(out, &body, "solve", config, vec![], &[])?;
    }
    if json {
        print!("{body}");
    } else {
        println!("degree {n}, {}", report.method);
        for (z, r) in report.roots.iter().zip(&report.residuals) {
            println!("  {:>24}  residual {r:.2e}", format!("{:.12}", z));
        }
        if let Some(note) = &report.note {
            println!("{note}");
        }
    }
    Ok(0)
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
}

fn trace(a: TraceArgs, json: bool) -> CmdResult {
    let tol = tolerances(a.tol_closure, a.tol_collision)?;
    let poly: Polynomial = read_json(&a.poly)?;
    let paths: Vec<PathSpec> = read_json(&a.path)?;
    let bundle = PathBundle::new(paths)?;
    let t = trace_roots(&poly, &bundle, &tol)?;
    let body = t.to_json()? + "\n";
    let mut extra = Vec::new();
    if let Some(svg) = &a.svg {
        fs::write(svg, trace_figure(t.coefficient_paths(), t.roots().paths()))?;
        extra.push(svg.as_path());
    }
    if let Some(out) = &a.out {
        let config = serde_json::json!({
            "poly": a.poly.display().to_string(),
            "path": a.path.display().to_string(),
            "tolerances": tol,
        });
        write_with_manifest(out, &body, "trace", config, vec![], &extra)?;
    }
    if json {
        print!("{body}");
    } else {
        println!("induced permutation {}", t.induced());
        println!(
            "steps {}, refinements {}, min separation {:.3e}, endpoint error {:.2e}",
            t.steps(),
            t.refinements(),
            t.min_separation(),
            t.endpoint_error()
        );
    }
    Ok(0)
}

fn witness(a: WitnessArgs, json: bool) -> CmdResult {
    let tol = tolerances(a.tol_closure, a.tol_collision)?;
    let started = Instant::now();
    if let Some(control) = a.control {
        let report = match control {
            Control::QuadraticFormula => quadratic_control(a.exprs, a.seed)?,
            Control::CubicFormula => cubic_control(a.exprs, a.seed)?,
        };
        return finish_control(&a, &report, json, started);
    }
    let mut config = WitnessConfig::new(a.degree, a.depth);
    config.expr_count = a.exprs;
    config.expr_max_depth = a.max_expr_depth.unwrap_or(a.depth);
    config.seed = a.seed;
    config.tolerances = tol;
    if a.table2 {
        config.construction = Construction::DoubleCommutator;
        config.depth = 2;
        config.expr_max_depth = a.max_expr_depth.unwrap_or(2);
    }
    if let Some(t) = &a.target {
        config.target = Some(Permutation::parse(t, a.degree)?);
    }
    let report = arlab::witness::run_witness(&config)?;
    let body = report.to_json()? + "\n";
    if let Some(out) = &a.out {
        let cfg = serde_json::to_value(&config)?;
        write_with_manifest(out, &body, "witness", cfg, vec![a.seed], &[])?;
    }
    if json {
        print!("{body}");
    } else {
        print_witness(&report, started);
    }
    Ok(if report.verdicts.witness_holds {
        0
    } else {
        EXIT_VERDICT
    })
}

fn print_witness(r: &WitnessReport, started: Instant) {
    println!(
        "degree {}, depth {}, word {}",
        r.config.degree, r.config.depth, r.word
    );
    println!(
        "stages {}, target {}, induced {}",
        r.stage_count, r.target, r.induced
    );
    println!(
        "{:>6} {:>6} {:>9} {:>12}",
        "depth", "count", "returned", "max rel err"
    );
    for d in &r.per_depth {
        println!(
            "{:>6} {:>6} {:>9} {:>12.2e}",
            d.depth, d.count, d.returned, d.max_relative_error
        );
    }
    println!(
        "verdict: {}",
        if r.verdicts.witness_holds {
            "witness holds"
        } else {
            "witness FAILED"
        }
    );
    println!("wall-clock {:.2} s", started.elapsed().as_secs_f64());
}

fn finish_control(a: &WitnessArgs, c: &ControlReport, json: bool, started: Instant) -> CmdResult {
    let body = serde_json::to_string_pretty(c)? + "\n";
    if let Some(out) = &a.out {
        let cfg = serde_json::json!({ "control": c.name, "exprs": a.exprs, "seed": a.seed });
        write_with_manifest(out, &body, "witness", cfg, vec![a.seed], &[])?;
    }
    if json {
        print!("{body}");
    } else {
        println!(
            "control {}: {} (depth {})",
            c.name, c.formula, c.formula_depth
        );
        println!("word {}, induced {}", c.word, c.induced);
        for l in &c.landings {
            println!(
                "  branches {:?}: root s{} -> s{} (gap {:.1e})",
                l.branches.0,
                l.start_root + 1,
                l.end_root + 1,
                l.end_gap
            );
        }
        println!(
            "{}",
            if c.formula_moved {
                "expression moved"
            } else {
                "expression did NOT move"
            }
        );
        println!(
            "shallow expressions {}",
            if c.shallow_closed {
                "returned"
            } else {
                "did NOT return"
            }
        );
        println!("wall-clock {:.2} s", started.elapsed().as_secs_f64());
    }
    Ok(if c.formula_moved && c.shallow_closed {
        0
    } else {
        EXIT_VERDICT
    })
}

fn figure_cmd(a: FigureArgs, json: bool) -> CmdResult {
    let name: FigureName = a.name.parse().map_err(Failure::input)?;
    let svg = figure(name)?;
    match &a.out {
        Some(out) => {
            let cfg = serde_json::json!({ "figure": name.as_str() });
            write_with_manifest(out, &svg, "figure", cfg, vec![], &[])?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "figure": name.as_str(), "out": out.display().to_string() })
                );
            } else {
                println!("wrote {}", out.display());
            }
        }
        None => print!("{svg}"),
    }
    Ok(0)
}
