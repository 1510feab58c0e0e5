//! Command-line front end: `bounds`, `erasure-scan`, `simulate-teleport` and
//! `property-suite`. Reports are JSON or CSV, written atomically.
//!
//! Exit codes: 0 success, 2 configuration or parse error, 3 solver failure,
//! 4 property-suite failure.

pub mod io;
pub mod suite;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::channels::{coherent_bidirectional, erasure_wiretap_cell};
use crate::conic::{SolveStatus, SolverSettings};
use crate::measures::{
    e_max_bidirectional_lower, gamma_bidirectional, gamma_bidirectional_program, gamma_channel, BoundKind, BoundReport, FwConfig, Form,
};
use crate::protocols::{resource_state_bounds, simulation_report};
use crate::reading::{nonadaptive_rate, erasure_private_capacity, ReadingEnsemble};
use crate::{Error, Result};

use io::{fmt_sig, load_channel, load_reps, write_output};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_SUITE: i32 = 4;

/// Largest Choi dimension for which `bounds` runs the E_max search.
const E_MAX_SEARCH_LIMIT: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "biqap", version, about = "SDP bounds for bidirectional quantum channels and private reading")]
pub struct Cli {
    /// Caps the worker threads used for restarts and trials.
    #[arg(long, env = "BIQAP_THREADS", global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Interior-point tolerance.
    #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Γ²→² in both forms, the E²→²_max search and (with --reps) resource-state bounds.
    Bounds {
        #[arg(long)]
        input: String,
        /// Representation file enabling the resource-state bounds.
        #[arg(long)]
        reps: Option<String>,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        /// Write the dual Γ²→² program in text form to this path.
        #[arg(long)]
        dump_sdp: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Erasure-cell rates against 2(1−q) log₂ d and the bidirectional bound.
    ErasureScan {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// "a:b:step", inclusive; an empty string gives an empty grid.
        #[arg(long, default_value = "0:1:0.1")]
        q_grid: String,
        /// Compute the upper bound for d = 3 too (slow).
        #[arg(long)]
        with_bound: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Teleportation simulation of a bicovariant channel.
    SimulateTeleport {
        #[arg(long)]
        input: String,
        #[arg(long)]
        reps: String,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded amortization, divergence, privacy and continuity checks.
    PropertySuite {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn settings(c: &Common) -> Result<SolverSettings> {
    if !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(Error::invalid(format!("--tol must be positive, got {}", c.tol)));
    }
    Ok(SolverSettings { tol: c.tol, ..SolverSettings::default() })
}

/// "a:b:step" → [a, a + step, …] up to b (with slack for rounding).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::invalid(format!("--q-grid must look like a:b:step, got \"{s}\""));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
    let (a, b, step) = (v[0], v[1], v[2]);
    if !(step > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor();
    if n < 0.0 {
        return Ok(Vec::new());
    }
    // round to 12 digits so 0.1 steps print as 0.3, not 0.30000000000000004
    Ok((0..=n as usize).map(|k| ((a + k as f64 * step) * 1e12).round() / 1e12).collect())
}

fn failed_report(name: &str, kind: BoundKind, e: &Error) -> BoundReport {
    let status = match e {
        Error::Solver { status, .. } => *status,
        _ => SolveStatus::NumericalFailure,
    };
    BoundReport { name: name.into(), value_bits: f64::NAN, linear: None, kind, gap: f64::NAN, solver_status: status, iterations: 0 }
}

fn bounds_csv(reports: &[BoundReport]) -> String {
    let mut s = String::from("name,kind,value_bits,linear,gap,status,iterations\n");
    for r in reports {
        let kind = serde_json::to_value(r.kind).unwrap();
        let status = serde_json::to_value(r.solver_status).unwrap();
        s += &format!(
            "{},{},{},{},{},{},{}\n",
            r.name.replace(',', ";"),
            kind.as_str().unwrap_or(""),
            fmt_sig(r.value_bits),
            r.linear.map(fmt_sig).unwrap_or_default(),
            fmt_sig(r.gap),
            status.as_str().unwrap_or(""),
            r.iterations
        );
    }
    s
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

struct Outcome {
    text: String,
    code: i32,
}

fn cmd_bounds(input: &str, reps: Option<&str>, restarts: usize, dump: Option<&PathBuf>, c: &Common) -> Result<Outcome> {
    let st = settings(c)?;
    let ch = load_channel(input)?;
    let n = &ch.bidirectional;
    if let Some(p) = dump {
        write_output(Some(p), &gamma_bidirectional_program(n, Form::Dual).dump_text())?;
    }
    let mut reports = Vec::new();
    let mut solver_failed = false;
    let mut push = |r: Result<BoundReport>, name: &str, kind: BoundKind, reports: &mut Vec<BoundReport>| match r {
        Ok(r) => reports.push(r),
        Err(e) => {
            solver_failed = true;
            reports.push(failed_report(name, kind, &e));
        }
    };
    if let Some(p) = &ch.point {
        push(gamma_channel(p, &st), "R_max(channel)", BoundKind::ExactSdp, &mut reports);
    }
    push(gamma_bidirectional(n, Form::Primal, &st), "R_max^{2->2} (primal)", BoundKind::ExactSdp, &mut reports);
    push(gamma_bidirectional(n, Form::Dual, &st), "R_max^{2->2} (dual)", BoundKind::ExactSdp, &mut reports);
    let k = reports.len();
    let gap = match (reports[k - 2].linear, reports[k - 1].linear) {
        (Some(p), Some(d)) => (p - d).abs() / d.max(1.0),
        _ => f64::NAN,
    };
    let mut notes = Vec::new();
    let mut search = None;
    if n.j.nrows() <= E_MAX_SEARCH_LIMIT && restarts > 0 {
        match e_max_bidirectional_lower(n, restarts, 20, c.seed, &st) {
            Ok(s) => {
                reports.push(s.report.clone());
                search = Some(json!({"restart_values": s.restart_values, "running_max": s.running_max}));
            }
            Err(e) => push(Err(e), "E_max^{2->2} (pure-product search)", BoundKind::HeuristicLower, &mut reports),
        }
    } else {
        notes.push(format!("E_max search skipped (Choi dimension {} > {E_MAX_SEARCH_LIMIT} or restarts = 0)", n.j.nrows()));
    }
    if let Some(rp) = reps {
        let r = load_reps(rp, &ch)?;
        let cfg = FwConfig { settings: st.clone(), ..FwConfig::default() };
        match resource_state_bounds(n, &r, &cfg) {
            Ok((rains, eppt)) => {
                reports.push(rains);
                reports.push(eppt);
            }
            Err(e @ Error::Invalid(_)) => notes.push(format!("resource-state bounds refused: {e}")),
            Err(e) => push(Err(e), "resource-state bounds", BoundKind::FwUpperEstimate, &mut reports),
        }
    }
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Csv => bounds_csv(&reports),
        Format::Json => to_json(&json!({
            "command": "bounds",
            "seed": c.seed,
            "tol": c.tol,
            "dims": {"S_A": n.dims[0], "A": n.dims[1], "B": n.dims[2], "S_B": n.dims[3]},
            "gamma_relative_gap": gap,
            "bounds": reports,
            "e_max_search": search,
            "notes": notes,
        })),
    };
    Ok(Outcome { text, code: if solver_failed { EXIT_SOLVER } else { EXIT_OK } })
}

#[derive(Debug, Serialize)]
struct ScanRow {
    q: f64,
    analytic: f64,
    computed_rate: f64,
    upper_bound: f64,
}

fn cmd_erasure_scan(d: usize, grid: &str, with_bound: bool, c: &Common) -> Result<Outcome> {
    let st = settings(c)?;
    if !(2..=3).contains(&d) {
        return Err(Error::invalid(format!("--d must be 2 or 3, got {d}")));
    }
    let qs = parse_grid(grid)?;
    if qs.iter().any(|q| !(0.0..=1.0).contains(q)) {
        return Err(Error::invalid("--q-grid values must lie in [0, 1]"));
    }
    let mut rows = Vec::new();
    let mut code = EXIT_OK;
    for q in qs {
        let cell = erasure_wiretap_cell(d, q)?;
        let rate = nonadaptive_rate(&cell, &ReadingEnsemble::uniform_max_entangled(&cell))?.rate_bits;
        let upper_bound = if d == 2 || with_bound {
            match gamma_bidirectional(&coherent_bidirectional(&cell)?, Form::Dual, &st) {
                Ok(r) => r.value_bits,
                Err(_) => {
                    code = EXIT_SOLVER;
                    f64::NAN
                }
            }
        } else {
            f64::NAN
        };
        rows.push(ScanRow { q, analytic: erasure_private_capacity(d, q)?, computed_rate: rate, upper_bound });
    }
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("q,analytic,computed_rate,upper_bound\n");
            for r in &rows {
                s += &format!("{},{},{},{}\n", fmt_sig(r.q), fmt_sig(r.analytic), fmt_sig(r.computed_rate), fmt_sig(r.upper_bound));
            }
            s
        }
        Format::Json => to_json(&json!({"command": "erasure-scan", "d": d, "seed": c.seed, "tol": c.tol, "rows": rows})),
    };
    Ok(Outcome { text, code })
}

fn cmd_simulate(input: &str, reps: &str, c: &Common) -> Result<Outcome> {
    let st = settings(c)?;
    let ch = load_channel(input)?;
    let r = load_reps(reps, &ch)?;
    let rep = simulation_report(&ch.bidirectional, &r, &st)?;
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({"command": "simulate-teleport", "seed": c.seed, "tol": c.tol, "report": rep})),
        Format::Csv => format!(
            "key,value\nbicovariance_residual,{}\none_design_u,{}\none_design_v,{}\npovm_residual_a,{}\npovm_residual_b,{}\ndiamond_distance,{}\n",
            fmt_sig(rep.bicovariance_residual),
            fmt_sig(rep.one_design_u),
            fmt_sig(rep.one_design_v),
            fmt_sig(rep.povm_residual_a),
            fmt_sig(rep.povm_residual_b),
            fmt_sig(rep.diamond_distance)
        ),
    };
    Ok(Outcome { text, code: EXIT_OK })
}

fn cmd_suite(trials: usize, c: &Common) -> Result<Outcome> {
    let st = settings(c)?;
    let summary = suite::run_suites(c.seed, trials, &st)?;
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&summary),
        Format::Csv => {
            let mut s = String::from("suite,trials,failures,skipped,worst_margin,passed\n");
            for r in &summary.suites {
                s += &format!("{},{},{},{},{},{}\n", r.name, r.trials, r.failures, r.skipped, fmt_sig(r.worst_margin), r.passed);
            }
            s
        }
    };
    Ok(Outcome { text, code: if summary.all_passed { EXIT_OK } else { EXIT_SUITE } })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Solver { .. } => EXIT_SOLVER,
        _ => EXIT_CONFIG,
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(t) = cli.threads {
        // fails only if a pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let (res, common) = match &cli.command {
        Command::Bounds { input, reps, restarts, dump_sdp, common } => {
            (cmd_bounds(input, reps.as_deref(), *restarts, dump_sdp.as_ref(), common), common)
        }
        Command::ErasureScan { d, q_grid, with_bound, common } => (cmd_erasure_scan(*d, q_grid, *with_bound, common), common),
        Command::SimulateTeleport { input, reps, common } => (cmd_simulate(input, reps, common), common),
        Command::PropertySuite { trials, common } => (cmd_suite(*trials, common), common),
    };
    match res.and_then(|o| write_output(common.out.as_deref(), &o.text).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `std::env::args` and runs; clap usage errors exit with code 2.
pub fn main_entry() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_OK
            }
        }
    }
}
