//! `contextua` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a physics assertion fails, 2 on usage or
//! parse errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contextua::bench::{self, Number};
use contextua::chsh::{
    chsh_value, product_bound_sample, scan_state, AngleSet, ChshResult, ScanMode,
    VIOLATION_THRESHOLD,
};
use contextua::kochen_specker::{eigen_report, ks_operators, KsLabel};
use contextua::states::{bell_state, entanglement_det, schmidt_separable, BeamState, BellKind};
use serde::Serialize;
use serde_json::json;

/// Seed used by `bound-sample` when neither `--seed` nor `CONTEXTUA_SEED` is set.
pub const DEFAULT_SEED: u64 = 20_140_917;

#[derive(Parser, Debug)]
#[command(name = "contextua", version, about = "Path and polarization optics simulator")]
struct Cli {
    /// Numerical tolerance for physics assertions.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_real)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prepare the state described by a bench file and report it.
    Run { file: PathBuf },
    /// Evaluate S at one analyzer setting.
    Chsh {
        #[command(flatten)]
        state: StateArg,
        /// θ1,θ2,φ1,φ2 (decimals or pi multiples such as -pi/4).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_angles)]
        angles: Option<AngleSet<f64>>,
    },
    /// Sweep S over an angle grid on [-π, π].
    Scan {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        grid: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Slice)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check |S| ≤ 2 on random product states.
    BoundSample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, env = "CONTEXTUA_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Verify the five eigenvalue relations on Φ⁻ and the parity contradiction.
    KsCheck {
        /// Flip the sign of one operator.
        #[arg(long, hide = true, value_parser = parse_label)]
        tamper: Option<KsLabel>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct StateArg {
    /// One of phi+, phi-, psi+, psi-.
    #[arg(long, value_parser = parse_kind)]
    state: Option<BellKind>,
    /// Bench file describing the preparation.
    #[arg(long)]
    bench: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Slice,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Physics(String),
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_kind(s: &str) -> Result<BellKind, String> {
    s.parse()
}

fn parse_label(s: &str) -> Result<KsLabel, String> {
    s.parse()
}

fn parse_angles(s: &str) -> Result<AngleSet<f64>, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<Number>().map(|n| n.to_f64()))
        .collect::<Result<Vec<f64>, String>>()?;
    if v.len() != 4 {
        return Err(format!("expected 4 comma-separated angles, got {}", v.len()));
    }
    Ok(AngleSet::from_slice(&v))
}

fn load_bench(file: &FsPath) -> Result<BeamState<f64>, Failure> {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let program = bench::parse(&text).map_err(|e| usage(e.render(&file.display().to_string())))?;
    bench::compile::<f64>(&program)
        .evaluate()
        .map_err(|e| usage(format!("{}: {e}", file.display())))
}

fn resolve_state(arg: &StateArg) -> Result<BeamState<f64>, Failure> {
    match (&arg.state, &arg.bench) {
        (Some(kind), _) => bell_state(*kind, 1.0).map_err(usage),
        (None, Some(file)) => load_bench(file),
        (None, None) => Err(usage("one of --state or --bench is required")),
    }
}

fn to_json<S: Serialize>(v: &S) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn emit(out: Option<&FsPath>, body: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| usage(e)),
    }
}

fn cmd_run(file: &FsPath, tol: f64) -> CmdResult {
    let state = load_bench(file)?;
    let report = json!({
        "state": state,
        "norm": state.amplitudes().norm(),
        "separable": schmidt_separable(&state, tol),
    });
    emit(None, &to_json(&report))
}

fn cmd_chsh(arg: &StateArg, angles: Option<AngleSet<f64>>, tol: f64) -> CmdResult {
    let state = resolve_state(arg)?;
    let angles = angles.unwrap_or_else(AngleSet::phi_plus_optimum);
    let result = chsh_value(&state, angles).map_err(usage)?;
    emit(None, &to_json(&result))?;
    if result.violates_bound && schmidt_separable(&state, tol) {
        return Err(Failure::Physics(format!(
            "separable state gives |S| = {} > 2 (det {:e})",
            result.s_value.abs(),
            entanglement_det(&state)
        )));
    }
    Ok(())
}

fn scan_csv(rows: &[ChshResult<f64>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ChshResult::<f64>::CSV_HEADER).map_err(usage)?;
    for r in rows {
        w.write_record(r.csv_record()).map_err(usage)?;
    }
    let bytes = w.into_inner().map_err(usage)?;
    String::from_utf8(bytes).map_err(usage)
}

fn cmd_scan(arg: &StateArg, grid: u64, out: Option<&FsPath>, mode: Mode, format: Format) -> CmdResult {
    let state = resolve_state(arg)?;
    let mode = match mode {
        Mode::Slice => ScanMode::Slice,
        Mode::Full => ScanMode::Full,
    };
    let rows = scan_state(&state, grid as usize, mode).map_err(usage)?;
    let body = match format {
        Format::Csv => scan_csv(&rows)?,
        Format::Json => to_json(&rows),
    };
    emit(out, &body)
}

fn cmd_bound_sample(n: u64, seed: u64) -> CmdResult {
    let r = product_bound_sample::<f64>(n, seed).map_err(usage)?;
    let a = &r.argmax;
    let report = json!({
        "n": r.samples,
        "seed": r.seed,
        "max_abs_s": r.max_abs_s,
        "argmax": {
            "index": a.index,
            "params": {
                "alpha": a.params.alpha,
                "beta": a.params.beta,
                "gamma": a.params.gamma,
                "delta": a.params.delta,
            },
            "angles": a.angles,
            "s_value": a.s_value,
        },
        "any_violation": r.any_violation,
    });
    emit(None, &to_json(&report))?;
    if r.any_violation {
        return Err(Failure::Physics(format!(
            "product state {} gives |S| = {} > {VIOLATION_THRESHOLD}",
            a.index, r.max_abs_s
        )));
    }
    Ok(())
}

fn cmd_ks_check(tamper: Option<KsLabel>, tol: f64) -> CmdResult {
    let ops = ks_operators::<f64>();
    let ops = match tamper {
        Some(label) => ops.tampered(label),
        None => ops,
    };
    let state = bell_state::<f64>(BellKind::PhiMinus, 1.0).map_err(usage)?;
    let report = eigen_report(&ops, &state).map_err(usage)?;
    emit(None, &to_json(&report))?;
    if let Some(bad) = report.first_failure(tol) {
        return Err(Failure::Physics(format!(
            "relation {} fails: residual {:e}",
            bad.label, bad.residual
        )));
    }
    if !report.contradiction {
        return Err(Failure::Physics(format!(
            "no contradiction: lhs {:+}, rhs {:+}",
            report.lhs_product, report.rhs_product
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = cli.tolerance;
    let outcome = match &cli.command {
        Command::Run { file } => cmd_run(file, tol),
        Command::Chsh { state, angles } => cmd_chsh(state, *angles, tol),
        Command::Scan {
            state,
            grid,
            out,
            mode,
            format,
        } => cmd_scan(state, *grid, out.as_deref(), *mode, *format),
        Command::BoundSample { n, seed } => cmd_bound_sample(*n, *seed),
        Command::KsCheck { tamper } => cmd_ks_check(*tamper, tol),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Physics(msg)) => {
            eprintln!("contextua: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
