//! `pgcurve`: Frenet analysis, synthesis and Mannheim-pair audits from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or usage error,
//! 3 admissibility failure, 4 synthesis failure, 5 no Mannheim partner detected.

mod input;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pgcurve::curve::DEFAULT_GRID;
use pgcurve::mannheim::{audit, is_mannheim_curve, lambda_series, mannheim_offset, AuditReport, ClaimId, CONSTANCY_TOL};
use pgcurve::synthesis::synthesize;
use pgcurve::{ArcCurve, FrenetConfig, Grid, MannheimError};

use input::{curve_error, load, synthesis_error};
use table::{frenet_table, num, write_csv, write_json};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn io(m: impl Into<String>) -> Self {
        Self { code: 1, message: m.into() }
    }
    pub fn parse(m: impl Into<String>) -> Self {
        Self { code: 2, message: m.into() }
    }
    pub fn admissibility(m: impl Into<String>) -> Self {
        Self { code: 3, message: m.into() }
    }
    pub fn synthesis(m: impl Into<String>) -> Self {
        Self { code: 4, message: m.into() }
    }
    pub fn detection(m: impl Into<String>) -> Self {
        Self { code: 5, message: m.into() }
    }
}

#[derive(Parser)]
#[command(name = "pgcurve", version, about = "Curves, Frenet frames and Mannheim pairs in pseudo-Galilean space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Number of grid points
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Relative-spread tolerance for constancy and detection
    #[arg(long, default_value_t = CONSTANCY_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (a directory for `mannheim`); standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct LambdaChoice {
    /// Offset distance of the partner curve
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Detect the distance from the curve (constant -kappa/tau^2)
    #[arg(long)]
    auto: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Frenet table of a curve file, intrinsic file or sampled-curve CSV
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate an intrinsic file into a sampled curve
    Synthesize {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build a Mannheim partner and audit the pair
    Mannheim {
        file: PathBuf,
        #[command(flatten)]
        lambda: LambdaChoice,
        #[command(flatten)]
        common: Common,
    },
    /// Long-format series for plotting
    Plotdata {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        lambda: LambdaChoice,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Analyze { file, common } => analyze(&file, &common),
        Command::Synthesize { file, common } => synthesize_cmd(&file, &common),
        Command::Mannheim { file, lambda, common } => {
            if lambda.lambda.is_none() && !lambda.auto {
                return Err(CliError::parse("mannheim needs --lambda X or --auto"));
            }
            mannheim(&file, &lambda, &common)
        }
        Command::Plotdata { files, lambda, common } => plotdata(&files, &lambda, &common),
    }
}

fn check_common(c: &Common) -> Result<(), CliError> {
    if c.grid < 2 {
        return Err(CliError::parse(format!("--grid must be at least 2, got {}", c.grid)));
    }
    if !(c.tol.is_finite() && c.tol > 0.0) {
        return Err(CliError::parse(format!("--tol must be positive, got {}", c.tol)));
    }
    Ok(())
}

fn grid_of(curve: &ArcCurve, c: &Common, path: &Path) -> Result<Grid<f64>, CliError> {
    curve.grid(c.grid).map_err(|e| curve_error(path, e))
}

fn emit(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match out {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::io(e.to_string()))
        }
        None => {
            let mut w = BufWriter::new(std::io::stdout().lock());
            f(&mut w)?;
            w.flush().map_err(|e| CliError::io(e.to_string()))
        }
    }
}

fn write_table(curve: &ArcCurve, grid: &Grid<f64>, fmt: Format, out: Option<&Path>, label: &str, path: &Path) -> Result<(), CliError> {
    let t = frenet_table(curve, grid, &FrenetConfig::default()).map_err(|e| curve_error(path, e))?;
    if t.undefined > 0 {
        eprintln!("warning: {label}: Frenet frame undefined at {} of {} grid points", t.undefined, grid.n);
    }
    emit(out, |w| match fmt {
        Format::Csv => write_csv(&t.rows, w),
        Format::Json => write_json(&t.rows, w),
    })
}

fn analyze(path: &Path, c: &Common) -> Result<(), CliError> {
    check_common(c)?;
    let curve = load(path)?;
    let grid = grid_of(&curve, c, path)?;
    write_table(&curve, &grid, c.format, c.out.as_deref(), &display_name(path), path)
}

fn synthesize_cmd(path: &Path, c: &Common) -> Result<(), CliError> {
    check_common(c)?;
    let spec = input::intrinsic_spec(path)?;
    let sc = synthesize(&spec).map_err(|e| synthesis_error(path, e))?;
    let d = sc.diagnostics();
    eprintln!(
        "diagnostics: step {}, first-integral drift {:e}, swap drift {:e}, x drift {:e}, frame x drift {:e}",
        sc.step(),
        d.first_integral_drift,
        d.swap_drift,
        d.x_drift,
        d.frame_x_drift
    );
    emit(c.out.as_deref(), |w| match c.format {
        Format::Csv => sc.write_csv(w).map_err(|e| CliError::io(e.to_string())),
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                step: f64,
                diagnostics: &'a pgcurve::synthesis::Diagnostics<f64>,
                nodes: &'a [pgcurve::synthesis::SampleNode<f64>],
            }
            write_json(&Doc { step: sc.step(), diagnostics: d, nodes: sc.nodes() }, w)
        }
    })
}

fn display_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn mannheim_error(path: &Path, e: MannheimError) -> CliError {
    match e {
        MannheimError::Curve(ce) => curve_error(path, ce),
        MannheimError::InvalidLambda(_) => CliError::parse(e.to_string()),
        MannheimError::TorsionTooSmall { .. } | MannheimError::NotGenuinePair(_) => {
            CliError::detection(format!("{}: {e}", path.display()))
        }
    }
}

/// The offset distance, from the flag or by detection.
fn choose_lambda(curve: &ArcCurve, grid: &Grid<f64>, choice: &LambdaChoice, tol: f64, path: &Path) -> Result<f64, CliError> {
    if let Some(l) = choice.lambda {
        return Ok(l);
    }
    let cfg = FrenetConfig::default();
    match is_mannheim_curve(curve, grid, tol, &cfg).map_err(|e| mannheim_error(path, e))? {
        Some(d) => {
            eprintln!("detected lambda = {} (spread {:e}), degenerate = {}", num(d.lambda), d.spread, d.degenerate);
            Ok(d.lambda)
        }
        None => {
            let ls = lambda_series(curve, grid, &cfg).map_err(|e| mannheim_error(path, e))?;
            Err(CliError::detection(format!(
                "{}: -kappa/tau^2 is not constant (relative spread {:e} >= tol {:e})",
                path.display(),
                ls.spread,
                tol
            )))
        }
    }
}

fn run_audit(path: &Path, curve: &ArcCurve, choice: &LambdaChoice, c: &Common) -> Result<(ArcCurve, Grid<f64>, AuditReport), CliError> {
    let grid = grid_of(curve, c, path)?;
    let lambda = choose_lambda(curve, &grid, choice, c.tol, path)?;
    let cfg = FrenetConfig::default();
    let pair = mannheim_offset(curve, lambda, &grid, &cfg).map_err(|e| mannheim_error(path, e))?;
    let report = audit(&pair, &display_name(path), &grid, c.tol, &cfg).map_err(|e| mannheim_error(path, e))?;
    Ok((pair.partner().clone(), grid, report))
}

fn mannheim(path: &Path, choice: &LambdaChoice, c: &Common) -> Result<(), CliError> {
    check_common(c)?;
    let curve = load(path)?;
    let (partner, grid, report) = run_audit(path, &curve, choice, c)?;
    for cl in &report.claims {
        let stat = cl.statistic.map(|v| format!("{v:e}")).unwrap_or_else(|| "-".into());
        eprintln!("{:<24} {:<9} statistic {} threshold {:e}", cl.id.as_str(), format!("{:?}", cl.verdict).to_lowercase(), stat, cl.threshold);
    }
    match &c.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
            let ext = match c.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let base_out = dir.join(format!("base.{ext}"));
            let partner_out = dir.join(format!("partner.{ext}"));
            write_table(&curve, &grid, c.format, Some(&base_out), "base", path)?;
            write_table(&partner, &grid, c.format, Some(&partner_out), "partner", path)?;
            emit(Some(&dir.join("report.json")), |w| write_json(&report, w))
        }
        None => emit(None, |w| write_json(&report, w)),
    }
}

struct Point {
    series: String,
    s: f64,
    value: f64,
}

fn plotdata(paths: &[PathBuf], choice: &LambdaChoice, c: &Common) -> Result<(), CliError> {
    check_common(c)?;
    let want_pair = choice.lambda.is_some() || choice.auto;
    let mut points = Vec::new();
    for path in paths {
        let prefix = if paths.len() > 1 { format!("{}:", display_name(path)) } else { String::new() };
        let curve = load(path)?;
        let grid = grid_of(&curve, c, path)?;
        let t = frenet_table(&curve, &grid, &FrenetConfig::default()).map_err(|e| curve_error(path, e))?;
        let mut push = |name: &str, s: f64, v: Option<f64>| {
            if let Some(value) = v.filter(|v| v.is_finite()) {
                points.push(Point { series: format!("{prefix}{name}"), s, value });
            }
        };
        for r in &t.rows {
            push("kappa", r.s, Some(r.kappa));
        }
        for r in &t.rows {
            push("tau", r.s, r.tau);
        }
        for r in &t.rows {
            push("kappa_over_tau", r.s, r.tau.map(|tau| r.kappa / tau));
        }
        if want_pair {
            let (_, _, report) = run_audit(path, &curve, choice, c)?;
            let series = |id: ClaimId| report.claim(id).map(|cl| cl.series.clone()).unwrap_or_default();
            let kappa_star = series(ClaimId::Result32);
            let product = series(ClaimId::Schell);
            for (s, v) in report.s.iter().zip(&kappa_star) {
                push("partner_kappa", *s, *v);
            }
            for (s, v) in report.s.iter().zip(&product) {
                push("tau_product", *s, *v);
            }
            for (s, v) in report.s.iter().zip(&report.partner_condition.series) {
                push("partner_condition", *s, *v);
            }
            for cl in &report.claims {
                for (s, v) in report.s.iter().zip(&cl.series) {
                    push(&format!("claim:{}", cl.id.as_str()), *s, *v);
                }
            }
        }
    }
    emit(c.out.as_deref(), |w| match c.format {
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            let io = |e: csv::Error| CliError::io(e.to_string());
            wr.write_record(["series", "s", "value"]).map_err(io)?;
            for p in &points {
                wr.write_record([p.series.clone(), num(p.s), num(p.value)]).map_err(io)?;
            }
            wr.flush().map_err(|e| CliError::io(e.to_string()))
        }
        Format::Json => {
            #[derive(Serialize)]
            struct P<'a> {
                series: &'a str,
                s: f64,
                value: f64,
            }
            let v: Vec<P> = points.iter().map(|p| P { series: &p.series, s: p.s, value: p.value }).collect();
            write_json(&v, w)
        }
    })
}
