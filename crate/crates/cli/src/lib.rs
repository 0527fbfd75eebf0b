//! `opnorm-lab`: JSON reports, CSV sweeps and a self-check suite on top of
//! `opnorm-core`.
//!
//! Exit codes: 0 success, 1 domain error (bad config, symbol errors,
//! divergence flags), 2 internal failure.

pub mod config;
pub mod report;
pub mod selftest;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use opnorm_core::{
    check_wx, default_t_probes, eval_functional_norm, gap_report, maximizing_sequence, multiplied_extremal_norm,
    space_norm, sup_norm, DiskFunction, QuadConfig64,
};
use serde_json::{json, Value};

use crate::config::{ConfigError, RunConfig};
use crate::report::{complex, document, emit_report, real};

#[derive(Debug, Parser)]
#[command(name = "opnorm-lab", version, about = "Norms of multiplication operators on Hardy and Bergman spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Optional configuration; only its `quad` block is used.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Space norm of the frozen symbol g_t, and extremal data at `z` if given.
    Norm(RunArgs),
    /// Boundary sup norm of g_t.
    Supnorm(RunArgs),
    /// Operator norm of M_{g_t} with a maximizing sequence.
    Opnorm(RunArgs),
    /// Compare the norm of the integrated operator with the integral of norms.
    Gap(RunArgs),
    /// Equality certificate, downgraded unless the integrability check passes.
    Certify(RunArgs),
    /// Integrability check of the family.
    WxCheck(RunArgs),
    /// Gap and verdict for each value of one binding, as CSV.
    Sweep(RunArgs),
    /// Bundled invariant checks.
    Selftest(SelftestArgs),
}

enum Failure {
    Domain(String),
    Internal(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<opnorm_core::Error> for Failure {
    fn from(e: opnorm_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// Rendered output and the exit code to return once it is written.
struct Output {
    text: String,
    code: i32,
    out: Option<PathBuf>,
}

impl Output {
    fn json(doc: Value, code: i32, out: Option<PathBuf>) -> Self {
        Output { text: emit_report(&doc), code, out }
    }
}

fn load(args: &RunArgs) -> Result<(RunConfig, Option<PathBuf>), Failure> {
    let cfg = RunConfig::load(&args.config)?;
    let out = args.out.clone().or_else(|| cfg.out.clone());
    Ok((cfg, out))
}

fn frozen_header(cfg: &RunConfig) -> Result<Value, Failure> {
    Ok(json!({ "symbol": cfg.symbol_text()?, "t": real(cfg.t_or_default()) }))
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn norm_cmd(args: &RunArgs) -> Result<Output, Failure> {
    let (cfg, out) = load(args)?;
    let (space, q, family) = (cfg.space_spec()?, cfg.quad_config()?, cfg.family()?);
    let g = family.frozen(cfg.t_or_default());
    let norm = space_norm(&g, &space, &q)?;
    let extremal = match cfg.z_point() {
        None => Value::Null,
        Some(z) => json!({
            "z": complex(z),
            "eval_norm": real(eval_functional_norm(z, &space)?),
            "multiplied_norm": real(multiplied_extremal_norm(&g, z, &space, &q)?),
            "value_at_z": complex(g.eval(z).map_err(opnorm_core::Error::from)?),
        }),
    };
    let body = merge(frozen_header(&cfg)?, json!({ "space": report::space(&space), "norm": real(norm), "extremal": extremal }));
    Ok(Output::json(document("norm", body), 0, out))
}

fn supnorm_cmd(args: &RunArgs) -> Result<Output, Failure> {
    let (cfg, out) = load(args)?;
    let (q, family) = (cfg.quad_config()?, cfg.family()?);
    let s = sup_norm(&family.frozen(cfg.t_or_default()), &q)?;
    let body = merge(frozen_header(&cfg)?, report::sup_body(&s));
    Ok(Output::json(document("supnorm", body), 0, out))
}

fn opnorm_cmd(args: &RunArgs) -> Result<Output, Failure> {
    let (cfg, out) = load(args)?;
    let (space, q, family) = (cfg.space_spec()?, cfg.quad_config()?, cfg.family()?);
    let g = family.frozen(cfg.t_or_default());
    let s = sup_norm(&g, &q)?;
    let m = maximizing_sequence(&g, &space, cfg.k.unwrap_or(14), &q)?;
    let body = merge(
        frozen_header(&cfg)?,
        json!({
            "space": report::space(&space),
            "norm": real(s.value),
            "maximizer": complex(s.maximizer),
            "sequence": report::sequence_body(&m),
        }),
    );
    Ok(Output::json(document("opnorm", body), 0, out))
}

fn gap_cmd(args: &RunArgs) -> Result<Output, Failure> {
    let (cfg, out) = load(args)?;
    let r = gap_report(&cfg.family()?, &cfg.space_spec()?, &cfg.quad_config()?)?;
    let code = if r.has_failure() { 1 } else { 0 };
    Ok(Output::json(document("gap", report::gap_body(&r)), code, out))
}

fn certify_cmd(args: &RunArgs) -> Result<Output, Failure> {
    let (cfg, out) = load(args)?;
    let (space, q, family) = (cfg.space_spec()?, cfg.quad_config()?, cfg.family()?);
    let (cert, wx) = sweep::certify_with_wx(&cfg, &family, &space, &q)?;
    let verdict = sweep::combined_verdict(&cert, &wx).to_string();
    let code = if cert.gap.as_ref().is_some_and(|g| g.has_failure()) { 1 } else { 0 };
    let body = report::certificate_body(&cert, &verdict, Some(&wx.verdict.to_string()));
    Ok(Output::json(document("certificate", body), code, out))
}

fn wx_cmd(args: &RunArgs) -> Result<Output, Failure> {
    let (cfg, out) = load(args)?;
    let (space, q, family) = (cfg.space_spec()?, cfg.quad_config()?, cfg.family()?);
    let probes = cfg.t_probe.clone().unwrap_or_else(|| default_t_probes(&q));
    let r = check_wx(&family, &space, &q, &probes)?;
    Ok(Output::json(document("wx", report::wx_body(&r)), 0, out))
}

fn sweep_cmd(args: &RunArgs) -> Result<Output, Failure> {
    let (cfg, out) = load(args)?;
    let rows = sweep::sweep_gap(&cfg)?;
    let name = cfg.sweep_fields()?.name.clone();
    let mut buf = Vec::new();
    sweep::write_csv(&name, &rows, &mut buf).map_err(|e| Failure::Internal(e.to_string()))?;
    let text = String::from_utf8(buf).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Output { text, code: 0, out })
}

fn selftest_cmd(args: &SelftestArgs) -> Result<Output, Failure> {
    let (q, out) = match &args.config {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            (cfg.quad_config()?, args.out.clone().or(cfg.out))
        }
        None => (QuadConfig64::default(), args.out.clone()),
    };
    let results = selftest::run(&q);
    let code = if results.iter().all(|r| r.passed) { 0 } else { 1 };
    Ok(Output::json(document("selftest", selftest::body(&results)), code, out))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Norm(a) => norm_cmd(a),
        Command::Supnorm(a) => supnorm_cmd(a),
        Command::Opnorm(a) => opnorm_cmd(a),
        Command::Gap(a) => gap_cmd(a),
        Command::Certify(a) => certify_cmd(a),
        Command::WxCheck(a) => wx_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Selftest(a) => selftest_cmd(a),
    }
}

fn write_output(o: &Output, out: &mut dyn Write) -> std::io::Result<()> {
    match &o.out {
        Some(path) => std::fs::write(path, &o.text),
        None => {
            out.write_all(o.text.as_bytes())?;
            out.flush()
        }
    }
}

/// The message part of a clap error, without usage and help hints, on one line.
fn clap_message(rendered: &str) -> String {
    rendered
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim()
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

/// Runs the command line `args` (program name first), writing reports to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = writeln!(err, "error: a subcommand is required; see --help");
                    1
                }
                _ => {
                    let _ = writeln!(err, "{}", clap_message(&e.render().to_string()));
                    1
                }
            };
        }
    };
    let result = catch_unwind(AssertUnwindSafe(|| dispatch(&cli)));
    match result {
        Ok(Ok(o)) => match write_output(&o, out) {
            Ok(()) => o.code,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                2
            }
        },
        Ok(Err(Failure::Domain(m))) => {
            let _ = writeln!(err, "error: {}", first_line(&m));
            1
        }
        Ok(Err(Failure::Internal(m))) => {
            let _ = writeln!(err, "internal error: {}", first_line(&m));
            2
        }
        Err(p) => {
            let _ = writeln!(err, "internal error: {}", first_line(&panic_message(p.as_ref())));
            2
        }
    }
}

/// [`run_cli_with`] on the process's stdout and stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}
