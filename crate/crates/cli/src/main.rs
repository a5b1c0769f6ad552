mod expr;
mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use radial_jet::coefficients::{fdb_table, CoefficientTable};
use radial_jet::scalar::rational_to_f64;
use radial_jet::spaces::{
    compression_multiplier_norm, equivalence_scan, norm_sq_exact, sup_norm_estimate,
};
use radial_jet::{
    format_rational, parse_rational, run_sweep, CoefficientError, Exponent, IdentityError,
    IdentityId, Magnitude, Regime, SamplerConfig, SpaceError, SpaceParams, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "radial-jet",
    version,
    about = "Radial-derivative identities and ball-space norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient tables beta, c, rho and a, plus an optional Faa di Bruno table.
    Coeffs(CoeffsArgs),
    /// Seeded verification trials, one JSON line per trial.
    Verify(VerifyArgs),
    /// Norm of a polynomial, and optionally multiplier estimates for another.
    Norms(NormsArgs),
    /// Drury-Arveson to Besov-Dirichlet monomial norm ratios by degree.
    Scan(ScanArgs),
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long)]
    m: u32,
    /// Exponent for the rho table, "p/q" or a decimal.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Also emit the Faa di Bruno table of this order.
    #[arg(long)]
    fdb: Option<u32>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_id)]
    id: IdentityId,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Derivative order; the Faa di Bruno order for `fdb`.
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long = "D", default_value_t = 4)]
    cap: u32,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Lemma column; every column when omitted.
    #[arg(long)]
    r: Option<u32>,
    /// Power for `fdb`.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 1)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_regime, default_value = "exact")]
    regime: Regime,
    #[arg(long, default_value_t = radial_jet::identities::DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceKind {
    Da,
    Hms,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct NormsArgs {
    #[arg(long, value_enum)]
    space: SpaceKind,
    /// Polynomial in z1..zn.
    #[arg(long, allow_hyphen_values = true)]
    h: String,
    /// Number of variables; inferred from the expressions when omitted.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    s: String,
    /// Multiplier polynomial for compression-norm and sup estimates.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// Degree of the compression.
    #[arg(long = "D", default_value_t = 4)]
    cap: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m0: u32,
    #[arg(long)]
    k0: u32,
    #[arg(long = "Dmax", default_value_t = 40)]
    d_max: u32,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_id(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|e: IdentityError| e.to_string())
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse::<Regime>().map_err(|e| e.to_string())
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Param(String),
    #[error("{0}")]
    Disagreement(String),
    #[error("{0} of {1} trials failed")]
    Failed(usize, usize),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(..) => 1,
            CliError::Param(_) | CliError::Io(_) => 2,
            CliError::Disagreement(_) => 3,
        }
    }
}

impl From<CoefficientError> for CliError {
    fn from(e: CoefficientError) -> Self {
        match e {
            CoefficientError::Disagreement { .. } => CliError::Disagreement(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl From<IdentityError> for CliError {
    fn from(e: IdentityError) -> Self {
        match e {
            IdentityError::Coefficient(c) => c.into(),
            IdentityError::Disagreement(_) => CliError::Disagreement(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Param(e.to_string())
    }
}

impl From<expr::ExprError> for CliError {
    fn from(e: expr::ExprError) -> Self {
        CliError::Param(e.to_string())
    }
}

fn rational_arg(name: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::Param(format!("--{name}: {e}")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn run_coeffs(a: &CoeffsArgs) -> Result<(), CliError> {
    let t = a.t.as_deref().map(|t| rational_arg("t", t)).transpose()?;
    let table = CoefficientTable::new(a.m, t.as_ref())?;
    let mut doc = table.to_json();
    if let Some(nu) = a.fdb {
        doc["fdb"] = fdb_table(nu)?.to_json();
    }
    output::emit(a.output.as_deref(), &pretty(&doc))?;
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let t =
        a.t.as_deref()
            .map(|t| rational_arg("t", t).map(Exponent::Rational))
            .transpose()?;
    let cfg = SweepConfig {
        id: a.id,
        n: a.n,
        m: a.m,
        cap: a.cap,
        t,
        r: a.r,
        k: a.k,
        trials: a.trials,
        seed: a.seed,
        regime: a.regime,
        tolerance: a.tolerance,
    };
    let reports = run_sweep(&cfg)?;
    let mut body = String::new();
    for r in &reports {
        body.push_str(&r.to_json_line());
        body.push('\n');
    }
    output::emit(a.output.as_deref(), &body)?;
    let passed = reports.iter().filter(|r| r.pass).count();
    let worst = reports
        .iter()
        .map(|r| r.residual.clone())
        .fold(Magnitude::zero(a.regime), Magnitude::max);
    eprintln!(
        "{}: {passed}/{} trials passed, max residual {worst}",
        a.id,
        reports.len()
    );
    if passed < reports.len() {
        return Err(CliError::Failed(reports.len() - passed, reports.len()));
    }
    Ok(())
}

fn run_norms(a: &NormsArgs) -> Result<(), CliError> {
    let h_expr = expr::parse(&a.h)?;
    let f_expr = a.f.as_deref().map(expr::parse).transpose()?;
    let n = a.n.unwrap_or_else(|| {
        let fv = f_expr.as_ref().map_or(0, expr::Expr::max_variable);
        h_expr.max_variable().max(fv).max(1)
    });
    let space = match a.space {
        SpaceKind::Da => SpaceParams::drury_arveson(n)?,
        SpaceKind::Hms => SpaceParams::besov_dirichlet(n, a.m, rational_arg("s", &a.s)?)?,
    };
    let h = h_expr.to_jet(n, h_expr.degree())?;
    let exact = norm_sq_exact(&space, &h)?;
    let norm_sq = rational_to_f64(&exact);

    let mut rows: Vec<(&str, Value)> = vec![
        ("space", json!(space.label())),
        ("n", json!(n)),
        ("h", json!(a.h)),
        ("norm_sq", json!(norm_sq)),
        ("norm_sq_exact", json!(format_rational(&exact))),
        ("norm", json!(norm_sq.sqrt())),
    ];
    if let (Some(text), Some(fe)) = (&a.f, &f_expr) {
        let f = fe.to_jet(n, fe.degree() + a.cap)?.to_complex();
        rows.push(("f", json!(text)));
        rows.push(("D", json!(a.cap)));
        rows.push((
            "compression_norm",
            json!(compression_multiplier_norm(&f, &space, a.cap)?),
        ));
        rows.push((
            "sup_estimate",
            json!(sup_norm_estimate(&f, &SamplerConfig::default())?),
        ));
    }
    let body = match a.format {
        Format::Json => pretty(&Value::Object(
            rows.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        )),
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in rows {
                match v {
                    Value::String(text) => writeln!(s, "{k},\"{}\"", text.replace('"', "\"\"")),
                    other => writeln!(s, "{k},{other}"),
                }
                .expect("write to string");
            }
            s
        }
    };
    output::emit(a.output.as_deref(), &body)?;
    Ok(())
}

fn run_scan(a: &ScanArgs) -> Result<(), CliError> {
    let scan = equivalence_scan(a.n, a.m0, a.k0, a.d_max)?;
    let body = match a.format {
        Format::Json => pretty(&serde_json::to_value(&scan).expect("scan serializes")),
        Format::Csv => {
            let mut s = String::from("degree,ratio\n");
            for row in &scan.rows {
                writeln!(s, "{},{:?}", row.degree, row.ratio).expect("write to string");
            }
            s
        }
    };
    output::emit(a.output.as_deref(), &body)?;
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("RADIAL_JET_THREADS") else {
        return Ok(());
    };
    let threads: usize = v.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Param(format!(
            "RADIAL_JET_THREADS={v:?} is not a positive integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Param(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Coeffs(a) => run_coeffs(a),
        Command::Verify(a) => run_verify(a),
        Command::Norms(a) => run_norms(a),
        Command::Scan(a) => run_scan(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
