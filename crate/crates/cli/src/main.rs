mod krange;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Cell, Report, Table};
use ultrabessel::mcmahon::{expansion_table, golden_checks, MAX_ORDER};
use ultrabessel::specfun::{airy_bi_prime_zeros, bi_prime_zero_interval};
use ultrabessel::zeros::{convergence_study, ZeroSolver, STUDY_K_MAX};
use ultrabessel::{Error, ZeroKind};

const EXPANSION_K_MAX: usize = 100_000;
const REFINED_K_MAX: usize = 1_000;

#[derive(Parser)]
#[command(name = "ultrabessel", version, about = "Zeros of ultraspherical Bessel derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Zeros of j'_{nu,delta}.
    #[value(alias = "A")]
    A,
    /// Zeros of y'_{nu,delta}.
    #[value(alias = "B")]
    B,
}

impl Kind {
    fn zero_kind(self) -> ZeroKind {
        match self {
            Kind::A => ZeroKind::AZero,
            Kind::B => ZeroKind::BZero,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::A => "a",
            Kind::B => "b",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Expansion,
    Refined,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Expansion coefficients, exact or evaluated at (nu, delta).
    Expand(ExpandArgs),
    /// Zeros from the expansion and/or refined numerically.
    Zeros(ZerosArgs),
    /// Exact equality checks of the derived coefficients.
    Verify(VerifyArgs),
    /// Truncation errors against the oracle and fitted log-log slopes.
    Study(StudyArgs),
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of correction terms, through beta'^{-(2 order - 1)}.
    #[arg(long)]
    order: usize,
    /// Print exact coefficients (the default when nu and delta are absent).
    #[arg(long)]
    symbolic: bool,
    #[arg(long, requires = "delta", allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, requires = "nu", allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Emit the coefficient export document instead of a table.
    #[arg(long, conflicts_with_all = ["nu", "delta"])]
    export: bool,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    nu: f64,
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    /// Indices: `7`, `1..5` or `1..3,10`.
    #[arg(long)]
    k: String,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    /// Expansion order used for the expansion column.
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Relative tolerance of the refined zeros.
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    /// Read k as the phase index of the expansion rather than the positive-zero index.
    #[arg(long)]
    paper_indexing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also check the Bi' zeros against their intervals for k <= 50.
    #[arg(long)]
    airy: bool,
    /// Corrupt one derived coefficient before comparing.
    #[arg(long, hide = true)]
    perturb: bool,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    nu: f64,
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    /// Truncation orders, e.g. `0..4`.
    #[arg(long)]
    orders: String,
    /// Phase indices in [10, 500], e.g. `20..160` or `20,40,80,160`.
    #[arg(long)]
    k: String,
}

enum Failure {
    Usage(String),
    Numeric(String),
    Verification(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) | Failure::Verification(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

/// A report to print, plus an optional failure to signal after printing.
type Outcome = (Report, Option<Failure>);

fn expand(a: &ExpandArgs) -> Result<Outcome, Failure> {
    if a.order > MAX_ORDER {
        return Err(Failure::Usage(format!("order {} exceeds the maximum {MAX_ORDER}", a.order)));
    }
    let table = expansion_table(a.kind.zero_kind(), a.order)?;
    let numeric = match (a.nu, a.delta) {
        (Some(nu), Some(delta)) if !a.symbolic => Some((nu, delta)),
        _ => None,
    };
    let mut report = match numeric {
        Some((nu, delta)) => {
            let mu = 4.0 * nu * nu;
            let mut t = Table::new(&["power", "value"]);
            for (p, c) in &table.coefficients {
                t.push(vec![Cell::from(*p), Cell::from(c.eval(mu, delta))]);
            }
            let mut r = Report::new("expand", t);
            r.param("nu", nu);
            r.param("delta", delta);
            r.param("mode", "numeric");
            r
        }
        None => {
            let mut t = Table::new(&["power", "coefficient"]);
            for (p, c) in &table.coefficients {
                t.push(vec![Cell::from(*p), Cell::from(c.to_string())]);
            }
            let mut r = Report::new("expand", t);
            r.param("mode", "symbolic");
            r
        }
    };
    report.param("kind", a.kind.name());
    report.param("order", a.order);
    report.param("beta_offset", table.beta_offset.to_string());
    Ok((report, None))
}

fn checked_list(s: &str, what: &str, lo: usize, hi: usize) -> Result<Vec<usize>, Failure> {
    let list = krange::parse_list(s).map_err(Failure::Usage)?;
    if let Some(k) = list.iter().find(|k| !(lo..=hi).contains(*k)) {
        return Err(Failure::Usage(format!("{what} {k} outside [{lo}, {hi}]")));
    }
    Ok(list)
}

fn zeros(a: &ZerosArgs) -> Result<Outcome, Failure> {
    let k_max = if a.method == Method::Expansion { EXPANSION_K_MAX } else { REFINED_K_MAX };
    let ks = checked_list(&a.k, "index", 1, k_max)?;
    if a.order > MAX_ORDER {
        return Err(Failure::Usage(format!("order {} exceeds the maximum {MAX_ORDER}", a.order)));
    }
    let kind = a.kind.zero_kind();
    let solver = ZeroSolver::new(kind, a.nu, a.delta)?.with_tol(a.tol)?;
    let shift = if a.paper_indexing { 0 } else { solver.phase_shift() };
    let expansion = expansion_table(kind, a.order)?.to_numeric::<f64>().at(a.nu, a.delta);
    let mut t = Table::new(&["k", "phase_k", "expansion", "refined", "abs_diff"]);
    for &k in &ks {
        let phase = k as i64 + shift;
        let exp = (phase >= 1 && a.method != Method::Refined).then(|| expansion.eval(phase as f64));
        let refined = if a.method == Method::Expansion {
            None
        } else if a.paper_indexing {
            Some(solver.zero_at_phase(k)?.value)
        } else {
            Some(solver.zero(k)?.value)
        };
        let diff = exp.zip(refined).map(|(e, r)| (e - r).abs());
        t.push(vec![
            Cell::from(k),
            if phase >= 1 { Cell::from(phase) } else { Cell::Empty },
            Cell::from(exp),
            Cell::from(refined),
            Cell::from(diff),
        ]);
    }
    let mut r = Report::new("zeros", t);
    r.param("kind", a.kind.name());
    r.param("nu", a.nu);
    r.param("delta", a.delta);
    r.param("k", &a.k);
    r.param("method", match a.method {
        Method::Expansion => "expansion",
        Method::Refined => "refined",
        Method::Both => "both",
    });
    r.param("order", a.order);
    r.param("tol", a.tol);
    r.param("paper_indexing", a.paper_indexing);
    Ok((r, None))
}

fn verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let mut t = Table::new(&["check", "status", "detail"]);
    let mut first_failure: Option<String> = None;
    for c in golden_checks(a.perturb)? {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if let (false, None) = (c.passed, &first_failure) {
            first_failure = Some(format!("{} differs:\n{}", c.name, c.diff.clone().unwrap_or_default()));
        }
        t.push(vec![Cell::from(c.name), Cell::from(status), Cell::from(c.diff.unwrap_or_default())]);
    }
    if a.airy {
        let zeros = airy_bi_prime_zeros(50)?;
        for (i, z) in zeros.iter().enumerate() {
            let k = i + 1;
            let (lo, hi) = bi_prime_zero_interval(k);
            let inside = lo < *z && *z < hi;
            let detail = format!("t = {z:.16e} in ({lo:.16e}, {hi:.16e})");
            if !inside && first_failure.is_none() {
                first_failure = Some(format!("Bi' zero k={k}: {detail} fails"));
            }
            t.push(vec![
                Cell::from(format!("bi' zero k={k}")),
                Cell::from(if inside { "PASS" } else { "FAIL" }),
                Cell::from(detail),
            ]);
        }
    }
    let mut r = Report::new("verify", t);
    r.param("airy", a.airy);
    if a.perturb {
        r.param("perturb", true);
    }
    Ok((r, first_failure.map(Failure::Verification)))
}

fn study(a: &StudyArgs) -> Result<Outcome, Failure> {
    let orders = checked_list(&a.orders, "order", 0, MAX_ORDER)?;
    let ks = checked_list(&a.k, "index", 10, STUDY_K_MAX)?;
    let s = convergence_study(a.kind.zero_kind(), a.nu, a.delta, &ks, &orders)?;
    let mut t = Table::new(&[
        "order",
        "k",
        "beta_prime",
        "expansion_value",
        "oracle_value",
        "abs_error",
        "precision_floor",
    ]);
    for row in &s.rows {
        t.push(vec![
            Cell::from(row.order),
            Cell::from(row.k),
            Cell::from(row.beta_prime),
            Cell::from(row.expansion_value),
            Cell::from(row.oracle_value),
            Cell::from(row.abs_error),
            Cell::from(row.precision_floor),
        ]);
    }
    let mut fits = Table::new(&["order", "slope", "points"]);
    for f in &s.fits {
        fits.push(vec![Cell::from(f.order), Cell::from(f.slope), Cell::from(f.points)]);
    }
    let mut r = Report::new("study", t);
    r.summary = Some(fits);
    r.param("kind", a.kind.name());
    r.param("nu", a.nu);
    r.param("delta", a.delta);
    r.param("orders", &a.orders);
    r.param("k", &a.k);
    Ok((r, None))
}

fn write_output(cli: &Cli, report: &Report, export: Option<String>) -> Result<(), Failure> {
    let text = match export {
        Some(doc) => doc,
        None if cli.json || cli.format == Format::Json => report.to_json(),
        None => report.to_csv(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut export = None;
    let (report, failure) = match &cli.command {
        Command::Expand(a) => {
            let outcome = expand(a)?;
            if a.export {
                let table = expansion_table(a.kind.zero_kind(), a.order)?;
                let mut doc = serde_json::to_string_pretty(&table.export()).expect("serializable");
                doc.push('\n');
                export = Some(doc);
            }
            outcome
        }
        Command::Zeros(a) => zeros(a)?,
        Command::Verify(a) => verify(a)?,
        Command::Study(a) => study(a)?,
    };
    write_output(cli, &report, export)?;
    match failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
