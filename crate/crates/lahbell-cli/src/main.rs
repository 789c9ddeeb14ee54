//! Command-line front end: tables, polynomials, the identity suite, series
//! evaluation, and Monte Carlo validation.
//!
//! Exit status is the machine contract: 0 on success, 1 when a check or a
//! Monte Carlo cell fails (with the witness printed), 2 on usage errors and
//! malformed specs.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lahbell::classical;
use lahbell::dist::DistributionSpec;
use lahbell::identity::{check_all_with_context, CheckReport, CheckStatus, Witness, WitnessValue};
use lahbell::montecarlo::{sweep, SimConfig, SweepCell};
use lahbell::problah::ProbLahContext;
use lahbell::Rational;

#[derive(Parser)]
#[command(
    name = "lahbell",
    version,
    about = "Exact tables, polynomials, and identity checks for Lah-Bell numbers weighted by a random variable"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassicalKind {
    /// Unsigned Lah triangle L(n,k)
    Lah,
    /// Stirling numbers of the second kind S(n,k)
    Stirling2,
}

#[derive(Subcommand)]
enum Command {
    /// Print a number triangle: weighted L_Y(n,k) for a spec, or a classical one
    Table {
        /// Classical triangle to print instead of a spec-weighted one
        #[arg(long, value_enum, conflicts_with = "spec")]
        classical: Option<ClassicalKind>,
        /// Distribution as inline JSON or a path to a JSON file
        #[arg(long)]
        spec: Option<String>,
        /// Largest row index
        #[arg(long)]
        n: usize,
    },
    /// Print the coefficients of B_n(x), optionally evaluated at points
    Poly {
        /// Distribution as inline JSON or a path to a JSON file
        #[arg(long)]
        spec: String,
        /// Polynomial index n
        #[arg(long)]
        n: usize,
        /// Evaluation points (rationals like 3 or -1/2); repeatable
        #[arg(long = "x", value_name = "RATIONAL")]
        xs: Vec<String>,
    },
    /// Run the identity suite and print one report per check
    Verify {
        /// Distribution as inline JSON or a path to a JSON file
        #[arg(long, conflicts_with = "battery")]
        spec: Option<String>,
        /// Run over the built-in battery of seven specs
        #[arg(long)]
        battery: bool,
        /// Largest index swept by every check
        #[arg(long = "n-max", default_value_t = 10)]
        n_max: usize,
        /// Test hook: add 1 to triangle entry "n,k" before checking
        #[arg(long, hide = true, value_name = "N,K")]
        corrupt: Option<String>,
    },
    /// Evaluate the truncated series for B_n(x) and report terms used
    Dobinski {
        /// Distribution as inline JSON or a path to a JSON file
        #[arg(long)]
        spec: String,
        /// Polynomial index n
        #[arg(long)]
        n: usize,
        /// Evaluation points (nonnegative rationals); repeatable
        #[arg(long = "x", value_name = "RATIONAL", required = true)]
        xs: Vec<String>,
        /// Stop once three consecutive terms fall below this
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Monte Carlo sweep of E[<S_k>_n] against exact values
    Mc {
        /// Distribution as inline JSON or a path to a JSON file
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long = "k-max", default_value_t = 5)]
        k_max: usize,
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
    },
}

fn main() -> ExitCode {
    // die quietly on a closed pipe (e.g. `lahbell ... | head`) instead of
    // panicking mid-print
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Ok(true) for a clean run, Ok(false) when a check or cell failed (exit 1),
/// Err for usage problems (exit 2).
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Table { classical, spec, n } => run_table(cli.format, classical, spec, n),
        Command::Poly { spec, n, xs } => run_poly(cli.format, &spec, n, &xs),
        Command::Verify {
            spec,
            battery,
            n_max,
            corrupt,
        } => run_verify(cli.format, spec, battery, n_max, corrupt),
        Command::Dobinski { spec, n, xs, tol } => run_dobinski(cli.format, &spec, n, &xs, tol),
        Command::Mc {
            spec,
            seed,
            samples,
            k_max,
            n_max,
        } => run_mc(cli.format, &spec, seed, samples, k_max, n_max),
    }
}

/// Inline JSON if the argument starts with '{', otherwise a file path.
fn load_spec(source: &str) -> Result<DistributionSpec, String> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        std::fs::read_to_string(source)
            .map_err(|e| format!("cannot read spec file {source}: {e}"))?
    };
    let spec: DistributionSpec =
        serde_json::from_str(&text).map_err(|e| format!("malformed spec: {e}"))?;
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    text.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TableOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    classical: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spec: Option<DistributionSpec>,
    rows: Vec<Vec<Rational>>,
}

fn run_table(
    format: Format,
    classical: Option<ClassicalKind>,
    spec: Option<String>,
    n: usize,
) -> Result<bool, String> {
    let output = match (classical, spec) {
        (Some(kind), None) => {
            let table = match kind {
                ClassicalKind::Lah => classical::lah_triangle(n),
                ClassicalKind::Stirling2 => classical::stirling2_triangle(n),
            };
            TableOutput {
                classical: Some(match kind {
                    ClassicalKind::Lah => "lah",
                    ClassicalKind::Stirling2 => "stirling2",
                }),
                spec: None,
                rows: collect_rows(&table, n),
            }
        }
        (None, Some(source)) => {
            let spec = load_spec(&source)?;
            let ctx = ProbLahContext::for_spec(&spec, n).map_err(|e| e.to_string())?;
            TableOutput {
                classical: None,
                spec: Some(spec),
                rows: collect_rows(ctx.table(), n),
            }
        }
        _ => return Err("pass exactly one of --classical or --spec".into()),
    };
    match format {
        Format::Pretty => {
            for row in &output.rows {
                println!("{}", join_rationals(row, " "));
            }
        }
        Format::Json => println!("{}", to_json(&output)?),
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            let mut header = vec!["n".to_string()];
            header.extend((0..=n).map(|k| k.to_string()));
            writer.write_record(&header).map_err(|e| e.to_string())?;
            for (row_n, row) in output.rows.iter().enumerate() {
                let mut record = vec![row_n.to_string()];
                record.extend(row.iter().map(Rational::to_string));
                record.extend(std::iter::repeat_n(String::new(), n - row_n));
                writer.write_record(&record).map_err(|e| e.to_string())?;
            }
            writer.flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(true)
}

fn collect_rows(table: &classical::TriangleTable, n: usize) -> Vec<Vec<Rational>> {
    (0..=n).map(|row| table.row(row).to_vec()).collect()
}

#[derive(Serialize)]
struct PolyOutput {
    spec: DistributionSpec,
    n: usize,
    coeffs: Vec<Rational>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    values: Vec<PolyValue>,
}

#[derive(Serialize)]
struct PolyValue {
    x: Rational,
    value: Rational,
}

fn run_poly(format: Format, source: &str, n: usize, xs: &[String]) -> Result<bool, String> {
    let spec = load_spec(source)?;
    let ctx = ProbLahContext::for_spec(&spec, n).map_err(|e| e.to_string())?;
    let poly = ctx.bell_poly(n).map_err(|e| e.to_string())?;
    let mut values = Vec::with_capacity(xs.len());
    for x in xs {
        let x = parse_rational(x)?;
        let value = poly.eval(&x);
        values.push(PolyValue { x, value });
    }
    // row(n) holds exactly the coefficients 0..=n, untrimmed
    let output = PolyOutput {
        spec,
        n,
        coeffs: ctx.table().row(n).to_vec(),
        values,
    };
    match format {
        Format::Pretty => {
            println!("{}", join_rationals(&output.coeffs, ", "));
            for v in &output.values {
                println!("B_{n}({}) = {}", v.x, v.value);
            }
        }
        Format::Json => println!("{}", to_json(&output)?),
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            writer.write_record(["i", "coeff"]).map_err(|e| e.to_string())?;
            for (i, c) in output.coeffs.iter().enumerate() {
                writer
                    .write_record([i.to_string(), c.to_string()])
                    .map_err(|e| e.to_string())?;
            }
            writer.flush().map_err(|e| e.to_string())?;
            if !output.values.is_empty() {
                println!();
                let mut writer = csv::Writer::from_writer(std::io::stdout());
                writer.write_record(["x", "value"]).map_err(|e| e.to_string())?;
                for v in &output.values {
                    writer
                        .write_record([v.x.to_string(), v.value.to_string()])
                        .map_err(|e| e.to_string())?;
                }
                writer.flush().map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(true)
}

fn run_verify(
    format: Format,
    source: Option<String>,
    battery: bool,
    n_max: usize,
    corrupt: Option<String>,
) -> Result<bool, String> {
    let specs = if battery {
        DistributionSpec::battery()
    } else {
        let source = source.ok_or("pass one of --spec or --battery")?;
        vec![load_spec(&source)?]
    };
    let corrupt = corrupt.map(|text| parse_corrupt(&text)).transpose()?;
    let mut reports: Vec<CheckReport> = Vec::new();
    for spec in &specs {
        let mut ctx = ProbLahContext::for_spec(spec, n_max).map_err(|e| e.to_string())?;
        if let Some((n, k)) = corrupt {
            if n > n_max || k > n {
                return Err(format!("corrupt target ({n},{k}) is outside the triangle"));
            }
            ctx.corrupt_entry(n, k);
        }
        reports.extend(check_all_with_context(&ctx, n_max).map_err(|e| e.to_string())?);
    }
    let all_ok = reports.iter().all(|r| r.status != CheckStatus::Fail);
    match format {
        Format::Pretty => {
            for r in &reports {
                println!("{:<6} {:<15} {}", r.theorem_id.label(), r.status, r.spec);
                for w in &r.witnesses {
                    println!("       first mismatch: {}", describe_witness(w));
                }
            }
            println!(
                "{}",
                if all_ok {
                    "all applicable checks pass"
                } else {
                    "FAILED: at least one check has a mismatch"
                }
            );
        }
        Format::Json => println!("{}", to_json(&reports)?),
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            writer
                .write_record(["theorem_id", "spec", "n_max", "status", "witness"])
                .map_err(|e| e.to_string())?;
            for r in &reports {
                let witness = match r.witnesses.first() {
                    Some(w) => serde_json::to_string(w).map_err(|e| e.to_string())?,
                    None => String::new(),
                };
                writer
                    .write_record([
                        r.theorem_id.label().to_string(),
                        r.spec.to_string(),
                        r.n_max.to_string(),
                        r.status.to_string(),
                        witness,
                    ])
                    .map_err(|e| e.to_string())?;
            }
            writer.flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(all_ok)
}

fn parse_corrupt(text: &str) -> Result<(usize, usize), String> {
    let (n, k) = text
        .split_once(',')
        .ok_or("corrupt target must be \"n,k\"")?;
    let n = n.trim().parse().map_err(|_| "corrupt target must be \"n,k\"")?;
    let k = k.trim().parse().map_err(|_| "corrupt target must be \"n,k\"")?;
    Ok((n, k))
}

fn describe_witness(w: &Witness) -> String {
    let mut out = format!("n={}", w.n);
    if let Some(k) = w.k {
        write!(out, " k={k}").unwrap();
    }
    if !w.at.is_empty() {
        write!(out, " at=[{}]", join_rationals(&w.at, ", ")).unwrap();
    }
    write!(
        out,
        " lhs={} rhs={}",
        describe_value(&w.lhs),
        describe_value(&w.rhs)
    )
    .unwrap();
    out
}

fn describe_value(v: &WitnessValue) -> String {
    match v {
        WitnessValue::Exact { value } => value.to_string(),
        WitnessValue::Poly { coeffs } => format!("[{}]", join_rationals(coeffs, ", ")),
        WitnessValue::Approx { value } => format!("{value:e}"),
    }
}

#[derive(Serialize)]
struct DobinskiRow {
    x: Rational,
    value: f64,
    terms: usize,
    exact: Rational,
    abs_err: f64,
}

fn run_dobinski(
    format: Format,
    source: &str,
    n: usize,
    xs: &[String],
    tol: f64,
) -> Result<bool, String> {
    let spec = load_spec(source)?;
    let ctx = ProbLahContext::for_spec(&spec, n).map_err(|e| e.to_string())?;
    let poly = ctx.bell_poly(n).map_err(|e| e.to_string())?;
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let x = parse_rational(x)?;
        let (series, terms) = ctx
            .dobinski_rational(n, &x, tol)
            .map_err(|e| e.to_string())?;
        let exact = poly.eval(&x);
        let abs_err = (&series - &exact).abs().to_f64();
        rows.push(DobinskiRow {
            x,
            value: series.to_f64(),
            terms,
            exact,
            abs_err,
        });
    }
    match format {
        Format::Pretty => {
            for r in &rows {
                println!(
                    "B_{n}({}) ~ {:.12} after {} terms (exact {}, |err| {:.3e})",
                    r.x, r.value, r.terms, r.exact, r.abs_err
                );
            }
        }
        Format::Json => println!("{}", to_json(&rows)?),
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            writer
                .write_record(["x", "value", "terms", "exact", "abs_err"])
                .map_err(|e| e.to_string())?;
            for r in &rows {
                writer
                    .write_record([
                        r.x.to_string(),
                        r.value.to_string(),
                        r.terms.to_string(),
                        r.exact.to_string(),
                        r.abs_err.to_string(),
                    ])
                    .map_err(|e| e.to_string())?;
            }
            writer.flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct McOutput {
    spec: DistributionSpec,
    seed: u64,
    samples: u64,
    cells: Vec<SweepCell>,
}

fn run_mc(
    format: Format,
    source: &str,
    seed: u64,
    samples: u64,
    k_max: usize,
    n_max: usize,
) -> Result<bool, String> {
    let spec = load_spec(source)?;
    let cfg = SimConfig::new(seed, samples, spec.clone()).map_err(|e| e.to_string())?;
    let cells = sweep(&cfg, k_max, n_max).map_err(|e| e.to_string())?;
    let all_ok = cells.iter().all(|c| c.ok);
    let output = McOutput {
        spec,
        seed,
        samples,
        cells,
    };
    match format {
        Format::Pretty => {
            println!(
                "{:>3} {:>3} {:>18} {:>18} {:>12} {:>8}  verdict",
                "k", "n", "exact", "estimate", "stderr", "z"
            );
            for c in &output.cells {
                println!(
                    "{:>3} {:>3} {:>18.6} {:>18.6} {:>12.6} {:>8.2}  {}",
                    c.k,
                    c.n,
                    c.exact,
                    c.estimate,
                    c.stderr,
                    c.z,
                    if c.ok { "ok" } else { "OUT OF BAND" }
                );
            }
        }
        Format::Json => println!("{}", to_json(&output)?),
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(std::io::stdout());
            writer
                .write_record([
                    "spec", "k", "n", "exact", "estimate", "stderr", "z-score", "verdict",
                ])
                .map_err(|e| e.to_string())?;
            for c in &output.cells {
                writer
                    .write_record([
                        output.spec.to_string(),
                        c.k.to_string(),
                        c.n.to_string(),
                        c.exact.to_string(),
                        c.estimate.to_string(),
                        c.stderr.to_string(),
                        c.z.to_string(),
                        (if c.ok { "ok" } else { "out-of-band" }).to_string(),
                    ])
                    .map_err(|e| e.to_string())?;
            }
            writer.flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(all_ok)
}

fn join_rationals(values: &[Rational], sep: &str) -> String {
    values
        .iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}
