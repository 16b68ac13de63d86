use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use curvecount::conics::ConicEvaluator;
use curvecount::fbcubic::{self, CubicCounts};
use curvecount::planar::{CountQuery, InvariantKind};
use curvecount::spaces::{self, SpaceKind};
use curvecount::verify::{self, Verifier};
use curvecount::{format_rational, Error};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "curvecount", version, about = "Enumerative counts of singular plane curves and planar cubics in P3")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Counts of plane curves with one prescribed singularity or tangency.
    PlanarTable {
        /// Comma-separated kinds: a1, a1l, a2, t1, t1pt, t2, smooth.
        #[arg(long, value_delimiter = ',', default_value = "a1,a1l,a2,t1,t1pt,t2")]
        kinds: Vec<InvariantKind>,
        #[arg(long, default_value_t = 2)]
        d_min: u32,
        #[arg(long, default_value_t = 8)]
        d_max: u32,
        /// Require this many of the line points to lie on the fixed line.
        #[arg(long)]
        line_points: Option<u32>,
    },
    /// Characteristic numbers of nodal planar cubics in P3.
    CubicP3 {
        #[arg(long, requires = "s", conflicts_with_all = ["table", "verify"])]
        r: Option<u32>,
        #[arg(long, requires = "r")]
        s: Option<u32>,
        /// All nonzero characteristic numbers.
        #[arg(long, conflicts_with = "verify")]
        table: bool,
        /// Run the full consistency suite.
        #[arg(long)]
        verify: bool,
        /// Strategy for the unknown pairings.
        #[arg(long, default_value = "descent")]
        solver: String,
    },
    /// Integral of a monomial over a parameter space.
    RingEval {
        /// cubic, conic or three-lines.
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// For example `a^3*l1^2*l3^9`.
        #[arg(long)]
        monomial: String,
    },
    /// Pairing of a boundary class with a monomial.
    ConicEval {
        /// r3, r4:1, r4:2, r4:3, ra1f or rt1.
        #[arg(long)]
        which: String,
        /// Monomial in the class's ring or in the cubic-family classes.
        #[arg(long)]
        mu: String,
    },
    /// Run the full consistency suite.
    Verify,
}

#[derive(Serialize)]
struct PlanarRow {
    kind: String,
    d: u32,
    value: String,
}

#[derive(Serialize)]
struct CubicRow {
    r: u32,
    s: u32,
    value: String,
}

#[derive(Serialize)]
struct RingRow {
    space: String,
    monomial: String,
    normal_form: String,
    value: String,
}

#[derive(Serialize)]
struct ConicRow {
    class: String,
    mu: String,
    value: String,
}

#[derive(Serialize)]
struct CheckRow {
    id: u32,
    name: String,
    passed: bool,
    detail: String,
}

enum Failure {
    Usage(String),
    Consistency(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Solver(_) | Error::Consistency(_) => Failure::Consistency(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn emit<T: Serialize>(format: Format, rows: &[T]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Usage(format!("write failed: {e}"));
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => {
            let text = if rows.len() == 1 { serde_json::to_string(&rows[0]) } else { serde_json::to_string_pretty(rows) };
            writeln!(out, "{}", text.expect("rows serialize")).map_err(io)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(|e| Failure::Usage(format!("write failed: {e}")))?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

fn planar_table(format: Format, kinds: &[InvariantKind], d_min: u32, d_max: u32, k: Option<u32>) -> Result<(), Failure> {
    if d_min > d_max {
        return Err(Failure::Usage(format!("--d-min {d_min} exceeds --d-max {d_max}")));
    }
    let mut rows = Vec::new();
    for &kind in kinds {
        for d in d_min..=d_max {
            let value = CountQuery::new(kind, d, k)?.evaluate()?;
            rows.push(PlanarRow { kind: kind.name().to_string(), d, value: value.to_string() });
        }
    }
    emit(format, &rows)
}

fn cubic_p3(format: Format, pair: Option<(u32, u32)>, solver: &str) -> Result<(), Failure> {
    let owned;
    let counts = if solver == "descent" {
        fbcubic::shared()?
    } else {
        owned = CubicCounts::solve_with(solver)?;
        &owned
    };
    let pairs: Vec<(u32, u32)> = match pair {
        Some(p) => vec![p],
        None => verify::TABLE2.iter().map(|&(p, _)| p).collect(),
    };
    let rows = pairs
        .into_iter()
        .map(|(r, s)| Ok(CubicRow { r, s, value: counts.characteristic_number(r, s)?.to_string() }))
        .collect::<Result<Vec<_>, Error>>()?;
    emit(format, &rows)
}

fn run_verify(format: Format) -> Result<(), Failure> {
    let verifier = Verifier::new();
    let results = verifier.run_all();
    eprintln!("{}", verifier.recursion_report());
    let rows: Vec<CheckRow> = results
        .iter()
        .map(|c| CheckRow { id: c.id, name: c.name.to_string(), passed: c.passed, detail: c.detail.clone() })
        .collect();
    emit(format, &rows)?;
    let failed: Vec<String> = results.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Consistency(format!("checks failed: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::PlanarTable { kinds, d_min, d_max, line_points } => planar_table(format, &kinds, d_min, d_max, line_points),
        Command::CubicP3 { verify: true, .. } | Command::Verify => run_verify(format),
        Command::CubicP3 { r: Some(r), s: Some(s), solver, .. } => cubic_p3(format, Some((r, s)), &solver),
        Command::CubicP3 { table: true, solver, .. } => cubic_p3(format, None, &solver),
        Command::CubicP3 { .. } => Err(Failure::Usage("cubic-p3 needs --r and --s, --table or --verify".into())),
        Command::RingEval { space, m, n, monomial } => {
            let kind = SpaceKind::from_name(&space, m, n)?;
            let ring = spaces::build_ring(kind)?;
            let mono = ring.parse_monomial(&monomial)?;
            let normal = ring.normalize(&mono.clone().into())?;
            let value = ring.integrate(&normal);
            let row = RingRow {
                space: kind.to_string(),
                monomial: ring.format_monomial(&mono),
                normal_form: ring.format_element(&normal),
                value: format_rational(&value),
            };
            emit(format, &[row])
        }
        Command::ConicEval { which, mu } => {
            let value = ConicEvaluator::new()?.pair_monomial(&which, &mu)?;
            emit(format, &[ConicRow { class: which, mu, value: format_rational(&value) }])
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Consistency(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
