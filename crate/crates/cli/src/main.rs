//! `codebounds`: certified upper bounds on binary code sizes from the command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use codebounds::bounds::{BoundEngine, BoundRecord, Method, Mode};
use codebounds::cw::CwProvider;
use codebounds::holes::{verify_identities, ExplicitCode};
use codebounds::lp::{self, build_lp_even, LinearProgram};
use codebounds::oracle;
use codebounds::scalar::{int, to_text};
use codebounds::table::{FailureKind, Table, TableSpec};
use codebounds::Error;

#[derive(Parser)]
#[command(name = "codebounds", version, about = "Certified upper bounds on binary code sizes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Table file layered over the shipped defaults; later files override earlier ones.
    #[arg(long = "tables", value_name = "FILE", global = true)]
    tables: Vec<PathBuf>,
    /// Start from an empty table instead of the shipped one.
    #[arg(long, global = true)]
    no_default_table: bool,
    /// Abort when a formula input has no pinned source.
    #[arg(long, global = true, conflicts_with = "permissive")]
    strict: bool,
    /// Accept fallback inputs and mark the record non-reproducing (default).
    #[arg(long, global = true)]
    permissive: bool,
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Vertex budget for exhaustive searches.
    #[arg(long, value_name = "N", global = true)]
    budget: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute bounds at one parameter set.
    Bound {
        /// Method id or alias; repeatable.
        #[arg(long = "method", required = true)]
        methods: Vec<String>,
        #[arg(short = 'n')]
        n: u32,
        /// Hamming distance.
        #[arg(short = 'd')]
        d: u32,
        /// Weight, for constant-weight methods.
        #[arg(short = 'w')]
        w: Option<u32>,
        /// Write the LP certificate(s) here as JSON.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
    },
    /// Compare methods over a range of lengths.
    Table {
        /// Method id, alias or `all`; repeatable. Defaults to every applicable method.
        #[arg(long = "method")]
        methods: Vec<String>,
        #[arg(long, value_name = "A..B")]
        n_range: String,
        #[arg(short = 'd')]
        d: u32,
        #[arg(short = 'w')]
        w: Option<u32>,
        /// Compute cells on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Check the hole identities on an explicit code file.
    Verify {
        file: PathBuf,
        /// Packing radius; inferred from the minimum distance when omitted.
        #[arg(short = 'e')]
        e: Option<u32>,
    },
    /// Exact values by exhaustive clique search.
    Oracle {
        #[arg(long, requires_all = ["n", "d"], conflicts_with_all = ["exact_cw", "exact_t"])]
        exact_a: bool,
        #[arg(long, requires_all = ["n", "d", "w"], conflicts_with = "exact_t")]
        exact_cw: bool,
        /// `w1,n1,w2,n2,d`.
        #[arg(long, value_name = "W1,N1,W2,N2,D")]
        exact_t: Option<String>,
        #[arg(short = 'n')]
        n: Option<u32>,
        #[arg(short = 'd')]
        d: Option<u32>,
        #[arg(short = 'w')]
        w: Option<u32>,
    },
    /// Solve linear programs exactly.
    Lp {
        /// Maximize the weight-4 entry of the parity-extended distance-4 program.
        #[arg(long, requires = "ntilde", conflicts_with = "solve")]
        max_a4: bool,
        #[arg(long, value_name = "N")]
        ntilde: Option<u32>,
        /// Solve a program in the rational-text JSON schema.
        #[arg(long, value_name = "FILE")]
        solve: Option<PathBuf>,
        /// Write the solution with its dual certificate here.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::LpStatus(_) => 3,
            Error::MissingTableEntry(_) => 4,
            Error::Certificate(_) | Error::Duality(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    if let Some(b) = c.budget {
        if b > oracle::HARD_CEILING {
            return Err(invalid(format!("budget {b} exceeds the ceiling {}", oracle::HARD_CEILING)));
        }
    }
    match &cli.command {
        Command::Bound {
            methods,
            n,
            d,
            w,
            certificate,
        } => cmd_bound(c, methods, *n, *d, *w, certificate.as_deref()),
        Command::Table {
            methods,
            n_range,
            d,
            w,
            sequential,
        } => cmd_table(c, methods, n_range, *d, *w, !*sequential),
        Command::Verify { file, e } => cmd_verify(c, file, *e),
        Command::Oracle {
            exact_a,
            exact_cw,
            exact_t,
            n,
            d,
            w,
        } => cmd_oracle(c, *exact_a, *exact_cw, exact_t.as_deref(), *n, *d, *w),
        Command::Lp {
            max_a4,
            ntilde,
            solve,
            certificate,
        } => cmd_lp(c, *max_a4, *ntilde, solve.as_deref(), certificate.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn engine(c: &Common) -> Result<BoundEngine, Failure> {
    let mut provider = if c.no_default_table {
        CwProvider::empty()
    } else {
        CwProvider::with_default_table()
    };
    for path in &c.tables {
        provider
            .load_str(&read(path)?)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    if let Some(b) = c.budget {
        provider.clique_budget = b;
    }
    let mode = if c.strict { Mode::Strict } else { Mode::Permissive };
    Ok(BoundEngine::new(provider, mode))
}

fn parse_methods(ids: &[String]) -> Result<Vec<Method>, Failure> {
    let mut out = Vec::new();
    for id in ids {
        if id == "all" {
            out.extend(Method::ALL);
        } else {
            out.push(id.parse::<Method>()?);
        }
    }
    let mut seen = Vec::new();
    out.retain(|m| {
        let fresh = !seen.contains(m);
        seen.push(*m);
        fresh
    });
    Ok(out)
}

fn render_record(r: &BoundRecord) -> String {
    let mut s = String::new();
    let params = match r.w {
        Some(w) => format!("n={} d={} w={}", r.n, r.d, w),
        None => format!("n={} d={}", r.n, r.d),
    };
    writeln!(s, "method: {}  {params}", r.method).unwrap();
    writeln!(s, "bound: {}", r.bound).unwrap();
    writeln!(s, "exact: {}", to_text(&r.exact_value)).unwrap();
    writeln!(s, "reproducing: {}", r.reproducing).unwrap();
    for i in &r.inputs {
        let role = if i.formula { "input" } else { "cap" };
        writeln!(s, "{role}: {} = {} [{}]", i.key, i.value, i.provenance).unwrap();
    }
    if let Some(cert) = &r.certificate {
        writeln!(s, "lp optimum: {}", to_text(&cert.optimum)).unwrap();
    }
    s
}

fn cmd_bound(c: &Common, ids: &[String], n: u32, d: u32, w: Option<u32>, cert: Option<&Path>) -> Outcome {
    let methods = parse_methods(ids)?;
    let engine = engine(c)?;
    let mut records = Vec::new();
    for m in methods {
        records.push(engine.compute(m, n, d, w)?);
    }
    if let Some(path) = cert {
        let certs: Vec<_> = records.iter().filter_map(|r| r.certificate.as_ref()).collect();
        write(path, &serde_json::to_string_pretty(&certs).expect("certificates serialize"))?;
    }
    let out = match c.format {
        Format::Json => serde_json::to_string_pretty(&records).expect("records serialize") + "\n",
        Format::Csv => {
            let mut s = String::from("method,n,d,w,bound,exact,reproducing\n");
            for r in &records {
                let w = r.w.map(|w| w.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{w},{},{},{}",
                    r.method,
                    r.n,
                    r.d,
                    r.bound,
                    to_text(&r.exact_value),
                    r.reproducing
                )
                .unwrap();
            }
            s
        }
        Format::Plain => {
            let mut s = records.iter().map(render_record).collect::<Vec<_>>().join("\n");
            if let Some(path) = cert {
                writeln!(s, "certificate: {}", path.display()).unwrap();
            }
            s
        }
    };
    Ok((out, 0))
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<u32>, Failure> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| invalid(format!("range {text:?} is not of the form A..B")))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let num = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| invalid(format!("bad range bound {s:?}")))
    };
    let r = num(a)?..=num(b)?;
    if r.is_empty() {
        return Err(invalid(format!("range {text} is empty")));
    }
    Ok(r)
}

fn cmd_table(c: &Common, ids: &[String], range: &str, d: u32, w: Option<u32>, parallel: bool) -> Outcome {
    let n_range = parse_range(range)?;
    let methods = if ids.is_empty() {
        Method::ALL
            .into_iter()
            .filter(|m| m.is_constant_weight() == w.is_some())
            .collect()
    } else {
        parse_methods(ids)?
    };
    let engine = engine(c)?;
    let spec = TableSpec { d, w, n_range, methods };
    let table = Table::compute(&engine, &spec, parallel)?;
    let out = match c.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
        Format::Plain => table.to_plain(),
    };
    let code = match (engine.mode, table.first_failure()) {
        (Mode::Strict, Some((n, m, kind, reason))) => {
            eprintln!("error: n={n} {m}: {reason}");
            match kind {
                FailureKind::MissingInput => 4,
                FailureKind::Lp => 3,
                _ => 2,
            }
        }
        _ => 0,
    };
    Ok((out, code))
}

fn cmd_verify(c: &Common, file: &Path, e: Option<u32>) -> Outcome {
    let (n, words) = ExplicitCode::parse(&read(file)?)?;
    let code = match e {
        Some(e) => ExplicitCode::new(n, words, e)?,
        None => ExplicitCode::with_inferred_radius(n, words, 1)?,
    };
    let r = verify_identities(&code)?;
    let out = match c.format {
        Format::Json => serde_json::to_string_pretty(&r).expect("report serializes") + "\n",
        _ => {
            let mut s = String::new();
            writeln!(s, "code: n={} M={} e={}", r.n, r.code_size, r.e).unwrap();
            writeln!(s, "holeCount: {} (predicted {})", r.hole_count, r.predicted_hole_count).unwrap();
            let deltas: Vec<String> = r
                .from_distribution
                .iter()
                .zip(&r.brute_force)
                .map(|(f, b)| {
                    let f = codebounds::scalar::parse(f).expect("own output parses");
                    to_text(&(f - int(*b as i64)))
                })
                .collect();
            writeln!(s, "D brute force: {:?}", r.brute_force).unwrap();
            writeln!(s, "D deltas (distribution formula): [{}]", deltas.join(", ")).unwrap();
            let nc_ok = r
                .from_nc
                .iter()
                .zip(&r.brute_force)
                .all(|(l, b)| *l == b.to_string());
            writeln!(s, "D from NC totals agrees: {nc_ok}").unwrap();
            writeln!(s, "sum D = holeCount^2: {}", r.sum_is_square).unwrap();
            for (t, got, want) in &r.e_classes {
                writeln!(s, "|E_(n-{t})|: {got} (predicted {want})").unwrap();
            }
            writeln!(s, "all identities hold: {}", r.holds).unwrap();
            s
        }
    };
    Ok((out, if r.holds { 0 } else { 1 }))
}

fn cmd_oracle(
    c: &Common,
    exact_a: bool,
    exact_cw: bool,
    exact_t: Option<&str>,
    n: Option<u32>,
    d: Option<u32>,
    w: Option<u32>,
) -> Outcome {
    let (label, value) = if exact_a {
        let (n, d) = (n.unwrap_or(0), d.unwrap_or(0));
        let budget = c.budget.unwrap_or(oracle::DEFAULT_WORD_BUDGET);
        (format!("A({n},{d})"), oracle::exact_a(n, d, budget)?)
    } else if exact_cw {
        let (n, d, w) = (n.unwrap_or(0), d.unwrap_or(0), w.unwrap_or(0));
        let budget = c.budget.unwrap_or(oracle::DEFAULT_BUDGET);
        (format!("A({n},{d},{w})"), oracle::exact_cw(n, d, w, budget)?)
    } else if let Some(spec) = exact_t {
        let p: Vec<u32> = spec
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| invalid(format!("bad T parameters {spec:?}")))?;
        let [w1, n1, w2, n2, d] = p[..] else {
            return Err(invalid("T needs five parameters w1,n1,w2,n2,d"));
        };
        let budget = c.budget.unwrap_or(oracle::DEFAULT_BUDGET);
        (
            format!("T({w1},{n1},{w2},{n2},{d})"),
            oracle::exact_t(w1, n1, w2, n2, d, budget)?,
        )
    } else {
        return Err(invalid("choose one of --exact-a, --exact-cw, --exact-t"));
    };
    let out = match c.format {
        Format::Json => format!("{{\"quantity\":\"{label}\",\"value\":{value}}}\n"),
        Format::Csv => format!("quantity,value\n\"{label}\",{value}\n"),
        Format::Plain => format!("{value}\n"),
    };
    Ok((out, 0))
}

fn cmd_lp(c: &Common, max_a4: bool, ntilde: Option<u32>, solve: Option<&Path>, cert: Option<&Path>) -> Outcome {
    let program = if max_a4 {
        let nt = ntilde.expect("clap enforces --ntilde");
        let provider = engine(c)?.provider;
        let mut dl = build_lp_even(nt, 1, &provider, &[])?;
        dl.program.objective[4] = int(1);
        dl.program
    } else if let Some(path) = solve {
        LinearProgram::from_json(&read(path)?)?
    } else {
        return Err(invalid("choose --max-a4 or --solve FILE"));
    };
    let sol = lp::solve(&program)?;
    if let Some(path) = cert {
        write(path, &sol.to_json())?;
    }
    let value = sol.optimum()?;
    let out = match c.format {
        Format::Json => sol.to_json() + "\n",
        Format::Csv => format!("optimum\n{}\n", to_text(value)),
        Format::Plain => format!("{}\n", to_text(value)),
    };
    Ok((out, 0))
}
