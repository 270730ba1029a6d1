use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use candeg::bounds::{self, Case, Status, SurfaceRecord};
use candeg::catalog::{self, CatalogEntry, EntryKind};
use candeg::expr::Params;
use candeg::genpair;
use candeg::run::{run, RunReport, Verb};
use candeg::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// `println!` that exits quietly when stdout is a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout().lock(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "candeg",
    version,
    about = "Abelian covers and the degree of the canonical map"
)]
struct Cli {
    /// Catalog directory or file (defaults to the built-in catalog).
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// `report` prints mismatches but exits 0 for them.
    #[arg(long, global = true, value_enum, default_value_t = ExpectMode::Strict)]
    expect: ExpectMode,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectMode {
    Strict,
    Report,
}

#[derive(Subcommand)]
enum Cmd {
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Building data checks: fundamental relations, smoothness, L_chi.
    Verify(EntryArgs),
    /// K^2, pg, q of a cover.
    Invariants(EntryArgs),
    /// Canonical decomposition, factorization and base locus.
    Canonical(EntryArgs),
    /// Invariants of X_n for a generating pair.
    Genpair {
        id: String,
        #[arg(long)]
        n: i64,
    },
    /// Inequality checks and feasibility tables.
    Bounds {
        #[command(subcommand)]
        cmd: BoundsCmd,
    },
    /// Every applicable verb on the given entries (or all of them).
    Run {
        ids: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    /// Print an entry as JSON.
    Show {
        id: String,
    },
}

#[derive(Args)]
struct EntryArgs {
    id: String,
    /// Parameter override, e.g. `--param m=3`.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, i64)>,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Check a record: a catalog id, a JSON file, or inline JSON.
    Check { record: String },
    /// Largest admissible pg for each degree.
    Enumerate {
        #[arg(long, value_parser = parse_case)]
        case: Case,
        #[arg(long, value_parser = parse_range, default_value = "2..9")]
        d: RangeInclusive<i64>,
        #[arg(long, default_value_t = 0)]
        q: i64,
        #[arg(long, default_value_t = 0)]
        q_sigma: i64,
        #[arg(long, default_value_t = 200)]
        pg_max: i64,
    },
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s}"))?;
    let v = v
        .trim()
        .parse()
        .map_err(|_| format!("{v} is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_case(s: &str) -> Result<Case, String> {
    s.parse()
        .map_err(|_| format!("case must be A or B, got {s}"))
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let bad = || format!("expected a..b or a single degree, got {s}");
    match s.split_once("..") {
        Some((a, b)) => {
            let a = a.parse().map_err(|_| bad())?;
            let b = b.trim_start_matches('=').parse().map_err(|_| bad())?;
            Ok(a..=b)
        }
        None => {
            let d = s.parse().map_err(|_| bad())?;
            Ok(d..=d)
        }
    }
}

struct Ctx {
    format: Format,
    expect: ExpectMode,
}

impl Ctx {
    fn emit(&self, report: &RunReport) -> i32 {
        match self.format {
            Format::Text => out!("{}", report.to_string().trim_end()),
            Format::Machine => out!("{}", serde_json::to_string(report).expect("serializable")),
        }
        if let (Some(e), Format::Machine) = (&report.error, self.format) {
            eprintln!("error: {e}");
        }
        match (report.exit, self.expect) {
            (1, ExpectMode::Report) => 0,
            (c, _) => c,
        }
    }
}

fn load(path: Option<&Path>) -> Result<Vec<CatalogEntry>, Error> {
    match path {
        Some(p) => catalog::load_catalog(p),
        None => Ok(catalog::builtin()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn dispatch(cli: &Cli) -> Result<i32, Error> {
    let ctx = Ctx {
        format: cli.format,
        expect: cli.expect,
    };
    let entries = load(cli.catalog.as_deref())?;
    let single = |a: &EntryArgs, verbs: &[Verb]| -> Result<i32, Error> {
        let e = catalog::find(&entries, &a.id)?;
        let params: Params = a.params.iter().cloned().collect();
        Ok(ctx.emit(&run(e, verbs, &params)))
    };
    match &cli.cmd {
        Cmd::Catalog {
            cmd: CatalogCmd::List,
        } => {
            for e in &entries {
                let params: Vec<String> = e
                    .params
                    .iter()
                    .map(|(k, p)| format!("{k}={}", p.default))
                    .collect();
                match ctx.format {
                    Format::Text => out!(
                        "{:<26} {:<16} {}{}",
                        e.id,
                        kind_name(e.kind),
                        e.title,
                        if params.is_empty() {
                            String::new()
                        } else {
                            format!(" [{}]", params.join(", "))
                        }
                    ),
                    Format::Machine => out!(
                        "{}",
                        json!({"id": e.id, "kind": e.kind, "title": e.title, "params": e.params})
                    ),
                }
            }
            Ok(0)
        }
        Cmd::Catalog {
            cmd: CatalogCmd::Show { id },
        } => {
            let e = catalog::find(&entries, id)?;
            let text = match ctx.format {
                Format::Text => serde_json::to_string_pretty(e),
                Format::Machine => serde_json::to_string(e),
            };
            out!("{}", text.expect("serializable"));
            Ok(0)
        }
        Cmd::Verify(a) => single(a, &[Verb::Verify]),
        Cmd::Invariants(a) => single(a, &[Verb::Invariants]),
        Cmd::Canonical(a) => single(a, &[Verb::Canonical]),
        Cmd::Genpair { id, n } => {
            let e = catalog::find(&entries, id)?;
            let p = e
                .pair
                .as_ref()
                .ok_or_else(|| Error::Schema(format!("{id} is not a generating pair")))?;
            let s = genpair::sequence(p, *n)
                .map_err(|err| Error::GeneratingPair(format!("{id}: {err}")))?;
            let verdicts = bounds::check(&s.record());
            let limit = genpair::slope_limit(p);
            match ctx.format {
                Format::Text => {
                    out!("{id} n={n}");
                    out!("  pg {}  q(X) {}  q(Sigma) {}", s.pg, s.q_x, s.q_sigma);
                    out!(
                        "  K^2(X) {}  K^2(Sigma) {}  chi(X) {}",
                        s.k2_x,
                        s.k2_sigma,
                        s.chi_x()
                    );
                    out!("  canonical degree {} case {}", s.degree, s.case);
                    out!("  slope limit {limit}");
                    for v in &verdicts {
                        out!("  {v}");
                    }
                }
                Format::Machine => out!(
                    "{}",
                    json!({
                        "id": id, "sequence": s,
                        "slope_limit": [limit.numer(), limit.denom()],
                        "verdicts": verdicts,
                    })
                ),
            }
            Ok(fail_code(&verdicts))
        }
        Cmd::Bounds {
            cmd: BoundsCmd::Check { record },
        } => {
            let (name, rec) = resolve_record(&entries, record)?;
            let verdicts = bounds::check(&rec);
            match ctx.format {
                Format::Text => {
                    out!(
                        "{name}: case {} d={} pg={} q(X)={} q(Sigma)={}{}",
                        rec.case,
                        rec.d,
                        rec.pg,
                        rec.q_x,
                        rec.q_sigma,
                        rec.k2.map_or(String::new(), |k| format!(" K^2={k}"))
                    );
                    for v in &verdicts {
                        out!("  {v}");
                    }
                    if let Some(m) = bounds::max_degree(rec.case, rec.pg, rec.q_x, rec.q_sigma) {
                        out!("  max degree for these pg, q: {m}");
                    }
                }
                Format::Machine => out!(
                    "{}",
                    json!({
                        "record": name, "input": rec, "verdicts": verdicts,
                        "max_degree": bounds::max_degree(rec.case, rec.pg, rec.q_x, rec.q_sigma),
                    })
                ),
            }
            Ok(fail_code(&verdicts))
        }
        Cmd::Bounds {
            cmd:
                BoundsCmd::Enumerate {
                    case,
                    d,
                    q,
                    q_sigma,
                    pg_max,
                },
        } => {
            let rows = bounds::enumerate_feasible(*case, d.clone(), *q, *q_sigma, *pg_max);
            match ctx.format {
                Format::Text => {
                    out!("case {case}, q(X)={q}, q(Sigma)={q_sigma}, pg <= {pg_max}");
                    out!("  {:>3}  {:>8}  {:>9}", "d", "max pg", "published");
                    for r in &rows {
                        let max = match (r.max_pg, r.unbounded) {
                            (_, true) => format!(">= {pg_max}"),
                            (Some(p), false) => p.to_string(),
                            (None, false) => "none".into(),
                        };
                        let publ = r.published.map_or("-".into(), |p| p.to_string());
                        let flag = if r.discrepancy { "  discrepancy" } else { "" };
                        out!("  {:>3}  {max:>8}  {publ:>9}{flag}", r.d);
                    }
                }
                Format::Machine => {
                    for r in &rows {
                        out!("{}", serde_json::to_string(r).expect("serializable"));
                    }
                }
            }
            Ok(0)
        }
        Cmd::Run { ids, all, params } => {
            let params: Params = params.iter().cloned().collect();
            let chosen: Vec<&CatalogEntry> = if *all || ids.is_empty() {
                entries.iter().collect()
            } else {
                ids.iter()
                    .map(|id| catalog::find(&entries, id))
                    .collect::<Result<_, _>>()?
            };
            let mut worst = 0;
            for e in chosen {
                // overrides apply only where the entry declares the parameter
                let own: Params = params
                    .iter()
                    .filter(|(k, _)| e.params.contains_key(*k))
                    .map(|(k, v)| (k.clone(), *v))
                    .collect();
                worst = worst.max(ctx.emit(&run(e, &Verb::ALL, &own)));
            }
            Ok(worst)
        }
    }
}

fn kind_name(k: EntryKind) -> &'static str {
    match k {
        EntryKind::AbelianCover => "abelian_cover",
        EntryKind::GeneratingPair => "generating_pair",
        EntryKind::RecordOnly => "record_only",
    }
}

fn fail_code(verdicts: &[bounds::Verdict]) -> i32 {
    i32::from(verdicts.iter().any(|v| v.status == Status::Fail))
}

fn resolve_record(entries: &[CatalogEntry], arg: &str) -> Result<(String, SurfaceRecord), Error> {
    let parse = |text: &str, name: &str| -> Result<SurfaceRecord, Error> {
        let r: SurfaceRecord =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("{name}: {e}")))?;
        if let Some(p) = r.problems().first() {
            return Err(Error::Schema(format!("{name}: {p}")));
        }
        Ok(r)
    };
    if arg.trim_start().starts_with('{') {
        return Ok(("inline".into(), parse(arg, "inline record")?));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
        return Ok((arg.to_string(), parse(&text, arg)?));
    }
    let e = catalog::find(entries, arg)?;
    match &e.record {
        Some(r) => Ok((e.id.clone(), r.clone())),
        None => Err(Error::Schema(format!(
            "{arg} is not a record; use `candeg run {arg}` for covers and pairs"
        ))),
    }
}
