//! Command-line front end: enumeration, counting, single-object mapping with
//! traces, verification sweeps and SVG rendering.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sppq::corr::{pstair_to_qtcpp, qtcpp_to_pstair, qtcpp_to_stair_even, qtcpp_to_stair_odd};
use sppq::espp_chain::{espp_chain, EsppLgv};
use sppq::paths::{render_svg, word_string, Graph, LatticePath, SvgOptions, Word};
use sppq::pipeline::{f_espp_stair, f_traced, s_set, Direction, SppQtcpp};
use sppq::pp::{enumerate, validate, Class, ClassTag, Kind, PlanePartition};
use sppq::signed::{HopCtx, Indexed, Side, Sijection, TraceHop};
use sppq::stair_chain::{down_encode, down_sink, stair_chain, up_encode, up_sink};
use sppq::tableaux::spp_split;
use sppq::verify::{run_suite, SuiteReport, SUITES};

#[derive(Parser)]
#[command(
    name = "sppq",
    version,
    about = "Symmetric and quasi-transpose-complementary plane partitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every member of a class in canonical order.
    Enumerate(ClassArgs),
    /// Count the members of a class.
    Count(ClassArgs),
    /// Map one partition (JSON on standard input or --in) to its image.
    Map(MapArgs),
    /// Run a verification suite; exits 1 on any failure.
    Verify(VerifyArgs),
    /// Draw the path encoding of a partition as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dir {
    Forward,
    Backward,
}

#[derive(Args)]
struct ClassArgs {
    /// SPP, eSPP, stairPP, pstairPP or QTCPP.
    #[arg(long)]
    class: String,
    #[arg(long)]
    n: usize,
    /// Bound for SPP, pstairPP and QTCPP.
    #[arg(long = "M")]
    big_m: Option<u32>,
    /// Bound for eSPP (entries at most 2m) and stairPP (entries at most m).
    #[arg(long = "m")]
    small_m: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, value_enum, default_value = "forward")]
    direction: Dir,
    /// Stop at an intermediate stage: `split` (marked staircase or split
    /// eSPP) or `factored` (indexed product of path words).
    #[arg(long)]
    to: Option<String>,
    /// Include the visited intermediate stages.
    #[arg(long)]
    trace: bool,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of the suite names, or `all`.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 0x5eed_2024)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// `levels` (default) or `columns` for staircase partitions.
    #[arg(long)]
    to: Option<String>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors in flags or input; reported with exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Enumerate(a) => {
            let tag = class_tag(&a)?;
            let all = enumerate(&tag).map_err(|e| usage(e.to_string()))?;
            for pi in &all {
                match a.format {
                    Format::Table => writeln!(out, "{pi}\n")?,
                    _ => writeln!(out, "{}", serde_json::to_string(pi)?)?,
                }
            }
        }
        Command::Count(a) => {
            let tag = class_tag(&a)?;
            let all = enumerate(&tag).map_err(|e| usage(e.to_string()))?;
            writeln!(out, "{}", all.len())?;
        }
        Command::Map(a) => {
            let tag = class_tag(&a.class)?;
            let text = read_input(a.input.as_ref())?;
            let record = map_one(&tag, &text, &a)?;
            match a.class.format {
                Format::Table => {
                    if let Some(o) = record.get("output") {
                        writeln!(out, "{}", table_of(o))?;
                    }
                }
                _ => writeln!(out, "{}", serde_json::to_string(&record)?)?,
            }
        }
        Command::Verify(a) => {
            let names: Vec<&str> = if a.suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&a.suite.as_str()) {
                vec![a.suite.as_str()]
            } else {
                return Err(usage(format!(
                    "unknown suite `{}`; expected one of {} or all",
                    a.suite,
                    SUITES.join(", ")
                )));
            };
            let reports: Vec<SuiteReport> = names
                .iter()
                .map(|s| run_suite(s, a.seed, a.jobs).expect("known suite"))
                .collect();
            match a.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&reports)?)?,
                _ => {
                    for r in &reports {
                        let verdict = if r.passed() { "PASS" } else { "FAIL" };
                        writeln!(
                            out,
                            "{}: {verdict} ({} checks, {} failures)",
                            r.suite,
                            r.checked,
                            r.failures.len()
                        )?;
                        for f in &r.failures {
                            writeln!(out, "  {f}")?;
                        }
                    }
                }
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Render(a) => {
            let tag = class_tag(&a.class)?;
            let pi = parse_partition(&read_input(a.input.as_ref())?, &tag)?;
            let svg = render(&tag, &pi, a.to.as_deref())?;
            match &a.out {
                Some(p) => fs::write(p, svg).with_context(|| format!("writing {}", p.display()))?,
                None => out.write_all(svg.as_bytes())?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn class_tag(a: &ClassArgs) -> Result<ClassTag> {
    let class: Class = a.class.parse().map_err(|e: sppq::pp::PpError| usage(e.to_string()))?;
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let bound = match class {
        Class::Espp | Class::Stair => a.small_m.or(a.big_m.map(|b| b / 2)),
        _ => a.big_m,
    };
    let flag = if matches!(class, Class::Espp | Class::Stair) {
        "--m"
    } else {
        "--M"
    };
    let bound = bound.ok_or_else(|| usage(format!("{class} needs {flag}")))?;
    Ok(ClassTag::new(class, a.n, bound))
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))
            .map_err(|e| usage(format!("{e:#}"))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Accepts the full partition object or a bare array of rows.
fn parse_partition(text: &str, tag: &ClassTag) -> Result<PlanePartition> {
    let pi = match serde_json::from_str::<PlanePartition>(text) {
        Ok(pi) => pi,
        Err(_) => {
            let rows: Vec<Vec<u32>> =
                serde_json::from_str(text).map_err(|e| usage(format!("input is not a partition: {e}")))?;
            match tag.class.kind() {
                Kind::Plane => PlanePartition::staircase(rows),
                Kind::Shifted => PlanePartition::shifted(rows),
            }
        }
    };
    match validate(tag, &pi) {
        Ok(true) => Ok(pi),
        Ok(false) => Err(usage(format!(
            "input is not in {}({}, {})",
            tag.class, tag.n, tag.bound
        ))),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn words(ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| word_string(w, Graph::Up)).collect()
}

fn trace_json(trace: &[TraceHop]) -> Value {
    serde_json::to_value(trace).unwrap_or(Value::Null)
}

fn ledger(s_in: Option<usize>, s_out: Option<usize>) -> Value {
    json!({ "S_in": s_in, "S_out": s_out })
}

fn map_one(tag: &ClassTag, text: &str, a: &MapArgs) -> Result<Value> {
    let n = tag.n;
    // Classes on the far side of a pair read as the backward direction.
    let (pair, dir) = match (tag.class, a.direction) {
        (Class::Qtcpp | Class::Stair, Dir::Backward) => {
            return Err(usage(format!(
                "{} is already the image side; drop --direction",
                tag.class
            )));
        }
        (Class::Qtcpp, Dir::Forward) => (Class::Spp, Direction::Backward),
        (Class::Stair, Dir::Forward) => (Class::Espp, Direction::Backward),
        (c, Dir::Forward) => (c, Direction::Forward),
        (c, Dir::Backward) => (c, Direction::Backward),
    };
    let input_tag = match (pair, dir) {
        (Class::Spp | Class::Pstair, Direction::Backward) => ClassTag::new(Class::Qtcpp, n, tag.bound),
        (Class::Espp, Direction::Backward) => ClassTag::new(Class::Stair, n, tag.bound),
        _ => ClassTag::new(pair, n, tag.bound),
    };
    let pi = parse_partition(text, &input_tag)?;
    let mut record = json!({ "input": pi });
    match (pair, a.to.as_deref()) {
        (Class::Spp, None) => {
            let big_m = tag.bound;
            let m = (big_m / 2) as usize;
            let b = SppQtcpp::lazy(n, big_m);
            let output = b.apply(&pi, dir)?;
            let (spp, q) = if dir == Direction::Forward {
                (&pi, &output)
            } else {
                (&output, &pi)
            };
            let (base, _) = spp_split(spp, big_m)?;
            let (s_in, s_out) = if big_m.is_multiple_of(2) {
                let stair = qtcpp_to_stair_even(q, m as u32).base;
                (s_set(&base, m)?.len(), s_set(&stair, m)?.len())
            } else {
                (n, n)
            };
            let (s_in, s_out) = if dir == Direction::Forward {
                (s_in, s_out)
            } else {
                (s_out, s_in)
            };
            record["output"] = json!(output);
            if a.trace {
                let (_, t) = f_traced(&base, m, Direction::Forward)?;
                record["trace"] = trace_json(&t);
            }
            record["stat_ledger"] = ledger(Some(s_in), Some(s_out));
        }
        (Class::Spp, Some("split")) => {
            let big_m = tag.bound;
            let m = big_m / 2;
            if dir == Direction::Forward {
                let (base, marks) = spp_split(&pi, big_m)?;
                record["output"] = json!({ "base": base, "marks": marks });
            } else if big_m % 2 == 1 {
                let (base, t) = qtcpp_to_stair_odd(&pi, m);
                record["output"] = json!({ "base": base, "t": t });
            } else {
                record["output"] = json!(qtcpp_to_stair_even(&pi, m));
            }
        }
        (Class::Pstair, None) => {
            let output = match dir {
                Direction::Forward => pstair_to_qtcpp(&pi, tag.bound),
                Direction::Backward => qtcpp_to_pstair(&pi, tag.bound),
            };
            record["output"] = json!(output);
        }
        (Class::Espp, None) => {
            let m = tag.bound as usize;
            let (output, trace) = if a.trace {
                let (o, t) = f_traced(&pi, m, dir)?;
                (o, Some(t))
            } else {
                (f_espp_stair(&pi, m, dir)?, None)
            };
            record["stat_ledger"] = ledger(Some(s_set(&pi, m)?.len()), Some(s_set(&output, m)?.len()));
            record["output"] = json!(output);
            if let Some(t) = trace {
                record["trace"] = trace_json(&t);
            }
        }
        (Class::Espp, Some("factored")) => {
            let m = tag.bound as usize;
            if m == 0 {
                return Err(usage("the factored form needs m ≥ 1"));
            }
            let mut ctx = if a.trace { HopCtx::tracing() } else { HopCtx::default() };
            let output = match dir {
                Direction::Forward => match espp_chain(n, m).hop(Side::Dom(pi.clone()), &mut ctx)?.to {
                    Side::Cod(Indexed { elem, index }) => json!({ "sigma": index.sigma, "factors": words(&elem.0) }),
                    Side::Dom(_) => bail!("chain ended on the wrong side"),
                },
                Direction::Backward => match stair_chain(n, m).hop(Side::Dom(pi.clone()), &mut ctx)?.to {
                    Side::Cod(Indexed { elem, index }) => {
                        json!({ "sigma": index.sigma, "t": index.t, "factors": words(&elem.0) })
                    }
                    Side::Dom(_) => bail!("chain ended on the wrong side"),
                },
            };
            record["output"] = output;
            if let Some(t) = ctx.trace {
                record["trace"] = trace_json(&t);
            }
        }
        (_, Some(other)) => {
            return Err(usage(format!(
                "unknown or unsupported --to `{other}` for {}",
                tag.class
            )))
        }
        (c, None) => return Err(anyhow!("no map defined for {c}")),
    }
    Ok(record)
}

fn table_of(v: &Value) -> String {
    match serde_json::from_value::<PlanePartition>(v.clone()) {
        Ok(pi) => pi.to_string(),
        Err(_) => serde_json::to_string_pretty(v).unwrap_or_default(),
    }
}

fn render(tag: &ClassTag, pi: &PlanePartition, to: Option<&str>) -> Result<String> {
    let n = tag.n;
    let m = tag.bound as usize;
    match (tag.class, to.unwrap_or("levels")) {
        (Class::Stair, "levels") => {
            let cfg = up_encode(pi, m);
            let m2 = 2 * m as i64;
            let opts = SvgOptions {
                barriers: vec![m2 + 1, m2 + 2],
                sources: cfg.paths.iter().map(|p| p.start).collect(),
                sinks: (1..=m).map(|i| up_sink(n, i)).collect(),
            };
            Ok(render_svg(&cfg.paths, &opts))
        }
        (Class::Stair, "columns") => {
            let cfg = down_encode(pi, m);
            let opts = SvgOptions {
                barriers: Vec::new(),
                sources: cfg.paths.iter().map(|p| p.start).collect(),
                sinks: (1..=n).map(|j| down_sink(n, m, j)).collect(),
            };
            Ok(render_svg(&cfg.paths, &opts))
        }
        (Class::Espp, "levels") => {
            let tc = EsppLgv::new(n, m)
                .encode(pi)
                .ok_or_else(|| usage("input has an odd diagonal entry"))?;
            let cfg = tc.to_paths(n);
            let paths: Vec<LatticePath> = cfg.paths;
            let opts = SvgOptions {
                barriers: Vec::new(),
                sources: paths.iter().map(|p| p.start).collect(),
                sinks: paths.iter().map(LatticePath::end).collect(),
            };
            Ok(render_svg(&paths, &opts))
        }
        (c, other) => Err(usage(format!("cannot render `{other}` for {c}; use stairPP or eSPP"))),
    }
}
