//! Command-line surface. Every command renders to a string so runs can be
//! compared byte for byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use zchan::cwbounds::CwTable;
use zchan::fsearch::{exact_search, heuristic_search, nested_family, tradeoff_table, TradeoffTable, EXACT_MAX_LEN};
use zchan::lpbound::f_upper_bound;
use zchan::twostage::{build_symmetric, dp_optimize, general_optimize, SymmetricProfile, TwoStageScheme};
use zchan::zcore::{format_code, free_points, read_code, validate_code, weight_distribution, write_code};
use zchan::{Budget, Code, Word};

use crate::report::Allowlist;
use crate::reproduce::{load_tables, parse_scope, reproduce, Options};

/// Environment variable naming the artifact cache directory.
pub const CACHE_ENV: &str = "ZCHAN_CACHE_DIR";

/// Default node budget for `reproduce`.
pub const DEFAULT_REPRODUCE_BUDGET: u64 = 400_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "zchan", version, about = "Single asymmetric-error-correcting codes for the Z-channel")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a code file corrects one asymmetric error.
    Validate { file: PathBuf },
    /// List the points no codeword can degrade to.
    FreePoints { file: PathBuf },
    /// Upper bound on free points from the weight-distribution constraints.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Search for codes.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Best free-point count for every size at length n.
    Tradeoff {
        #[arg(long)]
        n: usize,
        /// Node budget per search call; unlimited when omitted.
        #[arg(long)]
        budget: Option<u64>,
        /// Required for n > 8.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the table and its witnesses here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Two-stage schemes with one round of feedback.
    #[command(subcommand)]
    Twostage(TwostageCmd),
    /// Recompute the published tables and compare cell by cell.
    Reproduce {
        /// Comma-separated list of tables.
        #[arg(long, default_value = "I,II,III,IV,V")]
        tables: String,
        /// Node budget per search call; zero restricts the run to cached artifacts.
        #[arg(long, default_value_t = DEFAULT_REPRODUCE_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        /// Known-discrepancy list replacing the built-in one.
        #[arg(long)]
        allowlist: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SearchCmd {
    /// Most free points for length n and size m, with a proof of optimality.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        /// Node budget; unlimited when omitted.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A chain of codes, one per size, built by deleting heaviest words.
    Nested {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        /// Write the largest code here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local search for a large code.
    Heuristic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TwostageCmd {
    /// Scheme whose codes depend only on the weight of the first part.
    Build {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        /// Comma-separated sizes M_0..M_n1.
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        budget: Option<u64>,
        /// Required for n2 > 8.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best scheme of total length n over all splits.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::General)]
        method: Method,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Both transmitted parts for a message, given the fed-back first part.
    Encode {
        #[arg(long)]
        scheme: PathBuf,
        /// 1-based message index.
        #[arg(long)]
        message: u64,
        /// Received first part; defaults to the error-free one.
        #[arg(long)]
        feedback: Option<String>,
    },
    /// Message index of a received word of length n1 + n2.
    Decode {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        received: String,
    },
    /// Send every message through every admissible single error.
    Verify {
        #[arg(long)]
        scheme: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Per-weight sizes chosen by dynamic programming.
    Dp,
    /// Per-vertex sizes by local search, started from the dp profile.
    General,
}

/// What a command prints and the exit code it asks for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, code: 0 }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(Cli::try_parse_from(args)?)
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn budget(nodes: Option<u64>) -> Budget {
    nodes.map_or(Budget::unlimited(), Budget::nodes)
}

fn render(format: Format, text: String, tsv: impl FnOnce() -> String, value: impl FnOnce() -> serde_json::Value) -> String {
    match format {
        Format::Text => text,
        Format::Tsv => tsv(),
        Format::Json => serde_json::to_string_pretty(&value()).expect("json output") + "\n",
    }
}

fn code_strings(code: &Code) -> Vec<String> {
    code.words().iter().map(|w| w.to_string()).collect()
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse::<Word>().with_context(|| format!("bad word {:?}", s))
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let f = cli.format;
    match cli.command {
        Command::Validate { file } => validate(f, &file),
        Command::FreePoints { file } => free(f, &file),
        Command::Bound { n, m, t } => bound(f, n, m, t),
        Command::Search(s) => search(f, s),
        Command::Tradeoff { n, budget: b, seed, out_dir } => tradeoff(f, n, b, seed, out_dir),
        Command::Twostage(c) => twostage(f, c),
        Command::Reproduce { tables, budget: b, seed, allowlist } => {
            let scope = parse_scope(&tables)?;
            let allow = match allowlist {
                Some(p) => Allowlist::parse(&std::fs::read_to_string(&p).with_context(|| p.display().to_string())?)
                    .map_err(anyhow::Error::msg)?,
                None => Allowlist::builtin(),
            };
            let opts = Options { budget: b, seed, cache_dir: cache_dir() };
            let report = reproduce(&scope, &opts, &allow)?;
            let stdout = match f {
                Format::Text => report.to_text(),
                Format::Tsv => report.to_tsv(),
                Format::Json => report.to_json(),
            };
            Ok(Outcome { stdout, code: if report.passed() { 0 } else { 1 } })
        }
    }
}

fn validate(f: Format, file: &Path) -> Result<Outcome> {
    let code = read_code(file)?;
    let r = validate_code(&code);
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("n={} t={} M={}\nvalid: {}\n", code.n(), code.t(), code.len(), yes(r.valid));
    if let Some(d) = r.min_dz {
        let _ = writeln!(text, "min d_Z: {}", d);
    }
    if let Some(s) = r.shadows_disjoint {
        let _ = writeln!(text, "shadows disjoint: {}", yes(s));
    }
    if let Some((a, b, d)) = &r.violation {
        let _ = writeln!(text, "violation: {} {} (d_Z={})", a, b, d);
    }
    let stdout = render(
        f,
        text,
        || {
            let min = r.min_dz.map_or("-".to_string(), |d| d.to_string());
            format!("n\tt\tM\tvalid\tmin_dz\n{}\t{}\t{}\t{}\t{}\n", code.n(), code.t(), code.len(), r.valid, min)
        },
        || json!({ "n": code.n(), "t": code.t(), "m": code.len(), "report": r }),
    );
    Ok(Outcome { stdout, code: if r.valid { 0 } else { 1 } })
}

fn free(f: Format, file: &Path) -> Result<Outcome> {
    let code = read_code(file)?;
    let fp = free_points(&code)?;
    let points: Vec<String> = fp.points.iter().map(|w| w.to_string()).collect();
    let mut text = format!("free points: {}\n", fp.count);
    for p in &points {
        text.push_str(p);
        text.push('\n');
    }
    Ok(Outcome::ok(render(
        f,
        text,
        || {
            let mut s = format!("n\tM\tF\n{}\t{}\t{}\n", code.n(), code.len(), fp.count);
            for p in &points {
                s.push_str(p);
                s.push('\n');
            }
            s
        },
        || json!({ "n": code.n(), "m": code.len(), "free": fp.count, "points": points }),
    )))
}

fn bound(f: Format, n: usize, m: u64, t: usize) -> Result<Outcome> {
    if t != 1 {
        bail!("only t = 1 is supported");
    }
    let r = f_upper_bound(n, m, t, &CwTable::johnson_only());
    let mut text = match r.value {
        Some(v) => format!("n={} M={} t={}: F <= {}\n", n, m, t, v),
        None => format!("n={} M={} t={}: no weight distribution is feasible\n", n, m, t),
    };
    for d in &r.optimal_distributions {
        let _ = writeln!(text, "  {}", d);
    }
    Ok(Outcome::ok(render(f, text, || r.to_tsv(), || json!(r))))
}

fn search(f: Format, cmd: SearchCmd) -> Result<Outcome> {
    match cmd {
        SearchCmd::Exact { n, m, budget: b, out } => {
            let r = exact_search(n, m, budget(b));
            let status = serde_json::to_value(r.status)?.as_str().unwrap_or_default().to_string();
            let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            let free = opt(r.free.map(|v| v.to_string()));
            let upper = opt(r.upper.map(|v| v.to_string()));
            let mut text = format!("n={} M={} status={} F={} upper={} nodes={}\n", n, m, status, free, upper, r.nodes);
            if let Some(c) = &r.code {
                let _ = writeln!(text, "distribution {}", weight_distribution(c));
                text.push_str(&format_code(c));
                if let Some(p) = &out {
                    write_code(c, p)?;
                }
            }
            Ok(Outcome::ok(render(
                f,
                text,
                || format!("n\tM\tstatus\tF\tupper\tnodes\n{}\t{}\t{}\t{}\t{}\t{}\n", n, m, status, free, upper, r.nodes),
                || {
                    json!({ "n": n, "m": m, "status": r.status, "free": r.free, "upper": r.upper,
                            "nodes": r.nodes, "code": r.code.as_ref().map(code_strings) })
                },
            )))
        }
        SearchCmd::Nested { n, budget: b, seed, out } => {
            let fam = nested_family(n, Budget::nodes(b), seed);
            let frees = fam.free_counts();
            let mut text = format!("n={} max size {} top optimal: {}\n", n, fam.max_size(), fam.top_optimal);
            let mut tsv = String::from("M\tF\n");
            for (i, fr) in frees.iter().enumerate() {
                let _ = writeln!(tsv, "{}\t{}", i + 1, fr);
            }
            text.push_str(&tsv);
            if let (Some(p), Some(top)) = (&out, fam.chain.last()) {
                write_code(top, p)?;
            }
            Ok(Outcome::ok(render(
                f,
                text,
                || tsv,
                || {
                    json!({ "n": n, "top_optimal": fam.top_optimal, "free": frees,
                            "top": fam.chain.last().map(code_strings) })
                },
            )))
        }
        SearchCmd::Heuristic { n, target, budget: b, seed, out } => {
            let r = heuristic_search(n, target, Budget::nodes(b), seed);
            if let Some(p) = &out {
                write_code(&r.code, p)?;
            }
            let mut text =
                format!("n={} size={} target={} reached={} rounds={}\n", n, r.code.len(), target, r.reached, r.rounds);
            text.push_str(&format_code(&r.code));
            Ok(Outcome::ok(render(
                f,
                text,
                || format!("n\tsize\ttarget\treached\trounds\n{}\t{}\t{}\t{}\t{}\n", n, r.code.len(), target, r.reached, r.rounds),
                || {
                    json!({ "n": n, "size": r.code.len(), "target": target, "reached": r.reached,
                            "rounds": r.rounds, "code": code_strings(&r.code) })
                },
            )))
        }
    }
}

fn need_seed(seed: Option<u64>, n: usize) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None if n <= EXACT_MAX_LEN => Ok(0),
        None => bail!("length {} uses randomized search; pass --seed", n),
    }
}

fn one_table(n: usize, b: Option<u64>, seed: Option<u64>) -> Result<TradeoffTable> {
    let seed = need_seed(seed, n)?;
    Ok(match cache_dir() {
        Some(d) => TradeoffTable::cached(d, n, budget(b), seed)?,
        None => tradeoff_table(n, budget(b), seed),
    })
}

fn tradeoff(f: Format, n: usize, b: Option<u64>, seed: Option<u64>, out_dir: Option<PathBuf>) -> Result<Outcome> {
    let table = one_table(n, b, seed)?;
    if let Some(d) = &out_dir {
        std::fs::create_dir_all(d)?;
        table.save(d)?;
    }
    let mut tsv = String::from("M\tF\tstatus\tdistribution\n");
    for r in &table.rows {
        let status = if r.optimal { "optimal" } else { "lower" };
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}", r.m, r.free, status, weight_distribution(&r.witness));
    }
    let text = format!("n={} max size {}\n{}", n, table.max_size(), tsv);
    Ok(Outcome::ok(render(
        f,
        text,
        || tsv.clone(),
        || {
            let rows: Vec<_> = table
                .rows
                .iter()
                .map(|r| json!({ "m": r.m, "free": r.free, "optimal": r.optimal, "witness": code_strings(&r.witness) }))
                .collect();
            json!({ "n": n, "rows": rows })
        },
    )))
}

fn scheme_summary(s: &TwoStageScheme) -> String {
    format!("n1={} n2={} messages={}\n", s.n1(), s.n2(), s.count_messages())
}

fn save_scheme(s: &TwoStageScheme, out: &Option<PathBuf>) -> Result<()> {
    if let Some(p) = out {
        s.save(p)?;
    }
    Ok(())
}

fn twostage(f: Format, cmd: TwostageCmd) -> Result<Outcome> {
    match cmd {
        TwostageCmd::Build { n1, n2, sizes, budget: b, seed, out } => {
            let m = sizes
                .split(',')
                .map(|x| x.trim().parse::<u64>().with_context(|| format!("bad size {:?}", x)))
                .collect::<Result<Vec<_>>>()?;
            let table = one_table(n2, b, seed)?;
            let profile = SymmetricProfile::from_table(&table, n1, m)?;
            let s = build_symmetric(&profile, &table)?;
            save_scheme(&s, &out)?;
            Ok(Outcome::ok(render(
                f,
                format!("{}F_w={:?}\n", scheme_summary(&s), profile.f),
                || format!("n1\tn2\tmessages\n{}\t{}\t{}\n", s.n1(), s.n2(), s.count_messages()),
                || json!({ "profile": profile, "messages": s.count_messages(), "scheme": s.to_file() }),
            )))
        }
        TwostageCmd::Optimize { n, method, budget: b, seed, out } => {
            if n < 2 {
                bail!("total length must be at least 2");
            }
            let opts = Options { budget: b, seed, cache_dir: cache_dir() };
            let lengths = 1..=(n - 1).min(crate::reproduce::TABLE_LENGTHS.end().to_owned());
            let tables = load_tables(lengths, &opts)?;
            let dp = dp_optimize(n, &tables)?;
            let s = match method {
                Method::Dp => build_symmetric(&dp.profile, &tables[&dp.n2])?,
                Method::General => general_optimize(n, &tables, Budget::nodes(b), seed)?,
            };
            save_scheme(&s, &out)?;
            let mut text = scheme_summary(&s);
            if method == Method::Dp {
                let _ = writeln!(text, "M_w={:?}", dp.profile.m);
            }
            for (n1, n2, msgs) in &dp.splits {
                let _ = writeln!(text, "symmetric {}+{}: {}", n1, n2, msgs);
            }
            if !dp.missing.is_empty() {
                let _ = writeln!(text, "no table for second-stage lengths {:?}", dp.missing);
            }
            Ok(Outcome::ok(render(
                f,
                text,
                || format!("n\tn1\tn2\tmessages\n{}\t{}\t{}\t{}\n", n, s.n1(), s.n2(), s.count_messages()),
                || json!({ "n": n, "messages": s.count_messages(), "dp": dp, "scheme": s.to_file() }),
            )))
        }
        TwostageCmd::Encode { scheme, message, feedback } => {
            let s = TwoStageScheme::load(&scheme)?;
            let (u, _) = s.message_pair(message)?;
            let fb = match feedback {
                Some(x) => parse_word(&x)?,
                None => Word::new(s.n1(), u)?,
            };
            let (a, b) = s.encode(message, &fb)?;
            Ok(Outcome::ok(render(
                f,
                format!("message {}: first {} second {}\n", message, a, b),
                || format!("message\tfirst\tsecond\n{}\t{}\t{}\n", message, a, b),
                || json!({ "message": message, "first": a.to_string(), "second": b.to_string() }),
            )))
        }
        TwostageCmd::Decode { scheme, received } => {
            let s = TwoStageScheme::load(&scheme)?;
            let y = parse_word(&received)?;
            let m = s.decode(&y)?;
            let (u, i) = s.message_pair(m)?;
            let u = Word::new(s.n1(), u)?;
            Ok(Outcome::ok(render(
                f,
                format!("{} -> message {} (vertex {}, codeword {})\n", y, m, u, i),
                || format!("received\tmessage\n{}\t{}\n", y, m),
                || json!({ "received": y.to_string(), "message": m, "vertex": u.to_string(), "index": i }),
            )))
        }
        TwostageCmd::Verify { scheme } => {
            let s = TwoStageScheme::load(&scheme)?;
            let r = s.verify_exhaustive();
            let mut text = format!("{}cases={} failures={}\n", scheme_summary(&s), r.cases, r.failures);
            if let Some(c) = &r.first_failure {
                let _ = writeln!(text, "first failure: {:?}", c);
            }
            let code = if r.passed() { 0 } else { 1 };
            let stdout = render(
                f,
                text,
                || format!("cases\tfailures\n{}\t{}\n", r.cases, r.failures),
                || json!(r),
            );
            Ok(Outcome { stdout, code })
        }
    }
}
