//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code: 0 pass, 1 semantic failure, 2 input
//! error, 3 capacity exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::R0Algebra;
use crate::constructions::{
    chain_construction, decompose, sup_construction, two_level, verify_chain_output, verify_decomposition,
    verify_output, ChainGrades, FilterChain, IndexedFamily,
};
use crate::crisp::{
    enumerate_fated_filters_naive, enumerate_fated_filters_with, enumerate_filters, enumerate_filters_naive,
    DEFAULT_ENUMERATION_BOUND,
};
use crate::error::Error;
use crate::filters::{Analyzer, Mutation, Notion, IMPLICATIONS};
use crate::fixtures;
use crate::fuzzy::{level_table, FuzzySubset, LevelKind, LevelRow};
use crate::grade::{Grade, KParam};
use crate::par::Execution;
use crate::report::{CheckReport, Verdict};
use crate::subset::CrispSubset;
use crate::suite::{run_suite, SuiteConfig};
use crate::sweep::{default_k_grid, SweepConfig, DEFAULT_DENOMINATOR, DEFAULT_SEED, DEFAULT_SWEEP};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "r0filters", version, about = "Fated filters and fuzzy fated filters of finite R0-algebras")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    TwoLevel,
    Chain,
    Sup,
    Decompose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    U,
    Qk,
    Bracket,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MutationArg {
    None,
    DropQuasi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the R0 axioms and the derived laws of an algebra file.
    VerifyAlgebra { algebra: PathBuf },
    /// List all filters, or all fated filters, of an algebra.
    Enum {
        algebra: PathBuf,
        #[arg(long)]
        fated: bool,
        /// Compare against an unpruned scan of every subset.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Decide one notion, or all of them, for a fuzzy subset.
    Check {
        algebra: PathBuf,
        subset: PathBuf,
        #[arg(long, default_value = "0", value_parser = parse_k)]
        k: KParam,
        #[arg(long, value_parser = parse_notion, required_unless_present = "all", conflicts_with = "all")]
        notion: Option<Notion>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Print level sets by threshold interval.
    Levels {
        algebra: PathBuf,
        subset: PathBuf,
        #[arg(long, default_value = "0", value_parser = parse_k)]
        k: KParam,
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
        /// Lower end; defaults to 0, or to (1-k)/2 for the Q_k table.
        #[arg(long, value_parser = parse_grade)]
        from: Option<Grade>,
        #[arg(long, default_value = "1", value_parser = parse_grade)]
        to: Grade,
    },
    /// Build fuzzy fated filters from crisp ones, or split one in two.
    Construct {
        algebra: PathBuf,
        /// Construction description; a fuzzy-subset file for `decompose`.
        spec: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value = "0", value_parser = parse_k)]
        k: KParam,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Run worked examples, a random sweep and construction round trips.
    VerifyPaper {
        /// Defaults to the bundled six-element example algebra.
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SWEEP)]
        sweep: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DENOMINATOR)]
        denominator: u32,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
        /// Evaluate the sweep on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum, default_value_t = MutationArg::None, hide = true)]
        mutation: MutationArg,
    },
}

fn parse_k(s: &str) -> Result<KParam, String> {
    s.parse::<KParam>().map_err(|e| e.to_string())
}

fn parse_grade(s: &str) -> Result<Grade, String> {
    s.parse::<Grade>().map_err(|e| e.to_string())
}

fn parse_notion(s: &str) -> Result<Notion, String> {
    s.parse()
}

/// A failure that ends the command with a specific exit code.
#[derive(Debug)]
struct Exit {
    code: i32,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Domain(_) | Error::Structural(_) => EXIT_INPUT,
            Error::Capacity { .. } => EXIT_CAPACITY,
            Error::Precondition(_) | Error::Invariant(_) => EXIT_FAIL,
        };
        Exit {
            code,
            message: e.to_string(),
        }
    }
}

/// Constructions reject out-of-range grades and non-fated inputs as
/// semantic failures rather than input errors.
fn rejected(e: Error) -> Exit {
    match e {
        Error::Capacity { .. } => Exit::from(e),
        e => Exit {
            code: EXIT_FAIL,
            message: e.to_string(),
        },
    }
}

fn input_error(message: impl Into<String>) -> Exit {
    Exit {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<R0Algebra, Exit> {
    R0Algebra::parse(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_subset(algebra: &R0Algebra, path: &Path) -> Result<FuzzySubset, Exit> {
    FuzzySubset::parse(algebra, &read(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Exit {
    let mut exit = Exit::from(e);
    exit.message = format!("{}: {}", path.display(), exit.message);
    exit
}

/// Output accumulated by a command, written once at the end.
struct Output {
    format: Format,
    text: String,
    json: Value,
}

impl Output {
    fn emit(&self, out: &mut dyn Write) -> std::io::Result<()> {
        match self.format {
            Format::Text => out.write_all(self.text.as_bytes()),
            Format::Json => {
                let s = serde_json::to_string_pretty(&self.json).expect("serializable report");
                writeln!(out, "{s}")
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((code, output)) => {
            if let Err(e) = output.emit(out) {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_INPUT;
            }
            code
        }
        Err(exit) => {
            let _ = writeln!(err, "error: {}", exit.message);
            exit.code
        }
    }
}

fn verdict_code(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn execute(cli: &Cli) -> Result<(i32, Output), Exit> {
    let format = cli.format;
    match &cli.command {
        Command::VerifyAlgebra { algebra } => cmd_verify_algebra(format, algebra),
        Command::Enum {
            algebra,
            fated,
            oracle,
            bound,
        } => cmd_enum(format, algebra, *fated, *oracle, *bound),
        Command::Check {
            algebra,
            subset,
            k,
            notion,
            all,
            bound,
        } => cmd_check(format, algebra, subset, *k, *notion, *all, *bound),
        Command::Levels {
            algebra,
            subset,
            k,
            kind,
            from,
            to,
        } => cmd_levels(format, algebra, subset, *k, *kind, *from, *to),
        Command::Construct {
            algebra,
            spec,
            mode,
            k,
            out_dir,
            bound,
        } => cmd_construct(format, algebra, spec, *mode, *k, out_dir, *bound),
        Command::VerifyPaper {
            algebra,
            sweep,
            seed,
            denominator,
            bound,
            sequential,
            mutation,
        } => {
            let (alg, label) = match algebra {
                Some(p) => (load_algebra(p)?, p.display().to_string()),
                None => (fixtures::example34(), "example34.alg (bundled)".to_string()),
            };
            let config = SuiteConfig {
                sweep: SweepConfig {
                    count: *sweep,
                    seed: *seed,
                    denominator: *denominator,
                    k_grid: default_k_grid(),
                    exec: if *sequential {
                        Execution::Sequential
                    } else {
                        Execution::Parallel
                    },
                },
                bound: *bound,
                mutation: match mutation {
                    MutationArg::None => Mutation::None,
                    MutationArg::DropQuasi => Mutation::DropQuasi,
                },
            };
            let report = run_suite(&alg, &label, &config)?;
            let json = serde_json::to_value(&report).expect("serializable report");
            Ok((
                verdict_code(report.passed()),
                Output {
                    format,
                    text: report.render(),
                    json,
                },
            ))
        }
    }
}

fn cmd_verify_algebra(format: Format, path: &Path) -> Result<(i32, Output), Exit> {
    let a = load_algebra(path)?;
    let axioms = a.verify_axioms();
    let derived = a.verify_derived();
    let pass = axioms.passed() && derived.passed();
    let text = format!(
        "{}{}{}\n",
        axioms.render(&a),
        derived.render(&a),
        if pass { "result: pass" } else { "result: FAIL" }
    );
    let json = json!({
        "elements": a.names(),
        "axioms": axioms.to_json(&a),
        "derived": derived.to_json(&a),
        "verdict": if pass { "pass" } else { "fail" },
    });
    Ok((verdict_code(pass), Output { format, text, json }))
}

fn sets_json(a: &R0Algebra, sets: &[CrispSubset]) -> Value {
    Value::Array(sets.iter().map(|s| Value::String(s.render(a))).collect())
}

fn cmd_enum(format: Format, path: &Path, fated: bool, oracle: bool, bound: usize) -> Result<(i32, Output), Exit> {
    let a = load_algebra(path)?;
    let (label, listing, closed) = if fated {
        let family = enumerate_fated_filters_with(&a, bound, Execution::default())?;
        let closed = family.intersection_counterexample();
        ("fated filters", family.members().to_vec(), Some(closed))
    } else {
        ("filters", enumerate_filters(&a, bound)?, None)
    };
    let mut text = format!("{label} of {}:\n", path.display());
    for s in &listing {
        text.push_str(&format!("  {}\n", s.render(&a)));
    }
    text.push_str(&format!("count: {}\n", listing.len()));
    let mut json = json!({ "kind": label, "members": sets_json(&a, &listing), "count": listing.len() });
    let mut pass = true;
    if let Some(closed) = closed {
        match closed {
            None => text.push_str("closed under intersection: yes\n"),
            Some((x, y)) => {
                pass = false;
                text.push_str(&format!(
                    "closed under intersection: NO ({} and {})\n",
                    x.render(&a),
                    y.render(&a)
                ));
            }
        }
        json["closed_under_intersection"] = Value::Bool(closed.is_none());
    }
    if oracle {
        let naive = if fated {
            enumerate_fated_filters_naive(&a, bound)?
        } else {
            enumerate_filters_naive(&a, bound)?
        };
        let agrees = naive == listing;
        pass &= agrees;
        text.push_str(if agrees {
            "oracle: naive scan agrees\n"
        } else {
            "oracle: naive scan DIFFERS\n"
        });
        json["oracle_agrees"] = Value::Bool(agrees);
    }
    Ok((verdict_code(pass), Output { format, text, json }))
}

fn cmd_check(
    format: Format,
    algebra: &Path,
    subset: &Path,
    k: KParam,
    notion: Option<Notion>,
    all: bool,
    bound: usize,
) -> Result<(i32, Output), Exit> {
    let a = load_algebra(algebra)?;
    let mu = load_subset(&a, subset)?;
    let an = Analyzer::new(&a, bound)?;
    if !all {
        let notion = notion.ok_or_else(|| input_error("either --notion or --all is required"))?;
        let v = an.check(notion, &mu, k)?;
        let text = format!("k = {k}\n{}\n", v.render(&a));
        let mut json = v.to_json(&a);
        json["k"] = Value::String(k.to_string());
        return Ok((verdict_code(v.passed()), Output { format, text, json }));
    }
    let verdicts: Vec<Verdict> = Notion::ALL
        .iter()
        .map(|&n| an.check(n, &mu, k))
        .collect::<Result<_, _>>()?;
    let passed = |n: Notion| verdicts[Notion::ALL.iter().position(|&m| m == n).expect("listed")].passed();
    let mut text = format!("k = {k}\n");
    for v in &verdicts {
        text.push_str(&v.render(&a));
        text.push('\n');
    }
    text.push_str("implications:\n");
    let mut ok = true;
    let mut rows = Vec::new();
    for (p, q) in IMPLICATIONS {
        let status = match (passed(p), passed(q)) {
            (true, false) => {
                ok = false;
                "VIOLATED"
            }
            (true, true) => "holds",
            (false, _) => "vacuous",
        };
        text.push_str(&format!("  {p} => {q}: {status}\n"));
        rows.push(json!({ "from": p.name(), "to": q.name(), "status": status }));
    }
    let json = json!({
        "k": k.to_string(),
        "verdicts": verdicts.iter().map(|v| v.to_json(&a)).collect::<Vec<_>>(),
        "implications": rows,
    });
    Ok((verdict_code(ok), Output { format, text, json }))
}

fn rows_json(a: &R0Algebra, rows: &[LevelRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({ "lo": r.lo.to_string(), "hi": r.hi.to_string(), "set": r.set.render(a) }))
            .collect(),
    )
}

fn cmd_levels(
    format: Format,
    algebra: &Path,
    subset: &Path,
    k: KParam,
    kind: Kind,
    from: Option<Grade>,
    to: Grade,
) -> Result<(i32, Output), Exit> {
    let a = load_algebra(algebra)?;
    let mu = load_subset(&a, subset)?;
    let kinds: &[(LevelKind, &str, &str)] = &[
        (LevelKind::U, "u", "U(mu;t)"),
        (LevelKind::Qk, "qk", "Q_k(mu;t)"),
        (LevelKind::Bracket, "bracket", "[mu]_t^k"),
    ];
    let mut text = format!("k = {k}, (1-k)/2 = {}\n", k.half());
    let mut json = json!({ "k": k.to_string() });
    for &(lk, key, title) in kinds {
        let wanted = match kind {
            Kind::All => true,
            Kind::U => lk == LevelKind::U,
            Kind::Qk => lk == LevelKind::Qk,
            Kind::Bracket => lk == LevelKind::Bracket,
        };
        if !wanted {
            continue;
        }
        let from = from.unwrap_or(if lk == LevelKind::Qk { k.half() } else { Grade::ZERO });
        if from >= to {
            return Err(input_error(format!("empty range ({from}, {to}]")));
        }
        let rows = level_table(&mu, lk, k, from, to);
        text.push_str(&format!("{title}:\n"));
        for r in &rows {
            text.push_str(&format!("  t in ({}, {}]  {}\n", r.lo, r.hi, r.set.render(&a)));
        }
        json[key] = rows_json(&a, &rows);
    }
    Ok((EXIT_PASS, Output { format, text, json }))
}

/// `key: value` lines with `#` comments, in order.
fn spec_lines(text: &str) -> Vec<(usize, String, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                return None;
            }
            let (key, value) = line.split_once(':').unwrap_or((line, ""));
            Some((i + 1, key.trim().to_string(), value.trim().to_string()))
        })
        .collect()
}

fn spec_set(a: &R0Algebra, line: usize, text: &str) -> Result<CrispSubset, Error> {
    if text == "L" {
        return Ok(CrispSubset::full(a.size()));
    }
    CrispSubset::parse(a, text).map_err(|m| Error::Parse { line, message: m })
}

fn spec_grade(line: usize, text: &str) -> Result<Grade, Error> {
    text.parse::<Grade>().map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })
}

fn cmd_construct(
    format: Format,
    algebra: &Path,
    spec: &Path,
    mode: Mode,
    k: KParam,
    out_dir: &Path,
    bound: usize,
) -> Result<(i32, Output), Exit> {
    let a = load_algebra(algebra)?;
    let an = Analyzer::new(&a, bound)?;
    let spec_text = read(spec)?;
    let in_spec = |e: Error| in_file(spec, e);
    let mut outputs: Vec<(&str, FuzzySubset)> = Vec::new();
    let mut reports: Vec<CheckReport> = Vec::new();
    match mode {
        Mode::Decompose => {
            let mu = FuzzySubset::parse(&a, &spec_text).map_err(in_spec)?;
            let d = decompose(&an, &mu, k).map_err(rejected)?;
            let mut report = verify_decomposition(&an, &mu, k, &d)?;
            report.title = format!("decomposition (interior value {})", d.interior);
            reports.push(report);
            outputs.push(("nu", d.nu));
            outputs.push(("gamma", d.gamma));
        }
        _ => {
            let lines = spec_lines(&spec_text);
            let mut filters = Vec::new();
            let mut members = Vec::new();
            let mut grades = ChainGrades::default();
            let (mut t1, mut t2) = (None, None);
            for (line, key, value) in &lines {
                let line = *line;
                match key.as_str() {
                    "filter" => filters.push(spec_set(&a, line, value).map_err(in_spec)?),
                    "member" => {
                        let (g, s) = value.split_once(' ').ok_or_else(|| {
                            in_spec(Error::Parse {
                                line,
                                message: "expected `member: <grade> <set>`".into(),
                            })
                        })?;
                        let g = spec_grade(line, g.trim()).map_err(in_spec)?;
                        members.push((g, spec_set(&a, line, s.trim()).map_err(in_spec)?));
                    }
                    "t1" => t1 = Some(spec_grade(line, value).map_err(in_spec)?),
                    "t2" => t2 = Some(spec_grade(line, value).map_err(in_spec)?),
                    "t0" => grades.t0 = Some(spec_grade(line, value).map_err(in_spec)?),
                    "t" => grades.t = Some(spec_grade(line, value).map_err(in_spec)?),
                    "steps" => {
                        let steps = value
                            .split_whitespace()
                            .map(|v| spec_grade(line, v))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(in_spec)?;
                        grades.steps = Some(steps);
                    }
                    other => {
                        return Err(in_spec(Error::Parse {
                            line,
                            message: format!("unknown key `{other}`"),
                        }))
                    }
                }
            }
            let missing = |what: &str| in_spec(Error::Parse { line: 0, message: format!("missing `{what}`") });
            let mu = match mode {
                Mode::TwoLevel => {
                    let [f] = filters[..] else {
                        return Err(input_error(format!("{}: exactly one `filter` expected", spec.display())));
                    };
                    two_level(&a, f, t1.ok_or_else(|| missing("t1"))?, t2.ok_or_else(|| missing("t2"))?, k)
                        .map_err(rejected)?
                }
                Mode::Chain => {
                    let chain = FilterChain::new(&a, filters).map_err(rejected)?;
                    let mu = chain_construction(&a, &chain, k, &grades).map_err(rejected)?;
                    reports.push(verify_chain_output(&an, &chain, &mu, k)?);
                    mu
                }
                Mode::Sup => {
                    let family = IndexedFamily::new(&a, members).map_err(rejected)?;
                    sup_construction(&family, k).map_err(rejected)?
                }
                Mode::Decompose => unreachable!("handled above"),
            };
            if reports.is_empty() {
                reports.push(verify_output(&an, &mu, k)?);
            }
            outputs.push(("mu", mu));
        }
    }
    fs::create_dir_all(out_dir).map_err(|e| input_error(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut text = format!("k = {k}\n");
    let mut files = Vec::new();
    for (name, f) in &outputs {
        let path = out_dir.join(format!("{name}.fz"));
        fs::write(&path, f.to_text(&a)).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
        text.push_str(&format!("{name}: {}\n", f.render(&a)));
        text.push_str(&format!("wrote {}\n", path.display()));
        files.push(json!({ "name": name, "path": path.display().to_string(), "grades": f.render(&a) }));
    }
    let pass = reports.iter().all(|r| r.passed());
    for r in &reports {
        text.push_str(&r.render(&a));
    }
    let json = json!({
        "k": k.to_string(),
        "outputs": files,
        "reports": reports.iter().map(|r| r.to_json(&a)).collect::<Vec<_>>(),
        "verdict": if pass { "pass" } else { "fail" },
    });
    Ok((verdict_code(pass), Output { format, text, json }))
}
