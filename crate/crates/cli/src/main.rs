mod target;
mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use uproj::genset::{GeneratorSet, LocElemJson};
use uproj::projector_core::{find_slice_pair, verify_invariance, Derivation};
use uproj::rational::{self, Q};
use uproj::report::{Check, Report};
use uproj::rootsystem::{RootSystem, Series};
use uproj::symfield::parse;

use target::Target;

#[derive(Parser)]
#[command(name = "uproj", version, about = "U-projectors and generators of unipotent invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Kostant cascade of a root system.
    Cascade {
        #[command(flatten)]
        datum: Datum,
        #[command(flatten)]
        common: Common,
    },
    /// Build a projector and emit its generator set.
    Generators {
        #[command(subcommand)]
        which: Pipeline,
    },
    /// Check expressions for invariance under the simple root derivations.
    Verify {
        #[command(flatten)]
        universe: UniverseArgs,
        /// File with one expression per line ('#' starts a comment).
        #[arg(long)]
        input: Option<PathBuf>,
        exprs: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Apply the projector to expressions, optionally evaluating at a point.
    Eval {
        #[command(flatten)]
        universe: UniverseArgs,
        /// Point as `name=value,...` or a comma list in variable order.
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        exprs: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum Pipeline {
    /// Adjoint representation of a simple Lie algebra.
    Adjoint {
        #[command(flatten)]
        datum: Datum,
        #[command(flatten)]
        common: Common,
    },
    /// Representation read from a JSON file.
    Rep {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Conjugation action of upper unitriangular matrices on gl_n.
    Conj {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Datum {
    #[arg(long = "type")]
    series: String,
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Clone)]
pub struct UniverseArgs {
    #[arg(long = "type", requires = "rank", conflicts_with_all = ["n", "file"])]
    series: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, conflicts_with = "file")]
    n: Option<usize>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    trials: usize,
    /// Also search for a slice pair of the first stage up to this degree.
    #[arg(long)]
    degree_cap: Option<u32>,
    /// Cap on S-map expansion steps (default 10·deg + 16).
    #[arg(long)]
    iter_cap: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Report timings on stderr.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] uproj::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(uproj::Error::Internal(_))
            | CliError::Core(uproj::Error::NotNilpotent { .. })
            | CliError::Core(uproj::Error::SliceCondition { .. })
            | CliError::Core(uproj::Error::Triangularity { .. }) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn parse_series(s: &str) -> Result<Series> {
    let mut cs = s.chars();
    match (cs.next().and_then(|c| Series::from_char(c.to_ascii_uppercase())), cs.next()) {
        (Some(x), None) => Ok(x),
        _ => Err(CliError::Usage(format!("unknown type {s:?}"))),
    }
}

fn emit<T: Serialize>(value: &T, format: Format, text: impl FnOnce() -> String) -> Result<()> {
    let out = match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    };
    std::io::stdout()
        .write_all(out.as_bytes())
        .map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
}

fn read_exprs(input: &Option<PathBuf>, exprs: &[String]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    if let Some(path) = input {
        let s = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
        out.extend(
            s.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(String::from),
        );
    }
    out.extend(exprs.iter().cloned());
    if out.is_empty() {
        return Err(CliError::Usage("no expressions given".into()));
    }
    Ok(out)
}

fn setup_jobs(common: &Common) -> Result<()> {
    if let Some(j) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn cascade(datum: &Datum, common: &Common) -> Result<bool> {
    let rs = RootSystem::new(parse_series(&datum.series)?, datum.rank)?;
    let c = rs.kostant_cascade();
    let json = rs.cascade_json(&c);
    emit(&json, common.format, || text::cascade(&json))?;
    Ok(true)
}

fn slice_check(g: &mut GeneratorSet, family: &[Derivation], cap: u32) {
    let Some(first) = g.projector.stages().first() else {
        return;
    };
    let fam: Vec<&Derivation> = family.iter().collect();
    let name = format!("slice pair for {} up to degree {cap}", first.derivation.label());
    let check = match find_slice_pair(g.projector.denominators(), &fam, &first.derivation, cap) {
        Ok(sp) => Check::pass(name).with_note(sp.q.to_text()),
        Err(e) => Check::inconclusive(name, e.to_string()),
    };
    g.report.push(check);
}

fn generators(which: &Pipeline) -> Result<bool> {
    let (target, common) = match which {
        Pipeline::Adjoint { datum, common } => {
            let rs = RootSystem::new(parse_series(&datum.series)?, datum.rank)?;
            (Target::adjoint(&rs)?, common)
        }
        Pipeline::Rep { file, common } => (Target::rep(file)?, common),
        Pipeline::Conj { n, common } => (Target::conj(*n)?, common),
    };
    setup_jobs(common)?;
    let start = Instant::now();
    let mut g = target.generators(common.iter_cap, common.trials, common.seed)?;
    if let Some(cap) = common.degree_cap {
        slice_check(&mut g, &target.family(), cap);
    }
    if common.verbose {
        eprintln!("{} generators, {} stages in {:?}", g.generators.len(), g.projector.stages().len(), start.elapsed());
    }
    let json = g.to_json();
    emit(&json, common.format, || text::generators(&json))?;
    Ok(g.report.passed())
}

fn verify(universe: &UniverseArgs, input: &Option<PathBuf>, exprs: &[String], common: &Common) -> Result<bool> {
    setup_jobs(common)?;
    let target = Target::from_args(universe)?;
    let set = target.plain_universe();
    let family = target.family();
    let fam: Vec<&Derivation> = family.iter().collect();
    let exprs = read_exprs(input, exprs)?;
    let parsed = exprs.iter().map(|e| parse(e, &set)).collect::<uproj::Result<Vec<_>>>()?;
    let reports: Vec<Report> = parsed
        .par_iter()
        .zip(exprs.par_iter())
        .map(|(a, src)| verify_invariance(src, a, &fam))
        .collect();
    let mut report = Report::new();
    for r in reports {
        report.extend(r);
    }
    emit(&report, common.format, || text::report(&report))?;
    Ok(report.passed())
}

#[derive(Serialize)]
struct EvalResult {
    input: String,
    text: String,
    value: LocElemJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<String>,
}

#[derive(Serialize)]
struct EvalOutput {
    vars: Vec<String>,
    results: Vec<EvalResult>,
}

fn parse_point(text: &str, vars: &[String]) -> Result<Vec<Q>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.contains('=')) {
        let mut pt: Vec<Option<Q>> = vec![None; vars.len()];
        for p in parts {
            let (name, val) = p
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected name=value, got {p:?}")))?;
            let i = vars
                .iter()
                .position(|v| v == name.trim())
                .ok_or_else(|| CliError::Usage(format!("unknown variable {name:?}")))?;
            pt[i] = Some(rational::parse(val.trim())?);
        }
        pt.into_iter()
            .zip(vars)
            .map(|(v, name)| v.ok_or_else(|| CliError::Usage(format!("no value for {name}"))))
            .collect()
    } else {
        if parts.len() != vars.len() {
            return Err(CliError::Usage(format!("{} values for {} variables", parts.len(), vars.len())));
        }
        Ok(parts.iter().map(|p| rational::parse(p)).collect::<uproj::Result<Vec<_>>>()?)
    }
}

fn eval(
    universe: &UniverseArgs,
    at: &Option<String>,
    input: &Option<PathBuf>,
    exprs: &[String],
    common: &Common,
) -> Result<bool> {
    setup_jobs(common)?;
    let target = Target::from_args(universe)?;
    let p = target.projector()?.with_iteration_cap(common.iter_cap);
    let vars = p.denominators().vars().to_vec();
    let point = at.as_deref().map(|s| parse_point(s, &vars)).transpose()?;
    let exprs = read_exprs(input, exprs)?;
    let mut set = p.denominators().clone();
    let mut parsed = Vec::new();
    for e in &exprs {
        let a = parse(e, &set)?;
        set = a.set().clone();
        parsed.push(a);
    }
    let results = parsed
        .par_iter()
        .zip(exprs.par_iter())
        .map(|(a, src)| -> Result<EvalResult> {
            let img = p.apply(a)?;
            let at = match &point {
                Some(pt) => Some(rational::to_string(&img.evaluate(pt)?)),
                None => None,
            };
            Ok(EvalResult {
                input: src.clone(),
                text: img.to_text(),
                value: LocElemJson::from_elem(&img),
                at,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = EvalOutput { vars, results };
    emit(&out, common.format, || text::eval(&out.results.iter().map(|r| (&r.input, &r.text, &r.at)).collect::<Vec<_>>()))?;
    Ok(true)
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Cascade { datum, common } => cascade(datum, common),
        Command::Generators { which } => generators(which),
        Command::Verify { universe, input, exprs, common } => verify(universe, input, exprs, common),
        Command::Eval { universe, at, input, exprs, common } => eval(universe, at, input, exprs, common),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
