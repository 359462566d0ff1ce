//! Command-line front end.
//!
//! [`run`] does the work and returns what to write; [`main_with_args`] writes
//! it and maps the outcome to an exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | parse error, bad input or violated precondition |
//! | 2 | hypotheses of the certified bound unmet |
//! | 3 | a size cap was exceeded |

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chart::{
    bicyclic_chart_search_sharded, cyclic_chart, idempotent_obstruction, polynomial_chart, product_chart,
    random_perm_chart, saturating_chart, Chart, ChartFile, ObstructionCertificate, QualityReport, SearchConfig,
    DEFAULT_PRODUCT_CAP,
};
use crate::entropy::{
    estimate_row, monotonicity_report, sweep_csv, CountOptions, CountStrategy, SweepParams, SweepRow,
    DEFAULT_TRACE_CAP,
};
use crate::error::{Error, Result};
use crate::monoid::{FiniteMonoid, FrobeniusTrace, IntPolynomial, Monoid, TableFile};
use crate::rational::{self, Rational};
use crate::shift::{surjunctivity_check, AdmissibilityMode, Sft, SurjunctivityReport, DEFAULT_CONFIGURATION_CAP};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Environment variable overriding [`DEFAULT_PRODUCT_CAP`].
pub const PRODUCT_CAP_ENV: &str = "SOFICLAB_PRODUCT_CAP";

#[derive(Debug, Parser)]
#[command(name = "soficlab", version, about = "Sofic charts, cellular automata over monoids and per-chart entropy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, score and search for charts
    #[command(subcommand)]
    Chart(ChartCommand),
    /// Trace counts and bounds for subshifts
    #[command(subcommand)]
    Entropy(EntropyCommand),
    /// Finite monoid tables
    #[command(subcommand)]
    Monoid(MonoidCommand),
}

#[derive(Debug, Subcommand)]
pub enum ChartCommand {
    /// Build a chart and write it as JSON
    Build(BuildArgs),
    /// Measure SM1-SM4 of a chart file, with obstructions at idempotents
    Quality(QualityArgs),
    /// Local search for charts of the bicyclic monoid
    SearchBicyclic(SearchArgs),
}

#[derive(Debug, Subcommand)]
pub enum EntropyCommand {
    /// Count good traces on one chart
    Estimate(EstimateArgs),
    /// Count good traces on a family of charts
    Sweep(SweepArgs),
    /// Evaluate the certified monotonicity bound
    Bound(BoundArgs),
}

#[derive(Debug, Subcommand)]
pub enum MonoidCommand {
    /// Non-trivial idempotents with Frobenius derivations
    Idempotents(MonoidArgs),
    /// Group test
    Isgroup(MonoidArgs),
    /// Exhaustive injective => surjective check for small automata
    CaCheck(CaCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartKind {
    Cyclic,
    Saturating,
    Poly,
    Random,
    Product,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub kind: Option<ChartKind>,
    /// Members of K, as `a..b` (inclusive) or a comma list
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k_set: Option<String>,
    /// Generator count (random)
    #[arg(long = "k")]
    pub generators: Option<usize>,
    /// Maximum word length (random)
    #[arg(long)]
    pub len: Option<usize>,
    /// Factor chart files (product), repeatable
    #[arg(long = "part")]
    pub parts: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Carrier size; `--p` (prime) and `--d` are synonyms
    #[arg(long = "n", visible_aliases = ["p", "d"])]
    pub size: Option<usize>,
    /// Also write the quality report here
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct QualityArgs {
    #[arg(long)]
    pub chart: PathBuf,
    /// Descriptor used to read the chart's labels instead of its own
    #[arg(long)]
    pub monoid: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 50)]
    pub d: usize,
    #[arg(long, default_value_t = 10_000)]
    pub iterations: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// SM2 defect tolerated before penalty, as `num/den`
    #[arg(long)]
    pub budget: Option<String>,
    #[arg(long)]
    pub restart_after: Option<usize>,
    /// Write the per-iteration score trace here as CSV
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Local,
}

impl From<ModeArg> for AdmissibilityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => AdmissibilityMode::Exact,
            ModeArg::Local => AdmissibilityMode::Local,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CountArgs {
    /// Window labels, comma separated
    #[arg(long = "F", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long)]
    pub delta: String,
    #[arg(long, default_value = "1/2")]
    pub epsilon: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Local)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// Sample this many traces instead of enumerating (lower bound)
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TRACE_CAP)]
    pub cap: u64,
    /// Enumerate even when the full-shift shortcut applies
    #[arg(long)]
    pub force_enumeration: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub chart: PathBuf,
    #[arg(long)]
    pub sft: PathBuf,
    #[arg(long)]
    pub monoid: Option<String>,
    #[command(flatten)]
    pub count: CountArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub sft: PathBuf,
    /// Chart files, repeatable; alternative to `--kind` with `--sizes`
    #[arg(long = "chart")]
    pub charts: Vec<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Carrier sizes for `--kind`, as `a..b` or a comma list
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long)]
    pub monoid: Option<String>,
    #[command(flatten)]
    pub count: CountArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub chart: PathBuf,
    #[arg(long)]
    pub sft: PathBuf,
    #[arg(long)]
    pub monoid: Option<String>,
    #[arg(long = "F", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long)]
    pub delta: String,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MonoidSource {
    /// Multiplication table JSON file
    #[arg(long, conflicts_with = "monoid")]
    pub table: Option<PathBuf>,
    /// Finite monoid descriptor such as `bool-mul` or `cyclic:4`
    #[arg(long)]
    pub monoid: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MonoidArgs {
    #[command(flatten)]
    pub source: MonoidSource,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CaCheckArgs {
    #[command(flatten)]
    pub source: MonoidSource,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 2)]
    pub max_memory: usize,
    #[arg(long, default_value_t = DEFAULT_CONFIGURATION_CAP)]
    pub cap: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Success,
    Failed,
    HypothesesUnmet,
    CapExceeded,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Failed => 1,
            Status::HypothesesUnmet => 2,
            Status::CapExceeded => 3,
        }
    }

    fn of(err: &Error) -> Self {
        match err {
            Error::HypothesesUnmet(_) => Status::HypothesesUnmet,
            Error::CapExceeded { .. } => Status::CapExceeded,
            _ => Status::Failed,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    Status::of(err).code()
}

/// Everything a command produces. The main output goes to `out` when given
/// and to stdout otherwise; the summary line goes to whichever of stdout and
/// stderr is left free.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(PathBuf, String)>,
    pub stdout: String,
    pub summary: Vec<String>,
    pub status: Option<Status>,
}

impl Outcome {
    fn primary(out: &Option<PathBuf>, text: String) -> Self {
        let mut o = Outcome::default();
        match out {
            Some(path) => o.files.push((path.clone(), text)),
            None => o.stdout = text,
        }
        o
    }

    fn summary(mut self, line: impl Into<String>) -> Self {
        self.summary.push(line.into());
        self
    }

    pub fn status(&self) -> Status {
        self.status.unwrap_or(Status::Success)
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn temp_path(path: &Path) -> Result<PathBuf> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{}: not a file path", path.display())))?;
    Ok(path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id())))
}

/// Writes every file to a temporary sibling first and renames only once all
/// of them were written.
pub fn write_atomically(files: &[(PathBuf, String)]) -> Result<()> {
    let mut staged: Vec<(PathBuf, &Path)> = Vec::new();
    let cleanup = |staged: &[(PathBuf, &Path)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (path, text) in files {
        let tmp = match temp_path(path) {
            Ok(t) => t,
            Err(e) => {
                cleanup(&staged);
                return Err(e);
            }
        };
        if let Err(e) = fs::write(&tmp, text) {
            let _ = fs::remove_file(&tmp);
            cleanup(&staged);
            return Err(Error::Io(format!("{}: {e}", path.display())));
        }
        staged.push((tmp, path));
    }
    for (i, (tmp, path)) in staged.iter().enumerate() {
        if let Err(e) = fs::rename(tmp, path) {
            cleanup(&staged[i..]);
            return Err(Error::Io(format!("{}: {e}", path.display())));
        }
    }
    Ok(())
}

fn product_cap() -> Result<usize> {
    match std::env::var(PRODUCT_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{PRODUCT_CAP_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_PRODUCT_CAP),
    }
}

/// `a..b` (inclusive) or a comma list of integers.
pub fn parse_int_set<T>(text: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr + Copy + Ord + TryFrom<i64> + Into<i128>,
{
    let bad = || Error::Parse(format!("bad integer set {text:?}"));
    let num = |s: &str| s.trim().parse::<T>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi): (i128, i128) = (num(lo)?.into(), num(hi)?.into());
        if lo > hi || hi - lo > 1 << 24 {
            return Err(bad());
        }
        return (lo..=hi)
            .map(|x| i64::try_from(x).ok().and_then(|x| T::try_from(x).ok()).ok_or_else(bad))
            .collect();
    }
    text.split(',').filter(|s| !s.trim().is_empty()).map(num).collect()
}

fn parse_labels(text: &str) -> Vec<String> {
    crate::monoid::split_top_level(text).into_iter().map(str::to_owned).collect()
}

fn parse_rational(text: &str, what: &str) -> Result<Rational> {
    rational::parse(text).map_err(|e| Error::Parse(format!("--{what}: {e}")))
}

fn load_chart(path: &Path, monoid: Option<&str>) -> Result<Chart> {
    let base = path.parent();
    let monoid = monoid.map(|m| Monoid::parse_with_base(m, base)).transpose()?;
    Chart::from_json(&read_text(path)?, monoid.as_ref(), base)
}

fn load_sft(path: &Path, monoid: &Monoid) -> Result<Sft> {
    Sft::from_json(&read_text(path)?, monoid)
}

fn required<T: Copy>(v: Option<T>, flag: &str, kind: ChartKind) -> Result<T> {
    v.ok_or_else(|| Error::Precondition(format!("--kind {kind:?} needs --{flag}").to_lowercase()))
}

fn build_family_chart(family: &FamilyArgs, size: Option<usize>) -> Result<Chart> {
    let kind = family
        .kind
        .ok_or_else(|| Error::Precondition("--kind is required".into()))?;
    let k_set = || {
        family
            .k_set
            .as_deref()
            .ok_or_else(|| Error::Precondition("--K is required".into()))
    };
    match kind {
        ChartKind::Cyclic => cyclic_chart(required(size, "n", kind)?, &parse_int_set::<i64>(k_set()?)?),
        ChartKind::Saturating => {
            let ks: Vec<i64> = parse_int_set(k_set()?)?;
            let ks = ks
                .into_iter()
                .map(|k| u64::try_from(k).map_err(|_| Error::Parse(format!("{k} is not a natural number"))))
                .collect::<Result<Vec<_>>>()?;
            saturating_chart(required(size, "n", kind)?, &ks)
        }
        ChartKind::Poly => {
            let polys = parse_labels(k_set()?)
                .iter()
                .map(|s| s.parse::<IntPolynomial>())
                .collect::<Result<Vec<_>>>()?;
            polynomial_chart(required(size, "p", kind)? as u64, &polys)
        }
        ChartKind::Random => random_perm_chart(
            required(size, "d", kind)?,
            required(family.generators, "k", kind)?,
            required(family.len, "len", kind)?,
            family.seed,
        ),
        ChartKind::Product => {
            if family.parts.is_empty() {
                return Err(Error::Precondition("--kind product needs --part files".into()));
            }
            let parts = family
                .parts
                .iter()
                .map(|p| load_chart(p, None))
                .collect::<Result<Vec<_>>>()?;
            product_chart(&parts, product_cap()?)
        }
    }
}

#[derive(Serialize)]
struct QualityOutput {
    monoid: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    verdict: String,
    report: QualityReport,
    obstructions: Vec<ObstructionCertificate>,
}

fn quality_output(chart: &Chart) -> Result<QualityOutput> {
    let report = chart.quality()?;
    let obstructions = chart
        .idempotent_positions()
        .into_iter()
        .map(|i| idempotent_obstruction(chart, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(QualityOutput {
        monoid: chart.monoid().to_string(),
        seed: chart.seed(),
        verdict: report.verdict(),
        report,
        obstructions,
    })
}

fn chart_build(args: &BuildArgs) -> Result<Outcome> {
    let chart = build_family_chart(&args.family, args.size)?;
    let mut file: ChartFile = chart.to_file();
    file.seed.get_or_insert(args.family.seed);
    let q = quality_output(&chart)?;
    let mut out = Outcome::primary(&args.out, json(&file)).summary(q.verdict.clone());
    if let Some(path) = &args.report {
        out.files.push((path.clone(), json(&q)));
    }
    Ok(out)
}

fn chart_quality(args: &QualityArgs) -> Result<Outcome> {
    let chart = load_chart(&args.chart, args.monoid.as_deref())?;
    let q = quality_output(&chart)?;
    let verdict = q.verdict.clone();
    Ok(Outcome::primary(&args.out, json(&q)).summary(verdict))
}

#[derive(Serialize)]
struct SearchOutput {
    seed: u64,
    d: usize,
    iterations: usize,
    shards: usize,
    #[serde(with = "rational")]
    sm2_budget: Rational,
    restart_after: usize,
    score: String,
    verdict: String,
    report: QualityReport,
    obstruction: ObstructionCertificate,
    chart: ChartFile,
}

fn chart_search(args: &SearchArgs) -> Result<Outcome> {
    let mut config = SearchConfig::new(args.d, args.iterations, args.seed);
    if let Some(b) = &args.budget {
        config.sm2_budget = parse_rational(b, "budget")?;
    }
    if let Some(r) = args.restart_after {
        config.restart_after = r;
    }
    let found = bicyclic_chart_search_sharded(&config, args.shards)?;
    let qp = found
        .chart
        .idempotent_positions()
        .first()
        .copied()
        .ok_or_else(|| Error::Precondition("search chart lists no idempotent".into()))?;
    let output = SearchOutput {
        seed: config.seed,
        d: config.d,
        iterations: config.iterations,
        shards: args.shards,
        sm2_budget: config.sm2_budget,
        restart_after: config.restart_after,
        score: format!("{}/{}", found.score.numer(), found.score.denom()),
        verdict: found.report.verdict(),
        obstruction: idempotent_obstruction(&found.chart, qp)?,
        report: found.report.clone(),
        chart: found.chart.to_file(),
    };
    let mut out = Outcome::primary(&args.out, json(&output)).summary(output.verdict.clone());
    if let Some(path) = &args.trace {
        let mut csv = format!("# soficlab seed={}\niteration,sm2_defect,sm3_separation,score,best_score,restarted\n", config.seed);
        for s in &found.trace {
            csv.push_str(&format!(
                "{},{},{},{}/{},{}/{},{}\n",
                s.iteration,
                rational::format(&s.sm2_defect),
                rational::format(&s.sm3_separation),
                s.score.numer(),
                s.score.denom(),
                s.best_score.numer(),
                s.best_score.denom(),
                s.restarted
            ));
        }
        out.files.push((path.clone(), csv));
    }
    Ok(out)
}

fn sweep_params(count: &CountArgs, seed: u64) -> Result<SweepParams> {
    let strategy = match count.samples {
        Some(samples) => CountStrategy::Sampled { samples, seed },
        None => CountStrategy::Exact,
    };
    Ok(SweepParams {
        f: parse_labels(&count.f),
        delta: parse_rational(&count.delta, "delta")?,
        epsilon: parse_rational(&count.epsilon, "epsilon")?,
        mode: count.mode.into(),
        count: CountOptions {
            strategy,
            shards: count.shards.max(1),
            cap: count.cap,
            force_enumeration: count.force_enumeration,
        },
    })
}

fn entropy_estimate(args: &EstimateArgs) -> Result<Outcome> {
    let chart = load_chart(&args.chart, args.monoid.as_deref())?;
    let sft = load_sft(&args.sft, chart.monoid())?;
    let params = sweep_params(&args.count, args.seed)?;
    let row = estimate_row(&chart, &sft, &params)?;
    let unmet = row.hypotheses_unmet();
    let line = format!(
        "d={} count={} log/d={} nats",
        row.d,
        row.count.as_ref().map(ToString::to_string).unwrap_or_default(),
        row.log_count_per_d_nats.unwrap_or(f64::NAN)
    );
    let mut out = Outcome::primary(&args.out, sweep_csv(&[row], Some(args.seed))).summary(line);
    if unmet {
        out.status = Some(Status::HypothesesUnmet);
    }
    Ok(out)
}

fn entropy_sweep(args: &SweepArgs) -> Result<Outcome> {
    let seed = args.family.seed;
    let params = sweep_params(&args.count, seed)?;
    let charts: Vec<std::result::Result<Chart, (usize, Error)>> = match (&args.sizes, args.charts.is_empty()) {
        (Some(sizes), true) => parse_int_set::<i64>(sizes)?
            .into_iter()
            .map(|n| {
                let n = usize::try_from(n).map_err(|_| Error::Parse(format!("bad size {n}")))?;
                Ok(build_family_chart(&args.family, Some(n)).map_err(|e| (n, e)))
            })
            .collect::<Result<_>>()?,
        (None, false) => args
            .charts
            .iter()
            .map(|p| load_chart(p, args.monoid.as_deref()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(Ok)
            .collect(),
        _ => return Err(Error::Precondition("give either --chart files or --kind with --sizes".into())),
    };
    let monoid = match (&args.monoid, charts.iter().find_map(|c| c.as_ref().ok())) {
        (Some(m), _) => Monoid::parse_with_base(m, args.sft.parent())?,
        (None, Some(c)) => c.monoid().clone(),
        (None, None) => return Err(charts.into_iter().next().and_then(|c| c.err()).map(|(_, e)| e).unwrap_or(Error::EmptyProduct)),
    };
    let sft = load_sft(&args.sft, &monoid)?;
    let mut status = Status::Success;
    let rows: Vec<SweepRow> = charts
        .iter()
        .map(|c| {
            let result = match c {
                Ok(chart) => estimate_row(chart, &sft, &params).map_err(|e| (chart.d(), e)),
                Err((n, e)) => Err((*n, e.clone())),
            };
            match result {
                Ok(row) => {
                    if row.hypotheses_unmet() {
                        status = status.max(Status::HypothesesUnmet);
                    }
                    row
                }
                Err((d, e)) => {
                    status = status.max(Status::of(&e));
                    SweepRow::failed(d, params.mode, &e)
                }
            }
        })
        .collect();
    let line = format!("{} rows", rows.len());
    let mut out = Outcome::primary(&args.out, sweep_csv(&rows, Some(seed))).summary(line);
    out.status = Some(status);
    Ok(out)
}

fn entropy_bound(args: &BoundArgs) -> Result<Outcome> {
    let chart = load_chart(&args.chart, args.monoid.as_deref())?;
    let sft = load_sft(&args.sft, chart.monoid())?;
    let f = chart.positions_of(&parse_labels(&args.f))?;
    let report = monotonicity_report(&chart, &sft, &f, parse_rational(&args.delta, "delta")?)?;
    let line = match report.certified_upper_bound {
        Some(b) => format!("beta0={} certified upper bound {b}", report.beta0),
        None => format!("beta0={} hypotheses unmet: {}", report.beta0, report.unmet.join("; ")),
    };
    let met = report.hypotheses_met;
    let mut out = Outcome::primary(&args.out, json(&report)).summary(line);
    if !met {
        out.status = Some(Status::HypothesesUnmet);
    }
    Ok(out)
}

fn load_finite(source: &MonoidSource) -> Result<FiniteMonoid> {
    match (&source.table, &source.monoid) {
        (Some(path), _) => {
            let file: TableFile = serde_json::from_str(&read_text(path)?)?;
            FiniteMonoid::from_table_file(file)
        }
        (None, Some(desc)) => match Monoid::parse_with_base(desc, None)? {
            Monoid::Finite(fm) => Ok(fm),
            other => Err(Error::Precondition(format!("{other} is not a finite monoid"))),
        },
        (None, None) => Err(Error::Precondition("give --table or --monoid".into())),
    }
}

#[derive(Serialize)]
struct IdempotentsOutput {
    order: usize,
    identity: usize,
    idempotents: Vec<usize>,
    frobenius: Vec<FrobeniusTrace>,
}

#[derive(Serialize)]
struct IsGroupOutput {
    order: usize,
    is_group: bool,
    nontrivial_idempotent: Option<usize>,
}

#[derive(Serialize)]
struct CaCheckOutput {
    all_injective_surjective: bool,
    #[serde(flatten)]
    report: SurjunctivityReport,
}

fn monoid_command(cmd: &MonoidCommand) -> Result<Outcome> {
    match cmd {
        MonoidCommand::Idempotents(args) => {
            let fm = load_finite(&args.source)?;
            let output = IdempotentsOutput {
                order: fm.order(),
                identity: fm.identity(),
                idempotents: fm.nontrivial_idempotents(),
                frobenius: (0..fm.order()).filter_map(|a| fm.frobenius_idempotent(a)).collect(),
            };
            let line = format!("{:?}", output.idempotents);
            Ok(Outcome::primary(&args.out, json(&output)).summary(line))
        }
        MonoidCommand::Isgroup(args) => {
            let fm = load_finite(&args.source)?;
            let output = IsGroupOutput {
                order: fm.order(),
                is_group: fm.is_group(),
                nontrivial_idempotent: fm.find_nontrivial_idempotent(),
            };
            let line = output.is_group.to_string();
            Ok(Outcome::primary(&args.out, json(&output)).summary(line))
        }
        MonoidCommand::CaCheck(args) => {
            let fm = load_finite(&args.source)?;
            let report = surjunctivity_check(&fm, args.alphabet, args.max_memory, args.cap)?;
            let output = CaCheckOutput {
                all_injective_surjective: report.all_injective_surjective(),
                report,
            };
            let line = format!("all injective CAs surjective: {}", output.all_injective_surjective);
            Ok(Outcome::primary(&args.out, json(&output)).summary(line))
        }
    }
}

/// Runs a parsed command without touching the file system's outputs.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Chart(ChartCommand::Build(a)) => chart_build(a),
        Command::Chart(ChartCommand::Quality(a)) => chart_quality(a),
        Command::Chart(ChartCommand::SearchBicyclic(a)) => chart_search(a),
        Command::Entropy(EntropyCommand::Estimate(a)) => entropy_estimate(a),
        Command::Entropy(EntropyCommand::Sweep(a)) => entropy_sweep(a),
        Command::Entropy(EntropyCommand::Bound(a)) => entropy_bound(a),
        Command::Monoid(cmd) => monoid_command(cmd),
    }
}

/// Parses `args`, runs, writes outputs and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = write_atomically(&outcome.files) {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    let to_stdout = outcome.stdout.is_empty();
    print!("{}", outcome.stdout);
    for line in &outcome.summary {
        if to_stdout {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    outcome.status().code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("soficlab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn integer_sets() {
        assert_eq!(parse_int_set::<i64>("-2..2").unwrap(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(parse_int_set::<i64>("3, 1,2").unwrap(), vec![3, 1, 2]);
        assert!(parse_int_set::<i64>("2..1").is_err());
        assert!(parse_int_set::<i64>("x").is_err());
    }

    #[test]
    fn cyclic_build_has_five_maps() {
        let out = run(&parse(&["chart", "build", "--kind", "cyclic", "--n", "16", "--K", "-2..2"])).unwrap();
        let file: ChartFile = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(file.sigma.len(), 5);
        assert_eq!(file.seed, Some(DEFAULT_SEED));
        assert!(out.summary[0].starts_with("(SM1–SM4) at (ε=0/1, Δ=1)"));
    }

    #[test]
    fn poly_build_reports_separation() {
        let dir = tempfile::tempdir().unwrap();
        let report = dir.path().join("r.json");
        let cli = parse(&["chart", "build", "--kind", "poly", "--p", "7", "--K", "X,X^2", "--report", report.to_str().unwrap()]);
        let out = run(&cli).unwrap();
        let q: serde_json::Value = serde_json::from_str(&out.files[0].1).unwrap();
        assert_eq!(q["report"]["sm3_separation"], "5/7");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 1);
        assert_eq!(exit_code(&Error::HypothesesUnmet("x".into())), 2);
        assert_eq!(exit_code(&Error::cap("x", 1, 0)), 3);
        assert_eq!(main_with_args(["soficlab", "chart", "build", "--kind", "cyclic", "--n", "4", "--K", "1..x"]), 1);
        assert_eq!(main_with_args(["soficlab", "nonsense"]), 1);
    }

    #[test]
    fn atomic_write_leaves_nothing_on_failure() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("a.txt");
        let bad = dir.path().join("missing").join("b.txt");
        assert!(write_atomically(&[(good.clone(), "x".into()), (bad, "y".into())]).is_err());
        assert!(!good.exists());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
        write_atomically(&[(good.clone(), "x".into())]).unwrap();
        assert_eq!(fs::read_to_string(good).unwrap(), "x");
    }
}
