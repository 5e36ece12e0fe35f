//! Command-line front end. Every document written to stdout is JSON carrying
//! `"schema": 1`; exit codes are 0 (success, property holds), 1 (property
//! fails or no construction found) and 2 (malformed input or guard exceeded).

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::construct::{
    construct_mds, ConstructError, GeneratorJson, SearchOptions, Strategy, DEFAULT_MAX_TRIES,
};
use crate::gf::{field_of_order, FieldSpec};
use crate::multiset::{
    enumerate_outcomes, outcome_count, Sampler, SweepOptions, ZFamily, ZFamilyJson, MAX_OUTCOMES,
};
use crate::pattern::{
    check_mds_condition, reduce_supports, ConditionReport, PatternError, PatternJson, ZeroPattern,
};
use crate::reductions::{
    cde_cut_condition, cde_to_pattern, sman_code, sman_cut_condition, sman_to_pattern, CdeInstance,
    ReductionError, SmanInstance,
};
use crate::special_case::{applies, star_with_verdict, SpecialCaseError};
use crate::symdet::symbolic_det;
use crate::verify::{is_mds, VerifyError};
use crate::SCHEMA_VERSION;

/// Worker-count override for the sweep's thread pool.
pub const THREADS_ENV: &str = "GMMDS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "gmmds",
    version,
    about = "MDS generator matrices with prescribed zero patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the MDS Condition on a pattern.
    Check { input: PathBuf },
    /// Shrink row supports to weight n - k + 1, keeping the MDS Condition.
    Reduce { input: PathBuf },
    /// Build an MDS generator matrix fitting a pattern.
    Construct {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Print the symbolic det(A) of the reduced pattern to stderr.
        #[arg(long)]
        dump_poly: bool,
    },
    /// Check every maximal minor of a generator matrix.
    Verify { input: PathBuf },
    /// Histogram of multiset unions for a zero-set family.
    Multiset { input: PathBuf },
    /// Check the unique-multiset property over many families (JSON lines).
    Sweep {
        #[arg(long)]
        k: usize,
        /// Largest column count; defaults to k(k-1).
        #[arg(long)]
        n_max: Option<usize>,
        /// Check this many seeded random families instead of enumerating.
        #[arg(long, value_name = "BUDGET")]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate ordered families instead of one per symmetry class.
        #[arg(long)]
        no_canonical: bool,
    },
    /// Explicit unique multiset for families with pairwise overlaps <= 1.
    Star { input: PathBuf },
    /// Compile a cooperative data exchange instance to a pattern.
    Cde { input: PathBuf },
    /// Compile a simple multiple access network instance to patterns.
    Sman {
        input: PathBuf,
        /// Also construct the generator and its rate-many top rows.
        #[arg(long)]
        emit_code: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Field order (a prime power); defaults to the smallest admissible one.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value = "random")]
    strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIES)]
    max_tries: u64,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            strategy: self.strategy,
            seed: self.seed,
            max_tries: self.max_tries,
        }
    }

    fn field(&self) -> Result<Option<FieldSpec>, Failure> {
        self.q
            .map(|q| field_of_order(q).map_err(|e| Failure::malformed("BadField", e)))
            .transpose()
    }
}

/// A run that ends with a nonzero exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    detail: Value,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl ToString) -> Self {
        Failure {
            code,
            kind,
            message: message.to_string(),
            detail: Value::Null,
        }
    }

    fn malformed(kind: &'static str, e: impl ToString) -> Self {
        Failure::new(2, kind, e)
    }

    fn with(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }
}

impl From<PatternError> for Failure {
    fn from(e: PatternError) -> Self {
        match &e {
            PatternError::PreconditionViolated {
                witness,
                union_size,
            } => {
                let d = json!({"witness": witness, "union_size": union_size});
                Failure::new(1, "ConditionViolated", &e).with(d)
            }
            _ => Failure::malformed("InvalidPattern", e),
        }
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        match &e {
            ConstructError::ConditionViolated {
                witness,
                union_size,
            } => {
                let d = json!({"witness": witness, "union_size": union_size});
                Failure::new(1, "ConditionViolated", &e).with(d)
            }
            ConstructError::NotFound { tries } => {
                Failure::new(1, "NotFound", &e).with(json!({"tries": tries}))
            }
            ConstructError::IdenticallyZero => Failure::new(1, "IdenticallyZero", &e),
            ConstructError::VerificationFailed { columns } => {
                Failure::new(1, "VerificationFailed", &e).with(json!({"failing_columns": columns}))
            }
            ConstructError::FieldTooSmall { .. } => Failure::malformed("FieldTooSmall", e),
            ConstructError::Verify(_) => Failure::malformed("GuardExceeded", e),
            _ => Failure::malformed("InvalidInput", e),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::CutConditionViolated {
                ref witness,
                union_size,
            } => {
                let d = json!({"witness": witness, "union_size": union_size});
                Failure::new(1, "CutConditionViolated", &e).with(d)
            }
            ReductionError::RateExceedsCapacity { rate, k } => {
                Failure::new(1, "RateExceedsCapacity", &e).with(json!({"rate": rate, "k": k}))
            }
            ReductionError::TooManyTransmissions { k, n } => {
                Failure::new(1, "TooManyTransmissions", &e).with(json!({"k": k, "n": n}))
            }
            ReductionError::Construct(c) => c.into(),
            ReductionError::Pattern(p) => p.into(),
            ReductionError::InvalidInstance(_) => Failure::malformed("InvalidInstance", e),
        }
    }
}

/// Wraps a body with the schema tag.
#[derive(Serialize)]
struct Doc<T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: T,
}

fn doc<T: Serialize>(body: T) -> Doc<T> {
    Doc {
        schema: SCHEMA_VERSION,
        body,
    }
}

struct Output<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Output<'_> {
    fn emit<T: Serialize>(&mut self, body: T) -> Result<(), Failure> {
        let line = serde_json::to_string(&doc(body)).expect("serializable output");
        writeln!(self.out, "{line}").map_err(|e| Failure::new(2, "Io", e))
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.err, "{msg}");
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::malformed("Io", format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn parse<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::malformed("ParseError", format!("{}: {e}", path.display())))
}

fn load_pattern(path: &PathBuf) -> Result<ZeroPattern, Failure> {
    let j: PatternJson = parse(path)?;
    Ok(ZeroPattern::from_json(&j)?)
}

fn load_family(path: &PathBuf) -> Result<ZFamily, Failure> {
    let j: ZFamilyJson = parse(path)?;
    ZFamily::from_json(&j).map_err(|e| Failure::malformed("InvalidFamily", e))
}

/// Binary-row form, the unambiguous wire form for emitted patterns.
fn pattern_rows(p: &ZeroPattern) -> PatternJson {
    PatternJson {
        k: p.k(),
        n: p.n(),
        rows: Some(
            p.to_binary_rows()
                .into_iter()
                .map(|r| r.into_iter().map(u64::from).collect())
                .collect(),
        ),
        zeros: None,
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure::malformed(
            "BadEnvironment",
            format!("{THREADS_ENV} must be a positive integer, got {raw:?}"),
        )
    })?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Parses `args` (including the program name) and runs one subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut io = Output { out, err };
    let result = configure_threads().and_then(|_| dispatch(cli.command, &mut io));
    match result {
        Ok(code) => code,
        Err(f) => {
            let mut body = json!({"error": f.kind, "message": f.message});
            if let Value::Object(extra) = f.detail {
                body.as_object_mut().expect("object").extend(extra);
            }
            let _ = io.emit(body);
            io.note(&format!("error: {}", f.message));
            f.code
        }
    }
}

fn exit(holds: bool) -> i32 {
    if holds {
        0
    } else {
        1
    }
}

fn dispatch(cmd: Command, io: &mut Output) -> Result<i32, Failure> {
    match cmd {
        Command::Check { input } => {
            let pat = load_pattern(&input)?;
            let report = check_mds_condition(&pat)?;
            let holds = report.holds;
            io.emit(report)?;
            Ok(exit(holds))
        }
        Command::Reduce { input } => {
            let pat = load_pattern(&input)?;
            let reduced = reduce_supports(&pat)?;
            io.emit(pattern_rows(&reduced))?;
            Ok(0)
        }
        Command::Construct {
            input,
            search,
            dump_poly,
        } => {
            let pat = load_pattern(&input)?;
            let field = search.field()?;
            if dump_poly {
                dump_polynomial(&pat, io)?;
            }
            let g = construct_mds(&pat, field, &search.options())?;
            io.emit(g.to_json())?;
            Ok(0)
        }
        Command::Verify { input } => {
            let j: GeneratorJson = parse(&input)?;
            let (field, matrix) = j
                .decode()
                .map_err(|e| Failure::malformed("InvalidMatrix", e))?;
            let verdict = is_mds(&field, &matrix).map_err(|e| match e {
                VerifyError::TooLarge { .. } => Failure::malformed("GuardExceeded", e),
                VerifyError::BadShape { .. } => Failure::malformed("InvalidMatrix", e),
            })?;
            let holds = verdict.is_mds;
            if let Some(cols) = &verdict.failing_columns {
                io.note(&format!("singular column set: {cols:?}"));
            }
            io.emit(verdict)?;
            Ok(exit(holds))
        }
        Command::Multiset { input } => {
            let fam = load_family(&input)?;
            let report =
                enumerate_outcomes(&fam).map_err(|e| Failure::malformed("GuardExceeded", e))?;
            #[derive(Serialize)]
            struct Entry {
                multiset: Vec<usize>,
                count: u64,
            }
            #[derive(Serialize)]
            struct Body {
                k: usize,
                n: usize,
                total_outcomes: u64,
                holds: bool,
                witness: Option<Vec<usize>>,
                unique_witnesses: Vec<Vec<usize>>,
                histogram: Vec<Entry>,
            }
            let holds = report.holds;
            io.emit(Body {
                k: fam.k(),
                n: fam.n(),
                total_outcomes: report.total_outcomes,
                holds,
                witness: report.witness().map(|w| w.to_vec()),
                unique_witnesses: report.unique_witnesses.iter().map(|w| w.to_vec()).collect(),
                histogram: report
                    .histogram
                    .iter()
                    .map(|(m, &count)| Entry {
                        multiset: m.to_vec(),
                        count,
                    })
                    .collect(),
            })?;
            Ok(exit(holds))
        }
        Command::Sweep {
            k,
            n_max,
            sample,
            seed,
            no_canonical,
        } => {
            if k == 0 {
                return Err(Failure::malformed(
                    "InvalidArgument",
                    "--k must be positive",
                ));
            }
            if outcome_count(k) > MAX_OUTCOMES {
                return Err(Failure::malformed(
                    "GuardExceeded",
                    format!(
                        "k = {k} needs {} outcomes per family (limit {MAX_OUTCOMES})",
                        outcome_count(k)
                    ),
                ));
            }
            let opts = SweepOptions {
                k,
                n_max,
                canonicalize: !no_canonical,
                sampler: sample.map(|budget| Sampler { budget, seed }),
            };
            let report = crate::multiset::sweep_instances(&opts)
                .map_err(|e| Failure::malformed("GuardExceeded", e))?;
            for r in &report.records {
                io.emit(r)?;
            }
            let summary =
                serde_json::to_string(&doc(&report.summary)).expect("serializable summary");
            io.note(&summary);
            Ok(exit(report.summary.failed == 0))
        }
        Command::Star { input } => {
            let fam = load_family(&input)?;
            if !applies(&fam) {
                return Err(
                    Failure::new(1, "NotApplicable", SpecialCaseError::NotApplicable)
                        .with(json!({"applies": false})),
                );
            }
            let (star, count) = star_with_verdict(&fam).map_err(|e| match e {
                SpecialCaseError::Multiset(m) => Failure::malformed("GuardExceeded", m),
                other => Failure::new(1, "NotApplicable", other),
            })?;
            #[derive(Serialize)]
            struct Body<'a> {
                applies: bool,
                #[serde(flatten)]
                star: &'a crate::special_case::StarSelection,
                count: u64,
                unique: bool,
            }
            io.emit(Body {
                applies: true,
                star: &star,
                count,
                unique: count == 1,
            })?;
            Ok(exit(count == 1))
        }
        Command::Cde { input } => {
            let inst: CdeInstance = parse(&input)?;
            let cut = cde_cut_condition(&inst)?;
            let pat = cde_to_pattern(&inst)?;
            #[derive(Serialize)]
            struct Body {
                k: usize,
                n: usize,
                cut_condition: ConditionReport,
                mds_condition: ConditionReport,
                pattern: PatternJson,
            }
            io.emit(Body {
                k: pat.k(),
                n: pat.n(),
                cut_condition: cut,
                mds_condition: check_mds_condition(&pat)?,
                pattern: pattern_rows(&pat),
            })?;
            Ok(0)
        }
        Command::Sman {
            input,
            emit_code,
            search,
        } => {
            let inst: SmanInstance = parse(&input)?;
            let cut = sman_cut_condition(&inst)?;
            #[derive(Serialize)]
            struct Code {
                generator: GeneratorJson,
                subspace_matrix: Vec<Vec<u32>>,
            }
            #[derive(Serialize)]
            struct Body {
                k: usize,
                n: usize,
                total_rate: usize,
                cut_condition: ConditionReport,
                mds_condition: ConditionReport,
                subspace_pattern: PatternJson,
                pattern: PatternJson,
                #[serde(skip_serializing_if = "Option::is_none")]
                code: Option<Code>,
            }
            let (patterns, code) = if emit_code {
                let field = search.field()?;
                let c = sman_code(&inst, field, &search.options())?;
                let rows = c
                    .subspace
                    .to_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|e| e.value()).collect())
                    .collect();
                let code = Code {
                    generator: c.generator.to_json(),
                    subspace_matrix: rows,
                };
                (c.patterns, Some(code))
            } else {
                (sman_to_pattern(&inst)?, None)
            };
            io.emit(Body {
                k: patterns.full.k(),
                n: patterns.full.n(),
                total_rate: patterns.total_rate,
                cut_condition: cut,
                mds_condition: check_mds_condition(&patterns.full)?,
                subspace_pattern: pattern_rows(&patterns.subspace),
                pattern: pattern_rows(&patterns.full),
                code,
            })?;
            Ok(0)
        }
    }
}

/// Writes `det(A)` for the reduced pattern to stderr, if the pattern admits
/// a reduction and the expansion is within the outcome guard.
fn dump_polynomial(pat: &ZeroPattern, io: &mut Output) -> Result<(), Failure> {
    let Ok(reduced) = reduce_supports(pat) else {
        return Ok(());
    };
    if outcome_count(reduced.k()) > MAX_OUTCOMES {
        return Err(Failure::malformed(
            "GuardExceeded",
            format!(
                "symbolic determinant for k = {} is too large to expand",
                reduced.k()
            ),
        ));
    }
    let poly = symbolic_det(reduced.n(), &reduced.zero_sets())
        .map_err(|e| Failure::malformed("InvalidPattern", e))?;
    let text = poly.dump();
    let _ = write!(io.err, "{text}");
    if !text.is_empty() && !text.ends_with('\n') {
        let _ = writeln!(io.err);
    }
    Ok(())
}
