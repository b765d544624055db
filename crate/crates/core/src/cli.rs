//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical mismatch, 2 on a usage or
//! input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::expected_table_entry;
use crate::comparison::{f18_counterexample, verify_f_welldefined, verify_h0_iso, verify_q_relations, verify_theorem};
use crate::derham::{build, check_sum_decomposition, cross_effect_h0, kunneth_check, Family};
use crate::error::{Error, Result};
use crate::koszul::{derived_sp, generator_presentation};
use crate::linear::{exchange, smith_normal_form, GroupInvariants, IntMatrix};
use crate::numtheory::{check_central_divisibility, is_prime, prime_divisors, sweep_binomial_lemma};
use crate::poly::{enumerate_basis, Functor};

/// Environment variable read for the worker count when `--jobs` is absent.
pub const JOBS_ENV: &str = "DUAL_DERHAM_JOBS";

const MAX_DEGREE: usize = 12;
const MAX_RANK: usize = 6;
const DEFAULT_DEGREE: usize = 7;
const DEFAULT_RANK: usize = 2;

#[derive(Parser, Debug)]
#[command(
    name = "dual-derham",
    version,
    about = "Integral homology of dual de Rham complexes C^n(Z^r) and checks of their structure"
)]
pub struct Cli {
    /// Worker threads (defaults to the DUAL_DERHAM_JOBS variable, then to all cores)
    #[arg(long, global = true, env = JOBS_ENV)]
    pub jobs: Option<usize>,

    /// Accepted for interface stability; every computation is deterministic
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output format (verification commands default to json, the rest to md)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    C,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctorArg {
    Wedge,
    Sym,
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology H_i C^q(Z^r), i = 0..3, against the predicted table
    Table(TableArgs),
    /// Homology of a single complex in every degree
    Homology(HomologyArgs),
    /// Monomial basis of a functor on Z^r
    Basis(BasisArgs),
    /// Derived symmetric power L_i SP^n((Z/p)^r) from the Koszul model
    DerivedSp(DerivedSpArgs),
    /// Verification suites
    Verify(VerifyArgs),
    /// Counterexamples
    Counterexample {
        #[command(subcommand)]
        which: Counterexample,
    },
    /// Smith normal form of a matrix file (text or JSON exchange format)
    Snf(SnfArgs),
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 2)]
    pub min_n: usize,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub max_n: usize,
    #[arg(long, default_value_t = DEFAULT_RANK)]
    pub rank: usize,
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    #[arg(long, value_enum, default_value = "c")]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_RANK)]
    pub rank: usize,
    /// Only this degree
    #[arg(long)]
    pub degree: Option<usize>,
    /// Write d_1, …, d_n as d{i}.txt into this directory
    #[arg(long)]
    pub dump_matrices: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    #[arg(long, value_enum)]
    pub functor: FunctorArg,
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = DEFAULT_RANK)]
    pub rank: usize,
}

#[derive(Args, Debug)]
pub struct DerivedSpArgs {
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = DEFAULT_RANK)]
    pub rank: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run every suite with its default parameters
    #[arg(long)]
    pub all: bool,
    #[command(subcommand)]
    pub suite: Option<Suite>,
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// H_0 C^n(Z^r) through q_n, for 2 <= n <= max-n and 1 <= r <= rank
    H0(RangeArgs),
    /// Higher homology through f_i^n, for 1 <= i <= 3, n <= max-n, 1 <= r <= rank
    Theorem(RangeArgs),
    /// Binomial congruence sweep and the divisibility n/(n,k) | C(n,k)
    Lemma(LemmaArgs),
    /// Divided power relations against q_n
    Relations(RangeArgs),
    /// Künneth and cross-effect consistency for a, b in {(1,1), (1,2)}
    Kunneth(KunnethArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RangeArgs {
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub max_n: usize,
    /// Largest rank checked
    #[arg(long, default_value_t = DEFAULT_RANK)]
    pub rank: usize,
}

#[derive(Args, Debug, Clone)]
pub struct LemmaArgs {
    /// Primes to sweep (repeatable)
    #[arg(long = "p", default_values_t = [2u64, 3, 5, 7])]
    pub primes: Vec<u64>,
    #[arg(long, default_value_t = 40)]
    pub max_n: u64,
}

#[derive(Args, Debug, Clone)]
pub struct KunnethArgs {
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Counterexample {
    /// f_1^8 is not an isomorphism: its target carries elements of order 4
    F18 {
        #[arg(long, default_value_t = DEFAULT_RANK)]
        rank: usize,
    },
}

#[derive(Args, Debug)]
pub struct SnfArgs {
    /// Matrix file; `-` reads standard input
    pub input: PathBuf,
    /// Also write U.txt, D.txt and V.txt (D = U·M·V) into this directory
    #[arg(long)]
    pub transforms: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub matrix_format: MatrixFormat,
}

/// One line of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub cell: Value,
    pub computed: Value,
    pub expected: Value,
    pub pass: bool,
    #[serde(skip)]
    computed_text: String,
    #[serde(skip)]
    expected_text: String,
}

impl Record {
    fn new(check: &str, cell: Value, computed: (Value, String), expected: (Value, String), pass: bool) -> Self {
        Record {
            check: check.to_string(),
            cell,
            computed: computed.0,
            expected: expected.0,
            pass,
            computed_text: computed.1,
            expected_text: expected.1,
        }
    }
}

fn group(g: &GroupInvariants) -> (Value, String) {
    (serde_json::to_value(g).expect("serializable"), g.to_string())
}

fn plain<T: Serialize>(v: &T) -> (Value, String) {
    let value = serde_json::to_value(v).expect("serializable");
    let text = value.to_string();
    (value, text)
}

fn cell_text(cell: &Value) -> String {
    match cell {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", v.to_string().trim_matches('"')))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn pass_text(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render_records(records: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Md => {
            let mut s = String::from("| check | cell | computed | expected | result |\n|---|---|---|---|---|\n");
            for r in records {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} |",
                    r.check,
                    cell_text(&r.cell),
                    r.computed_text,
                    r.expected_text,
                    pass_text(r.pass)
                );
            }
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let to_err = |e: csv::Error| Error::Parse(e.to_string());
            w.write_record(["check", "cell", "computed", "expected", "pass"]).map_err(to_err)?;
            for r in records {
                w.write_record([
                    r.check.as_str(),
                    &cell_text(&r.cell),
                    &r.computed_text,
                    &r.expected_text,
                    if r.pass { "true" } else { "false" },
                ])
                .map_err(to_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf-8"))
        }
    }
}

/// Rejects ranges above the hard caps; returns warnings for ranges above the defaults.
fn check_range(n: usize, r: usize) -> Result<Vec<String>> {
    if n > MAX_DEGREE {
        return Err(Error::OutOfRange(format!("degree {n} exceeds the cap {MAX_DEGREE}")));
    }
    if r > MAX_RANK {
        return Err(Error::OutOfRange(format!("rank {r} exceeds the cap {MAX_RANK}")));
    }
    let mut warnings = Vec::new();
    if n > DEFAULT_DEGREE || r > DEFAULT_RANK {
        warnings.push(format!(
            "degree {n} / rank {r} is above the defaults ({DEFAULT_DEGREE} / {DEFAULT_RANK}); this may take a while"
        ));
    }
    Ok(warnings)
}

struct Outcome {
    text: String,
    pass: bool,
    warnings: Vec<String>,
}

fn records_outcome(records: Vec<Record>, format: Format, warnings: Vec<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass: records.iter().all(|r| r.pass),
        text: render_records(&records, format)?,
        warnings,
    })
}

fn table_records(args: &TableArgs) -> Result<Vec<Record>> {
    let cells: Vec<(usize, usize)> = (args.min_n.max(2)..=args.max_n)
        .flat_map(|q| (0..=3).map(move |i| (q, i)))
        .collect();
    cells
        .par_iter()
        .map(|&(q, i)| {
            let r = args.rank;
            let expected = expected_table_entry(q, i, r)?.invariants();
            let (computed, verified) = if i == 0 {
                let rep = verify_h0_iso(q, r)?;
                (rep.computed.clone(), rep.pass)
            } else {
                let rep = verify_theorem(i, q, r)?;
                (rep.computed.clone(), rep.pass)
            };
            let pass = verified && computed == expected;
            Ok(Record::new(
                "table",
                json!({"n": q, "i": i, "rank": r}),
                group(&computed),
                group(&expected),
                pass,
            ))
        })
        .collect()
}

fn render_table_grid(records: &[Record], args: &TableArgs) -> String {
    let mut s = format!("H_i C^q(Z^{})\n\n| q | H_0 | H_1 | H_2 | H_3 |\n|---|---|---|---|---|\n", args.rank);
    for row in records.chunks(4) {
        let q = row[0].cell["n"].as_u64().unwrap_or_default();
        let cells: Vec<String> = row
            .iter()
            .map(|r| format!("{} {}", r.computed_text, pass_text(r.pass)))
            .collect();
        let _ = writeln!(s, "| {q} | {} |", cells.join(" | "));
    }
    s
}

fn cmd_table(args: &TableArgs, format: Format) -> Result<Outcome> {
    if args.max_n > DEFAULT_DEGREE {
        return Err(Error::OutOfRange(format!(
            "the predicted table covers q <= {DEFAULT_DEGREE}, got {}",
            args.max_n
        )));
    }
    let warnings = check_range(args.max_n, args.rank)?;
    let records = table_records(args)?;
    if format == Format::Md {
        return Ok(Outcome {
            pass: records.iter().all(|r| r.pass),
            text: render_table_grid(&records, args),
            warnings,
        });
    }
    records_outcome(records, format, warnings)
}

fn cmd_homology(args: &HomologyArgs, format: Format) -> Result<Outcome> {
    let warnings = check_range(args.n, args.rank)?;
    let family = match args.family {
        FamilyArg::C => Family::C,
        FamilyArg::D => Family::D,
    };
    let cx = build(family, args.n, args.rank);
    if let Some(dir) = &args.dump_matrices {
        cx.dump_matrices(dir)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", dir.display())))?;
    }
    let degrees: Vec<usize> = match args.degree {
        Some(i) => vec![i],
        None => (0..=args.n).collect(),
    };
    let records = degrees
        .par_iter()
        .map(|&i| {
            let computed = cx.homology(i)?;
            let expected = match family {
                Family::C if (2..=7).contains(&args.n) && i <= 3 => {
                    Some(expected_table_entry(args.n, i, args.rank)?.invariants())
                }
                _ => None,
            };
            let pass = expected.as_ref().is_none_or(|e| *e == computed);
            let expected = match &expected {
                Some(e) => group(e),
                None => (Value::Null, "-".to_string()),
            };
            Ok(Record::new(
                "homology",
                json!({"family": family.to_string(), "n": args.n, "i": i, "rank": args.rank}),
                group(&computed),
                expected,
                pass,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    records_outcome(records, format, warnings)
}

fn cmd_basis(args: &BasisArgs, format: Format) -> Result<Outcome> {
    let warnings = check_range(args.degree, args.rank)?;
    let functor = match args.functor {
        FunctorArg::Wedge => Functor::Wedge,
        FunctorArg::Sym => Functor::Sym,
        FunctorArg::Gamma => Functor::Gamma,
    };
    let labels = enumerate_basis(functor, args.degree, args.rank).labels();
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&labels).expect("strings")),
        Format::Md => labels
            .iter()
            .enumerate()
            .map(|(k, l)| format!("{}. {l}\n", k + 1))
            .collect(),
        Format::Csv => {
            let mut s = String::from("index,label\n");
            for (k, l) in labels.iter().enumerate() {
                let _ = writeln!(s, "{k},{l}");
            }
            s
        }
    };
    Ok(Outcome {
        text,
        pass: true,
        warnings,
    })
}

fn cmd_derived_sp(args: &DerivedSpArgs, format: Format) -> Result<Outcome> {
    let warnings = check_range(args.n, args.rank)?;
    let group_data = derived_sp(args.i, args.n, args.p, args.rank)?;
    let quotient = generator_presentation(args.i, args.n, args.p, args.rank)?.quotient_dimension();
    let reps: Vec<String> = group_data
        .representatives
        .iter()
        .map(|(w, m)| format!("{w} ⊗ {m}"))
        .collect();
    let record = Record::new(
        "derived-sp",
        json!({"i": args.i, "n": args.n, "p": args.p, "rank": args.rank}),
        (
            json!({"dimension": group_data.dimension, "representatives": reps}),
            format!("(Z/{})^{}", args.p, group_data.dimension),
        ),
        (
            json!({"dimension": quotient}),
            format!("(Z/{})^{quotient}", args.p),
        ),
        group_data.dimension == quotient,
    );
    records_outcome(vec![record], format, warnings)
}

fn ranks(max: usize) -> std::ops::RangeInclusive<usize> {
    1..=max
}

fn h0_records(args: &RangeArgs) -> Result<Vec<Record>> {
    let cells: Vec<(usize, usize)> = (2..=args.max_n)
        .flat_map(|n| ranks(args.rank).map(move |r| (n, r)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, r)| {
            let rep = verify_h0_iso(n, r)?;
            Ok(Record::new(
                "h0",
                json!({"n": n, "i": 0, "rank": r}),
                group(&rep.computed),
                group(&rep.expected),
                rep.pass,
            ))
        })
        .collect()
}

fn theorem_records(args: &RangeArgs) -> Result<Vec<Record>> {
    let cells: Vec<(usize, usize, usize)> = (2..=args.max_n)
        .flat_map(|n| (1..=3).flat_map(move |i| ranks(args.rank).map(move |r| (i, n, r))))
        .collect();
    let mut records: Vec<Record> = cells
        .par_iter()
        .map(|&(i, n, r)| {
            let rep = verify_theorem(i, n, r)?;
            let expected = match &rep.expected {
                Some(e) => group(e),
                None => group(&rep.source),
            };
            Ok(Record::new(
                "theorem",
                json!({"n": n, "i": i, "rank": r}),
                group(&rep.computed),
                expected,
                rep.pass,
            ))
        })
        .collect::<Result<_>>()?;
    let wd_cells: Vec<(usize, usize, u64, usize)> = (2..=args.max_n)
        .flat_map(|n| {
            prime_divisors(n as u64).into_iter().flat_map(move |p| {
                (1..n / p as usize).flat_map(move |i| ranks(args.rank).map(move |r| (i, n, p, r)))
            })
        })
        .collect();
    let wd: Vec<Record> = wd_cells
        .par_iter()
        .map(|&(i, n, p, r)| {
            let rep = verify_f_welldefined(i, n, p, r)?;
            Ok(Record::new(
                "well-defined",
                json!({"n": n, "i": i, "p": p, "rank": r}),
                plain(&json!({
                    "cycle_failures": rep.cycle_failures,
                    "lift_failures": rep.lift_scaling_failures + rep.lift_shift_failures,
                    "jacobi_nonzero": rep.jacobi_nonzero,
                    "checked": rep.cycles_checked + rep.lift_scalings_checked
                        + rep.lift_shifts_checked + rep.jacobi_checked,
                })),
                plain(&json!({"cycle_failures": 0, "lift_failures": 0, "jacobi_nonzero": 0})),
                rep.pass && rep.jacobi_nonzero == 0,
            ))
        })
        .collect::<Result<_>>()?;
    records.extend(wd);
    Ok(records)
}

fn lemma_records(args: &LemmaArgs) -> Result<Vec<Record>> {
    if let Some(&p) = args.primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    let mut records: Vec<Record> = args
        .primes
        .par_iter()
        .map(|&p| {
            let sweep = sweep_binomial_lemma(p, args.max_n)?;
            Ok(Record::new(
                "lemma",
                json!({"p": p, "max_n": args.max_n}),
                plain(&json!({
                    "checked": sweep.checked,
                    "failed": sweep.failed,
                    "first_counterexample": sweep.first_counterexample,
                })),
                plain(&json!({"failed": 0})),
                sweep.failed == 0,
            ))
        })
        .collect::<Result<_>>()?;
    let mut checked = 0u64;
    let mut failed = 0u64;
    for n in 1..=args.max_n {
        for k in 1..=n {
            checked += 1;
            if !check_central_divisibility(n, k)? {
                failed += 1;
            }
        }
    }
    records.push(Record::new(
        "divisibility",
        json!({"max_n": args.max_n}),
        plain(&json!({"checked": checked, "failed": failed})),
        plain(&json!({"failed": 0})),
        failed == 0,
    ));
    Ok(records)
}

fn relation_records(args: &RangeArgs) -> Result<Vec<Record>> {
    let cells: Vec<(usize, usize)> = (2..=args.max_n)
        .flat_map(|n| ranks(args.rank).map(move |r| (n, r)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, r)| {
            let rep = verify_q_relations(n, r)?;
            Ok(Record::new(
                "relations",
                json!({"n": n, "rank": r}),
                plain(&json!({
                    "q2": rep.q2_checked,
                    "q3": rep.q3_checked,
                    "q4": rep.q4_checked,
                    "consistency": rep.consistency_checked,
                    "failures": rep.failures,
                    "first_failure": rep.first_failure,
                })),
                plain(&json!({"failures": 0})),
                rep.pass,
            ))
        })
        .collect()
}

const KUNNETH_SPLITS: [(usize, usize); 2] = [(1, 1), (1, 2)];

fn kunneth_records(args: &KunnethArgs) -> Result<Vec<Record>> {
    let cells: Vec<(usize, usize, usize, usize)> = (2..=args.max_n)
        .flat_map(|n| {
            KUNNETH_SPLITS
                .iter()
                .flat_map(move |&(a, b)| (0..=n).map(move |k| (n, a, b, k)))
        })
        .collect();
    let mut records: Vec<Record> = cells
        .par_iter()
        .map(|&(n, a, b, k)| {
            let rep = kunneth_check(n, a, b, k)?;
            Ok(Record::new(
                "kunneth",
                json!({"n": n, "a": a, "b": b, "k": k}),
                group(&rep.computed),
                group(&rep.expected),
                rep.pass,
            ))
        })
        .collect::<Result<_>>()?;
    let splits: Vec<(usize, usize, usize)> = (2..=args.max_n)
        .flat_map(|n| KUNNETH_SPLITS.iter().map(move |&(a, b)| (n, a, b)))
        .collect();
    let cross: Vec<Record> = splits
        .par_iter()
        .map(|&(n, a, b)| {
            let rep = cross_effect_h0(n, a, b)?;
            let blocks = check_sum_decomposition(n, a, b);
            Ok(Record::new(
                "cross-effect",
                json!({"n": n, "a": a, "b": b}),
                group(&rep.computed),
                group(&rep.expected),
                rep.pass && blocks,
            ))
        })
        .collect::<Result<_>>()?;
    records.extend(cross);
    Ok(records)
}

fn f18_record(rank: usize) -> Result<Record> {
    let rep = f18_counterexample(rank)?;
    let elementary = rep.source_exponent <= num_bigint::BigInt::from(2);
    let expected_order4 = rank >= 2;
    Ok(Record::new(
        "f18",
        json!({"n": 8, "i": 1, "rank": rank}),
        (
            json!({
                "source": rep.source,
                "target": rep.target_invariants,
                "contains_order4": rep.contains_order4,
                "well_defined": rep.well_defined,
                "surjective": rep.surjective,
                "injective": rep.injective,
            }),
            format!("{} → {}", rep.source, rep.target_invariants),
        ),
        (
            json!({"source_exponent_divides": 2, "contains_order4": expected_order4}),
            format!("elementary source, order 4 in target: {expected_order4}"),
        ),
        elementary && rep.contains_order4 == expected_order4,
    ))
}

fn cmd_verify(args: &VerifyArgs, format: Format) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let records = match (&args.suite, args.all) {
        (Some(_), true) => {
            return Err(Error::OutOfRange("--all runs every suite; do not name one".into()))
        }
        (None, false) => {
            return Err(Error::OutOfRange("name a suite or pass --all".into()))
        }
        (None, true) => {
            let range = RangeArgs {
                max_n: DEFAULT_DEGREE,
                rank: DEFAULT_RANK,
            };
            let mut all = h0_records(&range)?;
            all.extend(theorem_records(&range)?);
            all.extend(lemma_records(&LemmaArgs {
                primes: vec![2, 3, 5, 7],
                max_n: 40,
            })?);
            all.extend(relation_records(&range)?);
            all.extend(kunneth_records(&KunnethArgs { max_n: 6 })?);
            all.push(f18_record(DEFAULT_RANK)?);
            all
        }
        (Some(suite), false) => match suite {
            Suite::H0(a) => {
                warnings = check_range(a.max_n, a.rank)?;
                h0_records(a)?
            }
            Suite::Theorem(a) => {
                warnings = check_range(a.max_n, a.rank)?;
                theorem_records(a)?
            }
            Suite::Relations(a) => {
                warnings = check_range(a.max_n, a.rank)?;
                relation_records(a)?
            }
            Suite::Lemma(a) => lemma_records(a)?,
            Suite::Kunneth(a) => {
                warnings = check_range(a.max_n, 2)?;
                kunneth_records(a)?
            }
        },
    };
    records_outcome(records, format, warnings)
}

fn cmd_snf(args: &SnfArgs) -> Result<Outcome> {
    let raw = if args.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        std::fs::read_to_string(&args.input)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", args.input.display())))?
    };
    let m = exchange::parse_matrix(&raw)?;
    let snf = smith_normal_form(&m);
    let write = |x: &IntMatrix| match args.matrix_format {
        MatrixFormat::Text => exchange::to_text(x),
        MatrixFormat::Json => exchange::to_json(x) + "\n",
    };
    if let Some(dir) = &args.transforms {
        std::fs::create_dir_all(dir).map_err(|e| Error::Parse(e.to_string()))?;
        for (name, x) in [("U", &snf.u), ("D", &snf.d), ("V", &snf.v)] {
            std::fs::write(dir.join(format!("{name}.txt")), write(x))
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    Ok(Outcome {
        text: write(&snf.d),
        pass: snf.verify(&m),
        warnings: Vec::new(),
    })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let format = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Table(a) => cmd_table(a, format(Format::Md)),
        Command::Homology(a) => cmd_homology(a, format(Format::Md)),
        Command::Basis(a) => cmd_basis(a, format(Format::Md)),
        Command::DerivedSp(a) => cmd_derived_sp(a, format(Format::Md)),
        Command::Verify(a) => cmd_verify(a, format(Format::Json)),
        Command::Counterexample {
            which: Counterexample::F18 { rank },
        } => {
            let warnings = check_range(8, *rank)?;
            records_outcome(vec![f18_record(*rank)?], format(Format::Json), warnings)
        }
        Command::Snf(a) => cmd_snf(a),
    }
}

/// Parses `args`, runs the command and writes the report; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let outcome = match pool.build() {
        Ok(pool) => pool.install(|| execute(&cli)),
        Err(e) => Err(Error::OutOfRange(format!("cannot start workers: {e}"))),
    };
    match outcome {
        Ok(o) => {
            for w in &o.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &o.text).map_err(|e| e.to_string()),
                None => out.write_all(o.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["dual-derham"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn table_single_row() {
        let (code, out, _) = call(&["table", "--max-n", "2", "--rank", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("| 2 | Z/2 PASS | 0 PASS | 0 PASS | 0 PASS |"), "{out}");
    }

    #[test]
    fn table_rank_zero() {
        let (code, out, _) = call(&["table", "--max-n", "4", "--rank", "0", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 12);
        assert!(v
            .as_array()
            .unwrap()
            .iter()
            .all(|r| r["computed"]["torsion"].as_array().unwrap().is_empty()));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["table", "--max-n", "9"]).0, 2);
        assert_eq!(call(&["homology", "--n", "13"]).0, 2);
        assert_eq!(call(&["verify"]).0, 2);
        assert_eq!(call(&["no-such-command"]).0, 2);
        assert_eq!(call(&["derived-sp", "--i", "0", "--n", "2", "--p", "4"]).0, 2);
    }

    #[test]
    fn lemma_counts() {
        let (code, out, _) = call(&["verify", "lemma", "--p", "2", "--max-n", "40"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["computed"]["checked"], 780);
        assert_eq!(v[0]["computed"]["failed"], 0);
    }

    #[test]
    fn homology_with_dump_and_snf_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (code, out, _) = call(&["homology", "--n", "4", "--rank", "2", "--format", "csv", "--dump-matrices", d]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("Z/2 ⊕ (Z/4)^2"), "{out}");
        let d1 = dir.path().join("d1.txt");
        let (code, out, _) = call(&["snf", d1.to_str().unwrap()]);
        assert_eq!(code, 0);
        let snf = exchange::from_text(&out).unwrap();
        assert_eq!((snf.rows(), snf.cols()), (5, 8));
        let diag: Vec<String> = (0..5).map(|k| snf.get(k, k).to_string()).collect();
        assert_eq!(diag, ["1", "1", "2", "4", "4"]);
    }

    #[test]
    fn snf_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "2 2\n1 x 3 4\n").unwrap();
        assert_eq!(call(&["snf", path.to_str().unwrap()]).0, 2);
    }

    #[test]
    fn basis_and_derived_sp() {
        let (code, out, _) = call(&["basis", "--functor", "wedge", "--degree", "2", "--rank", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Vec<String> = serde_json::from_str(&out).unwrap();
        assert_eq!(v, ["x1∧x2", "x1∧x3", "x2∧x3"]);
        let (code, out, _) = call(&["derived-sp", "--i", "1", "--n", "3", "--p", "2", "--rank", "2", "--format", "json"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"dimension\": 2"));
    }

    #[test]
    fn counterexample_rank_two() {
        let (code, out, _) = call(&["counterexample", "f18", "--rank", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"contains_order4\": true"));
    }
}
