use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use formlab_core::analyze::{
    classify_low_rank, decide_nullity_geq, elem_json, nullity_exact, radical, rank, rank_six_invariant,
    subspace_json, RankSixClass,
};
use formlab_core::exactlin::{Field, FieldCtx, PrimeField};
use formlab_core::experiments::{cut_bound_report, goodwillie_table, scan_random, Exemplar, ScanConfig};
use formlab_core::exterior::{AltForm, AnyForm};
use formlab_core::grassmann::{check_iff, iota_batch, iota_dim};
use formlab_core::liealg::{lie_nullity_certificate, CartanLabel};
use formlab_core::Error;

use crate::{Cli, Command, GrassCommand};

/// A failed run: diagnostic text and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => 3,
            Error::InvalidField(_)
            | Error::DimensionMismatch(_)
            | Error::InvalidIndex { .. }
            | Error::Parse { .. }
            | Error::InfiniteField
            | Error::InvalidArgument(_)
            | Error::Precondition(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// The command line with thread settings removed, so that replaying it
/// reproduces the output regardless of worker count.
pub fn invocation(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = vec!["formlab".to_string()];
    let mut args = args.skip(1);
    while let Some(a) = args.next() {
        if a == "--threads" {
            args.next();
        } else if !a.starts_with("--threads=") {
            out.push(a);
        }
    }
    out
}

struct Output {
    pretty: bool,
    invocation: Vec<String>,
}

impl Output {
    fn emit(&self, mut value: Value) {
        if let Value::Object(map) = &mut value {
            map.insert("invocation".into(), json!(self.invocation));
        }
        let text = if self.pretty {
            serde_json::to_string_pretty(&value)
        } else {
            serde_json::to_string(&value)
        }
        .expect("JSON values serialize");
        println!("{text}");
    }
}

fn read_form(path: &Path) -> Result<AnyForm, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    AnyForm::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Applies `--field`: rational forms may be reduced mod p, prime forms must match.
fn convert(form: AnyForm, flag: Option<&str>) -> Result<AnyForm, Failure> {
    let Some(flag) = flag else { return Ok(form) };
    let target = FieldCtx::parse_flag(flag)?;
    match (form, target) {
        (f @ AnyForm::Rational(_), FieldCtx::Rationals) => Ok(f),
        (AnyForm::Rational(f), FieldCtx::PrimeField(p)) => {
            Ok(AnyForm::Prime(f.reduce_mod(&PrimeField::new(p as u64)?)?))
        }
        (AnyForm::Prime(f), FieldCtx::PrimeField(p)) if f.field().p() == p => Ok(AnyForm::Prime(f)),
        (f, t) => Err(usage(format!("cannot move a form over {} to {}", f.field_ctx(), t))),
    }
}

fn prime_form(form: AnyForm, flag: Option<&str>) -> Result<AltForm<PrimeField>, Failure> {
    match convert(form, flag)? {
        AnyForm::Prime(f) => Ok(f),
        AnyForm::Rational(_) => Err(usage(
            "nullity search needs a finite field; pass --field gf:<p> or use `certify`",
        )),
    }
}

fn rank_json<F: Field>(f: &AltForm<F>) -> Value {
    json!({
        "field": f.field().ctx().flag(),
        "dim": f.dim(),
        "rank": rank(f),
        "radical": subspace_json(&radical(f)),
    })
}

fn classify_json<F: Field>(f: &AltForm<F>) -> Result<Value, Failure> {
    let class = classify_low_rank(f)?;
    let invariant = match class {
        RankSixClass::Rank6Split | RankSixClass::Rank6Degenerate => elem_json(f.field(), &rank_six_invariant(f)?),
        _ => Value::Null,
    };
    Ok(json!({
        "field": f.field().ctx().flag(),
        "rank": rank(f),
        "class": class.as_str(),
        "invariant": invariant,
    }))
}

fn write_exemplars<'a>(dir: &Path, prefix: &str, exemplars: impl Iterator<Item = &'a Exemplar>) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    for ex in exemplars {
        write_file(&dir.join(ex.file_name(prefix)), &ex.form.render())?;
    }
    Ok(())
}

pub fn run(cli: &Cli, invocation: Vec<String>) -> Result<u8, Failure> {
    let out = Output {
        pretty: cli.pretty,
        invocation,
    };
    let budget = cli.budget;
    match &cli.command {
        Command::Rank(a) => {
            let value = match convert(read_form(&a.file)?, a.field.as_deref())? {
                AnyForm::Rational(f) => rank_json(&f),
                AnyForm::Prime(f) => rank_json(&f),
            };
            out.emit(value);
            Ok(0)
        }
        Command::Classify(a) => {
            let value = match convert(read_form(&a.file)?, a.field.as_deref())? {
                AnyForm::Rational(f) => classify_json(&f)?,
                AnyForm::Prime(f) => classify_json(&f)?,
            };
            out.emit(value);
            Ok(0)
        }
        Command::Nullity(a) => {
            let f = prime_form(read_form(&a.file)?, a.field.as_deref())?;
            if let Some(r) = a.geq {
                let d = decide_nullity_geq(&f, a.k, r, budget)?;
                out.emit(json!({
                    "query": format!("null_{} >= {r}", a.k),
                    "holds": d.holds,
                    "certificate": d.certificate.to_json(),
                }));
                return Ok(if d.holds { 0 } else { 1 });
            }
            if let Some(r) = a.assert_leq {
                let query = format!("null_{} <= {r}", a.k);
                if r >= f.dim() {
                    out.emit(json!({"query": query, "holds": true, "certificate": Value::Null}));
                    return Ok(0);
                }
                let d = decide_nullity_geq(&f, a.k, r + 1, budget)?;
                out.emit(json!({
                    "query": query,
                    "holds": !d.holds,
                    "certificate": d.certificate.to_json(),
                }));
                return Ok(if d.holds { 1 } else { 0 });
            }
            let res = nullity_exact(&f, a.k, budget)?;
            out.emit(json!({
                "k": a.k,
                "field": f.field().ctx().flag(),
                "value": res.value,
                "witness": res.witness.to_json(),
                "exhausted": res.exhausted.as_ref().map_or(Value::Null, |c| c.to_json()),
            }));
            Ok(0)
        }
        Command::Certify(a) => {
            let AnyForm::Rational(f) = read_form(&a.file)? else {
                return Err(usage("certify needs a form over Q"));
            };
            let report = cut_bound_report(&f, &a.primes, budget)?;
            out.emit(report.certificate.to_json());
            Ok(0)
        }
        Command::Lie(a) => {
            let label: CartanLabel = a.label.parse()?;
            let (t, cert) = lie_nullity_certificate(label, &a.primes, budget)?;
            if let Some(path) = &a.out {
                let text = format!(
                    "# compact triple form of type {label}\n# basis: {}\n{}",
                    t.labels.join(" "),
                    t.form.render()
                );
                write_file(path, &text)?;
            }
            out.emit(json!({
                "type": label.to_string(),
                "n": t.form.dim(),
                "rank": label.rank,
                "integral": t.form.is_integral(),
                "labels": t.labels,
                "null_q": cert.value(),
                "certificate": cert.to_json(),
            }));
            Ok(0)
        }
        Command::Scan(a) => {
            let cfg = ScanConfig {
                dims: a.dims.clone(),
                primes: a.primes.clone(),
                trials: a.trials,
                seed: a.seed,
                k: a.k,
                budget,
            };
            let report = scan_random(&cfg)?;
            if let Some(path) = &a.csv {
                write_file(path, &report.to_csv())?;
            }
            if let Some(dir) = &a.exemplars {
                write_exemplars(dir, "scan", report.cells.iter().flat_map(|c| c.exemplars.iter()))?;
            }
            out.emit(report.to_json());
            Ok(0)
        }
        Command::Goodwillie(a) => {
            let report = goodwillie_table(a.n, &a.primes, a.trials, a.seed, budget)?;
            if let Some(path) = &a.csv {
                write_file(path, &report.to_csv())?;
            }
            if let Some(dir) = &a.exemplars {
                write_exemplars(dir, "goodwillie", report.witness.iter())?;
            }
            out.emit(report.to_json());
            Ok(0)
        }
        Command::GrassCheck(GrassCommand::Form(a)) => {
            let f = prime_form(read_form(&a.file)?, a.field.as_deref())?;
            let mut rows = Vec::new();
            let mut agree_all = true;
            for &r in &a.r {
                let criterion = check_iff(&f, a.k, r, a.cap)?;
                let search = decide_nullity_geq(&f, a.k, r, budget)?.holds;
                agree_all &= criterion == search;
                rows.push(json!({"r": r, "criterion": criterion, "search": search, "agree": criterion == search}));
            }
            out.emit(json!({"k": a.k, "field": f.field().ctx().flag(), "results": rows, "agree": agree_all}));
            Ok(if agree_all { 0 } else { 1 })
        }
        Command::GrassCheck(GrassCommand::Iota(a)) => {
            let batch = iota_batch(a.q, a.max_n, a.max_coords, a.samples, a.seed)?;
            let linear_ok = (4..=12).all(|n| iota_dim(n, 3, 2, 3) == Ok(3 * n as u128 - 8));
            let passed = batch.passed() && linear_ok;
            out.emit(json!({
                "q": batch.q,
                "seed": a.seed,
                "max_n": batch.max_n,
                "max_coords": batch.max_coords.to_string(),
                "samples": batch.samples,
                "cases": batch.cases,
                "spans": batch.spans,
                "mismatches": batch.mismatches,
                "three_n_minus_eight": linear_ok,
                "passed": passed,
            }));
            Ok(if passed { 0 } else { 1 })
        }
        Command::CutBound(a) => {
            let AnyForm::Rational(f) = read_form(&a.file)? else {
                return Err(usage("cut-bound needs a form over Q"));
            };
            let report = cut_bound_report(&f, &a.primes, budget)?;
            out.emit(report.to_json());
            Ok(0)
        }
    }
}
