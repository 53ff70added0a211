//! The non-suite subcommands. Each returns an [`Outcome`] that `main`
//! prints as JSON or text.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sigma_lab::algebra::Catalog;
use sigma_lab::centrality::{centralizer, check_coherence, connector, Centralizer};
use sigma_lab::document::{parse_relation, relation_value, save_values, Library};
use sigma_lab::extensions::{baer_sum, direction, ext_table, torsor_iso, transport, Direction};
use sigma_lab::maltsev::core_audit;
use sigma_lab::relations::{enumerate_reflexive_relations, is_sigma_relation, RelationFilter};
use sigma_lab::{Kind, Obj, Relation, SigmaClass};

use crate::checks::core_sigma;
use crate::config::SuiteConfig;
use crate::error::CliError;
use crate::report::Report;
use crate::suite::run_suite;

/// Environment variable naming a directory of extra algebra documents.
pub const CATALOG_ENV: &str = "SIGMA_LAB_CATALOG";

/// Result of a command: a verdict plus a machine-readable body.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    fn new(ok: bool, json: Value) -> Outcome {
        let text = serde_json::to_string_pretty(&json).expect("values serialize") + "\n";
        Outcome { ok, json, text }
    }

    fn from_report(report: &Report) -> Outcome {
        Outcome {
            ok: report.passed(),
            json: serde_json::to_value(report).expect("reports serialize"),
            text: report.to_text(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A library preloaded with the external catalog, if one is configured.
pub fn base_library() -> Result<Library, CliError> {
    let mut lib = Library::default();
    if let Some(dir) = std::env::var_os(CATALOG_ENV) {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|source| CliError::Io {
                path: PathBuf::from(&dir).display().to_string(),
                source,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for f in files {
            lib.load_str(&read(&f)?)?;
        }
    }
    Ok(lib)
}

fn load(path: &Path) -> Result<Library, CliError> {
    let mut lib = base_library()?;
    lib.load_str(&read(path)?)?;
    Ok(lib)
}

/// The algebra defined in `path` (the first one if there are several).
fn load_algebra(path: &Path) -> Result<Obj, CliError> {
    let own = Library::parse(&read(path)?)?;
    let name = own
        .algebras
        .keys()
        .next()
        .ok_or_else(|| CliError::Usage(format!("{} defines no algebra", path.display())))?
        .clone();
    Ok(own.algebras[&name].clone())
}

fn load_relation(x: &Obj, path: &Path) -> Result<Relation, CliError> {
    let pairs = parse_relation(&read(path)?)?;
    Ok(Relation::new(x, x, pairs)?)
}

fn parse_sigma(name: &str) -> Result<SigmaClass, CliError> {
    SigmaClass::parse(name).ok_or_else(|| CliError::Usage(format!("unknown class {name:?}")))
}

fn parse_kind(name: &str) -> Result<Kind, CliError> {
    Kind::parse(name).ok_or_else(|| CliError::Usage(format!("unknown kind {name:?}")))
}

/// Loads every file, optionally echoing the canonical serialization.
pub fn validate(files: &[PathBuf], canonical: bool) -> Result<Outcome, CliError> {
    let mut docs = Vec::new();
    let mut text = String::new();
    for f in files {
        let own = Library::parse(&read(f)?).or_else(|_| load(f))?;
        let values = own.to_values();
        docs.push(json!({
            "file": f.display().to_string(),
            "algebras": own.algebras.len(),
            "homs": own.homs.len(),
            "points": own.points.len(),
            "extensions": own.extensions.len(),
        }));
        if canonical {
            text += &save_values(&values);
        }
    }
    let mut out = Outcome::new(true, Value::Array(docs));
    if canonical {
        out.text = text;
    }
    Ok(out)
}

/// Membership of every point in `file` in the class.
pub fn classify_point(class: &str, file: &Path) -> Result<Outcome, CliError> {
    let sigma = parse_sigma(class)?;
    let lib = load(file)?;
    let mut records = Vec::new();
    for (name, p) in &lib.points {
        let verdict = sigma.test(p)?;
        let mut rec = json!({ "instance": name, "verdict": verdict });
        if !verdict {
            rec["witness"] = p.witness();
        }
        records.push(rec);
    }
    Ok(Outcome::new(true, Value::Array(records)))
}

/// Reflexive relations on an algebra with their flags.
pub fn relations(file: &Path, sigma: Option<&str>, symmetric: bool, equivalence: bool) -> Result<Outcome, CliError> {
    let x = load_algebra(file)?;
    let sigma = sigma.map(parse_sigma).transpose()?;
    let filter = RelationFilter {
        symmetric,
        equivalence,
        sigma: sigma.clone(),
    };
    let rels = enumerate_reflexive_relations(&x, &filter)?;
    let records: Vec<Value> = rels
        .iter()
        .map(|r| {
            json!({
                "pairs": relation_value(&r.pair_list())["pairs"],
                "sigma": sigma.as_ref().map(|s| is_sigma_relation(r, s)),
                "transitive": r.is_transitive(),
                "symmetric": r.is_symmetric(),
                "congruence": r.is_equivalence(),
            })
        })
        .collect();
    Ok(Outcome::new(true, Value::Array(records)))
}

/// The connector of `(R, S)` on `X` with its coherence audit.
pub fn connector_cmd(x: &Path, r: &Path, s: &Path) -> Result<Outcome, CliError> {
    let x = load_algebra(x)?;
    let (r, s) = (load_relation(&x, r)?, load_relation(&x, s)?);
    match connector(&r, &s) {
        Ok(c) => {
            let audit = check_coherence(&c);
            let table: Vec<[usize; 4]> = c
                .domain()
                .list()
                .iter()
                .zip(c.values())
                .map(|(t, &v)| [t[0], t[1], t[2], v])
                .collect();
            Ok(Outcome::new(
                audit.ok(),
                json!({ "connector": table, "coherence": audit }),
            ))
        }
        Err(e @ (sigma_lab::Error::Inconsistent { .. } | sigma_lab::Error::Underdetermined(_))) => {
            Ok(Outcome::new(false, json!({ "connector": Value::Null, "reason": e.to_string() })))
        }
        Err(e) => Err(e.into()),
    }
}

/// The centralizer of `S` on `X`.
pub fn centralizer_cmd(x: &Path, s: &Path, sigma: &str) -> Result<Outcome, CliError> {
    let x = load_algebra(x)?;
    let s = load_relation(&x, s)?;
    let sigma = parse_sigma(sigma)?;
    Ok(match centralizer(&s, &sigma)? {
        Centralizer::Maximum(z) => Outcome::new(true, json!({ "centralizer": relation_value(&z.pairs()) })),
        Centralizer::Antichain(a) => Outcome::new(
            false,
            json!({ "maximal": a.iter().map(|z| relation_value(&z.pairs())).collect::<Vec<_>>() }),
        ),
    })
}

fn suite_outcome(cfg: SuiteConfig) -> Result<Outcome, CliError> {
    Ok(Outcome::from_report(&run_suite(&cfg)?))
}

/// Mal'tsev squares, transitivity and permutability for one signature.
pub fn maltsev_audit(kind: &str, sigma: Option<&str>, max_order: usize, jobs: usize) -> Result<Outcome, CliError> {
    parse_kind(kind)?;
    suite_outcome(SuiteConfig {
        kind: Some(kind.into()),
        sigma: sigma.map(String::from),
        max_order,
        jobs,
        modules: Some(vec!["maltsev".into(), "transitivity".into(), "permutation".into()]),
        ..Default::default()
    })
}

/// Σ-special members of a catalog against the direct axiom check.
pub fn core(kind: &str, sigma: Option<&str>, max_order: usize) -> Result<Outcome, CliError> {
    let kind = parse_kind(kind)?;
    let sigma = sigma.map(parse_sigma).transpose()?.unwrap_or_else(|| core_sigma(kind));
    let catalog = Catalog::new(kind, max_order)?;
    let audit = core_audit(&catalog, &sigma, max_order)?;
    let members: Vec<Value> = audit
        .members
        .iter()
        .map(|m| json!({ "name": m.name, "order": m.order, "special": m.special, "expected": m.expected }))
        .collect();
    let mut out = Outcome::new(audit.report.ok(), json!({ "members": members, "report": audit.report }));
    out.text = audit
        .members
        .iter()
        .filter(|m| m.special)
        .map(|m| format!("{} (order {})\n", m.name, m.order))
        .collect::<String>()
        + &format!(
            "{} special of {}; {} mismatches\n",
            audit.members.iter().filter(|m| m.special).count(),
            audit.members.len(),
            audit.report.failed()
        );
    Ok(out)
}

fn only_extension(lib: &Library, path: &Path) -> Result<sigma_lab::Hom, CliError> {
    lib.extensions
        .values()
        .next()
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("{} defines no extension", path.display())))
}

/// Baer sum of two extensions over the same base.
pub fn baer(ext1: &Path, ext2: &Path) -> Result<Outcome, CliError> {
    let mut lib = base_library()?;
    lib.load_str(&read(ext1)?)?;
    let f1 = only_extension(&lib, ext1)?;
    let mut lib2 = lib.clone();
    lib2.extensions.clear();
    lib2.load_str(&read(ext2)?)?;
    let f2 = only_extension(&lib2, ext2)?;
    let sigma = SigmaClass::Schreier;
    let t1 = direction(&f1, &sigma)?;
    let t2 = transport(&direction(&f2, &sigma)?, &t1.direction)?;
    let sum = baer_sum(&t1, &t2)?;
    let split = sigma_lab::extensions::split_torsor(&t1.direction)?;
    let is_split = torsor_iso(&sum, &split)?.is_some();
    Ok(Outcome::new(
        true,
        json!({ "sum": sum.witness(), "split": is_split, "order": sum.domain().order() }),
    ))
}

/// The Ext group of `Y` with coefficients in `A` (trivial action).
pub fn ext_table_cmd(base: &Path, fiber: &Path, max_order: usize) -> Result<Outcome, CliError> {
    let y = load_algebra(base)?;
    let a = load_algebra(fiber)?;
    let d = Direction::product(&y, &a, &SigmaClass::Schreier)?;
    let order = d.abar().order();
    let mut candidates: Vec<Obj> = Vec::new();
    if order <= max_order {
        candidates.extend(Catalog::new(y.kind(), order)?.of_order(order).iter().cloned());
    }
    candidates.extend(base_library()?.algebras.into_values().filter(|c| c.order() == order));
    if candidates.is_empty() {
        return Err(sigma_lab::Error::BoundExceeded {
            what: "extension order".into(),
            size: order,
            bound: max_order,
        }
        .into());
    }
    let table = ext_table(&d, &candidates, order.max(max_order))?;
    let audit = table.audit();
    let classes: Vec<Value> = table
        .classes
        .iter()
        .map(|t| json!({ "table": t.domain().table(0), "f": t.f.map() }))
        .collect();
    let mut out = Outcome::new(
        audit.ok(),
        json!({ "classes": classes, "sum": table.sum, "zero": table.zero, "inverse": table.neg, "report": audit }),
    );
    out.text = format!("{} classes\n", table.len())
        + &table
            .sum
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect::<String>();
    Ok(out)
}

/// The suite from a config file and/or flags.
pub fn suite(cfg: SuiteConfig) -> Result<Outcome, CliError> {
    suite_outcome(cfg)
}
