//! Record ingestion and the four report commands behind the `traceform`
//! binary. Every command returns a `Report`: JSON lines plus an exit code.

use std::collections::{BTreeMap, HashSet};
use std::io::Read;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::arith::valuation;
use crate::decide::{self, Basis, FieldProfile, Verdict};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::linalg::IntMatrix;
use crate::numberfield::{check_maximal, field_from_record, trace_gram, FieldRecord, NumberFieldData};
use crate::poly;
use crate::quadform::{genus_equal, genus_symbol, local_symbol, reduced_witness_search, signature, GramMatrix};
use crate::raminv::{alpha_infinity, disc_trace_model, local_trace_model, ramification_factors, sign_identity_holds};
use crate::search::{cubic_search, fields_isomorphic};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<Value>,
    pub exit: i32,
}

impl Report {
    fn push(&mut self, v: Value) {
        self.lines.push(v);
    }

    /// Keeps the first nonzero exit code.
    fn fail(&mut self, code: i32) {
        if self.exit == 0 {
            self.exit = code;
        }
    }

    fn error(&mut self, label: &str, e: &Error) {
        self.push(json!({ "label": label, "error": e.to_string(), "exit": e.exit_code() }));
        self.fail(e.exit_code());
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn rational(&self) -> std::result::Result<BigRational, String> {
        match self {
            Num::Int(x) => Ok(BigRational::from_integer(BigInt::from(*x))),
            Num::Str(s) => BigRational::from_str(s.trim()).map_err(|_| format!("{s:?} is not a rational number")),
        }
    }

    fn integer(&self) -> std::result::Result<BigInt, String> {
        let q = self.rational()?;
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(format!("coefficient {q} is not an integer"))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    label: String,
    poly: Vec<Num>,
    #[serde(default)]
    basis: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    splitting: BTreeMap<String, Vec<(u32, u32)>>,
    #[serde(default)]
    galois: Option<bool>,
}

fn convert(raw: RawRecord) -> std::result::Result<FieldRecord, String> {
    let mut poly_: Vec<BigInt> = raw.poly.iter().map(Num::integer).collect::<std::result::Result<_, _>>()?;
    poly::trim(&mut poly_);
    let basis = match raw.basis {
        None => None,
        Some(rows) => Some(
            rows.iter()
                .map(|r| r.iter().map(Num::rational).collect::<std::result::Result<Vec<_>, _>>())
                .collect::<std::result::Result<Vec<_>, _>>()?,
        ),
    };
    let mut splitting = BTreeMap::new();
    for (k, pairs) in raw.splitting {
        let p: u64 = k.parse().map_err(|_| format!("splitting key {k:?} is not a prime"))?;
        splitting.insert(p, pairs);
    }
    Ok(FieldRecord { label: raw.label, poly: poly_, basis, splitting, galois: raw.galois })
}

/// One JSON record per nonblank line; labels must be unique.
pub fn parse_records(text: &str) -> Result<Vec<FieldRecord>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parse = |msg: String| Error::Parse { line: i + 1, msg };
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| parse(e.to_string()))?;
        let rec = convert(raw).map_err(parse)?;
        if let (Some(b), Some(n)) = (&rec.basis, poly::degree(&rec.poly)) {
            if b.len() != n || b.iter().any(|r| r.len() != n) {
                return Err(Error::BadBasis(format!("line {}: basis of {:?} must be {n} x {n}", i + 1, rec.label)));
            }
        }
        if !seen.insert(rec.label.clone()) {
            return Err(Error::DuplicateLabel(rec.label));
        }
        out.push(rec);
    }
    Ok(out)
}

/// Reads records from a file, or from standard input for `-`.
pub fn ingest(path: &str) -> Result<Vec<FieldRecord>> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Io(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?
    };
    parse_records(&text)
}

fn big_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn mat_json(m: &IntMatrix) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(big_json).collect())).collect())
}

fn field_head(field: &NumberFieldData) -> Value {
    json!({
        "label": field.label,
        "poly": poly::to_string(&field.poly),
        "degree": field.n,
        "disc": big_json(&field.disc),
        "poly_disc": big_json(&field.poly_disc),
        "index": big_json(&field.index),
        "signature": [field.sig.0, field.sig.1],
    })
}

fn invariants_line(field: &NumberFieldData) -> Result<Value> {
    let profile = FieldProfile::of(field)?;
    let mut primes = Vec::new();
    for (&p, s) in &profile.ramified {
        let s = s.as_ref().ok_or(Error::UnsupportedSplitting(p))?;
        let mut entry = json!({ "p": p, "pairs": s.pairs, "tame": s.is_tame() });
        if s.is_tame() {
            let rf = ramification_factors(s, field.n as u32)?;
            entry["alpha"] = big_json(&rf.alpha);
            entry["beta"] = json!(rf.beta.to_string());
            entry["g"] = json!(rf.g);
            entry["f"] = json!(rf.f_sum);
            if let Some(h) = rf.h {
                entry["h"] = json!(h);
            }
            if let Some(l) = rf.legendre_alpha {
                entry["legendre_alpha"] = json!(l);
            }
        } else {
            entry["alpha"] = Value::Null;
            entry["note"] = json!("wild: alpha_p and beta_p unavailable");
        }
        primes.push(entry);
    }
    let mut line = field_head(field);
    line["tame"] = json!(profile.ramified.values().flatten().all(|s| s.is_tame()));
    line["alpha_infinity"] = big_json(&alpha_infinity(field.sig.1 as u32));
    line["primes"] = Value::Array(primes);
    Ok(line)
}

/// Per field: discriminant, signature, splitting at ramified primes and the
/// ramification factors at tame ones.
pub fn cmd_invariants(records: &[FieldRecord]) -> Report {
    let mut rep = Report::default();
    for rec in records {
        match field_from_record(rec).and_then(|f| invariants_line(&f)) {
            Ok(line) => rep.push(line),
            Err(e) => rep.error(&rec.label, &e),
        }
    }
    rep
}

fn verdict_json(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

struct Built {
    field: NumberFieldData,
    profile: FieldProfile,
    gram: GramMatrix,
}

fn build(rec: &FieldRecord) -> Result<Built> {
    let field = field_from_record(rec)?;
    let profile = FieldProfile::of(&field)?;
    let gram = trace_gram(&field)?;
    Ok(Built { field, profile, gram })
}

fn galois_flags(a: &Built, b: &Built) -> (bool, bool) {
    (a.field.galois.unwrap_or(false), b.field.galois.unwrap_or(false))
}

/// Runs every decision op on a pair. Returns the report lines, whether some
/// isometry criterion applied, whether verdicts and oracle agree, and the
/// refusal errors.
fn compare_pair(a: &Built, b: &Built, oracle: bool, witness_bound: Option<u32>) -> Result<(Vec<Value>, bool, bool, Vec<Error>)> {
    let pair = json!([a.field.label, b.field.label]);
    let mut lines = Vec::new();
    let mut refusals = Vec::new();
    let mut verdicts: Vec<Verdict> = Vec::new();
    for (op, res) in decide::run_all(&a.profile, &b.profile, galois_flags(a, b)) {
        match res {
            Ok(v) => {
                lines.push(json!({ "pair": pair, "op": op, "verdict": verdict_json(&v) }));
                verdicts.push(v);
            }
            Err(e) => {
                lines.push(json!({ "pair": pair, "op": op, "refused": e.to_string() }));
                refusals.push(e);
            }
        }
    }
    let mut consistent = true;
    for basis in [Basis::IsometricTrace, Basis::SameSpinorGenus] {
        let answers: HashSet<bool> = verdicts.iter().filter(|v| v.basis == basis).map(|v| v.answer).collect();
        if answers.len() > 1 {
            consistent = false;
            lines.push(json!({ "pair": pair, "inconsistent": basis }));
        }
    }
    let isometry = verdicts.iter().any(|v| v.basis == Basis::IsometricTrace);
    if oracle {
        let eq = genus_equal(&a.gram, &b.gram)?;
        // isometry and spinor-genus equality both imply genus equality, and for
        // these trace forms genus equality gives back the spinor genus
        let disagree: Vec<&str> = verdicts
            .iter()
            .filter(|v| matches!(v.basis, Basis::IsometricTrace | Basis::SameSpinorGenus) && v.answer != eq)
            .map(|v| v.theorem)
            .collect();
        let mut line = json!({ "pair": pair, "oracle": { "genus_equal": eq, "agrees": disagree.is_empty() } });
        if !disagree.is_empty() {
            consistent = false;
            line["oracle"]["disagreeing"] = json!(disagree);
            line["oracle"]["symbols"] = json!([genus_symbol(&a.gram)?, genus_symbol(&b.gram)?]);
        }
        lines.push(line);
    }
    if let Some(bound) = witness_bound {
        // searched between reduced Grams, reported in the given bases too
        let w = reduced_witness_search(&a.gram, &b.gram, bound)?;
        lines.push(json!({
            "pair": pair,
            "witness": w.as_ref().map(|w| mat_json(&w.full)),
            "witness_reduced": w.as_ref().map(|w| mat_json(&w.reduced)),
            "bound": bound,
        }));
    }
    Ok((lines, isometry, consistent, refusals))
}

fn find<'a>(records: &'a [FieldRecord], label: &str) -> Result<&'a FieldRecord> {
    records.iter().find(|r| r.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Decides the pair `(a, b)` with every applicable criterion.
pub fn cmd_compare(records: &[FieldRecord], a: &str, b: &str, oracle: bool, witness_bound: Option<u32>) -> Report {
    let mut rep = Report::default();
    let built = find(records, a).and_then(build).and_then(|x| Ok((x, find(records, b).and_then(build)?)));
    let (x, y) = match built {
        Ok(v) => v,
        Err(e) => {
            rep.error(&format!("{a} / {b}"), &e);
            return rep;
        }
    };
    match compare_pair(&x, &y, oracle, witness_bound) {
        Ok((lines, isometry, consistent, refusals)) => {
            rep.lines.extend(lines);
            if !consistent {
                rep.fail(5);
            }
            if !isometry {
                let code = if refusals.iter().any(Error::is_tameness) { 3 } else { 4 };
                rep.push(json!({ "pair": [a, b], "error": "no applicable criterion for isometry", "exit": code }));
                rep.fail(code);
            }
        }
        Err(e) => rep.error(&format!("{a} / {b}"), &e),
    }
    rep
}

/// Options of the `scan` command.
#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub group_by_disc: bool,
    pub cubic_search: Option<u64>,
    pub witness_bound: Option<u32>,
    pub exec: Exec,
}

/// Pairwise decisions inside groups of ingested fields, or over the
/// equal-discriminant pairs of an exhaustive cubic search.
pub fn cmd_scan(records: &[FieldRecord], opts: &ScanOptions) -> Report {
    let mut rep = Report::default();
    let mut built = Vec::new();
    for rec in records {
        match build(rec) {
            Ok(b) => built.push(b),
            Err(e) => rep.error(&rec.label, &e),
        }
    }
    if let Some(bound) = opts.cubic_search {
        eprintln!("cubic search up to |disc| {bound}");
        match cubic_search(bound, opts.exec) {
            Ok(s) => {
                eprintln!("{} candidates, {} fields", s.candidates, s.fields.len());
                for f in &s.fields {
                    match FieldProfile::of(&f.field).and_then(|profile| Ok(Built { gram: trace_gram(&f.field)?, field: f.field.clone(), profile })) {
                        Ok(b) => built.push(b),
                        Err(e) => rep.error(&f.field.label, &e),
                    }
                }
            }
            Err(e) => {
                rep.error("cubic-search", &e);
                return rep;
            }
        }
    }
    let mut groups: BTreeMap<(usize, Option<BigInt>), Vec<usize>> = BTreeMap::new();
    for (i, b) in built.iter().enumerate() {
        let key = (b.field.n, (opts.group_by_disc || opts.cubic_search.is_some()).then(|| b.field.disc.clone()));
        groups.entry(key).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for idx in groups.values() {
        for (k, &i) in idx.iter().enumerate() {
            for &j in &idx[k + 1..] {
                pairs.push((i, j));
            }
        }
    }
    eprintln!("{} pairs", pairs.len());
    let results = exec::map(&pairs, opts.exec, |&(i, j)| {
        let (a, b) = (&built[i], &built[j]);
        let skip = |why: &str| Ok((vec![json!({ "pair": [a.field.label, b.field.label], "skipped": why })], true));
        if a.field.sig != b.field.sig {
            return skip("signatures differ");
        }
        // an input field may reappear among the search results
        if a.field.disc == b.field.disc && fields_isomorphic(&a.field.poly, &b.field.poly)? {
            return skip("isomorphic fields");
        }
        compare_pair(a, b, true, opts.witness_bound).map(|(lines, _, consistent, _)| (lines, consistent))
    });
    let mut failures = 0;
    for r in results {
        match r {
            Ok((lines, consistent)) => {
                rep.lines.extend(lines);
                if !consistent {
                    failures += 1;
                    rep.fail(5);
                }
            }
            Err(e) => rep.error("pair", &e),
        }
    }
    if !(records.is_empty() && opts.cubic_search.is_none()) {
        rep.push(json!({ "summary": { "fields": built.len(), "pairs": pairs.len(), "inconsistent": failures } }));
    }
    rep
}

fn check(name: &str, p: Option<u64>, ok: bool, detail: Value) -> Value {
    let mut v = json!({ "check": name, "ok": ok });
    if let Some(p) = p {
        v["p"] = json!(p);
    }
    if !detail.is_null() {
        v["detail"] = detail;
    }
    v
}

fn field_checks(field: &NumberFieldData) -> Result<Vec<Value>> {
    let mut out = Vec::new();
    out.push(match check_maximal(field) {
        Ok(()) => check("maximal-order", None, true, Value::Null),
        Err(e) => check("maximal-order", None, false, json!(e.to_string())),
    });
    let g = trace_gram(field)?;
    out.push(check("det-equals-disc", None, g.det() == field.disc, json!({ "det": big_json(&g.det()), "disc": big_json(&field.disc) })));
    let sig = signature(&g)?;
    let want = (field.sig.0 + field.sig.1, field.sig.1);
    out.push(check("signature", None, sig == want, json!({ "gram": [sig.0, sig.1], "expected": [want.0, want.1] })));
    let profile = match FieldProfile::of(field) {
        Ok(p) => {
            out.push(check("tame-valuation", None, true, Value::Null));
            p
        }
        Err(e @ Error::Consistency(_)) => {
            out.push(check("tame-valuation", None, false, json!(e.to_string())));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    for (&p, s) in &profile.ramified {
        let Some(s) = s else {
            out.push(check("splitting", Some(p), false, json!("splitting unavailable; supply it in the record")));
            continue;
        };
        if p == 2 || !s.is_tame() {
            continue;
        }
        out.push(check("alpha-sign-identity", Some(p), sign_identity_holds(s)?, Value::Null));
        let model = local_trace_model(field, p)?;
        let actual = local_symbol(&g, p)?;
        let predicted = local_symbol(&model.to_gram()?, p)?;
        let ok = actual == predicted;
        let mut detail = json!({ "model": model.to_string() });
        if !ok {
            let alt = disc_trace_model(field, p)?;
            detail["gram_symbol"] = json!(actual);
            detail["model_symbol"] = json!(predicted);
            detail["disc_beta_model"] = json!(alt.to_string());
            detail["disc_beta_matches"] = json!(local_symbol(&alt.to_gram()?, p)? == actual);
        }
        out.push(check("local-trace-model", Some(p), ok, detail));
    }
    if let Some(c) = cubic_local3_check(field, &g)? {
        out.push(c);
    }
    Ok(out)
}

/// For `x^3 + 3a x + b` totally ramified at 3 with 3 prime to the index,
/// the trace form at 3 against the branch classification.
fn cubic_local3_check(field: &NumberFieldData, g: &GramMatrix) -> Result<Option<Value>> {
    let f = &field.poly;
    if field.n != 3 || !f[2].is_zero() || valuation(&field.index, 3) != 0 {
        return Ok(None);
    }
    let three = BigInt::from(3);
    if !(&f[1] % &three).is_zero() {
        return Ok(None);
    }
    let (Ok(a), Ok(b)) = (i64::try_from(&(&f[1] / &three)), i64::try_from(&f[0])) else {
        return Ok(None);
    };
    let Ok(class) = decide::cubic_local3_class(a, b) else {
        return Ok(None);
    };
    let ok = local_symbol(g, 3)? == local_symbol(&class.to_gram()?, 3)?;
    Ok(Some(check("cubic-local-3", Some(3), ok, json!({ "class": class.to_string() }))))
}

/// Independent checks of the trace forms of every ingested field, plus the
/// 2-adic comparison on pairs of equal degree and discriminant.
pub fn cmd_oracle_check(records: &[FieldRecord]) -> Report {
    let mut rep = Report::default();
    let mut grams: Vec<(NumberFieldData, GramMatrix, bool)> = Vec::new();
    for rec in records {
        let field = match field_from_record(rec) {
            Ok(f) => f,
            Err(e @ Error::BadBasis(_)) => {
                rep.push(json!({ "label": rec.label, "checks": [check("basis-is-order", None, false, json!(e.to_string()))] }));
                rep.fail(5);
                continue;
            }
            Err(e) => {
                rep.error(&rec.label, &e);
                continue;
            }
        };
        match field_checks(&field) {
            Ok(checks) => {
                if checks.iter().any(|c| c["ok"] == json!(false)) {
                    rep.fail(5);
                }
                rep.push(json!({ "label": field.label, "checks": checks }));
                if let Ok(g) = trace_gram(&field) {
                    let two_tame = match FieldProfile::of(&field).and_then(|p| p.ramified.get(&2).cloned().map_or(Ok(None), |s| s.ok_or(Error::UnsupportedSplitting(2)).map(Some))) {
                        Ok(None) => true,
                        Ok(Some(s)) => s.is_tame(),
                        Err(_) => false,
                    };
                    grams.push((field, g, two_tame));
                }
            }
            Err(e) => rep.error(&field.label, &e),
        }
    }
    for i in 0..grams.len() {
        for j in i + 1..grams.len() {
            let (a, ga, ta) = &grams[i];
            let (b, gb, tb) = &grams[j];
            if a.n != b.n || a.disc != b.disc || !ta || !tb {
                continue;
            }
            let (sa, sb) = match (local_symbol(ga, 2), local_symbol(gb, 2)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => {
                    rep.error(&a.label, &e);
                    continue;
                }
            };
            let ok = sa == sb;
            let mut line = json!({ "pair": [a.label, b.label], "checks": [check("two-adic-symbol", Some(2), ok, Value::Null)] });
            if !ok {
                line["checks"][0]["detail"] = json!([sa, sb]);
                rep.fail(5);
            }
            rep.push(line);
        }
    }
    rep
}

