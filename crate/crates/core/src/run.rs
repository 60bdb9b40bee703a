//! Executes `.mfw` programs and renders their results.
//!
//! Every query produces one record with the fields `query`, `kind`,
//! `params`, `result`, `convention` and `version`. Records are built as
//! JSON values, whose object keys are kept sorted, so every output format
//! is a deterministic function of the program text.

use serde_json::{json, Map, Value};

use crate::dsl::{parse_program, Env, NamedSection, Object, Program, Query, TypedQuery};
use crate::error::{Error, Result};
use crate::hom::{hom_shifted_capped, hom_space_capped, hom_table_capped};
use crate::invertible::{bh_transpose, exponent_matrix, weights_from_matrix, ExponentMatrix};
use crate::linsys::DEFAULT_CAP;
use crate::oracle::{
    coker_presentation, ext_dim_periodic, restricted_presentation, stable_hom_dim,
};
use crate::par;
use crate::scalar::Field;
use crate::verify::{
    directedness_report_capped, verify_serre_capped, verify_theorem_capped, Convention,
    DualityConvention, VerifyReport,
};
use crate::VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Invalid(format!(
                "unknown format `{s}`; expected json, csv or text"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub format: Format,
    pub field: Option<Field>,
    pub jobs: Option<usize>,
    pub cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            format: Format::Json,
            field: None,
            jobs: None,
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryOutput {
    pub query: String,
    pub kind: String,
    pub params: Value,
    pub result: Value,
    pub convention: Value,
    /// Set for verify queries whose report fails.
    pub failed: bool,
}

impl QueryOutput {
    pub fn to_json(&self) -> Value {
        json!({
            "query": self.query,
            "kind": self.kind,
            "params": self.params,
            "result": self.result,
            "convention": self.convention,
            "version": VERSION,
        })
    }
}

/// Parses and validates without running any query.
pub fn check_text(text: &str, field: Option<Field>) -> Result<(Env, Vec<TypedQuery>)> {
    Env::elaborate(&parse_program(text)?, field)
}

pub fn run_text(text: &str, options: &RunOptions) -> Result<Vec<QueryOutput>> {
    run_program(&parse_program(text)?, options)
}

pub fn run_program(program: &Program, options: &RunOptions) -> Result<Vec<QueryOutput>> {
    let (_env, queries) = Env::elaborate(program, options.field)?;
    par::with_jobs(options.jobs, || {
        queries
            .iter()
            .enumerate()
            .map(|(k, q)| {
                run_query(q, options.cap).map_err(|e| Error::Query {
                    index: k + 1,
                    inner: Box::new(e),
                })
            })
            .collect()
    })
}

fn names(objs: &[&Object]) -> Vec<String> {
    objs.iter().map(|o| o.name.clone()).collect()
}

fn convention_json(c: &DualityConvention, nvars: usize, mode: &str) -> Value {
    json!({
        "mode": mode,
        "delta": c.delta,
        "delta_value": c.delta_value(nvars),
        "sign": c.sign,
    })
}

fn report_json(rep: &VerifyReport, nvars: usize) -> Value {
    json!({
        "rows": rep.rows,
        "passing": rep.passing.iter().map(|c| convention_json(c, nvars, "candidate")).collect::<Vec<_>>(),
        "counterexamples": rep.counterexamples.iter().map(|(i, n)| json!({"shift": i, "twist": n})).collect::<Vec<_>>(),
        "pass": rep.pass,
    })
}

fn verify_convention(rep: &VerifyReport, mode: Convention, nvars: usize) -> Value {
    let m = match mode {
        Convention::Auto => "auto",
        Convention::Fixed(_) => "fixed",
    };
    if rep.pass {
        convention_json(&rep.convention, nvars, m)
    } else {
        json!({ "mode": m, "passing": Value::Null })
    }
}

fn section_json(s: &NamedSection) -> Value {
    Value::String(s.name.clone())
}

fn run_query(q: &TypedQuery, cap: usize) -> Result<QueryOutput> {
    let mut failed = false;
    let mut convention = Value::Null;
    let (params, result) = match &q.query {
        Query::Hom {
            source,
            target,
            twist,
            shift,
        } => {
            let r = hom_shifted_capped(&source.mf, &target.mf, *twist, *shift, cap)?;
            let basis: Vec<Value> = r
                .class_basis()
                .iter()
                .map(|m| json!({"alpha": m.alpha().to_string(), "beta": m.beta().to_string()}))
                .collect();
            (
                json!({"objects": names(&[source, target]), "twist": twist, "shift": shift}),
                json!({
                    "dim": r.dim,
                    "cycle_dim": r.cycle_dim,
                    "boundary_dim": r.boundary_dim,
                    "basis": basis,
                }),
            )
        }
        Query::HomTable {
            source,
            target,
            twists,
            shifts,
        } => {
            let t = hom_table_capped(&source.mf, &target.mf, twists.clone(), shifts.clone(), cap)?;
            let cells: Vec<Value> = t
                .cells
                .iter()
                .map(|((i, n), d)| json!({"shift": i, "twist": n, "dim": d}))
                .collect();
            (
                json!({
                    "objects": names(&[source, target]),
                    "twists": [twists.start(), twists.end()],
                    "shifts": [shifts.start(), shifts.end()],
                }),
                json!({ "cells": cells }),
            )
        }
        Query::Push { object, section } => {
            let p = section.data.push(&object.mf)?;
            (
                json!({"objects": names(&[object]), "section": section_json(section)}),
                json!({
                    "potential": p.potential().to_string(),
                    "rank": p.rank(),
                    "d": p.d(),
                    "e": p.e(),
                    "phi": p.phi().to_string(),
                    "psi": p.psi().to_string(),
                }),
            )
        }
        Query::VerifyTheorem {
            source,
            target,
            section,
            shifts,
            twists,
            convention: mode,
        } => {
            let rep = verify_theorem_capped(
                &source.mf,
                &target.mf,
                &section.data,
                shifts.clone(),
                twists.clone(),
                *mode,
                cap,
            )?;
            let nvars = section.data.base().nvars();
            failed = !rep.pass;
            convention = verify_convention(&rep, *mode, nvars);
            let mut result = report_json(&rep, nvars);
            result["calabi_yau"] = json!(section.data.is_calabi_yau());
            (
                json!({
                    "objects": names(&[source, target]),
                    "section": section_json(section),
                    "shifts": [shifts.start(), shifts.end()],
                    "twists": [twists.start(), twists.end()],
                }),
                result,
            )
        }
        Query::VerifySerre {
            source,
            target,
            twists,
            convention: mode,
        } => {
            let rep = verify_serre_capped(&source.mf, &target.mf, twists.clone(), *mode, cap)?;
            let nvars = source.mf.ring().nvars();
            failed = !rep.pass;
            convention = verify_convention(&rep, *mode, nvars);
            (
                json!({
                    "objects": names(&[source, target]),
                    "twists": [twists.start(), twists.end()],
                }),
                report_json(&rep, nvars),
            )
        }
        Query::Oracle {
            source,
            target,
            twist,
            index,
            section,
        } => {
            let (module, engine) = match section {
                Some(s) => {
                    let m = restricted_presentation(&source.mf, &s.data)?;
                    let n = restricted_presentation(&target.mf, &s.data)?;
                    let pe = s.data.push(&source.mf)?;
                    let pt = s.data.push(&target.mf)?;
                    (
                        stable_hom_dim(&m, &n, *twist)?,
                        hom_space_capped(&pe, &pt, *twist, cap)?.dim,
                    )
                }
                None if *index == 0 => (
                    stable_hom_dim(
                        &coker_presentation(&source.mf),
                        &coker_presentation(&target.mf),
                        *twist,
                    )?,
                    hom_space_capped(&source.mf, &target.mf, *twist, cap)?.dim,
                ),
                None => (
                    ext_dim_periodic(&source.mf, &target.mf, *index, *twist)?,
                    hom_shifted_capped(&source.mf, &target.mf, *twist, *index, cap)?.dim,
                ),
            };
            let mut params =
                json!({"objects": names(&[source, target]), "twist": twist, "index": index});
            if let Some(s) = section {
                params["section"] = section_json(s);
            }
            (
                params,
                json!({"module_dim": module, "engine_dim": engine, "agree": module == engine}),
            )
        }
        Query::Transpose { ring, poly } => {
            let a = exponent_matrix(poly)?;
            let weights = |m: &ExponentMatrix| match weights_from_matrix(m) {
                Ok((w, c)) => json!({"weights": w, "degree": c}),
                Err(_) => Value::Null,
            };
            let t = bh_transpose(&a)?;
            (
                json!({"ring": ring, "polynomial": poly.to_string()}),
                json!({
                    "exponent_matrix": a.rows,
                    "grading": weights(&a),
                    "transpose": t.to_string(),
                    "transpose_grading": weights(&a.transpose()),
                }),
            )
        }
        Query::Directed {
            objects,
            section,
            convention: conv,
        } => {
            let mfs: Vec<_> = objects.iter().map(|o| o.mf.clone()).collect();
            let rep = directedness_report_capped(&mfs, &section.data, *conv, cap)?;
            let nvars = section.data.base().nvars();
            convention = convention_json(conv, nvars, "fixed");
            let cells: Vec<Value> = rep
                .cells
                .iter()
                .map(|c| {
                    json!({
                        "source": objects[c.source].name,
                        "target": objects[c.target].name,
                        "hom": c.hom,
                        "push_hom": c.push_hom,
                        "dual": c.dual,
                        "decomposes": c.decomposes,
                    })
                })
                .collect();
            let refs: Vec<&Object> = objects.iter().collect();
            (
                json!({"objects": names(&refs), "section": section_json(section)}),
                json!({ "cells": cells }),
            )
        }
    };
    Ok(QueryOutput {
        query: q.text.clone(),
        kind: q.kind.clone(),
        params,
        result,
        convention,
        failed,
    })
}

/// Flattens nested JSON into `(path, scalar)` pairs in key order.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        x => out.push((prefix.to_string(), scalar_text(x))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}

fn records(outputs: &[QueryOutput]) -> Vec<Value> {
    outputs.iter().map(QueryOutput::to_json).collect()
}

pub fn render(outputs: &[QueryOutput], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Value::Array(records(outputs)))
                .expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "kind", "field", "value"])
                .expect("in-memory write");
            for (k, rec) in records(outputs).iter().enumerate() {
                let mut rows = Vec::new();
                let mut body = Map::new();
                for key in ["params", "result", "convention"] {
                    body.insert(key.to_string(), rec[key].clone());
                }
                flatten("", &Value::Object(body), &mut rows);
                for (path, value) in rows {
                    w.write_record([&(k + 1).to_string(), &outputs[k].kind, &path, &value])
                        .expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("UTF-8")
        }
        Format::Text => {
            let mut s = String::new();
            for (k, o) in outputs.iter().enumerate() {
                s.push_str(&format!("[{}] {}\n", k + 1, o.query));
                let mut result = o.result.clone();
                let table = result.as_object_mut().and_then(|m| m.remove("rows"));
                let mut rows = Vec::new();
                flatten("", &result, &mut rows);
                if !o.convention.is_null() {
                    flatten("convention", &o.convention, &mut rows);
                }
                for (path, value) in rows {
                    s.push_str(&format!("  {path} = {value}\n"));
                }
                for r in table
                    .as_ref()
                    .and_then(Value::as_array)
                    .into_iter()
                    .flatten()
                {
                    let parts: Vec<String> = r["summands"]
                        .as_array()
                        .map(|xs| xs.iter().map(|x| x.to_string()).collect())
                        .unwrap_or_default();
                    s.push_str(&format!(
                        "  shift {:>2} twist {:>3}: {} = {}{}\n",
                        r["shift"].to_string(),
                        r["twist"].to_string(),
                        r["lhs"],
                        parts.join(" + "),
                        if r["pass"] == true {
                            ""
                        } else {
                            "  <-- mismatch"
                        }
                    ));
                }
                if o.kind.starts_with("verify") {
                    s.push_str(if o.failed { "  FAIL\n" } else { "  PASS\n" });
                }
            }
            s
        }
    }
}

/// Process exit status: 0 success, 1 usage or parse error, 2 validation
/// error, 3 a verify query failed.
pub fn exit_code(outcome: &Result<Vec<QueryOutput>>) -> i32 {
    match outcome {
        Ok(outs) if outs.iter().any(|o| o.failed) => 3,
        Ok(_) => 0,
        Err(e) if e.is_syntax() => 1,
        Err(_) => 2,
    }
}
