//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Everything crosses the boundary as JSON text; the `*_json` functions are
//! the plain-Rust versions used by the tests. Integer arguments are `i32`
//! so that JavaScript numbers pass without BigInt.

use candeg::bounds::{self, Case};
use candeg::catalog::{self, EntryKind};
use candeg::expr::Params;
use candeg::genpair;
use candeg::run::{run, Verb};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

pub fn feasibility_table_json(
    case: &str,
    d_min: i64,
    d_max: i64,
    q_x: i64,
    q_sigma: i64,
    pg_max: i64,
) -> Result<String, String> {
    let case: Case = case
        .parse()
        .map_err(|_| format!("case must be A or B, got {case}"))?;
    if d_min < 2 || d_max < d_min || d_max > 200 {
        return Err(format!("degree range {d_min}..{d_max} must lie in 2..200"));
    }
    if !(3..=2000).contains(&pg_max) || q_x < 0 || q_sigma < 0 {
        return Err("need 3 <= pg max <= 2000 and nonnegative irregularities".into());
    }
    let rows = bounds::enumerate_feasible(case, d_min..=d_max, q_x, q_sigma, pg_max);
    let max_d = (3..=pg_max)
        .filter_map(|pg| bounds::max_degree(case, pg, q_x, q_sigma).map(|d| (pg, d)))
        .collect::<Vec<_>>();
    Ok(json!({"rows": rows, "max_degree_by_pg": max_d}).to_string())
}

pub fn sequence_table_json(id: &str, n_max: i64) -> Result<String, String> {
    let all = catalog::builtin();
    let e = catalog::find(&all, id).map_err(|e| e.to_string())?;
    let p = e
        .pair
        .as_ref()
        .ok_or_else(|| format!("{id} is not a generating pair"))?;
    if !(3..=500).contains(&n_max) {
        return Err("n max must be between 3 and 500".into());
    }
    let rows = (3..=n_max)
        .map(|n| {
            let s = genpair::sequence(p, n).map_err(|e| e.to_string())?;
            let verdicts = bounds::check(&s.record());
            let failing: Vec<_> = verdicts
                .iter()
                .filter(|v| v.status == bounds::Status::Fail)
                .map(|v| v.rule)
                .collect();
            let slope = candeg::picard::Rational::new(s.k2_x, s.chi_x());
            Ok(json!({
                "n": n, "pg": s.pg, "q_x": s.q_x, "k2_x": s.k2_x, "k2_sigma": s.k2_sigma,
                "chi": s.chi_x(), "slope": slope.to_string(),
                "degree": s.degree, "case": s.case, "failing": failing,
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let lim = genpair::slope_limit(p);
    Ok(
        json!({"id": id, "title": e.title, "slope_limit": lim.to_string(), "rows": rows})
            .to_string(),
    )
}

pub fn catalog_report_json(id: &str, params: &str) -> Result<String, String> {
    let all = catalog::builtin();
    let e = catalog::find(&all, id).map_err(|e| e.to_string())?;
    let params: Params = if params.trim().is_empty() {
        Params::new()
    } else {
        serde_json::from_str(params).map_err(|e| format!("parameters: {e}"))?
    };
    let report = run(e, &Verb::ALL, &params);
    serde_json::to_string(&json!({
        "report": report,
        "text": report.to_string(),
        "notes": e.notes,
    }))
    .map_err(|e| e.to_string())
}

pub fn catalog_index_json() -> String {
    let all = catalog::builtin();
    let items: Vec<_> = all
        .iter()
        .map(|e| {
            let kind = match e.kind {
                EntryKind::AbelianCover => "abelian_cover",
                EntryKind::GeneratingPair => "generating_pair",
                EntryKind::RecordOnly => "record_only",
            };
            json!({"id": e.id, "kind": kind, "title": e.title, "params": e.params})
        })
        .collect();
    serde_json::Value::Array(items).to_string()
}

/// Largest admissible pg per degree, plus the max degree for each pg.
#[wasm_bindgen]
pub fn feasibility_table(
    case: &str,
    d_min: i32,
    d_max: i32,
    q_x: i32,
    q_sigma: i32,
    pg_max: i32,
) -> Result<String, JsValue> {
    to_js(feasibility_table_json(
        case,
        d_min.into(),
        d_max.into(),
        q_x.into(),
        q_sigma.into(),
        pg_max.into(),
    ))
}

/// Invariants of `X_n` for `n = 3..=n_max`.
#[wasm_bindgen]
pub fn sequence_table(id: &str, n_max: i32) -> Result<String, JsValue> {
    to_js(sequence_table_json(id, n_max.into()))
}

/// Full run of a catalog entry; `params` is a JSON object such as `{"m": 4}`.
#[wasm_bindgen]
pub fn catalog_report(id: &str, params: &str) -> Result<String, JsValue> {
    to_js(catalog_report_json(id, params))
}

#[wasm_bindgen]
pub fn catalog_index() -> String {
    catalog_index_json()
}
