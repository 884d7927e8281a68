//! Browser bindings. Each exported function takes knowledge-base text and
//! returns a JSON report in the same shape as the command-line `--json`
//! output.

use wasm_bindgen::prelude::*;

use inca::attribution::{most_probable_suspects, AttributionQuery};
use inca::em::lp_bounds;
use inca::kb::{load, parse_evidence, parse_formula, parse_literal, LoadOptions};
use inca::output::Report;

fn framework(kb: &str) -> Result<inca::bridge::InCaFramework, String> {
    load(kb, LoadOptions::default())
        .map(|(_, fw)| fw)
        .map_err(|e| e.to_string())
}

pub fn entail_report(kb: &str, query: &str) -> Result<String, String> {
    let fw = framework(kb)?;
    let q = parse_formula(query).map_err(|e| format!("query: {e}"))?;
    let interval = lp_bounds(fw.em(), &q).map_err(|e| e.to_string())?;
    Ok(Report::new("entail", interval.to_string().into())
        .with_query("formula", q.to_string())
        .with_interval(&interval)
        .to_json())
}

pub fn bounds_report(kb: &str, literal: &str) -> Result<String, String> {
    let fw = framework(kb)?;
    let lit = parse_literal(literal).map_err(|e| format!("literal: {e}"))?;
    let interval = fw.prob_bounds(&lit).map_err(|e| e.to_string())?;
    let nec = fw.nec_set(&lit).map_err(|e| e.to_string())?;
    Ok(Report::new("bounds", interval.to_string().into())
        .with_query("literal", lit.to_string())
        .with_interval(&interval)
        .with_worlds(&nec)
        .to_json())
}

/// `suspects` is comma-separated; `evidence` uses the evidence-file syntax
/// and may be empty.
pub fn attribute_report(
    kb: &str,
    operation: &str,
    suspects: &str,
    evidence: &str,
) -> Result<String, String> {
    let fw = framework(kb)?;
    let names: Vec<&str> = suspects
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let evidence = parse_evidence(evidence)
        .map_err(|e| format!("evidence: {e}"))?
        .into_iter()
        .map(|s| s.value)
        .collect();
    let query = AttributionQuery::new(&names, operation).with_evidence(evidence);
    let answer = most_probable_suspects(&fw, &query).map_err(|e| e.to_string())?;
    Ok(
        Report::new("attribute", answer.most_probable.clone().into())
            .with_query("operation", operation)
            .with_query("suspects", names)
            .with_answer(fw.dialectic(), &answer)
            .to_json(),
    )
}

#[wasm_bindgen]
pub fn entail(kb: &str, query: &str) -> Result<String, JsValue> {
    entail_report(kb, query).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = literalBounds)]
pub fn literal_bounds(kb: &str, literal: &str) -> Result<String, JsValue> {
    bounds_report(kb, literal).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn attribute(
    kb: &str,
    operation: &str,
    suspects: &str,
    evidence: &str,
) -> Result<String, JsValue> {
    attribute_report(kb, operation, suspects, evidence).map_err(|e| JsValue::from_str(&e))
}
