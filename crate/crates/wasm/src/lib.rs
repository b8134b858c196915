//! Browser bindings: exact distance with a certificate, the maximum-distance
//! table for small lengths, and the bound report for a length.
//!
//! Each export takes plain strings and numbers and returns JSON text; the
//! `*_json` functions are the same operations without the JS error type so
//! they can be tested natively.

use dupdist::bounds::bound_report;
use dupdist::engine::{distance, distance_bounds, DistanceDp};
use dupdist::{Beta, Error, QString};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Search states allowed per distance call; keeps the page responsive.
pub const PAGE_STATE_BUDGET: usize = 2_000_000;
/// Longest table the page will compute.
pub const PAGE_MAX_TABLE_N: usize = 18;

fn parse_beta(beta: &str) -> Result<Beta, String> {
    let beta = beta.trim();
    if beta.is_empty() {
        return Ok(Beta::ZERO);
    }
    beta.parse().map_err(|e: Error| e.to_string())
}

pub fn distance_json(text: &str, q: usize, beta: &str) -> Result<String, String> {
    let beta = parse_beta(beta)?;
    let v = QString::parse(text.trim(), q).map_err(|e| e.to_string())?;
    let bounds = distance_bounds(&v, beta);
    let out = match distance(&v, beta, PAGE_STATE_BUDGET) {
        Ok(d) => json!({
            "string": v.to_string(),
            "beta": beta.to_string(),
            "f": d.f,
            "explored": d.explored,
            "root": d.certificate.root.to_string(),
            "path": replay_path(&d.certificate),
            "certificate": serde_json::from_str::<serde_json::Value>(&d.certificate.to_json()).expect("JSON"),
            "lower": bounds.best_lower(),
            "upper": bounds.best_upper(),
        }),
        Err(Error::SearchBudget { explored, upper }) => json!({
            "string": v.to_string(),
            "beta": beta.to_string(),
            "f": null,
            "explored": explored,
            "lower": bounds.best_lower(),
            "upper": upper,
        }),
        Err(e) => return Err(e.to_string()),
    };
    Ok(out.to_string())
}

/// Intermediate strings from the root to the target.
fn replay_path(cert: &dupdist::PathCertificate) -> Vec<String> {
    let mut path = vec![cert.root.to_string()];
    for i in 1..=cert.steps.len() {
        let mut prefix = cert.clone();
        prefix.steps.truncate(i);
        if let Ok(s) = prefix.replay() {
            path.push(s.to_string());
        }
    }
    path
}

pub fn table_json(q: usize, n: usize, beta: &str) -> Result<String, String> {
    let beta = parse_beta(beta)?;
    if n == 0 || n > PAGE_MAX_TABLE_N {
        return Err(format!("n must be in 1..={PAGE_MAX_TABLE_N}"));
    }
    let dp = DistanceDp::compute(q, n, beta, 1 << 22).map_err(|e| e.to_string())?;
    Ok(dp.table().to_json())
}

pub fn bounds_json(q: usize, n: u64, beta: &str) -> Result<String, String> {
    let beta = parse_beta(beta)?;
    let report = bound_report(q, n, beta).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

#[wasm_bindgen]
pub fn dup_distance(text: &str, q: usize, beta: &str) -> Result<String, JsValue> {
    distance_json(text, q, beta).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dup_table(q: usize, n: usize, beta: &str) -> Result<String, JsValue> {
    table_json(q, n, beta).map_err(|e| JsValue::from_str(&e))
}

/// `n` arrives as a JS number; it must be a positive integer below 2^53.
#[wasm_bindgen]
pub fn dup_bounds(q: usize, n: f64, beta: &str) -> Result<String, JsValue> {
    if !(n >= 1.0 && n.fract() == 0.0 && n <= 9_007_199_254_740_992.0) {
        return Err(JsValue::from_str("n must be a positive integer"));
    }
    bounds_json(q, n as u64, beta).map_err(|e| JsValue::from_str(&e))
}
