//! Browser bindings: each export takes plain strings and numbers and returns
//! a JSON report, or throws a string describing the error.

use polymix::haar_measure::{mixing_experiment, CylinderSpec, Family};
use polymix::report::{analyze, detect_report, to_json};
use polymix::{ExponentVec, FieldSpec, LaurentPoly};
use wasm_bindgen::prelude::*;

/// Upper limit on certificate depth from the page; keeps a click responsive.
const MAX_K: u32 = 16;

fn poly(p: u32, d: u32, text: &str) -> Result<LaurentPoly, String> {
    let field = FieldSpec::new(u64::from(p)).map_err(|e| e.to_string())?;
    LaurentPoly::parse(field, d as usize, text).map_err(|e| e.to_string())
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("{what}: {e}"))
}

pub fn analyze_json(p: u32, d: u32, text: &str, k_max: u32) -> Result<String, String> {
    let f = poly(p, d, text)?;
    let report = analyze(&f, k_max.min(MAX_K)).map_err(|e| e.to_string())?;
    Ok(to_json(&report))
}

pub fn experiment_json(p: u32, d: u32, text: &str, shape: &str, cylinders: &str, ks: &str) -> Result<String, String> {
    let f = poly(p, d, text)?;
    let shape: Vec<ExponentVec> = parse("shape", shape)?;
    let cylinders: Vec<CylinderSpec> = parse("cylinders", cylinders)?;
    let cylinders = cylinders
        .into_iter()
        .map(|c| CylinderSpec::new(c.window, c.values))
        .collect::<polymix::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let ks: Vec<i64> = parse("k values", ks)?;
    let rows = mixing_experiment(&f, &Family::Shape { shape, ks }, &cylinders).map_err(|e| e.to_string())?;
    Ok(to_json(&rows))
}

pub fn detect_json(p: u32, d: u32, text: &str, tuple: &str, tolerance: u32) -> Result<String, String> {
    let f = poly(p, d, text)?;
    let tuple: Vec<ExponentVec> = parse("tuple", tuple)?;
    let report = detect_report(&f, &tuple, tolerance).map_err(|e| e.to_string())?;
    Ok(to_json(&report))
}

/// Support, Newton polytope, bounds and Frobenius certificate.
#[wasm_bindgen(js_name = analyze)]
pub fn analyze_js(p: u32, d: u32, poly: &str, k_max: u32) -> Result<String, JsValue> {
    analyze_json(p, d, poly, k_max).map_err(|e| JsValue::from_str(&e))
}

/// Joint measure against the product of marginals along `k · shape`.
#[wasm_bindgen(js_name = experiment)]
pub fn experiment_js(p: u32, d: u32, poly: &str, shape: &str, cylinders: &str, ks: &str) -> Result<String, JsValue> {
    experiment_json(p, d, poly, shape, cylinders, ks).map_err(|e| JsValue::from_str(&e))
}

/// Parallel-redrawing search in a tuple, with homothety snapping.
#[wasm_bindgen(js_name = detect)]
pub fn detect_js(p: u32, d: u32, poly: &str, tuple: &str, tolerance: u32) -> Result<String, JsValue> {
    detect_json(p, d, poly, tuple, tolerance).map_err(|e| JsValue::from_str(&e))
}
