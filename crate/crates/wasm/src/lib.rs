//! wasm-bindgen bindings for the browser demo. Every entry point takes and
//! returns strings; results are JSON documents and failures are JSON
//! objects `{code, message}` thrown as strings.

use serde_json::{json, Value};
use shadowsum::cssum::{constants, cs_state_sum, rel_dev, wlo_cs};
use shadowsum::qracah::{compare_table, FusionTable};
use shadowsum::shadowlink::{derive_shadow, parse_link, shadow_state_sum, wlo_shadow};
use shadowsum::{links, Error, ModularData, RootSystem, Weight};
use wasm_bindgen::prelude::*;

/// Keeps the page responsive: larger alcoves are refused.
pub const MAX_ALCOVE: usize = 60;

fn err(e: Error) -> String {
    json!({ "code": e.code(), "message": e.to_string() }).to_string()
}

fn cx(re: f64, im: f64) -> Value {
    json!([if re == 0.0 { 0.0 } else { re }, if im == 0.0 { 0.0 } else { im }])
}

fn build(algebra: &str, level: i64) -> Result<ModularData, String> {
    let rs = RootSystem::new(algebra.parse().map_err(err)?).map_err(err)?;
    let md = ModularData::new(rs, level).map_err(err)?;
    if md.len() > MAX_ALCOVE {
        return Err(json!({
            "code": "TooLarge",
            "message": format!("alcove has {} weights; the demo stops at {MAX_ALCOVE}", md.len()),
        })
        .to_string());
    }
    Ok(md)
}

fn weights(ws: &[Weight]) -> Value {
    ws.iter().map(|w| json!(w.0)).collect()
}

pub fn modular_json(algebra: &str, level: i64) -> Result<String, String> {
    let md = build(algebra, level)?;
    let n = md.len();
    let s: Vec<Value> = (0..n).map(|i| (0..n).map(|j| { let z = md.s.get(i, j); cx(z.re, z.im) }).collect()).collect();
    let checks: Vec<Value> = md
        .modular_identity_reports()
        .into_iter()
        .chain([md.qdim_check()])
        .map(|c| json!({ "name": c.name, "max_dev": c.max_dev, "pass": c.pass }))
        .collect();
    Ok(json!({
        "algebra": md.rs.spec.to_string(),
        "level": level,
        "alcove": weights(&md.alcove),
        "qdims": (0..n).map(|i| md.qdim_at(i)).collect::<Vec<_>>(),
        "t": md.t.iter().map(|z| cx(z.re, z.im)).collect::<Vec<_>>(),
        "conj": md.conj,
        "s": s,
        "checks": checks,
    })
    .to_string())
}

pub fn fusion_json(algebra: &str, level: i64) -> Result<String, String> {
    let md = build(algebra, level)?;
    let n = md.len();
    let t = FusionTable::build(&md);
    let cmp = compare_table(&t, 1e-8);
    let rows: Vec<Value> = (0..n)
        .flat_map(|g| (0..n).flat_map(move |a| (0..n).map(move |b| (g, a, b))))
        .filter(|&(g, a, b)| t.racah_at(g, a, b) != 0 || t.verlinde_at(g, a, b).round() != 0.0)
        .map(|(g, a, b)| json!([g, a, b, t.verlinde_at(g, a, b), t.racah_at(g, a, b)]))
        .collect();
    Ok(json!({
        "algebra": md.rs.spec.to_string(),
        "level": level,
        "alcove": weights(&md.alcove),
        "entries": rows,
        "max_dev": cmp.max_dev,
        "mismatches": cmp.mismatches,
        "pass": cmp.pass,
    })
    .to_string())
}

pub fn evaluate_json(doc: &str, algebra: &str, level: i64) -> Result<String, String> {
    let link = parse_link(doc).map_err(err)?;
    let algebra = link.algebra.clone().unwrap_or_else(|| algebra.to_string());
    let md = build(&algebra, link.level.unwrap_or(level))?;
    let sh = derive_shadow(&link).map_err(err)?;
    let x = shadow_state_sum(&md, &sh).map_err(err)?;
    let cs = cs_state_sum(&sh, &md).map_err(err)?;
    let w1 = wlo_shadow(&md, &sh).map_err(err)?;
    let w2 = wlo_cs(&sh, &md).map_err(err)?;
    let kpow = constants(&md, sh.genus).k.powi(2 - 2 * sh.genus as i32);
    let faces: Vec<Value> = sh
        .faces
        .iter()
        .zip(&sh.gleams)
        .map(|(f, g)| json!({ "id": f.id, "euler": f.euler, "gleam": g }))
        .collect();
    Ok(json!({
        "algebra": md.rs.spec.to_string(),
        "level": md.level,
        "genus": sh.genus,
        "faces": faces,
        "shadow_state_sum": cx(x.re, x.im),
        "cs_state_sum": cx(cs.re, cs.im),
        "theorem_rel_dev": rel_dev(cs, x * kpow),
        "wlo_shadow": cx(w1.re, w1.im),
        "wlo_cs": cx(w2.re, w2.im),
    })
    .to_string())
}

/// Starter document: three unknots, nested or not, all colored by the first
/// nonzero alcove weight.
pub fn sample_json(algebra: &str, level: i64, nested: bool) -> Result<String, String> {
    let md = build(algebra, level)?;
    let c = &md.alcove[1.min(md.len() - 1)];
    let mut link = if nested { links::nested_unknots(c, c, c) } else { links::three_unknots(c, c, c) };
    link.algebra = Some(md.rs.spec.to_string());
    link.level = Some(level);
    serde_json::to_string_pretty(&link).map_err(|e| err(Error::Parse(e.to_string())))
}

#[wasm_bindgen]
pub fn modular_data(algebra: &str, level: i32) -> Result<String, JsValue> {
    modular_json(algebra, level as i64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fusion_table(algebra: &str, level: i32) -> Result<String, JsValue> {
    fusion_json(algebra, level as i64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn evaluate_link(doc: &str, algebra: &str, level: i32) -> Result<String, JsValue> {
    evaluate_json(doc, algebra, level as i64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_link(algebra: &str, level: i32, nested: bool) -> Result<String, JsValue> {
    sample_json(algebra, level as i64, nested).map_err(|e| JsValue::from_str(&e))
}
