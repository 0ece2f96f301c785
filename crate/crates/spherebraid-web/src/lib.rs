//! Browser bindings: braid order and equality, the class list for a given n,
//! and subgroup lattices of the catalog groups. Every call returns JSON.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use spherebraid::braid_words::parse_braid;
use spherebraid::finite_groups::{lattice_summary, make_group, subgroups, GroupFamily};
use spherebraid::sphere_oracle::{equals, order};
use spherebraid::vc_classifier::{enumerate_v, enumerate_vtilde};

const MAX_N: usize = 64;

fn reply(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn strands(n: usize) -> Result<usize, String> {
    if (3..=MAX_N).contains(&n) { Ok(n) } else { Err(format!("n must lie in 3..={MAX_N}")) }
}

pub fn order_json(n: usize, word: &str) -> Result<Value, String> {
    let w = parse_braid(word, strands(n)?).map_err(|e| e.to_string())?;
    Ok(json!({ "n": n, "word": w.to_string(), "order": order(&w).to_string() }))
}

pub fn equal_json(n: usize, w1: &str, w2: &str) -> Result<Value, String> {
    let n = strands(n)?;
    let a = parse_braid(w1, n).map_err(|e| e.to_string())?;
    let b = parse_braid(w2, n).map_err(|e| e.to_string())?;
    let eq = equals(&a, &b).map_err(|e| e.to_string())?;
    Ok(json!({ "n": n, "equal": eq }))
}

pub fn classify_json(n: usize, mcg: bool) -> Result<Value, String> {
    let n = strands(n)?;
    let records = if mcg { enumerate_vtilde(n) } else { enumerate_v(n) }.map_err(|e| e.to_string())?;
    let rows: Vec<Value> = records
        .iter()
        .map(|r| json!({ "shape": r.shape.to_string(), "kind": r.kind, "status": r.status, "ref": r.status_ref }))
        .collect();
    Ok(json!({ "n": n, "mcg": mcg, "classes": rows }))
}

pub fn lattice_json(group: &str) -> Result<Value, String> {
    let fam: GroupFamily = group.parse().map_err(|e: spherebraid::finite_groups::GroupError| e.to_string())?;
    let g = make_group(fam).map_err(|e| e.to_string())?;
    let subs = subgroups(&g).map_err(|e| e.to_string())?;
    serde_json::to_value(lattice_summary(&g, &subs)).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn braid_order(n: usize, word: &str) -> String {
    reply(order_json(n, word))
}

#[wasm_bindgen]
pub fn braid_equal(n: usize, w1: &str, w2: &str) -> String {
    reply(equal_json(n, w1, w2))
}

#[wasm_bindgen]
pub fn classify(n: usize, mcg: bool) -> String {
    reply(classify_json(n, mcg))
}

#[wasm_bindgen]
pub fn group_lattice(group: &str) -> String {
    reply(lattice_json(group))
}
