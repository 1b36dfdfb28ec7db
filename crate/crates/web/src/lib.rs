//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string or an error message. Sizes are capped
//! so a click never freezes the tab.

use std::sync::Arc;

use qdouble::bounds::centralizer_report;
use qdouble::double::QuantumDouble;
use qdouble::group::make_group_with_cap;
use qdouble::partition::{default_s_range, random_template, s_independence_check};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

pub const ORDER_CAP: u64 = 2_000;
pub const NMAX_CAP: u64 = 64;
pub const TEMPLATE_CAP: u32 = 500;

fn to_string(v: serde_json::Value) -> String {
    serde_json::to_string(&v).expect("json values always serialize")
}

/// Indicator table of `D(G)` for `n = 1..=nmax`, with the identity check.
#[wasm_bindgen]
pub fn indicators(spec: &str, nmax: u32) -> Result<String, String> {
    let nmax = u64::from(nmax);
    if !(1..=NMAX_CAP).contains(&nmax) {
        return Err(format!("nmax must lie in 1..={NMAX_CAP}"));
    }
    let group = make_group_with_cap(spec, ORDER_CAP).map_err(|e| e.to_string())?;
    let qd = QuantumDouble::new(Arc::new(group)).map_err(|e| e.to_string())?;
    let table = qd.integrality_report(nmax);
    let identity = (0..qd.sectors().len()).all(|c| (1..=nmax).all(|n| qd.identity_check(c, n)));
    let mut doc = table.to_json();
    doc["order"] = json!(qd.group().order());
    doc["identity_check"] = json!(identity);
    Ok(to_string(doc))
}

/// Draws `count` random wreath power systems and checks that solvability and
/// solution counts do not move with `s`.
#[wasm_bindgen]
pub fn sindep(seed: u32, count: u32) -> Result<String, String> {
    if count == 0 || count > TEMPLATE_CAP {
        return Err(format!("count must lie in 1..={TEMPLATE_CAP}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
    let mut constant = 0;
    let mut with_root = 0;
    let mut failures = Vec::new();
    for i in 0..count {
        let w = random_template(&mut rng, 5, 12, 12).map_err(|e| e.to_string())?;
        let report = s_independence_check(&w, &default_s_range(&w)).map_err(|e| e.to_string())?;
        if report.holds() {
            constant += 1;
        } else {
            failures.push(json!({ "index": i, "report": report }));
        }
        with_root += usize::from(!report.cbar.is_empty());
    }
    Ok(to_string(json!({
        "seed": seed,
        "templates": count,
        "constant": constant,
        "with_cbar": with_root,
        "failures": failures,
    })))
}

/// Centralizer witness for the substitution group at `p = 3` or `p = 5`.
#[wasm_bindgen]
pub fn bounds(p: u32) -> Result<String, String> {
    if p != 3 && p != 5 {
        return Err("the demo supports p = 3 and p = 5".into());
    }
    let report = centralizer_report(p, 10_000).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}
