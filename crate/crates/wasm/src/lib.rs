//! Browser bindings: a bound table, the hole identity check on a pasted code,
//! and the weight-4 LP cap. Each export has a plain Rust twin used by tests.

use codebounds::bounds::{BoundEngine, Method, Mode};
use codebounds::cw::CwProvider;
use codebounds::holes::{verify_identities, ExplicitCode};
use codebounds::lp::{self, build_lp_even};
use codebounds::scalar::{int, to_text};
use codebounds::table::{Table, TableSpec};
use wasm_bindgen::prelude::*;

/// Longest range the page will tabulate in one call.
const MAX_ROWS: u32 = 40;

/// CSV comparison table for odd `d` over `n_from..=n_to`. `methods` is a
/// comma-separated list of ids; empty means every binary method.
pub fn table_csv(d: u32, n_from: u32, n_to: u32, methods: &str) -> Result<String, String> {
    if n_to >= n_from && n_to - n_from >= MAX_ROWS {
        return Err(format!("at most {MAX_ROWS} rows"));
    }
    let methods = if methods.trim().is_empty() {
        Method::BINARY.to_vec()
    } else {
        methods
            .split(',')
            .map(|m| m.trim().parse::<Method>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?
    };
    let engine = BoundEngine::new(CwProvider::with_default_table(), Mode::Permissive);
    let spec = TableSpec {
        d,
        w: None,
        n_range: n_from..=n_to,
        methods,
    };
    Table::compute(&engine, &spec, false)
        .map(|t| t.to_csv())
        .map_err(|e| e.to_string())
}

/// Identity report, as JSON, for a code given one `0`/`1` word per line.
pub fn verify_json(text: &str) -> Result<String, String> {
    let (n, words) = ExplicitCode::parse(text).map_err(|e| e.to_string())?;
    if n > 16 {
        return Err("the page enumerates at most 2^16 words; use the command line".into());
    }
    let code = ExplicitCode::with_inferred_radius(n, words, 1).map_err(|e| e.to_string())?;
    let report = verify_identities(&code).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

/// Largest weight-4 entry allowed by the parity-extended distance-4 program,
/// next to the closed-form cap when one applies.
pub fn a4_cap(n_tilde: u32) -> Result<String, String> {
    if !(6..=64).contains(&n_tilde) {
        return Err("length must be in 6..=64".into());
    }
    let engine = BoundEngine::new(CwProvider::with_default_table(), Mode::Permissive);
    let mut dl = build_lp_even(n_tilde, 1, &engine.provider, &[]).map_err(|e| e.to_string())?;
    dl.program.objective[4] = int(1);
    let sol = lp::solve(&dl.program).map_err(|e| e.to_string())?;
    let lp_max = sol.optimum().map_err(|e| e.to_string())?;
    let cap = engine.vroedt_cap(n_tilde).map_err(|e| e.to_string())?;
    Ok(format!(
        "{{\"n_tilde\":{n_tilde},\"lp_max\":\"{}\",\"cap\":\"{}\"}}",
        to_text(lp_max),
        to_text(&cap)
    ))
}

#[wasm_bindgen(js_name = boundTable)]
pub fn bound_table(d: u32, n_from: u32, n_to: u32, methods: &str) -> Result<String, JsError> {
    table_csv(d, n_from, n_to, methods).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = verifyCode)]
pub fn verify_code(text: &str) -> Result<String, JsError> {
    verify_json(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = weightFourCap)]
pub fn weight_four_cap(n_tilde: u32) -> Result<String, JsError> {
    a4_cap(n_tilde).map_err(|e| JsError::new(&e))
}
