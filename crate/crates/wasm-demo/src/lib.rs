//! Browser bindings: figure eight colored Jones values, cable degree tables
//! and cabled A-polynomials.

use std::fmt::Write;

use qknot::apoly::a_cable;
use qknot::jones::{cable_degree_table, degrees, fig8, CableParams};
use wasm_bindgen::prelude::*;

const MAX_N: i64 = 40;
const MAX_ROWS: i64 = 20;
const MAX_S: i64 = 7;

fn params(r: i64, s: i64) -> Result<CableParams, String> {
    if s > MAX_S || r.abs() > 200 {
        return Err(format!("keep s <= {MAX_S} and |r| <= 200 in the browser"));
    }
    CableParams::new(r, s).map_err(|e| e.to_string())
}

pub fn fig8_jones_text(n: i64) -> Result<String, String> {
    if n.abs() > MAX_N {
        return Err(format!("keep |n| <= {MAX_N} in the browser"));
    }
    let v = fig8().value(n);
    if v.is_zero() {
        return Ok("0".into());
    }
    let (lo, hi) = degrees(&v).map_err(|e| e.to_string())?;
    Ok(format!("{v}\n\nlowest degree {lo}, highest degree {hi}, {} terms", v.len()))
}

pub fn cable_degrees_text(r: i64, s: i64, n_max: i64) -> Result<String, String> {
    if !(1..=MAX_ROWS).contains(&n_max) {
        return Err(format!("n_max must be between 1 and {MAX_ROWS}"));
    }
    let p = params(r, s)?;
    let table = cable_degree_table(p, n_max).map_err(|e| e.to_string())?;
    let mut out = String::from("n   predicted        computed         match\n");
    for row in &table.rows {
        let pred = format!("({}, {})", row.predicted.0, row.predicted.1);
        let comp = format!("({}, {})", row.computed.0, row.computed.1);
        let _ = writeln!(out, "{:<3} {pred:<16} {comp:<16} {}", row.n, if row.matches { "yes" } else { "NO" });
    }
    Ok(out)
}

pub fn cable_apoly_text(r: i64, s: i64) -> Result<String, String> {
    let a = a_cable(params(r, s)?).map_err(|e| e.to_string())?;
    let mut out = format!("A = {}\n", a.poly);
    for (name, f) in &a.factors {
        let _ = write!(out, "\n{name}: {f}\n");
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn fig8_jones(n: i32) -> Result<String, JsError> {
    fig8_jones_text(n as i64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cable_degrees(r: i32, s: i32, n_max: i32) -> Result<String, JsError> {
    cable_degrees_text(r as i64, s as i64, n_max as i64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cable_apoly(r: i32, s: i32) -> Result<String, JsError> {
    cable_apoly_text(r as i64, s as i64).map_err(|e| JsError::new(&e))
}
