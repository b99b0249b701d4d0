//! Browser front end: the page in `www/` calls the three exported functions
//! below. Each wraps a plain function returning `Result<_, String>` so the
//! logic is testable off the browser.

use num_complex::Complex64;
use serde_json::json;
use tto_core::blaschke::BlaschkeProduct;
use tto_core::bounds::{accumulation_experiment, bound_report, nu_measure, Anchor, ReportOptions};
use tto_core::circle::{CircleGrid, TrigPolynomial};
use tto_core::model_space::{default_grid, ModelBasis};
use tto_core::operator::SplitSymbol;
use wasm_bindgen::prelude::*;

// Largest family size the page accepts; bigger ones stall the tab.
const MAX_FAMILY: usize = 64;

fn parse_theta(text: &str) -> Result<BlaschkeProduct, String> {
    let theta: BlaschkeProduct = serde_json::from_str(text).map_err(|e| format!("Θ: {e}"))?;
    if theta.degree() == 0 {
        return Err("Θ must have at least one zero".into());
    }
    Ok(theta)
}

fn parse_phi(text: &str) -> Result<TrigPolynomial, String> {
    match text.trim() {
        "constant" => Ok(TrigPolynomial::constant(Complex64::new(1.0, 0.0))),
        "re_z" => Ok(TrigPolynomial::re_z()),
        "cos" => Ok(TrigPolynomial::cos()),
        "shifted_cos" => Ok(TrigPolynomial::shifted_cos()),
        other => serde_json::from_str(other).map_err(|e| format!("φ: {e}")),
    }
}

/// Density of `ν` at the anchor `(re, im)` on `samples` equally spaced
/// angles. Anchors with modulus at least one are projected to the circle.
pub fn density(theta: &str, re: f64, im: f64, samples: usize) -> Result<Vec<f64>, String> {
    let theta = parse_theta(theta)?;
    let grid = CircleGrid::new(samples).map_err(|e| e.to_string())?;
    let z = Complex64::new(re, im);
    let r = z.norm();
    let anchor = if r < 1.0 {
        Anchor::Interior(z)
    } else if r.is_finite() {
        Anchor::Boundary(z / r)
    } else {
        return Err("anchor must be finite".into());
    };
    nu_measure(&theta, anchor, grid)
        .map(|nu| nu.density)
        .map_err(|e| e.to_string())
}

/// Operator norm and every lower bound, as JSON.
pub fn report(theta: &str, phi: &str) -> Result<String, String> {
    let theta = parse_theta(theta)?;
    let phi = parse_phi(phi)?;
    let basis = ModelBasis::malmquist(&theta, default_grid(&theta, phi.degree()))
        .map_err(|e| e.to_string())?;
    let r = bound_report(
        &basis,
        &SplitSymbol::from_trig(&phi),
        &ReportOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

/// Norm against `‖φ‖_∞` on the accumulating zero families, as JSON rows.
pub fn accumulation(phi: &str, sizes: &[u32]) -> Result<String, String> {
    let phi = parse_phi(phi)?;
    let sizes: Vec<usize> = sizes.iter().map(|&m| m as usize).collect();
    if let Some(m) = sizes.iter().find(|&&m| m > MAX_FAMILY) {
        return Err(format!("family size {m} exceeds {MAX_FAMILY}"));
    }
    let rows = accumulation_experiment(&phi, &sizes).map_err(|e| e.to_string())?;
    Ok(json!(rows).to_string())
}

#[wasm_bindgen(js_name = nuDensity)]
pub fn nu_density(theta: &str, re: f64, im: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    density(theta, re, im, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = boundReport)]
pub fn bound_report_json(theta: &str, phi: &str) -> Result<String, JsError> {
    report(theta, phi).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = accumulationTable)]
pub fn accumulation_table(phi: &str, sizes: Vec<u32>) -> Result<String, JsError> {
    accumulation(phi, &sizes).map_err(|e| JsError::new(&e))
}
