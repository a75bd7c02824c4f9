//! Browser bindings: the two-point mean curves of a generator pair, the
//! full bound report, and single mean evaluation. Each export has a plain
//! Rust twin returning `Result<_, String>` so the logic is testable natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qamean::{
    from_spec, full_report, qa_mean, two_point_mean, BoundKind, Generator, Interval, OptimizerConfig, WeightedSample,
};

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn pair(f: &str, g: &str, interval: &str) -> Result<(Generator, Generator, Interval), String> {
    let u: Interval = interval.parse().map_err(err)?;
    Ok((from_spec(f, u).map_err(err)?, from_spec(g, u).map_err(err)?, u))
}

fn list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("'{s}' is not a number")))
        .collect()
}

/// `θ ↦ A[f]_θ(z, x)` and `A[g]_θ(z, x)` on `points` equally spaced weights.
pub fn mean_curves(f: &str, g: &str, interval: &str, x: f64, z: f64, points: usize) -> Result<String, String> {
    let (f, g, _) = pair(f, g, interval)?;
    let n = points.clamp(2, 4096);
    let mut theta = Vec::with_capacity(n);
    let (mut mf, mut mg) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        theta.push(t);
        mf.push(two_point_mean(&f, z, x, t).map_err(err)?);
        mg.push(two_point_mean(&g, z, x, t).map_err(err)?);
    }
    Ok(json!({ "theta": theta, "f": mf, "g": mg }).to_string())
}

/// The measured distance with every bound, as JSON.
pub fn bound_report(f: &str, g: &str, interval: &str, grid: usize) -> Result<String, String> {
    let (f, g, u) = pair(f, g, interval)?;
    let grid = grid.clamp(8, 256);
    let cfg = OptimizerConfig { grid_n: grid, grid_m: grid, ..Default::default() };
    let r = full_report(&f, &g, &u, &cfg).map_err(err)?;
    let bounds: Vec<Value> = r
        .entries
        .iter()
        .filter(|e| e.kind != BoundKind::Advisory)
        .map(|e| {
            json!({
                "name": e.name,
                "kind": e.kind.as_str(),
                "value": if e.applicable { json!(e.value) } else { Value::Null },
                "note": e.note,
            })
        })
        .collect();
    Ok(json!({
        "pair": [r.pair.0, r.pair.1],
        "interval": r.interval.to_string(),
        "K": r.measures.k,
        "epsilon": r.measures.epsilon,
        "rho": { "value": r.rho.value, "x": r.rho.arg.x, "z": r.rho.arg.z, "theta": r.rho.arg.theta },
        "sandwich": r.sandwich.holds,
        "bounds": bounds,
    })
    .to_string())
}

/// `A[f](values, weights)`; empty weights mean uniform.
pub fn weighted_mean(spec: &str, values: &str, weights: &str, interval: &str) -> Result<f64, String> {
    let values = list(values)?;
    let weights = list(weights)?;
    let sample =
        if weights.is_empty() { WeightedSample::uniform(values) } else { WeightedSample::new(values, weights) }
            .map_err(err)?;
    let u: Interval = interval.parse().map_err(err)?;
    qa_mean(&from_spec(spec, u).map_err(err)?, &sample).map_err(err)
}

#[wasm_bindgen(js_name = meanCurves)]
pub fn mean_curves_js(f: &str, g: &str, interval: &str, x: f64, z: f64, points: usize) -> Result<String, JsError> {
    mean_curves(f, g, interval, x, z, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = boundReport)]
pub fn bound_report_js(f: &str, g: &str, interval: &str, grid: usize) -> Result<String, JsError> {
    bound_report(f, g, interval, grid).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = weightedMean)]
pub fn weighted_mean_js(spec: &str, values: &str, weights: &str, interval: &str) -> Result<f64, JsError> {
    weighted_mean(spec, values, weights, interval).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_start_and_end_at_the_entries() {
        let out: Value = serde_json::from_str(&mean_curves("exp:15", "exp:20", "0,1", 0.0, 1.0, 11).unwrap()).unwrap();
        let f = out["f"].as_array().unwrap();
        assert_eq!(f.len(), 11);
        assert_eq!(f[0].as_f64(), Some(0.0));
        assert_eq!(f[10].as_f64(), Some(1.0));
        assert!(out["g"][5].as_f64().unwrap() > out["f"][5].as_f64().unwrap());
    }

    #[test]
    fn report_has_distance_and_bounds() {
        let out: Value = serde_json::from_str(&bound_report("exp:15", "exp:20", "0,1", 32).unwrap()).unwrap();
        let rho = out["rho"]["value"].as_f64().unwrap();
        assert!((rho - 0.2126).abs() < 1e-3);
        assert_eq!(out["sandwich"], true);
        assert!(out["bounds"].as_array().unwrap().iter().any(|b| b["name"] == "box_lower"));
    }

    #[test]
    fn mean_and_errors() {
        assert!((weighted_mean("pow:2", "1, 7", "", "[1,7]").unwrap() - 5.0).abs() < 1e-12);
        assert!((weighted_mean("id", "0,1", "0.25,0.75", "[0,1]").unwrap() - 0.75).abs() < 1e-15);
        assert!(weighted_mean("id", "0,x", "", "[0,1]").unwrap_err().contains("not a number"));
        assert!(weighted_mean("log", "1,2", "", "-1,2").is_err());
        assert!(bound_report("exp:1", "nope", "0,1", 32).is_err());
    }
}
