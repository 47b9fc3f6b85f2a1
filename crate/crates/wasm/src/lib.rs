//! Browser demo over the core crate: heatmaps of the representative-function
//! extremes on the (x, x*) plane, enlargement sublevel sets as the level
//! slides, and conjugate curves of one-dimensional max-affine functions.
//!
//! The math lives in plain-Rust functions (testable on the host); the
//! `#[wasm_bindgen]` exports are thin wrappers.

use wasm_bindgen::prelude::*;

use qpos::convex::MaxAffine;
use qpos::enlarge::Enlargement;
use qpos::fitz;
use qpos::harness::{set_from_spec, SetSpec};
use qpos::sets::PositiveSet;

fn parse_set(set_json: &str) -> Result<PositiveSet, String> {
    let spec: SetSpec = serde_json::from_str(set_json).map_err(|e| e.to_string())?;
    let set = set_from_spec(&spec).map_err(|e| e.to_string())?;
    if set.space().dim() != 2 {
        return Err("the demo draws product(1) sets (dimension 2)".to_string());
    }
    Ok(set)
}

fn parse_pieces(pieces_json: &str) -> Result<MaxAffine, String> {
    let pieces: Vec<(Vec<f64>, f64)> = serde_json::from_str::<Vec<serde_json::Value>>(pieces_json)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|v| {
            let g = v["g"]
                .as_array()
                .ok_or("piece needs \"g\"")?
                .iter()
                .map(|x| x.as_f64().ok_or("bad coefficient"))
                .collect::<Result<Vec<f64>, _>>()?;
            let c = v["c"].as_f64().ok_or("piece needs \"c\"")?;
            Ok((g, c))
        })
        .collect::<Result<_, &str>>()
        .map_err(|e| e.to_string())?;
    MaxAffine::new(1, pieces).map_err(|e| e.to_string())
}

/// Scalar field over the window [lo, hi]^2 at n x n samples, row-major with
/// x* increasing along rows. `which`: phi | theta_star | lambda_ea |
/// lambda_ebar. +infinity marks points off the effective domain.
pub fn field_grid_impl(
    set_json: &str,
    which: &str,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let set = parse_set(set_json)?;
    let ea = Enlargement::biggest_unchecked(&set);
    let ebar = Enlargement::smallest_closed_unchecked(&set);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let xs = lo + (hi - lo) * j as f64 / (n - 1) as f64;
            let b = [x, xs];
            let v = match which {
                "phi" => fitz::phi(&set, &b),
                "theta_star" => fitz::theta_star(&set, &b),
                "lambda_ea" => ea.lambda(&b),
                "lambda_ebar" => ebar.lambda(&b),
                other => return Err(format!("unknown field `{other}`")),
            }
            .map_err(|e| e.to_string())?;
            out.push(v);
        }
    }
    Ok(out)
}

/// Membership mask of E(eps) over the window: 1 inside, 0 outside.
/// `kind`: ea | ebar.
pub fn membership_grid_impl(
    set_json: &str,
    kind: &str,
    eps: f64,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<u8>, String> {
    let set = parse_set(set_json)?;
    let e = match kind {
        "ea" => Enlargement::biggest_unchecked(&set),
        "ebar" => Enlargement::smallest_closed_unchecked(&set),
        other => return Err(format!("unknown enlargement kind `{other}`")),
    };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let xs = lo + (hi - lo) * j as f64 / (n - 1) as f64;
            let member = e
                .membership(eps.max(0.0), &[x, xs])
                .map_err(|e| e.to_string())?;
            out.push(u8::from(member));
        }
    }
    Ok(out)
}

/// f and f* of a 1-D max-affine function on [lo, hi]: 2n values, f first.
pub fn conjugate_curve_impl(
    pieces_json: &str,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let f = parse_pieces(pieces_json)?;
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        out.push(f.eval(&[x]));
    }
    for i in 0..n {
        let y = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        out.push(f.conjugate(&[y]).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn field_grid(
    set_json: &str,
    which: &str,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    field_grid_impl(set_json, which, lo, hi, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn membership_grid(
    set_json: &str,
    kind: &str,
    eps: f64,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<u8>, JsValue> {
    membership_grid_impl(set_json, kind, eps, lo, hi, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn conjugate_curve(pieces_json: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    conjugate_curve_impl(pieces_json, lo, hi, n).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ID1: &str = r#"{"affine": {"M": [[1.0]], "p": [0.0]}}"#;
    const ABS: &str = r#"{"subdiff": {"pieces": [{"g": [1.0], "c": 0.0},
                                                  {"g": [-1.0], "c": 0.0}]}}"#;

    #[test]
    fn field_grid_values() {
        // phi of the identity graph at the window corners: (x + x*)^2 / 4
        let v = field_grid_impl(ID1, "phi", -1.0, 1.0, 3).unwrap();
        assert_eq!(v.len(), 9);
        assert!((v[0] - 1.0).abs() < 1e-12); // (-1, -1)
        assert!((v[4] - 0.0).abs() < 1e-12); // (0, 0)
        assert!((v[8] - 1.0).abs() < 1e-12); // (1, 1)
                                             // lambda of Ebar is +inf off the graph
        let v = field_grid_impl(ID1, "lambda_ebar", -1.0, 1.0, 3).unwrap();
        assert!(v[1].is_infinite());
        assert!(v[0].abs() < 1e-12);
        assert!(field_grid_impl(ID1, "nope", -1.0, 1.0, 3).is_err());
    }

    #[test]
    fn membership_grid_values() {
        // E^A(1/4) of the identity graph contains (1, 0) on its boundary
        let m = membership_grid_impl(ID1, "ea", 0.25, 0.0, 1.0, 2).unwrap();
        assert_eq!(m, vec![1, 1, 1, 1]);
        let m = membership_grid_impl(ID1, "ea", 0.2, 0.0, 1.0, 2).unwrap();
        assert_eq!(m, vec![1, 0, 0, 1]);
        // subdiff sets work too
        let m = membership_grid_impl(ABS, "ebar", 0.0, -1.0, 1.0, 3).unwrap();
        assert_eq!(m.len(), 9);
    }

    #[test]
    fn conjugate_curve_values() {
        let pieces = r#"[{"g": [1.0], "c": 0.0}, {"g": [-1.0], "c": 0.0}]"#;
        let v = conjugate_curve_impl(pieces, -2.0, 2.0, 5).unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 2.0); // f(-2) = 2
        assert_eq!(v[2], 0.0); // f(0) = 0
        assert!(v[5].is_infinite()); // f*(-2) = +inf
        assert_eq!(v[7], 0.0); // f*(0) = 0
    }
}
