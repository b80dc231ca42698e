//! Browser bindings for the triphase toolkit.
//!
//! Three sweep operations are exported through `wasm-bindgen`, each
//! returning a JSON string so the static demo page can stay framework-free.
//! Every result object is either `{"error": "..."}` or carries the plotted
//! arrays; all numerics run on the polynomial engine, which is exact and
//! fast enough for interactive use.

use wasm_bindgen::prelude::wasm_bindgen;

use serde_json::json;
use triphase::cfpoly::{self, DEFAULT_MAX_DEGREE};
use triphase::estimation::{optimize_sigma, qcrb_lossless, qfim_from_moments};
use triphase::moments::MomentSet;
use triphase::scenario::{MAX_GAIN, MAX_N};

fn moments(w_state: bool, n: u32, r: f64) -> MomentSet {
    let probe = if w_state {
        cfpoly::make_w_state_cf(n, DEFAULT_MAX_DEGREE)
    } else {
        cfpoly::make_fock_product_cf(n, 0, 0, DEFAULT_MAX_DEGREE)
    };
    let out = cfpoly::run_pipeline(&probe, [r; 3], [0.0, 0.0]);
    MomentSet::from_cf(&out).expect("degree budget covers second-order moments")
}

/// Two-phase bound; σ-optimized lossy bound when η < 1.
fn bound(w_state: bool, n: u32, r: f64, eta: f64) -> Result<f64, String> {
    let ms = moments(w_state, n, r);
    if eta == 1.0 {
        qcrb_lossless(&qfim_from_moments(&ms)).map_err(|e| e.to_string())
    } else {
        optimize_sigma(&ms, eta)
            .map(|(_, b)| b)
            .map_err(|e| e.to_string())
    }
}

fn check_inputs(n: u32, r: f64, eta: f64) -> Result<(), String> {
    if n == 0 || n > MAX_N {
        return Err(format!("N must be in 1..={MAX_N}"));
    }
    if !r.is_finite() || r.abs() > MAX_GAIN {
        return Err(format!("gain r must satisfy |r| <= {MAX_GAIN}"));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err("transmission eta must be in (0, 1]".to_owned());
    }
    Ok(())
}

fn error_json(msg: &str) -> String {
    json!({ "error": msg }).to_string()
}

/// Bound vs photon number for the symmetric probe at uniform gain `r` and
/// transmission `eta` (σ-optimized when `eta < 1`).
///
/// Returns `{"x": [N...], "y": [bound...]}` or `{"error": "..."}`.
#[wasm_bindgen]
pub fn qcrb_vs_n(n_max: u32, r: f64, eta: f64) -> String {
    if let Err(e) = check_inputs(n_max, r, eta) {
        return error_json(&e);
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for n in 1..=n_max {
        match bound(true, n, r, eta) {
            Ok(b) => {
                x.push(n);
                y.push(b);
            }
            Err(e) => return error_json(&format!("N={n}: {e}")),
        }
    }
    json!({ "x": x, "y": y }).to_string()
}

/// Bound vs uniform gain at fixed `n`, for the entangled probe and the
/// separable benchmark side by side (lossless).
///
/// Returns `{"r": [...], "w": [...], "fock": [...]}` or `{"error": "..."}`.
#[wasm_bindgen]
pub fn qcrb_vs_gain(n: u32, r_max: f64, points: u32) -> String {
    if let Err(e) = check_inputs(n, r_max, 1.0) {
        return error_json(&e);
    }
    if !(2..=201).contains(&points) {
        return error_json("points must be in 2..=201");
    }
    let mut rs = Vec::new();
    let mut w = Vec::new();
    let mut fock = Vec::new();
    for i in 0..points {
        let r = r_max * f64::from(i) / f64::from(points - 1);
        match (bound(true, n, r, 1.0), bound(false, n, r, 1.0)) {
            (Ok(bw), Ok(bf)) => {
                rs.push(r);
                w.push(bw);
                fock.push(bf);
            }
            (a, b) => return error_json(&format!("r={r}: {a:?} / {b:?}")),
        }
    }
    json!({ "r": rs, "w": w, "fock": fock }).to_string()
}

/// Same-arm and cross-arm second-order correlations vs photon number for
/// the symmetric probe at uniform gain `r`.
///
/// Returns `{"x": [...], "intra": [...], "inter": [...]}`, with `null` for
/// undefined entries, or `{"error": "..."}`.
#[wasm_bindgen]
pub fn g2_vs_n(n_max: u32, r: f64) -> String {
    if let Err(e) = check_inputs(n_max, r, 1.0) {
        return error_json(&e);
    }
    let mut x = Vec::new();
    let mut intra = Vec::new();
    let mut inter = Vec::new();
    for n in 1..=n_max {
        let ms = moments(true, n, r);
        x.push(n);
        intra.push(ms.g2_intra(0).ok());
        inter.push(ms.g2_inter(0, 1).ok());
    }
    json!({ "x": x, "intra": intra, "inter": inter }).to_string()
}
