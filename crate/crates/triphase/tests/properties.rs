//! Randomized property checks for the public API: physicality of pipeline
//! outputs over the continuous parameter space, algebraic consistency of map
//! composition, and round-trip guarantees for the text formats.

use std::f64::consts::PI;

use proptest::prelude::*;

use triphase::cfpoly::{
    make_fock_product_cf, make_w_state_cf, pipeline_map, run_pipeline, CFPoly, LinearMap,
    DEFAULT_MAX_DEGREE,
};
use triphase::moments::MomentSet;
use triphase::report::format_sig12;
use triphase::scenario::{parse_config, Engine, Probe, SigmaMode};

fn probe_strategy() -> impl Strategy<Value = (bool, u32)> {
    (any::<bool>(), 1u32..=4)
}

fn gains_strategy() -> impl Strategy<Value = [f64; 3]> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
}

fn phases_strategy() -> impl Strategy<Value = [f64; 2]> {
    [-PI..PI, -PI..PI]
}

fn build_probe(w_state: bool, n: u32) -> CFPoly {
    if w_state {
        make_w_state_cf(n, DEFAULT_MAX_DEGREE)
    } else {
        make_fock_product_cf(n, 0, 0, DEFAULT_MAX_DEGREE)
    }
}

/// Assert two polynomials agree coefficient-by-coefficient.
fn assert_poly_close(a: &CFPoly, b: &CFPoly, tol: f64) {
    for (e, &c) in a.terms() {
        let d = (b.coefficient(e) - c).norm();
        assert!(d <= tol * c.norm().max(1.0), "coefficient {e:?} differs by {d}");
    }
    for (e, &c) in b.terms() {
        let d = (a.coefficient(e) - c).norm();
        assert!(d <= tol * c.norm().max(1.0), "coefficient {e:?} differs by {d}");
    }
}

proptest! {
    /// Every pipeline output over the admissible parameter range must stay a
    /// valid characteristic function: normalized, Hermitian, with
    /// non-negative variances and Cauchy–Schwarz-consistent cross moments.
    #[test]
    fn pipeline_output_stays_physical(
        (w_state, n) in probe_strategy(),
        gains in gains_strategy(),
        phases in phases_strategy(),
    ) {
        let out = run_pipeline(&build_probe(w_state, n), gains, phases);
        let c0 = out.coefficient(&[0; 6]);
        prop_assert!((c0.re - 1.0).abs() < 1e-9 && c0.im.abs() < 1e-9);
        prop_assert!(out.is_hermitian(1e-9));

        let ms = MomentSet::from_cf(&out).unwrap();
        for j in 0..3 {
            let var = ms.second[j] - ms.mean[j] * ms.mean[j];
            prop_assert!(var >= -1e-9, "negative variance {var} on arm {j}");
        }
        for (j, k) in [(0, 1), (1, 2), (0, 2)] {
            let bound = (ms.second[j] * ms.second[k]).sqrt();
            prop_assert!(
                ms.cross_moment(j, k) <= bound * (1.0 + 1e-9) + 1e-9,
                "cross moment ({j},{k}) violates Cauchy–Schwarz"
            );
        }
    }

    /// Applying a composed substitution equals applying the two factors in
    /// sequence, inner first.
    #[test]
    fn composition_matches_sequential_application(
        g1 in gains_strategy(),
        p1 in phases_strategy(),
        g2 in gains_strategy(),
        p2 in phases_strategy(),
    ) {
        let probe = make_w_state_cf(3, DEFAULT_MAX_DEGREE).to_weyl();
        let inner = pipeline_map(g1, p1);
        let outer = pipeline_map(g2, p2);
        let fused = probe.apply_linear_map(&LinearMap::compose(&outer, &inner));
        let stepwise = probe.apply_linear_map(&inner).apply_linear_map(&outer);
        assert_poly_close(&fused, &stepwise, 1e-9);
    }

    /// Pipeline maps stay conjugation-consistent (the substitution respects
    /// χ(−λ*) = χ*(λ)) everywhere in the parameter range.
    #[test]
    fn pipeline_maps_respect_conjugation(
        gains in gains_strategy(),
        phases in phases_strategy(),
    ) {
        prop_assert!(pipeline_map(gains, phases).is_conjugation_consistent(1e-12));
    }

    /// The CSV number format keeps 12 significant digits: parsing the cell
    /// back recovers the value to ~1e-11 relative, and re-formatting the
    /// parsed value reproduces the cell byte-for-byte.
    #[test]
    fn twelve_digit_format_round_trips(
        mantissa in 1.0..10.0f64,
        exponent in -20i32..=20,
        negative in any::<bool>(),
    ) {
        let v = if negative { -mantissa } else { mantissa } * 10f64.powi(exponent);
        let cell = format_sig12(v);
        let parsed: f64 = cell.parse().unwrap();
        prop_assert!(((parsed - v) / v).abs() < 1e-11, "{v} -> {cell} -> {parsed}");
        prop_assert_eq!(format_sig12(parsed), cell);
    }

    /// Any valid scenario rendered into the `key = value` grammar parses
    /// back to the same configuration.
    #[test]
    fn config_grammar_round_trips(
        w_state in any::<bool>(),
        ns in prop::collection::vec(1u32..=30, 1..6),
        gains in [-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64],
        eta in prop_oneof![Just(1.0), 0.1..1.0f64],
        sigma in prop_oneof![Just(None), (-5.0..5.0f64).prop_map(Some)],
        engine_idx in 0usize..3,
        rel_tol in 1e-12..1e-2f64,
    ) {
        let probe = if w_state { Probe::WState } else { Probe::SeparableFock };
        let engine = [Engine::CfPoly, Engine::FockSim, Engine::Both][engine_idx];
        let sigma_mode = match sigma {
            Some(s) => SigmaMode::Fixed(s),
            None => SigmaMode::Optimize,
        };
        let sigma_text = match sigma_mode {
            SigmaMode::Fixed(s) => format!("fixed {s}"),
            SigmaMode::Optimize => "optimize".to_owned(),
        };
        let n_text: Vec<String> = ns.iter().map(u32::to_string).collect();
        let text = format!(
            "# generated by the round-trip property\n\
             probe = {}\nN_range = {}\ngains = {}, {}, {}\neta = {eta}\n\
             sigma_mode = {sigma_text}\nengine = {}\nrel_tol = {rel_tol}\n",
            probe.as_str(),
            n_text.join(", "),
            gains[0], gains[1], gains[2],
            engine.as_str(),
        );

        let cfg = parse_config(&text).unwrap();
        prop_assert_eq!(cfg.tag, "scenario");
        prop_assert_eq!(cfg.probe, probe);
        prop_assert_eq!(cfg.n_range, ns);
        prop_assert_eq!(cfg.gains, gains);
        prop_assert_eq!(cfg.eta, eta);
        prop_assert_eq!(cfg.sigma_mode, sigma_mode);
        prop_assert_eq!(cfg.engine, engine);
        prop_assert_eq!(cfg.rel_tol, rel_tol);
    }
}

/// Non-random spot check tying the formats module to the polynomial engine:
/// the single-photon fixture survives a format round-trip untouched.
#[test]
fn fixture_values_survive_formatting() {
    let out = run_pipeline(&make_w_state_cf(1, DEFAULT_MAX_DEGREE), [0.0; 3], [0.0; 2]);
    let ms = MomentSet::from_cf(&out).unwrap();
    let cov = ms.cross_moment(0, 1) - ms.mean[0] * ms.mean[1];
    assert_eq!(format_sig12(cov), format_sig12(-1.0 / 9.0));
    assert_eq!(format_sig12(0.0), "0");
}
