//! Scenario configuration, sweep execution, and figure presets.
//!
//! A scenario is one curve family: a probe, a list of total photon numbers,
//! one gain triple, a loss setting, and an engine selection. [`parse_config`]
//! reads the line-oriented `key = value` grammar; [`run_scenario`] produces
//! one output [`Row`] per photon number per engine; [`figure_preset`] bundles
//! the scenario lists behind the built-in figure names.

use thiserror::Error;

use crate::cfpoly::{self, CFPoly, DEFAULT_MAX_DEGREE};
use crate::estimation::{
    optimize_sigma, qcrb_lossless, qcrb_lossy_general, qfim_from_moments, EstimationError,
};
use crate::focksim::{self, FockProbe};
use crate::moments::MomentSet;

/// Largest accepted total photon number. Keeps the exact integer
/// combinatorics inside `u128` with headroom.
pub const MAX_N: u32 = 30;

/// Largest accepted per-mode squeeze parameter |r|. Guards the oracle
/// against runaway cutoff escalation.
pub const MAX_GAIN: f64 = 2.0;

/// A QFIM whose determinant falls below `sentinel × |f00·f11|` is reported
/// as an empty bound cell plus a sidecar diagnostic instead of a hard error.
pub const QFIM_DET_SENTINEL: f64 = 1e-14;

/// Input-state family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    /// N-particle W-type probe: all photons bunched in one arm, coherently
    /// symmetrized over the three arms.
    WState,
    /// Separable benchmark: all N photons in arm 0 as a plain Fock state.
    SeparableFock,
}

impl Probe {
    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            Probe::WState => "w_state",
            Probe::SeparableFock => "separable_fock",
        }
    }
}

/// Which moment engine evaluates a scenario point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    CfPoly,
    FockSim,
    /// Run both engines and report their maximum relative moment deviation.
    Both,
}

impl Engine {
    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::CfPoly => "cfpoly",
            Engine::FockSim => "focksim",
            Engine::Both => "both",
        }
    }
}

/// How the variational loss parameter σ is chosen when η < 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SigmaMode {
    Fixed(f64),
    Optimize,
}

/// One validated curve family.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    /// Label written to the CSV `scenario` column and used as the primary
    /// sort key. Defaults to `"scenario"`; the CLI replaces it with the
    /// config file stem, presets set their own.
    pub tag: String,
    pub probe: Probe,
    pub n_range: Vec<u32>,
    /// Squeeze parameters (r_a, r_b, r_c) for arms 0, 1, 2.
    pub gains: [f64; 3],
    /// Transmission of the two signal arms; 1 means lossless.
    pub eta: f64,
    pub sigma_mode: SigmaMode,
    pub engine: Engine,
    /// Relative tolerance for the Fock engine's cutoff-convergence check.
    pub rel_tol: f64,
}

/// Configuration text rejected; messages carry 1-based line numbers.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },
}

const CONFIG_KEYS: [&str; 7] = [
    "probe",
    "N_range",
    "gains",
    "eta",
    "sigma_mode",
    "engine",
    "rel_tol",
];

fn bad(line: usize, key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        line,
        key: key.to_owned(),
        reason: reason.into(),
    }
}

fn parse_f64(line: usize, key: &str, text: &str) -> Result<f64, ConfigError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| bad(line, key, format!("`{}` is not a number", text.trim())))?;
    if !v.is_finite() {
        return Err(bad(line, key, format!("`{}` is not finite", text.trim())));
    }
    Ok(v)
}

/// Parse the line-oriented `key = value` scenario grammar.
///
/// Keys are case-sensitive and match the [`ScenarioConfig`] field names
/// (`probe`, `N_range`, `gains`, `eta`, `sigma_mode`, `engine`, `rel_tol`);
/// all seven are required, each at most once. Lists are comma-separated.
/// `#` starts a comment line; blank lines are ignored. Unknown keys are a
/// hard error. The returned config carries the default tag `"scenario"`.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut probe = None;
    let mut n_range = None;
    let mut gains = None;
    let mut eta = None;
    let mut sigma_mode = None;
    let mut engine = None;
    let mut rel_tol = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError::Malformed { line });
        };
        let key = key.trim();
        let value = value.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_owned(),
            });
        }

        let duplicate = match key {
            "probe" => probe.is_some(),
            "N_range" => n_range.is_some(),
            "gains" => gains.is_some(),
            "eta" => eta.is_some(),
            "sigma_mode" => sigma_mode.is_some(),
            "engine" => engine.is_some(),
            "rel_tol" => rel_tol.is_some(),
            _ => unreachable!(),
        };
        if duplicate {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_owned(),
            });
        }

        match key {
            "probe" => {
                probe = Some(match value {
                    "w_state" => Probe::WState,
                    "separable_fock" => Probe::SeparableFock,
                    other => {
                        return Err(bad(
                            line,
                            key,
                            format!("`{other}` (expected w_state or separable_fock)"),
                        ))
                    }
                });
            }
            "N_range" => {
                let mut ns = Vec::new();
                for part in value.split(',') {
                    let n: u32 = part.trim().parse().map_err(|_| {
                        bad(line, key, format!("`{}` is not a positive integer", part.trim()))
                    })?;
                    if n == 0 || n > MAX_N {
                        return Err(bad(line, key, format!("N={n} outside 1..={MAX_N}")));
                    }
                    ns.push(n);
                }
                if ns.is_empty() {
                    return Err(bad(line, key, "empty list"));
                }
                n_range = Some(ns);
            }
            "gains" => {
                let parts: Vec<&str> = value.split(',').collect();
                if parts.len() != 3 {
                    return Err(bad(
                        line,
                        key,
                        format!("expected 3 comma-separated values, got {}", parts.len()),
                    ));
                }
                let mut g = [0.0; 3];
                for (slot, part) in g.iter_mut().zip(&parts) {
                    let r = parse_f64(line, key, part)?;
                    if r.abs() > MAX_GAIN {
                        return Err(bad(line, key, format!("|{r}| exceeds the bound {MAX_GAIN}")));
                    }
                    *slot = r;
                }
                gains = Some(g);
            }
            "eta" => {
                let e = parse_f64(line, key, value)?;
                if !(e > 0.0 && e <= 1.0) {
                    return Err(bad(line, key, format!("{e} outside (0, 1]")));
                }
                eta = Some(e);
            }
            "sigma_mode" => {
                sigma_mode = Some(if value == "optimize" {
                    SigmaMode::Optimize
                } else if let Some(rest) = value.strip_prefix("fixed") {
                    if rest.trim().is_empty() {
                        return Err(bad(line, key, "`fixed` needs a value, e.g. `fixed 0`"));
                    }
                    SigmaMode::Fixed(parse_f64(line, key, rest)?)
                } else {
                    return Err(bad(
                        line,
                        key,
                        format!("`{value}` (expected `optimize` or `fixed <value>`)"),
                    ));
                });
            }
            "engine" => {
                engine = Some(match value {
                    "cfpoly" => Engine::CfPoly,
                    "focksim" => Engine::FockSim,
                    "both" => Engine::Both,
                    other => {
                        return Err(bad(
                            line,
                            key,
                            format!("`{other}` (expected cfpoly, focksim, or both)"),
                        ))
                    }
                });
            }
            "rel_tol" => {
                let t = parse_f64(line, key, value)?;
                if t <= 0.0 {
                    return Err(bad(line, key, format!("{t} must be > 0")));
                }
                rel_tol = Some(t);
            }
            _ => unreachable!(),
        }
    }

    Ok(ScenarioConfig {
        tag: "scenario".to_owned(),
        probe: probe.ok_or(ConfigError::MissingKey { key: "probe" })?,
        n_range: n_range.ok_or(ConfigError::MissingKey { key: "N_range" })?,
        gains: gains.ok_or(ConfigError::MissingKey { key: "gains" })?,
        eta: eta.ok_or(ConfigError::MissingKey { key: "eta" })?,
        sigma_mode: sigma_mode.ok_or(ConfigError::MissingKey { key: "sigma_mode" })?,
        engine: engine.ok_or(ConfigError::MissingKey { key: "engine" })?,
        rel_tol: rel_tol.ok_or(ConfigError::MissingKey { key: "rel_tol" })?,
    })
}

/// One CSV record: a scenario point evaluated by one engine.
#[derive(Clone, Debug)]
pub struct Row {
    pub scenario: String,
    /// Engine that produced this row's moments (never [`Engine::Both`]:
    /// a `both` scenario yields one row per engine).
    pub engine: Engine,
    pub probe: Probe,
    pub n: u32,
    pub gains: [f64; 3],
    pub eta: f64,
    /// σ entering the lossy bound; empty when η = 1 (not applicable).
    pub sigma: Option<f64>,
    /// Two-phase bound; empty when the sentinel tripped (see `diagnostic`).
    pub qcrb: Option<f64>,
    pub mean_n0: f64,
    pub var_n0: f64,
    pub var_n1: f64,
    pub cov01: f64,
    pub g2_intra_0: Option<f64>,
    pub g2_inter_01: Option<f64>,
    /// Max relative moment deviation between engines; `both` scenarios only.
    pub discrepancy: Option<f64>,
    /// Sentinel explanation destined for the sidecar log, not the CSV.
    pub diagnostic: Option<String>,
}

/// A scenario point failed inside an engine or the bound evaluation;
/// the coordinates identify the offending sweep point.
#[derive(Debug, Error)]
#[error(
    "scenario `{tag}` (probe {probe}, N={n}, gains=({r_a}, {r_b}, {r_c})): {message}",
    probe = .probe.as_str()
)]
pub struct ScenarioError {
    pub tag: String,
    pub probe: Probe,
    pub n: u32,
    pub r_a: f64,
    pub r_b: f64,
    pub r_c: f64,
    pub message: String,
}

impl ScenarioError {
    fn at(cfg: &ScenarioConfig, n: u32, message: impl Into<String>) -> Self {
        ScenarioError {
            tag: cfg.tag.clone(),
            probe: cfg.probe,
            n,
            r_a: cfg.gains[0],
            r_b: cfg.gains[1],
            r_c: cfg.gains[2],
            message: message.into(),
        }
    }
}

fn cf_probe(probe: Probe, n: u32) -> CFPoly {
    match probe {
        Probe::WState => cfpoly::make_w_state_cf(n, DEFAULT_MAX_DEGREE),
        Probe::SeparableFock => cfpoly::make_fock_product_cf(n, 0, 0, DEFAULT_MAX_DEGREE),
    }
}

fn fock_probe(probe: Probe, n: u32) -> FockProbe {
    match probe {
        Probe::WState => FockProbe::WState { n },
        Probe::SeparableFock => FockProbe::Fock { n: [n, 0, 0] },
    }
}

/// Moments of one scenario point on the polynomial engine.
pub fn moments_cfpoly(cfg: &ScenarioConfig, n: u32) -> Result<MomentSet, ScenarioError> {
    let out = cfpoly::run_pipeline(&cf_probe(cfg.probe, n), cfg.gains, [0.0, 0.0]);
    MomentSet::from_cf(&out).map_err(|e| ScenarioError::at(cfg, n, e.to_string()))
}

/// Moments of one scenario point on the Fock engine (converged cutoff).
pub fn moments_focksim(cfg: &ScenarioConfig, n: u32) -> Result<MomentSet, ScenarioError> {
    focksim::converged_moments(&fock_probe(cfg.probe, n), cfg.gains, [0.0, 0.0], cfg.rel_tol)
        .map(|(ms, _cutoff)| ms)
        .map_err(|e| ScenarioError::at(cfg, n, e.to_string()))
}

/// Bound evaluation outcome: the σ actually used, the bound cell, and an
/// optional sentinel diagnostic (empty bound cell).
fn evaluate_bound(
    cfg: &ScenarioConfig,
    n: u32,
    ms: &MomentSet,
) -> Result<(Option<f64>, Option<f64>, Option<String>), ScenarioError> {
    if cfg.eta == 1.0 {
        let q = qfim_from_moments(ms);
        let guard = QFIM_DET_SENTINEL * (q.f[0][0] * q.f[1][1]).abs();
        if q.det() < guard {
            let diag = format!(
                "QFIM sentinel: det={:e} below {:e}; phases not jointly identifiable here",
                q.det(),
                guard
            );
            return Ok((None, None, Some(diag)));
        }
        let b = qcrb_lossless(&q).map_err(|e| ScenarioError::at(cfg, n, e.to_string()))?;
        return Ok((None, Some(b), None));
    }
    match cfg.sigma_mode {
        SigmaMode::Fixed(s) => match qcrb_lossy_general(ms, cfg.eta, s) {
            Ok(b) => Ok((Some(s), Some(b), None)),
            Err(e @ (EstimationError::Singular | EstimationError::DegenerateKraus { .. })) => {
                Ok((Some(s), None, Some(format!("bound sentinel at sigma={s}: {e}"))))
            }
            Err(e) => Err(ScenarioError::at(cfg, n, e.to_string())),
        },
        SigmaMode::Optimize => match optimize_sigma(ms, cfg.eta) {
            Ok((s, b)) => Ok((Some(s), Some(b), None)),
            Err(e @ EstimationError::NoValidSigma) => {
                Ok((None, None, Some(format!("bound sentinel: {e}"))))
            }
            Err(e) => Err(ScenarioError::at(cfg, n, e.to_string())),
        },
    }
}

fn row_from_moments(
    cfg: &ScenarioConfig,
    n: u32,
    engine: Engine,
    ms: &MomentSet,
    discrepancy: Option<f64>,
) -> Result<Row, ScenarioError> {
    let (sigma, qcrb, diagnostic) = evaluate_bound(cfg, n, ms)?;
    Ok(Row {
        scenario: cfg.tag.clone(),
        engine,
        probe: cfg.probe,
        n,
        gains: cfg.gains,
        eta: cfg.eta,
        sigma,
        qcrb,
        mean_n0: ms.mean[0],
        var_n0: ms.variance(0),
        var_n1: ms.variance(1),
        cov01: ms.covariance(0, 1),
        g2_intra_0: ms.g2_intra(0).ok(),
        g2_inter_01: ms.g2_inter(0, 1).ok(),
        discrepancy,
        diagnostic,
    })
}

/// Evaluate one sweep point: one row per engine (two under [`Engine::Both`]).
pub fn compute_rows(cfg: &ScenarioConfig, n: u32) -> Result<Vec<Row>, ScenarioError> {
    match cfg.engine {
        Engine::CfPoly => {
            let ms = moments_cfpoly(cfg, n)?;
            Ok(vec![row_from_moments(cfg, n, Engine::CfPoly, &ms, None)?])
        }
        Engine::FockSim => {
            let ms = moments_focksim(cfg, n)?;
            Ok(vec![row_from_moments(cfg, n, Engine::FockSim, &ms, None)?])
        }
        Engine::Both => {
            let cf = moments_cfpoly(cfg, n)?;
            let fk = moments_focksim(cfg, n)?;
            let disc = Some(cf.max_rel_discrepancy(&fk));
            Ok(vec![
                row_from_moments(cfg, n, Engine::CfPoly, &cf, disc)?,
                row_from_moments(cfg, n, Engine::FockSim, &fk, disc)?,
            ])
        }
    }
}

/// Deterministic output order: (scenario tag, engine label, N, r_a).
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        a.scenario
            .cmp(&b.scenario)
            .then_with(|| a.engine.as_str().cmp(b.engine.as_str()))
            .then_with(|| a.n.cmp(&b.n))
            .then_with(|| a.gains[0].total_cmp(&b.gains[0]))
    });
}

/// Run one scenario sequentially and return its sorted rows.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    run_scenarios(std::slice::from_ref(cfg))
}

/// Run several scenarios sequentially and return the merged, sorted rows.
/// (The CLI parallelizes over [`scenario_points`] instead and sorts the
/// gathered rows itself; the ordering contract makes both paths emit
/// byte-identical output.)
pub fn run_scenarios(cfgs: &[ScenarioConfig]) -> Result<Vec<Row>, ScenarioError> {
    let mut rows = Vec::new();
    for (cfg_idx, n) in scenario_points(cfgs) {
        rows.extend(compute_rows(&cfgs[cfg_idx], n)?);
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Independent work units of a scenario list: (config index, N).
#[must_use]
pub fn scenario_points(cfgs: &[ScenarioConfig]) -> Vec<(usize, u32)> {
    let mut points = Vec::new();
    for (i, cfg) in cfgs.iter().enumerate() {
        for &n in &cfg.n_range {
            points.push((i, n));
        }
    }
    points
}

/// Plot abscissa of a preset family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetAxis {
    /// Photon number on the x axis.
    N,
    /// Arm-0 squeeze parameter on the x axis (gain sweeps).
    GainA,
}

/// Plot ordinate of a preset family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetOrdinate {
    Qcrb,
    G2Intra0,
    G2Inter01,
}

impl PresetOrdinate {
    /// CSV column carrying this ordinate.
    #[must_use]
    pub fn column(self) -> &'static str {
        match self {
            PresetOrdinate::Qcrb => "qcrb",
            PresetOrdinate::G2Intra0 => "g2_intra_0",
            PresetOrdinate::G2Inter01 => "g2_inter_01",
        }
    }
}

/// A named figure family: scenario list plus plotting axes.
#[derive(Clone, Debug)]
pub struct FigurePreset {
    pub name: &'static str,
    pub configs: Vec<ScenarioConfig>,
    pub axis: PresetAxis,
    pub ordinate: PresetOrdinate,
}

/// Valid preset names, in canonical order.
pub const PRESET_NAMES: [&str; 8] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b",
];

/// The requested figure preset does not exist.
#[derive(Debug, Error, PartialEq)]
#[error("unknown figure preset `{name}`; valid presets: fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b")]
pub struct PresetError {
    pub name: String,
}

fn base_config(tag: String) -> ScenarioConfig {
    ScenarioConfig {
        tag,
        probe: Probe::WState,
        n_range: (1..=20).collect(),
        gains: [0.0; 3],
        eta: 1.0,
        sigma_mode: SigmaMode::Fixed(0.0),
        engine: Engine::CfPoly,
        rel_tol: 1e-8,
    }
}

/// The 21-point uniform gain sweep r = 0.00, 0.05, …, 1.00.
fn gain_sweep() -> impl Iterator<Item = f64> {
    (0..=20).map(|i| f64::from(i) / 20.0)
}

/// Build the scenario list behind a figure name.
///
/// The sweep extents (N up to 20, gain steps of 0.05, the fixed N = 10 of
/// the gain sweeps) are desk-scale choices recorded in the scenario tags;
/// they are not externally mandated values.
pub fn figure_preset(name: &str) -> Result<FigurePreset, PresetError> {
    let mut axis = PresetAxis::N;
    let mut ordinate = PresetOrdinate::Qcrb;
    let configs: Vec<ScenarioConfig> = match name {
        // QCRB vs N for uniform amplification r = 0, 0.25, 0.5.
        "fig2a" => [0.0, 0.25, 0.5]
            .into_iter()
            .map(|r| ScenarioConfig {
                gains: [r; 3],
                ..base_config(format!("fig2a_r{r:.2}"))
            })
            .collect(),
        // QCRB vs N for mode-selective amplification.
        "fig2b" => [
            ("fig2b_baseline", [0.0, 0.0, 0.0]),
            ("fig2b_signal", [0.5, 0.0, 0.0]),
            ("fig2b_reference", [0.0, 0.0, 0.5]),
        ]
        .into_iter()
        .map(|(tag, gains)| ScenarioConfig {
            gains,
            ..base_config(tag.to_owned())
        })
        .collect(),
        // Same-arm and cross-arm correlations vs N, uniform amplification.
        "fig3a" | "fig3b" => {
            ordinate = if name == "fig3a" {
                PresetOrdinate::G2Intra0
            } else {
                PresetOrdinate::G2Inter01
            };
            [0.0, 0.25, 0.5]
                .into_iter()
                .map(|r| ScenarioConfig {
                    gains: [r; 3],
                    n_range: (1..=10).collect(),
                    ..base_config(format!("{name}_r{r:.2}"))
                })
                .collect()
        }
        // W vs separable Fock probe, QCRB vs N at r = 0 and 0.5.
        "fig4a" => [Probe::WState, Probe::SeparableFock]
            .into_iter()
            .flat_map(|probe| {
                [0.0, 0.5].into_iter().map(move |r| (probe, r))
            })
            .map(|(probe, r)| {
                let label = match probe {
                    Probe::WState => "w",
                    Probe::SeparableFock => "fock",
                };
                ScenarioConfig {
                    probe,
                    gains: [r; 3],
                    ..base_config(format!("fig4a_{label}_r{r:.2}"))
                }
            })
            .collect(),
        // W vs separable Fock probe, QCRB vs uniform r at N = 10.
        "fig4b" => {
            axis = PresetAxis::GainA;
            [Probe::WState, Probe::SeparableFock]
                .into_iter()
                .flat_map(|probe| gain_sweep().map(move |r| (probe, r)))
                .map(|(probe, r)| {
                    let label = match probe {
                        Probe::WState => "w",
                        Probe::SeparableFock => "fock",
                    };
                    ScenarioConfig {
                        probe,
                        gains: [r; 3],
                        n_range: vec![10],
                        ..base_config(format!("fig4b_{label}"))
                    }
                })
                .collect()
        }
        // Lossy bound (σ optimized) vs N at r = 0, 0.5 and η = 1, 0.7.
        "fig5a" => [1.0, 0.7]
            .into_iter()
            .flat_map(|eta| [0.0, 0.5].into_iter().map(move |r| (eta, r)))
            .map(|(eta, r)| ScenarioConfig {
                eta,
                sigma_mode: SigmaMode::Optimize,
                gains: [r; 3],
                ..base_config(format!("fig5a_eta{eta:.2}_r{r:.2}"))
            })
            .collect(),
        // Lossy bound (σ optimized) vs uniform r at N = 10, η = 1 and 0.6.
        "fig5b" => {
            axis = PresetAxis::GainA;
            [1.0, 0.6]
                .into_iter()
                .flat_map(|eta| gain_sweep().map(move |r| (eta, r)))
                .map(|(eta, r)| ScenarioConfig {
                    eta,
                    sigma_mode: SigmaMode::Optimize,
                    gains: [r; 3],
                    n_range: vec![10],
                    ..base_config(format!("fig5b_eta{eta:.2}"))
                })
                .collect()
        }
        _ => {
            return Err(PresetError {
                name: name.to_owned(),
            })
        }
    };
    Ok(FigurePreset {
        name: PRESET_NAMES
            .iter()
            .copied()
            .find(|&p| p == name)
            .expect("name matched above"),
        configs,
        axis,
        ordinate,
    })
}
