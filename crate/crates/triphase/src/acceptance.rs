//! Executable acceptance suite.
//!
//! Ten criteria cover cross-engine agreement, exact fixtures, lossy-bound
//! reduction identities, figure-level monotonicity properties, and
//! structural invariants. [`run_all`] executes them in order; the CLI
//! `selftest` subcommand and the `acceptance` integration test both print
//! one pass/fail line per criterion from here.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cfpoly::{self, CFPoly, DEFAULT_MAX_DEGREE};
use crate::estimation::{
    kraus_mu, lossy_c_matrix, optimize_sigma, qcrb_lossless, qcrb_lossy_symmetric,
    qfim_from_moments, trace_inverse_2x2, xi, LossModel,
};
use crate::focksim::{self, FockProbe, FockState3};
use crate::moments::MomentSet;
use crate::scenario::Probe;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionReport {
    /// The one-line pass/fail summary printed by `selftest` and the
    /// integration suite.
    #[must_use]
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Number of acceptance criteria.
pub const CRITERION_COUNT: u32 = 10;

/// Run every criterion, in order.
#[must_use]
pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERION_COUNT).map(run_criterion).collect()
}

/// Run a single criterion by 1-based id.
///
/// # Panics
/// If `id` is not in `1..=CRITERION_COUNT`.
#[must_use]
pub fn run_criterion(id: u32) -> CriterionReport {
    match id {
        1 => cross_engine_agreement(),
        2 => single_photon_fixture(),
        3 => squeezed_vacuum_occupation(),
        4 => reduction_identities(),
        5 => uniform_gain_monotonicity(),
        6 => arm_selective_gain(),
        7 => correlation_growth(),
        8 => probe_comparison(),
        9 => loss_robustness(),
        10 => structural_invariants(),
        _ => panic!("criterion id {id} out of range 1..={CRITERION_COUNT}"),
    }
}

/// Gain triples of the acceptance grid.
const GRID_GAIN_TRIPLES: [[f64; 3]; 5] = [
    [0.0, 0.0, 0.0],
    [0.25, 0.25, 0.25],
    [0.5, 0.5, 0.5],
    [0.5, 0.0, 0.0],
    [0.0, 0.0, 0.5],
];

const GRID_PROBES: [Probe; 2] = [Probe::WState, Probe::SeparableFock];

fn probe_cf(probe: Probe, n: u32) -> CFPoly {
    match probe {
        Probe::WState => cfpoly::make_w_state_cf(n, DEFAULT_MAX_DEGREE),
        Probe::SeparableFock => cfpoly::make_fock_product_cf(n, 0, 0, DEFAULT_MAX_DEGREE),
    }
}

fn probe_fock(probe: Probe, n: u32) -> FockProbe {
    match probe {
        Probe::WState => FockProbe::WState { n },
        Probe::SeparableFock => FockProbe::Fock { n: [n, 0, 0] },
    }
}

/// Polynomial-engine moments of one grid point (phases at zero).
fn moments_cf(probe: Probe, n: u32, gains: [f64; 3]) -> MomentSet {
    let out = cfpoly::run_pipeline(&probe_cf(probe, n), gains, [0.0, 0.0]);
    MomentSet::from_cf(&out).expect("degree budget covers second-order moments")
}

/// Lossless bound of one grid point on the polynomial engine.
fn bound_cf(probe: Probe, n: u32, gains: [f64; 3]) -> f64 {
    qcrb_lossless(&qfim_from_moments(&moments_cf(probe, n, gains)))
        .expect("grid scenarios have a regular information matrix")
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn report(id: u32, name: &'static str, failures: Vec<String>, pass_detail: String) -> CriterionReport {
    if failures.is_empty() {
        CriterionReport {
            id,
            name,
            passed: true,
            detail: pass_detail,
        }
    } else {
        CriterionReport {
            id,
            name,
            passed: false,
            detail: format!("{} violation(s): {}", failures.len(), failures.join("; ")),
        }
    }
}

/// Criterion 1 — both engines agree on every grid scenario to 1e-6.
fn cross_engine_agreement() -> CriterionReport {
    const TOL: f64 = 1e-6;
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    let mut worst_at = String::new();
    let mut count = 0;
    for probe in GRID_PROBES {
        for n in 1..=5 {
            for gains in GRID_GAIN_TRIPLES {
                count += 1;
                let cf = moments_cf(probe, n, gains);
                match focksim::converged_moments(&probe_fock(probe, n), gains, [0.0, 0.0], 1e-8) {
                    Ok((fk, _cutoff)) => {
                        let d = cf.max_rel_discrepancy(&fk);
                        if d > worst {
                            worst = d;
                            worst_at = format!("{} N={n} gains={gains:?}", probe.as_str());
                        }
                        if d >= TOL {
                            failures.push(format!(
                                "{} N={n} gains={gains:?}: deviation {d:.3e} ≥ {TOL:.0e}",
                                probe.as_str()
                            ));
                        }
                    }
                    Err(e) => failures.push(format!(
                        "{} N={n} gains={gains:?}: oracle failed: {e}",
                        probe.as_str()
                    )),
                }
            }
        }
    }
    report(
        1,
        "cross-engine agreement on the acceptance grid",
        failures,
        format!("{count}/{count} scenarios agree; worst deviation {worst:.3e} at {worst_at}"),
    )
}

/// Criterion 2 — exact single-photon fixture on both engines.
fn single_photon_fixture() -> CriterionReport {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    let cf = moments_cf(Probe::WState, 1, [0.0; 3]);
    let fk = focksim::converged_moments(&FockProbe::WState { n: 1 }, [0.0; 3], [0.0, 0.0], 1e-8)
        .map(|(ms, _)| ms);
    let engines: Vec<(&str, MomentSet)> = match fk {
        Ok(fk) => vec![("cfpoly", cf), ("focksim", fk)],
        Err(e) => {
            failures.push(format!("focksim fixture run failed: {e}"));
            vec![("cfpoly", cf)]
        }
    };
    for (engine, ms) in engines {
        let var0 = ms.variance(0);
        let cov = ms.covariance(0, 1);
        if (var0 - 2.0 / 9.0).abs() > 1e-10 {
            failures.push(format!("{engine}: Var n0 = {var0} ≠ 2/9"));
        }
        if (cov + 1.0 / 9.0).abs() > 1e-10 {
            failures.push(format!("{engine}: Cov(n0,n1) = {cov} ≠ -1/9"));
        }
        match qcrb_lossless(&qfim_from_moments(&ms)) {
            Ok(b) => {
                if (b - 3.0).abs() > 1e-9 {
                    failures.push(format!("{engine}: bound {b} ≠ 3"));
                }
                summary.push(format!("{engine} bound {b:.12}"));
            }
            Err(e) => failures.push(format!("{engine}: bound failed: {e}")),
        }
    }
    report(
        2,
        "single-photon lossless fixture (Var 2/9, Cov -1/9, bound 3)",
        failures,
        summary.join(", "),
    )
}

/// Criterion 3 — squeezed vacuum reaches sinh²(r) mean occupation.
fn squeezed_vacuum_occupation() -> CriterionReport {
    const R: f64 = 0.5;
    let mut failures = Vec::new();
    let mut detail = String::new();
    let mut state = FockState3::vacuum(32);
    match state.apply_squeeze(0, R).and_then(|()| state.measure_moments()) {
        Ok(ms) => {
            let expect = R.sinh().powi(2);
            let got = ms.mean[0];
            detail = format!("mean occupation {got:.12} vs sinh²(1/2) = {expect:.12}");
            if (got - expect).abs() > 1e-8 {
                failures.push(format!("|{got} - {expect}| > 1e-8"));
            }
        }
        Err(e) => failures.push(format!("squeeze run failed: {e}")),
    }
    report(3, "squeezed-vacuum occupation", failures, detail)
}

fn symmetric_moment_set(mean: f64, var: f64, cov: f64) -> MomentSet {
    let second = var + mean * mean;
    MomentSet {
        mean: [mean; 3],
        second: [second; 3],
        cross: [cov + mean * mean; 3],
        intra4: [second - mean; 3],
    }
}

fn random_symmetric_moment_set(rng: &mut StdRng) -> MomentSet {
    let mean = rng.random_range(0.3..3.0);
    let var = rng.random_range(0.2..3.0);
    let cov = rng.random_range(-0.8..0.8) * var;
    symmetric_moment_set(mean, var, cov)
}

/// Criterion 4 — lossy-bound reduction identities.
fn reduction_identities() -> CriterionReport {
    let mut failures = Vec::new();

    // (a) At η = 1 the lossy closed form collapses to the lossless bound for
    // any σ, on 100 random symmetric moment sets.
    let mut rng = StdRng::seed_from_u64(0x4A11);
    for i in 0..100 {
        let ms = random_symmetric_moment_set(&mut rng);
        let sigma = rng.random_range(-2.0..2.0);
        let lossy = qcrb_lossy_symmetric(&ms, 1.0, sigma);
        let lossless = qcrb_lossless(&qfim_from_moments(&ms));
        match (lossy, lossless) {
            (Ok(a), Ok(b)) => {
                if rel_diff(a, b) > 1e-12 {
                    failures.push(format!(
                        "η=1 reduction, draw {i}: lossy {a} vs lossless {b} (rel {:.3e})",
                        rel_diff(a, b)
                    ));
                }
            }
            (a, b) => failures.push(format!("η=1 reduction, draw {i}: {a:?} vs {b:?}")),
        }
    }

    // (b) μ = Ξ on a 20×20 (η, σ) grid.
    for i in 1..=20 {
        let eta = f64::from(i) / 20.0;
        for j in 0..20 {
            let sigma = -2.0 + 4.0 * f64::from(j) / 19.0;
            let mu = kraus_mu(eta, sigma);
            let x = xi(eta, sigma);
            if (mu - x).abs() > 1e-12 {
                failures.push(format!("μ(η={eta},σ={sigma}) = {mu} but Ξ = {x}"));
            }
        }
    }

    // (c) Symmetric C-matrix trace-inverse equals the closed form.
    let mut rng = StdRng::seed_from_u64(0x4C11);
    for i in 0..100 {
        let ms = random_symmetric_moment_set(&mut rng);
        let eta = rng.random_range(0.05..0.95);
        let sigma = rng.random_range(-1.5..1.5);
        let model = LossModel { eta, sigma };
        let via_matrix = trace_inverse_2x2(&lossy_c_matrix(&ms, &[model, model]));
        let closed = qcrb_lossy_symmetric(&ms, eta, sigma);
        match (via_matrix, closed) {
            (Ok(a), Ok(b)) => {
                if rel_diff(a, b) > 1e-10 {
                    failures.push(format!(
                        "closed form, draw {i}: matrix {a} vs closed {b} (rel {:.3e})",
                        rel_diff(a, b)
                    ));
                }
            }
            (a, b) => failures.push(format!("closed form, draw {i}: {a:?} vs {b:?}")),
        }
    }

    report(
        4,
        "lossy-bound reduction identities",
        failures,
        "η=1 collapse (100 draws), μ=Ξ (20×20 grid), closed form vs C matrix (100 draws)".to_owned(),
    )
}

/// Criterion 5 — the bound strictly decreases in uniform gain.
fn uniform_gain_monotonicity() -> CriterionReport {
    let mut failures = Vec::new();
    for n in 2..=10 {
        let bounds: Vec<f64> = [0.0, 0.25, 0.5]
            .into_iter()
            .map(|r| bound_cf(Probe::WState, n, [r; 3]))
            .collect();
        if !(bounds[0] > bounds[1] && bounds[1] > bounds[2]) {
            failures.push(format!(
                "N={n}: bounds {bounds:?} not strictly decreasing in r"
            ));
        }
    }
    report(
        5,
        "uniform amplification strictly lowers the bound (N = 2..10)",
        failures,
        "strictly decreasing over r ∈ {0, 0.25, 0.5} for every N".to_owned(),
    )
}

/// Criterion 6 — amplifying the signal arm helps, the reference arm doesn't.
fn arm_selective_gain() -> CriterionReport {
    let mut failures = Vec::new();
    let mut min_signal_gain = f64::INFINITY;
    let mut max_ref_dev = 0.0_f64;
    for n in 2..=10 {
        let base = bound_cf(Probe::WState, n, [0.0; 3]);
        let signal = bound_cf(Probe::WState, n, [0.5, 0.0, 0.0]);
        let reference = bound_cf(Probe::WState, n, [0.0, 0.0, 0.5]);
        let signal_gain = (base - signal) / base;
        let ref_dev = (reference - base).abs() / base;
        min_signal_gain = min_signal_gain.min(signal_gain);
        max_ref_dev = max_ref_dev.max(ref_dev);
        if signal_gain <= 0.05 {
            failures.push(format!(
                "N={n}: signal-arm improvement {:.2}% ≤ 5%",
                100.0 * signal_gain
            ));
        }
        if ref_dev > 0.05 {
            failures.push(format!(
                "N={n}: reference-arm deviation {:.2}% > 5%",
                100.0 * ref_dev
            ));
        }
    }
    report(
        6,
        "signal-arm gain improves > 5%, reference-arm gain stays within 5%",
        failures,
        format!(
            "worst signal-arm improvement {:.1}%, worst reference-arm deviation {:.2}%",
            100.0 * min_signal_gain,
            100.0 * max_ref_dev
        ),
    )
}

/// Criterion 7 — same-arm correlations grow with gain much faster than
/// cross-arm ones.
fn correlation_growth() -> CriterionReport {
    let rs = [0.0, 0.25, 0.5];
    let mut failures = Vec::new();
    for n in 1..=10 {
        let g2: Vec<f64> = rs
            .iter()
            .map(|&r| {
                moments_cf(Probe::WState, n, [r; 3])
                    .g2_intra(0)
                    .expect("occupied arm")
            })
            .collect();
        if !(g2[0] < g2[1] && g2[1] < g2[2]) {
            failures.push(format!("N={n}: same-arm g² {g2:?} not strictly increasing"));
        }
    }
    // Cross-arm movement must stay below the same-arm movement at N = 10.
    let sets: Vec<MomentSet> = rs
        .iter()
        .map(|&r| moments_cf(Probe::WState, 10, [r; 3]))
        .collect();
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let d_intra =
            (sets[j].g2_intra(0).unwrap() - sets[i].g2_intra(0).unwrap()).abs();
        let d_inter =
            (sets[j].g2_inter(0, 1).unwrap() - sets[i].g2_inter(0, 1).unwrap()).abs();
        if d_inter >= d_intra {
            failures.push(format!(
                "N=10, r {} → {}: cross-arm change {d_inter:.3e} ≥ same-arm change {d_intra:.3e}",
                rs[i], rs[j]
            ));
        }
    }
    report(
        7,
        "same-arm g² strictly grows with gain; cross-arm g² barely moves",
        failures,
        "same-arm strictly increasing for N = 1..10; cross-arm changes smaller at N = 10".to_owned(),
    )
}

/// Criterion 8 — the entangled probe beats the separable benchmark.
///
/// The strict comparison is required at r = 0 and r = 0.5. At r = 0 it
/// cannot hold: the splitter maps both probes onto identical second-order
/// photon statistics (the separable probe's output is exactly multinomial,
/// and the entangled probe's coherences cancel out of every variance and
/// covariance), so the two bounds tie to machine precision and the sign of
/// the difference is numerical noise. The r = 0.5 comparison and the
/// relative-improvement comparison are genuine and hold strictly; the r = 0
/// half is reported faithfully as failed.
fn probe_comparison() -> CriterionReport {
    let mut failures = Vec::new();
    let mut r0_deltas = Vec::new();
    let mut r5_margin = f64::INFINITY;
    for n in 2..=10 {
        let w0 = bound_cf(Probe::WState, n, [0.0; 3]);
        let f0 = bound_cf(Probe::SeparableFock, n, [0.0; 3]);
        let w5 = bound_cf(Probe::WState, n, [0.5; 3]);
        let f5 = bound_cf(Probe::SeparableFock, n, [0.5; 3]);
        r0_deltas.push(f0 - w0);
        r5_margin = r5_margin.min(f5 - w5);
        if w0 >= f0 {
            failures.push(format!(
                "N={n}, r=0: entangled {w0:.15} not strictly below separable {f0:.15} (Δ = {:.1e})",
                f0 - w0
            ));
        }
        if w5 >= f5 {
            failures.push(format!(
                "N={n}, r=0.5: entangled {w5} not strictly below separable {f5}"
            ));
        }
        let improvement_w = (w0 - w5) / w0;
        let improvement_f = (f0 - f5) / f0;
        if improvement_w <= improvement_f {
            failures.push(format!(
                "N={n}: entangled improvement {improvement_w:.4} not above separable {improvement_f:.4}"
            ));
        }
    }
    let max_abs_r0 = r0_deltas.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    if !failures.is_empty() {
        failures.push(format!(
            "note: at r=0 the two probes provably share all second-order statistics \
             (largest |Δ| over N=2..10 is {max_abs_r0:.1e}, machine noise), so the strict \
             r=0 ordering is unattainable; the r=0.5 ordering holds strictly \
             (worst margin {r5_margin:.3e}) and the improvement clause holds for every N"
        ));
    }
    report(
        8,
        "entangled probe strictly beats the separable benchmark at r = 0 and 0.5",
        failures,
        format!(
            "strict at r=0.5 (worst margin {r5_margin:.3e}) and r=0 (max tie gap {max_abs_r0:.1e})"
        ),
    )
}

/// Criterion 9 — loss raises the bound, gain still helps under loss, and
/// the incremental benefit saturates.
fn loss_robustness() -> CriterionReport {
    let mut failures = Vec::new();

    let opt_bound = |probe, n, gains, eta| -> Result<f64, String> {
        if eta == 1.0 {
            Ok(bound_cf(probe, n, gains))
        } else {
            optimize_sigma(&moments_cf(probe, n, gains), eta)
                .map(|(_, b)| b)
                .map_err(|e| format!("N={n} gains={gains:?} η={eta}: {e}"))
        }
    };

    for n in 2..=10 {
        for r in [0.0, 0.5] {
            match (
                opt_bound(Probe::WState, n, [r; 3], 0.7),
                opt_bound(Probe::WState, n, [r; 3], 1.0),
            ) {
                (Ok(lossy), Ok(lossless)) => {
                    if lossy <= lossless {
                        failures.push(format!(
                            "N={n}, r={r}: lossy bound {lossy} not above lossless {lossless}"
                        ));
                    }
                }
                (a, b) => failures.push(format!("N={n}, r={r}: {a:?} vs {b:?}")),
            }
        }
        match (
            opt_bound(Probe::WState, n, [0.5; 3], 0.7),
            opt_bound(Probe::WState, n, [0.0; 3], 0.7),
        ) {
            (Ok(squeezed), Ok(unsqueezed)) => {
                if squeezed >= unsqueezed {
                    failures.push(format!(
                        "N={n}: η=0.7 squeezed bound {squeezed} not below unsqueezed {unsqueezed}"
                    ));
                }
            }
            (a, b) => failures.push(format!("N={n}, η=0.7 ordering: {a:?} vs {b:?}")),
        }
    }

    // Saturation at N = 10, η = 0.6: past the largest per-step gain, the
    // incremental improvement shrinks monotonically.
    let mut bounds = Vec::new();
    for i in 0..=20 {
        let r = f64::from(i) / 20.0;
        match opt_bound(Probe::WState, 10, [r; 3], 0.6) {
            Ok(b) => bounds.push(b),
            Err(e) => failures.push(format!("saturation sweep: {e}")),
        }
    }
    let mut saturation_note = String::new();
    if bounds.len() == 21 {
        let deltas: Vec<f64> = bounds.windows(2).map(|w| w[0] - w[1]).collect();
        let peak = deltas
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        for i in peak..deltas.len() - 1 {
            if deltas[i + 1] >= deltas[i] {
                failures.push(format!(
                    "saturation: increment at r={:.2} ({:.3e}) not below increment at r={:.2} ({:.3e})",
                    0.05 * (i + 1) as f64,
                    deltas[i + 1],
                    0.05 * i as f64,
                    deltas[i]
                ));
            }
        }
        saturation_note = format!(
            "largest per-step improvement at r={:.2}, strictly shrinking afterwards",
            0.05 * peak as f64
        );
    }

    report(
        9,
        "loss raises the bound, gain helps under loss, improvement saturates",
        failures,
        format!("η=0.7 orderings hold for N = 2..10; {saturation_note}"),
    )
}

/// Criterion 10 — structural invariants over the acceptance grid.
fn structural_invariants() -> CriterionReport {
    let mut failures = Vec::new();
    let mut checks = 0_u32;

    for probe in GRID_PROBES {
        for n in 1..=5 {
            for gains in GRID_GAIN_TRIPLES {
                let label = format!("{} N={n} gains={gains:?}", probe.as_str());
                let out = cfpoly::run_pipeline(&probe_cf(probe, n), gains, [0.0, 0.0]);

                // Normalization: χ(0) = 1 survives the pipeline.
                let c0 = out.coefficient(&[0; 6]);
                checks += 1;
                if (c0.re - 1.0).abs() > 1e-12 || c0.im.abs() > 1e-12 {
                    failures.push(format!("{label}: χ(0) = {c0} ≠ 1"));
                }

                // Hermiticity of the characteristic polynomial.
                checks += 1;
                if !out.is_hermitian(1e-12) {
                    failures.push(format!("{label}: output polynomial not Hermitian"));
                }

                let ms = MomentSet::from_cf(&out).expect("degree budget");

                // Physicality: nonnegative means, variances, quartic terms.
                checks += 1;
                for j in 0..3 {
                    if ms.mean[j] < -1e-12 || ms.variance(j) < -1e-12 || ms.intra4[j] < -1e-12 {
                        failures.push(format!(
                            "{label}: negative moment (mean {}, var {}, quartic {})",
                            ms.mean[j],
                            ms.variance(j),
                            ms.intra4[j]
                        ));
                    }
                }

                // Cauchy-Schwarz on occupation correlators.
                checks += 1;
                for (j, k) in [(0, 1), (0, 2), (1, 2)] {
                    let cross = ms.cross_moment(j, k);
                    let lim = (ms.second[j] * ms.second[k]).sqrt();
                    if cross > lim * (1.0 + 1e-9) + 1e-12 {
                        failures.push(format!(
                            "{label}: ⟨n{j}n{k}⟩ = {cross} exceeds Cauchy-Schwarz limit {lim}"
                        ));
                    }
                }

                // Permutation symmetry under uniform gain. Single-arm
                // marginals are identical for both probes (every reduced
                // state is the same diagonal photon-number mixture, so equal
                // squeezing yields equal marginal statistics). Cross
                // correlators keep the full three-arm symmetry only for the
                // symmetric probe or at zero gain; the all-in-one-arm probe
                // keeps just the exchange of its two empty arms once
                // squeezing makes the relative output phases observable.
                if gains[0] == gains[1] && gains[1] == gains[2] {
                    checks += 1;
                    let pair = |a: f64, b: f64, what: &str, failures: &mut Vec<String>| {
                        if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
                            failures.push(format!("{label}: {what} not symmetric: {a} vs {b}"));
                        }
                    };
                    for (a, b) in [(0, 1), (1, 2)] {
                        pair(ms.mean[a], ms.mean[b], "means", &mut failures);
                        pair(ms.variance(a), ms.variance(b), "variances", &mut failures);
                        pair(ms.intra4[a], ms.intra4[b], "quartic moments", &mut failures);
                    }
                    pair(
                        ms.cross_moment(0, 1),
                        ms.cross_moment(0, 2),
                        "cross moments",
                        &mut failures,
                    );
                    if probe == Probe::WState || gains[0] == 0.0 {
                        pair(
                            ms.cross_moment(0, 1),
                            ms.cross_moment(1, 2),
                            "cross moments",
                            &mut failures,
                        );
                    }
                }
            }
        }
    }

    // Phase invariance: the encoded phases never move occupation moments.
    let mut rng = StdRng::seed_from_u64(0x9817);
    for i in 0..10 {
        let phases = [
            rng.random_range(-3.0..3.0_f64),
            rng.random_range(-3.0..3.0_f64),
        ];
        for (probe, n, gains) in [
            (Probe::WState, 3, [0.25; 3]),
            (Probe::SeparableFock, 2, [0.5, 0.0, 0.0]),
        ] {
            checks += 1;
            let plain = moments_cf(probe, n, gains);
            let rotated = MomentSet::from_cf(&cfpoly::run_pipeline(
                &probe_cf(probe, n),
                gains,
                phases,
            ))
            .expect("degree budget");
            let d = plain.max_rel_discrepancy(&rotated);
            if d > 1e-12 {
                failures.push(format!(
                    "phase pair {i} on {} N={n}: moments moved by {d:.3e}",
                    probe.as_str()
                ));
            }
        }
    }

    // Conjugation consistency of randomly parameterized pipeline maps.
    let mut rng = StdRng::seed_from_u64(0x3117);
    for i in 0..10 {
        let gains = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let phases = [
            rng.random_range(-3.0..3.0_f64),
            rng.random_range(-3.0..3.0_f64),
        ];
        checks += 1;
        if !cfpoly::pipeline_map(gains, phases).is_conjugation_consistent(1e-12) {
            failures.push(format!(
                "map draw {i} (gains {gains:?}): conjugate-pair structure broken"
            ));
        }
    }

    // Oracle bookkeeping: norm plus recorded truncation deficit stays 1, and
    // phases leave the oracle's moments untouched as well.
    checks += 1;
    match focksim::run_pipeline(&FockProbe::WState { n: 3 }, [0.5; 3], [0.0, 0.0], 48) {
        Ok(state) => {
            let total = state.norm_sq() + state.norm_deficit();
            if (total - 1.0).abs() > 1e-8 {
                failures.push(format!("oracle norm accounting: |ψ|² + deficit = {total}"));
            }
            match (
                state.measure_moments(),
                focksim::run_pipeline(&FockProbe::WState { n: 3 }, [0.5; 3], [0.7, -0.3], 48)
                    .and_then(|s| s.measure_moments()),
            ) {
                (Ok(a), Ok(b)) => {
                    let d = a.max_rel_discrepancy(&b);
                    if d > 1e-10 {
                        failures.push(format!("oracle phase invariance: moments moved by {d:.3e}"));
                    }
                }
                (a, b) => failures.push(format!("oracle phase invariance: {a:?} vs {b:?}")),
            }
        }
        Err(e) => failures.push(format!("oracle bookkeeping run failed: {e}")),
    }

    report(
        10,
        "structural invariants over the acceptance grid",
        failures,
        format!("{checks} invariant checks hold (normalization, Hermiticity, physicality, Cauchy-Schwarz, symmetry, phase invariance, map structure, oracle bookkeeping)"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_criterion_produces_a_line() {
        // Smoke-test the cheap criteria end to end (the expensive grid ones
        // run in the dedicated acceptance integration target).
        for id in [2, 3, 4, 5, 6, 7] {
            let rep = run_criterion(id);
            assert_eq!(rep.id, id);
            let line = rep.line();
            assert!(line.contains(&format!("criterion {id:>2}")));
            assert!(line.contains("PASS") || line.contains("FAIL"));
        }
    }

    #[test]
    fn report_line_shape() {
        let rep = CriterionReport {
            id: 1,
            name: "sample",
            passed: true,
            detail: "ok".to_owned(),
        };
        assert_eq!(rep.line(), "criterion  1 [PASS] sample: ok");
    }
}
