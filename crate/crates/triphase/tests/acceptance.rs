//! Acceptance gate: one test per criterion, each printing its pass/fail
//! line (visible with `--nocapture`; `selftest` on the CLI prints the same
//! lines). A failing criterion fails its test with the full detail string.

use triphase::acceptance::run_criterion;

fn check(id: u32) {
    let report = run_criterion(id);
    println!("{}", report.line());
    assert!(report.passed, "{}", report.line());
}

#[test]
fn criterion_01_cross_engine_agreement() {
    check(1);
}

#[test]
fn criterion_02_single_photon_fixture() {
    check(2);
}

#[test]
fn criterion_03_squeezed_vacuum_occupation() {
    check(3);
}

#[test]
fn criterion_04_reduction_identities() {
    check(4);
}

#[test]
fn criterion_05_uniform_gain_monotonicity() {
    check(5);
}

#[test]
fn criterion_06_arm_selective_gain() {
    check(6);
}

#[test]
fn criterion_07_correlation_growth() {
    check(7);
}

#[test]
fn criterion_08_probe_comparison() {
    check(8);
}

#[test]
fn criterion_09_loss_robustness() {
    check(9);
}

#[test]
fn criterion_10_structural_invariants() {
    check(10);
}
