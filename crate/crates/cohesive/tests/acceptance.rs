//! Acceptance suite: every shipped guarantee as one pass/fail line.
//! Run with `cargo test -p cohesive --test acceptance -- --nocapture`
//! (or via the CLI: `cohesive validate --suite acceptance`).

use cohesive::acceptance::{run_criterion, CriterionResult};

fn check(id: usize) {
    let r: CriterionResult = run_criterion(id);
    println!(
        "acceptance {:2}: {} — {} [{:.2} s] {}",
        r.id,
        if r.passed { "PASS" } else { "FAIL" },
        r.name,
        r.seconds,
        r.detail
    );
    assert!(r.passed, "criterion {} failed: {}", r.id, r.detail);
}

#[test]
fn criterion_01_linear_softening_reconstruction() {
    check(1);
}

#[test]
fn criterion_02_forward_linear_softening() {
    check(2);
}

#[test]
fn criterion_03_jump_threshold_closed_check() {
    check(3);
}

#[test]
fn criterion_04_constant_stress_pairs() {
    check(4);
}

#[test]
fn criterion_05_profile_reconstruction() {
    check(5);
}

#[test]
fn criterion_06_abel_round_trips() {
    check(6);
}

#[test]
fn criterion_07_oracle_cross_check() {
    check(7);
}

#[test]
fn criterion_08_reconstruction_round_trips() {
    check(8);
}

#[test]
fn criterion_09_property_suite() {
    check(9);
}

#[test]
fn criterion_10_diffuse_density() {
    check(10);
}
