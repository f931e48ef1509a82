//! One test per numbered criterion. Each prints a PASS/FAIL line and fails
//! when the check or its time budget fails.

use fricke::reproduce::run_criterion;

fn check(id: u32, budget_secs: f64) {
    let r = run_criterion(id);
    let in_time = r.seconds <= budget_secs;
    let pass = r.pass && in_time;
    println!(
        "{} criterion {:>2}: {} ({:.2} s of {budget_secs} s) {}",
        if pass { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.seconds,
        r.detail
    );
    assert!(r.pass, "criterion {id} failed: {}", r.detail);
    assert!(in_time, "criterion {id} over budget: {:.2} s", r.seconds);
}

#[test]
fn criterion_01_hopf() {
    check(1, 1.0);
}

#[test]
fn criterion_02_gamma0() {
    check(2, 20.0);
}

#[test]
fn criterion_03_whitehead() {
    check(3, 60.0);
}

#[test]
fn criterion_04_canonical_components() {
    check(4, 240.0);
}

#[test]
fn criterion_05_e6() {
    check(5, 600.0);
}

#[test]
fn criterion_06_d4() {
    check(6, 1800.0);
}

#[test]
fn criterion_07_census() {
    check(7, 1230.0);
}

#[test]
fn criterion_08_substitution() {
    check(8, 900.0);
}

#[test]
fn criterion_09_qutrit_mic() {
    check(9, 10.0);
}

#[test]
fn criterion_10_two_qubit_mic() {
    check(10, 10.0);
}

#[test]
fn criterion_11_triple_products() {
    check(11, 60.0);
}

#[test]
fn criterion_12_singular_points() {
    check(12, 5.0);
}

#[test]
fn criterion_13_properties() {
    check(13, 600.0);
}
