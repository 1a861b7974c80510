//! The acceptance suite: one test per criterion, each printing a pass/fail
//! line with the measured value against the pinned tolerance.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use gelfand_core::verify;

fn run(name: &str) {
    let r = verify::run_suite(name).unwrap();
    println!("{}", r.line());
    assert!(
        r.passed,
        "criterion `{}` measured {:.3e} against tolerance {:.3e}: {}",
        r.name, r.measured, r.tolerance, r.detail
    );
}

#[test]
fn criterion_01_integrality_and_sign() {
    run("integrality");
}

#[test]
fn criterion_02_sublaplacian_spectrum() {
    run("sublaplacian");
}

#[test]
fn criterion_03_spherical_closed_forms() {
    run("spherical-forms");
}

#[test]
fn criterion_04_eigenfunction_property() {
    run("eigenfunction");
}

#[test]
fn criterion_05_transform_round_trip() {
    run("round-trip");
}

#[test]
fn criterion_06_multiplier_consistency() {
    run("multiplier");
}

#[test]
fn criterion_07_taylor_development() {
    run("taylor-development");
}

#[test]
fn criterion_08_interpolation_contracts() {
    run("interpolation");
}

#[test]
fn criterion_09_schwartz_extension() {
    run("extension");
}

#[test]
fn criterion_10_quotient_layer() {
    run("quotient");
}

#[test]
fn criterion_11_generator_change() {
    run("generator-change");
}
