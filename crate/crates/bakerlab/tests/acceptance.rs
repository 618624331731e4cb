//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line (run with `--nocapture` to see them on success). The same runners
//! back the `bakerlab verify` command.

use bakerlab::acceptance::{self, CriterionResult};

fn check(result: CriterionResult) {
    println!("{result}");
    assert!(result.pass, "{result}");
}

#[test]
fn criterion_1_theorem_reproduction() {
    check(acceptance::theorem_reproduction());
}

#[test]
fn criterion_2_commutator_suite() {
    check(acceptance::commutator_suite());
}

#[test]
fn criterion_3_doubling_identity() {
    check(acceptance::doubling_identity());
}

#[test]
fn criterion_4_odd_n_residual() {
    check(acceptance::odd_n_residual());
}

#[test]
fn criterion_5_orthonormality() {
    check(acceptance::orthonormality());
}

#[test]
fn criterion_6_matrix_comb_agreement() {
    check(acceptance::matrix_comb_agreement());
}

#[test]
fn criterion_7_classical_escape() {
    check(acceptance::classical_escape());
}

#[test]
fn criterion_8_fourier_engine() {
    check(acceptance::fourier_engine());
}
