//! End-to-end verification gate: one test per criterion of the built-in
//! suite. Each test prints the suite's own pass/fail line and asserts it.

use planalg::run_criterion;

const SEED: u64 = 2026;

fn run(id: usize) {
    let outcome = run_criterion(id, SEED).expect("known criterion id");
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_1_two_color_dimension_formula() {
    run(1);
}

#[test]
fn criterion_2_small_level_two_color_dimensions() {
    run(2);
}

#[test]
fn criterion_3_single_color_catalan_dimensions() {
    run(3);
}

#[test]
fn criterion_4_generator_relation_suite() {
    run(4);
}

#[test]
fn criterion_5_markov_trace_contracts() {
    run(5);
}

#[test]
fn criterion_6_index_quantization_and_positivity() {
    run(6);
}

#[test]
fn criterion_7_semisimple_dimension_bookkeeping() {
    run(7);
}

#[test]
fn criterion_8_planar_operad_axioms() {
    run(8);
}

#[test]
fn criterion_9_doubling_homomorphism() {
    run(9);
}
