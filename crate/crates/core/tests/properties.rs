mod support;

use support::run_named;

#[test]
fn kexpr_ring_axioms() {
    run_named("kexpr ring axioms");
}

#[test]
fn phi_homomorphism() {
    run_named("phi homomorphism");
}

#[test]
fn specialize_homomorphism() {
    run_named("specialize homomorphism");
}

#[test]
fn normalize_idempotence() {
    run_named("normalize idempotence");
}

#[test]
fn binomial_stratification() {
    run_named("binomial stratification");
}

#[test]
fn field_ring_axioms() {
    run_named("field ring axioms");
}

#[test]
fn expression_round_trip() {
    run_named("expression round trip");
}

#[test]
fn hilbert_product_formula() {
    run_named("hilbert product formula");
}

#[test]
fn local_formulas_match_search() {
    run_named("local formulas match search");
}

#[test]
fn split_conics_have_points() {
    run_named("split conics have points");
}
