//! Bounded windows onto the set of formulas valid in a structure.
//!
//! Every closed formula within the bounds is evaluated and lands in the
//! valid or the invalid part. On the fragment the expected laws are
//! checkable: a formula and its negation split across the parts, and
//! every valid existential has a name witness whose biconditional
//! instance is valid.

use formalsys::{
    enumerate_valid_fragment, fragment_consistency_report, henkin_witness, parse_formula,
    FiniteTermStructure, FragmentBounds, VarId,
};

const KLEIN_JSON: &str = include_str!("../fixtures/klein.json");

fn main() {
    let klein = FiniteTermStructure::from_json_str(KLEIN_JSON).expect("fixture loads");
    let bounds = FragmentBounds {
        connective_depth: 1,
        list_depth: 0,
        max_quantifiers: 1,
    };

    let partition = enumerate_valid_fragment(&klein, &bounds).unwrap();
    println!(
        "fragment ({bounds}): {} valid, {} invalid",
        partition.valid.len(),
        partition.invalid.len()
    );
    for f in partition.valid.iter().take(5) {
        println!("  valid:   {f}");
    }
    for f in partition.invalid.iter().take(5) {
        println!("  invalid: {f}");
    }

    // A witness for "something squares to the identity": the first name
    // already satisfies the body.
    let body = parse_formula("~ *(x1 x1) , $e", klein.language()).unwrap();
    let witness = henkin_witness(&klein, VarId(1), &body).unwrap();
    println!("witness for an element squaring to the identity: {witness}");
    assert_eq!(witness, "$e");

    let report = fragment_consistency_report(&klein, &bounds).unwrap();
    println!(
        "consistency report: {} formulas, {} valid, {} invalid, complementarity failures: {}, witness failures: {}",
        report.formulas_checked,
        report.valid_count,
        report.invalid_count,
        report.complementarity_failures.len(),
        report.witness_failures.len()
    );
    assert!(report.passed());
}
