//! A structure whose universe is all nonempty strings over an alphabet.
//!
//! Evaluation strips every name back to the string it denotes and
//! concatenates. The universe is infinite, so quantifiers scan strings up
//! to a configured length and answer `UNKNOWN-AT-BOUND` when the scan is
//! inconclusive; witnesses and counterexamples found within the bound are
//! exact.

use formalsys::{parse_formula, GroundString, StringStructure, TruthValue};

const STRINGS_JSON: &str = include_str!("../fixtures/strings_ab.json");

fn main() {
    let strings = StringStructure::from_json_str(STRINGS_JSON).expect("fixture loads");
    println!("quantifier bound: length <= {}", strings.quant_bound());

    // Names carry the string they denote: $ab names the string "ab".
    let lam = formalsys::parse_arg_list("[$ab b]", strings.language()).unwrap();
    let value = strings.eval_list(&lam).unwrap();
    println!("{lam} evaluates to \"{value}\"");
    assert_eq!(value, GroundString(vec!["a".into(), "b".into(), "b".into()]));

    let examples = [
        // A witness of length 1 exists, so the answer is exact.
        "ex x1 eqlen [x1 x1] , [a b]",
        // Refuted within the bound: [b] does not start with a.
        "all x1 prefix [a] , [x1]",
        // True but unprovable by bounded scan.
        "all x1 eqlen [x1] , [x1]",
        "ex x1 prefix [a b] , [x1]",
    ];
    for text in examples {
        let formula = parse_formula(text, strings.language()).unwrap();
        let verdict = strings.eval_closed(&formula).unwrap();
        println!("{:<17} {text}", verdict.to_string());
    }

    let unknown = parse_formula("all x1 eqlen [x1] , [x1]", strings.language()).unwrap();
    assert_eq!(
        strings.eval_closed(&unknown).unwrap(),
        TruthValue::UnknownAtBound
    );
}
