//! Hereditarily finite sets: closure operations and witness principles.
//!
//! Sets are kept in canonical form, so structural equality is
//! extensional equality. The example walks through transitive closures,
//! power sets, pairing and products, comprehension, regularity and choice
//! witnesses, and the subset-friendliness checker, which must find a
//! violation in every finite set.

use formalsys::HfSet;

fn set(text: &str) -> HfSet {
    text.parse().expect("literal parses")
}

fn main() {
    let a = set("{{{}}}");
    println!("TC({a}) = {}", a.transitive_closure());
    assert_eq!(a.transitive_closure(), set("{{},{{}}}"));

    let two = set("{{},{{}}}");
    let power = two.power_set().unwrap();
    println!("P({two}) = {power}");
    assert_eq!(power.len(), 4);
    assert_eq!(power.rank(), two.rank() + 1);

    println!(
        "pair collapse: {{{},{}}} printed as {}",
        HfSet::empty(),
        HfSet::empty(),
        HfSet::pair(HfSet::empty(), HfSet::empty())
    );
    let product = set("{{}}").cartesian_product(&set("{{}}"));
    println!("{{{{}}}} x {{{{}}}} = {product}");

    let family = set("{{{}},{{{}}}}");
    println!(
        "choice over disjoint singletons {family} picks {}",
        family.choice_set().unwrap()
    );
    println!(
        "regularity witness of {family} is {}",
        family.regularity_witness().unwrap()
    );

    let transitive_members = family.comprehension(HfSet::is_transitive);
    println!("transitive members of {family}: {transitive_members}");

    // No finite set satisfies all four subset-friendliness conditions;
    // the checker names the first concrete violation.
    for text in ["{}", "{{}}", "{{},{{}}}"] {
        let u = set(text);
        let report = u.check_subset_friendly();
        assert!(!report.all_passed());
        let (label, outcome) = report
            .conditions()
            .into_iter()
            .find(|(_, c)| !c.passed())
            .unwrap();
        match outcome {
            formalsys::ConditionOutcome::Violation(v) => {
                println!("{text}: {label} fails: {v}");
            }
            formalsys::ConditionOutcome::Pass => unreachable!(),
        }
    }
}
