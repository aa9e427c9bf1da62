//! Model checking a finite group table against group axioms.
//!
//! Loads the four-element group structure, checks associativity and the
//! identity/inverse axiom, then corrupts a single table entry and shows
//! the concrete counterexample the checker produces.

use formalsys::{FiniteTermStructure, ModelVerdict, TruthValue};

const KLEIN_JSON: &str = include_str!("../fixtures/klein.json");
const AXIOMS: &str = include_str!("../fixtures/groups.fml");

fn axioms(structure: &FiniteTermStructure) -> Vec<formalsys::Formula> {
    AXIOMS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| formalsys::parse_formula(l, structure.language()).expect("axiom parses"))
        .collect()
}

fn main() {
    let klein = FiniteTermStructure::from_json_str(KLEIN_JSON).expect("fixture loads");
    println!("universe: {:?}", klein.universe());

    let axioms = axioms(&klein);
    for axiom in &axioms {
        println!("axiom: {axiom}");
        assert_eq!(klein.is_valid(axiom).unwrap(), TruthValue::True);
    }
    match klein.is_model(&axioms).unwrap() {
        ModelVerdict::Model { axioms_checked } => {
            println!("the table is a model of all {axioms_checked} axioms");
        }
        other => panic!("unexpected verdict {other:?}"),
    }

    // One corrupted entry (b*c becomes b) breaks associativity somewhere.
    let corrupted = FiniteTermStructure::from_json_str(
        &KLEIN_JSON.replace(r#""b,c": "a""#, r#""b,c": "b""#),
    )
    .expect("corrupted fixture still loads");
    match corrupted.is_model(&axioms).unwrap() {
        ModelVerdict::Counterexample {
            axiom_index,
            axiom,
            assignment,
        } => {
            println!("corrupted table: axiom {} fails: {axiom}", axiom_index + 1);
            let rendered: Vec<String> = assignment
                .iter()
                .map(|(v, n)| format!("{v}={n}"))
                .collect();
            println!("falsified at {}", rendered.join(" "));
        }
        other => panic!("expected a counterexample, got {other:?}"),
    }
}
