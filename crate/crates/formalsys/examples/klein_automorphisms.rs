//! Enumerating and composing the automorphisms of a finite structure.
//!
//! Brute-force search over all bijections of the four-group's universe
//! finds exactly the six maps that fix the identity and permute the other
//! three elements; the example then exercises composition and inversion.

use formalsys::{
    enumerate_morphisms, FiniteMorphism, FiniteTermStructure, MorphismSearch, MorphismVerdict,
};

const KLEIN_JSON: &str = include_str!("../fixtures/klein.json");

fn render(m: &FiniteMorphism) -> String {
    m.table()
        .iter()
        .map(|(a, b)| format!("{a}->{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    let klein = FiniteTermStructure::from_json_str(KLEIN_JSON).expect("fixture loads");

    let autos = enumerate_morphisms(&klein, &klein, MorphismSearch::Isomorphisms).unwrap();
    println!("automorphisms: {}", autos.len());
    for psi in &autos {
        println!("  {}", render(psi));
        assert_eq!(psi.apply("e"), Some("e"));
    }
    assert_eq!(autos.len(), 6);

    let homs = enumerate_morphisms(&klein, &klein, MorphismSearch::Homomorphisms).unwrap();
    println!("endomorphisms: {}", homs.len());

    // The group of automorphisms is closed under composition and inverse.
    let ident = FiniteMorphism::identity(&klein);
    for psi in &autos {
        let inv = psi.invert().unwrap();
        assert_eq!(inv.is_isomorphism(), MorphismVerdict::ExactIsomorphism);
        let round = FiniteMorphism::compose(&inv, psi).unwrap();
        assert_eq!(round.table(), ident.table());
        for phi in &autos {
            let composed = FiniteMorphism::compose(phi, psi).unwrap();
            assert_eq!(composed.is_isomorphism(), MorphismVerdict::ExactIsomorphism);
        }
    }
    println!("composition and inversion stay inside the automorphism group");
}
