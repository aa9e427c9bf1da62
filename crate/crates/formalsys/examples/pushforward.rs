//! The pushforward of a universe map on ground lists.
//!
//! A ground list splits into a name-free skeleton plus its names in
//! first-occurrence order; pushing the list forward along a universe map
//! keeps the skeleton and substitutes the names of the mapped elements.
//! The example shows the decomposition, the commuting condition with
//! evaluation, and functoriality under composition.

use std::collections::BTreeMap;

use formalsys::{
    enumerate_ground, parse_arg_list, skeleton, FiniteMorphism, FiniteTermStructure,
};

const KLEIN_JSON: &str = include_str!("../fixtures/klein.json");

fn main() {
    let klein = FiniteTermStructure::from_json_str(KLEIN_JSON).expect("fixture loads");
    let table: BTreeMap<String, String> = [("e", "e"), ("a", "b"), ("b", "c"), ("c", "a")]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
    let psi = FiniteMorphism::new(klein.clone(), klein.clone(), &table).unwrap();

    let lam = parse_arg_list("*($a *($b $a))", klein.language()).unwrap();
    let (pattern, names) = skeleton(&lam).unwrap();
    println!("list:     {lam}");
    println!("skeleton: {pattern}   names in order: {}", names.join(" "));

    let pushed = psi.push_list(&lam).unwrap();
    println!("pushed:   {pushed}");

    // Mapping the value commutes with evaluating the pushed list.
    let value = klein.eval_list(&lam).unwrap().to_string();
    let mapped = psi.apply(&value).unwrap().to_string();
    let pushed_value = klein.eval_list(&pushed).unwrap().to_string();
    println!("evaluate-then-map: {mapped}   push-then-evaluate: {pushed_value}");
    assert_eq!(mapped, pushed_value);

    // Functoriality: pushing along a composite equals pushing twice.
    let phi = FiniteMorphism::new(
        klein.clone(),
        klein.clone(),
        &[("e", "e"), ("a", "b"), ("b", "a"), ("c", "c")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect(),
    )
    .unwrap();
    let composite = FiniteMorphism::compose(&phi, &psi).unwrap();
    let names = klein.name_set();
    let mut checked = 0usize;
    for list in enumerate_ground(klein.language(), Some(&names), 2).unwrap() {
        let once = composite.push_list(&list).unwrap();
        let twice = phi.push_list(&psi.push_list(&list).unwrap()).unwrap();
        assert_eq!(once, twice);
        checked += 1;
    }
    println!("functoriality verified on {checked} ground lists");
}
