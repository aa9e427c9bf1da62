//! Grammars, membership, name extension, and bounded enumeration.
//!
//! A language is a pair of symbol sets plus a grammar generating its
//! argument lists. Membership is decidable; adding a structure's names as
//! extra leaves yields the extended language whose ground lists are what
//! structures evaluate.

use formalsys::{
    enumerate_ground, is_syntactic_extension, parse_arg_list, LanguageError, LanguageSpec,
    NameSet,
};

fn main() {
    // One binary operation, no constants: lists are variables and nested
    // products.
    let group_lang = LanguageSpec::term(["*"], [], [], [("*", 2)]).unwrap();
    let term = parse_arg_list("*(x1 *(x2 x1))", &group_lang).unwrap();
    println!("{term} is a list: {}", group_lang.member(&term, None));

    let names = NameSet::finite(
        vec!["$e".into(), "$a".into(), "$b".into(), "$c".into()],
        "four-group",
    );
    let ground = parse_arg_list("*($a *($b $c))", &group_lang).unwrap();
    println!(
        "{ground} without names: {}   with names: {}",
        group_lang.member(&ground, None),
        group_lang.member(&ground, Some(&names))
    );

    let extended = group_lang.hat_extend(names).unwrap();
    println!("after extension: {}", extended.member(&ground, None));
    assert!(extended.member(&parse_arg_list("x1", &extended).unwrap(), None));

    // Extension rejects tokens that collide with the language.
    let collision = group_lang.hat_extend(NameSet::finite(vec!["*".into()], "bad"));
    assert!(matches!(collision, Err(LanguageError::NameCollision(_))));
    println!("extending with the symbol '*' is rejected");

    // Ground enumeration is the brute-force oracle domain: names first,
    // then every product of shallower lists.
    let lists = enumerate_ground(&extended, None, 1).unwrap();
    println!("ground lists of depth <= 1: {}", lists.len());
    for l in lists.iter().take(8) {
        println!("  {l}");
    }

    // String languages with and without the atoms-are-lists rule compare
    // structurally; omitting the rule generates the smaller set.
    let with_atoms = LanguageSpec::strings(["a", "b"], [], true).unwrap();
    let vars_only = LanguageSpec::strings(["a", "b"], [], false).unwrap();
    println!(
        "vars-only strings extend to atom strings: {}",
        is_syntactic_extension(&vars_only, &with_atoms).unwrap()
    );
    assert!(is_syntactic_extension(&with_atoms, &vars_only) == Ok(false));
    assert!(matches!(
        is_syntactic_extension(&group_lang, &with_atoms),
        Err(LanguageError::Incomparable)
    ));
    println!("term and string grammars are reported incomparable");
}
