//! Formal languages `[A;P]` with a grammar-defined set of argument lists.
//!
//! The list set is represented intensionally by one of two grammar
//! families: term grammars (constants and fixed-arity function symbols)
//! and string grammars (flat sequences of atoms). Both admit variables
//! everywhere and are closed under substitution. Name extension adds a
//! structure's name tokens as extra leaves, yielding the language whose
//! ground lists are evaluated by structures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::syntax::{ArgList, Atom, VarId};

/// Cap on the number of lists produced by a single bounded enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;

const RESERVED_WORDS: &[&str] = &["~", "!", "->", "<->", "&", "|", "all", "ex"];

/// Generation rules for the list set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grammar {
    /// Terms: variables, constants, and `f(t1 ... tn)` for each declared
    /// function symbol of arity n >= 1.
    Term {
        constants: BTreeSet<String>,
        functions: BTreeMap<String, usize>,
    },
    /// Strings: nonempty sequences of variables (and of atoms, when
    /// `atoms_are_lists` holds), closed under concatenation.
    Strings {
        atoms: BTreeSet<String>,
        atoms_are_lists: bool,
    },
}

/// The names available for extending a language: either the finitely many
/// name tokens of a finite universe, or one name per nonempty string over
/// an atom alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NameSet {
    Finite {
        /// Name tokens in universe order.
        names: Vec<String>,
        universe_tag: String,
    },
    /// The name of the string `s` is `$` followed by the atoms of `s`
    /// concatenated; decodable because the atoms form a prefix-free set.
    StringNames {
        atoms: BTreeSet<String>,
        universe_tag: String,
    },
}

impl NameSet {
    pub fn finite(names: Vec<String>, universe_tag: impl Into<String>) -> Self {
        NameSet::Finite {
            names,
            universe_tag: universe_tag.into(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        match self {
            NameSet::Finite { names, .. } => names.iter().any(|n| n == token),
            NameSet::StringNames { atoms, .. } => match token.strip_prefix('$') {
                Some(ident) if !ident.is_empty() => segment_atoms(ident, atoms).is_some(),
                _ => false,
            },
        }
    }

    pub fn universe_tag(&self) -> &str {
        match self {
            NameSet::Finite { universe_tag, .. } | NameSet::StringNames { universe_tag, .. } => {
                universe_tag
            }
        }
    }
}

/// Splits `ident` into a sequence of atoms. Unique when the atom set is
/// prefix-free: at every position at most one atom can match.
pub(crate) fn segment_atoms(ident: &str, atoms: &BTreeSet<String>) -> Option<Vec<String>> {
    let mut rest = ident;
    let mut out = Vec::new();
    'outer: while !rest.is_empty() {
        for a in atoms {
            if let Some(tail) = rest.strip_prefix(a.as_str()) {
                out.push(a.clone());
                rest = tail;
                continue 'outer;
            }
        }
        return None;
    }
    Some(out)
}

/// Errors of language construction, extension and enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LanguageError {
    #[error("invalid symbol token '{0}': {1}")]
    BadToken(String, &'static str),
    #[error("alphabet and predicate symbols overlap on '{0}'")]
    AlphabetPredicateOverlap(String),
    #[error("grammar symbol '{0}' is not in the alphabet")]
    GrammarSymbolNotInAlphabet(String),
    #[error("'{0}' is declared both as a constant and a function symbol")]
    ConstantFunctionOverlap(String),
    #[error("name '{0}' collides with a symbol of the language")]
    NameCollision(String),
    #[error("language is already name-extended")]
    AlreadyExtended,
    #[error("enumeration would exceed the cap of {cap} lists")]
    ExplosionGuard { cap: usize },
    #[error("languages use different grammar families and cannot be compared structurally")]
    Incomparable,
}

/// A formal language: alphabet, predicate symbols, grammar, and an
/// optional name extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSpec {
    alphabet: BTreeSet<String>,
    predicates: BTreeSet<String>,
    grammar: Grammar,
    names: Option<NameSet>,
}

fn check_token(token: &str) -> Result<(), LanguageError> {
    let bad = |msg| Err(LanguageError::BadToken(token.to_string(), msg));
    if token.is_empty() {
        return bad("empty token");
    }
    if token.starts_with('$') {
        return bad("the '$' marker is reserved for names");
    }
    if RESERVED_WORDS.contains(&token) {
        return bad("reserved word of the formula syntax");
    }
    if token.chars().any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | ',')) {
        return bad("token contains whitespace or punctuation");
    }
    if token.len() > 1
        && token.starts_with('x')
        && token[1..].bytes().all(|b| b.is_ascii_digit())
    {
        return bad("token is reserved for variables");
    }
    Ok(())
}

impl LanguageSpec {
    pub fn new(
        alphabet: BTreeSet<String>,
        predicates: BTreeSet<String>,
        grammar: Grammar,
    ) -> Result<Self, LanguageError> {
        for token in alphabet.iter().chain(predicates.iter()) {
            check_token(token)?;
        }
        if let Some(shared) = alphabet.intersection(&predicates).next() {
            return Err(LanguageError::AlphabetPredicateOverlap(shared.clone()));
        }
        match &grammar {
            Grammar::Term {
                constants,
                functions,
            } => {
                for sym in constants.iter().chain(functions.keys()) {
                    if !alphabet.contains(sym) {
                        return Err(LanguageError::GrammarSymbolNotInAlphabet(sym.clone()));
                    }
                }
                if let Some(shared) = functions.keys().find(|f| constants.contains(*f)) {
                    return Err(LanguageError::ConstantFunctionOverlap(shared.clone()));
                }
            }
            Grammar::Strings { atoms, .. } => {
                for sym in atoms {
                    if !alphabet.contains(sym) {
                        return Err(LanguageError::GrammarSymbolNotInAlphabet(sym.clone()));
                    }
                }
            }
        }
        Ok(LanguageSpec {
            alphabet,
            predicates,
            grammar,
            names: None,
        })
    }

    /// Convenience constructor for a term language.
    pub fn term<'a>(
        alphabet: impl IntoIterator<Item = &'a str>,
        predicates: impl IntoIterator<Item = &'a str>,
        constants: impl IntoIterator<Item = &'a str>,
        functions: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, LanguageError> {
        Self::new(
            alphabet.into_iter().map(String::from).collect(),
            predicates.into_iter().map(String::from).collect(),
            Grammar::Term {
                constants: constants.into_iter().map(String::from).collect(),
                functions: functions
                    .into_iter()
                    .map(|(f, n)| (f.to_string(), n))
                    .collect(),
            },
        )
    }

    /// Convenience constructor for a string language whose alphabet is its
    /// atom set.
    pub fn strings<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        predicates: impl IntoIterator<Item = &'a str>,
        atoms_are_lists: bool,
    ) -> Result<Self, LanguageError> {
        let atoms: BTreeSet<String> = atoms.into_iter().map(String::from).collect();
        Self::new(
            atoms.clone(),
            predicates.into_iter().map(String::from).collect(),
            Grammar::Strings {
                atoms,
                atoms_are_lists,
            },
        )
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn predicates(&self) -> &BTreeSet<String> {
        &self.predicates
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn names(&self) -> Option<&NameSet> {
        self.names.as_ref()
    }

    /// The language without its name extension.
    pub fn base(&self) -> LanguageSpec {
        LanguageSpec {
            alphabet: self.alphabet.clone(),
            predicates: self.predicates.clone(),
            grammar: self.grammar.clone(),
            names: None,
        }
    }

    /// Adds the given names as extra leaves: under a term grammar they act
    /// as constants, under a string grammar as atoms.
    pub fn hat_extend(&self, names: NameSet) -> Result<LanguageSpec, LanguageError> {
        if self.names.is_some() {
            return Err(LanguageError::AlreadyExtended);
        }
        match &names {
            NameSet::Finite { names: tokens, .. } => {
                for token in tokens {
                    let collides = self.alphabet.contains(token)
                        || self.predicates.contains(token)
                        || !token.starts_with('$');
                    if collides {
                        return Err(LanguageError::NameCollision(token.clone()));
                    }
                }
            }
            // String names all carry the '$' marker, and no language token
            // may start with '$'.
            NameSet::StringNames { .. } => {}
        }
        Ok(LanguageSpec {
            alphabet: self.alphabet.clone(),
            predicates: self.predicates.clone(),
            grammar: self.grammar.clone(),
            names: Some(names),
        })
    }

    fn name_allowed(&self, token: &str, allow: Option<&NameSet>) -> bool {
        self.names
            .as_ref()
            .map(|n| n.contains(token))
            .unwrap_or(false)
            || allow.map(|n| n.contains(token)).unwrap_or(false)
    }

    /// Decides membership in the generated list set. Names are admitted
    /// as leaves when they belong to the language's own extension or to
    /// `allow_names`.
    pub fn member(&self, list: &ArgList, allow_names: Option<&NameSet>) -> bool {
        match &self.grammar {
            Grammar::Term {
                constants,
                functions,
            } => self.member_term(list, allow_names, constants, functions),
            Grammar::Strings {
                atoms,
                atoms_are_lists,
            } => match list {
                // A lone variable or admitted name is a string of length 1.
                ArgList::Leaf(_) => self.string_leaf_ok(list, allow_names, atoms, *atoms_are_lists),
                ArgList::Concat(children) => {
                    !children.is_empty()
                        && children.iter().all(|c| match c {
                            ArgList::Leaf(_) => {
                                self.string_leaf_ok(c, allow_names, atoms, *atoms_are_lists)
                            }
                            ArgList::Concat(_) => self.member(c, allow_names),
                            ArgList::Apply(..) => false,
                        })
                }
                ArgList::Apply(..) => false,
            },
        }
    }

    fn member_term(
        &self,
        list: &ArgList,
        allow_names: Option<&NameSet>,
        constants: &BTreeSet<String>,
        functions: &BTreeMap<String, usize>,
    ) -> bool {
        match list {
            ArgList::Leaf(Atom::Var(_)) => true,
            ArgList::Leaf(Atom::Sym(s)) => constants.contains(s),
            ArgList::Leaf(Atom::Name(n)) => self.name_allowed(n, allow_names),
            ArgList::Apply(f, children) => {
                functions.get(f) == Some(&children.len())
                    && children
                        .iter()
                        .all(|c| self.member_term(c, allow_names, constants, functions))
            }
            ArgList::Concat(_) => false,
        }
    }

    fn string_leaf_ok(
        &self,
        leaf: &ArgList,
        allow_names: Option<&NameSet>,
        atoms: &BTreeSet<String>,
        atoms_are_lists: bool,
    ) -> bool {
        match leaf {
            ArgList::Leaf(Atom::Var(_)) => true,
            ArgList::Leaf(Atom::Sym(s)) => atoms_are_lists && atoms.contains(s),
            ArgList::Leaf(Atom::Name(n)) => self.name_allowed(n, allow_names),
            _ => false,
        }
    }
}

/// Decides whether `larger` extends `smaller` syntactically: alphabet and
/// predicate inclusion plus a grammar that generates a superset of the
/// smaller list set. The comparison is structural; grammars of different
/// families are reported as incomparable rather than guessed.
pub fn is_syntactic_extension(
    smaller: &LanguageSpec,
    larger: &LanguageSpec,
) -> Result<bool, LanguageError> {
    if matches!(
        (&smaller.grammar, &larger.grammar),
        (Grammar::Term { .. }, Grammar::Strings { .. })
            | (Grammar::Strings { .. }, Grammar::Term { .. })
    ) {
        return Err(LanguageError::Incomparable);
    }
    if !smaller.alphabet.is_subset(&larger.alphabet)
        || !smaller.predicates.is_subset(&larger.predicates)
    {
        return Ok(false);
    }
    let grammars_include = match (&smaller.grammar, &larger.grammar) {
        (
            Grammar::Term {
                constants: c1,
                functions: f1,
            },
            Grammar::Term {
                constants: c2,
                functions: f2,
            },
        ) => {
            c1.is_subset(c2)
                && f1
                    .iter()
                    .all(|(sym, arity)| f2.get(sym) == Some(arity))
        }
        (
            Grammar::Strings {
                atoms: a1,
                atoms_are_lists: r1,
            },
            Grammar::Strings {
                atoms: a2,
                atoms_are_lists: r2,
            },
        ) => {
            // Omitting the atoms-are-lists rule yields the smaller set.
            let rule_ok = !*r1 || *r2 || a1.is_empty();
            a1.is_subset(a2) && rule_ok
        }
        _ => unreachable!("mixed grammar families are rejected above"),
    };
    if !grammars_include {
        return Ok(false);
    }
    let names_include = match (&smaller.names, &larger.names) {
        (None, _) => true,
        (Some(NameSet::Finite { names, .. }), Some(bigger)) => {
            names.iter().all(|t| bigger.contains(t))
        }
        (
            Some(NameSet::StringNames { atoms: a1, .. }),
            Some(NameSet::StringNames { atoms: a2, .. }),
        ) => a1.is_subset(a2),
        (Some(NameSet::StringNames { .. }), _) => false,
        (Some(_), None) => false,
    };
    Ok(names_include)
}

/// All ground lists of depth (term grammars) or length (string grammars)
/// up to `bound`, in a fixed order: shallow lists first, then by leaf and
/// symbol order. Uses the default enumeration cap.
pub fn enumerate_ground(
    spec: &LanguageSpec,
    names: Option<&NameSet>,
    bound: usize,
) -> Result<Vec<ArgList>, LanguageError> {
    enumerate_lists(spec, names, bound, &[], DEFAULT_ENUMERATION_CAP)
}

/// Bounded enumeration with extra variable leaves and an explicit cap;
/// exceeding the cap is an error.
///
/// For string grammars the bound limits the string length, and string
/// names contribute only the names of strings up to the same bound (the
/// full string name set is infinite at every length).
pub fn enumerate_lists(
    spec: &LanguageSpec,
    names: Option<&NameSet>,
    bound: usize,
    vars: &[VarId],
    cap: usize,
) -> Result<Vec<ArgList>, LanguageError> {
    let (pool, truncated) = enumerate_lists_truncated(spec, names, bound, vars, cap);
    if truncated {
        Err(LanguageError::ExplosionGuard { cap })
    } else {
        Ok(pool)
    }
}

/// Like [`enumerate_lists`], but stops cleanly at the cap: returns the
/// first `cap` lists in enumeration order and whether anything was cut.
pub fn enumerate_lists_truncated(
    spec: &LanguageSpec,
    names: Option<&NameSet>,
    bound: usize,
    vars: &[VarId],
    cap: usize,
) -> (Vec<ArgList>, bool) {
    let mut leaf_names: Vec<String> = Vec::new();
    let mut push_set = |set: Option<&NameSet>| match set {
        Some(NameSet::Finite { names, .. }) => {
            for n in names {
                if !leaf_names.contains(n) {
                    leaf_names.push(n.clone());
                }
            }
        }
        Some(NameSet::StringNames { atoms, .. }) => {
            for s in atom_strings_up_to(atoms, bound) {
                let token = format!("${}", s.concat());
                if !leaf_names.contains(&token) {
                    leaf_names.push(token);
                }
            }
        }
        None => {}
    };
    push_set(spec.names());
    push_set(names);

    let mut leaves: Vec<ArgList> = vars.iter().map(|v| ArgList::Leaf(Atom::Var(*v))).collect();
    match spec.grammar() {
        Grammar::Term { constants, .. } => {
            leaves.extend(constants.iter().map(|c| ArgList::sym(c.clone())));
            leaves.extend(leaf_names.iter().map(|n| ArgList::name(n.clone())));
            enumerate_terms(spec, leaves, bound, cap)
        }
        Grammar::Strings {
            atoms,
            atoms_are_lists,
        } => {
            if *atoms_are_lists {
                leaves.extend(atoms.iter().map(|a| ArgList::sym(a.clone())));
            }
            leaves.extend(leaf_names.iter().map(|n| ArgList::name(n.clone())));
            enumerate_strings(leaves, bound, cap)
        }
    }
}


fn atom_strings_up_to(atoms: &BTreeSet<String>, bound: usize) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    let mut current: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..bound {
        let mut next = Vec::new();
        for prefix in &current {
            for a in atoms {
                let mut s = prefix.clone();
                s.push(a.clone());
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

fn enumerate_terms(
    spec: &LanguageSpec,
    leaves: Vec<ArgList>,
    bound: usize,
    cap: usize,
) -> (Vec<ArgList>, bool) {
    let functions = match spec.grammar() {
        Grammar::Term { functions, .. } => functions,
        Grammar::Strings { .. } => unreachable!("term enumeration under term grammars"),
    };
    let mut pool: Vec<ArgList> = Vec::new();
    let mut depths: Vec<usize> = Vec::new();
    for leaf in leaves {
        if pool.len() == cap {
            return (pool, true);
        }
        pool.push(leaf);
        depths.push(0);
    }
    // Child tuples are scanned as base-(pool size) numbers, so a bound on
    // the scan length doubles as the work guard.
    let work_cap = cap.saturating_mul(32);
    for depth in 1..=bound {
        let prev_len = pool.len();
        for (f, &arity) in functions {
            let total = match prev_len.checked_pow(arity as u32) {
                Some(t) if t <= work_cap => t,
                _ => return (pool, true),
            };
            for code in 0..total {
                let mut tuple = vec![0usize; arity];
                let mut c = code;
                for slot in tuple.iter_mut().rev() {
                    *slot = c % prev_len;
                    c /= prev_len;
                }
                let max_depth = tuple.iter().map(|&i| depths[i]).max().unwrap_or(0);
                if max_depth != depth - 1 {
                    continue;
                }
                if pool.len() == cap {
                    return (pool, true);
                }
                let children: Vec<ArgList> = tuple.iter().map(|&i| pool[i].clone()).collect();
                pool.push(ArgList::Apply(f.clone(), children));
                depths.push(depth);
            }
        }
    }
    (pool, false)
}

fn enumerate_strings(leaves: Vec<ArgList>, bound: usize, cap: usize) -> (Vec<ArgList>, bool) {
    let mut pool: Vec<ArgList> = Vec::new();
    let mut current: Vec<Vec<ArgList>> = vec![vec![]];
    for _ in 1..=bound {
        let mut next = Vec::new();
        for prefix in &current {
            for leaf in &leaves {
                let mut s = prefix.clone();
                s.push(leaf.clone());
                next.push(s);
            }
        }
        for s in &next {
            if pool.len() == cap {
                return (pool, true);
            }
            pool.push(ArgList::Concat(s.clone()));
        }
        current = next;
    }
    (pool, false)
}

/// On-disk form of a language definition.
#[derive(Debug, Clone, Deserialize)]
pub struct LanguageFile {
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub predicates: Vec<String>,
    pub grammar: GrammarFile,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GrammarFile {
    Term {
        #[serde(default)]
        constants: Vec<String>,
        #[serde(default)]
        functions: BTreeMap<String, usize>,
    },
    String {
        atoms: Vec<String>,
        #[serde(rename = "atomsAreLists", default)]
        atoms_are_lists: bool,
    },
}

impl LanguageFile {
    pub fn into_spec(self) -> Result<LanguageSpec, LanguageError> {
        let grammar = match self.grammar {
            GrammarFile::Term {
                constants,
                functions,
            } => Grammar::Term {
                constants: constants.into_iter().collect(),
                functions,
            },
            GrammarFile::String {
                atoms,
                atoms_are_lists,
            } => Grammar::Strings {
                atoms: atoms.into_iter().collect(),
                atoms_are_lists,
            },
        };
        LanguageSpec::new(
            self.alphabet.into_iter().collect(),
            self.predicates.into_iter().collect(),
            grammar,
        )
    }
}

impl fmt::Display for LanguageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabet: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        let predicates: Vec<&str> = self.predicates.iter().map(String::as_str).collect();
        write!(f, "[{{{}}};{{{}}}]", alphabet.join(","), predicates.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_arg_list;

    fn klein() -> LanguageSpec {
        LanguageSpec::term(["*"], [], [], [("*", 2)]).unwrap()
    }

    fn klein_names() -> NameSet {
        NameSet::finite(
            vec!["$e".into(), "$a".into(), "$b".into(), "$c".into()],
            "klein",
        )
    }

    #[test]
    fn variables_always_members() {
        let spec = klein();
        assert!(spec.member(&ArgList::var(1), None));
        assert!(spec.member(
            &ArgList::apply("*", vec![ArgList::var(1), ArgList::var(2)]),
            None
        ));
    }

    #[test]
    fn names_need_permission() {
        let spec = klein();
        let names = klein_names();
        assert!(!spec.member(&ArgList::name("$a"), None));
        assert!(spec.member(&ArgList::name("$a"), Some(&names)));
    }

    #[test]
    fn hat_extension_accepts_nested_names() {
        let spec = klein().hat_extend(klein_names()).unwrap();
        let list = ArgList::apply(
            "*",
            vec![
                ArgList::name("$a"),
                ArgList::apply("*", vec![ArgList::name("$b"), ArgList::name("$c")]),
            ],
        );
        assert!(spec.member(&list, None));
        assert!(spec.member(&ArgList::var(1), None));
    }

    #[test]
    fn hat_extension_rejects_collisions() {
        let spec = klein();
        let bad = NameSet::finite(vec!["*".into()], "bad");
        assert_eq!(
            spec.hat_extend(bad).unwrap_err(),
            LanguageError::NameCollision("*".into())
        );
    }

    #[test]
    fn enumerates_klein_ground_lists() {
        let spec = klein();
        let names = klein_names();
        let depth0 = enumerate_ground(&spec, Some(&names), 0).unwrap();
        assert_eq!(
            depth0.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["$e", "$a", "$b", "$c"]
        );

        let depth1 = enumerate_ground(&spec, Some(&names), 1).unwrap();
        assert_eq!(depth1.len(), 4 + 16);
        let hat = spec.hat_extend(names).unwrap();
        for list in &depth1 {
            assert!(list.is_ground());
            assert!(hat.member(list, None));
        }
    }

    #[test]
    fn enumerates_strings_by_length() {
        let spec = LanguageSpec::strings(["a", "b"], [], true).unwrap();
        let lists = enumerate_ground(&spec, None, 2).unwrap();
        assert_eq!(
            lists.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["[a]", "[b]", "[a a]", "[a b]", "[b a]", "[b b]"]
        );
    }

    #[test]
    fn enumeration_completeness_at_depth_one() {
        // Independent cross-check of the depth-1 Klein enumeration: every
        // hat-member of depth <= 1 appears exactly once.
        let spec = klein();
        let names = klein_names();
        let got = enumerate_ground(&spec, Some(&names), 1).unwrap();
        let tokens = ["$e", "$a", "$b", "$c"];
        let mut expected: Vec<String> = tokens.iter().map(ToString::to_string).collect();
        for u in tokens {
            for v in tokens {
                expected.push(format!("*({u} {v})"));
            }
        }
        let got_strings: Vec<String> = got.iter().map(ToString::to_string).collect();
        let mut sorted_got = got_strings.clone();
        let mut sorted_expected = expected.clone();
        sorted_got.sort();
        sorted_expected.sort();
        assert_eq!(sorted_got, sorted_expected);
    }

    #[test]
    fn explosion_guard_fires() {
        let spec = klein();
        let names = klein_names();
        assert_eq!(
            enumerate_lists(&spec, Some(&names), 3, &[], 1_000).unwrap_err(),
            LanguageError::ExplosionGuard { cap: 1_000 }
        );
    }

    #[test]
    fn syntactic_extension_examples() {
        let spec = klein();
        assert!(is_syntactic_extension(&spec, &spec).unwrap());

        let without = LanguageSpec::strings(["a", "b"], [], false).unwrap();
        let with = LanguageSpec::strings(["a", "b"], [], true).unwrap();
        assert!(is_syntactic_extension(&without, &with).unwrap());
        assert!(!is_syntactic_extension(&with, &without).unwrap());

        assert_eq!(
            is_syntactic_extension(&spec, &with).unwrap_err(),
            LanguageError::Incomparable
        );
    }

    #[test]
    fn string_names_decode_prefix_free() {
        let names = NameSet::StringNames {
            atoms: ["a".to_string(), "b".to_string()].into_iter().collect(),
            universe_tag: "strings".into(),
        };
        assert!(names.contains("$ab"));
        assert!(names.contains("$a"));
        assert!(!names.contains("$"));
        assert!(!names.contains("$abz"));
        assert!(!names.contains("ab"));
    }

    #[test]
    fn rejects_reserved_tokens() {
        assert!(LanguageSpec::term(["all"], [], [], []).is_err());
        assert!(LanguageSpec::term(["x12"], [], [], []).is_err());
        assert!(LanguageSpec::term(["$a"], [], [], []).is_err());
        assert!(LanguageSpec::term(["p"], ["p"], [], []).is_err());
    }

    #[test]
    fn loads_language_files() {
        let term: LanguageFile = serde_json::from_str(
            r#"{ "alphabet": ["*"], "predicates": [],
                 "grammar": {"kind":"term","constants":[],"functions":{"*":2}} }"#,
        )
        .unwrap();
        let spec = term.into_spec().unwrap();
        assert!(parse_arg_list("*(x1 x2)", &spec).is_ok());

        let strings: LanguageFile = serde_json::from_str(
            r#"{ "alphabet": ["a","b"],
                 "grammar": {"kind":"string","atoms":["a","b"],"atomsAreLists":true} }"#,
        )
        .unwrap();
        let spec = strings.into_spec().unwrap();
        assert!(spec.member(&parse_arg_list("[a b]", &spec).unwrap(), None));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_member_list() -> BoxedStrategy<ArgList> {
            let leaf = prop_oneof![
                (1usize..5).prop_map(ArgList::var),
                prop_oneof![
                    Just("$e".to_string()),
                    Just("$a".to_string()),
                    Just("$b".to_string()),
                    Just("$c".to_string())
                ]
                .prop_map(ArgList::name),
            ];
            leaf.prop_recursive(3, 48, 2, |inner| {
                (inner.clone(), inner).prop_map(|(a, b)| ArgList::apply("*", vec![a, b]))
            })
            .boxed()
        }

        proptest! {
            #[test]
            fn membership_closed_under_substitution(
                lam in arb_member_list(),
                mu in arb_member_list(),
                x in 1usize..5,
            ) {
                let spec = klein().hat_extend(klein_names()).unwrap();
                prop_assume!(spec.member(&lam, None) && spec.member(&mu, None));
                let out = lam.subst_var(crate::syntax::VarId(x), &mu);
                prop_assert!(spec.member(&out, None));
            }
        }
    }
}
