//! Homomorphisms and isomorphisms between structures of the same
//! language.
//!
//! A universe map induces a pushforward on ground lists: split the list
//! into its name-free skeleton and its names, then substitute the names of
//! the mapped elements. For finite term structures the homomorphism
//! conditions are decided exactly through the generators (constants,
//! function tables, predicate tables); for string structures, whose
//! universes are infinite, the commuting condition is verified on a
//! bounded enumeration instead.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::language::enumerate_ground;
use crate::structure::{
    EvalError, FiniteTermStructure, GroundString, StringStructure, Structure, StructureError,
};
use crate::syntax::{skeleton, ArgList, VarId};

/// Verdict of a homomorphism or isomorphism check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismVerdict {
    ExactHomomorphism,
    ExactIsomorphism,
    /// The conditions held on every list and tuple up to the given bound;
    /// an infinite universe admits no exact finite check.
    BoundedVerified(usize),
    Counterexample(MorphismWitness),
}

impl MorphismVerdict {
    pub fn holds(&self) -> bool {
        !matches!(self, MorphismVerdict::Counterexample(_))
    }
}

/// A concrete reason a check failed; every witness can be re-verified by
/// evaluating the list or tuple it names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismWitness {
    /// Mapping the value of `list` differs from evaluating its pushforward.
    EvalMismatch {
        list: ArgList,
        via_map: String,
        via_push: String,
    },
    PredicateForward { pred: String, tuple: Vec<String> },
    PredicateBackward { pred: String, tuple: Vec<String> },
    NullaryForward { pred: String },
    NullaryBackward { pred: String },
    NotInjective { a: String, b: String, image: String },
    NotSurjective { elem: String },
}

impl fmt::Display for MorphismWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismWitness::EvalMismatch {
                list,
                via_map,
                via_push,
            } => write!(
                f,
                "list: {list} map-then-evaluate: {via_map} push-then-evaluate: {via_push}"
            ),
            MorphismWitness::PredicateForward { pred, tuple } => {
                write!(f, "predicate {pred} not preserved on ({})", tuple.join(","))
            }
            MorphismWitness::PredicateBackward { pred, tuple } => {
                write!(f, "predicate {pred} not reflected on ({})", tuple.join(","))
            }
            MorphismWitness::NullaryForward { pred } => {
                write!(f, "nullary predicate {pred} not preserved")
            }
            MorphismWitness::NullaryBackward { pred } => {
                write!(f, "nullary predicate {pred} not reflected")
            }
            MorphismWitness::NotInjective { a, b, image } => {
                write!(f, "not injective: {a} and {b} both map to {image}")
            }
            MorphismWitness::NotSurjective { elem } => {
                write!(f, "not surjective: {elem} has no preimage")
            }
        }
    }
}

/// Errors of morphism construction and algebra.
#[derive(Debug, Error)]
pub enum MorphismError {
    #[error("source and target interpret different languages")]
    LanguageMismatch,
    #[error("morphism map is not total: no image for '{0}'")]
    MissingImage(String),
    #[error("morphism map mentions unknown element '{0}'")]
    UnknownElement(String),
    #[error("composition requires the inner target to equal the outer source")]
    StructureMismatch,
    #[error("morphism is not invertible: {0}")]
    NotInvertible(String),
    #[error("universe of size {size} exceeds the enumeration cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("source and target structures are of different kinds")]
    KindMismatch,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Cap on the source universe size for brute-force morphism enumeration.
pub const ENUMERATION_UNIVERSE_CAP: usize = 8;

/// A universe map between two finite term structures, given by a total
/// table over the source universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMorphism {
    source: FiniteTermStructure,
    target: FiniteTermStructure,
    /// Image of each source element, by universe index.
    map: Vec<usize>,
}

impl FiniteMorphism {
    pub fn new(
        source: FiniteTermStructure,
        target: FiniteTermStructure,
        table: &BTreeMap<String, String>,
    ) -> Result<Self, MorphismError> {
        if source.language() != target.language() {
            return Err(MorphismError::LanguageMismatch);
        }
        let mut map = Vec::with_capacity(source.universe().len());
        for elem in source.universe() {
            let image = table
                .get(elem)
                .ok_or_else(|| MorphismError::MissingImage(elem.clone()))?;
            let ix = target
                .elem_index(image)
                .ok_or_else(|| MorphismError::UnknownElement(image.clone()))?;
            map.push(ix);
        }
        for key in table.keys() {
            if source.elem_index(key).is_none() {
                return Err(MorphismError::UnknownElement(key.clone()));
            }
        }
        Ok(FiniteMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(structure: &FiniteTermStructure) -> Self {
        FiniteMorphism {
            source: structure.clone(),
            target: structure.clone(),
            map: (0..structure.universe().len()).collect(),
        }
    }

    pub fn source(&self) -> &FiniteTermStructure {
        &self.source
    }

    pub fn target(&self) -> &FiniteTermStructure {
        &self.target
    }

    /// The map as an element table in universe order.
    pub fn table(&self) -> Vec<(String, String)> {
        self.source
            .universe()
            .iter()
            .zip(&self.map)
            .map(|(a, &b)| (a.clone(), self.target.universe()[b].clone()))
            .collect()
    }

    pub fn apply_index(&self, ix: usize) -> usize {
        self.map[ix]
    }

    pub fn apply(&self, elem: &str) -> Option<&str> {
        let ix = self.source.elem_index(elem)?;
        Some(&self.target.universe()[self.map[ix]])
    }

    /// Pushforward on ground lists: the skeleton is kept and every name is
    /// replaced by the name of the mapped element.
    pub fn push_list(&self, list: &ArgList) -> Result<ArgList, EvalError> {
        let (mut pattern, names) = skeleton(list)
            .map_err(|_| EvalError::NotGround(list.to_string()))?;
        for (i, token) in names.iter().enumerate() {
            let src_ix = self
                .source
                .elem_index_of_name(token)
                .ok_or_else(|| EvalError::NotInLanguage(format!("unknown name '{token}'")))?;
            let image_token = self.target.name_token(self.map[src_ix]).to_string();
            pattern = pattern.subst_var(VarId(i + 1), &ArgList::name(image_token));
        }
        Ok(pattern)
    }

    /// Exact homomorphism check through the generators: constants,
    /// function tables, and predicate tables.
    pub fn is_homomorphism(&self) -> MorphismVerdict {
        let src = &self.source;
        let tgt = &self.target;

        let constants: Vec<String> = match src.language().grammar() {
            crate::language::Grammar::Term { constants, .. } => {
                constants.iter().cloned().collect()
            }
            crate::language::Grammar::Strings { .. } => Vec::new(),
        };
        for c in &constants {
            let sv = src.constant_value(c).expect("constants are total");
            let tv = tgt.constant_value(c).expect("constants are total");
            if self.map[sv] != tv {
                return MorphismVerdict::Counterexample(MorphismWitness::EvalMismatch {
                    list: ArgList::sym(c.clone()),
                    via_map: tgt.universe()[self.map[sv]].clone(),
                    via_push: tgt.universe()[tv].clone(),
                });
            }
        }

        let functions: Vec<(String, usize)> = match src.language().grammar() {
            crate::language::Grammar::Term { functions, .. } => {
                functions.iter().map(|(f, &n)| (f.clone(), n)).collect()
            }
            crate::language::Grammar::Strings { .. } => Vec::new(),
        };
        let n = src.universe().len();
        for (f, arity) in &functions {
            let mut tuple = vec![0usize; *arity];
            loop {
                let sv = src
                    .function_value(f, &tuple)
                    .expect("function tables are total");
                let mapped_tuple: Vec<usize> = tuple.iter().map(|&i| self.map[i]).collect();
                let tv = tgt
                    .function_value(f, &mapped_tuple)
                    .expect("function tables are total");
                if self.map[sv] != tv {
                    let children = tuple
                        .iter()
                        .map(|&i| ArgList::name(src.name_token(i).to_string()))
                        .collect();
                    return MorphismVerdict::Counterexample(MorphismWitness::EvalMismatch {
                        list: ArgList::apply(f.clone(), children),
                        via_map: tgt.universe()[self.map[sv]].clone(),
                        via_push: tgt.universe()[tv].clone(),
                    });
                }
                if !advance(&mut tuple, n) {
                    break;
                }
            }
        }

        for p in src.language().predicates() {
            if src.pred_nullary_value(p) && !tgt.pred_nullary_value(p) {
                return MorphismVerdict::Counterexample(MorphismWitness::NullaryForward {
                    pred: p.clone(),
                });
            }
        }
        for (p, arity) in src.pred_arities() {
            let table = src.pred_table(&p, arity).expect("listed arity");
            for tuple in table {
                let mapped: Vec<usize> = tuple.iter().map(|&i| self.map[i]).collect();
                let held = tgt
                    .pred_table(&p, arity)
                    .map(|t| t.contains(&mapped))
                    .unwrap_or(false);
                if !held {
                    return MorphismVerdict::Counterexample(MorphismWitness::PredicateForward {
                        pred: p.clone(),
                        tuple: tuple
                            .iter()
                            .map(|&i| src.universe()[i].clone())
                            .collect(),
                    });
                }
            }
        }
        MorphismVerdict::ExactHomomorphism
    }

    /// Exact isomorphism check: bijectivity, the homomorphism conditions,
    /// and reflection of every predicate.
    pub fn is_isomorphism(&self) -> MorphismVerdict {
        let src = &self.source;
        let tgt = &self.target;
        let mut seen: Vec<Option<usize>> = vec![None; tgt.universe().len()];
        for (i, &img) in self.map.iter().enumerate() {
            if let Some(prev) = seen[img] {
                return MorphismVerdict::Counterexample(MorphismWitness::NotInjective {
                    a: src.universe()[prev].clone(),
                    b: src.universe()[i].clone(),
                    image: tgt.universe()[img].clone(),
                });
            }
            seen[img] = Some(i);
        }
        if let Some(unhit) = seen.iter().position(Option::is_none) {
            return MorphismVerdict::Counterexample(MorphismWitness::NotSurjective {
                elem: tgt.universe()[unhit].clone(),
            });
        }
        match self.is_homomorphism() {
            MorphismVerdict::ExactHomomorphism => {}
            other => return other,
        }

        let inverse: Vec<usize> = {
            let mut inv = vec![0usize; self.map.len()];
            for (i, &img) in self.map.iter().enumerate() {
                inv[img] = i;
            }
            inv
        };
        for p in tgt.language().predicates() {
            if tgt.pred_nullary_value(p) && !src.pred_nullary_value(p) {
                return MorphismVerdict::Counterexample(MorphismWitness::NullaryBackward {
                    pred: p.clone(),
                });
            }
        }
        for (p, arity) in tgt.pred_arities() {
            let table = tgt.pred_table(&p, arity).expect("listed arity");
            for tuple in table {
                let pre: Vec<usize> = tuple.iter().map(|&i| inverse[i]).collect();
                let held = src
                    .pred_table(&p, arity)
                    .map(|t| t.contains(&pre))
                    .unwrap_or(false);
                if !held {
                    return MorphismVerdict::Counterexample(MorphismWitness::PredicateBackward {
                        pred: p.clone(),
                        tuple: tuple
                            .iter()
                            .map(|&i| tgt.universe()[i].clone())
                            .collect(),
                    });
                }
            }
        }
        MorphismVerdict::ExactIsomorphism
    }

    /// Composes `outer` after `inner`; the inner target must equal the
    /// outer source as a structure value.
    pub fn compose(outer: &FiniteMorphism, inner: &FiniteMorphism) -> Result<Self, MorphismError> {
        if inner.target != outer.source {
            return Err(MorphismError::StructureMismatch);
        }
        Ok(FiniteMorphism {
            source: inner.source.clone(),
            target: outer.target.clone(),
            map: inner.map.iter().map(|&i| outer.map[i]).collect(),
        })
    }

    pub fn invert(&self) -> Result<Self, MorphismError> {
        match self.is_isomorphism() {
            MorphismVerdict::ExactIsomorphism => {}
            MorphismVerdict::Counterexample(w) => {
                return Err(MorphismError::NotInvertible(w.to_string()))
            }
            other => return Err(MorphismError::NotInvertible(format!("{other:?}"))),
        }
        let mut inv = vec![0usize; self.map.len()];
        for (i, &img) in self.map.iter().enumerate() {
            inv[img] = i;
        }
        Ok(FiniteMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        })
    }
}

fn advance(tuple: &mut [usize], base: usize) -> bool {
    let mut k = tuple.len();
    loop {
        if k == 0 {
            return false;
        }
        k -= 1;
        tuple[k] += 1;
        if tuple[k] < base {
            return true;
        }
        tuple[k] = 0;
    }
}

/// Search mode for morphism enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismSearch {
    Homomorphisms,
    Isomorphisms,
}

/// All total maps (or bijections) that pass the exact check, in
/// lexicographic order over images in universe order.
pub fn enumerate_morphisms(
    source: &FiniteTermStructure,
    target: &FiniteTermStructure,
    mode: MorphismSearch,
) -> Result<Vec<FiniteMorphism>, MorphismError> {
    if source.language() != target.language() {
        return Err(MorphismError::LanguageMismatch);
    }
    let n = source.universe().len();
    if n > ENUMERATION_UNIVERSE_CAP {
        return Err(MorphismError::UniverseTooLarge {
            size: n,
            cap: ENUMERATION_UNIVERSE_CAP,
        });
    }
    let m = target.universe().len();
    let mut out = Vec::new();
    if mode == MorphismSearch::Isomorphisms && n != m {
        return Ok(out);
    }
    let mut map = vec![0usize; n];
    loop {
        let bijective_enough = mode == MorphismSearch::Homomorphisms || {
            let mut seen = vec![false; m];
            map.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        };
        if bijective_enough {
            let candidate = FiniteMorphism {
                source: source.clone(),
                target: target.clone(),
                map: map.clone(),
            };
            let passes = match mode {
                MorphismSearch::Homomorphisms => candidate.is_homomorphism().holds(),
                MorphismSearch::Isomorphisms => {
                    candidate.is_isomorphism() == MorphismVerdict::ExactIsomorphism
                }
            };
            if passes {
                out.push(candidate);
            }
        }
        if !advance(&mut map, m) {
            break;
        }
    }
    Ok(out)
}

/// A universe map between two string structures, induced by mapping each
/// atom to a nonempty string and extending by concatenation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringMorphism {
    source: StringStructure,
    target: StringStructure,
    atom_images: BTreeMap<String, GroundString>,
}

impl StringMorphism {
    pub fn new(
        source: StringStructure,
        target: StringStructure,
        images: &BTreeMap<String, String>,
    ) -> Result<Self, MorphismError> {
        if source.language() != target.language() {
            return Err(MorphismError::LanguageMismatch);
        }
        let src_atoms: Vec<String> = match source.language().grammar() {
            crate::language::Grammar::Strings { atoms, .. } => atoms.iter().cloned().collect(),
            crate::language::Grammar::Term { .. } => return Err(MorphismError::KindMismatch),
        };
        let mut atom_images = BTreeMap::new();
        for atom in &src_atoms {
            let image = images
                .get(atom)
                .ok_or_else(|| MorphismError::MissingImage(atom.clone()))?;
            let decoded = target
                .string_of_name(&format!("${image}"))
                .ok_or_else(|| MorphismError::UnknownElement(image.clone()))?;
            atom_images.insert(atom.clone(), decoded);
        }
        for key in images.keys() {
            if !src_atoms.contains(key) {
                return Err(MorphismError::UnknownElement(key.clone()));
            }
        }
        Ok(StringMorphism {
            source,
            target,
            atom_images,
        })
    }

    pub fn source(&self) -> &StringStructure {
        &self.source
    }

    pub fn target(&self) -> &StringStructure {
        &self.target
    }

    /// Applies the induced map to a ground string.
    pub fn apply(&self, s: &GroundString) -> GroundString {
        let mut out = Vec::new();
        for atom in &s.0 {
            out.extend(self.atom_images[atom].0.iter().cloned());
        }
        GroundString(out)
    }

    pub fn push_list(&self, list: &ArgList) -> Result<ArgList, EvalError> {
        let (mut pattern, names) = skeleton(list)
            .map_err(|_| EvalError::NotGround(list.to_string()))?;
        for (i, token) in names.iter().enumerate() {
            let s = self.source.string_of_name(token).ok_or_else(|| {
                EvalError::NotInLanguage(format!("name '{token}' does not denote a string"))
            })?;
            let image_token = self.target.name_of(&self.apply(&s));
            pattern = pattern.subst_var(VarId(i + 1), &ArgList::name(image_token));
        }
        Ok(pattern)
    }

    /// Bounded homomorphism check: the commuting condition on every ground
    /// list up to `bound`, and predicate preservation on every tuple of
    /// bounded strings.
    pub fn is_homomorphism(&self, bound: usize) -> MorphismVerdict {
        let names = self.source.name_set();
        let lists = enumerate_ground(self.source.language(), Some(&names), bound)
            .unwrap_or_default();
        for list in &lists {
            let via_map = self.apply(&self.source.eval_list(list).expect("enumerated ground"));
            let pushed = self.push_list(list).expect("enumerated ground");
            let via_push = self.target.eval_list(&pushed).expect("pushed list is ground");
            if via_map != via_push {
                return MorphismVerdict::Counterexample(MorphismWitness::EvalMismatch {
                    list: list.clone(),
                    via_map: via_map.to_string(),
                    via_push: via_push.to_string(),
                });
            }
        }
        if let Some(w) = self.predicate_counterexample(bound, false) {
            return MorphismVerdict::Counterexample(w);
        }
        MorphismVerdict::BoundedVerified(bound)
    }

    /// Bounded isomorphism check: injectivity and surjectivity over the
    /// bounded universe plus predicate equivalence.
    pub fn is_isomorphism(&self, bound: usize) -> MorphismVerdict {
        match self.is_homomorphism(bound) {
            MorphismVerdict::BoundedVerified(_) => {}
            other => return other,
        }
        let strings = strings_up_to(&self.source, bound);
        let mut images: BTreeMap<GroundString, GroundString> = BTreeMap::new();
        for s in &strings {
            let image = self.apply(s);
            if let Some(prev) = images.get(&image) {
                if prev != s {
                    return MorphismVerdict::Counterexample(MorphismWitness::NotInjective {
                        a: prev.to_string(),
                        b: s.to_string(),
                        image: image.to_string(),
                    });
                }
            }
            images.insert(image, s.clone());
        }
        // Atom images are nonempty, so a preimage of a short target string
        // is at most as long and the bounded surjectivity check is sound.
        for t in strings_up_to(&self.target, bound) {
            if !images.contains_key(&t) {
                return MorphismVerdict::Counterexample(MorphismWitness::NotSurjective {
                    elem: t.to_string(),
                });
            }
        }
        if let Some(w) = self.predicate_counterexample(bound, true) {
            return MorphismVerdict::Counterexample(w);
        }
        MorphismVerdict::BoundedVerified(bound)
    }

    fn predicate_counterexample(&self, bound: usize, reflect: bool) -> Option<MorphismWitness> {
        for p in self.source.language().predicates() {
            let fwd = matches!(
                (
                    crate::structure::Domain::nullary(&self.source, p),
                    crate::structure::Domain::nullary(&self.target, p),
                ),
                (Ok(true), Ok(false))
            );
            if fwd {
                return Some(MorphismWitness::NullaryForward { pred: p.clone() });
            }
            if reflect {
                let bwd = matches!(
                    (
                        crate::structure::Domain::nullary(&self.target, p),
                        crate::structure::Domain::nullary(&self.source, p),
                    ),
                    (Ok(true), Ok(false))
                );
                if bwd {
                    return Some(MorphismWitness::NullaryBackward { pred: p.clone() });
                }
            }
        }
        let strings = strings_up_to(&self.source, bound);
        for ((p, arity), _) in self.source.pred_families() {
            let mut tuple_ix = vec![0usize; arity];
            loop {
                let tuple: Vec<GroundString> =
                    tuple_ix.iter().map(|&i| strings[i].clone()).collect();
                let mapped: Vec<GroundString> = tuple.iter().map(|s| self.apply(s)).collect();
                let held_src = crate::structure::Domain::holds(&self.source, &p, &tuple)
                    .unwrap_or(false);
                let held_tgt = crate::structure::Domain::holds(&self.target, &p, &mapped)
                    .unwrap_or(false);
                if held_src && !held_tgt {
                    return Some(MorphismWitness::PredicateForward {
                        pred: p.clone(),
                        tuple: tuple.iter().map(ToString::to_string).collect(),
                    });
                }
                if reflect && held_tgt && !held_src {
                    return Some(MorphismWitness::PredicateBackward {
                        pred: p.clone(),
                        tuple: mapped.iter().map(ToString::to_string).collect(),
                    });
                }
                if !advance(&mut tuple_ix, strings.len()) {
                    break;
                }
            }
        }
        None
    }

    pub fn compose(outer: &StringMorphism, inner: &StringMorphism) -> Result<Self, MorphismError> {
        if inner.target != outer.source {
            return Err(MorphismError::StructureMismatch);
        }
        let atom_images = inner
            .atom_images
            .iter()
            .map(|(a, s)| (a.clone(), outer.apply(s)))
            .collect();
        Ok(StringMorphism {
            source: inner.source.clone(),
            target: outer.target.clone(),
            atom_images,
        })
    }

    /// Invertible exactly when the atom map is a permutation of atoms.
    pub fn invert(&self) -> Result<Self, MorphismError> {
        let mut inverse = BTreeMap::new();
        for (atom, image) in &self.atom_images {
            if image.0.len() != 1 {
                return Err(MorphismError::NotInvertible(format!(
                    "atom '{atom}' maps to the longer string '{image}'"
                )));
            }
            if inverse
                .insert(image.0[0].clone(), GroundString(vec![atom.clone()]))
                .is_some()
            {
                return Err(MorphismError::NotInvertible(format!(
                    "two atoms map to '{image}'"
                )));
            }
        }
        if inverse.len() != self.atom_images.len() {
            return Err(MorphismError::NotInvertible("atom map is not onto".into()));
        }
        Ok(StringMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            atom_images: inverse,
        })
    }
}

fn strings_up_to(structure: &StringStructure, bound: usize) -> Vec<GroundString> {
    let names = structure.name_set();
    enumerate_ground(structure.language(), Some(&names), bound)
        .unwrap_or_default()
        .iter()
        .filter_map(|l| structure.eval_list(l).ok())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Either kind of morphism, as loaded from a definition file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Morphism {
    Finite(FiniteMorphism),
    Strings(StringMorphism),
}

/// On-disk form of a morphism: two structures plus the map table.
#[derive(Debug, Clone, Deserialize)]
pub struct MorphismDef {
    pub source: serde_json::Value,
    pub target: serde_json::Value,
    pub map: BTreeMap<String, String>,
}

fn load_structure_value(
    value: &serde_json::Value,
    base_dir: Option<&Path>,
) -> Result<Structure, MorphismError> {
    if let Some(path) = value.as_str() {
        let resolved = match base_dir {
            Some(dir) => dir.join(path),
            None => Path::new(path).to_path_buf(),
        };
        Ok(Structure::load(&resolved)?)
    } else {
        Ok(Structure::from_value(value.clone(), base_dir, "<inline>")?)
    }
}

impl Morphism {
    pub fn load(path: &Path) -> Result<Self, MorphismError> {
        let text = std::fs::read_to_string(path).map_err(|source| StructureError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let def: MorphismDef =
            serde_json::from_str(&text).map_err(|source| StructureError::Json {
                path: path.display().to_string(),
                source,
            })?;
        Self::from_def(def, path.parent())
    }

    pub fn from_def(def: MorphismDef, base_dir: Option<&Path>) -> Result<Self, MorphismError> {
        let source = load_structure_value(&def.source, base_dir)?;
        let target = load_structure_value(&def.target, base_dir)?;
        match (source, target) {
            (Structure::FiniteTerm(s), Structure::FiniteTerm(t)) => {
                Ok(Morphism::Finite(FiniteMorphism::new(s, t, &def.map)?))
            }
            (Structure::Strings(s), Structure::Strings(t)) => {
                Ok(Morphism::Strings(StringMorphism::new(s, t, &def.map)?))
            }
            _ => Err(MorphismError::KindMismatch),
        }
    }

    pub fn push_list(&self, list: &ArgList) -> Result<ArgList, EvalError> {
        match self {
            Morphism::Finite(m) => m.push_list(list),
            Morphism::Strings(m) => m.push_list(list),
        }
    }

    pub fn is_homomorphism(&self, bound: usize) -> MorphismVerdict {
        match self {
            Morphism::Finite(m) => m.is_homomorphism(),
            Morphism::Strings(m) => m.is_homomorphism(bound),
        }
    }

    pub fn is_isomorphism(&self, bound: usize) -> MorphismVerdict {
        match self {
            Morphism::Finite(m) => m.is_isomorphism(),
            Morphism::Strings(m) => m.is_isomorphism(bound),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::FiniteTermStructure;

    const KLEIN_JSON: &str =
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/klein.json"));
    const ONE_JSON: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/one_element.json"
    ));
    const STRINGS_JSON: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/strings_ab.json"
    ));

    fn klein() -> FiniteTermStructure {
        FiniteTermStructure::from_json_str(KLEIN_JSON).unwrap()
    }

    fn one() -> FiniteTermStructure {
        FiniteTermStructure::from_json_str(ONE_JSON).unwrap()
    }

    fn klein_map(pairs: [(&str, &str); 4]) -> FiniteMorphism {
        let table: BTreeMap<String, String> = pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        FiniteMorphism::new(klein(), klein(), &table).unwrap()
    }

    fn swap_ab() -> FiniteMorphism {
        klein_map([("e", "e"), ("a", "b"), ("b", "a"), ("c", "c")])
    }

    fn cycle_abc() -> FiniteMorphism {
        klein_map([("e", "e"), ("a", "b"), ("b", "c"), ("c", "a")])
    }

    fn parse_list(s: &FiniteTermStructure, text: &str) -> ArgList {
        crate::syntax::parse_arg_list(text, s.language()).unwrap()
    }

    #[test]
    fn pushforward_renames_leaves() {
        let psi = swap_ab();
        let lam = parse_list(psi.source(), "*($a $b)");
        assert_eq!(psi.push_list(&lam).unwrap().to_string(), "*($b $a)");
    }

    #[test]
    fn pushforward_fixes_name_free_lists() {
        let strings = StringStructure::from_json_str(STRINGS_JSON).unwrap();
        let ident = StringMorphism::new(
            strings.clone(),
            strings.clone(),
            &[("a".to_string(), "a".to_string()), ("b".to_string(), "b".to_string())]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let lam = crate::syntax::parse_arg_list("[a b]", strings.language()).unwrap();
        assert_eq!(ident.push_list(&lam).unwrap(), lam);
    }

    #[test]
    fn pushforward_handles_repeated_names() {
        let psi = cycle_abc();
        let lam = parse_list(psi.source(), "*($a $a)");
        assert_eq!(psi.push_list(&lam).unwrap().to_string(), "*($b $b)");
    }

    #[test]
    fn identity_and_permutations_are_automorphisms() {
        let ident = FiniteMorphism::identity(&klein());
        assert_eq!(ident.is_homomorphism(), MorphismVerdict::ExactHomomorphism);
        assert_eq!(ident.is_isomorphism(), MorphismVerdict::ExactIsomorphism);
        for psi in [swap_ab(), cycle_abc()] {
            assert_eq!(psi.is_homomorphism(), MorphismVerdict::ExactHomomorphism);
            assert_eq!(psi.is_isomorphism(), MorphismVerdict::ExactIsomorphism);
        }
    }

    #[test]
    fn collapse_is_homomorphism_but_not_isomorphism() {
        let table: BTreeMap<String, String> = ["e", "a", "b", "c"]
            .iter()
            .map(|k| (k.to_string(), "u".to_string()))
            .collect();
        let psi = FiniteMorphism::new(klein(), one(), &table).unwrap();
        assert_eq!(psi.is_homomorphism(), MorphismVerdict::ExactHomomorphism);
        assert!(matches!(
            psi.is_isomorphism(),
            MorphismVerdict::Counterexample(MorphismWitness::NotInjective { .. })
        ));
    }

    #[test]
    fn predicate_only_forward_blocks_isomorphism() {
        let with_pred = |tuples: &str| {
            FiniteTermStructure::from_json_str(&format!(
                r#"{{ "language": {{ "alphabet": ["*"], "predicates": ["p"],
                      "grammar": {{"kind":"term","constants":[],"functions":{{"*":2}}}} }},
                     "universe": ["e","a","b","c"],
                     "names": {{"e":"$e","a":"$a","b":"$b","c":"$c"}},
                     "functions": {{"*": {{
                        "e,e":"e","e,a":"a","e,b":"b","e,c":"c",
                        "a,e":"a","a,a":"e","a,b":"c","a,c":"b",
                        "b,e":"b","b,a":"c","b,b":"e","b,c":"a",
                        "c,e":"c","c,a":"b","c,b":"a","c,c":"e" }} }},
                     "predicates": {{ "p/1": {tuples} }} }}"#
            ))
            .unwrap()
        };
        let source = with_pred("[]");
        let target = with_pred(r#"[["e"]]"#);
        let table: BTreeMap<String, String> = ["e", "a", "b", "c"]
            .iter()
            .map(|k| (k.to_string(), k.to_string()))
            .collect();
        let psi = FiniteMorphism::new(source, target, &table).unwrap();
        assert_eq!(psi.is_homomorphism(), MorphismVerdict::ExactHomomorphism);
        assert!(matches!(
            psi.is_isomorphism(),
            MorphismVerdict::Counterexample(MorphismWitness::PredicateBackward { .. })
        ));
    }

    #[test]
    fn composition_of_transpositions_is_a_cycle() {
        let ab = swap_ab();
        let bc = klein_map([("e", "e"), ("a", "a"), ("b", "c"), ("c", "b")]);
        // Applying (b c) first and (a b) second sends a->b, b->c, c->a.
        let composed = FiniteMorphism::compose(&ab, &bc).unwrap();
        assert_eq!(
            composed.table(),
            cycle_abc().table()
        );
        assert_eq!(composed.is_isomorphism(), MorphismVerdict::ExactIsomorphism);

        let ident = FiniteMorphism::identity(&klein());
        assert_eq!(
            FiniteMorphism::compose(&ident, &ab).unwrap().table(),
            ab.table()
        );
    }

    #[test]
    fn inverse_undoes_the_map() {
        let ident = FiniteMorphism::identity(&klein());
        assert_eq!(ident.invert().unwrap().table(), ident.table());

        let cycle = cycle_abc();
        let inv = cycle.invert().unwrap();
        assert_eq!(
            inv.table(),
            klein_map([("e", "e"), ("a", "c"), ("b", "a"), ("c", "b")]).table()
        );
        assert_eq!(
            FiniteMorphism::compose(&inv, &cycle).unwrap().table(),
            ident.table()
        );
        assert_eq!(
            FiniteMorphism::compose(&cycle, &inv).unwrap().table(),
            ident.table()
        );

        let table: BTreeMap<String, String> = ["e", "a", "b", "c"]
            .iter()
            .map(|k| (k.to_string(), "u".to_string()))
            .collect();
        let collapse = FiniteMorphism::new(klein(), one(), &table).unwrap();
        assert!(collapse.invert().is_err());
    }

    #[test]
    fn enumerates_klein_automorphisms() {
        let autos =
            enumerate_morphisms(&klein(), &klein(), MorphismSearch::Isomorphisms).unwrap();
        assert_eq!(autos.len(), 6);
        for psi in &autos {
            assert_eq!(psi.apply("e"), Some("e"));
        }

        let id_one = enumerate_morphisms(&one(), &one(), MorphismSearch::Isomorphisms).unwrap();
        assert_eq!(id_one.len(), 1);
        assert_eq!(id_one[0].table(), FiniteMorphism::identity(&one()).table());
    }

    #[test]
    fn homomorphism_enumeration_includes_constant_map() {
        let homs =
            enumerate_morphisms(&klein(), &klein(), MorphismSearch::Homomorphisms).unwrap();
        assert!(homs.len() >= 6);
        let constant_e = homs.iter().any(|m| {
            klein()
                .universe()
                .iter()
                .all(|u| m.apply(u) == Some("e"))
        });
        assert!(constant_e);
    }

    #[test]
    fn string_identity_verifies_boundedly_and_swap_fails() {
        let strings = StringStructure::from_json_str(STRINGS_JSON).unwrap();
        let make = |a: &str, b: &str| {
            StringMorphism::new(
                strings.clone(),
                strings.clone(),
                &[("a".to_string(), a.to_string()), ("b".to_string(), b.to_string())]
                    .into_iter()
                    .collect(),
            )
            .unwrap()
        };
        let ident = make("a", "b");
        assert_eq!(ident.is_homomorphism(3), MorphismVerdict::BoundedVerified(3));
        assert_eq!(ident.is_isomorphism(3), MorphismVerdict::BoundedVerified(3));

        // Swapping atoms is refuted on a bare one-atom list: the list keeps
        // its atom under the pushforward, while the map changes the value.
        let swap = make("b", "a");
        match swap.is_homomorphism(3) {
            MorphismVerdict::Counterexample(MorphismWitness::EvalMismatch { list, .. }) => {
                assert_eq!(list.to_string(), "[a]");
            }
            other => panic!("expected a mismatch, got {other:?}"),
        }
    }

    #[test]
    fn string_composition_and_inverse() {
        let strings = StringStructure::from_json_str(STRINGS_JSON).unwrap();
        let double = StringMorphism::new(
            strings.clone(),
            strings.clone(),
            &[("a".to_string(), "ab".to_string()), ("b".to_string(), "b".to_string())]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let composed = StringMorphism::compose(&double, &double).unwrap();
        assert_eq!(
            composed.apply(&GroundString(vec!["a".into()])).to_string(),
            "abb"
        );
        assert!(double.invert().is_err());
    }

    #[test]
    fn truth_transfer_along_automorphisms() {
        // A closed formula keeps its truth value when every name is
        // rewritten along an automorphism.
        let k = klein();
        let autos = enumerate_morphisms(&k, &k, MorphismSearch::Isomorphisms).unwrap();
        let formulas = [
            "~ *($a $b) , $c",
            "~ *($a $a) , $a",
            "ex x1 ~ *(x1 x1) , $e",
            "all x1 ~ *(x1 $e) , x1",
            "& ~ $a , $a ! ~ $a , $b",
        ];
        for text in formulas {
            let f = crate::syntax::parse_formula(text, k.language()).unwrap();
            for psi in &autos {
                let rename = |token: &str| {
                    let ix = k.elem_index_of_name(token).unwrap();
                    k.name_token(psi.apply_index(ix)).to_string()
                };
                let pushed = map_formula_names(&f, &rename);
                assert_eq!(
                    k.eval_closed(&f).unwrap(),
                    k.eval_closed(&pushed).unwrap(),
                    "{text}"
                );
            }
        }
    }

    fn map_formula_names(f: &Formula, rename: &impl Fn(&str) -> String) -> Formula {
        use crate::syntax::Formula::*;
        match f {
            Eq(a, b) => Eq(a.map_names(rename), b.map_names(rename)),
            Pred(p, args) => Pred(
                p.clone(),
                args.iter().map(|a| a.map_names(rename)).collect(),
            ),
            Not(g) => Formula::not(map_formula_names(g, rename)),
            Implies(a, b) => {
                Formula::implies(map_formula_names(a, rename), map_formula_names(b, rename))
            }
            Iff(a, b) => Formula::iff(map_formula_names(a, rename), map_formula_names(b, rename)),
            And(a, b) => Formula::and(map_formula_names(a, rename), map_formula_names(b, rename)),
            Or(a, b) => Formula::or(map_formula_names(a, rename), map_formula_names(b, rename)),
            ForAll(x, g) => Formula::forall(*x, map_formula_names(g, rename)),
            Exists(x, g) => Formula::exists(*x, map_formula_names(g, rename)),
        }
    }

    use crate::syntax::Formula;

    #[test]
    fn loads_morphism_files() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        let m = Morphism::load(&dir.join("klein_swap_ab.json")).unwrap();
        assert!(matches!(&m, Morphism::Finite(f) if f.is_isomorphism() == MorphismVerdict::ExactIsomorphism));

        let collapse = Morphism::load(&dir.join("klein_collapse.json")).unwrap();
        assert!(collapse.is_homomorphism(2).holds());
        assert!(!collapse.is_isomorphism(2).holds());
    }
}
