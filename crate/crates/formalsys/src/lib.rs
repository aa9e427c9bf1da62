//! A workbench for grammar-defined formal languages and their structures.
//!
//! The library covers the full pipeline from concrete syntax to semantic
//! checks: prefix-notation formulas over term or string grammars, name
//! extension, truth evaluation over finite term structures and string
//! structures, model checking against axiom files, homomorphisms and
//! isomorphisms with their pushforward on ground lists, bounded
//! enumeration of the valid-formula fragment of a structure, and a
//! hereditarily finite set engine.
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example klein_model_check
//! cargo run --example klein_automorphisms
//! cargo run --example pushforward
//! cargo run --example string_structures
//! cargo run --example henkin_fragment
//! cargo run --example hf_sets
//! cargo run --example language_membership
//! ```
//!
//! The same functionality is scriptable through the `formalsys` binary;
//! run `formalsys help` for the verb list and the exit-code contract.

pub mod cli;
pub mod henkin;
pub mod hfset;
pub mod language;
pub mod morphism;
pub mod structure;
pub mod syntax;

pub use henkin::{
    enumerate_closed_fragment, enumerate_fragment, enumerate_valid_fragment,
    fragment_consistency_report, henkin_witness, ConsistencyReport, FragmentBounds,
    FragmentPartition, HenkinError,
};
pub use hfset::{ConditionOutcome, HfError, HfSet, SubsetFriendlyReport, SubsetFriendlyViolation};
pub use language::{
    enumerate_ground, enumerate_lists, is_syntactic_extension, Grammar, LanguageError,
    LanguageFile, LanguageSpec, NameSet,
};
pub use morphism::{
    enumerate_morphisms, FiniteMorphism, Morphism, MorphismError, MorphismSearch,
    MorphismVerdict, MorphismWitness, StringMorphism,
};
pub use structure::{
    Condition4Bounds, Condition4Report, Condition4Violation, EvalError, EvalStats,
    FiniteTermStructure, GroundString, ModelVerdict, StringPredicate, StringStructure,
    Structure, StructureError, TruthValue,
};
pub use syntax::{
    parse_arg_list, parse_formula, skeleton, ArgList, Atom, Formula, ParseError, SyntaxError,
    VarId,
};
