//! Structures and models: evaluation of ground lists, truth of closed
//! formulas, validity, and model checking against axiom sets.
//!
//! Two kinds of structure are provided. A [`FiniteTermStructure`]
//! interprets a term grammar over a finite universe with total function
//! tables; quantifiers range over the finitely many names, which by name
//! bijectivity and surjectivity of evaluation decides them exactly. A
//! [`StringStructure`] interprets a string grammar over the infinite
//! universe of all ground strings; its quantifiers scan strings up to a
//! configured length and report `UnknownAtBound` when the scan is
//! inconclusive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::language::{
    enumerate_lists_truncated, segment_atoms, Grammar, LanguageError, LanguageFile, LanguageSpec,
    NameSet, DEFAULT_ENUMERATION_CAP,
};
use crate::syntax::{ArgList, Atom, Formula, VarId};

/// Truth value of a closed formula. `UnknownAtBound` arises only from
/// string-structure quantifiers whose bounded scan was inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    True,
    False,
    UnknownAtBound,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn is_true(self) -> bool {
        self == TruthValue::True
    }

    pub fn negate(self) -> Self {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::UnknownAtBound => TruthValue::UnknownAtBound,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::True => write!(f, "TRUE"),
            TruthValue::False => write!(f, "FALSE"),
            TruthValue::UnknownAtBound => write!(f, "UNKNOWN-AT-BOUND"),
        }
    }
}

/// Errors raised by evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("list contains variables: {0}")]
    NotGround(String),
    #[error("formula is not closed: {0}")]
    NotClosed(String),
    #[error("not in the structure's language: {0}")]
    NotInLanguage(String),
}

/// Errors raised while loading or validating structure definitions.
#[derive(Debug, Error)]
pub enum StructureError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid json in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error("invalid structure definition: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> StructureError {
    StructureError::Invalid(msg.into())
}

/// Counters for the work done by one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Number of equality and predicate evaluations performed.
    pub atomic_evals: usize,
}

/// Common interpretation interface used by the shared formula evaluator.
pub(crate) trait Domain {
    type Elem: Clone + Eq + Ord + fmt::Display + fmt::Debug;

    fn eval(&self, list: &ArgList) -> Result<Self::Elem, EvalError>;
    fn nullary(&self, pred: &str) -> Result<bool, EvalError>;
    fn holds(&self, pred: &str, args: &[Self::Elem]) -> Result<bool, EvalError>;
    /// Name tokens scanned by quantifiers, in a fixed order.
    fn witnesses(&self) -> Vec<String>;
    /// Whether the witness scan covers the whole universe.
    fn exhaustive(&self) -> bool;
}

pub(crate) struct Evaluator<'a, D: Domain> {
    domain: &'a D,
    pub stats: EvalStats,
}

impl<'a, D: Domain> Evaluator<'a, D> {
    pub fn new(domain: &'a D) -> Self {
        Evaluator {
            domain,
            stats: EvalStats::default(),
        }
    }

    pub fn eval_closed(&mut self, formula: &Formula) -> Result<TruthValue, EvalError> {
        if !formula.is_closed() {
            return Err(EvalError::NotClosed(formula.to_string()));
        }
        self.eval(formula)
    }

    fn eval(&mut self, formula: &Formula) -> Result<TruthValue, EvalError> {
        use TruthValue::*;
        match formula {
            Formula::Eq(a, b) => {
                self.stats.atomic_evals += 1;
                Ok(TruthValue::from_bool(
                    self.domain.eval(a)? == self.domain.eval(b)?,
                ))
            }
            Formula::Pred(p, args) => {
                self.stats.atomic_evals += 1;
                if args.is_empty() {
                    Ok(TruthValue::from_bool(self.domain.nullary(p)?))
                } else {
                    let values: Vec<D::Elem> = args
                        .iter()
                        .map(|a| self.domain.eval(a))
                        .collect::<Result<_, _>>()?;
                    Ok(TruthValue::from_bool(self.domain.holds(p, &values)?))
                }
            }
            Formula::Not(f) => Ok(self.eval(f)?.negate()),
            Formula::And(a, b) => match self.eval(a)? {
                False => Ok(False),
                True => self.eval(b),
                UnknownAtBound => Ok(match self.eval(b)? {
                    False => False,
                    _ => UnknownAtBound,
                }),
            },
            Formula::Or(a, b) => match self.eval(a)? {
                True => Ok(True),
                False => self.eval(b),
                UnknownAtBound => Ok(match self.eval(b)? {
                    True => True,
                    _ => UnknownAtBound,
                }),
            },
            Formula::Implies(a, b) => match self.eval(a)? {
                False => Ok(True),
                True => self.eval(b),
                UnknownAtBound => Ok(match self.eval(b)? {
                    True => True,
                    _ => UnknownAtBound,
                }),
            },
            Formula::Iff(a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                Ok(match (va, vb) {
                    (UnknownAtBound, _) | (_, UnknownAtBound) => UnknownAtBound,
                    (x, y) => TruthValue::from_bool(x == y),
                })
            }
            Formula::ForAll(x, body) => {
                let mut unknown = false;
                for token in self.domain.witnesses() {
                    let inst = body
                        .subst_var(*x, &ArgList::name(token))
                        .expect("names are ground");
                    match self.eval(&inst)? {
                        False => return Ok(False),
                        UnknownAtBound => unknown = true,
                        True => {}
                    }
                }
                if self.domain.exhaustive() && !unknown {
                    Ok(True)
                } else {
                    Ok(UnknownAtBound)
                }
            }
            Formula::Exists(x, body) => {
                let mut unknown = false;
                for token in self.domain.witnesses() {
                    let inst = body
                        .subst_var(*x, &ArgList::name(token))
                        .expect("names are ground");
                    match self.eval(&inst)? {
                        True => return Ok(True),
                        UnknownAtBound => unknown = true,
                        False => {}
                    }
                }
                if self.domain.exhaustive() && !unknown {
                    Ok(False)
                } else {
                    Ok(UnknownAtBound)
                }
            }
        }
    }
}

/// Outcome of checking a structure against a list of axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelVerdict {
    Model {
        axioms_checked: usize,
    },
    /// First failing axiom with a falsifying assignment of names to its
    /// free variables (empty for a closed axiom).
    Counterexample {
        axiom_index: usize,
        axiom: Formula,
        assignment: Vec<(VarId, String)>,
    },
    /// A string-structure quantifier scan was inconclusive for this axiom.
    UnknownAtBound {
        axiom_index: usize,
        axiom: Formula,
    },
}

/// Bounds for the substitution-commutation check.
#[derive(Clone, Copy, Debug)]
pub struct Condition4Bounds {
    /// Depth (terms) or length (strings) bound for the one-variable list.
    pub lambda_bound: usize,
    /// Depth or length bound for the ground substituent.
    pub mu_bound: usize,
    /// Cap on the number of pairs checked; scanning stops there.
    pub max_pairs: usize,
}

impl Default for Condition4Bounds {
    fn default() -> Self {
        Condition4Bounds {
            lambda_bound: 2,
            mu_bound: 1,
            max_pairs: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Report of the substitution-commutation check: for every enumerated pair
/// it compares evaluating `lambda` with `mu` substituted against
/// evaluating `lambda` with the name of `mu`'s value substituted.
#[derive(Clone, Debug, Default)]
pub struct Condition4Report {
    pub pairs_checked: usize,
    pub truncated: bool,
    pub violations: Vec<Condition4Violation>,
}

#[derive(Clone, Debug)]
pub struct Condition4Violation {
    pub lambda: ArgList,
    pub mu: ArgList,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Condition4Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lambda: {} mu: {} lhs: {} rhs: {}",
            self.lambda, self.mu, self.lhs, self.rhs
        )
    }
}

fn run_condition4<E: Clone + Eq + fmt::Display>(
    lambdas: &[ArgList],
    mus: &[ArgList],
    max_pairs: usize,
    eval: &dyn Fn(&ArgList) -> Result<E, EvalError>,
    name_of: &dyn Fn(&E) -> String,
) -> Condition4Report {
    let x = VarId(1);
    let mut report = Condition4Report::default();
    let render = |r: Result<E, EvalError>| match r {
        Ok(v) => (v.to_string(), Some(v)),
        Err(e) => (format!("<error: {e}>"), None),
    };
    'outer: for lambda in lambdas {
        for mu in mus {
            if report.pairs_checked == max_pairs {
                report.truncated = true;
                break 'outer;
            }
            report.pairs_checked += 1;
            let substituted = lambda.subst_var(x, mu);
            let (lhs_str, lhs) = render(eval(&substituted));
            let (rhs_str, rhs) = match eval(mu) {
                Ok(mu_value) => {
                    let via_name =
                        lambda.subst_var(x, &ArgList::name(name_of(&mu_value)));
                    render(eval(&via_name))
                }
                Err(e) => (format!("<error: {e}>"), None),
            };
            let agree = matches!((&lhs, &rhs), (Some(a), Some(b)) if a == b);
            if !agree {
                report.violations.push(Condition4Violation {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                    lhs: lhs_str,
                    rhs: rhs_str,
                });
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Finite term structures
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
struct FuncTable {
    arity: usize,
    /// Row-major values over universe indices; total by construction.
    values: Vec<usize>,
}

/// A structure for a term language over a finite universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTermStructure {
    language: LanguageSpec,
    universe: Vec<String>,
    elem_ix: BTreeMap<String, usize>,
    /// Name token of each universe element, by index.
    name_tokens: Vec<String>,
    name_ix: BTreeMap<String, usize>,
    const_values: BTreeMap<String, usize>,
    func_tables: BTreeMap<String, FuncTable>,
    pred_tables: BTreeMap<(String, usize), BTreeSet<Vec<usize>>>,
    pred_nullary: BTreeMap<String, bool>,
}

/// On-disk form of a finite term structure.
#[derive(Debug, Clone, Deserialize)]
pub struct FiniteStructureDef {
    pub language: serde_json::Value,
    pub universe: Vec<String>,
    pub names: BTreeMap<String, String>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
    #[serde(default)]
    pub functions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub predicates: BTreeMap<String, serde_json::Value>,
}

fn parse_pred_key(key: &str) -> Result<(String, usize), StructureError> {
    let (name, arity) = key
        .rsplit_once('/')
        .ok_or_else(|| invalid(format!("predicate key '{key}' must be written name/arity")))?;
    let arity: usize = arity
        .parse()
        .map_err(|_| invalid(format!("bad arity in predicate key '{key}'")))?;
    Ok((name.to_string(), arity))
}

impl FiniteTermStructure {
    pub fn from_def(
        def: FiniteStructureDef,
        base_dir: Option<&Path>,
        tag: &str,
    ) -> Result<Self, StructureError> {
        let language = load_language_value(&def.language, base_dir)?;
        let (constants_decl, functions_decl) = match language.grammar() {
            Grammar::Term {
                constants,
                functions,
            } => (constants.clone(), functions.clone()),
            Grammar::Strings { .. } => {
                return Err(invalid("finite term structures need a term grammar"))
            }
        };

        if def.universe.is_empty() {
            return Err(invalid("universe must be nonempty"));
        }
        let mut elem_ix = BTreeMap::new();
        for (i, id) in def.universe.iter().enumerate() {
            if id.is_empty() || id.contains(',') || id.chars().any(char::is_whitespace) {
                return Err(invalid(format!("bad universe element id '{id}'")));
            }
            if elem_ix.insert(id.clone(), i).is_some() {
                return Err(invalid(format!("duplicate universe element '{id}'")));
            }
        }

        // One name per element, bijectively.
        let mut name_tokens = vec![String::new(); def.universe.len()];
        let mut name_ix = BTreeMap::new();
        for (elem, token) in &def.names {
            let &ix = elem_ix
                .get(elem)
                .ok_or_else(|| invalid(format!("name given for unknown element '{elem}'")))?;
            if !token.starts_with('$') || token.len() < 2 {
                return Err(invalid(format!("name token '{token}' must be $ident")));
            }
            if name_ix.insert(token.clone(), ix).is_some() {
                return Err(invalid(format!("duplicate name token '{token}'")));
            }
            name_tokens[ix] = token.clone();
        }
        if let Some(missing) = name_tokens.iter().position(String::is_empty) {
            return Err(invalid(format!(
                "element '{}' has no name",
                def.universe[missing]
            )));
        }
        // Lexical disjointness of names from the language's symbols holds
        // because symbols cannot start with '$'; assert it anyway.
        for token in name_ix.keys() {
            if language.alphabet().contains(token) || language.predicates().contains(token) {
                return Err(invalid(format!("name '{token}' collides with a symbol")));
            }
        }

        let mut const_values = BTreeMap::new();
        for (c, v) in &def.constants {
            if !constants_decl.contains(c) {
                return Err(invalid(format!("'{c}' is not a constant of the language")));
            }
            let &ix = elem_ix
                .get(v)
                .ok_or_else(|| invalid(format!("constant '{c}' maps to unknown element '{v}'")))?;
            const_values.insert(c.clone(), ix);
        }
        for c in &constants_decl {
            if !const_values.contains_key(c) {
                return Err(invalid(format!("constant '{c}' has no value")));
            }
        }

        let n = def.universe.len();
        let mut func_tables = BTreeMap::new();
        for (f, table) in &def.functions {
            let &arity = functions_decl
                .get(f)
                .ok_or_else(|| invalid(format!("'{f}' is not a function of the language")))?;
            let size = n.pow(arity as u32);
            let mut values = vec![usize::MAX; size];
            for (key, value) in table {
                let parts: Vec<&str> = key.split(',').map(str::trim).collect();
                if parts.len() != arity {
                    return Err(invalid(format!(
                        "table key '{key}' for '{f}' must list {arity} elements"
                    )));
                }
                let mut flat = 0usize;
                for part in &parts {
                    let &ix = elem_ix
                        .get(*part)
                        .ok_or_else(|| invalid(format!("unknown element '{part}' in '{key}'")))?;
                    flat = flat * n + ix;
                }
                let &out = elem_ix.get(value).ok_or_else(|| {
                    invalid(format!("table value '{value}' is not a universe element"))
                })?;
                if values[flat] != usize::MAX {
                    return Err(invalid(format!("duplicate table entry '{key}' for '{f}'")));
                }
                values[flat] = out;
            }
            if values.contains(&usize::MAX) {
                return Err(invalid(format!(
                    "function table for '{f}' is not total on the universe"
                )));
            }
            func_tables.insert(f.clone(), FuncTable { arity, values });
        }
        for f in functions_decl.keys() {
            if !func_tables.contains_key(f) {
                return Err(invalid(format!("function '{f}' has no table")));
            }
        }

        let mut pred_tables = BTreeMap::new();
        let mut pred_nullary = BTreeMap::new();
        for (key, value) in &def.predicates {
            let (p, arity) = parse_pred_key(key)?;
            if !language.predicates().contains(&p) {
                return Err(invalid(format!("'{p}' is not a predicate of the language")));
            }
            if arity == 0 {
                let b = value
                    .as_bool()
                    .ok_or_else(|| invalid(format!("'{key}' must map to true or false")))?;
                pred_nullary.insert(p, b);
            } else {
                let rows = value
                    .as_array()
                    .ok_or_else(|| invalid(format!("'{key}' must map to an array of tuples")))?;
                let mut set = BTreeSet::new();
                for row in rows {
                    let tuple = row
                        .as_array()
                        .ok_or_else(|| invalid(format!("tuple in '{key}' must be an array")))?;
                    if tuple.len() != arity {
                        return Err(invalid(format!("tuple arity mismatch in '{key}'")));
                    }
                    let mut ixs = Vec::with_capacity(arity);
                    for v in tuple {
                        let id = v
                            .as_str()
                            .ok_or_else(|| invalid(format!("tuple entry in '{key}' must be a string")))?;
                        let &ix = elem_ix
                            .get(id)
                            .ok_or_else(|| invalid(format!("unknown element '{id}' in '{key}'")))?;
                        ixs.push(ix);
                    }
                    set.insert(ixs);
                }
                pred_tables.insert((p, arity), set);
            }
        }

        let structure = FiniteTermStructure {
            language: language.base(),
            universe: def.universe,
            elem_ix,
            name_tokens,
            name_ix,
            const_values,
            func_tables,
            pred_tables,
            pred_nullary,
        };
        // Name bijectivity means every name evaluates to its own element.
        for (ix, token) in structure.name_tokens.iter().enumerate() {
            debug_assert_eq!(structure.name_ix[token], ix);
        }
        let _ = tag;
        Ok(structure)
    }

    pub fn from_json_str(json: &str) -> Result<Self, StructureError> {
        let def: FiniteStructureDef = serde_json::from_str(json).map_err(|source| {
            StructureError::Json {
                path: "<inline>".into(),
                source,
            }
        })?;
        Self::from_def(def, None, "inline")
    }

    pub fn language(&self) -> &LanguageSpec {
        &self.language
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    /// The structure's names in universe order.
    pub fn name_set(&self) -> NameSet {
        NameSet::finite(self.name_tokens.clone(), self.universe.join(","))
    }

    /// The language extended with this structure's names.
    pub fn hat_language(&self) -> LanguageSpec {
        self.language
            .hat_extend(self.name_set())
            .expect("structure names are collision-checked at construction")
    }

    pub fn name_token(&self, elem_index: usize) -> &str {
        &self.name_tokens[elem_index]
    }

    pub fn elem_index(&self, id: &str) -> Option<usize> {
        self.elem_ix.get(id).copied()
    }

    pub fn elem_index_of_name(&self, token: &str) -> Option<usize> {
        self.name_ix.get(token).copied()
    }

    pub fn function_value(&self, symbol: &str, args: &[usize]) -> Option<usize> {
        let table = self.func_tables.get(symbol)?;
        if table.arity != args.len() {
            return None;
        }
        let n = self.universe.len();
        let mut flat = 0usize;
        for &a in args {
            flat = flat * n + a;
        }
        table.values.get(flat).copied()
    }

    pub fn constant_value(&self, symbol: &str) -> Option<usize> {
        self.const_values.get(symbol).copied()
    }

    /// Declared positive-arity predicate tables.
    pub fn pred_arities(&self) -> Vec<(String, usize)> {
        self.pred_tables.keys().cloned().collect()
    }

    pub fn pred_table(&self, pred: &str, arity: usize) -> Option<&BTreeSet<Vec<usize>>> {
        self.pred_tables.get(&(pred.to_string(), arity))
    }

    pub fn pred_nullary_value(&self, pred: &str) -> bool {
        self.pred_nullary.get(pred).copied().unwrap_or(false)
    }

    pub(crate) fn eval_ix(&self, list: &ArgList) -> Result<usize, EvalError> {
        match list {
            ArgList::Leaf(Atom::Var(_)) => Err(EvalError::NotGround(list.to_string())),
            ArgList::Leaf(Atom::Name(token)) => self
                .name_ix
                .get(token)
                .copied()
                .ok_or_else(|| EvalError::NotInLanguage(format!("unknown name '{token}'"))),
            ArgList::Leaf(Atom::Sym(sym)) => self
                .const_values
                .get(sym)
                .copied()
                .ok_or_else(|| EvalError::NotInLanguage(format!("'{sym}' is not a constant"))),
            ArgList::Apply(f, children) => {
                let values: Vec<usize> = children
                    .iter()
                    .map(|c| self.eval_ix(c))
                    .collect::<Result<_, _>>()?;
                self.function_value(f, &values).ok_or_else(|| {
                    EvalError::NotInLanguage(format!("no {}-ary function '{f}'", children.len()))
                })
            }
            ArgList::Concat(_) => Err(EvalError::NotInLanguage(
                "strings do not belong to a term grammar".into(),
            )),
        }
    }

    /// Evaluates a ground list to its universe element.
    pub fn eval_list(&self, list: &ArgList) -> Result<&str, EvalError> {
        Ok(&self.universe[self.eval_ix(list)?])
    }

    pub fn eval_closed(&self, formula: &Formula) -> Result<TruthValue, EvalError> {
        Ok(self.eval_closed_with_stats(formula)?.0)
    }

    /// Evaluates a closed formula and reports the work done.
    pub fn eval_closed_with_stats(
        &self,
        formula: &Formula,
    ) -> Result<(TruthValue, EvalStats), EvalError> {
        let mut evaluator = Evaluator::new(self);
        let value = evaluator.eval_closed(formula)?;
        Ok((value, evaluator.stats))
    }

    /// Truth of the universal closure over the formula's free variables.
    pub fn is_valid(&self, formula: &Formula) -> Result<TruthValue, EvalError> {
        self.eval_closed(&formula.universal_closure())
    }

    pub fn is_valid_with_stats(
        &self,
        formula: &Formula,
    ) -> Result<(TruthValue, EvalStats), EvalError> {
        self.eval_closed_with_stats(&formula.universal_closure())
    }

    /// Checks every axiom for validity; the first failure is returned with
    /// a falsifying name assignment.
    pub fn is_model(&self, axioms: &[Formula]) -> Result<ModelVerdict, EvalError> {
        is_model_generic(self, axioms)
    }

    /// Searches a falsifying assignment of names to the free variables.
    pub fn falsifying_assignment(
        &self,
        formula: &Formula,
    ) -> Result<Option<Vec<(VarId, String)>>, EvalError> {
        falsifying_assignment_generic(self, formula)
    }

    /// Substitution-commutation check over enumerated pairs.
    pub fn check_condition4(&self, bounds: &Condition4Bounds) -> Condition4Report {
        self.check_condition4_with(bounds, &|list| self.eval_list(list).map(str::to_string))
    }

    /// Same check against a caller-supplied evaluation, used to validate
    /// the check itself against deliberately broken evaluators.
    pub fn check_condition4_with(
        &self,
        bounds: &Condition4Bounds,
        eval: &dyn Fn(&ArgList) -> Result<String, EvalError>,
    ) -> Condition4Report {
        let names = self.name_set();
        let (lambdas, lambdas_cut) = enumerate_lists_truncated(
            &self.language,
            Some(&names),
            bounds.lambda_bound,
            &[VarId(1)],
            bounds.max_pairs,
        );
        let (mus, mus_cut) = enumerate_lists_truncated(
            &self.language,
            Some(&names),
            bounds.mu_bound,
            &[],
            bounds.max_pairs,
        );
        let mut report = run_condition4(&lambdas, &mus, bounds.max_pairs, eval, &|id| {
            let ix = self.elem_ix[id.as_str()];
            self.name_tokens[ix].clone()
        });
        report.truncated |= lambdas_cut || mus_cut;
        report
    }

    /// Randomized substitution-commutation spot checks beyond the
    /// exhaustive bounds; deterministic for a fixed seed.
    pub fn check_condition4_sampled(
        &self,
        bounds: &Condition4Bounds,
        samples: usize,
        seed: u64,
    ) -> Condition4Report {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lambdas = Vec::with_capacity(samples);
        let mut mus = Vec::with_capacity(samples);
        for _ in 0..samples {
            lambdas.push(self.random_list(&mut rng, bounds.lambda_bound + 2, true));
            mus.push(self.random_list(&mut rng, bounds.mu_bound + 2, false));
        }
        let x = VarId(1);
        let mut report = Condition4Report::default();
        for (lambda, mu) in lambdas.iter().zip(&mus) {
            report.pairs_checked += 1;
            let lhs = self.eval_list(&lambda.subst_var(x, mu)).map(str::to_string);
            let rhs = self.eval_ix(mu).and_then(|ix| {
                self.eval_list(&lambda.subst_var(x, &ArgList::name(self.name_tokens[ix].clone())))
                    .map(str::to_string)
            });
            match (lhs, rhs) {
                (Ok(a), Ok(b)) if a == b => {}
                (l, r) => report.violations.push(Condition4Violation {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                    lhs: l.unwrap_or_else(|e| format!("<error: {e}>")),
                    rhs: r.unwrap_or_else(|e| format!("<error: {e}>")),
                }),
            }
        }
        report
    }

    fn random_list(&self, rng: &mut ChaCha8Rng, depth: usize, with_var: bool) -> ArgList {
        let functions: Vec<(&String, &usize)> = match self.language.grammar() {
            Grammar::Term { functions, .. } => functions.iter().collect(),
            Grammar::Strings { .. } => unreachable!("finite structures use term grammars"),
        };
        if depth == 0 || functions.is_empty() || rng.gen_bool(0.3) {
            if with_var && rng.gen_bool(0.3) {
                return ArgList::var(1);
            }
            let ix = rng.gen_range(0..self.universe.len());
            return ArgList::name(self.name_tokens[ix].clone());
        }
        let (f, &arity) = functions[rng.gen_range(0..functions.len())];
        let children = (0..arity)
            .map(|_| self.random_list(rng, depth - 1, with_var))
            .collect();
        ArgList::Apply(f.clone(), children)
    }
}

impl Domain for FiniteTermStructure {
    type Elem = usize;

    fn eval(&self, list: &ArgList) -> Result<usize, EvalError> {
        self.eval_ix(list)
    }

    fn nullary(&self, pred: &str) -> Result<bool, EvalError> {
        if !self.language.predicates().contains(pred) {
            return Err(EvalError::NotInLanguage(format!("unknown predicate '{pred}'")));
        }
        Ok(self.pred_nullary_value(pred))
    }

    fn holds(&self, pred: &str, args: &[usize]) -> Result<bool, EvalError> {
        if !self.language.predicates().contains(pred) {
            return Err(EvalError::NotInLanguage(format!("unknown predicate '{pred}'")));
        }
        // Undeclared arities denote the empty relation.
        Ok(self
            .pred_tables
            .get(&(pred.to_string(), args.len()))
            .map(|set| set.contains(args))
            .unwrap_or(false))
    }

    fn witnesses(&self) -> Vec<String> {
        self.name_tokens.clone()
    }

    fn exhaustive(&self) -> bool {
        true
    }
}

// ---------------------------------------------------------------------------
// String structures
// ---------------------------------------------------------------------------

/// A ground string: a sequence of atom tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundString(pub Vec<String>);

impl GroundString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &GroundString) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for GroundString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.concat())
    }
}

/// Built-in decidable predicate families for string structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StringPredicate {
    /// Arity 2: both strings have the same length.
    EqualLength,
    /// Arity 2: the first string is a prefix of the second.
    IsPrefix,
    /// Arity 1: the string equals the given literal.
    EqualsLiteral(GroundString),
    /// Arity 2: both strings are equal.
    SameString,
}

impl StringPredicate {
    fn arity(&self) -> usize {
        match self {
            StringPredicate::EqualsLiteral(_) => 1,
            _ => 2,
        }
    }

    fn holds(&self, args: &[GroundString]) -> bool {
        match self {
            StringPredicate::EqualLength => args[0].len() == args[1].len(),
            StringPredicate::IsPrefix => args[0].is_prefix_of(&args[1]),
            StringPredicate::EqualsLiteral(lit) => &args[0] == lit,
            StringPredicate::SameString => args[0] == args[1],
        }
    }
}

/// A structure whose universe is the set of all ground strings over an
/// atom alphabet; evaluation replaces every name by its underlying string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringStructure {
    language: LanguageSpec,
    atoms: BTreeSet<String>,
    pred_defs: BTreeMap<(String, usize), StringPredicate>,
    pred_nullary: BTreeMap<String, bool>,
    quant_bound: usize,
}

/// On-disk form of a string structure.
#[derive(Debug, Clone, Deserialize)]
pub struct StringStructureDef {
    pub kind: String,
    pub atoms: Vec<String>,
    #[serde(default)]
    pub predicates: BTreeMap<String, serde_json::Value>,
    #[serde(rename = "quantBound", default = "default_quant_bound")]
    pub quant_bound: usize,
}

fn default_quant_bound() -> usize {
    4
}

impl StringStructure {
    pub fn from_def(def: StringStructureDef) -> Result<Self, StructureError> {
        if def.kind != "string" {
            return Err(invalid(format!("unknown structure kind '{}'", def.kind)));
        }
        let atoms: BTreeSet<String> = def.atoms.iter().cloned().collect();
        if atoms.is_empty() {
            return Err(invalid("string structures need at least one atom"));
        }
        // Prefix-free atoms make the string encoded in a name token
        // uniquely decodable, which keeps the name map bijective.
        for a in &atoms {
            for b in &atoms {
                if a != b && b.starts_with(a.as_str()) {
                    return Err(invalid(format!("atom '{a}' is a prefix of atom '{b}'")));
                }
            }
        }

        let mut pred_defs = BTreeMap::new();
        let mut pred_nullary = BTreeMap::new();
        let mut pred_names = BTreeSet::new();
        for (key, value) in &def.predicates {
            let (p, arity) = parse_pred_key(key)?;
            pred_names.insert(p.clone());
            if arity == 0 {
                let b = value
                    .as_bool()
                    .ok_or_else(|| invalid(format!("'{key}' must map to true or false")))?;
                pred_nullary.insert(p, b);
                continue;
            }
            let spec = value
                .as_str()
                .ok_or_else(|| invalid(format!("'{key}' must name a built-in predicate")))?;
            let family = match spec.split_once(':') {
                Some(("EqualsLiteral", lit)) => {
                    let decoded = segment_atoms(lit, &atoms).ok_or_else(|| {
                        invalid(format!("literal '{lit}' is not a string over the atoms"))
                    })?;
                    StringPredicate::EqualsLiteral(GroundString(decoded))
                }
                None => match spec {
                    "EqualLength" => StringPredicate::EqualLength,
                    "IsPrefix" => StringPredicate::IsPrefix,
                    "SameString" => StringPredicate::SameString,
                    other => return Err(invalid(format!("unknown predicate family '{other}'"))),
                },
                Some((other, _)) => {
                    return Err(invalid(format!("unknown predicate family '{other}'")))
                }
            };
            if family.arity() != arity {
                return Err(invalid(format!(
                    "'{key}' declares arity {arity} but the family has arity {}",
                    family.arity()
                )));
            }
            pred_defs.insert((p, arity), family);
        }

        let language = LanguageSpec::new(
            atoms.clone(),
            pred_names,
            Grammar::Strings {
                atoms: atoms.clone(),
                atoms_are_lists: true,
            },
        )?;
        Ok(StringStructure {
            language,
            atoms,
            pred_defs,
            pred_nullary,
            quant_bound: def.quant_bound,
        })
    }

    pub fn from_json_str(json: &str) -> Result<Self, StructureError> {
        let def: StringStructureDef =
            serde_json::from_str(json).map_err(|source| StructureError::Json {
                path: "<inline>".into(),
                source,
            })?;
        Self::from_def(def)
    }

    pub fn language(&self) -> &LanguageSpec {
        &self.language
    }

    pub fn quant_bound(&self) -> usize {
        self.quant_bound
    }

    /// Declared positive-arity predicate families.
    pub fn pred_families(&self) -> Vec<((String, usize), StringPredicate)> {
        self.pred_defs
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    pub fn name_set(&self) -> NameSet {
        NameSet::StringNames {
            atoms: self.atoms.clone(),
            universe_tag: format!("strings({})", self.atoms.iter().cloned().collect::<Vec<_>>().join(",")),
        }
    }

    pub fn hat_language(&self) -> LanguageSpec {
        self.language
            .hat_extend(self.name_set())
            .expect("string names cannot collide with symbols")
    }

    /// The name token of a ground string.
    pub fn name_of(&self, s: &GroundString) -> String {
        format!("${}", s.0.concat())
    }

    /// Decodes a name token back into the string it denotes.
    pub fn string_of_name(&self, token: &str) -> Option<GroundString> {
        let ident = token.strip_prefix('$')?;
        if ident.is_empty() {
            return None;
        }
        segment_atoms(ident, &self.atoms).map(GroundString)
    }

    /// Evaluates a ground list by replacing every name with its string
    /// and concatenating.
    pub fn eval_list(&self, list: &ArgList) -> Result<GroundString, EvalError> {
        let mut out = Vec::new();
        self.eval_into(list, &mut out)?;
        if out.is_empty() {
            return Err(EvalError::NotInLanguage("empty string".into()));
        }
        Ok(GroundString(out))
    }

    fn eval_into(&self, list: &ArgList, out: &mut Vec<String>) -> Result<(), EvalError> {
        match list {
            ArgList::Leaf(Atom::Var(_)) => Err(EvalError::NotGround(list.to_string())),
            ArgList::Leaf(Atom::Sym(a)) => {
                if self.atoms.contains(a) {
                    out.push(a.clone());
                    Ok(())
                } else {
                    Err(EvalError::NotInLanguage(format!("unknown atom '{a}'")))
                }
            }
            ArgList::Leaf(Atom::Name(token)) => {
                let s = self.string_of_name(token).ok_or_else(|| {
                    EvalError::NotInLanguage(format!("name '{token}' does not denote a string"))
                })?;
                out.extend(s.0);
                Ok(())
            }
            ArgList::Concat(children) => {
                for c in children {
                    self.eval_into(c, out)?;
                }
                Ok(())
            }
            ArgList::Apply(..) => Err(EvalError::NotInLanguage(
                "function application does not belong to a string grammar".into(),
            )),
        }
    }

    /// All ground strings of length up to the quantifier bound, shortest
    /// first, atoms in sorted order.
    pub fn bounded_universe(&self) -> Vec<GroundString> {
        let mut out = Vec::new();
        let mut current: Vec<Vec<String>> = vec![vec![]];
        for _ in 0..self.quant_bound {
            let mut next = Vec::new();
            for prefix in &current {
                for a in &self.atoms {
                    let mut s = prefix.clone();
                    s.push(a.clone());
                    next.push(s);
                }
            }
            out.extend(next.iter().cloned().map(GroundString));
            current = next;
        }
        out
    }

    pub fn eval_closed(&self, formula: &Formula) -> Result<TruthValue, EvalError> {
        Ok(self.eval_closed_with_stats(formula)?.0)
    }

    pub fn eval_closed_with_stats(
        &self,
        formula: &Formula,
    ) -> Result<(TruthValue, EvalStats), EvalError> {
        let mut evaluator = Evaluator::new(self);
        let value = evaluator.eval_closed(formula)?;
        Ok((value, evaluator.stats))
    }

    pub fn is_valid(&self, formula: &Formula) -> Result<TruthValue, EvalError> {
        self.eval_closed(&formula.universal_closure())
    }

    pub fn is_model(&self, axioms: &[Formula]) -> Result<ModelVerdict, EvalError> {
        is_model_generic(self, axioms)
    }

    pub fn check_condition4(&self, bounds: &Condition4Bounds) -> Condition4Report {
        self.check_condition4_with(bounds, &|list| self.eval_list(list))
    }

    pub fn check_condition4_with(
        &self,
        bounds: &Condition4Bounds,
        eval: &dyn Fn(&ArgList) -> Result<GroundString, EvalError>,
    ) -> Condition4Report {
        let names = self.name_set();
        let (lambdas, lambdas_cut) = enumerate_lists_truncated(
            &self.language,
            Some(&names),
            bounds.lambda_bound,
            &[VarId(1)],
            bounds.max_pairs,
        );
        let (mus, mus_cut) = enumerate_lists_truncated(
            &self.language,
            Some(&names),
            bounds.mu_bound,
            &[],
            bounds.max_pairs,
        );
        let mut report =
            run_condition4(&lambdas, &mus, bounds.max_pairs, eval, &|s| self.name_of(s));
        report.truncated |= lambdas_cut || mus_cut;
        report
    }
}

impl Domain for StringStructure {
    type Elem = GroundString;

    fn eval(&self, list: &ArgList) -> Result<GroundString, EvalError> {
        self.eval_list(list)
    }

    fn nullary(&self, pred: &str) -> Result<bool, EvalError> {
        if !self.language.predicates().contains(pred) {
            return Err(EvalError::NotInLanguage(format!("unknown predicate '{pred}'")));
        }
        Ok(self.pred_nullary.get(pred).copied().unwrap_or(false))
    }

    fn holds(&self, pred: &str, args: &[GroundString]) -> Result<bool, EvalError> {
        if !self.language.predicates().contains(pred) {
            return Err(EvalError::NotInLanguage(format!("unknown predicate '{pred}'")));
        }
        Ok(self
            .pred_defs
            .get(&(pred.to_string(), args.len()))
            .map(|family| family.holds(args))
            .unwrap_or(false))
    }

    fn witnesses(&self) -> Vec<String> {
        self.bounded_universe()
            .iter()
            .map(|s| self.name_of(s))
            .collect()
    }

    fn exhaustive(&self) -> bool {
        false
    }
}

// ---------------------------------------------------------------------------
// Shared model checking
// ---------------------------------------------------------------------------

fn is_model_generic<D: Domain>(domain: &D, axioms: &[Formula]) -> Result<ModelVerdict, EvalError> {
    for (i, axiom) in axioms.iter().enumerate() {
        let mut evaluator = Evaluator::new(domain);
        match evaluator.eval_closed(&axiom.universal_closure())? {
            TruthValue::True => {}
            TruthValue::UnknownAtBound => {
                return Ok(ModelVerdict::UnknownAtBound {
                    axiom_index: i,
                    axiom: axiom.clone(),
                })
            }
            TruthValue::False => {
                let assignment = falsifying_assignment_generic(domain, axiom)?
                    .expect("a refuted closure has a falsifying name assignment");
                return Ok(ModelVerdict::Counterexample {
                    axiom_index: i,
                    axiom: axiom.clone(),
                    assignment,
                });
            }
        }
    }
    Ok(ModelVerdict::Model {
        axioms_checked: axioms.len(),
    })
}

fn falsifying_assignment_generic<D: Domain>(
    domain: &D,
    formula: &Formula,
) -> Result<Option<Vec<(VarId, String)>>, EvalError> {
    let free: Vec<VarId> = formula.free().into_iter().collect();
    let witnesses = domain.witnesses();
    let mut assignment = vec![0usize; free.len()];
    loop {
        let mut instance = formula.clone();
        for (var, &w) in free.iter().zip(&assignment) {
            instance = instance
                .subst_var(*var, &ArgList::name(witnesses[w].clone()))
                .expect("names are ground");
        }
        let mut evaluator = Evaluator::new(domain);
        if evaluator.eval_closed(&instance)? == TruthValue::False {
            return Ok(Some(
                free.iter()
                    .zip(&assignment)
                    .map(|(v, &w)| (*v, witnesses[w].clone()))
                    .collect(),
            ));
        }
        // Advance the rightmost slot first, so assignments are scanned in
        // universe order on the leftmost variable.
        let mut k = free.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            assignment[k] += 1;
            if assignment[k] < witnesses.len() {
                break;
            }
            assignment[k] = 0;
        }
        if free.is_empty() {
            return Ok(None);
        }
    }
}

// ---------------------------------------------------------------------------
// Loading either kind of structure
// ---------------------------------------------------------------------------

/// Either kind of structure, as loaded from a definition file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    FiniteTerm(FiniteTermStructure),
    Strings(StringStructure),
}

fn load_language_value(
    value: &serde_json::Value,
    base_dir: Option<&Path>,
) -> Result<LanguageSpec, StructureError> {
    if let Some(path) = value.as_str() {
        let resolved = match base_dir {
            Some(dir) => dir.join(path),
            None => Path::new(path).to_path_buf(),
        };
        let text = std::fs::read_to_string(&resolved).map_err(|source| StructureError::Io {
            path: resolved.display().to_string(),
            source,
        })?;
        let file: LanguageFile =
            serde_json::from_str(&text).map_err(|source| StructureError::Json {
                path: resolved.display().to_string(),
                source,
            })?;
        Ok(file.into_spec()?)
    } else {
        let file: LanguageFile =
            serde_json::from_value(value.clone()).map_err(|source| StructureError::Json {
                path: "<inline language>".into(),
                source,
            })?;
        Ok(file.into_spec()?)
    }
}

impl Structure {
    pub fn load(path: &Path) -> Result<Self, StructureError> {
        let text = std::fs::read_to_string(path).map_err(|source| StructureError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|source| StructureError::Json {
                path: path.display().to_string(),
                source,
            })?;
        Self::from_value(value, path.parent(), &path.display().to_string())
    }

    pub fn from_json_str(json: &str) -> Result<Self, StructureError> {
        let value: serde_json::Value =
            serde_json::from_str(json).map_err(|source| StructureError::Json {
                path: "<inline>".into(),
                source,
            })?;
        Self::from_value(value, None, "inline")
    }

    pub fn from_value(
        value: serde_json::Value,
        base_dir: Option<&Path>,
        tag: &str,
    ) -> Result<Self, StructureError> {
        let is_string_kind = value.get("kind").and_then(|k| k.as_str()) == Some("string");
        if is_string_kind {
            let def: StringStructureDef =
                serde_json::from_value(value).map_err(|source| StructureError::Json {
                    path: tag.to_string(),
                    source,
                })?;
            Ok(Structure::Strings(StringStructure::from_def(def)?))
        } else {
            let def: FiniteStructureDef =
                serde_json::from_value(value).map_err(|source| StructureError::Json {
                    path: tag.to_string(),
                    source,
                })?;
            Ok(Structure::FiniteTerm(FiniteTermStructure::from_def(
                def,
                base_dir,
                tag,
            )?))
        }
    }

    pub fn language(&self) -> &LanguageSpec {
        match self {
            Structure::FiniteTerm(s) => s.language(),
            Structure::Strings(s) => s.language(),
        }
    }

    /// Evaluates a ground list and renders the element.
    pub fn eval_list_display(&self, list: &ArgList) -> Result<String, EvalError> {
        match self {
            Structure::FiniteTerm(s) => s.eval_list(list).map(str::to_string),
            Structure::Strings(s) => s.eval_list(list).map(|g| g.to_string()),
        }
    }

    pub fn eval_closed(&self, formula: &Formula) -> Result<TruthValue, EvalError> {
        match self {
            Structure::FiniteTerm(s) => s.eval_closed(formula),
            Structure::Strings(s) => s.eval_closed(formula),
        }
    }

    pub fn is_valid(&self, formula: &Formula) -> Result<TruthValue, EvalError> {
        match self {
            Structure::FiniteTerm(s) => s.is_valid(formula),
            Structure::Strings(s) => s.is_valid(formula),
        }
    }

    pub fn is_model(&self, axioms: &[Formula]) -> Result<ModelVerdict, EvalError> {
        match self {
            Structure::FiniteTerm(s) => s.is_model(axioms),
            Structure::Strings(s) => s.is_model(axioms),
        }
    }

    pub fn check_condition4(&self, bounds: &Condition4Bounds) -> Condition4Report {
        match self {
            Structure::FiniteTerm(s) => s.check_condition4(bounds),
            Structure::Strings(s) => s.check_condition4(bounds),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    pub(crate) const KLEIN_JSON: &str =
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/klein.json"));
    pub(crate) const STRINGS_JSON: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/strings_ab.json"
    ));

    fn klein() -> FiniteTermStructure {
        FiniteTermStructure::from_json_str(KLEIN_JSON).unwrap()
    }

    fn strings() -> StringStructure {
        StringStructure::from_json_str(STRINGS_JSON).unwrap()
    }

    fn parse(s: &FiniteTermStructure, text: &str) -> Formula {
        parse_formula(text, s.language()).unwrap()
    }

    #[test]
    fn evaluates_cayley_products() {
        let k = klein();
        let lam = crate::syntax::parse_arg_list("*($a $b)", k.language()).unwrap();
        assert_eq!(k.eval_list(&lam).unwrap(), "c");
        assert_eq!(k.eval_list(&ArgList::name("$e")).unwrap(), "e");
    }

    #[test]
    fn every_name_evaluates_to_its_element() {
        let k = klein();
        for (ix, id) in k.universe().iter().enumerate() {
            let token = k.name_token(ix).to_string();
            assert_eq!(k.eval_list(&ArgList::name(token)).unwrap(), id);
        }
    }

    #[test]
    fn evaluates_closed_formulas() {
        let k = klein();
        assert_eq!(
            k.eval_closed(&parse(&k, "~ *($a $a) , $e")).unwrap(),
            TruthValue::True
        );
        assert_eq!(
            k.eval_closed(&parse(&k, "ex x1 ~ *(x1 x1) , $a")).unwrap(),
            TruthValue::False
        );
    }

    #[test]
    fn nullary_tautology_holds() {
        let s = FiniteTermStructure::from_json_str(
            r#"{ "language": { "alphabet": ["*"], "predicates": ["p"],
                              "grammar": {"kind":"term","constants":[],"functions":{"*":2}} },
                 "universe": ["e"],
                 "names": {"e":"$e"},
                 "functions": {"*": {"e,e":"e"}},
                 "predicates": {} }"#,
        )
        .unwrap();
        let f = parse_formula("-> p p", s.language()).unwrap();
        assert_eq!(s.eval_closed(&f).unwrap(), TruthValue::True);
        // Undeclared nullary predicates default to false.
        let p = parse_formula("p", s.language()).unwrap();
        assert_eq!(s.eval_closed(&p).unwrap(), TruthValue::False);
    }

    #[test]
    fn group_axioms_are_valid() {
        let k = klein();
        let g1 = parse(&k, "~ *(*(x1 x2) x3) , *(x1 *(x2 x3))");
        let g2 = parse(&k, "ex x1 all x2 & ~ *(x1 x2) , x2 ex x3 ~ *(x3 x2) , x1");
        assert_eq!(k.is_valid(&g1).unwrap(), TruthValue::True);
        assert_eq!(k.is_valid(&g2).unwrap(), TruthValue::True);
        let refl = parse(&k, "~ x1 , x1");
        assert_eq!(k.is_valid(&refl).unwrap(), TruthValue::True);
    }

    #[test]
    fn model_check_accepts_klein_and_rejects_corruption() {
        let k = klein();
        let g1 = parse(&k, "~ *(*(x1 x2) x3) , *(x1 *(x2 x3))");
        let g2 = parse(&k, "ex x1 all x2 & ~ *(x1 x2) , x2 ex x3 ~ *(x3 x2) , x1");
        let verdict = k.is_model(&[g1.clone(), g2.clone()]).unwrap();
        assert_eq!(verdict, ModelVerdict::Model { axioms_checked: 2 });
        assert_eq!(
            k.is_model(&[]).unwrap(),
            ModelVerdict::Model { axioms_checked: 0 }
        );

        let corrupted = FiniteTermStructure::from_json_str(
            &KLEIN_JSON.replace(r#""b,c": "a""#, r#""b,c": "b""#),
        )
        .unwrap();
        match corrupted.is_model(&[g1.clone(), g2]).unwrap() {
            ModelVerdict::Counterexample {
                axiom_index,
                axiom,
                assignment,
            } => {
                assert_eq!(axiom_index, 0);
                assert_eq!(axiom, g1);
                assert_eq!(assignment.len(), 3);
                // The assignment must reproduce the failure.
                let mut instance = g1.clone();
                for (v, token) in &assignment {
                    instance = instance
                        .subst_var(*v, &ArgList::name(token.clone()))
                        .unwrap();
                }
                assert_eq!(
                    corrupted.eval_closed(&instance).unwrap(),
                    TruthValue::False
                );
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn condition4_clean_and_broken() {
        let k = klein();
        let bounds = Condition4Bounds {
            lambda_bound: 1,
            mu_bound: 1,
            max_pairs: 10_000,
        };
        let clean = k.check_condition4(&bounds);
        assert!(clean.violations.is_empty());
        assert!(!clean.truncated);
        assert!(clean.pairs_checked > 0);

        // Broken evaluation: reads every name as the next element around
        // the universe, so substituting a value's name changes the result.
        let shifted = |list: &ArgList| -> Result<String, EvalError> {
            fn go(k: &FiniteTermStructure, list: &ArgList) -> Result<usize, EvalError> {
                match list {
                    ArgList::Leaf(Atom::Name(t)) => {
                        let ix = k
                            .elem_index_of_name(t)
                            .ok_or_else(|| EvalError::NotInLanguage(t.clone()))?;
                        Ok((ix + 1) % k.universe().len())
                    }
                    ArgList::Leaf(Atom::Var(_)) => Err(EvalError::NotGround(list.to_string())),
                    ArgList::Leaf(Atom::Sym(s)) => Err(EvalError::NotInLanguage(s.clone())),
                    ArgList::Apply(f, children) => {
                        let vals: Vec<usize> = children
                            .iter()
                            .map(|c| go(k, c))
                            .collect::<Result<_, _>>()?;
                        k.function_value(f, &vals)
                            .ok_or_else(|| EvalError::NotInLanguage(f.clone()))
                    }
                    ArgList::Concat(_) => Err(EvalError::NotInLanguage("string".into())),
                }
            }
            Ok(klein().universe()[go(&klein(), list)?].clone())
        };
        let broken = k.check_condition4_with(&bounds, &shifted);
        assert!(!broken.violations.is_empty());
    }

    #[test]
    fn condition4_sampled_is_deterministic() {
        let k = klein();
        let bounds = Condition4Bounds::default();
        let a = k.check_condition4_sampled(&bounds, 50, 0x5eed);
        let b = k.check_condition4_sampled(&bounds, 50, 0x5eed);
        assert_eq!(a.pairs_checked, 50);
        assert!(a.violations.is_empty());
        assert_eq!(a.violations.len(), b.violations.len());
        assert_eq!(a.pairs_checked, b.pairs_checked);
    }

    #[test]
    fn string_structure_strips_names() {
        let s = strings();
        let lam = crate::syntax::parse_arg_list("[$ab b]", s.language()).unwrap();
        assert_eq!(s.eval_list(&lam).unwrap().to_string(), "abb");
    }

    #[test]
    fn string_quantifiers_report_bounds() {
        let s = strings();
        let f = parse_formula("all x1 eqlen [x1] , [x1]", s.language()).unwrap();
        assert_eq!(s.eval_closed(&f).unwrap(), TruthValue::UnknownAtBound);

        let g = parse_formula("ex x1 eqlen [x1 x1] , [a b]", s.language()).unwrap();
        assert_eq!(s.eval_closed(&g).unwrap(), TruthValue::True);

        let h = parse_formula("all x1 prefix [a] , [x1]", s.language()).unwrap();
        assert_eq!(s.eval_closed(&h).unwrap(), TruthValue::False);
    }

    #[test]
    fn string_condition4_clean_and_broken() {
        let s = strings();
        // The substituent bound must admit multi-atom strings; reversal is
        // invisible on one-atom names.
        let bounds = Condition4Bounds {
            lambda_bound: 2,
            mu_bound: 2,
            max_pairs: 50_000,
        };
        let clean = s.check_condition4(&bounds);
        assert!(clean.violations.is_empty());

        // Broken evaluation: reverses the string a name denotes.
        let reversed = |list: &ArgList| -> Result<GroundString, EvalError> {
            fn go(
                s: &StringStructure,
                list: &ArgList,
                out: &mut Vec<String>,
            ) -> Result<(), EvalError> {
                match list {
                    ArgList::Leaf(Atom::Sym(a)) => {
                        out.push(a.clone());
                        Ok(())
                    }
                    ArgList::Leaf(Atom::Name(t)) => {
                        let mut dec = s
                            .string_of_name(t)
                            .ok_or_else(|| EvalError::NotInLanguage(t.clone()))?;
                        dec.0.reverse();
                        out.extend(dec.0);
                        Ok(())
                    }
                    ArgList::Leaf(Atom::Var(_)) => Err(EvalError::NotGround(list.to_string())),
                    ArgList::Concat(children) => {
                        for c in children {
                            go(s, c, out)?;
                        }
                        Ok(())
                    }
                    ArgList::Apply(..) => Err(EvalError::NotInLanguage("term".into())),
                }
            }
            let mut out = Vec::new();
            go(&strings(), list, &mut out)?;
            Ok(GroundString(out))
        };
        let broken = s.check_condition4_with(&bounds, &reversed);
        assert!(!broken.violations.is_empty());
    }

    #[test]
    fn rejects_partial_function_tables() {
        let err = FiniteTermStructure::from_json_str(
            &KLEIN_JSON.replace(r#""b,c": "a","#, ""),
        )
        .unwrap_err();
        assert!(err.to_string().contains("not total"));
    }

    #[test]
    fn rejects_name_gaps_and_duplicates() {
        let err = FiniteTermStructure::from_json_str(
            &KLEIN_JSON.replace(r#""c": "$c""#, r#""c": "$b""#),
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate name"));
    }

    #[test]
    fn structure_loader_discriminates_kinds() {
        assert!(matches!(
            Structure::from_json_str(KLEIN_JSON).unwrap(),
            Structure::FiniteTerm(_)
        ));
        assert!(matches!(
            Structure::from_json_str(STRINGS_JSON).unwrap(),
            Structure::Strings(_)
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_closed_formula() -> BoxedStrategy<Formula> {
            let name = prop_oneof![
                Just("$e".to_string()),
                Just("$a".to_string()),
                Just("$b".to_string()),
                Just("$c".to_string())
            ];
            let list = name
                .prop_map(ArgList::name)
                .prop_recursive(2, 16, 2, |inner| {
                    (inner.clone(), inner).prop_map(|(a, b)| ArgList::apply("*", vec![a, b]))
                });
            let atom = (list.clone(), list).prop_map(|(a, b)| Formula::Eq(a, b));
            atom.prop_recursive(3, 24, 2, |inner| {
                prop_oneof![
                    inner.clone().prop_map(Formula::not),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                    (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
                ]
            })
            .boxed()
        }

        proptest! {
            #[test]
            fn negation_is_complementary(f in arb_closed_formula()) {
                let k = klein();
                let v = k.eval_closed(&f).unwrap();
                let nv = k.eval_closed(&Formula::not(f)).unwrap();
                prop_assert_eq!(nv, v.negate());
                prop_assert!(v == TruthValue::True || v == TruthValue::False);
            }

            #[test]
            fn substituting_value_names_preserves_truth(
                f in arb_closed_formula(),
            ) {
                // One-variable form of the name-substitution lemma: abstract
                // a name into a variable, then substituting any ground list
                // or the name of its value agrees.
                let k = klein();
                let x = crate::syntax::VarId(1);
                let h = match &f {
                    Formula::Eq(a, b) => Formula::Eq(
                        a.subst_var(x, &ArgList::var(1)),
                        b.subst_var(x, &ArgList::var(1)),
                    ),
                    other => other.clone(),
                };
                let mu = ArgList::apply("*", vec![ArgList::name("$b"), ArgList::name("$c")]);
                let lhs = h.subst_var(x, &mu).unwrap();
                let value_name = format!("${}", k.eval_list(&mu).unwrap());
                let rhs = h.subst_var(x, &ArgList::name(value_name)).unwrap();
                prop_assert_eq!(
                    k.eval_closed(&lhs).unwrap(),
                    k.eval_closed(&rhs).unwrap()
                );
            }
        }
    }
}
