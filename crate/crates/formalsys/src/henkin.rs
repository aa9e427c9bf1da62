//! Bounded fragments of the set of formulas valid in a structure.
//!
//! The set of all valid formulas is infinite, so this module only ever
//! materializes a finite window: every closed formula within the given
//! bounds, partitioned into valid and invalid by evaluation. On such a
//! fragment the defining properties of the construction become checkable:
//! a formula and its negation always land on opposite sides, and every
//! valid existential has a name witness whose biconditional instance is
//! valid.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::language::{enumerate_lists, LanguageError};
use crate::structure::{EvalError, FiniteTermStructure, TruthValue};
use crate::syntax::{ArgList, Formula, VarId};

/// Cap on the number of formulas materialized by fragment enumeration.
pub const DEFAULT_FRAGMENT_CAP: usize = 500_000;

/// Size bounds of a formula fragment.
///
/// `connective_depth` budgets the total number of connective and
/// quantifier nodes in a formula, `list_depth` bounds the argument lists,
/// and `max_quantifiers` limits the quantifier count. Every bound is
/// monotone: enlarging it only adds formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FragmentBounds {
    pub connective_depth: usize,
    pub list_depth: usize,
    pub max_quantifiers: usize,
}

impl fmt::Display for FragmentBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "connectives<={} lists<={} quantifiers<={}",
            self.connective_depth, self.list_depth, self.max_quantifiers
        )
    }
}

/// Errors of fragment enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HenkinError {
    #[error("fragment enumeration would exceed the cap of {cap} formulas")]
    ExplosionGuard { cap: usize },
    #[error("formula has free variables besides {var}: {formula}")]
    NotClosedUnderX { var: VarId, formula: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<LanguageError> for HenkinError {
    fn from(e: LanguageError) -> Self {
        match e {
            LanguageError::ExplosionGuard { cap } => HenkinError::ExplosionGuard { cap },
            other => panic!("fragment enumeration over a validated language: {other}"),
        }
    }
}

/// The closed formulas within bounds, split by evaluation.
#[derive(Clone, Debug)]
pub struct FragmentPartition {
    pub bounds: FragmentBounds,
    pub valid: Vec<Formula>,
    pub invalid: Vec<Formula>,
}

/// Enumerates every formula within bounds whose free variables lie in
/// `free`, ordered by connective count and then structurally.
pub fn enumerate_fragment(
    structure: &FiniteTermStructure,
    bounds: &FragmentBounds,
    free: &[VarId],
    cap: usize,
) -> Result<Vec<Formula>, HenkinError> {
    let mut builder = FragmentBuilder {
        structure,
        bounds: *bounds,
        cap,
        produced: 0,
    };
    let mut vars: Vec<VarId> = free.to_vec();
    vars.sort();
    vars.dedup();
    let strata = builder.formulas(bounds.connective_depth, &vars, bounds.max_quantifiers)?;
    Ok(strata.into_iter().flatten().collect())
}

/// Enumerates the closed fragment with the default cap.
pub fn enumerate_closed_fragment(
    structure: &FiniteTermStructure,
    bounds: &FragmentBounds,
) -> Result<Vec<Formula>, HenkinError> {
    enumerate_fragment(structure, bounds, &[], DEFAULT_FRAGMENT_CAP)
}

struct FragmentBuilder<'a> {
    structure: &'a FiniteTermStructure,
    bounds: FragmentBounds,
    cap: usize,
    produced: usize,
}

impl FragmentBuilder<'_> {
    fn bump(&mut self, count: usize) -> Result<(), HenkinError> {
        self.produced += count;
        if self.produced > self.cap {
            Err(HenkinError::ExplosionGuard { cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// Strata of formulas with free variables inside `vars`, indexed by
    /// exact connective count.
    fn formulas(
        &mut self,
        size: usize,
        vars: &[VarId],
        quantifiers: usize,
    ) -> Result<Vec<Vec<Formula>>, HenkinError> {
        let atoms = self.atoms(vars)?;
        self.bump(atoms.len())?;
        let mut strata: Vec<Vec<Formula>> = vec![atoms];
        for s in 1..=size {
            let mut stratum: BTreeSet<Formula> = BTreeSet::new();
            for f in &strata[s - 1] {
                stratum.insert(Formula::not(f.clone()));
            }
            for left_size in 0..s {
                let right_size = s - 1 - left_size;
                for a in &strata[left_size] {
                    for b in &strata[right_size] {
                        stratum.insert(Formula::implies(a.clone(), b.clone()));
                        stratum.insert(Formula::iff(a.clone(), b.clone()));
                        stratum.insert(Formula::and(a.clone(), b.clone()));
                        stratum.insert(Formula::or(a.clone(), b.clone()));
                    }
                }
            }
            if quantifiers > 0 {
                let fresh = fresh_var(vars);
                let mut inner_vars = vars.to_vec();
                inner_vars.push(fresh);
                inner_vars.sort();
                let inner = self.formulas(s - 1, &inner_vars, quantifiers - 1)?;
                for body in inner.into_iter().flatten() {
                    stratum.insert(Formula::forall(fresh, body.clone()));
                    stratum.insert(Formula::exists(fresh, body));
                }
            }
            self.bump(stratum.len())?;
            strata.push(stratum.into_iter().collect());
        }
        Ok(strata)
    }

    fn atoms(&mut self, vars: &[VarId]) -> Result<Vec<Formula>, HenkinError> {
        let names = self.structure.name_set();
        let lists = enumerate_lists(
            self.structure.language(),
            Some(&names),
            self.bounds.list_depth,
            vars,
            self.cap,
        )?;
        let mut out: BTreeSet<Formula> = BTreeSet::new();
        for a in &lists {
            for b in &lists {
                out.insert(Formula::Eq(a.clone(), b.clone()));
            }
        }
        for p in self.structure.language().predicates() {
            out.insert(Formula::Pred(p.clone(), vec![]));
        }
        for (p, arity) in self.structure.pred_arities() {
            let mut tuple = vec![0usize; arity];
            loop {
                out.insert(Formula::Pred(
                    p.clone(),
                    tuple.iter().map(|&i| lists[i].clone()).collect(),
                ));
                let mut k = arity;
                let done = loop {
                    if k == 0 {
                        break true;
                    }
                    k -= 1;
                    tuple[k] += 1;
                    if tuple[k] < lists.len() {
                        break false;
                    }
                    tuple[k] = 0;
                };
                if done {
                    break;
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

fn fresh_var(vars: &[VarId]) -> VarId {
    let mut index = 1;
    while vars.contains(&VarId(index)) {
        index += 1;
    }
    VarId(index)
}

/// Evaluates every closed formula within bounds and splits the fragment.
pub fn enumerate_valid_fragment(
    structure: &FiniteTermStructure,
    bounds: &FragmentBounds,
) -> Result<FragmentPartition, HenkinError> {
    let formulas = enumerate_closed_fragment(structure, bounds)?;
    let mut valid = Vec::new();
    let mut invalid = Vec::new();
    for f in formulas {
        match structure.eval_closed(&f)? {
            TruthValue::True => valid.push(f),
            _ => invalid.push(f),
        }
    }
    Ok(FragmentPartition {
        bounds: *bounds,
        valid,
        invalid,
    })
}

/// A name `c` such that the existential over `x` and the instance at `c`
/// agree: if some element satisfies the body, the first satisfying name is
/// returned; otherwise the first name works because both sides are false.
pub fn henkin_witness(
    structure: &FiniteTermStructure,
    x: VarId,
    body: &Formula,
) -> Result<String, HenkinError> {
    henkin_witness_with(structure, x, body, &|s, f| s.eval_closed(f))
}

fn henkin_witness_with(
    structure: &FiniteTermStructure,
    x: VarId,
    body: &Formula,
    eval: &dyn Fn(&FiniteTermStructure, &Formula) -> Result<TruthValue, EvalError>,
) -> Result<String, HenkinError> {
    let free = body.free();
    if free.iter().any(|v| *v != x) {
        return Err(HenkinError::NotClosedUnderX {
            var: x,
            formula: body.to_string(),
        });
    }
    let mut first = None;
    for ix in 0..structure.universe().len() {
        let token = structure.name_token(ix).to_string();
        if first.is_none() {
            first = Some(token.clone());
        }
        let instance = body
            .subst_var(x, &ArgList::name(token.clone()))
            .expect("names are ground");
        if eval(structure, &instance)? == TruthValue::True {
            return Ok(token);
        }
    }
    Ok(first.expect("universes are nonempty"))
}

/// Outcome of the fragment-level consistency checks.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub bounds: FragmentBounds,
    pub formulas_checked: usize,
    pub valid_count: usize,
    pub invalid_count: usize,
    /// Formulas whose negation does not evaluate to the complement.
    pub complementarity_failures: Vec<Formula>,
    /// Valid existentials whose witness biconditional is not valid.
    pub witness_failures: Vec<(Formula, String)>,
    /// Formulas found on both sides of the partition.
    pub overlap: usize,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.complementarity_failures.is_empty()
            && self.witness_failures.is_empty()
            && self.overlap == 0
    }
}

/// Runs the consistency checks with the structure's own evaluation.
pub fn fragment_consistency_report(
    structure: &FiniteTermStructure,
    bounds: &FragmentBounds,
) -> Result<ConsistencyReport, HenkinError> {
    fragment_consistency_report_with(structure, bounds, &|s, f| s.eval_closed(f))
}

/// Runs the consistency checks with a caller-supplied evaluation; a broken
/// evaluation makes the checks fail, which validates the checks themselves.
pub fn fragment_consistency_report_with(
    structure: &FiniteTermStructure,
    bounds: &FragmentBounds,
    eval: &dyn Fn(&FiniteTermStructure, &Formula) -> Result<TruthValue, EvalError>,
) -> Result<ConsistencyReport, HenkinError> {
    let formulas = enumerate_closed_fragment(structure, bounds)?;
    let mut report = ConsistencyReport {
        bounds: *bounds,
        formulas_checked: formulas.len(),
        valid_count: 0,
        invalid_count: 0,
        complementarity_failures: Vec::new(),
        witness_failures: Vec::new(),
        overlap: 0,
    };
    let mut valid_set: BTreeSet<&Formula> = BTreeSet::new();
    let mut invalid_set: BTreeSet<&Formula> = BTreeSet::new();
    for f in &formulas {
        let value = eval(structure, f)?;
        let negated = eval(structure, &Formula::not(f.clone()))?;
        if negated != value.negate() || value == TruthValue::UnknownAtBound {
            report.complementarity_failures.push(f.clone());
        }
        match value {
            TruthValue::True => {
                report.valid_count += 1;
                valid_set.insert(f);
            }
            _ => {
                report.invalid_count += 1;
                invalid_set.insert(f);
            }
        }
        if value == TruthValue::True {
            if let Formula::Exists(x, body) = f {
                let witness = henkin_witness_with(structure, *x, body, eval)?;
                let instance = body
                    .subst_var(*x, &ArgList::name(witness.clone()))
                    .expect("names are ground");
                let biconditional = Formula::iff(f.clone(), instance);
                if eval(structure, &biconditional)? != TruthValue::True {
                    report.witness_failures.push((f.clone(), witness));
                }
            }
        }
    }
    report.overlap = valid_set.intersection(&invalid_set).count();
    Ok(report)
}
