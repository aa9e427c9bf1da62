//! Hereditarily finite sets in canonical form.
//!
//! A set is stored as its sorted, duplicate-free list of elements, so
//! structural equality is extensional equality and every operation is
//! deterministic. The module provides the usual closure operations
//! (transitive closure, power set, unions, pairing, Kuratowski products),
//! comprehension, regularity and choice witnesses, and a checker for the
//! four closure conditions that no finite set can satisfy simultaneously.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Cap on the cardinality accepted by [`HfSet::power_set`].
pub const POWER_SET_CAP: usize = 10;

/// Errors raised by set operations and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HfError {
    #[error("power set of a {size}-element set exceeds the cap of {cap} members")]
    TooLarge { size: usize, cap: usize },
    #[error("the empty set has no regularity witness")]
    EmptyInput,
    #[error("choice requires nonempty members: {witness} is empty")]
    EmptyMember { witness: String },
    #[error("choice requires pairwise disjoint members: {a} and {b} intersect")]
    NotDisjoint { a: String, b: String },
    #[error("unexpected character '{0}' in set literal")]
    UnexpectedChar(char),
    #[error("unexpected end of set literal")]
    UnexpectedEnd,
    #[error("trailing input after set literal")]
    TrailingInput,
}

/// A hereditarily finite set in canonical form: elements sorted and
/// deduplicated, recursively.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HfSet {
    elements: Vec<HfSet>,
}

impl HfSet {
    pub fn empty() -> Self {
        HfSet::default()
    }

    pub fn singleton(element: HfSet) -> Self {
        HfSet {
            elements: vec![element],
        }
    }

    /// Builds a set from arbitrary elements, sorting and deduplicating.
    pub fn from_elements(elements: impl IntoIterator<Item = HfSet>) -> Self {
        let mut elements: Vec<HfSet> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        HfSet { elements }
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, element: &HfSet) -> bool {
        self.elements.binary_search(element).is_ok()
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// Von Neumann rank: 0 for the empty set, otherwise one more than the
    /// largest element rank.
    pub fn rank(&self) -> usize {
        self.elements
            .iter()
            .map(|e| e.rank() + 1)
            .max()
            .unwrap_or(0)
    }

    /// A set is transitive when every element is also a subset.
    pub fn is_transitive(&self) -> bool {
        self.elements.iter().all(|e| e.is_subset(self))
    }

    /// Smallest transitive superset: the set itself plus the members of
    /// members, recursively.
    pub fn transitive_closure(&self) -> HfSet {
        let mut out = self.clone();
        loop {
            let missing: Vec<HfSet> = out
                .elements
                .iter()
                .flat_map(|e| e.elements.iter())
                .filter(|x| !out.contains(x))
                .cloned()
                .collect();
            if missing.is_empty() {
                return out;
            }
            out = HfSet::from_elements(out.elements.into_iter().chain(missing));
        }
    }

    /// All subsets; capped because the result doubles per element.
    pub fn power_set(&self) -> Result<HfSet, HfError> {
        if self.len() > POWER_SET_CAP {
            return Err(HfError::TooLarge {
                size: self.len(),
                cap: POWER_SET_CAP,
            });
        }
        Ok(self.power_set_unchecked())
    }

    fn power_set_unchecked(&self) -> HfSet {
        let mut subsets = vec![HfSet::empty()];
        for element in &self.elements {
            let mut extended: Vec<HfSet> = subsets
                .iter()
                .map(|s| HfSet::from_elements(s.elements.iter().cloned().chain([element.clone()])))
                .collect();
            subsets.append(&mut extended);
        }
        HfSet::from_elements(subsets)
    }

    pub fn union(&self, other: &HfSet) -> HfSet {
        HfSet::from_elements(
            self.elements
                .iter()
                .chain(other.elements.iter())
                .cloned(),
        )
    }

    pub fn intersection(&self, other: &HfSet) -> HfSet {
        HfSet::from_elements(
            self.elements
                .iter()
                .filter(|e| other.contains(e))
                .cloned(),
        )
    }

    pub fn difference(&self, other: &HfSet) -> HfSet {
        HfSet::from_elements(
            self.elements
                .iter()
                .filter(|e| !other.contains(e))
                .cloned(),
        )
    }

    /// The unordered pair `{a, b}`; a singleton when the two coincide.
    pub fn pair(a: HfSet, b: HfSet) -> HfSet {
        HfSet::from_elements([a, b])
    }

    /// Union of the members.
    pub fn big_union(&self) -> HfSet {
        HfSet::from_elements(
            self.elements
                .iter()
                .flat_map(|e| e.elements.iter())
                .cloned(),
        )
    }

    /// The ordered pair `{{a},{a,b}}`.
    pub fn ordered_pair(a: HfSet, b: HfSet) -> HfSet {
        HfSet::pair(HfSet::singleton(a.clone()), HfSet::pair(a, b))
    }

    /// Cartesian product with ordered pairs.
    pub fn cartesian_product(&self, other: &HfSet) -> HfSet {
        let mut out = Vec::new();
        for a in &self.elements {
            for b in &other.elements {
                out.push(HfSet::ordered_pair(a.clone(), b.clone()));
            }
        }
        HfSet::from_elements(out)
    }

    /// The subset of elements satisfying the property.
    pub fn comprehension(&self, property: impl Fn(&HfSet) -> bool) -> HfSet {
        HfSet::from_elements(self.elements.iter().filter(|e| property(e)).cloned())
    }

    /// An element disjoint from the set itself. Well-foundedness makes one
    /// exist for every nonempty set; ties break by minimal rank and then
    /// canonical order.
    pub fn regularity_witness(&self) -> Result<&HfSet, HfError> {
        if self.is_empty() {
            return Err(HfError::EmptyInput);
        }
        self.elements
            .iter()
            .filter(|y| y.intersection(self).is_empty())
            .min_by_key(|y| (y.rank(), (*y).clone()))
            .ok_or(HfError::EmptyInput)
    }

    /// A set meeting each member in exactly one element: the canonically
    /// least element of each member. Members must be nonempty and pairwise
    /// disjoint; the error carries a witness.
    pub fn choice_set(&self) -> Result<HfSet, HfError> {
        for member in &self.elements {
            if member.is_empty() {
                return Err(HfError::EmptyMember {
                    witness: member.to_string(),
                });
            }
        }
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                if !a.intersection(b).is_empty() {
                    return Err(HfError::NotDisjoint {
                        a: a.to_string(),
                        b: b.to_string(),
                    });
                }
            }
        }
        Ok(HfSet::from_elements(
            self.elements
                .iter()
                .map(|member| member.elements[0].clone()),
        ))
    }

    /// Evaluates the four closure conditions of a subset-friendly set.
    pub fn check_subset_friendly(&self) -> SubsetFriendlyReport {
        let contains_empty = if self.contains(&HfSet::empty()) {
            ConditionOutcome::Pass
        } else {
            ConditionOutcome::Violation(SubsetFriendlyViolation::MissingEmptySet)
        };

        let transitive = match self
            .elements
            .iter()
            .find_map(|y| y.elements.iter().find(|z| !self.contains(z)).map(|z| (y, z)))
        {
            None => ConditionOutcome::Pass,
            Some((y, z)) => ConditionOutcome::Violation(SubsetFriendlyViolation::NotTransitive {
                member: y.clone(),
                missing: z.clone(),
            }),
        };

        let powers = match self
            .elements
            .iter()
            .find(|y| !self.contains(&y.power_set_unchecked()))
        {
            None => ConditionOutcome::Pass,
            Some(y) => ConditionOutcome::Violation(SubsetFriendlyViolation::MissingPowerSet {
                member: y.clone(),
                power_set: y.power_set_unchecked(),
            }),
        };

        let mut pair_cover = ConditionOutcome::Pass;
        'outer: for y in &self.elements {
            for z in &self.elements {
                let covered = self
                    .elements
                    .iter()
                    .any(|v| v.is_transitive() && v.contains(y) && v.contains(z));
                if !covered {
                    pair_cover =
                        ConditionOutcome::Violation(SubsetFriendlyViolation::UncoveredPair {
                            left: y.clone(),
                            right: z.clone(),
                        });
                    break 'outer;
                }
            }
        }

        SubsetFriendlyReport {
            contains_empty,
            transitive,
            powers,
            pair_cover,
        }
    }
}

/// Outcome of one subset-friendliness condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionOutcome {
    Pass,
    Violation(SubsetFriendlyViolation),
}

impl ConditionOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionOutcome::Pass)
    }
}

/// Concrete witness for a failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetFriendlyViolation {
    MissingEmptySet,
    NotTransitive { member: HfSet, missing: HfSet },
    MissingPowerSet { member: HfSet, power_set: HfSet },
    UncoveredPair { left: HfSet, right: HfSet },
}

impl fmt::Display for SubsetFriendlyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetFriendlyViolation::MissingEmptySet => write!(f, "{{}} is not a member"),
            SubsetFriendlyViolation::NotTransitive { member, missing } => {
                write!(f, "member {member} has element {missing} outside the set")
            }
            SubsetFriendlyViolation::MissingPowerSet { member, power_set } => {
                write!(f, "power set {power_set} of member {member} is not a member")
            }
            SubsetFriendlyViolation::UncoveredPair { left, right } => write!(
                f,
                "no transitive member contains both {left} and {right}"
            ),
        }
    }
}

/// Results of the four subset-friendliness conditions: contains the empty
/// set, is transitive, holds every member's power set, and covers every
/// member pair by a transitive member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFriendlyReport {
    pub contains_empty: ConditionOutcome,
    pub transitive: ConditionOutcome,
    pub powers: ConditionOutcome,
    pub pair_cover: ConditionOutcome,
}

impl SubsetFriendlyReport {
    pub fn conditions(&self) -> [(&'static str, &ConditionOutcome); 4] {
        [
            ("condition 1 (contains the empty set)", &self.contains_empty),
            ("condition 2 (transitive)", &self.transitive),
            ("condition 3 (closed under power sets)", &self.powers),
            ("condition 4 (transitive pair covers)", &self.pair_cover),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.passed())
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for HfSet {
    type Err = HfError;

    /// Parses literals like `{}`, `{{}}`, `{{},{{}}}`; whitespace is
    /// ignored and elements are comma-separated.
    fn from_str(text: &str) -> Result<Self, HfError> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (set, consumed) = parse_set(&chars, 0)?;
        if consumed != chars.len() {
            return Err(HfError::TrailingInput);
        }
        Ok(set)
    }
}

fn parse_set(chars: &[char], pos: usize) -> Result<(HfSet, usize), HfError> {
    match chars.get(pos) {
        Some('{') => {}
        Some(&c) => return Err(HfError::UnexpectedChar(c)),
        None => return Err(HfError::UnexpectedEnd),
    }
    let mut pos = pos + 1;
    let mut elements = Vec::new();
    loop {
        match chars.get(pos) {
            Some('}') => return Ok((HfSet::from_elements(elements), pos + 1)),
            Some('{') => {
                let (element, next) = parse_set(chars, pos)?;
                elements.push(element);
                pos = next;
                match chars.get(pos) {
                    Some(',') => pos += 1,
                    Some('}') => {}
                    Some(&c) => return Err(HfError::UnexpectedChar(c)),
                    None => return Err(HfError::UnexpectedEnd),
                }
            }
            Some(&c) => return Err(HfError::UnexpectedChar(c)),
            None => return Err(HfError::UnexpectedEnd),
        }
    }
}
