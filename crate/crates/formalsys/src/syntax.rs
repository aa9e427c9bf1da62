//! Abstract syntax for argument lists and formulas.
//!
//! Argument lists are finite trees over alphabet symbols, variables and
//! names; formulas are prefix-notation trees over equality, predicate
//! application, the connectives and the two quantifiers. This module owns
//! parsing, canonical printing, variable/name bookkeeping, substitution
//! and skeleton extraction (splitting a ground list into a name-free
//! pattern plus its names in first-occurrence order).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::language::{Grammar, LanguageSpec};

/// A variable `x1, x2, x3, ...`; the identity of a variable is its index
/// (always >= 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Leaf symbol of an argument list.
///
/// Name tokens always carry their `$` marker, which keeps every name set
/// lexically disjoint from alphabet symbols and variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Alphabet symbol: a constant of a term grammar or an atom of a
    /// string grammar.
    Sym(String),
    /// Variable `xN`.
    Var(VarId),
    /// Name token, `$` included.
    Name(String),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(s) => write!(f, "{s}"),
            Atom::Var(v) => write!(f, "{v}"),
            Atom::Name(n) => write!(f, "{n}"),
        }
    }
}

/// An argument list: a leaf, a function application `f(...)` of a term
/// grammar, or a flat string `[...]` of a string grammar.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArgList {
    Leaf(Atom),
    Apply(String, Vec<ArgList>),
    Concat(Vec<ArgList>),
}

/// Errors from the substitution and skeleton operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("argument list contains variables: {0}")]
    NotGround(String),
    #[error("substituent contains variables: {0}")]
    NonGroundSubstituent(String),
}

impl ArgList {
    pub fn var(index: usize) -> Self {
        ArgList::Leaf(Atom::Var(VarId(index)))
    }

    pub fn sym(ident: impl Into<String>) -> Self {
        ArgList::Leaf(Atom::Sym(ident.into()))
    }

    /// Builds a name leaf from a token that already carries the `$` marker.
    pub fn name(token: impl Into<String>) -> Self {
        ArgList::Leaf(Atom::Name(token.into()))
    }

    pub fn apply(symbol: impl Into<String>, children: Vec<ArgList>) -> Self {
        ArgList::Apply(symbol.into(), children)
    }

    /// Builds a string node; nested strings are spliced so that strings
    /// stay flat sequences of leaves.
    pub fn concat(children: Vec<ArgList>) -> Self {
        let mut flat = Vec::with_capacity(children.len());
        flatten_into(children, &mut flat);
        ArgList::Concat(flat)
    }

    /// Set of variables occurring in the list.
    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            ArgList::Leaf(Atom::Var(v)) => {
                out.insert(*v);
            }
            ArgList::Leaf(_) => {}
            ArgList::Apply(_, children) | ArgList::Concat(children) => {
                for c in children {
                    c.collect_vars(out);
                }
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            ArgList::Leaf(Atom::Var(_)) => false,
            ArgList::Leaf(_) => true,
            ArgList::Apply(_, children) | ArgList::Concat(children) => {
                children.iter().all(ArgList::is_ground)
            }
        }
    }

    /// Distinct name tokens in first-occurrence (preorder, left-to-right)
    /// order.
    pub fn names_in_order(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut Vec<String>) {
        match self {
            ArgList::Leaf(Atom::Name(n)) => {
                if !out.iter().any(|t| t == n) {
                    out.push(n.clone());
                }
            }
            ArgList::Leaf(_) => {}
            ArgList::Apply(_, children) | ArgList::Concat(children) => {
                for c in children {
                    c.collect_names(out);
                }
            }
        }
    }

    /// Tree depth: leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            ArgList::Leaf(_) => 0,
            ArgList::Apply(_, children) | ArgList::Concat(children) => {
                1 + children.iter().map(ArgList::depth).max().unwrap_or(0)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ArgList::Leaf(_) => 1,
            ArgList::Apply(_, children) | ArgList::Concat(children) => {
                children.iter().map(ArgList::leaf_count).sum()
            }
        }
    }

    /// Replaces every occurrence of the variable `x` by `with`.
    ///
    /// Argument lists contain no binders, so the replacement is plain leaf
    /// rewriting; strings spliced into strings stay flat.
    pub fn subst_var(&self, x: VarId, with: &ArgList) -> ArgList {
        match self {
            ArgList::Leaf(Atom::Var(v)) if *v == x => with.clone(),
            ArgList::Leaf(_) => self.clone(),
            ArgList::Apply(f, children) => ArgList::Apply(
                f.clone(),
                children.iter().map(|c| c.subst_var(x, with)).collect(),
            ),
            ArgList::Concat(children) => {
                ArgList::concat(children.iter().map(|c| c.subst_var(x, with)).collect())
            }
        }
    }

    /// Replaces every name leaf by the image given by `rename`.
    pub fn map_names(&self, rename: &impl Fn(&str) -> String) -> ArgList {
        match self {
            ArgList::Leaf(Atom::Name(n)) => ArgList::Leaf(Atom::Name(rename(n))),
            ArgList::Leaf(_) => self.clone(),
            ArgList::Apply(f, children) => ArgList::Apply(
                f.clone(),
                children.iter().map(|c| c.map_names(rename)).collect(),
            ),
            ArgList::Concat(children) => {
                ArgList::Concat(children.iter().map(|c| c.map_names(rename)).collect())
            }
        }
    }
}

fn flatten_into(children: Vec<ArgList>, out: &mut Vec<ArgList>) {
    for c in children {
        match c {
            ArgList::Concat(inner) => flatten_into(inner, out),
            other => out.push(other),
        }
    }
}

/// Splits a ground list into its name-free skeleton and the distinct names
/// in first-occurrence order.
///
/// The i-th name is replaced everywhere by the variable `x(i+1)`; since the
/// input is ground these are the lowest-indexed variables not occurring in
/// it. Substituting the names back reproduces the input exactly.
pub fn skeleton(list: &ArgList) -> Result<(ArgList, Vec<String>), SyntaxError> {
    if !list.is_ground() {
        return Err(SyntaxError::NotGround(list.to_string()));
    }
    let names = list.names_in_order();
    let mut pattern = list.clone();
    for (i, token) in names.iter().enumerate() {
        pattern = rewrite_name_to_var(&pattern, token, VarId(i + 1));
    }
    Ok((pattern, names))
}

fn rewrite_name_to_var(list: &ArgList, token: &str, var: VarId) -> ArgList {
    match list {
        ArgList::Leaf(Atom::Name(n)) if n == token => ArgList::Leaf(Atom::Var(var)),
        ArgList::Leaf(_) => list.clone(),
        ArgList::Apply(f, children) => ArgList::Apply(
            f.clone(),
            children
                .iter()
                .map(|c| rewrite_name_to_var(c, token, var))
                .collect(),
        ),
        ArgList::Concat(children) => ArgList::Concat(
            children
                .iter()
                .map(|c| rewrite_name_to_var(c, token, var))
                .collect(),
        ),
    }
}

impl fmt::Display for ArgList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgList::Leaf(a) => write!(f, "{a}"),
            ArgList::Apply(sym, children) => {
                write!(f, "{sym}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            ArgList::Concat(children) => {
                write!(f, "[")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// A formula in prefix notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(ArgList, ArgList),
    Pred(String, Vec<ArgList>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ForAll(VarId, Box<Formula>),
    Exists(VarId, Box<Formula>),
}

impl Formula {
    pub fn eq(left: ArgList, right: ArgList) -> Self {
        Formula::Eq(left, right)
    }

    pub fn pred(symbol: impl Into<String>, args: Vec<ArgList>) -> Self {
        Formula::Pred(symbol.into(), args)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(x: VarId, f: Formula) -> Self {
        Formula::ForAll(x, Box::new(f))
    }

    pub fn exists(x: VarId, f: Formula) -> Self {
        Formula::Exists(x, Box::new(f))
    }

    /// Set of free variables; quantifiers bind their variable in the
    /// subformula.
    pub fn free(&self) -> BTreeSet<VarId> {
        match self {
            Formula::Eq(a, b) => {
                let mut out = a.vars();
                out.extend(b.vars());
                out
            }
            Formula::Pred(_, args) => {
                let mut out = BTreeSet::new();
                for a in args {
                    out.extend(a.vars());
                }
                out
            }
            Formula::Not(f) => f.free(),
            Formula::Implies(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                let mut out = a.free();
                out.extend(b.free());
                out
            }
            Formula::ForAll(x, f) | Formula::Exists(x, f) => {
                let mut out = f.free();
                out.remove(x);
                out
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free().is_empty()
    }

    /// Number of connective and quantifier nodes.
    pub fn connective_size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => 0,
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => {
                1 + f.connective_size()
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.connective_size() + b.connective_size()
            }
        }
    }

    /// References to every argument list occurring in the formula.
    pub fn arg_lists(&self) -> Vec<&ArgList> {
        let mut out = Vec::new();
        self.collect_arg_lists(&mut out);
        out
    }

    fn collect_arg_lists<'a>(&'a self, out: &mut Vec<&'a ArgList>) {
        match self {
            Formula::Eq(a, b) => {
                out.push(a);
                out.push(b);
            }
            Formula::Pred(_, args) => out.extend(args.iter()),
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => {
                f.collect_arg_lists(out)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_arg_lists(out);
                b.collect_arg_lists(out);
            }
        }
    }

    /// Replaces free occurrences of `x` by the ground list `with`.
    ///
    /// Only ground substituents are accepted, which makes capture
    /// impossible: bound occurrences are left untouched and no variable of
    /// `with` can be captured because there are none.
    pub fn subst_var(&self, x: VarId, with: &ArgList) -> Result<Formula, SyntaxError> {
        if !with.is_ground() {
            return Err(SyntaxError::NonGroundSubstituent(with.to_string()));
        }
        Ok(self.subst_var_unchecked(x, with))
    }

    fn subst_var_unchecked(&self, x: VarId, with: &ArgList) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.subst_var(x, with), b.subst_var(x, with)),
            Formula::Pred(p, args) => Formula::Pred(
                p.clone(),
                args.iter().map(|a| a.subst_var(x, with)).collect(),
            ),
            Formula::Not(f) => Formula::not(f.subst_var_unchecked(x, with)),
            Formula::Implies(a, b) => Formula::implies(
                a.subst_var_unchecked(x, with),
                b.subst_var_unchecked(x, with),
            ),
            Formula::Iff(a, b) => Formula::iff(
                a.subst_var_unchecked(x, with),
                b.subst_var_unchecked(x, with),
            ),
            Formula::And(a, b) => Formula::and(
                a.subst_var_unchecked(x, with),
                b.subst_var_unchecked(x, with),
            ),
            Formula::Or(a, b) => Formula::or(
                a.subst_var_unchecked(x, with),
                b.subst_var_unchecked(x, with),
            ),
            Formula::ForAll(y, f) => {
                if *y == x {
                    self.clone()
                } else {
                    Formula::forall(*y, f.subst_var_unchecked(x, with))
                }
            }
            Formula::Exists(y, f) => {
                if *y == x {
                    self.clone()
                } else {
                    Formula::exists(*y, f.subst_var_unchecked(x, with))
                }
            }
        }
    }

    /// Universal closure over the free variables, lowest index outermost.
    pub fn universal_closure(&self) -> Formula {
        let mut out = self.clone();
        for x in self.free().into_iter().rev() {
            out = Formula::forall(x, out);
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "~ {a} , {b}"),
            Formula::Pred(p, args) => {
                write!(f, "{p}")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ,")?;
                    }
                    write!(f, " {a}")?;
                }
                Ok(())
            }
            Formula::Not(g) => write!(f, "! {g}"),
            Formula::Implies(a, b) => write!(f, "-> {a} {b}"),
            Formula::Iff(a, b) => write!(f, "<-> {a} {b}"),
            Formula::And(a, b) => write!(f, "& {a} {b}"),
            Formula::Or(a, b) => write!(f, "| {a} {b}"),
            Formula::ForAll(x, g) => write!(f, "all {x} {g}"),
            Formula::Exists(x, g) => write!(f, "ex {x} {g}"),
        }
    }
}

/// Errors produced while lexing or parsing concrete syntax.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token '{0}'")]
    UnexpectedToken(String),
    #[error("symbol '{0}' is not declared in the language")]
    UnboundSymbol(String),
    #[error("'{symbol}' expects {expected} argument(s), found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("name marker '$' must be followed by an identifier")]
    EmptyName,
    #[error("invalid variable '{0}': variables are x1, x2, ... with index >= 1")]
    BadVariable(String),
    #[error("expected a formula, found '{0}'")]
    ExpectedFormula(String),
    #[error("expected an argument list, found '{0}'")]
    ExpectedArgList(String),
    #[error("expected a variable after quantifier, found '{0}'")]
    ExpectedVariable(String),
    #[error("string syntax '[' is not part of a term grammar")]
    StringSyntaxInTermGrammar,
    #[error("term grammars write strings as '[...]'; found '{0}'")]
    ExpectedBracket(String),
    #[error("empty string '[]' is not a list")]
    EmptyString,
    #[error("trailing input starting at '{0}'")]
    TrailingTokens(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Word(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::LParen => write!(f, "("),
            Token::RParen => write!(f, ")"),
            Token::LBracket => write!(f, "["),
            Token::RBracket => write!(f, "]"),
            Token::Comma => write!(f, ","),
            Token::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Tokens are separated by whitespace; parentheses, brackets and commas
/// delimit themselves, so `*(x1 x2),x2` and `*( x1 x2 ) , x2` lex alike.
fn lex(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    let flush = |word: &mut String, tokens: &mut Vec<Token>| {
        if !word.is_empty() {
            tokens.push(Token::Word(std::mem::take(word)));
        }
    };
    for ch in text.chars() {
        match ch {
            c if c.is_whitespace() => flush(&mut word, &mut tokens),
            '(' => {
                flush(&mut word, &mut tokens);
                tokens.push(Token::LParen);
            }
            ')' => {
                flush(&mut word, &mut tokens);
                tokens.push(Token::RParen);
            }
            '[' => {
                flush(&mut word, &mut tokens);
                tokens.push(Token::LBracket);
            }
            ']' => {
                flush(&mut word, &mut tokens);
                tokens.push(Token::RBracket);
            }
            ',' => {
                flush(&mut word, &mut tokens);
                tokens.push(Token::Comma);
            }
            c => word.push(c),
        }
    }
    flush(&mut word, &mut tokens);
    tokens
}

fn parse_var_token(word: &str) -> Option<VarId> {
    let digits = word.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let index: usize = digits.parse().ok()?;
    if index >= 1 {
        Some(VarId(index))
    } else {
        None
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    spec: &'a LanguageSpec,
}

impl<'a> Parser<'a> {
    fn new(text: &str, spec: &'a LanguageSpec) -> Self {
        Parser {
            tokens: lex(text),
            pos: 0,
            spec,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, expected: Token) -> Result<(), ParseError> {
        let t = self.next()?;
        if t == expected {
            Ok(())
        } else {
            Err(ParseError::UnexpectedToken(t.to_string()))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::TrailingTokens(t.to_string())),
        }
    }

    fn starts_arg_list(&self, token: &Token) -> bool {
        match token {
            Token::LBracket => matches!(self.spec.grammar(), Grammar::Strings { .. }),
            Token::Word(w) => {
                if parse_var_token(w).is_some() || w.starts_with('$') {
                    return true;
                }
                match self.spec.grammar() {
                    Grammar::Term {
                        constants,
                        functions,
                    } => constants.contains(w) || functions.contains_key(w),
                    Grammar::Strings { .. } => false,
                }
            }
            _ => false,
        }
    }

    fn parse_formula(&mut self) -> Result<Formula, ParseError> {
        let token = self.next()?;
        let word = match token {
            Token::Word(w) => w,
            other => return Err(ParseError::ExpectedFormula(other.to_string())),
        };
        match word.as_str() {
            "~" => {
                let left = self.parse_arg_list()?;
                self.expect(Token::Comma)?;
                let right = self.parse_arg_list()?;
                Ok(Formula::Eq(left, right))
            }
            "!" => Ok(Formula::not(self.parse_formula()?)),
            "->" => {
                let a = self.parse_formula()?;
                let b = self.parse_formula()?;
                Ok(Formula::implies(a, b))
            }
            "<->" => {
                let a = self.parse_formula()?;
                let b = self.parse_formula()?;
                Ok(Formula::iff(a, b))
            }
            "&" => {
                let a = self.parse_formula()?;
                let b = self.parse_formula()?;
                Ok(Formula::and(a, b))
            }
            "|" => {
                let a = self.parse_formula()?;
                let b = self.parse_formula()?;
                Ok(Formula::or(a, b))
            }
            "all" | "ex" => {
                let vt = self.next()?;
                let var = match &vt {
                    Token::Word(w) => parse_var_token(w)
                        .ok_or_else(|| ParseError::ExpectedVariable(vt.to_string()))?,
                    other => return Err(ParseError::ExpectedVariable(other.to_string())),
                };
                let body = self.parse_formula()?;
                if word == "all" {
                    Ok(Formula::forall(var, body))
                } else {
                    Ok(Formula::exists(var, body))
                }
            }
            w if self.spec.predicates().contains(w) => {
                let mut args = Vec::new();
                if let Some(t) = self.peek() {
                    if self.starts_arg_list(&t.clone()) {
                        args.push(self.parse_arg_list()?);
                        while self.peek() == Some(&Token::Comma) {
                            self.pos += 1;
                            args.push(self.parse_arg_list()?);
                        }
                    }
                }
                Ok(Formula::Pred(word, args))
            }
            other => Err(ParseError::ExpectedFormula(other.to_string())),
        }
    }

    fn parse_arg_list(&mut self) -> Result<ArgList, ParseError> {
        match self.spec.grammar() {
            Grammar::Term { .. } => self.parse_term(),
            Grammar::Strings { .. } => self.parse_string(),
        }
    }

    fn parse_term(&mut self) -> Result<ArgList, ParseError> {
        let token = self.next()?;
        let word = match token {
            Token::Word(w) => w,
            Token::LBracket => return Err(ParseError::StringSyntaxInTermGrammar),
            other => return Err(ParseError::ExpectedArgList(other.to_string())),
        };
        if let Some(v) = parse_var_token(&word) {
            return Ok(ArgList::Leaf(Atom::Var(v)));
        }
        if let Some(ident) = word.strip_prefix('$') {
            if ident.is_empty() {
                return Err(ParseError::EmptyName);
            }
            return Ok(ArgList::Leaf(Atom::Name(word)));
        }
        let (constants, functions) = match self.spec.grammar() {
            Grammar::Term {
                constants,
                functions,
            } => (constants, functions),
            Grammar::Strings { .. } => unreachable!("term parser runs under term grammars"),
        };
        if constants.contains(&word) {
            return Ok(ArgList::Leaf(Atom::Sym(word)));
        }
        if let Some(&arity) = functions.get(&word) {
            self.expect(Token::LParen)?;
            let mut children = Vec::new();
            loop {
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    Some(_) => children.push(self.parse_term()?),
                    None => return Err(ParseError::UnexpectedEnd),
                }
            }
            if children.len() != arity {
                return Err(ParseError::Arity {
                    symbol: word,
                    expected: arity,
                    found: children.len(),
                });
            }
            return Ok(ArgList::Apply(word, children));
        }
        if word.starts_with('x') && word.len() > 1 && word[1..].bytes().all(|b| b.is_ascii_digit())
        {
            return Err(ParseError::BadVariable(word));
        }
        Err(ParseError::UnboundSymbol(word))
    }

    fn parse_string(&mut self) -> Result<ArgList, ParseError> {
        let token = self.next()?;
        if token != Token::LBracket {
            return Err(ParseError::ExpectedBracket(token.to_string()));
        }
        let atoms = match self.spec.grammar() {
            Grammar::Strings { atoms, .. } => atoms,
            Grammar::Term { .. } => unreachable!("string parser runs under string grammars"),
        };
        let mut leaves = Vec::new();
        loop {
            let t = self.next()?;
            match t {
                Token::RBracket => break,
                Token::Word(w) => {
                    if let Some(v) = parse_var_token(&w) {
                        leaves.push(ArgList::Leaf(Atom::Var(v)));
                    } else if let Some(ident) = w.strip_prefix('$') {
                        if ident.is_empty() {
                            return Err(ParseError::EmptyName);
                        }
                        leaves.push(ArgList::Leaf(Atom::Name(w)));
                    } else if atoms.contains(&w) {
                        leaves.push(ArgList::Leaf(Atom::Sym(w)));
                    } else {
                        return Err(ParseError::UnboundSymbol(w));
                    }
                }
                other => return Err(ParseError::UnexpectedToken(other.to_string())),
            }
        }
        if leaves.is_empty() {
            return Err(ParseError::EmptyString);
        }
        Ok(ArgList::Concat(leaves))
    }
}

/// Parses a formula in prefix notation against the given language.
pub fn parse_formula(text: &str, spec: &LanguageSpec) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, spec);
    let f = p.parse_formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a single argument list against the given language.
pub fn parse_arg_list(text: &str, spec: &LanguageSpec) -> Result<ArgList, ParseError> {
    let mut p = Parser::new(text, spec);
    let l = p.parse_arg_list()?;
    p.finish()?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::LanguageSpec;

    fn klein_spec() -> LanguageSpec {
        LanguageSpec::term(["*"], [], [], [("*", 2)]).unwrap()
    }

    /// Term grammar where e, a, b, c are constants, so the bare spellings
    /// of the group elements parse as leaves.
    fn klein_const_spec() -> LanguageSpec {
        LanguageSpec::term(
            ["*", "e", "a", "b", "c"],
            [],
            ["e", "a", "b", "c"],
            [("*", 2)],
        )
        .unwrap()
    }

    fn nullary_spec() -> LanguageSpec {
        LanguageSpec::term([], ["p", "q"], [], []).unwrap()
    }

    fn string_spec() -> LanguageSpec {
        LanguageSpec::strings(["a", "b"], [], true).unwrap()
    }

    #[test]
    fn parses_equality_over_constants() {
        let spec = klein_const_spec();
        let f = parse_formula("~ *(a b) , e", &spec).unwrap();
        assert_eq!(
            f,
            Formula::Eq(
                ArgList::apply("*", vec![ArgList::sym("a"), ArgList::sym("b")]),
                ArgList::sym("e"),
            )
        );
    }

    #[test]
    fn parses_closed_reflexivity() {
        let spec = klein_spec();
        let f = parse_formula("all x1 ~ x1 , x1", &spec).unwrap();
        assert_eq!(
            f,
            Formula::forall(VarId(1), Formula::Eq(ArgList::var(1), ArgList::var(1)))
        );
        assert!(f.is_closed());
    }

    #[test]
    fn parses_nullary_predicates() {
        let spec = nullary_spec();
        let f = parse_formula("-> p q", &spec).unwrap();
        assert_eq!(
            f,
            Formula::implies(Formula::pred("p", vec![]), Formula::pred("q", vec![]))
        );
    }

    #[test]
    fn parses_whitespace_tight_commas() {
        let spec = klein_spec();
        let loose = parse_formula("~ *(x1 x2) , x2", &spec).unwrap();
        let tight = parse_formula("~ *(x1 x2),x2", &spec).unwrap();
        assert_eq!(loose, tight);
    }

    #[test]
    fn parses_group_axioms() {
        let spec = klein_spec();
        let g1 = parse_formula("~ *(*(x1 x2) x3) , *(x1 *(x2 x3))", &spec).unwrap();
        assert_eq!(g1.free().len(), 3);
        let g2 = parse_formula(
            "ex x1 all x2 & ~ *(x1 x2) , x2 ex x3 ~ *(x3 x2) , x1",
            &spec,
        )
        .unwrap();
        assert!(g2.is_closed());
        assert_eq!(g2.to_string(), "ex x1 all x2 & ~ *(x1 x2) , x2 ex x3 ~ *(x3 x2) , x1");
    }

    #[test]
    fn rejects_arity_mismatch() {
        let spec = klein_spec();
        let err = parse_formula("~ *(x1) , x1", &spec).unwrap_err();
        assert_eq!(
            err,
            ParseError::Arity {
                symbol: "*".into(),
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn rejects_unbound_symbols() {
        let spec = klein_spec();
        let err = parse_formula("~ f(x1 x1) , x1", &spec).unwrap_err();
        assert_eq!(err, ParseError::UnboundSymbol("f".into()));
    }

    #[test]
    fn rejects_index_zero_variables() {
        let spec = klein_spec();
        let err = parse_formula("~ x0 , x0", &spec).unwrap_err();
        assert_eq!(err, ParseError::BadVariable("x0".into()));
    }

    #[test]
    fn parses_strings() {
        let spec = string_spec();
        let l = parse_arg_list("[a b x1 $ab]", &spec).unwrap();
        assert_eq!(
            l,
            ArgList::Concat(vec![
                ArgList::sym("a"),
                ArgList::sym("b"),
                ArgList::var(1),
                ArgList::name("$ab"),
            ])
        );
        assert_eq!(l.to_string(), "[a b x1 $ab]");
        assert_eq!(
            parse_arg_list("[]", &spec).unwrap_err(),
            ParseError::EmptyString
        );
    }

    #[test]
    fn subst_replaces_every_leaf() {
        let lam = ArgList::apply("*", vec![ArgList::var(1), ArgList::var(2)]);
        let mu = ArgList::apply("*", vec![ArgList::var(2), ArgList::var(2)]);
        let out = lam.subst_var(VarId(1), &mu);
        assert_eq!(out.to_string(), "*(*(x2 x2) x2)");

        assert_eq!(
            ArgList::var(1).subst_var(VarId(1), &ArgList::name("$e")),
            ArgList::name("$e")
        );
    }

    /// Token-level rewrite of the printed form; an independent route to the
    /// same result for binder-free lists.
    fn textual_subst(printed: &str, var: &str, with: &str) -> String {
        let mut out = String::new();
        let mut word = String::new();
        let mut flush = |word: &mut String, out: &mut String| {
            if !word.is_empty() {
                if word == var {
                    out.push_str(with);
                } else {
                    out.push_str(word);
                }
                word.clear();
            }
        };
        for ch in printed.chars() {
            if ch.is_whitespace() || matches!(ch, '(' | ')' | '[' | ']' | ',') {
                flush(&mut word, &mut out);
                out.push(ch);
            } else {
                word.push(ch);
            }
        }
        flush(&mut word, &mut out);
        out
    }

    #[test]
    fn subst_agrees_with_textual_rewrite() {
        let lam = ArgList::apply("*", vec![ArgList::var(1), ArgList::var(1)]);
        let out = lam.subst_var(VarId(1), &ArgList::name("$a"));
        assert_eq!(out.to_string(), textual_subst("*(x1 x1)", "x1", "$a"));
        assert_eq!(out.to_string(), "*($a $a)");
    }

    #[test]
    fn formula_subst_respects_binders() {
        let refl = Formula::forall(VarId(1), Formula::Eq(ArgList::var(1), ArgList::var(1)));
        assert_eq!(refl.subst_var(VarId(1), &ArgList::name("$a")).unwrap(), refl);

        let f = Formula::Eq(ArgList::var(1), ArgList::name("$e"));
        assert_eq!(
            f.subst_var(VarId(1), &ArgList::name("$a")).unwrap(),
            Formula::Eq(ArgList::name("$a"), ArgList::name("$e"))
        );
    }

    #[test]
    fn formula_subst_under_other_binder() {
        let spec = klein_spec();
        let f = parse_formula("ex x2 ~ *(x1 x2) , $e", &spec).unwrap();
        let g = f.subst_var(VarId(1), &ArgList::name("$b")).unwrap();
        assert_eq!(
            g.to_string(),
            textual_subst(&f.to_string(), "x1", "$b")
        );
        assert_eq!(g.to_string(), "ex x2 ~ *($b x2) , $e");
        assert!(g.free().is_empty());
    }

    #[test]
    fn formula_subst_rejects_non_ground() {
        let f = Formula::Eq(ArgList::var(1), ArgList::var(1));
        let err = f.subst_var(VarId(1), &ArgList::var(2)).unwrap_err();
        assert_eq!(err, SyntaxError::NonGroundSubstituent("x2".into()));
    }

    #[test]
    fn skeleton_orders_names_by_first_occurrence() {
        let lam = ArgList::apply("*", vec![ArgList::name("$a"), ArgList::name("$b")]);
        let (pattern, names) = skeleton(&lam).unwrap();
        assert_eq!(pattern.to_string(), "*(x1 x2)");
        assert_eq!(names, vec!["$a".to_string(), "$b".to_string()]);
    }

    #[test]
    fn skeleton_merges_repeated_names() {
        let lam = ArgList::apply("*", vec![ArgList::name("$a"), ArgList::name("$a")]);
        let (pattern, names) = skeleton(&lam).unwrap();
        assert_eq!(pattern.to_string(), "*(x1 x1)");
        assert_eq!(names, vec!["$a".to_string()]);
    }

    #[test]
    fn skeleton_of_name_free_string_is_identity() {
        let lam = ArgList::concat(vec![ArgList::sym("a"), ArgList::sym("b"), ArgList::sym("a")]);
        let (pattern, names) = skeleton(&lam).unwrap();
        assert_eq!(pattern, lam);
        assert!(names.is_empty());
    }

    #[test]
    fn skeleton_rejects_variables() {
        let err = skeleton(&ArgList::var(1)).unwrap_err();
        assert_eq!(err, SyntaxError::NotGround("x1".into()));
    }

    #[test]
    fn skeleton_substitution_round_trip() {
        let lam = ArgList::apply(
            "*",
            vec![
                ArgList::apply("*", vec![ArgList::name("$b"), ArgList::name("$a")]),
                ArgList::name("$b"),
            ],
        );
        let (mut pattern, names) = skeleton(&lam).unwrap();
        for (i, token) in names.iter().enumerate() {
            pattern = pattern.subst_var(VarId(i + 1), &ArgList::name(token.clone()));
        }
        assert_eq!(pattern.to_string(), lam.to_string());
        assert_eq!(pattern, lam);
    }

    #[test]
    fn free_vars_of_quantifier() {
        let spec = klein_spec();
        let f = parse_formula("all x1 ~ *(x1 x2) , x2", &spec).unwrap();
        assert_eq!(f.free().into_iter().collect::<Vec<_>>(), vec![VarId(2)]);
    }

    #[test]
    fn concat_substitution_splices() {
        let lam = ArgList::concat(vec![ArgList::var(1), ArgList::sym("b")]);
        let mu = ArgList::concat(vec![ArgList::sym("a"), ArgList::sym("a")]);
        let out = lam.subst_var(VarId(1), &mu);
        assert_eq!(out.to_string(), "[a a b]");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_klein_name() -> BoxedStrategy<ArgList> {
            prop_oneof![
                Just("$e".to_string()),
                Just("$a".to_string()),
                Just("$b".to_string()),
                Just("$c".to_string())
            ]
            .prop_map(ArgList::name)
            .boxed()
        }

        fn arb_klein_list(depth: u32) -> BoxedStrategy<ArgList> {
            let leaf = prop_oneof![(1usize..4).prop_map(ArgList::var), arb_klein_name()];
            leaf.prop_recursive(depth, 64, 2, |inner| {
                (inner.clone(), inner)
                    .prop_map(|(a, b)| ArgList::apply("*", vec![a, b]))
            })
            .boxed()
        }

        fn arb_klein_ground_list(depth: u32) -> BoxedStrategy<ArgList> {
            arb_klein_name()
                .prop_recursive(depth, 64, 2, |inner| {
                    (inner.clone(), inner)
                        .prop_map(|(a, b)| ArgList::apply("*", vec![a, b]))
                })
                .boxed()
        }

        fn arb_klein_formula() -> BoxedStrategy<Formula> {
            let atom = (arb_klein_list(2), arb_klein_list(2)).prop_map(|(a, b)| Formula::Eq(a, b));
            atom.prop_recursive(3, 32, 2, |inner| {
                prop_oneof![
                    inner.clone().prop_map(Formula::not),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                    (1usize..4, inner.clone()).prop_map(|(i, f)| Formula::forall(VarId(i), f)),
                    (1usize..4, inner).prop_map(|(i, f)| Formula::exists(VarId(i), f)),
                ]
            })
            .boxed()
        }

        fn arb_string_list() -> BoxedStrategy<ArgList> {
            proptest::collection::vec(
                prop_oneof![
                    Just(ArgList::sym("a")),
                    Just(ArgList::sym("b")),
                    (1usize..4).prop_map(ArgList::var),
                    prop_oneof![Just("$a".to_string()), Just("$ab".to_string())]
                        .prop_map(ArgList::name),
                ],
                1..6,
            )
            .prop_map(ArgList::concat)
            .boxed()
        }

        proptest! {
            #[test]
            fn print_parse_round_trip_terms(f in arb_klein_formula()) {
                let spec = klein_spec();
                let printed = f.to_string();
                let reparsed = parse_formula(&printed, &spec).unwrap();
                prop_assert_eq!(&reparsed, &f);
                prop_assert_eq!(reparsed.to_string(), printed);
            }

            #[test]
            fn print_parse_round_trip_strings(l in arb_string_list()) {
                let spec = string_spec();
                let printed = l.to_string();
                let reparsed = parse_arg_list(&printed, &spec).unwrap();
                prop_assert_eq!(&reparsed, &l);
                prop_assert_eq!(reparsed.to_string(), printed);
            }

            #[test]
            fn subst_var_set_law(lam in arb_klein_list(2), mu in arb_klein_list(2)) {
                let x = VarId(1);
                let out = lam.subst_var(x, &mu);
                let mut expected = lam.vars();
                if expected.remove(&x) {
                    expected.extend(mu.vars());
                }
                prop_assert_eq!(out.vars(), expected);
            }

            #[test]
            fn skeleton_round_trip(lam in arb_klein_ground_list(3)) {
                let (mut pattern, names) = skeleton(&lam).unwrap();
                prop_assert!(pattern.names_in_order().is_empty());
                for (i, token) in names.iter().enumerate() {
                    pattern = pattern.subst_var(VarId(i + 1), &ArgList::name(token.clone()));
                }
                prop_assert_eq!(pattern, lam);
            }

            #[test]
            fn free_of_forall_removes_bound(f in arb_klein_formula()) {
                let x = VarId(1);
                let mut expected = f.free();
                expected.remove(&x);
                prop_assert_eq!(Formula::forall(x, f).free(), expected);
            }
        }
    }
}
