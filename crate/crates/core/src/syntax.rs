//! Tait-calculus formulas of arithmetic.
//!
//! Terms are built from `0`, variables and successor, so every term is
//! `S^k(0)` or `S^k(v)` and is stored that way. Negation only occurs on
//! atoms: a literal is `R(t…)` or its dual `~R(t…)`, and `~` applied to a
//! compound formula is pushed inwards while parsing. Addition and
//! multiplication are relations (`Add(x, y, z)` is the graph of `+`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown relation symbol {0}")]
    UnknownRelation(String),
    #[error("relation {name} takes {expected} arguments, got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("not a closed literal: {0}")]
    NotClosedLiteral(String),
}

/// `S^succs(0)` when `var` is `None`, `S^succs(var)` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub var: Option<String>,
    pub succs: u64,
}

impl Term {
    pub fn numeral(n: u64) -> Self {
        Term { var: None, succs: n }
    }

    pub fn var(name: &str) -> Self {
        Term {
            var: Some(name.to_string()),
            succs: 0,
        }
    }

    pub fn succ(&self) -> Self {
        Term {
            var: self.var.clone(),
            succs: self.succs + 1,
        }
    }

    pub fn value(&self) -> Option<u64> {
        self.var.is_none().then_some(self.succs)
    }

    /// Closes the term under an assignment; unassigned variables read as 0.
    pub fn eval(&self, env: &HashMap<String, u64>) -> u64 {
        let base = self.var.as_ref().map_or(0, |v| env.get(v).copied().unwrap_or(0));
        base + self.succs
    }

    /// Replaces the variable `v` by `t`.
    pub fn replace(&self, v: &str, t: &Term) -> Term {
        match &self.var {
            Some(x) if x == v => Term {
                var: t.var.clone(),
                succs: t.succs + self.succs,
            },
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.var {
            None => {
                for _ in 0..self.succs {
                    f.write_str("S")?;
                }
                f.write_str("0")
            }
            Some(v) => {
                for _ in 0..self.succs {
                    f.write_str("S(")?;
                }
                f.write_str(v)?;
                for _ in 0..self.succs {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub rel: String,
    pub negated: bool,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Lit(Literal),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Ex(String, Box<Formula>),
    All(String, Box<Formula>),
}

impl Formula {
    pub fn lit(rel: &str, args: Vec<Term>) -> Self {
        Formula::Lit(Literal {
            rel: rel.to_string(),
            negated: false,
            args,
        })
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn ex(v: &str, body: Formula) -> Self {
        Formula::Ex(v.to_string(), Box::new(body))
    }

    pub fn all(v: &str, body: Formula) -> Self {
        Formula::All(v.to_string(), Box::new(body))
    }

    /// The Tait dual.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(Literal {
                negated: !l.negated,
                ..l.clone()
            }),
            Formula::And(a, b) => Formula::or(a.negate(), b.negate()),
            Formula::Or(a, b) => Formula::and(a.negate(), b.negate()),
            Formula::Ex(v, a) => Formula::all(v, a.negate()),
            Formula::All(v, a) => Formula::ex(v, a.negate()),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Lit(_))
    }

    /// Literals have degree 0; every connective and quantifier adds one.
    pub fn degree(&self) -> usize {
        match self {
            Formula::Lit(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.degree().max(b.degree()),
            Formula::Ex(_, a) | Formula::All(_, a) => 1 + a.degree(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Lit(l) => {
                for t in &l.args {
                    if let Some(v) = &t.var {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Ex(v, a) | Formula::All(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, v: &str) -> bool {
        self.free_vars().contains(v)
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces the free occurrences of `v` by `t`. Returns `None` if a
    /// variable of `t` would be captured by a quantifier.
    pub fn substitute(&self, v: &str, t: &Term) -> Option<Formula> {
        Some(match self {
            Formula::Lit(l) => Formula::Lit(Literal {
                args: l.args.iter().map(|a| a.replace(v, t)).collect(),
                ..l.clone()
            }),
            Formula::And(a, b) => Formula::and(a.substitute(v, t)?, b.substitute(v, t)?),
            Formula::Or(a, b) => Formula::or(a.substitute(v, t)?, b.substitute(v, t)?),
            Formula::Ex(x, _) | Formula::All(x, _) if x == v => self.clone(),
            Formula::Ex(x, a) | Formula::All(x, a) => {
                if t.var.as_deref() == Some(x.as_str()) && a.has_free(v) {
                    return None;
                }
                let body = a.substitute(v, t)?;
                match self {
                    Formula::Ex(..) => Formula::ex(x, body),
                    _ => Formula::all(x, body),
                }
            }
        })
    }

    /// Replaces the free occurrences of `v` by the numeral for `n`.
    pub fn substitute_numeral(&self, v: &str, n: u64) -> Formula {
        self.substitute(v, &Term::numeral(n))
            .expect("numerals are closed")
    }

    /// Closes the formula under an assignment; unassigned free variables
    /// read as 0.
    pub fn close(&self, env: &HashMap<String, u64>) -> Formula {
        self.free_vars().iter().fold(self.clone(), |f, v| {
            f.substitute_numeral(v, env.get(v).copied().unwrap_or(0))
        })
    }

    /// The `n` with `self[v := n] == target`, if any. When `v` is not free
    /// in `self`, any `n` works and 0 is returned.
    pub fn instance_numeral(&self, v: &str, target: &Formula) -> Option<u64> {
        let mut bindings = HashMap::new();
        let vars: BTreeSet<String> = [v.to_string()].into();
        if !match_formula(self, target, &vars, &mut Vec::new(), &mut bindings) {
            return None;
        }
        match bindings.get(v) {
            None => Some(0),
            Some(t) => t.value(),
        }
    }

    /// Matches `self` as a pattern whose free variables in `vars` stand for
    /// arbitrary terms.
    pub fn match_pattern(
        &self,
        vars: &BTreeSet<String>,
        target: &Formula,
    ) -> Option<HashMap<String, Term>> {
        let mut bindings = HashMap::new();
        match_formula(self, target, vars, &mut Vec::new(), &mut bindings).then_some(bindings)
    }
}

fn match_term(
    p: &Term,
    t: &Term,
    vars: &BTreeSet<String>,
    bound: &[String],
    bindings: &mut HashMap<String, Term>,
) -> bool {
    match &p.var {
        Some(x) if vars.contains(x) && !bound.contains(x) => {
            if t.succs < p.succs {
                return false;
            }
            let image = Term {
                var: t.var.clone(),
                succs: t.succs - p.succs,
            };
            if image.var.as_ref().is_some_and(|y| bound.contains(y)) {
                return false;
            }
            match bindings.get(x) {
                Some(prev) => *prev == image,
                None => {
                    bindings.insert(x.clone(), image);
                    true
                }
            }
        }
        _ => p == t,
    }
}

fn match_formula(
    p: &Formula,
    t: &Formula,
    vars: &BTreeSet<String>,
    bound: &mut Vec<String>,
    bindings: &mut HashMap<String, Term>,
) -> bool {
    match (p, t) {
        (Formula::Lit(a), Formula::Lit(b)) => {
            a.rel == b.rel
                && a.negated == b.negated
                && a.args.len() == b.args.len()
                && a.args
                    .iter()
                    .zip(&b.args)
                    .all(|(x, y)| match_term(x, y, vars, bound, bindings))
        }
        (Formula::And(a1, a2), Formula::And(b1, b2)) | (Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            match_formula(a1, b1, vars, bound, bindings) && match_formula(a2, b2, vars, bound, bindings)
        }
        (Formula::Ex(x, a), Formula::Ex(y, b)) | (Formula::All(x, a), Formula::All(y, b)) => {
            if x != y {
                return false;
            }
            bound.push(x.clone());
            let ok = match_formula(a, b, vars, bound, bindings);
            bound.pop();
            ok
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Signature

pub type Evaluator = fn(&[u64]) -> bool;

#[derive(Clone)]
pub struct RelationDef {
    pub name: String,
    pub arity: usize,
    pub eval: Evaluator,
}

impl fmt::Debug for RelationDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// The relation symbols available to formulas, each with a decision
/// procedure over the naturals.
#[derive(Debug, Clone)]
pub struct Signature {
    relations: Vec<RelationDef>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature::standard()
    }
}

impl Signature {
    /// `Eq/2`, `Lt/2`, `Add/3` and `Mul/3`.
    pub fn standard() -> Self {
        fn eq(a: &[u64]) -> bool {
            a[0] == a[1]
        }
        fn lt(a: &[u64]) -> bool {
            a[0] < a[1]
        }
        fn add(a: &[u64]) -> bool {
            a[0] as u128 + a[1] as u128 == a[2] as u128
        }
        fn mul(a: &[u64]) -> bool {
            a[0] as u128 * a[1] as u128 == a[2] as u128
        }
        let mut sig = Signature {
            relations: Vec::new(),
        };
        sig.register("Eq", 2, eq);
        sig.register("Lt", 2, lt);
        sig.register("Add", 3, add);
        sig.register("Mul", 3, mul);
        sig
    }

    /// Adds or replaces a relation symbol.
    pub fn register(&mut self, name: &str, arity: usize, eval: Evaluator) {
        self.relations.retain(|r| r.name != name);
        self.relations.push(RelationDef {
            name: name.to_string(),
            arity,
            eval,
        });
    }

    pub fn get(&self, name: &str) -> Option<&RelationDef> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn relations(&self) -> &[RelationDef] {
        &self.relations
    }

    /// Truth of a closed literal in the standard model.
    pub fn eval_literal(&self, f: &Formula) -> Result<bool, SyntaxError> {
        let Formula::Lit(l) = f else {
            return Err(SyntaxError::NotClosedLiteral(f.to_string()));
        };
        let args: Vec<u64> = l
            .args
            .iter()
            .map(Term::value)
            .collect::<Option<_>>()
            .ok_or_else(|| SyntaxError::NotClosedLiteral(f.to_string()))?;
        let def = self
            .get(&l.rel)
            .ok_or_else(|| SyntaxError::UnknownRelation(l.rel.clone()))?;
        if def.arity != args.len() {
            return Err(SyntaxError::Arity {
                name: l.rel.clone(),
                expected: def.arity,
                found: args.len(),
            });
        }
        Ok((def.eval)(&args) != l.negated)
    }

    /// Whether `f` is a closed literal that evaluates to true.
    pub fn is_true_literal(&self, f: &Formula) -> bool {
        self.eval_literal(f).unwrap_or(false)
    }

    /// Truth of a closed quantifier-free formula.
    pub fn eval_quantifier_free(&self, f: &Formula) -> Option<bool> {
        match f {
            Formula::Lit(_) => self.eval_literal(f).ok(),
            Formula::And(a, b) => Some(self.eval_quantifier_free(a)? && self.eval_quantifier_free(b)?),
            Formula::Or(a, b) => Some(self.eval_quantifier_free(a)? || self.eval_quantifier_free(b)?),
            Formula::Ex(..) | Formula::All(..) => None,
        }
    }

    /// Checks relation names and arities throughout `f`.
    pub fn check(&self, f: &Formula) -> Result<(), SyntaxError> {
        match f {
            Formula::Lit(l) => {
                let def = self
                    .get(&l.rel)
                    .ok_or_else(|| SyntaxError::UnknownRelation(l.rel.clone()))?;
                if def.arity != l.args.len() {
                    return Err(SyntaxError::Arity {
                        name: l.rel.clone(),
                        expected: def.arity,
                        found: l.args.len(),
                    });
                }
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.check(a)?;
                self.check(b)
            }
            Formula::Ex(_, a) | Formula::All(_, a) => self.check(a),
        }
    }
}

/// Truth of a closed literal under the standard signature.
pub fn eval_literal(f: &Formula) -> Result<bool, SyntaxError> {
    Signature::standard().eval_literal(f)
}

// ---------------------------------------------------------------------------
// Sequents

/// A finite set of formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sequent(BTreeSet<Formula>);

impl Sequent {
    pub fn new() -> Self {
        Sequent::default()
    }

    pub fn singleton(f: Formula) -> Self {
        Sequent([f].into())
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn insert(&mut self, f: Formula) {
        self.0.insert(f);
    }

    pub fn with(&self, f: &Formula) -> Sequent {
        let mut s = self.clone();
        s.insert(f.clone());
        s
    }

    pub fn without(&self, f: &Formula) -> Sequent {
        let mut s = self.clone();
        s.0.remove(f);
        s
    }

    pub fn union(&self, other: &Sequent) -> Sequent {
        Sequent(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &Sequent) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.0.iter().flat_map(Formula::free_vars).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.0.iter().all(Formula::is_sentence)
    }

    pub fn close(&self, env: &HashMap<String, u64>) -> Sequent {
        self.0.iter().map(|f| f.close(env)).collect()
    }
}

impl FromIterator<Formula> for Sequent {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Sequent(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Sequent {
    type Item = &'a Formula;
    type IntoIter = std::collections::btree_set::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl serde::Serialize for Sequent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|f| f.to_string()))
    }
}

impl<'de> serde::Deserialize<'de> for Sequent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items
            .iter()
            .map(|s| s.parse::<Formula>().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Printing and parsing

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lit(l) => {
                if l.negated {
                    f.write_str("~")?;
                }
                write!(f, "{}(", l.rel)?;
                for (i, t) in l.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Ex(v, a) => write!(f, "ex {v} ({a})"),
            Formula::All(v, a) => write!(f, "all {v} ({a})"),
        }
    }
}

impl FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl FromStr for Term {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = FormulaParser::new(s)?;
        let t = p.term()?;
        p.finish()?;
        Ok(t)
    }
}

/// Parses a formula over the standard signature.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_formula_with(&Signature::standard(), text)
}

/// Grammar: `R(t,…) | ~F | (F & F) | (F | F) | ex v (F) | all v (F)` with
/// terms `0 | n | v | S(t) | SS…0`. `&` binds tighter than `|`.
pub fn parse_formula_with(sig: &Signature, text: &str) -> Result<Formula, SyntaxError> {
    let mut p = FormulaParser::new(text)?;
    let f = p.disjunction()?;
    p.finish()?;
    sig.check(&f)?;
    Ok(f)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(char),
}

struct FormulaParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn is_successor_prefix(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c == 'S')
}

fn is_numeral_ident(s: &str) -> bool {
    s.len() >= 2 && s.ends_with('0') && is_successor_prefix(&s[..s.len() - 1])
}

impl FormulaParser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (at, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    s.push(chars[i].1);
                    i += 1;
                }
                toks.push((at, Tok::Ident(s)));
            } else if c.is_ascii_digit() {
                let mut s = String::new();
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    s.push(chars[i].1);
                    i += 1;
                }
                let n = s.parse().map_err(|_| SyntaxError::Parse {
                    pos: at,
                    msg: "numeral out of range".into(),
                })?;
                toks.push((at, Tok::Num(n)));
            } else if "()~&|,".contains(c) {
                toks.push((at, Tok::Sym(c)));
                i += 1;
            } else {
                return Err(SyntaxError::Parse {
                    pos: at,
                    msg: format!("unexpected '{c}'"),
                });
            }
        }
        Ok(FormulaParser {
            toks,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(at, _)| *at)
    }

    fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.conjunction()?;
        while self.eat('|') {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.unary()?;
        while self.eat('&') {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn variable(&mut self) -> Result<String, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Ident(v)) if is_variable_name(&v) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat('~') {
            return Ok(self.unary()?.negate());
        }
        if self.eat('(') {
            let f = self.disjunction()?;
            self.expect(')')?;
            return Ok(f);
        }
        match self.peek().cloned() {
            Some(Tok::Ident(kw)) if kw == "ex" || kw == "all" => {
                self.pos += 1;
                let v = self.variable()?;
                let body = self.unary()?;
                Ok(if kw == "ex" {
                    Formula::ex(&v, body)
                } else {
                    Formula::all(&v, body)
                })
            }
            Some(Tok::Ident(rel)) => {
                self.pos += 1;
                self.expect('(')?;
                let mut args = vec![self.term()?];
                while self.eat(',') {
                    args.push(self.term()?);
                }
                self.expect(')')?;
                Ok(Formula::lit(&rel, args))
            }
            _ => Err(self.error("expected a formula")),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Term::numeral(n))
            }
            Some(Tok::Ident(s)) if is_numeral_ident(&s) => {
                self.pos += 1;
                Ok(Term::numeral(s.len() as u64 - 1))
            }
            Some(Tok::Ident(s)) if is_successor_prefix(&s) => {
                self.pos += 1;
                self.expect('(')?;
                let inner = self.term()?;
                self.expect(')')?;
                Ok(Term {
                    var: inner.var,
                    succs: inner.succs + s.len() as u64,
                })
            }
            Some(Tok::Ident(s)) if is_variable_name(&s) => {
                self.pos += 1;
                Ok(Term::var(&s))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

fn is_variable_name(s: &str) -> bool {
    s != "ex"
        && s != "all"
        && !is_successor_prefix(s)
        && !is_numeral_ident(s)
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

// ---------------------------------------------------------------------------
// Gödel coding

/// A Gödel number. 0 codes nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GodelCode(pub BigUint);

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Cantor pairing `⟨a, b⟩ = (a + b)(a + b + 1)/2 + b`.
pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

fn code_list(items: impl DoubleEndedIterator<Item = BigUint>) -> BigUint {
    items.rev().fold(BigUint::zero(), |tail, head| pair(&head, &tail) + 1u32)
}

fn decode_list(mut c: BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    while !c.is_zero() {
        let (head, tail) = unpair(&(c - 1u32));
        out.push(head);
        c = tail;
    }
    out
}

fn code_str(s: &str) -> BigUint {
    let bytes: Vec<BigUint> = s.bytes().map(BigUint::from).collect();
    code_list(bytes.into_iter())
}

fn decode_str(c: BigUint) -> Option<String> {
    let bytes: Vec<u8> = decode_list(c)
        .into_iter()
        .map(|b| b.to_u8())
        .collect::<Option<_>>()?;
    String::from_utf8(bytes).ok()
}

fn code_term(t: &Term) -> BigUint {
    let var = t.var.as_deref().map_or(BigUint::zero(), |v| code_str(v) + 1u32);
    pair(&var, &BigUint::from(t.succs))
}

fn decode_term(c: &BigUint) -> Option<Term> {
    let (var, succs) = unpair(c);
    let var = if var.is_zero() {
        None
    } else {
        Some(decode_str(var - 1u32)?)
    };
    Some(Term {
        var,
        succs: succs.to_u64()?,
    })
}

/// Encodes a formula as `1 + ⟨tag, payload⟩`; see `docs/godel-coding.md`.
pub fn encode(f: &Formula) -> GodelCode {
    GodelCode(encode_raw(f))
}

fn encode_raw(f: &Formula) -> BigUint {
    let (tag, payload) = match f {
        Formula::Lit(l) => {
            let args: Vec<BigUint> = l.args.iter().map(code_term).collect();
            let body = pair(&code_str(&l.rel), &code_list(args.into_iter()));
            (0u32, pair(&BigUint::from(l.negated as u32), &body))
        }
        Formula::And(a, b) => (1, pair(&encode_raw(a), &encode_raw(b))),
        Formula::Or(a, b) => (2, pair(&encode_raw(a), &encode_raw(b))),
        Formula::Ex(v, a) => (3, pair(&code_str(v), &encode_raw(a))),
        Formula::All(v, a) => (4, pair(&code_str(v), &encode_raw(a))),
    };
    pair(&BigUint::from(tag), &payload) + 1u32
}

/// The formula coded by `c`, if `c` is a code.
pub fn decode(c: &GodelCode) -> Option<Formula> {
    let f = decode_raw(&c.0)?;
    (encode_raw(&f) == c.0).then_some(f)
}

fn decode_raw(c: &BigUint) -> Option<Formula> {
    if c.is_zero() {
        return None;
    }
    let (tag, payload) = unpair(&(c - BigUint::one()));
    let tag = tag.to_u8()?;
    let (left, right) = unpair(&payload);
    let name = |c: BigUint| decode_str(c).filter(|s| is_variable_name(s));
    Some(match tag {
        0 => {
            let negated = match left.to_u8()? {
                0 => false,
                1 => true,
                _ => return None,
            };
            let (rel, args) = unpair(&right);
            let rel = name(rel)?;
            let args = decode_list(args)
                .iter()
                .map(decode_term)
                .collect::<Option<Vec<_>>>()?;
            if args.is_empty() || args.iter().any(|t| t.var.as_deref().is_some_and(|v| !is_variable_name(v))) {
                return None;
            }
            Formula::Lit(Literal { rel, negated, args })
        }
        1 => Formula::and(decode_raw(&left)?, decode_raw(&right)?),
        2 => Formula::or(decode_raw(&left)?, decode_raw(&right)?),
        3 => Formula::ex(&name(left)?, decode_raw(&right)?),
        4 => Formula::all(&name(left)?, decode_raw(&right)?),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn parses_examples() {
        let lt = f("Lt(x, S(x))");
        assert_eq!(lt.free_vars(), ["x".to_string()].into());
        assert_eq!(lt.to_string(), "Lt(x, S(x))");
        let neg = f("~(Eq(x, 0) & Lt(x, 1))");
        assert_eq!(neg, f("(~Eq(x, 0) | ~Lt(x, S0))"));
        let all = f("all x ( Lt(x, S(x)) )");
        assert!(all.is_sentence());
        assert_eq!(all.to_string(), "all x (Lt(x, S(x)))");
        assert_eq!(f("~~Eq(0, 0)"), f("Eq(0,0)"));
        assert_eq!(f("~all x ex y Lt(x, y)"), f("ex x all y ~Lt(x, y)"));
        assert_eq!(f("Eq(SS(y), SS0)").to_string(), "Eq(S(S(y)), SS0)");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_formula("Foo(x)"),
            Err(SyntaxError::UnknownRelation("Foo".into()))
        );
        assert!(matches!(parse_formula("Lt(x)"), Err(SyntaxError::Arity { .. })));
        assert!(matches!(parse_formula("Lt(x, y"), Err(SyntaxError::Parse { .. })));
        assert!(matches!(parse_formula("ex S (Eq(0,0))"), Err(SyntaxError::Parse { .. })));
    }

    #[test]
    fn substitution() {
        assert_eq!(f("Lt(x, S(x))").substitute_numeral("x", 2), f("Lt(SS0, SSS0)"));
        let closed = f("all x Lt(x, S(x))");
        assert_eq!(closed.substitute_numeral("x", 7), closed);
        assert_eq!(f("ex y Lt(x, y)").substitute_numeral("x", 0), f("ex y Lt(0, y)"));
        assert_eq!(f("ex y Lt(x, y)").substitute("x", &Term::var("y")), None);
    }

    #[test]
    fn degrees() {
        assert_eq!(f("Lt(x, S(x))").degree(), 0);
        assert_eq!(f("all x Lt(x, S(x))").degree(), 1);
        assert_eq!(f("all x (Lt(x, S(x)) | Eq(x, x))").degree(), 2);
    }

    #[test]
    fn literals() {
        assert_eq!(eval_literal(&f("Add(SS0, SSS0, SSSSS0)")), Ok(true));
        assert_eq!(eval_literal(&f("Lt(SSS0, SS0)")), Ok(false));
        assert_eq!(eval_literal(&f("~Eq(0, 0)")), Ok(false));
        assert!(eval_literal(&f("Lt(x, 0)")).is_err());
        assert!(eval_literal(&f("(Eq(0,0) | Eq(0,0))")).is_err());
    }

    #[test]
    fn instances() {
        let a = f("Lt(x, S(x))");
        assert_eq!(a.instance_numeral("x", &f("Lt(SSS0, SSSS0)")), Some(3));
        assert_eq!(a.instance_numeral("x", &f("Lt(SSS0, SSS0)")), None);
        assert_eq!(f("Eq(0,0)").instance_numeral("x", &f("Eq(0,0)")), Some(0));
    }

    #[test]
    fn godel_round_trip() {
        for s in ["Lt(x, S(x))", "all x ex y (Add(x, y, SS0) | ~Eq(y, 0))", "Eq(0, 0)"] {
            let phi = f(s);
            assert_eq!(decode(&encode(&phi)), Some(phi));
        }
        assert_eq!(decode(&GodelCode(BigUint::zero())), None);
        assert_ne!(encode(&f("Eq(0, 0)")), encode(&f("~Eq(0, 0)")));
    }

    #[test]
    fn sequents_are_sets() {
        let a: Sequent = [f("Eq(0,0)"), f("Lt(0,1)")].into_iter().collect();
        let b: Sequent = [f("Lt(0,1)"), f("Eq(0,0)"), f("Eq(0,0)")].into_iter().collect();
        assert_eq!(a, b);
        assert_eq!(a.union(&a), a);
        assert_eq!(a.to_string(), "{Eq(0, 0), Lt(0, S0)}");
    }
}
