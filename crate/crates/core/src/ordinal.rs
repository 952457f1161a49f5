//! Cantor normal form notations for the ordinals up to and including ε₀.
//!
//! An ordinal below ε₀ is stored as a strictly decreasing list of terms
//! `ω^e·c` with `c ≥ 1`. Because the list is kept normalized, structural
//! equality coincides with equality of the denoted ordinals. `ε₀` itself is
//! an atomic top element and never occurs inside an exponent.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("e0 may not occur inside an exponent")]
    EpsilonInExponent,
    #[error("expression denotes an ordinal above e0")]
    AboveEpsilonZero,
    #[error("zero has no fundamental sequence")]
    ZeroHasNoPredecessor,
    #[error("the norm of e0 is undefined")]
    NormOfEpsilonZero,
    #[error("towers over e0 are not notations")]
    TowerOfEpsilonZero,
    #[error("coefficient overflow")]
    Overflow,
}

/// A single summand `ω^exponent · coefficient` of a Cantor normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> u64 {
        self.coefficient
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ordinal {
    /// Terms with strictly decreasing exponents; empty for zero.
    Cnf(Vec<Term>),
    EpsilonZero,
}

impl Default for Ordinal {
    fn default() -> Self {
        Ordinal::zero()
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::Cnf(Vec::new())
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        Ordinal::monomial(Ordinal::zero(), n)
    }

    pub fn omega() -> Self {
        Ordinal::monomial(Ordinal::one(), 1)
    }

    pub fn epsilon_zero() -> Self {
        Ordinal::EpsilonZero
    }

    /// `ω^exponent · coefficient`. Panics if `exponent` is ε₀; use
    /// [`Ordinal::omega_pow`] when the exponent may be the top element.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Self {
        assert!(!exponent.is_epsilon_zero(), "e0 inside an exponent");
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal::Cnf(vec![Term {
            exponent,
            coefficient,
        }])
    }

    /// `ω^self`, with `ω^ε₀ = ε₀`.
    pub fn omega_pow(&self) -> Ordinal {
        match self {
            Ordinal::EpsilonZero => Ordinal::EpsilonZero,
            e => Ordinal::monomial(e.clone(), 1),
        }
    }

    pub fn terms(&self) -> &[Term] {
        match self {
            Ordinal::Cnf(ts) => ts,
            Ordinal::EpsilonZero => &[],
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ordinal::Cnf(ts) if ts.is_empty())
    }

    pub fn is_epsilon_zero(&self) -> bool {
        matches!(self, Ordinal::EpsilonZero)
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms().last(), Some(t) if t.exponent.is_zero())
    }

    /// Limit ordinals, counting ε₀.
    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// The value of a finite ordinal.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms() {
            _ if self.is_epsilon_zero() => None,
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    /// Builds a normal form from terms listed in decreasing exponent order,
    /// merging equal neighbours.
    fn from_sorted_terms(terms: impl IntoIterator<Item = Term>) -> Result<Ordinal, OrdinalError> {
        let mut out: Vec<Term> = Vec::new();
        for t in terms {
            if t.coefficient == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.exponent == t.exponent => {
                    last.coefficient = last
                        .coefficient
                        .checked_add(t.coefficient)
                        .ok_or(OrdinalError::Overflow)?;
                }
                _ => out.push(t),
            }
        }
        Ok(Ordinal::Cnf(out))
    }

    /// Ordinal sum. Summands of `self` below the leading term of `rhs` are
    /// absorbed.
    pub(crate) fn add(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        match (self, rhs) {
            (_, Ordinal::EpsilonZero) => Ok(Ordinal::EpsilonZero),
            (Ordinal::EpsilonZero, r) if r.is_zero() => Ok(Ordinal::EpsilonZero),
            (Ordinal::EpsilonZero, _) => Err(OrdinalError::AboveEpsilonZero),
            (Ordinal::Cnf(left), Ordinal::Cnf(right)) => {
                let Some(lead) = right.first() else {
                    return Ok(self.clone());
                };
                let kept = left
                    .iter()
                    .take_while(|t| t.exponent >= lead.exponent)
                    .cloned();
                Ordinal::from_sorted_terms(kept.chain(right.iter().cloned()))
            }
        }
    }

    /// Ordinal product with a natural number on the right.
    pub(crate) fn mul_nat(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if n == 0 {
            return Ok(Ordinal::zero());
        }
        match self {
            Ordinal::EpsilonZero if n == 1 => Ok(Ordinal::EpsilonZero),
            Ordinal::EpsilonZero => Err(OrdinalError::AboveEpsilonZero),
            Ordinal::Cnf(ts) if ts.is_empty() => Ok(Ordinal::zero()),
            Ordinal::Cnf(ts) => {
                let mut ts = ts.clone();
                ts[0].coefficient = ts[0]
                    .coefficient
                    .checked_mul(n)
                    .ok_or(OrdinalError::Overflow)?;
                Ok(Ordinal::Cnf(ts))
            }
        }
    }

    /// Hessenberg (commutative) sum.
    pub fn natural_sum(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self.is_epsilon_zero() || rhs.is_epsilon_zero() {
            return if self.is_zero() || rhs.is_zero() {
                Ok(Ordinal::EpsilonZero)
            } else {
                Err(OrdinalError::AboveEpsilonZero)
            };
        }
        let mut merged: Vec<Term> = self.terms().iter().chain(rhs.terms()).cloned().collect();
        merged.sort_by(|a, b| b.exponent.cmp(&a.exponent));
        Ordinal::from_sorted_terms(merged)
    }

    /// The fundamental sequence `self[x]`.
    ///
    /// `(α+1)[x] = α`, `(γ+ω^(β+1))[x] = γ+ω^β·x`, `(γ+ω^λ)[x] = γ+ω^(λ[x])`
    /// and `ε₀[x] = ω_(x+1)`.
    pub fn fund_seq(&self, x: u64) -> Result<Ordinal, OrdinalError> {
        let terms = match self {
            Ordinal::EpsilonZero => {
                let height = x.checked_add(1).ok_or(OrdinalError::Overflow)?;
                return omega_tower(height, &Ordinal::one());
            }
            Ordinal::Cnf(ts) if ts.is_empty() => return Err(OrdinalError::ZeroHasNoPredecessor),
            Ordinal::Cnf(ts) => ts,
        };
        let (last, init) = terms.split_last().expect("nonzero");
        let mut prefix: Vec<Term> = init.to_vec();
        if last.coefficient > 1 {
            prefix.push(Term {
                exponent: last.exponent.clone(),
                coefficient: last.coefficient - 1,
            });
        }
        let e = &last.exponent;
        if e.is_zero() {
            return Ordinal::from_sorted_terms(prefix);
        }
        let tail = if e.is_successor() {
            Term {
                exponent: e.fund_seq(0)?,
                coefficient: x,
            }
        } else {
            Term {
                exponent: e.fund_seq(x)?,
                coefficient: 1,
            }
        };
        prefix.push(tail);
        Ordinal::from_sorted_terms(prefix)
    }

    /// The number of ω symbols in the coefficient-expanded normal form.
    ///
    /// Each summand `1` counts once, a bare `ω` counts once and `ω^e` with
    /// `e ≥ 2` counts `1 + |e|`, so `|n| = n`, `|ω| = 1` and `|ω^ω·2| = 4`.
    pub fn norm(&self) -> Result<u64, OrdinalError> {
        if self.is_epsilon_zero() {
            return Err(OrdinalError::NormOfEpsilonZero);
        }
        let mut total: u64 = 0;
        for t in self.terms() {
            let weight = match t.exponent.as_nat() {
                Some(0) | Some(1) => 1,
                _ => t.exponent.norm()?.checked_add(1).ok_or(OrdinalError::Overflow)?,
            };
            let contribution = weight
                .checked_mul(t.coefficient)
                .ok_or(OrdinalError::Overflow)?;
            total = total
                .checked_add(contribution)
                .ok_or(OrdinalError::Overflow)?;
        }
        Ok(total)
    }

    fn successor(&self) -> Result<Ordinal, OrdinalError> {
        self.add(&Ordinal::one())
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ordinal::EpsilonZero, Ordinal::EpsilonZero) => Ordering::Equal,
            (Ordinal::EpsilonZero, _) => Ordering::Greater,
            (_, Ordinal::EpsilonZero) => Ordering::Less,
            (Ordinal::Cnf(a), Ordinal::Cnf(b)) => {
                for (x, y) in a.iter().zip(b) {
                    let ord = x
                        .exponent
                        .cmp(&y.exponent)
                        .then(x.coefficient.cmp(&y.coefficient));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                a.len().cmp(&b.len())
            }
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `ω_n(base)`: `ω_0(α) = α`, `ω_(n+1)(α) = ω^(ω_n(α))`.
pub fn omega_tower(n: u64, base: &Ordinal) -> Result<Ordinal, OrdinalError> {
    if base.is_epsilon_zero() {
        return Err(OrdinalError::TowerOfEpsilonZero);
    }
    let mut acc = base.clone();
    for _ in 0..n {
        acc = Ordinal::monomial(acc, 1);
    }
    Ok(acc)
}

/// A witness for `start →_k target`: the orbit of `start` under
/// `fund_seq(·, k)` passes through `target`.
///
/// Orbits can be astronomically long (their length is a Hardy-style
/// function of `k`), so the path is stored by its endpoints and walked
/// lazily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionPath {
    start: Ordinal,
    target: Ordinal,
    k: u64,
}

impl ReductionPath {
    pub fn start(&self) -> &Ordinal {
        &self.start
    }

    pub fn target(&self) -> &Ordinal {
        &self.target
    }

    pub fn step_index(&self) -> u64 {
        self.k
    }

    /// Walks the path from `start` to `target`, both included.
    pub fn iter(&self) -> ReductionIter<'_> {
        ReductionIter {
            path: self,
            next: Some(self.start.clone()),
        }
    }

    /// The whole sequence, if it has at most `limit` entries.
    pub fn to_vec_bounded(&self, limit: usize) -> Option<Vec<Ordinal>> {
        let mut out = Vec::new();
        for o in self.iter() {
            if out.len() == limit {
                return None;
            }
            out.push(o);
        }
        Some(out)
    }
}

pub struct ReductionIter<'a> {
    path: &'a ReductionPath,
    next: Option<Ordinal>,
}

impl Iterator for ReductionIter<'_> {
    type Item = Ordinal;

    fn next(&mut self) -> Option<Ordinal> {
        let current = self.next.take()?;
        if current != self.path.target {
            self.next = current.fund_seq(self.path.k).ok();
        }
        Some(current)
    }
}

/// Decides `a →_k b` and returns the path when it exists.
pub fn reduces_to(a: &Ordinal, b: &Ordinal, k: u64) -> Option<ReductionPath> {
    orbit_hits(a, b, k).then(|| ReductionPath {
        start: a.clone(),
        target: b.clone(),
        k,
    })
}

/// Whether the `k`-orbit of `a` passes through `b`, decided from the
/// structure of the two normal forms instead of by walking the orbit.
fn orbit_hits(a: &Ordinal, b: &Ordinal, k: u64) -> bool {
    match a.cmp(b) {
        Ordering::Equal => return true,
        Ordering::Less => return false,
        Ordering::Greater => {}
    }
    if a.is_epsilon_zero() {
        return match a.fund_seq(k) {
            Ok(next) => orbit_hits(&next, b, k),
            Err(_) => false,
        };
    }
    // Strip the common prefix; the orbit of the rest of `a` always passes
    // through its leading power before going below it.
    let (at, bt) = (a.terms(), b.terms());
    let mut i = 0;
    while i < bt.len() && at[i] == bt[i] {
        i += 1;
    }
    let lead = &at[i].exponent;
    let rest_b: Vec<Term> = if i < bt.len() && bt[i].exponent == *lead {
        bt[i + 1..].to_vec()
    } else {
        bt[i..].to_vec()
    };
    power_orbit_hits(lead, &Ordinal::Cnf(rest_b), k)
}

/// Whether the `k`-orbit of `ω^e` passes through `b < ω^e`.
fn power_orbit_hits(e: &Ordinal, b: &Ordinal, k: u64) -> bool {
    let Some((head, rest)) = b.terms().split_first() else {
        return true;
    };
    let f = &head.exponent;
    let j = head.coefficient;
    let rest = Ordinal::Cnf(rest.to_vec());
    if k == 0 {
        // At index 0 a pure power steps to another pure power or to 0.
        let mut g = e.clone();
        loop {
            match g.cmp(f) {
                Ordering::Equal => return j == 1 && rest.is_zero(),
                Ordering::Less => return false,
                Ordering::Greater => {}
            }
            if !g.is_limit() {
                return false;
            }
            g = match g.fund_seq(0) {
                Ok(next) => next,
                Err(_) => return false,
            };
        }
    }
    if !orbit_hits(e, f, k) {
        return false;
    }
    let Ok(f_succ) = f.successor() else {
        return false;
    };
    if f_succ <= *e && orbit_hits(e, &f_succ, k) {
        // ω^(f+1) steps to ω^f·k.
        match j.cmp(&k) {
            Ordering::Less => orbit_hits(&Ordinal::monomial(f.clone(), 1), &rest, k),
            Ordering::Equal => rest.is_zero(),
            Ordering::Greater => false,
        }
    } else {
        // ω^f is reached from a limit exponent, directly as a pure power.
        j == 1 && rest.is_zero()
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = match self {
            Ordinal::EpsilonZero => return f.write_str("e0"),
            Ordinal::Cnf(ts) if ts.is_empty() => return f.write_str("0"),
            Ordinal::Cnf(ts) => ts,
        };
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match t.exponent.as_nat() {
                Some(0) => write!(f, "{}", t.coefficient)?,
                Some(1) => f.write_str("w")?,
                _ => write!(f, "w^({})", t.exponent)?,
            }
            if t.coefficient != 1 && !t.exponent.is_zero() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

/// Parses `0 | w | e0 | w^(<expr>) | <term>*<nat> | <expr>+<expr>` into its
/// normal form. Whitespace is ignored; `w^2` and `w^w` are accepted as
/// shorthands for parenthesized exponents.
pub fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalError> {
    let mut p = Parser {
        chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
        pos: 0,
        len: text.len(),
    };
    let value = p.expr(false)?;
    if let Some((at, c)) = p.peek() {
        return Err(p.error_at(at, format!("unexpected '{c}'")));
    }
    Ok(value)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.len, |(at, _)| at)
    }

    fn error_at(&self, pos: usize, msg: impl Into<String>) -> OrdinalError {
        OrdinalError::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some((_, d)) if d == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), OrdinalError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error_at(self.offset(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self, in_exponent: bool) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term(in_exponent)?;
        while self.eat('+') {
            let rhs = self.term(in_exponent)?;
            acc = acc.add(&rhs)?;
        }
        Ok(acc)
    }

    fn term(&mut self, in_exponent: bool) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.atom(in_exponent)?;
        while self.eat('*') {
            let n = self.nat()?;
            acc = acc.mul_nat(n)?;
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        let start = self.offset();
        let mut digits = String::new();
        while let Some((_, c)) = self.peek().filter(|(_, c)| c.is_ascii_digit()) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(self.error_at(start, "expected a natural number"));
        }
        digits
            .parse()
            .map_err(|_| self.error_at(start, "natural number out of range"))
    }

    fn atom(&mut self, in_exponent: bool) -> Result<Ordinal, OrdinalError> {
        let at = self.offset();
        match self.peek() {
            Some((_, c)) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some((_, '(')) => {
                self.pos += 1;
                let inner = self.expr(in_exponent)?;
                self.expect(')')?;
                Ok(inner)
            }
            Some((_, 'e')) => {
                self.pos += 1;
                self.expect('0')?;
                if in_exponent {
                    Err(OrdinalError::EpsilonInExponent)
                } else {
                    Ok(Ordinal::EpsilonZero)
                }
            }
            Some((_, 'w')) => {
                self.pos += 1;
                if self.eat('^') {
                    let exponent = self.atom(true)?;
                    Ok(Ordinal::monomial(exponent, 1))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some((_, c)) => Err(self.error_at(at, format!("unexpected '{c}'"))),
            None => Err(self.error_at(at, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parses_and_normalizes() {
        assert!(o("0").is_zero());
        let a = o("w^(w)*2+w+3");
        let exps: Vec<_> = a.terms().iter().map(|t| (t.exponent().clone(), t.coefficient())).collect();
        assert_eq!(
            exps,
            vec![(Ordinal::omega(), 2), (Ordinal::one(), 1), (Ordinal::zero(), 3)]
        );
        assert_eq!(o("w+w^2"), o("w^(2)"));
        assert_eq!(o("w^2 * 3"), o("w^(2)+w^(2)+w^(2)"));
        assert_eq!(o("3+w"), o("w"));
        assert_eq!(o("(w+1)*3"), o("w*3+1"));
        assert_eq!(o("w^w^w").to_string(), "w^(w^(w))");
    }

    #[test]
    fn renders_canonically() {
        assert_eq!(o("w^(w)*2+w+3").to_string(), "w^(w)*2+w+3");
        assert_eq!(o("w*5").to_string(), "w*5");
        assert_eq!(o("w^(1)").to_string(), "w");
        assert_eq!(o("w^(0)*4").to_string(), "4");
        assert_eq!(Ordinal::epsilon_zero().to_string(), "e0");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(o("e0"), Ordinal::EpsilonZero);
        assert_eq!(parse_ordinal("w^(e0)"), Err(OrdinalError::EpsilonInExponent));
        assert_eq!(parse_ordinal("e0+1"), Err(OrdinalError::AboveEpsilonZero));
        assert_eq!(o("1+e0"), Ordinal::EpsilonZero);
        assert!(matches!(parse_ordinal("w+"), Err(OrdinalError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_ordinal("w x"), Err(OrdinalError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_ordinal(""), Err(OrdinalError::Syntax { .. })));
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(Ordinal::omega().cmp(&Ordinal::nat(3)), Ordering::Greater);
        assert_eq!(o("w^(w)*2+1").cmp(&o("w^(w)*3")), Ordering::Less);
        assert!(o("w^(w^(w))") < Ordinal::EpsilonZero);
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(Ordinal::omega().fund_seq(3).unwrap(), Ordinal::nat(3));
        assert_eq!(Ordinal::EpsilonZero.fund_seq(2).unwrap(), o("w^(w^(w))"));
        assert_eq!(o("w^2").fund_seq(2).unwrap(), o("w*2"));
        assert_eq!(o("w^2").fund_seq(0).unwrap(), Ordinal::zero());
        assert_eq!(o("w*2+w").fund_seq(0).unwrap(), o("w*2"));
        assert_eq!(o("w^w").fund_seq(3).unwrap(), o("w^3"));
        assert_eq!(o("w+5").fund_seq(9).unwrap(), o("w+4"));
        assert_eq!(Ordinal::zero().fund_seq(1), Err(OrdinalError::ZeroHasNoPredecessor));
    }

    #[test]
    fn norms() {
        assert_eq!(Ordinal::zero().norm().unwrap(), 0);
        assert_eq!(Ordinal::omega().norm().unwrap(), 1);
        assert_eq!(o("w^(w)*2").norm().unwrap(), 4);
        assert_eq!(Ordinal::nat(7).norm().unwrap(), 7);
        assert_eq!(Ordinal::EpsilonZero.norm(), Err(OrdinalError::NormOfEpsilonZero));
    }

    #[test]
    fn reduction_examples() {
        let p = reduces_to(&Ordinal::omega(), &Ordinal::nat(2), 2).unwrap();
        assert_eq!(p.to_vec_bounded(10).unwrap(), vec![Ordinal::omega(), Ordinal::nat(2)]);
        let a = o("w^(w)+3");
        let p = reduces_to(&a, &a, 4).unwrap();
        assert_eq!(p.to_vec_bounded(10).unwrap(), vec![a]);
        let p = reduces_to(&o("w^2"), &Ordinal::omega(), 1).unwrap();
        assert_eq!(p.to_vec_bounded(10).unwrap(), vec![o("w^2"), Ordinal::omega()]);
        assert!(reduces_to(&Ordinal::omega(), &Ordinal::nat(3), 2).is_none());
        assert!(reduces_to(&Ordinal::nat(3), &Ordinal::omega(), 2).is_none());
    }

    #[test]
    fn towers() {
        let a = o("w^3+1");
        assert_eq!(omega_tower(0, &a).unwrap(), a);
        assert_eq!(omega_tower(2, &Ordinal::one()).unwrap(), o("w^w"));
        assert_eq!(omega_tower(1, &Ordinal::omega()).unwrap(), o("w^w"));
        assert_eq!(omega_tower(1, &Ordinal::EpsilonZero), Err(OrdinalError::TowerOfEpsilonZero));
    }

    #[test]
    fn natural_sum_commutes() {
        let a = o("w^2+w+1");
        let b = o("w^3+w*4");
        assert_eq!(a.natural_sum(&b).unwrap(), o("w^3+w^2+w*5+1"));
        assert_eq!(a.natural_sum(&b).unwrap(), b.natural_sum(&a).unwrap());
    }
}
