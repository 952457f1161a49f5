//! Budgeted evaluation of the fast-growing hierarchy `F_α` for `α ⪯ ε₀`.
//!
//! Evaluation runs a small stack machine. The stack holds the ordinals of
//! the pending function applications, innermost on top, and one budget unit
//! is charged per rule application:
//!
//! * `F_0(v) = v + 1`
//! * `F_(β+1)(v) = F_β^(v+1)(v)` pushes `v + 1` copies of `β`
//! * `F_λ(v) = F_(λ[v])(v)` replaces `λ` by `λ[v]`, and `ε₀[v] = ω_(v+1)`
//!
//! Read bottom to top the stack is non-increasing, so the pending work is
//! summarized by the ordinal `ω^α₀·c₀ + ω^α₁·c₁ + …`, which strictly
//! decreases with every rule application. The value only grows through
//! `F_0`, one unit per step, so it never exceeds `x + budget`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ordinal::{Ordinal, OrdinalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("argument plus budget exceeds the native integer range")]
    ValueOverflow,
    #[error("domination probe needs a below b, got {a} and {b}")]
    NotIncreasing { a: Ordinal, b: Ordinal },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FghResult {
    /// Present iff the evaluation completed within the budget.
    pub value: Option<u64>,
    pub steps_used: u64,
    pub budget: u64,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub ordinal: Ordinal,
    pub arg: u64,
}

/// The stack summaries of an evaluation, starting with the initial state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentTrace {
    pub steps: Vec<TraceStep>,
    pub result: FghResult,
}

impl DescentTrace {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.steps.windows(2).all(|w| w[1].ordinal < w[0].ordinal)
    }
}

impl fmt::Display for DescentTrace {
    /// One line per step: `<step> <ordinal-expr> <arg>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{i} {} {}", s.ordinal, s.arg)?;
        }
        Ok(())
    }
}

struct Machine {
    /// `(ordinal, multiplicity)`, bottom first, ordinals strictly decreasing.
    stack: Vec<(Ordinal, u64)>,
    value: u64,
    steps: u64,
}

impl Machine {
    fn new(a: &Ordinal, x: u64, budget: u64) -> Result<Self, HierarchyError> {
        if budget == 0 {
            return Err(HierarchyError::ZeroBudget);
        }
        x.checked_add(budget).ok_or(HierarchyError::ValueOverflow)?;
        Ok(Machine {
            stack: vec![(a.clone(), 1)],
            value: x,
            steps: 0,
        })
    }

    fn done(&self) -> bool {
        self.stack.is_empty()
    }

    fn push(&mut self, ordinal: Ordinal, count: u64) {
        match self.stack.last_mut() {
            Some((top, c)) if *top == ordinal => *c += count,
            _ => self.stack.push((ordinal, count)),
        }
    }

    fn step(&mut self) -> Result<(), HierarchyError> {
        let (top, count) = self.stack.last_mut().expect("step on finished machine");
        let alpha = top.clone();
        *count -= 1;
        if *count == 0 {
            self.stack.pop();
        }
        self.steps += 1;
        if alpha.is_zero() {
            self.value += 1;
        } else if alpha.is_successor() {
            let pred = alpha.fund_seq(0)?;
            let copies = self.value.checked_add(1).ok_or(HierarchyError::ValueOverflow)?;
            self.push(pred, copies);
        } else {
            let next = alpha.fund_seq(self.value)?;
            self.push(next, 1);
        }
        Ok(())
    }

    fn tag(&self) -> Ordinal {
        if let [(e, 1)] = self.stack.as_slice() {
            return e.omega_pow();
        }
        let mut acc = Ordinal::zero();
        for (e, c) in self.stack.iter().rev() {
            let summand = Ordinal::monomial(e.clone(), *c);
            acc = summand.add(&acc).expect("stack summary stays below e0");
        }
        acc
    }

    fn result(&self, budget: u64) -> FghResult {
        let done = self.done();
        FghResult {
            value: done.then_some(self.value),
            steps_used: self.steps,
            budget,
            exhausted: !done,
        }
    }
}

/// Evaluates `F_a(x)` with at most `budget` rule applications.
pub fn fgh_eval(a: &Ordinal, x: u64, budget: u64) -> Result<FghResult, HierarchyError> {
    let mut m = Machine::new(a, x, budget)?;
    while !m.done() && m.steps < budget {
        m.step()?;
    }
    Ok(m.result(budget))
}

/// Like [`fgh_eval`], also recording the stack summary after every step.
pub fn fgh_trace(a: &Ordinal, x: u64, budget: u64) -> Result<DescentTrace, HierarchyError> {
    let mut m = Machine::new(a, x, budget)?;
    let mut steps = vec![TraceStep {
        ordinal: m.tag(),
        arg: m.value,
    }];
    while !m.done() && m.steps < budget {
        m.step()?;
        steps.push(TraceStep {
            ordinal: m.tag(),
            arg: m.value,
        });
    }
    Ok(DescentTrace {
        steps,
        result: m.result(budget),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbePoint {
    pub x: u64,
    pub lower: FghResult,
    pub upper: FghResult,
    /// `F_a(x)` compared with `F_b(x)`; absent when either side ran out of
    /// budget.
    #[serde(serialize_with = "serialize_verdict")]
    pub verdict: Option<Ordering>,
}

fn serialize_verdict<S: serde::Serializer>(v: &Option<Ordering>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(o) => s.serialize_str(verdict_name(*o)),
        None => s.serialize_none(),
    }
}

pub fn verdict_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominationReport {
    pub lower: Ordinal,
    pub upper: Ordinal,
    pub points: Vec<ProbePoint>,
}

impl DominationReport {
    /// Every sample point completed with `F_a(x) ≤ F_b(x)`.
    pub fn dominated(&self) -> bool {
        self.points
            .iter()
            .all(|p| matches!(p.verdict, Some(Ordering::Less | Ordering::Equal)))
    }
}

/// Compares `F_a` and `F_b` pointwise. An empirical witness only: agreement
/// at finitely many points says nothing about eventual domination.
pub fn domination_probe(
    a: &Ordinal,
    b: &Ordinal,
    xs: &[u64],
    budget: u64,
) -> Result<DominationReport, HierarchyError> {
    if a >= b {
        return Err(HierarchyError::NotIncreasing {
            a: a.clone(),
            b: b.clone(),
        });
    }
    let points = xs
        .iter()
        .map(|&x| {
            let lower = fgh_eval(a, x, budget)?;
            let upper = fgh_eval(b, x, budget)?;
            let verdict = match (lower.value, upper.value) {
                (Some(l), Some(u)) => Some(l.cmp(&u)),
                _ => None,
            };
            Ok(ProbePoint {
                x,
                lower,
                upper,
                verdict,
            })
        })
        .collect::<Result<_, HierarchyError>>()?;
    Ok(DominationReport {
        lower: a.clone(),
        upper: b.clone(),
        points,
    })
}
