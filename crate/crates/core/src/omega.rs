//! ω-logic derivations: labelled trees, a sampling checker, and finite
//! notations for infinite derivations.
//!
//! A derivation maps addresses (finite sequences of child indices) to labels
//! `<rule, sequent, principal, ordinal>` or to nothing. Stored trees
//! ([`FiniteDerivation`]) and notation terms ([`Notation`]) both implement
//! [`OmegaDerivation`].
//!
//! Notations are evaluated lazily. Internally a premise only has to be a
//! subset of the conclusion plus its side formula, which keeps embedding and
//! cut elimination simple. [`NotationDerivation`] then displays every child
//! with exactly `sequent(parent) ∪ {side}`, which is the shape the checker
//! demands; weakening a closed derivation this way keeps it correct.
//!
//! Constructors:
//!
//! * [`embed`] turns a closed finitary proof into a derivation with cuts.
//!   Induction on `A(t)` becomes a chain of `t` cuts.
//! * [`cut_elim`] applies `E` once per cut degree. `E` raises the ordinal
//!   `α` to `ω^α` and replaces top-degree cuts by a reduction of the two
//!   premises.
//! * [`stitch_selector`] joins proofs of `A(0), A(1), …` under one ω rule of
//!   height ε₀.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{omega_tower, Ordinal, OrdinalError};
use crate::proofs::{
    axiom_instance, check_pa_proof, induction_data, or_side_of, FinitaryProof, ProofRule,
    ProofViolation,
};
use crate::syntax::{Formula, Sequent, Signature};

pub type Address = Vec<u64>;

pub fn fmt_address(addr: &[u64]) -> String {
    let parts: Vec<String> = addr.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("invalid proof: {0}")]
    Proof(#[from] ProofViolation),
    #[error("endsequent {0} is not closed")]
    OpenEndsequent(Sequent),
    #[error("k = {k} is below the cut rank {rank}")]
    RankTooHigh { k: usize, rank: usize },
    #[error("cut rank of this notation is not known")]
    UnknownRank,
    #[error("family member {n}: {reason}")]
    Family { n: u64, reason: String },
    #[error("{0} must have exactly one free variable")]
    NotUnary(Formula),
    #[error("cannot derive {0} by evaluation")]
    Untrue(Formula),
    #[error("malformed notation: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

// ---------------------------------------------------------------------------
// Labels

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleName {
    Ax,
    And,
    Or,
    Ex,
    Omega,
    Rep,
    /// Only produced inside notations before cut elimination.
    Cut,
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleName::Ax => "Ax",
            RuleName::And => "And",
            RuleName::Or => "Or",
            RuleName::Ex => "Ex",
            RuleName::Omega => "Omega",
            RuleName::Rep => "Rep",
            RuleName::Cut => "Cut",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeLabel {
    pub rule: RuleName,
    pub sequent: Sequent,
    pub principal: Option<Formula>,
    pub ordinal: Ordinal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_formula: Option<Formula>,
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = match (&self.rule, &self.cut_formula) {
            (RuleName::Cut, Some(c)) => format!("Cut {c}"),
            (r, _) => r.to_string(),
        };
        write!(f, "<{rule}, {}, ", self.sequent)?;
        match &self.principal {
            Some(p) => write!(f, "{p}")?,
            None => f.write_str("0")?,
        }
        write!(f, ", {}>", self.ordinal)
    }
}

/// A possibly infinite labelled tree.
pub trait OmegaDerivation {
    /// The sequent the root must carry.
    fn root_sequent(&self) -> Sequent;
    /// The declared height bound.
    fn bound(&self) -> Ordinal;
    /// The label at `addr`, or `None` outside the tree.
    fn node(&self, addr: &[u64]) -> Result<Option<NodeLabel>, OmegaError>;
}

pub fn eval_node(d: &dyn OmegaDerivation, addr: &[u64]) -> Result<Option<NodeLabel>, OmegaError> {
    d.node(addr)
}

// ---------------------------------------------------------------------------
// Notations

#[derive(Debug, Clone, PartialEq, Eq)]
enum Rule {
    Ax,
    And(Formula),
    Or(Formula, usize),
    Ex(Formula, u64),
    Omega(Formula),
    Rep,
    Cut(Formula),
}

impl Rule {
    fn name(&self) -> RuleName {
        match self {
            Rule::Ax => RuleName::Ax,
            Rule::And(_) => RuleName::And,
            Rule::Or(..) => RuleName::Or,
            Rule::Ex(..) => RuleName::Ex,
            Rule::Omega(_) => RuleName::Omega,
            Rule::Rep => RuleName::Rep,
            Rule::Cut(_) => RuleName::Cut,
        }
    }

    fn principal(&self) -> Option<&Formula> {
        match self {
            Rule::And(p) | Rule::Or(p, _) | Rule::Ex(p, _) | Rule::Omega(p) => Some(p),
            Rule::Ax | Rule::Rep | Rule::Cut(_) => None,
        }
    }

    /// The formula child `i` adds to the conclusion.
    fn side(&self, i: u64) -> Option<Formula> {
        match (self, i) {
            (Rule::And(Formula::And(a, _)), 0) => Some((**a).clone()),
            (Rule::And(Formula::And(_, b)), 1) => Some((**b).clone()),
            (Rule::Or(Formula::Or(a, b), side), 0) => Some(if *side == 0 { (**a).clone() } else { (**b).clone() }),
            (Rule::Ex(Formula::Ex(x, a), n), 0) => Some(a.substitute_numeral(x, *n)),
            (Rule::Omega(Formula::All(x, a)), n) => Some(a.substitute_numeral(x, n)),
            (Rule::Cut(c), 0) => Some(c.clone()),
            (Rule::Cut(c), 1) => Some(c.negate()),
            _ => None,
        }
    }
}

#[derive(Debug)]
struct Info {
    rule: Rule,
    seq: Sequent,
    ordinal: Ordinal,
}

type Env = Arc<HashMap<String, u64>>;

/// A finitary proof prepared for embedding.
#[derive(Debug)]
struct Embedded {
    nodes: Vec<Flat>,
    rank: usize,
}

#[derive(Debug)]
struct Flat {
    proof: FinitaryProof,
    children: Vec<usize>,
    ordinal: Ordinal,
    /// For `Ind`: the larger premise ordinal, the base of the cut chain.
    base: Ordinal,
    axiom: Option<Formula>,
    or_side: usize,
}

impl Embedded {
    fn new(p: &FinitaryProof) -> Result<Self, OmegaError> {
        let mut e = Embedded {
            nodes: Vec::new(),
            rank: 0,
        };
        e.flatten(p)?;
        Ok(e)
    }

    /// Appends `p` after its descendants; the root ends up last.
    fn flatten(&mut self, p: &FinitaryProof) -> Result<usize, OmegaError> {
        let children = p
            .children
            .iter()
            .map(|c| self.flatten(c))
            .collect::<Result<Vec<_>, _>>()?;
        let top = children
            .iter()
            .map(|&i| self.nodes[i].ordinal.clone())
            .max()
            .unwrap_or_else(Ordinal::zero);
        let mut axiom = None;
        let mut base = Ordinal::zero();
        let ordinal = match p.rule {
            ProofRule::Ax => Ordinal::one(),
            ProofRule::PaAx => {
                let (f, _) = axiom_instance(&p.sequent)
                    .ok_or_else(|| OmegaError::Malformed("PA-Ax leaf without an axiom".into()))?;
                axiom = Some(f.clone());
                Ordinal::nat(f.degree() as u64 + 1)
            }
            ProofRule::Ind => {
                let ind = induction_data(p).map_err(OmegaError::Malformed)?;
                self.rank = self.rank.max(1 + ind.formula.degree());
                base = top.clone();
                top.add(&Ordinal::omega())?
            }
            ProofRule::Cut => {
                let c = p.principal.as_ref().expect("checked cut");
                self.rank = self.rank.max(1 + c.degree());
                top.add(&Ordinal::one())?
            }
            _ => top.add(&Ordinal::one())?,
        };
        let or_side = if p.rule == ProofRule::Or {
            or_side_of(p).unwrap_or(0)
        } else {
            0
        };
        self.nodes.push(Flat {
            proof: FinitaryProof {
                children: Vec::new(),
                ..p.clone()
            },
            children,
            ordinal,
            base,
            axiom,
            or_side,
        });
        Ok(self.nodes.len() - 1)
    }
}

/// Selects the proof of `A(n)` for each `n`.
#[derive(Clone)]
pub enum Family {
    /// `n ↦` the one-leaf `Ax` proof of `A(n)`.
    AxiomLeaf,
    /// `n ↦` the given open proof with the free variable replaced by `n`.
    Template(Arc<FinitaryProof>),
    Custom(Arc<dyn Fn(u64) -> FinitaryProof + Send + Sync>),
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::AxiomLeaf => f.write_str("AxiomLeaf"),
            Family::Template(_) => f.write_str("Template"),
            Family::Custom(_) => f.write_str("Custom"),
        }
    }
}

#[derive(Debug)]
struct Stitch {
    body: Formula,
    var: String,
    sentence: Formula,
    family: Family,
    cap: Ordinal,
}

impl Stitch {
    fn instance(&self, n: u64) -> Formula {
        self.body.substitute_numeral(&self.var, n)
    }

    fn child(&self, n: u64) -> Result<Notation, OmegaError> {
        let fam = |reason: String| OmegaError::Family { n, reason };
        let proof = match &self.family {
            Family::AxiomLeaf => FinitaryProof::leaf(ProofRule::Ax, Sequent::singleton(self.instance(n))),
            Family::Template(p) => p.substitute_numeral(&self.var, n),
            Family::Custom(f) => f(n),
        };
        check_pa_proof(&proof).map_err(|v| fam(v.to_string()))?;
        let expected = Sequent::singleton(self.instance(n));
        if proof.sequent != expected {
            return Err(fam(format!("proves {} instead of {expected}", proof.sequent)));
        }
        let h = embed(&proof).map_err(|e| fam(e.to_string()))?;
        let k = h.rank().expect("embeddings know their rank");
        cut_elim(&h, k)
    }
}

#[derive(Debug)]
enum Kind {
    Emb { proof: Arc<Embedded>, idx: usize, env: Env },
    IndChain { proof: Arc<Embedded>, idx: usize, env: Env, k: u64, top: bool },
    Truth(Formula),
    Rep { seq: Sequent, ordinal: Ordinal, child: Notation },
    E { degree: usize, inner: Notation },
    Reduce { u: Formula, du: Notation, de: Notation },
    Invert { u: Formula, idx: u64, d: Notation },
    Strip { lit: Formula, d: Notation },
    Stitch(Arc<Stitch>),
}

#[derive(Debug)]
struct NodeData {
    kind: Kind,
    info: OnceLock<Result<Arc<Info>, OmegaError>>,
}

/// A finite term denoting an ω-derivation, possibly with cuts.
#[derive(Debug, Clone)]
pub struct Notation(Arc<NodeData>);

fn component(u: &Formula, idx: u64) -> Result<Formula, OmegaError> {
    match (u, idx) {
        (Formula::All(x, a), n) => Ok(a.substitute_numeral(x, n)),
        (Formula::And(a, _), 0) => Ok((**a).clone()),
        (Formula::And(_, b), 1) => Ok((**b).clone()),
        _ => Err(OmegaError::Malformed(format!("no component {idx} of {u}"))),
    }
}

fn decide(sig: &Signature, f: &Formula) -> Option<bool> {
    sig.eval_quantifier_free(f)
}

impl Notation {
    fn new(kind: Kind) -> Self {
        Notation(Arc::new(NodeData {
            kind,
            info: OnceLock::new(),
        }))
    }

    fn emb(proof: &Arc<Embedded>, idx: usize, env: Env) -> Result<Self, OmegaError> {
        let flat = &proof.nodes[idx];
        Ok(match flat.proof.rule {
            ProofRule::PaAx => {
                let f = flat.axiom.as_ref().expect("flattened axiom");
                Notation::new(Kind::Truth(f.close(&env)))
            }
            ProofRule::Ind => {
                let t = flat.proof.term.as_ref().expect("checked induction");
                match t.eval(&env) {
                    0 => Notation::new(Kind::Rep {
                        seq: flat.proof.sequent.close(&env),
                        ordinal: flat.ordinal.clone(),
                        child: Notation::emb(proof, flat.children[0], env)?,
                    }),
                    m => Notation::new(Kind::IndChain {
                        proof: proof.clone(),
                        idx,
                        env,
                        k: m,
                        top: true,
                    }),
                }
            }
            _ => Notation::new(Kind::Emb {
                proof: proof.clone(),
                idx,
                env,
            }),
        })
    }

    fn e(degree: usize, inner: Notation) -> Self {
        Notation::new(Kind::E { degree, inner })
    }

    fn strip(lit: Formula, d: Notation) -> Self {
        Notation::new(Kind::Strip { lit, d })
    }

    fn reduce(u: Formula, du: Notation, de: Notation) -> Self {
        Notation::new(Kind::Reduce { u, du, de })
    }

    /// Inversion of `u` at `idx`, skipping inferences that introduce `u`.
    fn invert(u: Formula, idx: u64, mut d: Notation) -> Result<Self, OmegaError> {
        loop {
            let di = d.info()?;
            let introduces = match &di.rule {
                Rule::Omega(p) | Rule::And(p) => *p == u,
                _ => false,
            };
            if !introduces {
                return Ok(Notation::new(Kind::Invert { u, idx, d }));
            }
            d = d
                .child(idx)?
                .ok_or_else(|| OmegaError::Malformed(format!("missing premise {idx} of {u}")))?;
        }
    }

    fn info(&self) -> Result<Arc<Info>, OmegaError> {
        self.0.info.get_or_init(|| self.compute_info().map(Arc::new)).clone()
    }

    fn compute_info(&self) -> Result<Info, OmegaError> {
        let sig = Signature::standard();
        Ok(match &self.0.kind {
            Kind::Emb { proof, idx, env } => {
                let flat = &proof.nodes[*idx];
                let p = &flat.proof;
                let principal = || p.principal.as_ref().expect("checked principal").close(env);
                let rule = match p.rule {
                    ProofRule::Ax => Rule::Ax,
                    ProofRule::And => Rule::And(principal()),
                    ProofRule::Or => Rule::Or(principal(), flat.or_side),
                    ProofRule::Ex => Rule::Ex(principal(), p.term.as_ref().expect("checked witness").eval(env)),
                    ProofRule::All => Rule::Omega(principal()),
                    ProofRule::Cut => Rule::Cut(principal()),
                    ProofRule::PaAx | ProofRule::Ind => unreachable!("normalized by Notation::emb"),
                };
                Info {
                    rule,
                    seq: p.sequent.close(env),
                    ordinal: flat.ordinal.clone(),
                }
            }
            Kind::IndChain { proof, idx, env, k, top } => {
                let flat = &proof.nodes[*idx];
                let ind = induction_data(&flat.proof).map_err(OmegaError::Malformed)?;
                let inst = |n: u64| ind.formula.substitute_numeral(ind.variable, n).close(env);
                let concl = flat.proof.sequent.close(env);
                let (seq, ordinal) = if *top {
                    (concl, flat.ordinal.clone())
                } else {
                    (concl.with(&inst(*k)), flat.base.add(&Ordinal::nat(*k))?)
                };
                Info {
                    rule: Rule::Cut(inst(k - 1)),
                    seq,
                    ordinal,
                }
            }
            Kind::Truth(f) => {
                let rule = match f {
                    Formula::Lit(_) if sig.is_true_literal(f) => Rule::Ax,
                    Formula::And(..) => Rule::And(f.clone()),
                    Formula::Or(a, b) => {
                        let side = [a, b]
                            .iter()
                            .position(|x| decide(&sig, x) == Some(true))
                            .ok_or_else(|| OmegaError::Untrue(f.clone()))?;
                        Rule::Or(f.clone(), side)
                    }
                    Formula::All(..) => Rule::Omega(f.clone()),
                    _ => return Err(OmegaError::Untrue(f.clone())),
                };
                Info {
                    rule,
                    seq: Sequent::singleton(f.clone()),
                    ordinal: Ordinal::nat(f.degree() as u64 + 1),
                }
            }
            Kind::Rep { seq, ordinal, .. } => Info {
                rule: Rule::Rep,
                seq: seq.clone(),
                ordinal: ordinal.clone(),
            },
            Kind::E { degree, inner } => {
                let ii = inner.info()?;
                let rule = match &ii.rule {
                    Rule::Cut(c) if c.degree() == *degree => Rule::Rep,
                    r => r.clone(),
                };
                Info {
                    rule,
                    seq: ii.seq.clone(),
                    ordinal: ii.ordinal.omega_pow(),
                }
            }
            Kind::Reduce { u, du, de } => {
                let (ui, ei) = (du.info()?, de.info()?);
                let neg = u.negate();
                let rule = match (&ei.rule, u) {
                    (Rule::Ex(p, n), Formula::All(..)) if *p == neg => Rule::Cut(component(u, *n)?),
                    (Rule::Or(p, side), Formula::And(..)) if *p == neg => Rule::Cut(component(u, *side as u64)?),
                    (r, _) => r.clone(),
                };
                Info {
                    rule,
                    seq: ui.seq.without(u).union(&ei.seq.without(&neg)),
                    ordinal: ui.ordinal.natural_sum(&ei.ordinal)?,
                }
            }
            Kind::Invert { u, idx, d } => {
                let di = d.info()?;
                Info {
                    rule: di.rule.clone(),
                    seq: di.seq.without(u).with(&component(u, *idx)?),
                    ordinal: di.ordinal.clone(),
                }
            }
            Kind::Strip { lit, d } => {
                let di = d.info()?;
                Info {
                    rule: di.rule.clone(),
                    seq: di.seq.without(lit),
                    ordinal: di.ordinal.clone(),
                }
            }
            Kind::Stitch(s) => Info {
                rule: Rule::Omega(s.sentence.clone()),
                seq: Sequent::singleton(s.sentence.clone()),
                ordinal: s.cap.clone(),
            },
        })
    }

    /// The `i`-th premise, `None` past the rule's arity.
    pub fn child(&self, i: u64) -> Result<Option<Notation>, OmegaError> {
        let info = self.info()?;
        let arity = match info.rule {
            Rule::Ax => 0,
            Rule::Or(..) | Rule::Ex(..) | Rule::Rep => 1,
            Rule::And(_) | Rule::Cut(_) => 2,
            Rule::Omega(_) => u64::MAX,
        };
        if i >= arity {
            return Ok(None);
        }
        let missing = || OmegaError::Malformed(format!("premise {i} vanished"));
        let sig = Signature::standard();
        Ok(Some(match &self.0.kind {
            Kind::Emb { proof, idx, env } => {
                let flat = &proof.nodes[*idx];
                match flat.proof.rule {
                    ProofRule::All => {
                        let y = flat.proof.eigenvariable.as_ref().expect("checked eigenvariable");
                        let mut env2 = (**env).clone();
                        env2.insert(y.clone(), i);
                        Notation::emb(proof, flat.children[0], Arc::new(env2))?
                    }
                    _ => Notation::emb(proof, flat.children[i as usize], env.clone())?,
                }
            }
            Kind::IndChain { proof, idx, env, k, .. } => {
                let flat = &proof.nodes[*idx];
                if i == 0 {
                    if *k == 1 {
                        Notation::emb(proof, flat.children[0], env.clone())?
                    } else {
                        Notation::new(Kind::IndChain {
                            proof: proof.clone(),
                            idx: *idx,
                            env: env.clone(),
                            k: k - 1,
                            top: false,
                        })
                    }
                } else {
                    let y = flat.proof.eigenvariable.as_ref().expect("checked eigenvariable");
                    let mut env2 = (**env).clone();
                    env2.insert(y.clone(), k - 1);
                    Notation::emb(proof, flat.children[1], Arc::new(env2))?
                }
            }
            Kind::Truth(f) => match (&info.rule, f) {
                (Rule::And(_), Formula::And(a, b)) => Notation::new(Kind::Truth(if i == 0 { (**a).clone() } else { (**b).clone() })),
                (Rule::Or(_, side), Formula::Or(a, b)) => Notation::new(Kind::Truth(if *side == 0 { (**a).clone() } else { (**b).clone() })),
                (Rule::Omega(_), Formula::All(x, a)) => Notation::new(Kind::Truth(a.substitute_numeral(x, i))),
                _ => return Err(missing()),
            },
            Kind::Rep { child, .. } => child.clone(),
            Kind::E { degree, inner } => {
                let ii = inner.info()?;
                match &ii.rule {
                    Rule::Cut(c) if c.degree() == *degree => {
                        let left = inner.child(0)?.ok_or_else(missing)?;
                        let right = inner.child(1)?.ok_or_else(missing)?;
                        let (el, er) = (Notation::e(*degree, left), Notation::e(*degree, right));
                        if *degree == 0 {
                            if sig.is_true_literal(c) {
                                Notation::strip(c.negate(), er)
                            } else {
                                Notation::strip(c.clone(), el)
                            }
                        } else if matches!(c, Formula::All(..) | Formula::And(..)) {
                            Notation::reduce(c.clone(), el, er)
                        } else {
                            Notation::reduce(c.negate(), er, el)
                        }
                    }
                    _ => Notation::e(*degree, inner.child(i)?.ok_or_else(missing)?),
                }
            }
            Kind::Reduce { u, du, de } => {
                let principal_case = matches!(
                    (&info.rule, &de.info()?.rule),
                    (Rule::Cut(_), Rule::Ex(..) | Rule::Or(..))
                );
                if principal_case {
                    let ei = de.info()?;
                    let idx = match &ei.rule {
                        Rule::Ex(_, n) => *n,
                        Rule::Or(_, side) => *side as u64,
                        _ => unreachable!(),
                    };
                    if i == 0 {
                        Notation::invert(u.clone(), idx, du.clone())?
                    } else {
                        Notation::reduce(u.clone(), du.clone(), de.child(0)?.ok_or_else(missing)?)
                    }
                } else {
                    Notation::reduce(u.clone(), du.clone(), de.child(i)?.ok_or_else(missing)?)
                }
            }
            Kind::Invert { u, idx, d } => Notation::invert(u.clone(), *idx, d.child(i)?.ok_or_else(missing)?)?,
            Kind::Strip { lit, d } => Notation::strip(lit.clone(), d.child(i)?.ok_or_else(missing)?),
            Kind::Stitch(s) => s.child(i)?,
        }))
    }

    pub fn rule(&self) -> Result<RuleName, OmegaError> {
        Ok(self.info()?.rule.name())
    }

    /// The sequent this node actually derives, before display widening.
    pub fn sequent(&self) -> Result<Sequent, OmegaError> {
        Ok(self.info()?.seq.clone())
    }

    pub fn ordinal(&self) -> Result<Ordinal, OmegaError> {
        Ok(self.info()?.ordinal.clone())
    }

    /// The node's own label, with its actual sequent.
    pub fn label(&self) -> Result<NodeLabel, OmegaError> {
        let info = self.info()?;
        Ok(label_of(&info, info.seq.clone()))
    }

    /// Bound on cut degrees (`1 +` the largest), for top-level notations.
    pub fn rank(&self) -> Option<usize> {
        match &self.0.kind {
            Kind::Emb { proof, .. } | Kind::IndChain { proof, .. } => Some(proof.rank),
            Kind::Rep { child, .. } => child.rank(),
            Kind::E { degree, inner } => {
                let r = inner.rank()?;
                Some(if r <= degree + 1 { r.min(*degree) } else { r })
            }
            Kind::Stitch(_) | Kind::Truth(_) => Some(0),
            _ => None,
        }
    }

    /// A short rendering of the term's outer constructors.
    pub fn describe(&self) -> String {
        match &self.0.kind {
            Kind::Emb { .. } | Kind::IndChain { .. } | Kind::Rep { .. } | Kind::Truth(_) => "Emb(d)".into(),
            Kind::E { degree, inner } => format!("E{degree}({})", inner.describe()),
            Kind::Stitch(s) => format!("Stitch({})", s.sentence),
            Kind::Reduce { .. } => "Reduce(..)".into(),
            Kind::Invert { .. } => "Invert(..)".into(),
            Kind::Strip { .. } => "Strip(..)".into(),
        }
    }
}

fn label_of(info: &Info, sequent: Sequent) -> NodeLabel {
    NodeLabel {
        rule: info.rule.name(),
        sequent,
        principal: info.rule.principal().cloned(),
        ordinal: info.ordinal.clone(),
        cut_formula: match &info.rule {
            Rule::Cut(c) => Some(c.clone()),
            _ => None,
        },
    }
}

/// Embeds a checked proof of a closed endsequent.
pub fn embed(p: &FinitaryProof) -> Result<Notation, OmegaError> {
    check_pa_proof(p)?;
    if !p.sequent.is_closed() {
        return Err(OmegaError::OpenEndsequent(p.sequent.clone()));
    }
    let e = Arc::new(Embedded::new(p)?);
    let root = e.nodes.len() - 1;
    Notation::emb(&e, root, Env::default())
}

/// `E` applied `k` times, eliminating cut degrees `k - 1` down to 0.
pub fn cut_elim(h: &Notation, k: usize) -> Result<Notation, OmegaError> {
    let rank = h.rank().ok_or(OmegaError::UnknownRank)?;
    if k < rank {
        return Err(OmegaError::RankTooHigh { k, rank });
    }
    Ok((0..k).rev().fold(h.clone(), |acc, d| Notation::e(d, acc)))
}

/// The ω rule over `family(n)` for every `n`, each cut-eliminated. The root
/// carries `cap`, ε₀ by default.
pub fn stitch_selector(a: &Formula, family: Family, cap: Option<Ordinal>) -> Result<Notation, OmegaError> {
    let vars = a.free_vars();
    let var = match vars.iter().collect::<Vec<_>>().as_slice() {
        [v] => (*v).clone(),
        _ => return Err(OmegaError::NotUnary(a.clone())),
    };
    let sentence = Formula::all(&var, a.clone());
    Ok(Notation::new(Kind::Stitch(Arc::new(Stitch {
        body: a.clone(),
        var,
        sentence,
        family,
        cap: cap.unwrap_or_else(Ordinal::epsilon_zero),
    }))))
}

// ---------------------------------------------------------------------------
// Derivations

/// A notation viewed as a derivation, with exact child sequents.
pub struct NotationDerivation {
    root: Notation,
    root_seq: Sequent,
    bound: Ordinal,
    cache: Mutex<HashMap<Address, (Notation, Sequent)>>,
}

impl NotationDerivation {
    pub fn new(root: Notation) -> Result<Self, OmegaError> {
        let root_seq = root.sequent()?;
        let bound = root.ordinal()?;
        Ok(NotationDerivation {
            root,
            root_seq,
            bound,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn notation(&self) -> &Notation {
        &self.root
    }

    fn walk(&self, addr: &[u64]) -> Result<Option<(Notation, Sequent)>, OmegaError> {
        let cached = {
            let cache = self.cache.lock().expect("cache lock");
            (0..=addr.len())
                .rev()
                .find_map(|l| cache.get(&addr[..l]).map(|hit| (l, hit.clone())))
        };
        let (mut depth, (mut node, mut seq)) = cached.unwrap_or((0, (self.root.clone(), self.root_seq.clone())));
        while depth < addr.len() {
            let i = addr[depth];
            let info = node.info()?;
            let Some(child) = node.child(i)? else {
                return Ok(None);
            };
            if let Some(side) = info.rule.side(i) {
                seq = seq.with(&side);
            }
            node = child;
            depth += 1;
            self.cache
                .lock()
                .expect("cache lock")
                .insert(addr[..depth].to_vec(), (node.clone(), seq.clone()));
        }
        Ok(Some((node, seq)))
    }
}

impl OmegaDerivation for NotationDerivation {
    fn root_sequent(&self) -> Sequent {
        self.root_seq.clone()
    }

    fn bound(&self) -> Ordinal {
        self.bound.clone()
    }

    fn node(&self, addr: &[u64]) -> Result<Option<NodeLabel>, OmegaError> {
        Ok(match self.walk(addr)? {
            Some((n, seq)) => Some(label_of(&*n.info()?, seq)),
            None => None,
        })
    }
}

/// A stored finite tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDerivation {
    pub root_sentence: Formula,
    pub bound: Ordinal,
    pub nodes: BTreeMap<Address, NodeLabel>,
}

#[derive(Serialize, Deserialize)]
struct AddressedLabel {
    address: Address,
    #[serde(flatten)]
    label: NodeLabel,
}

#[derive(Serialize, Deserialize)]
struct FiniteFile {
    root_sentence: Formula,
    bound: Ordinal,
    nodes: Vec<AddressedLabel>,
}

impl Serialize for FiniteDerivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FiniteFile {
            root_sentence: self.root_sentence.clone(),
            bound: self.bound.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|(a, l)| AddressedLabel {
                    address: a.clone(),
                    label: l.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteDerivation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = FiniteFile::deserialize(d)?;
        Ok(FiniteDerivation {
            root_sentence: f.root_sentence,
            bound: f.bound,
            nodes: f.nodes.into_iter().map(|n| (n.address, n.label)).collect(),
        })
    }
}

impl FiniteDerivation {
    /// Copies the region probed by `verify_sampled(d, depth, width)`.
    pub fn snapshot(d: &dyn OmegaDerivation, depth: usize, width: u64) -> Result<Self, OmegaError> {
        let root = d.root_sequent();
        let root_sentence = match root.iter().collect::<Vec<_>>().as_slice() {
            [f] => (*f).clone(),
            _ => return Err(OmegaError::Malformed(format!("root {root} is not a single sentence"))),
        };
        let mut nodes = BTreeMap::new();
        let mut frontier = vec![Vec::new()];
        for level in 0..=depth {
            let mut next = Vec::new();
            for addr in frontier {
                if let Some(label) = d.node(&addr)? {
                    if level < depth {
                        next.extend((0..width).map(|i| child_addr(&addr, i)));
                    }
                    nodes.insert(addr, label);
                }
            }
            frontier = next;
        }
        Ok(FiniteDerivation {
            root_sentence,
            bound: d.bound(),
            nodes,
        })
    }
}

impl OmegaDerivation for FiniteDerivation {
    fn root_sequent(&self) -> Sequent {
        Sequent::singleton(self.root_sentence.clone())
    }

    fn bound(&self) -> Ordinal {
        self.bound.clone()
    }

    fn node(&self, addr: &[u64]) -> Result<Option<NodeLabel>, OmegaError> {
        Ok(self.nodes.get(addr).cloned())
    }
}

/// Another derivation with some labels replaced or removed.
pub struct Patched<'a> {
    pub inner: &'a dyn OmegaDerivation,
    pub overrides: BTreeMap<Address, Option<NodeLabel>>,
}

impl<'a> Patched<'a> {
    pub fn new(inner: &'a dyn OmegaDerivation) -> Self {
        Patched {
            inner,
            overrides: BTreeMap::new(),
        }
    }

    /// Replaces the label at `addr` by `f(label)`.
    pub fn edit(
        mut self,
        addr: &[u64],
        f: impl FnOnce(&mut NodeLabel),
    ) -> Result<Self, OmegaError> {
        let mut label = self
            .node(addr)?
            .ok_or_else(|| OmegaError::Malformed(format!("no node at {}", fmt_address(addr))))?;
        f(&mut label);
        self.overrides.insert(addr.to_vec(), Some(label));
        Ok(self)
    }

    pub fn set(mut self, addr: &[u64], label: Option<NodeLabel>) -> Self {
        self.overrides.insert(addr.to_vec(), label);
        self
    }
}

impl OmegaDerivation for Patched<'_> {
    fn root_sequent(&self) -> Sequent {
        self.inner.root_sequent()
    }

    fn bound(&self) -> Ordinal {
        self.inner.bound()
    }

    fn node(&self, addr: &[u64]) -> Result<Option<NodeLabel>, OmegaError> {
        match self.overrides.get(addr) {
            Some(l) => Ok(l.clone()),
            None => self.inner.node(addr),
        }
    }
}

// ---------------------------------------------------------------------------
// Checking

/// Which condition of the definition of an ω-proof tree failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    /// Labels are well formed: sentences, no Cut, ordinal in `[1, ε₀]`.
    Labels,
    /// Presence is closed under prefixes.
    Tree,
    /// The root carries the declared sentence within the bound.
    Root,
    Ax,
    And,
    Or,
    Ex,
    Omega,
    Rep,
    /// Ordinals strictly decrease from parent to child.
    Descent,
    /// The node could not be evaluated.
    Eval,
}

impl Clause {
    pub fn id(self) -> &'static str {
        match self {
            Clause::Labels => "1",
            Clause::Tree => "2",
            Clause::Root => "3",
            Clause::Ax => "4a",
            Clause::And => "4b",
            Clause::Or => "4c",
            Clause::Ex => "4d",
            Clause::Omega => "4e",
            Clause::Rep => "4f",
            Clause::Descent => "5",
            Clause::Eval => "eval",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Clause {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub address: Address,
    pub clause: Clause,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {} at {}: {}", self.clause, fmt_address(&self.address), self.reason)
    }
}

fn child_addr(addr: &[u64], i: u64) -> Address {
    let mut a = addr.to_vec();
    a.push(i);
    a
}

/// Checks the local conditions at `addr`, probing children `0..width`.
/// Returns every violation found; empty means ok.
pub fn check_local(d: &dyn OmegaDerivation, addr: &[u64], width: u64) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |clause: Clause, reason: String| {
        out.push(Violation {
            address: addr.to_vec(),
            clause,
            reason,
        })
    };
    let label = match d.node(addr) {
        Ok(Some(l)) => l,
        Ok(None) => {
            fail(Clause::Tree, "node is absent".into());
            return out;
        }
        Err(e) => {
            fail(Clause::Eval, e.to_string());
            return out;
        }
    };
    let mut children: Vec<(u64, NodeLabel)> = Vec::new();
    for i in 0..width {
        match d.node(&child_addr(addr, i)) {
            Ok(Some(l)) => children.push((i, l)),
            Ok(None) => {}
            Err(e) => fail(Clause::Eval, format!("child {i}: {e}")),
        }
    }
    let sig = Signature::standard();
    let seq = &label.sequent;

    if label.rule == RuleName::Cut {
        fail(Clause::Labels, "Cut is not a rule of the cut-free calculus".into());
    }
    if label.ordinal.is_zero() {
        fail(Clause::Labels, "ordinal 0 is below 1".into());
    }
    if let Some(f) = seq.iter().find(|f| !f.is_sentence()) {
        fail(Clause::Labels, format!("{f} is not a sentence"));
    }
    if addr.is_empty() {
        if *seq != d.root_sequent() {
            fail(Clause::Root, format!("root sequent {seq} is not {}", d.root_sequent()));
        }
        if label.ordinal > d.bound() {
            fail(Clause::Root, format!("root ordinal {} exceeds the bound {}", label.ordinal, d.bound()));
        }
    }

    let child = |i: u64| children.iter().find(|(j, _)| *j == i).map(|(_, l)| l);
    let only = |allowed: u64| children.iter().all(|(j, _)| *j < allowed);
    let principal_in = |clause: Clause, fail: &mut dyn FnMut(Clause, String)| -> Option<Formula> {
        match &label.principal {
            Some(p) if seq.contains(p) => Some(p.clone()),
            Some(p) => {
                fail(clause, format!("principal {p} is not in the sequent"));
                None
            }
            None => {
                fail(clause, "missing principal formula".into());
                None
            }
        }
    };
    let expect_seq = |clause: Clause, i: u64, want: Sequent, fail: &mut dyn FnMut(Clause, String)| match child(i) {
        None => fail(clause, format!("child {i} is absent")),
        Some(c) if c.sequent != want => fail(clause, format!("child {i} has {} instead of {want}", c.sequent)),
        Some(_) => {}
    };

    if children.is_empty() {
        if label.rule != RuleName::Ax {
            fail(Clause::Ax, format!("leaf labelled {}", label.rule));
        } else {
            if let Some(p) = &label.principal {
                fail(Clause::Ax, format!("Ax carries principal {p}"));
            }
            if !seq.iter().any(|f| sig.is_true_literal(f)) {
                fail(Clause::Ax, "no true atomic sentence".into());
            }
        }
    } else {
        match label.rule {
            RuleName::Ax => fail(Clause::Ax, "Ax node has children".into()),
            RuleName::And => {
                if let Some(p) = principal_in(Clause::And, &mut fail) {
                    match &p {
                        Formula::And(a, b) => {
                            expect_seq(Clause::And, 0, seq.with(a), &mut fail);
                            expect_seq(Clause::And, 1, seq.with(b), &mut fail);
                        }
                        _ => fail(Clause::And, format!("principal {p} is not a conjunction")),
                    }
                }
                if !only(2) {
                    fail(Clause::And, "children beyond 1".into());
                }
            }
            RuleName::Or => {
                if let Some(p) = principal_in(Clause::Or, &mut fail) {
                    match (&p, child(0)) {
                        (Formula::Or(a, b), Some(c)) => {
                            if c.sequent != seq.with(a) && c.sequent != seq.with(b) {
                                fail(Clause::Or, format!("child 0 has {} which adds neither disjunct", c.sequent));
                            }
                        }
                        (Formula::Or(..), None) => fail(Clause::Or, "child 0 is absent".into()),
                        _ => fail(Clause::Or, format!("principal {p} is not a disjunction")),
                    }
                }
                if !only(1) {
                    fail(Clause::Or, "children beyond 0".into());
                }
            }
            RuleName::Ex => {
                if let Some(p) = principal_in(Clause::Ex, &mut fail) {
                    match (&p, child(0)) {
                        (Formula::Ex(x, a), Some(c)) => {
                            let fresh: Vec<&Formula> = c.sequent.iter().filter(|f| !seq.contains(f)).collect();
                            let ok = match fresh.as_slice() {
                                [g] => a
                                    .instance_numeral(x, g)
                                    .is_some_and(|_| c.sequent.is_subset(&seq.with(g))),
                                [] => c.sequent == *seq && seq.iter().any(|g| a.instance_numeral(x, g).is_some()),
                                _ => false,
                            };
                            if !ok {
                                fail(Clause::Ex, format!("child 0 has {} which is not the sequent plus an instance", c.sequent));
                            }
                        }
                        (Formula::Ex(..), None) => fail(Clause::Ex, "child 0 is absent".into()),
                        _ => fail(Clause::Ex, format!("principal {p} is not existential")),
                    }
                }
                if !only(1) {
                    fail(Clause::Ex, "children beyond 0".into());
                }
            }
            RuleName::Omega => {
                if let Some(p) = principal_in(Clause::Omega, &mut fail) {
                    match &p {
                        Formula::All(x, a) => {
                            for i in 0..width {
                                expect_seq(Clause::Omega, i, seq.with(&a.substitute_numeral(x, i)), &mut fail);
                            }
                        }
                        _ => fail(Clause::Omega, format!("principal {p} is not universal")),
                    }
                }
            }
            RuleName::Rep => {
                if let Some(p) = &label.principal {
                    fail(Clause::Rep, format!("Rep carries principal {p}"));
                }
                expect_seq(Clause::Rep, 0, seq.clone(), &mut fail);
                if !only(1) {
                    fail(Clause::Rep, "children beyond 0".into());
                }
            }
            RuleName::Cut => {}
        }
    }

    for (i, c) in &children {
        if c.ordinal >= label.ordinal {
            fail(
                Clause::Descent,
                format!("child {i} has ordinal {} not below {}", c.ordinal, label.ordinal),
            );
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub depth: usize,
    pub width: u64,
    pub nodes_probed: usize,
    pub max_ordinal: Option<Ordinal>,
    pub root: Option<NodeLabel>,
    pub violations: Vec<Violation>,
}

/// Runs [`check_local`] on every present address of length below `depth`
/// with entries below `width`, in breadth-first order, so nodes down to
/// length `depth` are probed. Also checks the tree property one level past
/// each absent node.
pub fn verify_sampled(d: &dyn OmegaDerivation, depth: usize, width: u64) -> VerifyReport {
    let mut violations = Vec::new();
    let mut probed = 0;
    let mut max_ordinal: Option<Ordinal> = None;
    let root = d.node(&[]).ok().flatten();
    let mut frontier: Vec<(Address, bool)> = vec![(Vec::new(), true)];
    for level in 0..=depth {
        let mut next = Vec::new();
        for (addr, parent_present) in frontier {
            let label = match d.node(&addr) {
                Ok(l) => l,
                Err(e) => {
                    violations.push(Violation {
                        address: addr,
                        clause: Clause::Eval,
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            match label {
                Some(l) => {
                    probed += 1;
                    if max_ordinal.as_ref().is_none_or(|m| l.ordinal > *m) {
                        max_ordinal = Some(l.ordinal.clone());
                    }
                    if !parent_present {
                        violations.push(Violation {
                            address: addr,
                            clause: Clause::Tree,
                            reason: "present below an absent node".into(),
                        });
                        continue;
                    }
                    if level < depth {
                        violations.extend(check_local(d, &addr, width));
                        next.extend((0..width).map(|i| (child_addr(&addr, i), true)));
                    }
                }
                None if parent_present && level < depth => {
                    next.extend((0..width).map(|i| (child_addr(&addr, i), false)));
                }
                None => {}
            }
        }
        frontier = next;
    }
    if root.is_none() {
        violations.push(Violation {
            address: Vec::new(),
            clause: Clause::Tree,
            reason: "no root".into(),
        });
    }
    violations.dedup();
    VerifyReport {
        ok: violations.is_empty(),
        depth,
        width,
        nodes_probed: probed,
        max_ordinal,
        root,
        violations,
    }
}

/// Whether any present node in the region is labelled Cut.
pub fn find_cut(d: &dyn OmegaDerivation, depth: usize, width: u64) -> Result<Option<Address>, OmegaError> {
    let mut frontier = vec![Vec::new()];
    for level in 0..=depth {
        let mut next = Vec::new();
        for addr in frontier {
            if let Some(l) = d.node(&addr)? {
                if l.rule == RuleName::Cut {
                    return Ok(Some(addr));
                }
                if level < depth {
                    next.extend((0..width).map(|i| child_addr(&addr, i)));
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

/// The bound `cut_elim(h, k)` promises for its root ordinal.
pub fn elimination_bound(h: &Notation, k: usize) -> Result<Ordinal, OmegaError> {
    Ok(omega_tower(k as u64, &h.ordinal()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn seq(fs: &[&str]) -> Sequent {
        fs.iter().map(|s| f(s)).collect()
    }

    fn lt_succ() -> NotationDerivation {
        let n = stitch_selector(&f("Lt(x, S(x))"), Family::AxiomLeaf, None).unwrap();
        NotationDerivation::new(n).unwrap()
    }

    #[test]
    fn stitched_root_and_children() {
        let d = lt_succ();
        let root = d.node(&[]).unwrap().unwrap();
        assert_eq!(root.rule, RuleName::Omega);
        assert_eq!(root.sequent, seq(&["all x Lt(x, S(x))"]));
        assert_eq!(root.principal, Some(f("all x Lt(x, S(x))")));
        assert_eq!(root.ordinal, Ordinal::epsilon_zero());
        let c = d.node(&[3]).unwrap().unwrap();
        assert_eq!(c.sequent, seq(&["all x Lt(x, S(x))", "Lt(SSS0, SSSS0)"]));
        assert_eq!(c.rule, RuleName::Ax);
        assert_eq!(d.node(&[3, 0]).unwrap(), None);
        let r = verify_sampled(&d, 3, 8);
        assert!(r.ok, "{:?}", r.violations);
    }

    #[test]
    fn planted_faults() {
        let d = lt_succ();
        let p = Patched::new(&d)
            .edit(&[2], |l| l.sequent = seq(&["all x Lt(x, S(x))", "Lt(0, S0)"]))
            .unwrap();
        let v = check_local(&p, &[], 4);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].clause, v[0].address.clone()), (Clause::Omega, vec![]));

        let p = Patched::new(&d).edit(&[1], |l| l.ordinal = Ordinal::epsilon_zero()).unwrap();
        let v = check_local(&p, &[], 4);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].clause, Clause::Descent);
    }

    fn one_cut() -> FinitaryProof {
        let text = include_str!("../data/proofs/one_cut.json");
        FinitaryProof::from_json(text).unwrap()
    }

    #[test]
    fn cut_elimination_removes_cuts() {
        let p = one_cut();
        let h = embed(&p).unwrap();
        assert_eq!(h.rank(), Some(2));
        let hd = NotationDerivation::new(h.clone()).unwrap();
        assert!(find_cut(&hd, 2, 4).unwrap().is_some());
        assert!(cut_elim(&h, 1).is_err());
        let e = cut_elim(&h, 2).unwrap();
        let d = NotationDerivation::new(e.clone()).unwrap();
        assert_eq!(d.root_sequent(), p.sequent);
        assert_eq!(find_cut(&d, 4, 8).unwrap(), None);
        assert!(e.ordinal().unwrap() <= elimination_bound(&h, 2).unwrap());
        let r = verify_sampled(&d, 4, 8);
        assert!(r.ok, "{:?}", r.violations);
    }
}
