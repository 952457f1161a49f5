//! Finitary PA derivations in the Tait calculus.
//!
//! Premises are read up to weakening: a premise must contain its side
//! formula and be a subset of the conclusion plus that side formula. Rules:
//!
//! * `Ax`: a true closed literal, or a literal together with its dual
//! * `PA-Ax`: an instance of a registered axiom, possibly under `all`
//! * `And`, `Or`, `Ex` (with a witness `term`), `All` (with an
//!   `eigenvariable`)
//! * `Cut` on `principal`, left premise `C`, right premise `~C`
//! * `Ind` on `principal` `A` in `variable` `x`: premises `A(0)` and
//!   `~A(y), A(S y)` with eigenvariable `y`, conclusion `A(term)`

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Sequent, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProofRule {
    Ax,
    #[serde(rename = "PA-Ax")]
    PaAx,
    And,
    Or,
    Ex,
    All,
    Cut,
    Ind,
}

impl ProofRule {
    pub fn arity(self) -> usize {
        match self {
            ProofRule::Ax | ProofRule::PaAx => 0,
            ProofRule::Or | ProofRule::Ex | ProofRule::All => 1,
            ProofRule::And | ProofRule::Cut | ProofRule::Ind => 2,
        }
    }
}

impl fmt::Display for ProofRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProofRule::Ax => "Ax",
            ProofRule::PaAx => "PA-Ax",
            ProofRule::And => "And",
            ProofRule::Or => "Or",
            ProofRule::Ex => "Ex",
            ProofRule::All => "All",
            ProofRule::Cut => "Cut",
            ProofRule::Ind => "Ind",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitaryProof {
    pub rule: ProofRule,
    pub sequent: Sequent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvariable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<FinitaryProof>,
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("malformed proof file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] ProofViolation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{rule} node at {}: {reason}", fmt_path(.path))]
pub struct ProofViolation {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub rule: ProofRule,
    pub reason: String,
}

pub fn fmt_path(path: &[usize]) -> String {
    let parts: Vec<String> = path.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

impl FinitaryProof {
    pub fn leaf(rule: ProofRule, sequent: Sequent) -> Self {
        FinitaryProof {
            rule,
            sequent,
            principal: None,
            eigenvariable: None,
            term: None,
            variable: None,
            children: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ProofError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proofs serialize")
    }

    pub fn node(&self, path: &[usize]) -> Option<&FinitaryProof> {
        path.iter().try_fold(self, |p, &i| p.children.get(i))
    }

    /// Substitutes a numeral for a free variable throughout the tree.
    pub fn substitute_numeral(&self, v: &str, n: u64) -> FinitaryProof {
        let bound_here = self.variable.as_deref() == Some(v);
        FinitaryProof {
            rule: self.rule,
            sequent: self.sequent.iter().map(|f| f.substitute_numeral(v, n)).collect(),
            principal: self.principal.as_ref().map(|f| {
                if self.rule == ProofRule::Ind && bound_here {
                    f.clone()
                } else {
                    f.substitute_numeral(v, n)
                }
            }),
            eigenvariable: self.eigenvariable.clone(),
            term: self.term.as_ref().map(|t| t.replace(v, &Term::numeral(n))),
            variable: self.variable.clone(),
            children: self.children.iter().map(|c| c.substitute_numeral(v, n)).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Axioms

#[derive(Debug, Clone)]
pub struct PaAxiom {
    pub name: &'static str,
    pub matrix: Formula,
    vars: BTreeSet<String>,
}

impl PaAxiom {
    /// Matches `f` against the axiom, allowing any prefix of universal
    /// quantifiers and any terms for the axiom's variables.
    pub fn matches(&self, f: &Formula) -> bool {
        let mut body = f;
        while let Formula::All(_, inner) = body {
            body = inner;
        }
        self.matrix.match_pattern(&self.vars, body).is_some()
    }
}

const AXIOMS: &[(&str, &str)] = &[
    ("eq-refl", "Eq(x, x)"),
    ("eq-sym", "~Eq(x, y) | Eq(y, x)"),
    ("eq-trans", "~Eq(x, y) | ~Eq(y, z) | Eq(x, z)"),
    ("succ-nonzero", "~Eq(S(x), 0)"),
    ("succ-inj", "~Eq(S(x), S(y)) | Eq(x, y)"),
    ("add-zero", "Add(x, 0, x)"),
    ("add-succ", "~Add(x, y, z) | Add(x, S(y), S(z))"),
    ("mul-zero", "Mul(x, 0, 0)"),
    ("mul-succ", "~Mul(x, y, z) | ~Add(z, x, w) | Mul(x, S(y), w)"),
    ("lt-zero", "~Lt(x, 0)"),
    ("lt-succ", "Lt(x, S(x))"),
    ("lt-step", "~Lt(x, y) | Lt(x, S(y))"),
    ("lt-split", "~Lt(x, S(y)) | Lt(x, y) | Eq(x, y)"),
];

/// The quantifier-free defining axioms, read universally.
pub fn pa_axioms() -> &'static [PaAxiom] {
    static CELL: OnceLock<Vec<PaAxiom>> = OnceLock::new();
    CELL.get_or_init(|| {
        AXIOMS
            .iter()
            .map(|(name, text)| {
                let matrix: Formula = text.parse().expect("axiom table parses");
                let vars = matrix.free_vars();
                PaAxiom { name, matrix, vars }
            })
            .collect()
    })
}

/// The first formula of `seq` that is an axiom instance.
pub fn axiom_instance(seq: &Sequent) -> Option<(&Formula, &'static PaAxiom)> {
    seq.iter()
        .find_map(|f| pa_axioms().iter().find(|a| a.matches(f)).map(|a| (f, a)))
}

// ---------------------------------------------------------------------------
// Checking

struct Checker<'a> {
    sig: &'a Signature,
}

impl Checker<'_> {
    fn check(&self, p: &FinitaryProof, path: &mut Vec<usize>) -> Result<(), ProofViolation> {
        self.local(p).map_err(|reason| ProofViolation {
            path: path.clone(),
            rule: p.rule,
            reason,
        })?;
        for (i, c) in p.children.iter().enumerate() {
            path.push(i);
            self.check(c, path)?;
            path.pop();
        }
        Ok(())
    }

    fn local(&self, p: &FinitaryProof) -> Result<(), String> {
        for f in &p.sequent {
            self.sig.check(f).map_err(|e| e.to_string())?;
        }
        if p.children.len() != p.rule.arity() {
            return Err(format!(
                "expected {} premises, found {}",
                p.rule.arity(),
                p.children.len()
            ));
        }
        let concl = &p.sequent;
        match p.rule {
            ProofRule::Ax => {
                let ok = concl.iter().any(|f| {
                    self.sig.is_true_literal(f) || (f.is_literal() && concl.contains(&f.negate()))
                });
                ok.then_some(())
                    .ok_or_else(|| "no true closed literal and no complementary pair".to_string())
            }
            ProofRule::PaAx => axiom_instance(concl)
                .map(|_| ())
                .ok_or_else(|| "no instance of a registered axiom".to_string()),
            ProofRule::And => {
                let f = principal_in(p)?;
                let Formula::And(a, b) = f else {
                    return Err(format!("principal {f} is not a conjunction"));
                };
                premise(concl, &p.children[0], a, 0)?;
                premise(concl, &p.children[1], b, 1)
            }
            ProofRule::Or => {
                let f = principal_in(p)?;
                let Formula::Or(a, b) = f else {
                    return Err(format!("principal {f} is not a disjunction"));
                };
                or_side(concl, &p.children[0], a, b).map(|_| ())
            }
            ProofRule::Ex => {
                let f = principal_in(p)?;
                let Formula::Ex(x, a) = f else {
                    return Err(format!("principal {f} is not existential"));
                };
                let t = p.term.as_ref().ok_or("Ex needs a witness term")?;
                let side = a
                    .substitute(x, t)
                    .ok_or_else(|| format!("witness {t} is captured in {f}"))?;
                premise(concl, &p.children[0], &side, 0)
            }
            ProofRule::All => {
                let f = principal_in(p)?;
                let Formula::All(x, a) = f else {
                    return Err(format!("principal {f} is not universal"));
                };
                let y = p.eigenvariable.as_deref().ok_or("All needs an eigenvariable")?;
                if concl.free_vars().contains(y) {
                    return Err(format!("eigenvariable {y} is free in the conclusion"));
                }
                let side = a
                    .substitute(x, &Term::var(y))
                    .ok_or_else(|| format!("eigenvariable {y} is captured in {f}"))?;
                premise(concl, &p.children[0], &side, 0)
            }
            ProofRule::Cut => {
                let c = p.principal.as_ref().ok_or("Cut needs a cut formula")?;
                premise(concl, &p.children[0], c, 0)?;
                premise(concl, &p.children[1], &c.negate(), 1)
            }
            ProofRule::Ind => {
                let ind = induction_data(p)?;
                if !concl.contains(&ind.conclusion) {
                    return Err(format!("conclusion lacks {}", ind.conclusion));
                }
                let y = ind.eigenvariable;
                if concl.free_vars().contains(y) {
                    return Err(format!("eigenvariable {y} is free in the conclusion"));
                }
                if ind.formula.free_vars().iter().any(|v| v == y && v != ind.variable) {
                    return Err(format!("eigenvariable {y} is a parameter of the induction formula"));
                }
                premise(concl, &p.children[0], &ind.base, 0)?;
                let step = &p.children[1];
                if !step.sequent.contains(&ind.step_succ) {
                    return Err(format!("premise 1 lacks {}", ind.step_succ));
                }
                let allowed = concl.with(&ind.step_pred.negate()).with(&ind.step_succ);
                if !step.sequent.is_subset(&allowed) {
                    return Err("premise 1 has formulas outside the conclusion and step formulas".into());
                }
                Ok(())
            }
        }
    }
}

fn principal_in(p: &FinitaryProof) -> Result<&Formula, String> {
    let f = p
        .principal
        .as_ref()
        .ok_or_else(|| format!("{} needs a principal formula", p.rule))?;
    if p.sequent.contains(f) {
        Ok(f)
    } else {
        Err(format!("principal {f} is not in the conclusion"))
    }
}

fn premise(concl: &Sequent, child: &FinitaryProof, side: &Formula, i: usize) -> Result<(), String> {
    if !child.sequent.contains(side) {
        return Err(format!("premise {i} lacks {side}"));
    }
    if !child.sequent.is_subset(&concl.with(side)) {
        return Err(format!("premise {i} has formulas outside the conclusion and {side}"));
    }
    Ok(())
}

fn or_side(concl: &Sequent, child: &FinitaryProof, a: &Formula, b: &Formula) -> Result<usize, String> {
    [a, b]
        .iter()
        .position(|side| premise(concl, child, side, 0).is_ok())
        .ok_or_else(|| format!("premise 0 is neither conclusion plus {a} nor plus {b}"))
}

/// Which disjunct an `Or` node introduces. Assumes a checked node.
pub fn or_side_of(p: &FinitaryProof) -> Option<usize> {
    let Some(Formula::Or(a, b)) = &p.principal else {
        return None;
    };
    or_side(&p.sequent, p.children.first()?, a, b).ok()
}

/// The formulas an `Ind` node talks about.
pub struct Induction<'a> {
    pub formula: &'a Formula,
    pub variable: &'a str,
    pub eigenvariable: &'a str,
    pub term: &'a Term,
    pub conclusion: Formula,
    pub base: Formula,
    pub step_pred: Formula,
    pub step_succ: Formula,
}

pub fn induction_data(p: &FinitaryProof) -> Result<Induction<'_>, String> {
    let formula = p.principal.as_ref().ok_or("Ind needs an induction formula")?;
    let variable = p.variable.as_deref().ok_or("Ind needs a variable")?;
    let eigenvariable = p.eigenvariable.as_deref().ok_or("Ind needs an eigenvariable")?;
    let term = p.term.as_ref().ok_or("Ind needs a term")?;
    let inst = |t: &Term| {
        formula
            .substitute(variable, t)
            .ok_or_else(|| format!("{t} is captured in {formula}"))
    };
    let y = Term::var(eigenvariable);
    Ok(Induction {
        formula,
        variable,
        eigenvariable,
        term,
        conclusion: inst(term)?,
        base: inst(&Term::numeral(0))?,
        step_succ: inst(&y.succ())?,
        step_pred: inst(&y)?,
    })
}

/// Checks every node, reporting the first violation in pre-order.
pub fn check_pa_proof(p: &FinitaryProof) -> Result<(), ProofViolation> {
    check_pa_proof_with(&Signature::standard(), p)
}

pub fn check_pa_proof_with(sig: &Signature, p: &FinitaryProof) -> Result<(), ProofViolation> {
    Checker { sig }.check(p, &mut Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProofMetrics {
    /// Nodes on the longest root-to-leaf path.
    pub depth: usize,
    /// `1 + ` the largest cut-formula degree, 0 when cut-free.
    pub cutrank: usize,
}

pub fn proof_metrics(p: &FinitaryProof) -> Result<ProofMetrics, ProofViolation> {
    check_pa_proof(p)?;
    Ok(metrics(p))
}

fn metrics(p: &FinitaryProof) -> ProofMetrics {
    let own = match (p.rule, &p.principal) {
        (ProofRule::Cut, Some(c)) => 1 + c.degree(),
        _ => 0,
    };
    p.children.iter().map(metrics).fold(
        ProofMetrics {
            depth: 1,
            cutrank: own,
        },
        |acc, m| ProofMetrics {
            depth: acc.depth.max(1 + m.depth),
            cutrank: acc.cutrank.max(m.cutrank),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(fs: &[&str]) -> Sequent {
        fs.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn node(rule: ProofRule, fs: &[&str], children: Vec<FinitaryProof>) -> FinitaryProof {
        FinitaryProof {
            children,
            ..FinitaryProof::leaf(rule, seq(fs))
        }
    }

    fn with_principal(mut p: FinitaryProof, f: &str) -> FinitaryProof {
        p.principal = Some(f.parse().unwrap());
        p
    }

    #[test]
    fn axiom_leaf() {
        let p = node(ProofRule::Ax, &["Lt(0, S0)", "Eq(S0, 0)"], vec![]);
        assert_eq!(check_pa_proof(&p), Ok(()));
        assert_eq!(proof_metrics(&p).unwrap(), ProofMetrics { depth: 1, cutrank: 0 });
        let bad = node(ProofRule::Ax, &["Lt(S0, 0)"], vec![]);
        assert!(check_pa_proof(&bad).is_err());
        let pair = node(ProofRule::Ax, &["Lt(x, y)", "~Lt(x, y)"], vec![]);
        assert_eq!(check_pa_proof(&pair), Ok(()));
    }

    #[test]
    fn eigenvariable_condition() {
        let leaf = node(ProofRule::PaAx, &["Lt(x, S(x))"], vec![]);
        let mut p = with_principal(
            node(ProofRule::All, &["all x Lt(x, S(x))"], vec![leaf.clone()]),
            "all x Lt(x, S(x))",
        );
        p.eigenvariable = Some("x".into());
        assert_eq!(check_pa_proof(&p), Ok(()));
        assert_eq!(proof_metrics(&p).unwrap().depth, 2);

        let mut bad = with_principal(
            node(ProofRule::All, &["all x Lt(x, S(x))", "Lt(0, y)"], vec![leaf]),
            "all x Lt(x, S(x))",
        );
        bad.eigenvariable = Some("y".into());
        bad.children[0] = node(ProofRule::PaAx, &["Lt(y, S(y))", "Lt(0, y)"], vec![]);
        let v = check_pa_proof(&bad).unwrap_err();
        assert_eq!(v.path, Vec::<usize>::new());
        assert!(v.reason.contains("eigenvariable"));
    }

    #[test]
    fn cut_children_must_agree() {
        let left = node(ProofRule::Ax, &["Lt(0, S0)", "Eq(0, 0)"], vec![]);
        let right = node(ProofRule::Ax, &["Lt(0, S0)", "~Eq(0, 0)"], vec![]);
        let good = with_principal(
            node(ProofRule::Cut, &["Lt(0, S0)"], vec![left.clone(), right.clone()]),
            "Eq(0, 0)",
        );
        assert_eq!(check_pa_proof(&good), Ok(()));
        assert_eq!(proof_metrics(&good).unwrap().cutrank, 1);
        let bad = with_principal(
            node(ProofRule::Cut, &["Lt(0, S0)"], vec![left, right]),
            "Eq(S0, S0)",
        );
        assert!(check_pa_proof(&bad).is_err());
    }

    #[test]
    fn axiom_registry() {
        let inst = seq(&["(~Add(SS0, y, z) | Add(SS0, S(y), S(z)))"]);
        assert_eq!(axiom_instance(&inst).unwrap().1.name, "add-succ");
        let closed = seq(&["all u Add(u, 0, u)"]);
        assert_eq!(axiom_instance(&closed).unwrap().1.name, "add-zero");
        assert!(axiom_instance(&seq(&["Add(x, 0, y)"])).is_none());
    }

    #[test]
    fn json_round_trip() {
        let p = with_principal(
            node(
                ProofRule::Or,
                &["(Lt(0, S0) | Eq(0, S0))"],
                vec![node(ProofRule::Ax, &["Lt(0, S0)"], vec![])],
            ),
            "(Lt(0, S0) | Eq(0, S0))",
        );
        let back = FinitaryProof::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(or_side_of(&p), Some(0));
    }
}
