//! Finite runs of the classical termination principles, each instrumented
//! with an ordinal assignment below ε₀ whose strict descent certifies that
//! the run terminates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ordinal::Ordinal;

/// Goodstein values above this many bits stop the run.
pub const GOODSTEIN_MAX_BITS: u64 = 4096;
/// Hydras with more nodes than this stop the battle.
pub const HYDRA_MAX_NODES: usize = 1 << 16;
/// Worms longer than this stop the run.
pub const WORM_MAX_LEN: usize = 1 << 16;
/// Largest number of colorings `ph_least` will enumerate for a single `N`.
pub const PH_MAX_COLORINGS: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("goodstein base must be at least 2")]
    BadBase,
    #[error("hydra syntax error at position {pos}: {msg}")]
    HydraSyntax { pos: usize, msg: String },
    #[error("worm syntax error: {0}")]
    WormSyntax(String),
    #[error("dimension and number of colors must be at least 1")]
    DegenerateRamsey,
    #[error("{colorings} colorings of {dim}-sets of {{1..{n}}} exceed the enumeration bound")]
    TooManyColorings { n: u64, dim: u64, colorings: String },
}

/// Why a run stopped before reaching its terminal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cutoff {
    StepLimit,
    SizeLimit,
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cutoff::StepLimit => "step limit",
            Cutoff::SizeLimit => "size limit",
        })
    }
}

fn serialize_big<S: Serializer>(values: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.to_string()))
}

// ---------------------------------------------------------------------------
// Goodstein sequences

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodsteinState {
    pub value: BigUint,
    pub base: u64,
    pub step_index: u64,
}

impl GoodsteinState {
    pub fn start(n: u64) -> Self {
        GoodsteinState {
            value: BigUint::from(n),
            base: 2,
            step_index: 0,
        }
    }

    /// The hereditary base representation with the base replaced by ω.
    pub fn ordinal(&self) -> Result<Ordinal, CombinatoricsError> {
        hereditary_ordinal(&self.value, self.base)
    }

    /// Rewrites the value in hereditary base `b + 1` and subtracts one.
    /// Returns `None` at zero or when the bumped value would exceed
    /// [`GOODSTEIN_MAX_BITS`].
    pub fn next(&self) -> Option<GoodsteinState> {
        if self.value.is_zero() {
            return None;
        }
        let bumped = bump(&self.value, self.base)?;
        Some(GoodsteinState {
            value: bumped - 1u32,
            base: self.base + 1,
            step_index: self.step_index + 1,
        })
    }
}

/// Nonzero digits of `v` in base `b`, least significant first, with their
/// positions.
fn digits(v: &BigUint, b: u64) -> Vec<(u64, u64)> {
    let base = BigUint::from(b);
    let mut out = Vec::new();
    let mut rest = v.clone();
    let mut pos = 0u64;
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        if !r.is_zero() {
            out.push((pos, r.to_u64().expect("digit below base")));
        }
        rest = q;
        pos += 1;
    }
    out
}

fn hereditary_ordinal(v: &BigUint, b: u64) -> Result<Ordinal, CombinatoricsError> {
    if b < 2 {
        return Err(CombinatoricsError::BadBase);
    }
    let mut acc = Ordinal::zero();
    for (pos, d) in digits(v, b) {
        let exponent = hereditary_ordinal(&BigUint::from(pos), b)?;
        let term = Ordinal::monomial(exponent, d);
        acc = term.add(&acc).expect("hereditary terms are decreasing");
    }
    Ok(acc)
}

fn bump(v: &BigUint, b: u64) -> Option<BigUint> {
    let new_base = BigUint::from(b + 1);
    let mut acc = BigUint::zero();
    for (pos, d) in digits(v, b) {
        let exponent = bump(&BigUint::from(pos), b)?.to_u64()?;
        // (b+1)^e has more than e bits' worth of growth; refuse early.
        if exponent > GOODSTEIN_MAX_BITS {
            return None;
        }
        let term = new_base.pow(exponent as u32) * d;
        acc += term;
        if acc.bits() > GOODSTEIN_MAX_BITS {
            return None;
        }
    }
    Some(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodsteinReport {
    pub start: u64,
    #[serde(serialize_with = "serialize_big")]
    pub values: Vec<BigUint>,
    pub ordinals: Vec<Ordinal>,
    /// The first index `m` with `g_m = 0`.
    pub terminated_at: Option<u64>,
    pub cutoff: Option<Cutoff>,
}

pub fn goodstein_run(n: u64, max_steps: u64) -> GoodsteinReport {
    let mut state = GoodsteinState::start(n);
    let mut values = vec![state.value.clone()];
    let mut ordinals = vec![state.ordinal().expect("base 2")];
    let mut cutoff = None;
    while !state.value.is_zero() {
        if state.step_index >= max_steps {
            cutoff = Some(Cutoff::StepLimit);
            break;
        }
        match state.next() {
            Some(next) => state = next,
            None => {
                cutoff = Some(Cutoff::SizeLimit);
                break;
            }
        }
        values.push(state.value.clone());
        ordinals.push(state.ordinal().expect("base at least 2"));
    }
    GoodsteinReport {
        start: n,
        values,
        ordinals,
        terminated_at: cutoff.is_none().then_some(state.step_index),
        cutoff,
    }
}

// ---------------------------------------------------------------------------
// Hydra battles

/// A finite rooted tree, written as nested parentheses: `()` is the bare
/// root, `(()(()))` a root with a head and a neck carrying one head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Hydra {
    pub children: Vec<Hydra>,
}

impl Hydra {
    pub fn leaf() -> Self {
        Hydra::default()
    }

    pub fn node(children: Vec<Hydra>) -> Self {
        Hydra { children }
    }

    pub fn is_dead(&self) -> bool {
        self.children.is_empty()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Hydra::size).sum::<usize>()
    }

    /// Leaves other than the root.
    pub fn heads(&self) -> u64 {
        self.children
            .iter()
            .map(|c| if c.is_dead() { 1 } else { c.heads() })
            .sum()
    }

    fn height(&self) -> usize {
        self.children.iter().map(|c| 1 + c.height()).max().unwrap_or(0)
    }

    /// Path to the leftmost among the deepest heads.
    fn canonical_head(&self) -> Vec<usize> {
        let mut path = Vec::new();
        let mut node = self;
        while !node.is_dead() {
            let target = node.height() - 1;
            let i = node
                .children
                .iter()
                .position(|c| c.height() == target)
                .expect("some child realizes the height");
            path.push(i);
            node = &node.children[i];
        }
        path
    }

    fn at_mut(&mut self, path: &[usize]) -> &mut Hydra {
        path.iter().fold(self, |node, &i| &mut node.children[i])
    }

    /// Stage `n` of the battle: chop the canonical head; if its parent is not
    /// the root, the grandparent grows `n` copies of the parent's remaining
    /// subtree right after the parent.
    pub fn chop(&mut self, n: u64) {
        let path = self.canonical_head();
        let Some((&head, parent_path)) = path.split_last() else {
            return;
        };
        let parent = self.at_mut(parent_path);
        parent.children.remove(head);
        if let Some((&p, grand_path)) = parent_path.split_last() {
            let grand = self.at_mut(grand_path);
            let copy = grand.children[p].clone();
            let copies = std::iter::repeat(copy).take(n as usize);
            grand.children.splice(p + 1..p + 1, copies);
        }
    }

    /// Leaves are 0; a node is the natural sum of `ω^child` over its
    /// children.
    pub fn ordinal(&self) -> Ordinal {
        self.children.iter().fold(Ordinal::zero(), |acc, c| {
            acc.natural_sum(&c.ordinal().omega_pow())
                .expect("hydra ordinals stay below e0")
        })
    }
}

impl fmt::Display for Hydra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Hydra {
    type Err = CombinatoricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, msg: &str| CombinatoricsError::HydraSyntax {
            pos,
            msg: msg.to_string(),
        };
        let mut stack: Vec<Hydra> = Vec::new();
        let mut root = None;
        for (pos, c) in s.char_indices() {
            match c {
                _ if c.is_whitespace() => {}
                _ if root.is_some() => return Err(err(pos, "trailing input after the root")),
                '(' => stack.push(Hydra::leaf()),
                ')' => {
                    let done = stack.pop().ok_or_else(|| err(pos, "unbalanced ')'"))?;
                    match stack.last_mut() {
                        Some(parent) => parent.children.push(done),
                        None => root = Some(done),
                    }
                }
                _ => return Err(err(pos, "expected '(' or ')'")),
            }
        }
        root.ok_or_else(|| err(s.len(), "unterminated hydra"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HydraReport {
    pub start: String,
    /// Head count before the battle and after each stage.
    pub head_counts: Vec<u64>,
    pub ordinals: Vec<Ordinal>,
    /// Number of stages until only the root remained.
    pub stages: Option<u64>,
    pub cutoff: Option<Cutoff>,
}

pub fn hydra_run(h: &Hydra, max_stages: u64) -> HydraReport {
    let mut hydra = h.clone();
    let mut head_counts = vec![hydra.heads()];
    let mut ordinals = vec![hydra.ordinal()];
    let mut stage = 0u64;
    let mut cutoff = None;
    while !hydra.is_dead() {
        if stage >= max_stages {
            cutoff = Some(Cutoff::StepLimit);
            break;
        }
        stage += 1;
        hydra.chop(stage);
        if hydra.size() > HYDRA_MAX_NODES {
            cutoff = Some(Cutoff::SizeLimit);
            break;
        }
        head_counts.push(hydra.heads());
        ordinals.push(hydra.ordinal());
    }
    HydraReport {
        start: h.to_string(),
        head_counts,
        ordinals,
        stages: cutoff.is_none().then_some(stage),
        cutoff,
    }
}

// ---------------------------------------------------------------------------
// Worms

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Worm(pub Vec<u64>);

impl Worm {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One step at stage `n`. A trailing 0 is dropped; otherwise, with `i`
    /// the last position left of the head holding a smaller entry, the part
    /// after `i` with the head decremented is repeated `n + 1` times.
    pub fn step(&self, n: u64) -> Worm {
        let w = &self.0;
        let Some((&head, body)) = w.split_last() else {
            return Worm::default();
        };
        if head == 0 {
            return Worm(body.to_vec());
        }
        let cut = body.iter().rposition(|&x| x < head).map_or(0, |i| i + 1);
        let mut block = body[cut..].to_vec();
        block.push(head - 1);
        let mut next = body[..cut].to_vec();
        for _ in 0..=n {
            next.extend_from_slice(&block);
        }
        Worm(next)
    }

    /// Splits the worm at its zeros, `A₀ 0 A₁ 0 … 0 Aₘ`, and reads it as the
    /// ordinal sum `⌈A₀⌉ + 1 + ⌈A₁⌉ + 1 + … + ⌈Aₘ⌉`, where an empty block is
    /// 0 and a block with entries ≥ 1 is `ω` raised to the ordinal of the
    /// block with every entry decremented.
    pub fn ordinal(&self) -> Ordinal {
        worm_ordinal(&self.0)
    }
}

fn worm_ordinal(w: &[u64]) -> Ordinal {
    let mut acc = Ordinal::zero();
    for (i, block) in w.split(|&x| x == 0).enumerate() {
        if i > 0 {
            acc = acc.add(&Ordinal::one()).expect("below e0");
        }
        if !block.is_empty() {
            let lowered: Vec<u64> = block.iter().map(|x| x - 1).collect();
            acc = acc
                .add(&worm_ordinal(&lowered).omega_pow())
                .expect("below e0");
        }
    }
    acc
}

impl fmt::Display for Worm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Worm {
    type Err = CombinatoricsError;

    /// Comma-separated naturals; the empty string is the empty worm.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if s.is_empty() {
            return Ok(Worm::default());
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| CombinatoricsError::WormSyntax(format!("bad entry '{}'", p.trim())))
            })
            .collect::<Result<_, _>>()
            .map(Worm)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WormReport {
    pub start: Worm,
    pub lengths: Vec<usize>,
    pub ordinals: Vec<Ordinal>,
    /// The first step producing the empty worm.
    pub steps: Option<u64>,
    pub cutoff: Option<Cutoff>,
}

pub fn worm_run(w: &Worm, max_steps: u64) -> WormReport {
    let mut worm = w.clone();
    let mut lengths = vec![worm.0.len()];
    let mut ordinals = vec![worm.ordinal()];
    let mut step = 0u64;
    let mut cutoff = None;
    while !worm.is_empty() {
        if step >= max_steps {
            cutoff = Some(Cutoff::StepLimit);
            break;
        }
        step += 1;
        worm = worm.step(step);
        if worm.0.len() > WORM_MAX_LEN {
            cutoff = Some(Cutoff::SizeLimit);
            break;
        }
        lengths.push(worm.0.len());
        ordinals.push(worm.ordinal());
    }
    WormReport {
        start: w.clone(),
        lengths,
        ordinals,
        steps: cutoff.is_none().then_some(step),
        cutoff,
    }
}

/// Any of the three game states, for uniform ordinal assignment.
pub enum GameState<'a> {
    Goodstein(&'a GoodsteinState),
    Hydra(&'a Hydra),
    Worm(&'a Worm),
}

pub fn ordinal_of(state: GameState<'_>) -> Result<Ordinal, CombinatoricsError> {
    match state {
        GameState::Goodstein(g) => g.ordinal(),
        GameState::Hydra(h) => Ok(h.ordinal()),
        GameState::Worm(w) => Ok(w.ordinal()),
    }
}

/// Index of the first step where the ordinal sequence fails to strictly
/// decrease.
pub fn first_descent_violation(ordinals: &[Ordinal]) -> Option<usize> {
    ordinals.windows(2).position(|w| w[1] >= w[0]).map(|i| i + 1)
}

// ---------------------------------------------------------------------------
// Paris–Harrington

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The `dim`-subsets of `elems`, as bitmasks over `{1..N}`, in a fixed order.
fn subsets_of_size(elems: &[u32], dim: usize) -> Vec<u64> {
    fn go(elems: &[u32], dim: usize, acc: u64, out: &mut Vec<u64>) {
        if dim == 0 {
            out.push(acc);
            return;
        }
        for (i, &e) in elems.iter().enumerate() {
            go(&elems[i + 1..], dim - 1, acc | (1 << e), out);
        }
    }
    let mut out = Vec::new();
    go(elems, dim, 0, &mut out);
    out
}

/// Whether every `colors`-coloring of the `dim`-subsets of `{1..n}` has a
/// homogeneous `H` with `|H| ≥ min(H)` and `|H| ≥ dim + 1`.
fn ph_holds(n: u64, dim: u64, colors: u64) -> Result<bool, CombinatoricsError> {
    let count = binomial(n, dim);
    let colorings = (colors as u128).checked_pow(count.min(u32::MAX as u128) as u32);
    if colorings.map_or(true, |c| c > PH_MAX_COLORINGS) {
        return Err(CombinatoricsError::TooManyColorings {
            n,
            dim,
            colorings: match colorings {
                Some(c) => c.to_string(),
                None => format!("{colors}^{count}"),
            },
        });
    }
    let universe: Vec<u32> = (1..=n as u32).collect();
    let mut edges = subsets_of_size(&universe, dim as usize);
    edges.sort_unstable();
    let index = |mask: u64| edges.binary_search(&mask).ok();
    // A homogeneous relatively large set contains one of exactly size
    // max(min H, dim + 1) with the same minimum, so those suffice.
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for m in 1..=n as u32 {
        let size = (m as usize).max(dim as usize + 1);
        let above: Vec<u32> = (m + 1..=n as u32).collect();
        for rest in subsets_of_size(&above, size - 1) {
            let h = rest | (1 << m);
            let members: Vec<u32> = (1..=n as u32).filter(|e| h & (1 << e) != 0).collect();
            let mut ids: Vec<usize> = subsets_of_size(&members, dim as usize)
                .into_iter()
                .map(|s| index(s).expect("subset of the universe"))
                .collect();
            ids.sort_unstable();
            candidates.push(ids);
        }
    }
    if candidates.is_empty() {
        return Ok(false);
    }
    let mut coloring = vec![0u64; edges.len()];
    loop {
        let good = candidates
            .iter()
            .any(|ids| ids.iter().all(|&i| coloring[i] == coloring[ids[0]]));
        if !good {
            return Ok(false);
        }
        // Next coloring in mixed-radix order.
        let mut i = 0;
        loop {
            if i == coloring.len() {
                return Ok(true);
            }
            coloring[i] += 1;
            if coloring[i] < colors {
                break;
            }
            coloring[i] = 0;
            i += 1;
        }
    }
}

/// The least `N ≤ search_cap` for which the finite Paris–Harrington
/// statement holds, by exhaustive search over colorings.
pub fn ph_least(dim: u64, colors: u64, search_cap: u64) -> Result<Option<u64>, CombinatoricsError> {
    if dim == 0 || colors == 0 {
        return Err(CombinatoricsError::DegenerateRamsey);
    }
    for n in 1..=search_cap.min(63) {
        if ph_holds(n, dim, colors)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
