//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library.
#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Cantor normal form as a plain list of `(exponent, coefficient)` pairs with
/// strictly decreasing exponents, plus a top element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cnf {
    E0,
    C(Vec<(Cnf, u64)>),
}

impl Cnf {
    pub fn zero() -> Cnf {
        Cnf::C(vec![])
    }

    pub fn nat(n: u64) -> Cnf {
        if n == 0 {
            Cnf::zero()
        } else {
            Cnf::C(vec![(Cnf::zero(), n)])
        }
    }

    pub fn omega_pow(e: Cnf) -> Cnf {
        Cnf::C(vec![(e, 1)])
    }

    pub fn size(&self) -> usize {
        match self {
            Cnf::E0 => 1,
            Cnf::C(t) => 1 + t.iter().map(|(e, _)| e.size()).sum::<usize>(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Cnf::C(t) if t.is_empty())
    }

    fn as_nat(&self) -> Option<u64> {
        match self {
            Cnf::C(t) if t.is_empty() => Some(0),
            Cnf::C(t) if t.len() == 1 && t[0].0.is_zero() => Some(t[0].1),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        let terms = match self {
            Cnf::E0 => return "e0".into(),
            Cnf::C(t) if t.is_empty() => return "0".into(),
            Cnf::C(t) => t,
        };
        let parts: Vec<String> = terms
            .iter()
            .map(|(e, c)| match e.as_nat() {
                Some(0) => c.to_string(),
                Some(1) if *c == 1 => "w".into(),
                Some(1) => format!("w*{c}"),
                _ if *c == 1 => format!("w^({})", e.render()),
                _ => format!("w^({})*{c}", e.render()),
            })
            .collect();
        parts.join("+")
    }

    /// Parses the canonical rendering only.
    pub fn parse(s: &str) -> Option<Cnf> {
        let (v, rest) = parse_expr(s.as_bytes())?;
        rest.is_empty().then_some(v)
    }

    /// `ω_n` with `ω_0 = 1`.
    pub fn tower(n: u64) -> Cnf {
        let mut a = Cnf::nat(1);
        for _ in 0..n {
            a = Cnf::omega_pow(a);
        }
        a
    }

    /// `a[x]`: predecessor for successors, `γ + ω^β·x` for `γ + ω^(β+1)`,
    /// `γ + ω^(λ[x])` for limit exponents, `ε₀[x] = ω_(x+1)`.
    pub fn fund(&self, x: u64) -> Option<Cnf> {
        let terms = match self {
            Cnf::E0 => return Some(Cnf::tower(x + 1)),
            Cnf::C(t) if t.is_empty() => return None,
            Cnf::C(t) => t,
        };
        let mut out = terms.clone();
        let (e, c) = out.pop().unwrap();
        if c > 1 {
            out.push((e.clone(), c - 1));
        }
        if e.is_zero() {
            return Some(Cnf::C(out));
        }
        if let Some(pred) = e.predecessor() {
            if x > 0 {
                out.push((pred, x));
            }
        } else {
            out.push((e.fund(x)?, 1));
        }
        Some(Cnf::C(out))
    }

    fn predecessor(&self) -> Option<Cnf> {
        match self {
            Cnf::C(t) if t.last().is_some_and(|(e, _)| e.is_zero()) => {
                let mut t = t.clone();
                let (e, c) = t.pop().unwrap();
                if c > 1 {
                    t.push((e, c - 1));
                }
                Some(Cnf::C(t))
            }
            _ => None,
        }
    }

    /// Number of ω symbols with coefficients expanded; `None` for ε₀.
    pub fn norm(&self) -> Option<u64> {
        match self {
            Cnf::E0 => None,
            Cnf::C(t) => t.iter().try_fold(0u64, |acc, (e, c)| {
                let w = match e.as_nat() {
                    Some(0 | 1) => 1,
                    _ => 1 + e.norm()?,
                };
                Some(acc + w * c)
            }),
        }
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cnf::E0, Cnf::E0) => Ordering::Equal,
            (Cnf::E0, _) => Ordering::Greater,
            (_, Cnf::E0) => Ordering::Less,
            (Cnf::C(a), Cnf::C(b)) => {
                for (x, y) in a.iter().zip(b) {
                    let o = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                a.len().cmp(&b.len())
            }
        }
    }
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn parse_expr(s: &[u8]) -> Option<(Cnf, &[u8])> {
    if let Some(rest) = s.strip_prefix(b"e0") {
        return Some((Cnf::E0, rest));
    }
    if let Some(rest) = s.strip_prefix(b"0") {
        return Some((Cnf::zero(), rest));
    }
    let mut terms = vec![];
    let mut s = s;
    loop {
        let (e, rest) = if let Some(rest) = s.strip_prefix(b"w^(") {
            let (e, rest) = parse_expr(rest)?;
            (e, rest.strip_prefix(b")")?)
        } else if let Some(rest) = s.strip_prefix(b"w") {
            (Cnf::nat(1), rest)
        } else {
            let n = s.iter().take_while(|c| c.is_ascii_digit()).count();
            if n == 0 {
                return None;
            }
            let v: u64 = std::str::from_utf8(&s[..n]).ok()?.parse().ok()?;
            terms.push((Cnf::zero(), v));
            s = &s[n..];
            break;
        };
        s = rest;
        let mut c = 1;
        if let Some(rest) = s.strip_prefix(b"*") {
            let n = rest.iter().take_while(|c| c.is_ascii_digit()).count();
            c = std::str::from_utf8(&rest[..n]).ok()?.parse().ok()?;
            s = &rest[n..];
        }
        terms.push((e, c));
        match s.strip_prefix(b"+") {
            Some(rest) => s = rest,
            None => break,
        }
    }
    Some((Cnf::C(terms), s))
}

/// Random normal form with exponent nesting at most `depth`.
pub fn gen<R: Rng>(rng: &mut R, depth: u32) -> Cnf {
    let n = rng.gen_range(0..=3);
    let mut exps: Vec<Cnf> = (0..n)
        .map(|_| {
            if depth == 0 || rng.gen_bool(0.3) {
                Cnf::nat(rng.gen_range(0..=3))
            } else {
                gen(rng, depth - 1)
            }
        })
        .collect();
    exps.sort_by(|a, b| b.cmp(a));
    exps.dedup();
    Cnf::C(exps.into_iter().map(|e| (e, rng.gen_range(1..=4))).collect())
}

/// Whether the orbit of `a` at index `k` meets `b`; `None` if undecided
/// within `cap` steps or once the notation grows past a few hundred nodes.
pub fn orbit_meets(a: &Cnf, b: &Cnf, k: u64, cap: usize) -> Option<bool> {
    let mut cur = a.clone();
    for _ in 0..cap {
        if cur.size() > 400 {
            return None;
        }
        match cur.cmp(b) {
            Ordering::Equal => return Some(true),
            Ordering::Less => return Some(false),
            Ordering::Greater => cur = cur.fund(k)?,
        }
    }
    None
}

/// `F_a(x)` by the defining recursion, giving up after `fuel` unfoldings or
/// on overflow.
pub fn fgh(a: &Cnf, x: u64, fuel: &mut u64) -> Option<u64> {
    if *fuel == 0 {
        return None;
    }
    *fuel -= 1;
    if a.is_zero() {
        return x.checked_add(1);
    }
    if let Some(p) = a.predecessor() {
        let mut v = x;
        for _ in 0..=x {
            v = fgh(&p, v, fuel)?;
        }
        return Some(v);
    }
    fgh(&a.fund(x)?, x, fuel)
}

/// Rewrites `n` from hereditary base `b` to base `b + 1`.
pub fn bump(n: &BigUint, b: u64) -> BigUint {
    let base = BigUint::from(b);
    let mut out = BigUint::zero();
    let mut rest = n.clone();
    let mut i = 0u64;
    while !rest.is_zero() {
        let d = &rest % &base;
        if !d.is_zero() {
            let e = bump(&BigUint::from(i), b).to_u32().expect("small exponent");
            out += d * BigUint::from(b + 1).pow(e);
        }
        rest /= &base;
        i += 1;
    }
    out
}

/// The Goodstein sequence from `n`, stopping at 0 or after `max` terms.
pub fn goodstein(n: u64, max: usize) -> Vec<BigUint> {
    let mut v = vec![BigUint::from(n)];
    let mut b = 2;
    while !v.last().unwrap().is_zero() && v.len() < max {
        let next = bump(v.last().unwrap(), b) - BigUint::one();
        v.push(next);
        b += 1;
    }
    v
}
