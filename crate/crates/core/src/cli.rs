//! The `owb` command line. [`run`] is pure apart from reading input files,
//! so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 domain failure (violation, exhaustion, not
//! found), 2 usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::combinatorics::{goodstein_run, hydra_run, ph_least, worm_run, Hydra, Worm};
use crate::hierarchy::{domination_probe, fgh_eval, fgh_trace, verdict_name};
use crate::omega::{
    check_local, cut_elim, elimination_bound, embed, find_cut, fmt_address, stitch_selector,
    verify_sampled, Family, FiniteDerivation, Notation, NotationDerivation, OmegaDerivation,
    VerifyReport,
};
use crate::ordinal::{omega_tower, reduces_to, Ordinal};
use crate::proofs::{check_pa_proof, proof_metrics, FinitaryProof};
use crate::syntax::Formula;

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_WIDTH: u64 = 8;
pub const DEFAULT_MAX_STEPS: u64 = 1_000;
pub const DEFAULT_CAP: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub output: String,
}

impl CommandResult {
    fn ok(output: String) -> Self {
        CommandResult { code: 0, output }
    }

    fn fail(output: String) -> Self {
        CommandResult { code: 1, output }
    }

    fn status(success: bool, output: String) -> Self {
        CommandResult {
            code: if success { 0 } else { 1 },
            output,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "owb", version, about = "Ordinals below e0, fast-growing functions, and omega-logic proofs")]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Step budget for fast-growing evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Probe depth for omega-derivations.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Probe width for omega-derivations.
    #[arg(long, global = true, default_value_t = DEFAULT_WIDTH)]
    width: u64,
    /// Step limit for Goodstein, hydra and worm runs.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Largest N tried by the Paris-Harrington search.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ordinal notations.
    #[command(subcommand)]
    Ord(OrdCmd),
    /// The fast-growing hierarchy.
    #[command(subcommand)]
    Fgh(FghCmd),
    /// Run the Goodstein sequence from n.
    Goodstein { n: u64 },
    /// Fight a hydra written as nested parentheses.
    Hydra { tree: String },
    /// Run a worm written as comma-separated naturals.
    Worm { worm: String },
    /// Least N for the Paris-Harrington principle.
    Ph { dim: u64, colors: u64 },
    /// Finitary PA proofs.
    #[command(subcommand)]
    Proof(ProofCmd),
    /// Omega-logic derivations.
    #[command(subcommand)]
    Omega(OmegaCmd),
}

#[derive(Subcommand, Debug)]
enum OrdCmd {
    /// Compare two ordinals.
    Cmp { a: String, b: String },
    /// The fundamental sequence at x.
    Fund { a: String, x: u64 },
    /// The norm.
    Norm { a: String },
    /// Whether a reduces to b at index k.
    Reduce {
        a: String,
        b: String,
        k: u64,
        /// Largest path length to print.
        #[arg(long, default_value_t = 64)]
        limit: usize,
    },
    /// The tower w_n(base).
    Tower {
        n: u64,
        #[arg(default_value = "1")]
        base: String,
    },
    /// Parse and print in normal form.
    Parse { text: String },
}

#[derive(Subcommand, Debug)]
enum FghCmd {
    /// Evaluate F_a(x).
    Eval { a: String, x: u64 },
    /// Evaluate F_a(x), printing the descending stack ordinals.
    Trace { a: String, x: u64 },
    /// Compare F_a and F_b at sample points.
    Dominate {
        a: String,
        b: String,
        #[arg(required = true)]
        xs: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum ProofCmd {
    /// Check a proof file.
    Check { file: PathBuf },
    /// Depth and cut rank of a proof file.
    Metrics { file: PathBuf },
}

#[derive(Args, Debug)]
struct AddrArg {
    /// Address such as `[]`, `[3]` or `0,2,1`.
    addr: String,
}

#[derive(Subcommand, Debug)]
enum OmegaCmd {
    /// The label at an address.
    Node {
        file: PathBuf,
        #[command(flatten)]
        addr: AddrArg,
    },
    /// Local correctness at an address.
    Check {
        file: PathBuf,
        #[command(flatten)]
        addr: AddrArg,
    },
    /// Sampled verification of a whole derivation.
    Verify { file: PathBuf },
    /// Store the region of a derivation within `--depth` and `--width` as a
    /// finite derivation file.
    Snapshot { file: PathBuf },
    /// Embed a closed proof into omega-logic with cut.
    Embed { file: PathBuf },
    /// Embed a proof and eliminate its cuts.
    Elim {
        file: PathBuf,
        /// Number of elimination rounds; defaults to the cut rank.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Join proofs of every instance of a formula under one omega rule.
    Stitch {
        formula: String,
        /// Proof with the formula's variable free, instantiated per numeral.
        #[arg(long)]
        template: Option<PathBuf>,
    },
}

/// A derivation file: a stored tree or a notation.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DerivationFile {
    Notation { notation: NotationSpec },
    Finite(FiniteDerivation),
}

/// Notation terms as written in derivation files. Proof paths are relative
/// to the file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NotationSpec {
    Embed(PathBuf),
    Elim {
        #[serde(default)]
        k: Option<usize>,
        of: Box<NotationSpec>,
    },
    Stitch {
        formula: Formula,
        #[serde(default)]
        template: Option<PathBuf>,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<CommandResult, Failure>;

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return CommandResult {
                code,
                output: e.render().to_string(),
            };
        }
    };
    let json = cli.json;
    match dispatch(&cli) {
        Ok(r) => r,
        Err(Failure(msg)) => CommandResult::fail(if json {
            pretty(&json!({ "error": msg }))
        } else {
            format!("error: {msg}\n")
        }),
    }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn ordinal(s: &str) -> Result<Ordinal, Failure> {
    s.parse::<Ordinal>().map_err(|e| Failure(format!("{s}: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_proof(path: &Path) -> Result<FinitaryProof, Failure> {
    FinitaryProof::from_json(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn parse_address(s: &str) -> Result<Vec<u64>, Failure> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u64>().map_err(|_| Failure(format!("bad address {s}"))))
        .collect()
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Ord(c) => ord(cli, c),
        Command::Fgh(c) => fgh(cli, c),
        Command::Goodstein { n } => {
            let r = goodstein_run(*n, cli.max_steps);
            let text = if cli.json {
                pretty(&r)
            } else {
                let mut s = String::new();
                for (i, (v, o)) in r.values.iter().zip(&r.ordinals).enumerate() {
                    let _ = writeln!(s, "{i} {v} {o}");
                }
                match r.terminated_at {
                    Some(m) => {
                        let _ = writeln!(s, "terminated at {m}");
                    }
                    None => {
                        let _ = writeln!(s, "cutoff: {}", r.cutoff.map_or("none".into(), |c| c.to_string()));
                    }
                }
                s
            };
            Ok(CommandResult::status(r.terminated_at.is_some(), text))
        }
        Command::Hydra { tree } => {
            let h: Hydra = tree.parse()?;
            let r = hydra_run(&h, cli.max_steps);
            let text = if cli.json {
                pretty(&r)
            } else {
                let mut s = String::new();
                for (i, (c, o)) in r.head_counts.iter().zip(&r.ordinals).enumerate() {
                    let _ = writeln!(s, "{i} heads={c} {o}");
                }
                let _ = match r.stages {
                    Some(m) => writeln!(s, "dead after {m} stages"),
                    None => writeln!(s, "cutoff: {}", r.cutoff.map_or("none".into(), |c| c.to_string())),
                };
                s
            };
            Ok(CommandResult::status(r.stages.is_some(), text))
        }
        Command::Worm { worm } => {
            let w: Worm = worm.parse()?;
            let r = worm_run(&w, cli.max_steps);
            let text = if cli.json {
                pretty(&r)
            } else {
                let mut s = String::new();
                for (i, (l, o)) in r.lengths.iter().zip(&r.ordinals).enumerate() {
                    let _ = writeln!(s, "{i} length={l} {o}");
                }
                let _ = match r.steps {
                    Some(m) => writeln!(s, "empty after {m} steps"),
                    None => writeln!(s, "cutoff: {}", r.cutoff.map_or("none".into(), |c| c.to_string())),
                };
                s
            };
            Ok(CommandResult::status(r.steps.is_some(), text))
        }
        Command::Ph { dim, colors } => {
            let least = ph_least(*dim, *colors, cli.cap)?;
            let text = if cli.json {
                pretty(&json!({ "dim": dim, "colors": colors, "cap": cli.cap, "least": least }))
            } else {
                match least {
                    Some(n) => format!("{n}\n"),
                    None => format!("none up to {}\n", cli.cap),
                }
            };
            Ok(CommandResult::status(least.is_some(), text))
        }
        Command::Proof(c) => proof(cli, c),
        Command::Omega(c) => omega(cli, c),
    }
}

fn ord(cli: &Cli, c: &OrdCmd) -> Outcome {
    let (value, text) = match c {
        OrdCmd::Cmp { a, b } => {
            let (x, y) = (ordinal(a)?, ordinal(b)?);
            let v = verdict_name(x.cmp(&y));
            (json!({ "a": x, "b": y, "result": v }), v.to_string())
        }
        OrdCmd::Fund { a, x } => {
            let o = ordinal(a)?;
            let r = o.fund_seq(*x)?;
            (json!({ "ordinal": o, "x": x, "result": r }), r.to_string())
        }
        OrdCmd::Norm { a } => {
            let o = ordinal(a)?;
            let n = o.norm()?;
            (json!({ "ordinal": o, "norm": n }), n.to_string())
        }
        OrdCmd::Reduce { a, b, k, limit } => {
            let (x, y) = (ordinal(a)?, ordinal(b)?);
            let path = reduces_to(&x, &y, *k);
            let steps = path.as_ref().and_then(|p| p.to_vec_bounded(*limit));
            let text = match (&path, &steps) {
                (None, _) => "no".to_string(),
                (Some(_), Some(s)) => {
                    let parts: Vec<String> = s.iter().map(Ordinal::to_string).collect();
                    format!("yes\n{}", parts.join(" -> "))
                }
                (Some(_), None) => format!("yes\n(path longer than {limit})"),
            };
            (
                json!({ "from": x, "to": y, "k": k, "reduces": path.is_some(), "path": steps }),
                text,
            )
        }
        OrdCmd::Tower { n, base } => {
            let b = ordinal(base)?;
            let r = omega_tower(*n, &b)?;
            (json!({ "n": n, "base": b, "result": r }), r.to_string())
        }
        OrdCmd::Parse { text } => {
            let o = ordinal(text)?;
            let kind = if o.is_zero() {
                "zero"
            } else if o.is_successor() {
                "successor"
            } else {
                "limit"
            };
            (json!({ "input": text, "ordinal": o, "kind": kind }), o.to_string())
        }
    };
    Ok(CommandResult::ok(if cli.json { pretty(&value) } else { text + "\n" }))
}

fn fgh(cli: &Cli, c: &FghCmd) -> Outcome {
    match c {
        FghCmd::Eval { a, x } => {
            let o = ordinal(a)?;
            let r = fgh_eval(&o, *x, cli.budget)?;
            let text = if cli.json {
                pretty(&json!({ "ordinal": o, "x": x, "result": r }))
            } else {
                match r.value {
                    Some(v) => format!("{v}\n"),
                    None => format!("exhausted after {} steps\n", r.steps_used),
                }
            };
            Ok(CommandResult::status(!r.exhausted, text))
        }
        FghCmd::Trace { a, x } => {
            let o = ordinal(a)?;
            let t = fgh_trace(&o, *x, cli.budget)?;
            let text = if cli.json {
                pretty(&t)
            } else {
                let tail = match t.result.value {
                    Some(v) => format!("value {v}\n"),
                    None => format!("exhausted after {} steps\n", t.result.steps_used),
                };
                format!("{t}{tail}")
            };
            Ok(CommandResult::status(!t.result.exhausted, text))
        }
        FghCmd::Dominate { a, b, xs } => {
            let r = domination_probe(&ordinal(a)?, &ordinal(b)?, xs, cli.budget)?;
            let complete = r.points.iter().all(|p| p.verdict.is_some());
            let text = if cli.json {
                pretty(&r)
            } else {
                let mut s = String::new();
                for p in &r.points {
                    let show = |v: Option<u64>| v.map_or("?".to_string(), |v| v.to_string());
                    let verdict = p.verdict.map_or("unknown", verdict_name);
                    let _ = writeln!(s, "x={} F_a={} F_b={} {verdict}", p.x, show(p.lower.value), show(p.upper.value));
                }
                s
            };
            Ok(CommandResult::status(complete, text))
        }
    }
}

fn proof(cli: &Cli, c: &ProofCmd) -> Outcome {
    match c {
        ProofCmd::Check { file } => {
            let p = load_proof(file)?;
            let v = check_pa_proof(&p);
            let text = if cli.json {
                pretty(&json!({ "ok": v.is_ok(), "violation": v.as_ref().err() }))
            } else {
                match &v {
                    Ok(()) => "ok\n".to_string(),
                    Err(e) => format!("violation: {e}\n"),
                }
            };
            Ok(CommandResult::status(v.is_ok(), text))
        }
        ProofCmd::Metrics { file } => {
            let p = load_proof(file)?;
            let m = proof_metrics(&p)?;
            Ok(CommandResult::ok(if cli.json {
                pretty(&m)
            } else {
                format!("depth {}\ncutrank {}\n", m.depth, m.cutrank)
            }))
        }
    }
}

fn build_notation(spec: &NotationSpec, base: &Path) -> Result<Notation, Failure> {
    Ok(match spec {
        NotationSpec::Embed(p) => embed(&load_proof(&base.join(p))?)?,
        NotationSpec::Elim { k, of } => {
            let h = build_notation(of, base)?;
            let k = match k {
                Some(k) => *k,
                None => h.rank().ok_or_else(|| Failure("cut rank unknown; give k".into()))?,
            };
            cut_elim(&h, k)?
        }
        NotationSpec::Stitch { formula, template } => {
            let family = match template {
                Some(t) => Family::Template(Arc::new(load_proof(&base.join(t))?)),
                None => Family::AxiomLeaf,
            };
            stitch_selector(&stitch_matrix(formula), family, None)?
        }
    })
}

/// Stitching wants the open matrix `A(x)`; a closed `all x (A(x))` is
/// accepted too.
fn stitch_matrix(f: &Formula) -> Formula {
    match f {
        Formula::All(_, body) if f.is_sentence() => (**body).clone(),
        _ => f.clone(),
    }
}

fn load_derivation(path: &Path) -> Result<Box<dyn OmegaDerivation>, Failure> {
    let file: DerivationFile =
        serde_json::from_str(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(match file {
        DerivationFile::Finite(d) => Box::new(d),
        DerivationFile::Notation { notation } => {
            let base = path.parent().unwrap_or(Path::new("."));
            Box::new(NotationDerivation::new(build_notation(&notation, base)?)?)
        }
    })
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    if let Some(root) = &r.root {
        let _ = writeln!(s, "root {root}");
    }
    let max = r.max_ordinal.as_ref().map_or("-".to_string(), Ordinal::to_string);
    let _ = writeln!(
        s,
        "probed {} nodes (depth {}, width {}), max ordinal {max}",
        r.nodes_probed, r.depth, r.width
    );
    for v in &r.violations {
        let _ = writeln!(s, "violation {v}");
    }
    s.push_str(if r.ok { "ok\n" } else { "FAILED\n" });
    s
}

fn omega(cli: &Cli, c: &OmegaCmd) -> Outcome {
    match c {
        OmegaCmd::Node { file, addr } => {
            let d = load_derivation(file)?;
            let a = parse_address(&addr.addr)?;
            let label = d.node(&a)?;
            let text = if cli.json {
                pretty(&json!({ "address": a, "label": label }))
            } else {
                match &label {
                    Some(l) => format!("{l}\n"),
                    None => "absent\n".to_string(),
                }
            };
            Ok(CommandResult::ok(text))
        }
        OmegaCmd::Check { file, addr } => {
            let d = load_derivation(file)?;
            let a = parse_address(&addr.addr)?;
            let v = check_local(d.as_ref(), &a, cli.width);
            let text = if cli.json {
                pretty(&json!({ "address": a, "ok": v.is_empty(), "violations": v }))
            } else if v.is_empty() {
                format!("ok at {}\n", fmt_address(&a))
            } else {
                v.iter().map(|x| format!("violation {x}\n")).collect()
            };
            Ok(CommandResult::status(v.is_empty(), text))
        }
        OmegaCmd::Verify { file } => {
            let d = load_derivation(file)?;
            let r = verify_sampled(d.as_ref(), cli.depth, cli.width);
            let text = if cli.json { pretty(&r) } else { verify_text(&r) };
            Ok(CommandResult::status(r.ok, text))
        }
        OmegaCmd::Snapshot { file } => {
            let d = load_derivation(file)?;
            let f = FiniteDerivation::snapshot(d.as_ref(), cli.depth, cli.width)?;
            Ok(CommandResult::ok(pretty(&f)))
        }
        OmegaCmd::Embed { file } => {
            let p = load_proof(file)?;
            let h = embed(&p)?;
            let root = h.label()?;
            let rank = h.rank().unwrap_or(0);
            let text = if cli.json {
                pretty(&json!({
                    "endsequent": p.sequent,
                    "rank": rank,
                    "root": root,
                    "notation": NotationSpec::Embed(file.clone()),
                }))
            } else {
                format!("root {root}\nrank {rank}\n")
            };
            Ok(CommandResult::ok(text))
        }
        OmegaCmd::Elim { file, k } => {
            let p = load_proof(file)?;
            let h = embed(&p)?;
            let rank = h.rank().unwrap_or(0);
            let k = k.unwrap_or(rank);
            let e = cut_elim(&h, k)?;
            let bound = elimination_bound(&h, k)?;
            let d = NotationDerivation::new(e)?;
            let cut = find_cut(&d, cli.depth, cli.width)?;
            let r = verify_sampled(&d, cli.depth, cli.width);
            let within = r.root.as_ref().is_some_and(|l| l.ordinal <= bound);
            let success = r.ok && cut.is_none() && within;
            let text = if cli.json {
                pretty(&json!({
                    "k": k,
                    "rank": rank,
                    "input_ordinal": h.ordinal()?,
                    "bound": bound,
                    "cut_free": cut.is_none(),
                    "within_bound": within,
                    "verify": r,
                }))
            } else {
                let mut s = format!("rank {rank}, k {k}\ninput ordinal {}\nbound {bound}\n", h.ordinal()?);
                match &cut {
                    None => s.push_str("no Cut in the probed region\n"),
                    Some(a) => {
                        let _ = writeln!(s, "Cut at {}", fmt_address(a));
                    }
                }
                s + &verify_text(&r)
            };
            Ok(CommandResult::status(success, text))
        }
        OmegaCmd::Stitch { formula, template } => {
            let a: Formula = formula.parse()?;
            let family = match template {
                Some(t) => Family::Template(Arc::new(load_proof(t)?)),
                None => Family::AxiomLeaf,
            };
            let n = stitch_selector(&stitch_matrix(&a), family, None)?;
            let d = NotationDerivation::new(n)?;
            let r = verify_sampled(&d, cli.depth, cli.width);
            let text = if cli.json { pretty(&r) } else { verify_text(&r) };
            Ok(CommandResult::status(r.ok, text))
        }
    }
}
