//! Property fuzzing over generated well-typed samples, with a greedy
//! shrinker for the first counterexample.

use std::fmt;
use std::str::FromStr;

use jex_core::gen::{GenConfig, Generator, Sample};
use jex_core::lax::{from_lax, to_lax};
use jex_core::parse::{parse_expr, parse_prop};
use jex_core::print::{expr_to_string_in, prop_to_string, Style};
use jex_core::reduce::{is_canonical_at, normalize};
use jex_core::syntax::{Context, Expr, JudgmentKind, Prop};
use jex_core::typing::{check_against, infer};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    SubjectReduction,
    Normalization,
    Roundtrip,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::SubjectReduction, Suite::Normalization, Suite::Roundtrip];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SubjectReduction => "subject-reduction",
            Suite::Normalization => "normalization",
            Suite::Roundtrip => "roundtrip",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub suite: Suite,
    pub seed: u64,
    pub count: u64,
    pub kinds: Vec<JudgmentKind>,
    pub fuel: usize,
    pub max_depth: usize,
}

/// A sample violating the suite's property.
#[derive(Clone, Debug)]
pub struct Failure {
    pub seed: u64,
    pub ctx: Context,
    pub expr: Expr,
    pub kind: JudgmentKind,
    pub prop: Prop,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct KindReport {
    pub kind: JudgmentKind,
    pub samples: u64,
    pub failing_seeds: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub kinds: Vec<KindReport>,
    /// The first failure, shrunk.
    pub counterexample: Option<Failure>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.kinds.iter().map(|k| k.failing_seeds.len()).sum()
    }
}

pub fn sample_at(seed: u64, kind: JudgmentKind, max_depth: usize) -> Sample {
    Generator::new(GenConfig { max_depth, ..GenConfig::with_seed(seed) }).sample(kind)
}

/// Why `e` violates `suite`, if it does. `e` is assumed to check at `prop`.
pub fn violation(suite: Suite, ctx: &Context, e: &Expr, kind: JudgmentKind, prop: &Prop, fuel: usize) -> Option<String> {
    match suite {
        Suite::SubjectReduction => {
            let trace = match normalize(e, fuel) {
                Ok(n) => n.trace,
                Err(f) => f.trace,
            };
            trace.iter().enumerate().find_map(|(i, st)| {
                check_against(ctx, &st.result, kind, prop).err().map(|err| {
                    let tags: Vec<&str> = st.rules.iter().map(|r| r.tag()).collect();
                    format!("step {} [{}] loses the type: {err}", i + 1, tags.join(" "))
                })
            })
        }
        Suite::Normalization => match normalize(e, fuel) {
            Err(f) => Some(f.to_string()),
            Ok(n) if ctx.is_empty() && !is_canonical_at(&n.value, prop) => {
                Some(format!("closed expression stops at non-canonical {}", n.value))
            }
            Ok(_) => None,
        },
        Suite::Roundtrip => {
            let scope = ctx.names();
            for style in [Style::ASCII, Style { unicode: true, resugar: true }] {
                let text = expr_to_string_in(e, &scope, style);
                match parse_expr(&text) {
                    Ok(back) if back.alpha_eq(e) => {}
                    Ok(back) => return Some(format!("`{text}` parses as {back}")),
                    Err(err) => return Some(format!("`{text}` does not parse: {err}")),
                }
                let text = prop_to_string(prop, style);
                if parse_prop(&text).as_ref() != Ok(prop) {
                    return Some(format!("proposition `{text}` does not parse back"));
                }
            }
            (from_lax(&to_lax(prop)) != *prop).then(|| format!("{prop} changes under the lax translation"))
        }
    }
}

fn children(e: &Expr) -> Vec<&Expr> {
    match e {
        Expr::Var(_) => Vec::new(),
        Expr::Lam(_, _, b) | Expr::LamJ(_, _, b) | Expr::Box(b) | Expr::BoxJ(b) => vec![b],
        Expr::Ap(f, a) | Expr::ApJ(f, a) | Expr::LetBox(_, f, a) | Expr::LetBoxJ(_, f, a) => vec![f, a],
    }
}

fn with_child(e: &Expr, i: usize, c: Expr) -> Expr {
    let b = Box::new(c);
    match (e, i) {
        (Expr::Lam(x, p, _), _) => Expr::Lam(x.clone(), p.clone(), b),
        (Expr::LamJ(x, p, _), _) => Expr::LamJ(x.clone(), p.clone(), b),
        (Expr::Box(_), _) => Expr::Box(b),
        (Expr::BoxJ(_), _) => Expr::BoxJ(b),
        (Expr::Ap(_, a), 0) => Expr::Ap(b, a.clone()),
        (Expr::Ap(f, _), _) => Expr::Ap(f.clone(), b),
        (Expr::ApJ(_, a), 0) => Expr::ApJ(b, a.clone()),
        (Expr::ApJ(f, _), _) => Expr::ApJ(f.clone(), b),
        (Expr::LetBox(x, _, a), 0) => Expr::LetBox(x.clone(), b, a.clone()),
        (Expr::LetBox(x, s, _), _) => Expr::LetBox(x.clone(), s.clone(), b),
        (Expr::LetBoxJ(x, _, a), 0) => Expr::LetBoxJ(x.clone(), b, a.clone()),
        (Expr::LetBoxJ(x, s, _), _) => Expr::LetBoxJ(x.clone(), s.clone(), b),
        (Expr::Var(_), _) => unreachable!("variables have no children"),
    }
}

/// Expressions obtained by replacing one subexpression with one of its own
/// proper subexpressions, smallest results first.
fn candidates(e: &Expr) -> Vec<Expr> {
    fn go(e: &Expr, out: &mut Vec<Expr>) {
        e.visit(&mut |d| {
            if !std::ptr::eq(d, e) {
                out.push(d.clone());
            }
        });
        for (i, c) in children(e).into_iter().enumerate() {
            let mut inner = Vec::new();
            go(c, &mut inner);
            out.extend(inner.into_iter().map(|smaller| with_child(e, i, smaller)));
        }
    }
    let mut out = Vec::new();
    go(e, &mut out);
    out.sort_by_key(Expr::size);
    out
}

/// Greedily shrinks `f` while it stays well typed and still fails. The
/// proposition may change along the way; the kind does not.
pub fn shrink(suite: Suite, f: &Failure, fuel: usize) -> Failure {
    let mut cur = f.clone();
    'outer: loop {
        for cand in candidates(&cur.expr) {
            let Ok((prop, _)) = infer(&cur.ctx, &cand, cur.kind) else { continue };
            if let Some(reason) = violation(suite, &cur.ctx, &cand, cur.kind, &prop, fuel) {
                cur = Failure { expr: cand, prop, reason, ..cur };
                continue 'outer;
            }
        }
        break;
    }
    // Hypotheses the expression no longer mentions.
    let used = cur.expr.free_vars();
    let ctx = Context::from_pairs(cur.ctx.iter().filter(|(x, _)| used.contains(x)).cloned())
        .expect("a sub-context has distinct names");
    if let Some(reason) = violation(suite, &ctx, &cur.expr, cur.kind, &cur.prop, fuel) {
        cur = Failure { ctx, reason, ..cur };
    }
    cur
}

pub fn run(cfg: &FuzzConfig) -> Report {
    let mut kinds = Vec::new();
    let mut first: Option<Failure> = None;
    for &kind in &cfg.kinds {
        let mut failing_seeds = Vec::new();
        for seed in cfg.seed..cfg.seed.saturating_add(cfg.count) {
            let s = sample_at(seed, kind, cfg.max_depth);
            if let Some(reason) = violation(cfg.suite, &s.ctx, &s.expr, kind, &s.prop, cfg.fuel) {
                failing_seeds.push(seed);
                if first.is_none() {
                    first = Some(Failure { seed, ctx: s.ctx, expr: s.expr, kind, prop: s.prop, reason });
                }
            }
        }
        kinds.push(KindReport { kind, samples: cfg.count, failing_seeds });
    }
    let counterexample = first.map(|f| shrink(cfg.suite, &f, cfg.fuel));
    Report { kinds, counterexample }
}

/// A source file reproducing `f`: it checks, and its trace shows the failure.
pub fn counterexample_program(suite: Suite, f: &Failure) -> String {
    let scope = f.ctx.names();
    let e = expr_to_string_in(&f.expr, &scope, Style::ASCII);
    let mut out = format!("-- {suite} counterexample from seed {} ({})\n", f.seed, f.kind);
    out.push_str(&format!("-- {}\n", f.reason.replace('\n', " ")));
    for (x, p) in f.ctx.iter() {
        out.push_str(&format!("assume {x} : {}\n", prop_to_string(p, Style::ASCII)));
    }
    out.push_str(&format!("check {e} {} {}\n", crate::session::kind_symbol(f.kind), prop_to_string(&f.prop, Style::ASCII)));
    out.push_str(&format!("trace {e}\n"));
    out
}
