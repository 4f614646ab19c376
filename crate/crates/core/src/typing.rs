//! Syntax-directed inference for `Γ ⊢ t : φ` and `Γ ⊢ e ∴ φ`.
//!
//! Binders carry their domain, so inference is total and deterministic. The
//! `just` coercion is only ever used at the point where an irrelevant
//! judgment is requested for a term; there is no backtracking.
//!
//! Successful inference returns a [`Derivation`]: a tree of judgments tagged
//! with the rule used at each node. [`replay`] re-checks such a tree node by
//! node without running inference, so hand-written trees can be validated
//! with it too.

use std::fmt;

use crate::subst::rename;
use crate::syntax::{fresh, Context, Expr, JudgmentKind, Name, Prop};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("`{0}` is not a term, so it has no relevant type")]
    NotATerm(Expr),
    #[error("expected a function, found an expression of type `{found}`")]
    ArrowExpected { found: Prop },
    #[error("argument has type `{found}`, but the function expects `{expected}`")]
    ArgMismatch { expected: Prop, found: Prop },
    #[error("expected an expression of type `Ex _`, found `{found}`")]
    ExistsExpected { found: Prop },
    #[error("`{0}` must be a term here")]
    NonTermArgument(Expr),
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: Prop, found: Prop },
}

/// Rules of the computational system.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rule {
    Hyp,
    Just,
    ArrowI,
    ArrowE,
    ArrowIJ,
    ArrowEJ,
    ExistsI,
    ExistsE,
    ExistsIJ,
    ExistsEJ,
}

impl Rule {
    pub const ALL: [Rule; 10] = [
        Rule::Hyp,
        Rule::Just,
        Rule::ArrowI,
        Rule::ArrowE,
        Rule::ArrowIJ,
        Rule::ArrowEJ,
        Rule::ExistsI,
        Rule::ExistsE,
        Rule::ExistsIJ,
        Rule::ExistsEJ,
    ];

    /// ASCII name used in fixtures.
    pub fn name(self) -> &'static str {
        match self {
            Rule::Hyp => "hyp",
            Rule::Just => "just",
            Rule::ArrowI => "->I",
            Rule::ArrowE => "->E",
            Rule::ArrowIJ => "->Ij",
            Rule::ArrowEJ => "->Ej",
            Rule::ExistsI => "ExI",
            Rule::ExistsE => "ExE",
            Rule::ExistsIJ => "ExIj",
            Rule::ExistsEJ => "ExEj",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Γ ⊢ e : φ` or `Γ ⊢ e ∴ φ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Judgment {
    pub ctx: Context,
    pub expr: Expr,
    pub kind: JudgmentKind,
    pub prop: Prop,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub conclusion: Judgment,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    fn node(
        ctx: &Context,
        expr: &Expr,
        kind: JudgmentKind,
        prop: Prop,
        rule: Rule,
        premises: Vec<Derivation>,
    ) -> Derivation {
        Derivation {
            conclusion: Judgment { ctx: ctx.clone(), expr: expr.clone(), kind, prop },
            rule,
            premises,
        }
    }

    pub fn prop(&self) -> &Prop {
        &self.conclusion.prop
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Pre-order list of rule tags.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }
}

/// Opens binder `x` of `body` for a context extension: keeps the name when
/// it is not yet in `ctx`, otherwise renames it.
fn open_binder(ctx: &Context, x: &Name, body: &Expr) -> (Name, Expr) {
    if !ctx.contains(x) {
        return (x.clone(), body.clone());
    }
    let mut avoid = ctx.names();
    avoid.extend(body.free_vars());
    let y = fresh(&avoid, x);
    let body = rename(x, &y, body);
    (y, body)
}

fn extend(ctx: &Context, x: Name, p: &Prop) -> Context {
    ctx.extended(x, p.clone())
        .expect("binder was opened against the context")
}

/// `Γ ⊢ e : φ`; only terms have relevant types.
pub fn infer_relevant(ctx: &Context, e: &Expr) -> Result<(Prop, Derivation), TypeError> {
    let rel = JudgmentKind::Relevant;
    match e {
        Expr::Var(x) => {
            let p = ctx.lookup(x).ok_or_else(|| TypeError::UnboundVariable(x.clone()))?;
            Ok((p.clone(), Derivation::node(ctx, e, rel, p.clone(), Rule::Hyp, vec![])))
        }
        Expr::Lam(x, dom, body) => {
            let (y, body) = open_binder(ctx, x, body);
            let inner = extend(ctx, y, dom);
            let (cod, d) = infer_relevant(&inner, &body)?;
            let p = Prop::arrow(dom.clone(), cod);
            Ok((p.clone(), Derivation::node(ctx, e, rel, p, Rule::ArrowI, vec![d])))
        }
        Expr::Ap(f, a) => {
            let (fp, fd) = infer_relevant(ctx, f)?;
            let (dom, cod) = fp
                .as_arrow()
                .ok_or_else(|| TypeError::ArrowExpected { found: fp.clone() })?;
            let (ap, ad) = infer_relevant(ctx, a)?;
            if &ap != dom {
                return Err(TypeError::ArgMismatch { expected: dom.clone(), found: ap });
            }
            let cod = cod.clone();
            Ok((cod.clone(), Derivation::node(ctx, e, rel, cod, Rule::ArrowE, vec![fd, ad])))
        }
        Expr::Box(body) => {
            let (bp, bd) = infer_irrelevant(ctx, body)?;
            let p = Prop::exists(bp);
            Ok((p.clone(), Derivation::node(ctx, e, rel, p, Rule::ExistsI, vec![bd])))
        }
        Expr::LetBox(..) | Expr::LamJ(..) | Expr::ApJ(..) | Expr::BoxJ(_) | Expr::LetBoxJ(..) => {
            Err(TypeError::NotATerm(e.clone()))
        }
    }
}

/// `Γ ⊢ e ∴ φ`.
pub fn infer_irrelevant(ctx: &Context, e: &Expr) -> Result<(Prop, Derivation), TypeError> {
    let irr = JudgmentKind::Irrelevant;
    match e {
        Expr::LamJ(x, dom, body) => {
            let (y, body) = open_binder(ctx, x, body);
            let inner = extend(ctx, y, dom);
            let (cod, d) = infer_irrelevant(&inner, &body)?;
            let p = Prop::arrow(dom.clone(), cod);
            Ok((p.clone(), Derivation::node(ctx, e, irr, p, Rule::ArrowIJ, vec![d])))
        }
        Expr::ApJ(f, a) => {
            let (fp, fd) = infer_irrelevant(ctx, f)?;
            let (dom, cod) = fp
                .as_arrow()
                .ok_or_else(|| TypeError::ArrowExpected { found: fp.clone() })?;
            if !a.is_term() {
                return Err(TypeError::NonTermArgument((**a).clone()));
            }
            let (ap, ad) = infer_relevant(ctx, a)?;
            if &ap != dom {
                return Err(TypeError::ArgMismatch { expected: dom.clone(), found: ap });
            }
            let cod = cod.clone();
            Ok((cod.clone(), Derivation::node(ctx, e, irr, cod, Rule::ArrowEJ, vec![fd, ad])))
        }
        Expr::BoxJ(body) => {
            let (bp, bd) = infer_irrelevant(ctx, body)?;
            let p = Prop::exists(bp);
            Ok((p.clone(), Derivation::node(ctx, e, irr, p, Rule::ExistsIJ, vec![bd])))
        }
        Expr::LetBox(x, scrutinee, body) => {
            if !scrutinee.is_term() {
                return Err(TypeError::NonTermArgument((**scrutinee).clone()));
            }
            let (sp, sd) = infer_relevant(ctx, scrutinee)?;
            let inner_p = sp
                .as_exists()
                .ok_or_else(|| TypeError::ExistsExpected { found: sp.clone() })?;
            let (y, body) = open_binder(ctx, x, body);
            let inner = extend(ctx, y, inner_p);
            let (bp, bd) = infer_irrelevant(&inner, &body)?;
            Ok((bp.clone(), Derivation::node(ctx, e, irr, bp, Rule::ExistsE, vec![sd, bd])))
        }
        Expr::LetBoxJ(x, scrutinee, body) => {
            let (sp, sd) = infer_irrelevant(ctx, scrutinee)?;
            let inner_p = sp
                .as_exists()
                .ok_or_else(|| TypeError::ExistsExpected { found: sp.clone() })?;
            let (y, body) = open_binder(ctx, x, body);
            let inner = extend(ctx, y, inner_p);
            let (bp, bd) = infer_irrelevant(&inner, &body)?;
            Ok((bp.clone(), Derivation::node(ctx, e, irr, bp, Rule::ExistsEJ, vec![sd, bd])))
        }
        Expr::Var(_) | Expr::Lam(..) | Expr::Ap(..) | Expr::Box(_) => {
            let (p, d) = infer_relevant(ctx, e)?;
            Ok((p.clone(), Derivation::node(ctx, e, irr, p, Rule::Just, vec![d])))
        }
    }
}

pub fn infer(ctx: &Context, e: &Expr, kind: JudgmentKind) -> Result<(Prop, Derivation), TypeError> {
    match kind {
        JudgmentKind::Relevant => infer_relevant(ctx, e),
        JudgmentKind::Irrelevant => infer_irrelevant(ctx, e),
    }
}

/// Succeeds iff `e` infers exactly `expected` under `kind`.
pub fn check_against(
    ctx: &Context,
    e: &Expr,
    kind: JudgmentKind,
    expected: &Prop,
) -> Result<Derivation, TypeError> {
    let (found, d) = infer(ctx, e, kind)?;
    if &found != expected {
        return Err(TypeError::TypeMismatch { expected: expected.clone(), found });
    }
    Ok(d)
}

/// First node of a derivation that is not an instance of its rule.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule {rule} at node {path:?}: {reason}")]
pub struct ReplayError {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

/// Checks every node of `d` against its rule schema.
pub fn replay(d: &Derivation) -> Result<(), ReplayError> {
    replay_at(d, &mut Vec::new())
}

pub fn replay_derivation(d: &Derivation) -> bool {
    replay(d).is_ok()
}

fn replay_at(d: &Derivation, path: &mut Vec<usize>) -> Result<(), ReplayError> {
    check_node(d).map_err(|reason| ReplayError { path: path.clone(), rule: d.rule, reason })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        replay_at(p, path)?;
        path.pop();
    }
    Ok(())
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn arity(d: &Derivation, n: usize) -> Result<&[Derivation], String> {
    expect(d.premises.len() == n, || {
        format!("expected {n} premise(s), found {}", d.premises.len())
    })?;
    Ok(&d.premises)
}

fn same_ctx(c: &Judgment, p: &Judgment) -> Result<(), String> {
    expect(c.ctx == p.ctx, || "premise context differs from the conclusion's".into())
}

fn kind_is(j: &Judgment, kind: JudgmentKind, what: &str) -> Result<(), String> {
    expect(j.kind == kind, || format!("{what} must be a `{kind}` judgment"))
}

/// The premise of a binding rule must live in `ctx, y : dom` for a name `y`
/// new to `ctx`, and its subject must be the binder's body with `x` renamed
/// to `y`.
fn binder_premise(
    c: &Judgment,
    p: &Judgment,
    x: &Name,
    dom: &Prop,
    body: &Expr,
    rebuild: impl Fn(Name, Expr) -> Expr,
) -> Result<(), String> {
    let n = c.ctx.len();
    expect(p.ctx.len() == n + 1, || "premise must extend the context by one hypothesis".into())?;
    let (y, q) = p.ctx.iter().last().expect("nonempty");
    expect(Context::from_pairs(p.ctx.iter().take(n).cloned()).unwrap_or_default() == c.ctx, || {
        "premise context must extend the conclusion's".into()
    })?;
    expect(!c.ctx.contains(y), || format!("hypothesis `{y}` already bound"))?;
    expect(q == dom, || format!("new hypothesis must have type `{dom}`"))?;
    let opened = rebuild(y.clone(), p.expr.clone());
    let original = rebuild(x.clone(), body.clone());
    expect(opened.alpha_eq(&original), || "premise subject is not the binder's body".into())
}

fn check_node(d: &Derivation) -> Result<(), String> {
    use JudgmentKind::{Irrelevant, Relevant};
    let c = &d.conclusion;
    match d.rule {
        Rule::Hyp => {
            arity(d, 0)?;
            kind_is(c, Relevant, "conclusion")?;
            let Expr::Var(x) = &c.expr else {
                return Err("subject must be a variable".into());
            };
            expect(c.ctx.lookup(x) == Some(&c.prop), || {
                format!("context does not assign `{x}` the type `{}`", c.prop)
            })
        }
        Rule::Just => {
            let [p] = arity(d, 1)? else { unreachable!() };
            let p = &p.conclusion;
            kind_is(c, Irrelevant, "conclusion")?;
            kind_is(p, Relevant, "premise")?;
            same_ctx(c, p)?;
            expect(c.expr.is_term(), || "just applies to terms only".into())?;
            expect(p.expr == c.expr && p.prop == c.prop, || "premise must be the same term and type".into())
        }
        Rule::ArrowI | Rule::ArrowIJ => {
            let kind = if d.rule == Rule::ArrowI { Relevant } else { Irrelevant };
            let [p] = arity(d, 1)? else { unreachable!() };
            let p = &p.conclusion;
            kind_is(c, kind, "conclusion")?;
            kind_is(p, kind, "premise")?;
            let (x, dom, body, relevant) = match &c.expr {
                Expr::Lam(x, dom, body) => (x, dom, body, true),
                Expr::LamJ(x, dom, body) => (x, dom, body, false),
                _ => return Err("subject must be a λ-abstraction".into()),
            };
            expect(relevant == (kind == Relevant), || "λ flavour does not match the rule".into())?;
            expect(c.prop == Prop::arrow(dom.clone(), p.prop.clone()), || {
                "conclusion type must be domain → premise type".into()
            })?;
            binder_premise(c, p, x, dom, body, |y, b| {
                if relevant {
                    Expr::lam(y, dom.clone(), b)
                } else {
                    Expr::lam_j(y, dom.clone(), b)
                }
            })
        }
        Rule::ArrowE | Rule::ArrowEJ => {
            let kind = if d.rule == Rule::ArrowE { Relevant } else { Irrelevant };
            let [f, a] = arity(d, 2)? else { unreachable!() };
            let (f, a) = (&f.conclusion, &a.conclusion);
            kind_is(c, kind, "conclusion")?;
            kind_is(f, kind, "function premise")?;
            kind_is(a, Relevant, "argument premise")?;
            same_ctx(c, f)?;
            same_ctx(c, a)?;
            let (fe, ae) = match (&c.expr, kind) {
                (Expr::Ap(fe, ae), Relevant) | (Expr::ApJ(fe, ae), Irrelevant) => (fe, ae),
                _ => return Err("subject must be an application of the matching flavour".into()),
            };
            expect(**fe == f.expr && **ae == a.expr, || "premise subjects must be the operands".into())?;
            expect(f.prop == Prop::arrow(a.prop.clone(), c.prop.clone()), || {
                "function type must be argument type → result type".into()
            })
        }
        Rule::ExistsI | Rule::ExistsIJ => {
            let kind = if d.rule == Rule::ExistsI { Relevant } else { Irrelevant };
            let [p] = arity(d, 1)? else { unreachable!() };
            let p = &p.conclusion;
            kind_is(c, kind, "conclusion")?;
            kind_is(p, Irrelevant, "premise")?;
            same_ctx(c, p)?;
            let body = match (&c.expr, kind) {
                (Expr::Box(b), Relevant) | (Expr::BoxJ(b), Irrelevant) => b,
                _ => return Err("subject must be a box of the matching flavour".into()),
            };
            expect(**body == p.expr, || "premise subject must be the box contents".into())?;
            expect(c.prop == Prop::exists(p.prop.clone()), || "conclusion type must be ∃ of premise type".into())
        }
        Rule::ExistsE | Rule::ExistsEJ => {
            let kind = if d.rule == Rule::ExistsE { Relevant } else { Irrelevant };
            let [s, b] = arity(d, 2)? else { unreachable!() };
            let (s, b) = (&s.conclusion, &b.conclusion);
            kind_is(c, Irrelevant, "conclusion")?;
            kind_is(s, kind, "scrutinee premise")?;
            kind_is(b, Irrelevant, "body premise")?;
            same_ctx(c, s)?;
            let (x, scrutinee, body, relevant) = match &c.expr {
                Expr::LetBox(x, s, b) => (x, s, b, true),
                Expr::LetBoxJ(x, s, b) => (x, s, b, false),
                _ => return Err("subject must be a let".into()),
            };
            expect(relevant == (kind == Relevant), || "let flavour does not match the rule".into())?;
            expect(**scrutinee == s.expr, || "scrutinee premise subject mismatch".into())?;
            let inner = s.prop.as_exists().ok_or_else(|| "scrutinee type must be ∃φ".to_string())?;
            expect(b.prop == c.prop, || "body type must be the conclusion type".into())?;
            binder_premise(c, b, x, inner, body, |y, e| {
                if relevant {
                    Expr::let_box(y, (**scrutinee).clone(), e)
                } else {
                    Expr::let_box_j(y, (**scrutinee).clone(), e)
                }
            })
        }
    }
}
