//! Propositions, expressions, hypothesis contexts and the binder plumbing
//! shared by every other module.
//!
//! Binders are represented by name. Everything observable (printing, error
//! messages, derivations) is stated in terms of those names, and all
//! operations that cross a binder rename it when a capture would otherwise
//! happen.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An identifier: a variable or an atomic proposition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Name {
        Name(Arc::from(s))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Formulas `p | φ → ψ | ∃φ`.
///
/// Existential implication `φ ⊸ ψ` has no constructor of its own; it is
/// always stored as `φ → ∃ψ` (see [`Prop::lolli`]).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Prop {
    Atom(Name),
    Arrow(Box<Prop>, Box<Prop>),
    Exists(Box<Prop>),
}

impl Prop {
    pub fn atom(name: impl Into<Name>) -> Prop {
        Prop::Atom(name.into())
    }

    pub fn arrow(domain: Prop, codomain: Prop) -> Prop {
        Prop::Arrow(Box::new(domain), Box::new(codomain))
    }

    pub fn exists(body: Prop) -> Prop {
        Prop::Exists(Box::new(body))
    }

    /// `φ ⊸ ψ`, i.e. `φ → ∃ψ`.
    pub fn lolli(domain: Prop, codomain: Prop) -> Prop {
        Prop::arrow(domain, Prop::exists(codomain))
    }

    pub fn as_arrow(&self) -> Option<(&Prop, &Prop)> {
        match self {
            Prop::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_exists(&self) -> Option<&Prop> {
        match self {
            Prop::Exists(a) => Some(a),
            _ => None,
        }
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self {
            Prop::Atom(_) => 1,
            Prop::Arrow(a, b) => 1 + a.size() + b.size(),
            Prop::Exists(a) => 1 + a.size(),
        }
    }
}

/// The two typing judgments: `t : φ` (relevant, `φ true`) and `e ∴ φ`
/// (irrelevant, `φ just true`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum JudgmentKind {
    Relevant,
    Irrelevant,
}

impl JudgmentKind {
    pub const BOTH: [JudgmentKind; 2] = [JudgmentKind::Relevant, JudgmentKind::Irrelevant];
}

impl fmt::Display for JudgmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JudgmentKind::Relevant => "true",
            JudgmentKind::Irrelevant => "just",
        })
    }
}

/// Proof expressions. Terms are the sub-grammar `x | λx.t | ap(t,t') | ⟨e⟩`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Var(Name),
    Lam(Name, Prop, Box<Expr>),
    Ap(Box<Expr>, Box<Expr>),
    /// `⟨e⟩`
    Box(Box<Expr>),
    /// `let ⟨x⟩ be t in e`
    LetBox(Name, Box<Expr>, Box<Expr>),
    LamJ(Name, Prop, Box<Expr>),
    ApJ(Box<Expr>, Box<Expr>),
    /// `⟨e⟩ⱼ`
    BoxJ(Box<Expr>),
    /// `let ⟨x⟩ⱼ be e' in e`
    LetBoxJ(Name, Box<Expr>, Box<Expr>),
}

/// Constructor tags, used by the generator and by coverage statistics.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExprShape {
    Var,
    Lam,
    Ap,
    Box,
    LetBox,
    LamJ,
    ApJ,
    BoxJ,
    LetBoxJ,
}

impl ExprShape {
    pub const ALL: [ExprShape; 9] = [
        ExprShape::Var,
        ExprShape::Lam,
        ExprShape::Ap,
        ExprShape::Box,
        ExprShape::LetBox,
        ExprShape::LamJ,
        ExprShape::ApJ,
        ExprShape::BoxJ,
        ExprShape::LetBoxJ,
    ];
}

impl Expr {
    pub fn var(name: impl Into<Name>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn lam(x: impl Into<Name>, annot: Prop, body: Expr) -> Expr {
        Expr::Lam(x.into(), annot, Box::new(body))
    }

    pub fn ap(fun: Expr, arg: Expr) -> Expr {
        Expr::Ap(Box::new(fun), Box::new(arg))
    }

    pub fn boxed(body: Expr) -> Expr {
        Expr::Box(Box::new(body))
    }

    pub fn let_box(x: impl Into<Name>, scrutinee: Expr, body: Expr) -> Expr {
        Expr::LetBox(x.into(), Box::new(scrutinee), Box::new(body))
    }

    pub fn lam_j(x: impl Into<Name>, annot: Prop, body: Expr) -> Expr {
        Expr::LamJ(x.into(), annot, Box::new(body))
    }

    pub fn ap_j(fun: Expr, arg: Expr) -> Expr {
        Expr::ApJ(Box::new(fun), Box::new(arg))
    }

    pub fn boxed_j(body: Expr) -> Expr {
        Expr::BoxJ(Box::new(body))
    }

    pub fn let_box_j(x: impl Into<Name>, scrutinee: Expr, body: Expr) -> Expr {
        Expr::LetBoxJ(x.into(), Box::new(scrutinee), Box::new(body))
    }

    pub fn shape(&self) -> ExprShape {
        match self {
            Expr::Var(_) => ExprShape::Var,
            Expr::Lam(..) => ExprShape::Lam,
            Expr::Ap(..) => ExprShape::Ap,
            Expr::Box(_) => ExprShape::Box,
            Expr::LetBox(..) => ExprShape::LetBox,
            Expr::LamJ(..) => ExprShape::LamJ,
            Expr::ApJ(..) => ExprShape::ApJ,
            Expr::BoxJ(_) => ExprShape::BoxJ,
            Expr::LetBoxJ(..) => ExprShape::LetBoxJ,
        }
    }

    /// Term-hood. The body of `⟨e⟩` is never inspected: a box around any
    /// expression is a term.
    pub fn is_term(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Box(_) => true,
            Expr::Lam(_, _, body) => body.is_term(),
            Expr::Ap(f, a) => f.is_term() && a.is_term(),
            Expr::LetBox(..) | Expr::LamJ(..) | Expr::ApJ(..) | Expr::BoxJ(_) | Expr::LetBoxJ(..) => {
                false
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Expr::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Expr::Lam(x, _, body) | Expr::LamJ(x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Expr::LetBox(x, scrutinee, body) | Expr::LetBoxJ(x, scrutinee, body) => {
                scrutinee.collect_free(bound, out);
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Expr::Ap(f, a) | Expr::ApJ(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Expr::Box(e) | Expr::BoxJ(e) => e.collect_free(bound, out),
        }
    }

    pub fn has_free(&self, x: &Name) -> bool {
        match self {
            Expr::Var(y) => y == x,
            Expr::Lam(y, _, body) | Expr::LamJ(y, _, body) => y != x && body.has_free(x),
            Expr::LetBox(y, s, body) | Expr::LetBoxJ(y, s, body) => {
                s.has_free(x) || (y != x && body.has_free(x))
            }
            Expr::Ap(f, a) | Expr::ApJ(f, a) => f.has_free(x) || a.has_free(x),
            Expr::Box(e) | Expr::BoxJ(e) => e.has_free(x),
        }
    }

    /// Every name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| match e {
            Expr::Var(x)
            | Expr::Lam(x, ..)
            | Expr::LamJ(x, ..)
            | Expr::LetBox(x, ..)
            | Expr::LetBoxJ(x, ..) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal of every subexpression.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Var(_) => {}
            Expr::Lam(_, _, b) | Expr::LamJ(_, _, b) | Expr::Box(b) | Expr::BoxJ(b) => b.visit(f),
            Expr::Ap(a, b) | Expr::ApJ(a, b) | Expr::LetBox(_, a, b) | Expr::LetBoxJ(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Lam(_, _, b) | Expr::LamJ(_, _, b) | Expr::Box(b) | Expr::BoxJ(b) => 1 + b.depth(),
            Expr::Ap(a, b) | Expr::ApJ(a, b) | Expr::LetBox(_, a, b) | Expr::LetBoxJ(_, a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Alpha-equivalence: equal up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Expr) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    /// Renames every binder so that no two binders share a name and no
    /// binder reuses a name from `avoid` or a free variable.
    pub fn freshen_binders(&self, avoid: &BTreeSet<Name>) -> Expr {
        let mut used = avoid.clone();
        used.extend(self.free_vars());
        freshen(self, &mut used, &mut Vec::new())
    }
}

fn alpha(a: &Expr, b: &Expr, binders: &mut Vec<(Name, Name)>) -> bool {
    match (a, b) {
        (Expr::Var(x), Expr::Var(y)) => {
            let left = binders.iter().rposition(|(l, _)| l == x);
            let right = binders.iter().rposition(|(_, r)| r == y);
            match (left, right) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Expr::Lam(x, p, e), Expr::Lam(y, q, f)) | (Expr::LamJ(x, p, e), Expr::LamJ(y, q, f)) => {
            p == q && under(binders, x, y, |bs| alpha(e, f, bs))
        }
        (Expr::Ap(e1, e2), Expr::Ap(f1, f2)) | (Expr::ApJ(e1, e2), Expr::ApJ(f1, f2)) => {
            alpha(e1, f1, binders) && alpha(e2, f2, binders)
        }
        (Expr::Box(e), Expr::Box(f)) | (Expr::BoxJ(e), Expr::BoxJ(f)) => alpha(e, f, binders),
        (Expr::LetBox(x, s, e), Expr::LetBox(y, t, f))
        | (Expr::LetBoxJ(x, s, e), Expr::LetBoxJ(y, t, f)) => {
            alpha(s, t, binders) && under(binders, x, y, |bs| alpha(e, f, bs))
        }
        _ => false,
    }
}

fn under<T>(
    binders: &mut Vec<(Name, Name)>,
    x: &Name,
    y: &Name,
    k: impl FnOnce(&mut Vec<(Name, Name)>) -> T,
) -> T {
    binders.push((x.clone(), y.clone()));
    let out = k(binders);
    binders.pop();
    out
}

fn freshen(e: &Expr, used: &mut BTreeSet<Name>, renaming: &mut Vec<(Name, Name)>) -> Expr {
    let bind = |x: &Name, body: &Expr, used: &mut BTreeSet<Name>, renaming: &mut Vec<(Name, Name)>| {
        let y = fresh(used, x);
        used.insert(y.clone());
        renaming.push((x.clone(), y.clone()));
        let body = freshen(body, used, renaming);
        renaming.pop();
        (y, body)
    };
    match e {
        Expr::Var(x) => match renaming.iter().rev().find(|(from, _)| from == x) {
            Some((_, to)) => Expr::Var(to.clone()),
            None => e.clone(),
        },
        Expr::Lam(x, p, b) => {
            let (y, b) = bind(x, b, used, renaming);
            Expr::lam(y, p.clone(), b)
        }
        Expr::LamJ(x, p, b) => {
            let (y, b) = bind(x, b, used, renaming);
            Expr::lam_j(y, p.clone(), b)
        }
        Expr::LetBox(x, s, b) => {
            let s = freshen(s, used, renaming);
            let (y, b) = bind(x, b, used, renaming);
            Expr::let_box(y, s, b)
        }
        Expr::LetBoxJ(x, s, b) => {
            let s = freshen(s, used, renaming);
            let (y, b) = bind(x, b, used, renaming);
            Expr::let_box_j(y, s, b)
        }
        Expr::Ap(f, a) => Expr::ap(freshen(f, used, renaming), freshen(a, used, renaming)),
        Expr::ApJ(f, a) => Expr::ap_j(freshen(f, used, renaming), freshen(a, used, renaming)),
        Expr::Box(b) => Expr::boxed(freshen(b, used, renaming)),
        Expr::BoxJ(b) => Expr::boxed_j(freshen(b, used, renaming)),
    }
}

/// `hint` when it is not in `avoid`, otherwise `hint` followed by the least
/// positive integer that makes it unused.
pub fn fresh(avoid: &BTreeSet<Name>, hint: &Name) -> Name {
    if !avoid.contains(hint) {
        return hint.clone();
    }
    (1u64..)
        .map(|i| Name::from(format!("{hint}{i}")))
        .find(|candidate| !avoid.contains(candidate))
        .expect("unbounded suffix search")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("hypothesis `{0}` is already bound in the context")]
pub struct DuplicateHypothesis(pub Name);

/// Ordered proof-relevant hypotheses `x₁ : φ₁, …, xₙ : φₙ` with pairwise
/// distinct names.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Context {
    entries: Vec<(Name, Prop)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Name, Prop)>,
    ) -> Result<Context, DuplicateHypothesis> {
        let mut ctx = Context::new();
        for (x, p) in pairs {
            ctx = ctx.extended(x, p)?;
        }
        Ok(ctx)
    }

    /// The context with `x : φ` appended.
    pub fn extended(&self, x: Name, prop: Prop) -> Result<Context, DuplicateHypothesis> {
        if self.contains(&x) {
            return Err(DuplicateHypothesis(x));
        }
        let mut entries = self.entries.clone();
        entries.push((x, prop));
        Ok(Context { entries })
    }

    pub fn lookup(&self, x: &Name) -> Option<&Prop> {
        self.entries.iter().rev().find(|(y, _)| y == x).map(|(_, p)| p)
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.entries.iter().any(|(y, _)| y == x)
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.entries.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Prop)> {
        self.entries.iter()
    }

    pub fn props(&self) -> Vec<Prop> {
        self.entries.iter().map(|(_, p)| p.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Swaps the hypotheses at `i` and `i + 1`.
    pub fn swapped(&self, i: usize) -> Context {
        let mut entries = self.entries.clone();
        entries.swap(i, i + 1);
        Context { entries }
    }
}
