//! Weak leftmost-outermost reduction and one-step eta expansion.
//!
//! A step contracts the redex at the root if there is one, otherwise steps
//! the function position of an application or the scrutinee of a let. No
//! reduction happens under binders or boxes.

use std::fmt;

use crate::subst::{replace, subst_expr};
use crate::syntax::{fresh, Context, Expr, JudgmentKind, Name, Prop};
use crate::typing::{check_against, TypeError};

pub const DEFAULT_FUEL: usize = 100_000;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StepKind {
    BetaArrow,
    BetaArrowJ,
    BetaExists,
    BetaExistsJ,
    CongApHead,
    CongApJHead,
    CongLetScrutinee,
    CongLetJScrutinee,
}

impl StepKind {
    pub const ALL: [StepKind; 8] = [
        StepKind::BetaArrow,
        StepKind::BetaArrowJ,
        StepKind::BetaExists,
        StepKind::BetaExistsJ,
        StepKind::CongApHead,
        StepKind::CongApJHead,
        StepKind::CongLetScrutinee,
        StepKind::CongLetJScrutinee,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            StepKind::BetaArrow => "->C",
            StepKind::BetaArrowJ => "->Cj",
            StepKind::BetaExists => "ExC",
            StepKind::BetaExistsJ => "ExCj",
            StepKind::CongApHead => "apC",
            StepKind::CongApJHead => "apCj",
            StepKind::CongLetScrutinee => "letC",
            StepKind::CongLetJScrutinee => "letCj",
        }
    }

    pub fn from_tag(s: &str) -> Option<StepKind> {
        StepKind::ALL.into_iter().find(|k| k.tag() == s)
    }

    pub fn is_congruence(self) -> bool {
        matches!(
            self,
            StepKind::CongApHead
                | StepKind::CongApJHead
                | StepKind::CongLetScrutinee
                | StepKind::CongLetJScrutinee
        )
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One reduction step: the congruence rules leading from the root to the
/// redex, followed by the contraction rule applied there.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub rules: Vec<StepKind>,
    pub result: Expr,
}

impl Step {
    /// The rule applied at the root of the expression.
    pub fn root_rule(&self) -> StepKind {
        self.rules[0]
    }

    pub fn redex_rule(&self) -> StepKind {
        *self.rules.last().expect("a step has at least one rule")
    }
}

/// Contracts `e` if it is a redex.
///
/// Besides the four redexes of matching flavour, an irrelevant application
/// whose head is a relevant `λ` and an irrelevant let whose scrutinee is a
/// relevant box are contracted too; both shapes are well typed through the
/// `just` coercion and would otherwise be stuck.
fn contract(e: &Expr) -> Option<(Expr, StepKind)> {
    match e {
        Expr::Ap(f, a) => match &**f {
            Expr::Lam(x, _, body) => Some((replace(a, x, body), StepKind::BetaArrow)),
            _ => None,
        },
        Expr::ApJ(f, a) => match &**f {
            Expr::LamJ(x, _, body) | Expr::Lam(x, _, body) => {
                Some((replace(a, x, body), StepKind::BetaArrowJ))
            }
            _ => None,
        },
        Expr::LetBox(x, s, body) => match &**s {
            Expr::Box(inner) => Some((subst_expr(inner, x, body), StepKind::BetaExists)),
            _ => None,
        },
        Expr::LetBoxJ(x, s, body) => match &**s {
            Expr::BoxJ(inner) | Expr::Box(inner) => {
                Some((subst_expr(inner, x, body), StepKind::BetaExistsJ))
            }
            _ => None,
        },
        _ => None,
    }
}

pub fn step_detailed(e: &Expr) -> Option<Step> {
    let mut rules = Vec::new();
    let result = step_at(e, &mut rules)?;
    Some(Step { rules, result })
}

fn step_at(e: &Expr, rules: &mut Vec<StepKind>) -> Option<Expr> {
    if let Some((r, kind)) = contract(e) {
        rules.push(kind);
        return Some(r);
    }
    match e {
        Expr::Ap(f, a) => {
            rules.push(StepKind::CongApHead);
            let f = step_at(f, rules)?;
            Some(Expr::ap(f, (**a).clone()))
        }
        Expr::ApJ(f, a) => {
            rules.push(StepKind::CongApJHead);
            let f = step_at(f, rules)?;
            Some(Expr::ap_j(f, (**a).clone()))
        }
        Expr::LetBox(x, s, body) => {
            rules.push(StepKind::CongLetScrutinee);
            let s = step_at(s, rules)?;
            Some(Expr::let_box(x.clone(), s, (**body).clone()))
        }
        Expr::LetBoxJ(x, s, body) => {
            rules.push(StepKind::CongLetJScrutinee);
            let s = step_at(s, rules)?;
            Some(Expr::let_box_j(x.clone(), s, (**body).clone()))
        }
        _ => None,
    }
}

/// The next step of `e` and the rule applied at its root.
pub fn step(e: &Expr) -> Option<(Expr, StepKind)> {
    step_detailed(e).map(|s| {
        let root = s.root_rule();
        (s.result, root)
    })
}

/// Applies the rule chain `rules` to `e`, independently of the strategy.
/// Returns `None` if the chain does not describe a step of `e`.
pub fn replay_step(e: &Expr, rules: &[StepKind]) -> Option<Expr> {
    let (first, rest) = rules.split_first()?;
    match (first, e) {
        (StepKind::CongApHead, Expr::Ap(f, a)) => {
            Some(Expr::ap(replay_step(f, rest)?, (**a).clone()))
        }
        (StepKind::CongApJHead, Expr::ApJ(f, a)) => {
            Some(Expr::ap_j(replay_step(f, rest)?, (**a).clone()))
        }
        (StepKind::CongLetScrutinee, Expr::LetBox(x, s, b)) => {
            Some(Expr::let_box(x.clone(), replay_step(s, rest)?, (**b).clone()))
        }
        (StepKind::CongLetJScrutinee, Expr::LetBoxJ(x, s, b)) => {
            Some(Expr::let_box_j(x.clone(), replay_step(s, rest)?, (**b).clone()))
        }
        (kind, _) if !kind.is_congruence() && rest.is_empty() => match contract(e) {
            Some((r, k)) if k == *kind => Some(r),
            _ => None,
        },
        _ => None,
    }
}

/// The subexpression of `e` that the rule chain `rules` contracts.
pub fn redex_at<'a>(e: &'a Expr, rules: &[StepKind]) -> Option<&'a Expr> {
    let (first, rest) = rules.split_first()?;
    match (first, e) {
        (StepKind::CongApHead, Expr::Ap(f, _)) | (StepKind::CongApJHead, Expr::ApJ(f, _)) => redex_at(f, rest),
        (StepKind::CongLetScrutinee, Expr::LetBox(_, s, _))
        | (StepKind::CongLetJScrutinee, Expr::LetBoxJ(_, s, _)) => redex_at(s, rest),
        (kind, _) if !kind.is_congruence() && rest.is_empty() => Some(e),
        _ => None,
    }
}

/// For a let contraction, the boxed expression it substitutes into the body.
pub fn let_substitutee<'a>(e: &'a Expr, rules: &[StepKind]) -> Option<&'a Expr> {
    match redex_at(e, rules)? {
        Expr::LetBox(_, s, _) | Expr::LetBoxJ(_, s, _) => match &**s {
            Expr::Box(inner) | Expr::BoxJ(inner) => Some(inner),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Normalized {
    pub value: Expr,
    pub trace: Vec<Step>,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("fuel exhausted after {} step{}", trace.len(), if trace.len() == 1 { "" } else { "s" })]
pub struct FuelExhausted {
    pub trace: Vec<Step>,
}

/// Steps `e` until no step applies, taking at most `fuel` steps.
pub fn normalize(e: &Expr, fuel: usize) -> Result<Normalized, FuelExhausted> {
    let mut current = e.clone();
    let mut trace = Vec::new();
    loop {
        let Some(s) = step_detailed(&current) else {
            return Ok(Normalized { value: current, trace });
        };
        if trace.len() == fuel {
            return Err(FuelExhausted { trace });
        }
        current = s.result.clone();
        trace.push(s);
    }
}

/// Whether the outermost constructor of `e` is an introduction form.
pub fn is_canonical(e: &Expr) -> bool {
    matches!(e, Expr::Lam(..) | Expr::LamJ(..) | Expr::Box(_) | Expr::BoxJ(_))
}

/// Whether `e`'s introduction form matches the head connective of `prop`.
/// Atoms have no canonical forms.
pub fn is_canonical_at(e: &Expr, prop: &Prop) -> bool {
    match prop {
        Prop::Arrow(..) => matches!(e, Expr::Lam(..) | Expr::LamJ(..)),
        Prop::Exists(_) => matches!(e, Expr::Box(_) | Expr::BoxJ(_)),
        Prop::Atom(_) => false,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum EtaError {
    #[error("cannot eta-expand at atomic type `{0}`")]
    HeadMismatch(Prop),
    #[error(transparent)]
    IllTyped(#[from] TypeError),
}

/// One-step eta expansion of `e` at `prop`:
///
/// * `t : φ → ψ` expands to `λx.ap(t, x)`
/// * `t : ∃φ` expands to `⟨let ⟨x⟩ be t in x⟩`
/// * `e ∴ φ → ψ` expands to `λⱼx.apⱼ(e, x)`
/// * `e ∴ ∃φ` expands to `⟨let ⟨x⟩ⱼ be e in x⟩ⱼ`
pub fn eta_expand(ctx: &Context, e: &Expr, prop: &Prop, kind: JudgmentKind) -> Result<Expr, EtaError> {
    if let Prop::Atom(_) = prop {
        return Err(EtaError::HeadMismatch(prop.clone()));
    }
    check_against(ctx, e, kind, prop)?;
    let mut avoid = ctx.names();
    avoid.extend(e.free_vars());
    let x = fresh(&avoid, &Name::from("x"));
    let var = Expr::Var(x.clone());
    Ok(match (prop, kind) {
        (Prop::Arrow(dom, _), JudgmentKind::Relevant) => {
            Expr::lam(x, (**dom).clone(), Expr::ap(e.clone(), var))
        }
        (Prop::Arrow(dom, _), JudgmentKind::Irrelevant) => {
            Expr::lam_j(x, (**dom).clone(), Expr::ap_j(e.clone(), var))
        }
        (Prop::Exists(_), JudgmentKind::Relevant) => Expr::boxed(Expr::let_box(x, e.clone(), var)),
        (Prop::Exists(_), JudgmentKind::Irrelevant) => {
            Expr::boxed_j(Expr::let_box_j(x, e.clone(), var))
        }
        (Prop::Atom(_), _) => unreachable!(),
    })
}
