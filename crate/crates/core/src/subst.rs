//! The two substitutions of the calculus.
//!
//! [`subst_term`] is ordinary capture-avoiding substitution `[t/x]e` of a
//! term for a variable. [`subst_expr`] is `⟦e/x⟧e'`, which recurses on the
//! structure of the *substituted* expression `e` rather than on `e'`: an
//! irrelevantly typed `e` cannot simply be dropped into the positions of a
//! relevantly typed variable, so its let-bindings are floated outward until a
//! term is reached.

use std::collections::BTreeSet;

use crate::syntax::{fresh, Expr, Name};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("only terms may be substituted with [t/x]e; use the expression substitution instead")]
    NotATerm(Expr),
}

/// `[t/x]e`. `t` must be a term.
pub fn subst_term(t: &Expr, x: &Name, e: &Expr) -> Result<Expr, SubstError> {
    if !t.is_term() {
        return Err(SubstError::NotATerm(t.clone()));
    }
    Ok(replace(t, x, e))
}

/// Capture-avoiding replacement of the free occurrences of `x` in `e` by `t`,
/// for any expression `t`. Term-hood of `t` is the caller's business.
pub fn replace(t: &Expr, x: &Name, e: &Expr) -> Expr {
    if !e.has_free(x) {
        return e.clone();
    }
    let fv_t = t.free_vars();
    go(t, &fv_t, x, e)
}

fn go(t: &Expr, fv_t: &BTreeSet<Name>, x: &Name, e: &Expr) -> Expr {
    if !e.has_free(x) {
        return e.clone();
    }
    match e {
        Expr::Var(_) => t.clone(),
        Expr::Lam(y, p, body) => {
            let (y, body) = under_binder(t, fv_t, x, y, body);
            Expr::lam(y, p.clone(), body)
        }
        Expr::LamJ(y, p, body) => {
            let (y, body) = under_binder(t, fv_t, x, y, body);
            Expr::lam_j(y, p.clone(), body)
        }
        Expr::LetBox(y, s, body) => {
            let s = go(t, fv_t, x, s);
            let (y, body) = under_binder(t, fv_t, x, y, body);
            Expr::let_box(y, s, body)
        }
        Expr::LetBoxJ(y, s, body) => {
            let s = go(t, fv_t, x, s);
            let (y, body) = under_binder(t, fv_t, x, y, body);
            Expr::let_box_j(y, s, body)
        }
        Expr::Ap(f, a) => Expr::ap(go(t, fv_t, x, f), go(t, fv_t, x, a)),
        Expr::ApJ(f, a) => Expr::ap_j(go(t, fv_t, x, f), go(t, fv_t, x, a)),
        Expr::Box(b) => Expr::boxed(go(t, fv_t, x, b)),
        Expr::BoxJ(b) => Expr::boxed_j(go(t, fv_t, x, b)),
    }
}

fn under_binder(t: &Expr, fv_t: &BTreeSet<Name>, x: &Name, y: &Name, body: &Expr) -> (Name, Expr) {
    if y == x || !body.has_free(x) {
        return (y.clone(), body.clone());
    }
    if !fv_t.contains(y) {
        return (y.clone(), go(t, fv_t, x, body));
    }
    let mut avoid = fv_t.clone();
    avoid.extend(body.free_vars());
    avoid.insert(x.clone());
    let z = fresh(&avoid, y);
    let body = rename(y, &z, body);
    (z, go(t, fv_t, x, &body))
}

/// Renames the free occurrences of `from` in `e` to `to`, where `to` is
/// assumed not to occur free in `e`.
pub(crate) fn rename(from: &Name, to: &Name, e: &Expr) -> Expr {
    replace(&Expr::Var(to.clone()), from, e)
}

/// Picks a name for binder `y` (whose scope is `body`) that does not occur
/// free in `other`, renaming `body` accordingly.
fn freshen_against(y: &Name, body: &Expr, other: &BTreeSet<Name>) -> (Name, Expr) {
    if !other.contains(y) {
        return (y.clone(), body.clone());
    }
    let mut avoid = other.clone();
    avoid.extend(body.free_vars());
    let z = fresh(&avoid, y);
    let body = rename(y, &z, body);
    (z, body)
}

/// `⟦e/x⟧e'`, by recursion on `e`:
///
/// 1. `e = t` a term: `[t/x]e'`
/// 2. `e = let ⟨y⟩ be t in e''`: `let ⟨y⟩ be t in ⟦e''/x⟧e'`
/// 3. `e = let ⟨y⟩ⱼ be e''' in e''`: `let ⟨y⟩ⱼ be e''' in ⟦e''/x⟧e'`
/// 4. `e = ⟨e''⟩ⱼ`: `⟨⟦e''/x⟧e'⟩`
/// 5. `e = λⱼy.e''`: `λⱼy.⟦e''/x⟧e'`
/// 6. `e = apⱼ(e'', t)`: `apⱼ(⟦e''/x⟧e', t)`
///
/// In clauses 2, 3 and 5 the binder `y` is renamed away from the free
/// variables of `e'`. Clauses 4 to 6 do not preserve typing in general; they
/// are reproduced as stated.
///
/// Expressions outside the grammar of typable expressions (a `λ` or `ap`
/// with a non-term inside) fall under clause 1 as plain substitution.
pub fn subst_expr(e: &Expr, x: &Name, target: &Expr) -> Expr {
    let fv_target = target.free_vars();
    expr_go(e, x, target, &fv_target)
}

fn expr_go(e: &Expr, x: &Name, target: &Expr, fv_target: &BTreeSet<Name>) -> Expr {
    match e {
        Expr::LetBox(y, t, inner) => {
            let (y, inner) = freshen_against(y, inner, fv_target);
            Expr::let_box(y, (**t).clone(), expr_go(&inner, x, target, fv_target))
        }
        Expr::LetBoxJ(y, scrutinee, inner) => {
            let (y, inner) = freshen_against(y, inner, fv_target);
            Expr::let_box_j(y, (**scrutinee).clone(), expr_go(&inner, x, target, fv_target))
        }
        Expr::BoxJ(inner) => Expr::boxed(expr_go(inner, x, target, fv_target)),
        Expr::LamJ(y, p, inner) => {
            let (y, inner) = freshen_against(y, inner, fv_target);
            Expr::lam_j(y, p.clone(), expr_go(&inner, x, target, fv_target))
        }
        Expr::ApJ(inner, t) => Expr::ap_j(expr_go(inner, x, target, fv_target), (**t).clone()),
        Expr::Var(_) | Expr::Lam(..) | Expr::Ap(..) | Expr::Box(_) => replace(e, x, target),
    }
}

/// Which clause of [`subst_expr`] handles `e` at the top level.
pub fn subst_expr_clause(e: &Expr) -> u8 {
    match e {
        Expr::LetBox(..) => 2,
        Expr::LetBoxJ(..) => 3,
        Expr::BoxJ(_) => 4,
        Expr::LamJ(..) => 5,
        Expr::ApJ(..) => 6,
        Expr::Var(_) | Expr::Lam(..) | Expr::Ap(..) | Expr::Box(_) => 1,
    }
}

/// Whether the recursion of `⟦e/x⟧_` on `e` only ever uses clauses 1 to 3.
pub fn uses_only_let_clauses(e: &Expr) -> bool {
    match e {
        Expr::LetBox(_, _, inner) | Expr::LetBoxJ(_, _, inner) => uses_only_let_clauses(inner),
        other => subst_expr_clause(other) == 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Prop;

    fn p() -> Prop {
        Prop::atom("p")
    }

    #[test]
    fn subst_term_examples() {
        let x = Name::from("x");
        assert_eq!(
            subst_term(&Expr::var("y"), &x, &Expr::var("x")).unwrap(),
            Expr::var("y")
        );

        // capture avoidance: [y/x](λy.x) = λy1.y
        let out = subst_term(&Expr::var("y"), &x, &Expr::lam("y", p(), Expr::var("x"))).unwrap();
        assert_eq!(out, Expr::lam("y1", p(), Expr::var("y")));
        assert!(out.alpha_eq(&Expr::lam("w", p(), Expr::var("y"))));

        let e = Expr::let_box("w", Expr::var("x"), Expr::var("w"));
        let out = subst_term(&Expr::boxed(Expr::var("z")), &x, &e).unwrap();
        assert_eq!(out, Expr::let_box("w", Expr::boxed(Expr::var("z")), Expr::var("w")));
    }

    #[test]
    fn subst_term_rejects_non_terms() {
        let e = Expr::boxed_j(Expr::var("a"));
        assert_eq!(
            subst_term(&e, &"x".into(), &Expr::var("x")),
            Err(SubstError::NotATerm(e.clone()))
        );
    }

    #[test]
    fn bound_occurrences_are_untouched() {
        let e = Expr::lam("x", p(), Expr::var("x"));
        assert_eq!(subst_term(&Expr::var("y"), &"x".into(), &e).unwrap(), e);
        let e = Expr::let_box("x", Expr::var("x"), Expr::var("x"));
        assert_eq!(
            subst_term(&Expr::var("y"), &"x".into(), &e).unwrap(),
            Expr::let_box("x", Expr::var("y"), Expr::var("x"))
        );
    }

    #[test]
    fn subst_expr_clause_one_is_plain_substitution() {
        assert_eq!(
            subst_expr(&Expr::var("y"), &"x".into(), &Expr::var("x")),
            Expr::var("y")
        );
    }

    #[test]
    fn subst_expr_clause_two_floats_the_let() {
        let e = Expr::let_box("y", Expr::var("t0"), Expr::var("y"));
        let out = subst_expr(&e, &"x".into(), &Expr::var("x"));
        assert_eq!(out, Expr::let_box("y", Expr::var("t0"), Expr::var("y")));
    }

    #[test]
    fn subst_expr_clause_two_renames_away_from_target() {
        // ⟦let⟨y⟩ be t0 in y / x⟧ ap(x, y): the target's free y must survive.
        let e = Expr::let_box("y", Expr::var("t0"), Expr::var("y"));
        let target = Expr::ap(Expr::var("x"), Expr::var("y"));
        let out = subst_expr(&e, &"x".into(), &target);
        let expected = Expr::let_box(
            "y1",
            Expr::var("t0"),
            Expr::ap(Expr::var("y1"), Expr::var("y")),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn subst_expr_clause_three() {
        let e = Expr::let_box_j("y", Expr::var("s"), Expr::var("y"));
        let out = subst_expr(&e, &"x".into(), &Expr::boxed_j(Expr::var("x")));
        assert_eq!(
            out,
            Expr::let_box_j("y", Expr::var("s"), Expr::boxed_j(Expr::var("y")))
        );
    }

    #[test]
    fn subst_expr_clause_four_uses_a_plain_box() {
        let out = subst_expr(&Expr::boxed_j(Expr::var("a")), &"x".into(), &Expr::var("x"));
        assert_eq!(out, Expr::boxed(Expr::var("a")));
    }

    #[test]
    fn subst_expr_clause_five_binds_a_fresh_name() {
        // ⟦λⱼx.x / x⟧ ap(x, z): the binder keeps its own name only when that
        // does not clash with the target's free variables.
        let e = Expr::lam_j("x", p(), Expr::var("x"));
        let target = Expr::ap(Expr::var("x"), Expr::var("z"));
        let out = subst_expr(&e, &"x".into(), &target);
        assert_eq!(
            out,
            Expr::lam_j("x1", p(), Expr::ap(Expr::var("x1"), Expr::var("z")))
        );

        let e = Expr::lam_j("y", p(), Expr::var("y"));
        let out = subst_expr(&e, &"x".into(), &Expr::var("x"));
        assert_eq!(out, Expr::lam_j("y", p(), Expr::var("y")));
    }

    #[test]
    fn subst_expr_clause_six() {
        let e = Expr::ap_j(Expr::var("g"), Expr::var("a"));
        let out = subst_expr(&e, &"x".into(), &Expr::boxed(Expr::var("x")));
        assert_eq!(
            out,
            Expr::ap_j(Expr::boxed(Expr::var("g")), Expr::var("a"))
        );
    }

    #[test]
    fn clause_classification() {
        assert!(uses_only_let_clauses(&Expr::let_box(
            "y",
            Expr::var("t"),
            Expr::let_box_j("z", Expr::var("s"), Expr::var("z"))
        )));
        assert!(!uses_only_let_clauses(&Expr::let_box(
            "y",
            Expr::var("t"),
            Expr::boxed_j(Expr::var("y"))
        )));
    }
}
