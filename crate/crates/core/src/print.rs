//! Pretty-printing in the concrete syntax read by [`crate::parse`].
//!
//! The ASCII form round-trips through the parser. The Unicode form is for
//! reading only.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::logic::{LogicalDerivation, LogicalJudgment};
use crate::syntax::{fresh, Context, Expr, JudgmentKind, Name, Prop};
use crate::typing::{Derivation, Judgment};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Style {
    pub unicode: bool,
    /// Print `φ → ∃ψ` as `φ -o ψ`.
    pub resugar: bool,
}

impl Style {
    pub const ASCII: Style = Style { unicode: false, resugar: false };

    fn arrow(self) -> &'static str {
        if self.unicode { "→" } else { "->" }
    }
    fn lolli(self) -> &'static str {
        if self.unicode { "⊸" } else { "-o" }
    }
    fn exists(self) -> &'static str {
        if self.unicode { "∃" } else { "Ex " }
    }
    fn lambda(self) -> &'static str {
        if self.unicode { "λ" } else { "\\" }
    }
    fn lambda_j(self) -> &'static str {
        if self.unicode { "λⱼ" } else { "\\j" }
    }
    fn open(self) -> &'static str {
        if self.unicode { "⟨" } else { "[" }
    }
    fn close(self) -> &'static str {
        if self.unicode { "⟩" } else { "]" }
    }
    fn close_j(self) -> &'static str {
        if self.unicode { "⟩ⱼ" } else { "]j" }
    }
    fn turnstile(self) -> &'static str {
        if self.unicode { "⊢" } else { "|-" }
    }
    fn irrelevant(self) -> &'static str {
        if self.unicode { "∴" } else { "::" }
    }
}

pub fn prop_to_string(p: &Prop, style: Style) -> String {
    let mut s = String::new();
    write_prop(&mut s, p, style, false);
    s
}

/// `operand` is true when `p` sits in the left of an implication or under
/// `∃`, where an implication needs parentheses.
fn write_prop(out: &mut String, p: &Prop, style: Style, operand: bool) {
    match p {
        Prop::Atom(a) => out.push_str(a.as_str()),
        Prop::Exists(a) => {
            out.push_str(style.exists());
            write_prop(out, a, style, true);
        }
        Prop::Arrow(a, b) => {
            if operand {
                out.push('(');
            }
            write_prop(out, a, style, true);
            match (style.resugar, &**b) {
                (true, Prop::Exists(inner)) => {
                    let _ = write!(out, " {} ", style.lolli());
                    write_prop(out, inner, style, false);
                }
                _ => {
                    let _ = write!(out, " {} ", style.arrow());
                    write_prop(out, b, style, false);
                }
            }
            if operand {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&prop_to_string(self, Style::ASCII))
    }
}

/// Binding strength of the position an expression is printed in.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    /// Binders (`\`, `\j`, `let`) extend to the right without parentheses.
    Top,
    /// Left of `@j`.
    ApJ,
    /// Head of a juxtaposition, or right of `@j`.
    Ap,
    Atom,
}

struct ExprPrinter {
    style: Style,
    out: String,
    /// Names that a binder may not take: free names and enclosing binders.
    taken: BTreeSet<Name>,
    /// Binder renamings in scope, innermost last.
    renamed: Vec<(Name, Name)>,
}

impl ExprPrinter {
    fn new(style: Style, taken: BTreeSet<Name>) -> Self {
        ExprPrinter { style, out: String::new(), taken, renamed: Vec::new() }
    }

    fn shown(&self, x: &Name) -> Name {
        self.renamed
            .iter()
            .rev()
            .find(|(from, _)| from == x)
            .map(|(_, to)| to.clone())
            .unwrap_or_else(|| x.clone())
    }

    fn bind<T>(&mut self, x: &Name, k: impl FnOnce(&mut Self, &Name) -> T) -> T {
        let shown = if self.taken.contains(x) { fresh(&self.taken, x) } else { x.clone() };
        let inserted = self.taken.insert(shown.clone());
        self.renamed.push((x.clone(), shown.clone()));
        let out = k(self, &shown);
        self.renamed.pop();
        if inserted {
            self.taken.remove(&shown);
        }
        out
    }

    fn expr(&mut self, e: &Expr, level: Level) {
        let needed = match e {
            Expr::Var(_) | Expr::Box(_) | Expr::BoxJ(_) => Level::Atom,
            Expr::Ap(..) => Level::Ap,
            Expr::ApJ(..) => Level::ApJ,
            Expr::Lam(..) | Expr::LamJ(..) | Expr::LetBox(..) | Expr::LetBoxJ(..) => Level::Top,
        };
        let parens = level > needed;
        if parens {
            self.out.push('(');
        }
        let style = self.style;
        match e {
            Expr::Var(x) => {
                let x = self.shown(x);
                self.out.push_str(x.as_str());
            }
            Expr::Box(b) => {
                self.out.push_str(style.open());
                self.expr(b, Level::Top);
                self.out.push_str(style.close());
            }
            Expr::BoxJ(b) => {
                self.out.push_str(style.open());
                self.expr(b, Level::Top);
                self.out.push_str(style.close_j());
            }
            Expr::Ap(f, a) => {
                self.expr(f, Level::Ap);
                self.out.push(' ');
                self.expr(a, Level::Atom);
            }
            Expr::ApJ(f, a) => {
                self.expr(f, Level::ApJ);
                self.out.push_str(" @j ");
                self.expr(a, Level::Ap);
            }
            Expr::Lam(x, p, b) | Expr::LamJ(x, p, b) => {
                let lam = if matches!(e, Expr::Lam(..)) { style.lambda() } else { style.lambda_j() };
                self.bind(x, |this, shown| {
                    let _ = write!(this.out, "{lam}({shown}:{}). ", prop_to_string(p, style));
                    this.expr(b, Level::Top);
                });
            }
            Expr::LetBox(x, s, b) | Expr::LetBoxJ(x, s, b) => {
                let close = if matches!(e, Expr::LetBox(..)) { style.close() } else { style.close_j() };
                // The scrutinee is outside the binder's scope.
                let mut scrutinee = ExprPrinter::new(style, self.taken.clone());
                scrutinee.renamed = self.renamed.clone();
                scrutinee.expr(s, Level::ApJ);
                let scrutinee = scrutinee.out;
                self.bind(x, |this, shown| {
                    let _ = write!(this.out, "let {}{shown}{close} = {scrutinee} in ", style.open());
                    this.expr(b, Level::Top);
                });
            }
        }
        if parens {
            self.out.push(')');
        }
    }
}

/// Prints `e`, renaming binders that would shadow a name in `scope` or an
/// enclosing binder.
pub fn expr_to_string_in(e: &Expr, scope: &BTreeSet<Name>, style: Style) -> String {
    let mut taken = scope.clone();
    taken.extend(e.free_vars());
    let mut p = ExprPrinter::new(style, taken);
    p.expr(e, Level::Top);
    p.out
}

pub fn expr_to_string(e: &Expr, style: Style) -> String {
    expr_to_string_in(e, &BTreeSet::new(), style)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr_to_string(self, Style::ASCII))
    }
}

pub fn context_to_string(ctx: &Context, style: Style) -> String {
    let items: Vec<String> = ctx
        .iter()
        .map(|(x, p)| format!("{x} : {}", prop_to_string(p, style)))
        .collect();
    format!("[{}]", items.join(", "))
}

pub fn kind_to_string(kind: JudgmentKind, style: Style) -> &'static str {
    match kind {
        JudgmentKind::Relevant => ":",
        JudgmentKind::Irrelevant => style.irrelevant(),
    }
}

pub fn judgment_to_string(j: &Judgment, style: Style) -> String {
    format!(
        "{} {} {} {} {}",
        context_to_string(&j.ctx, style),
        style.turnstile(),
        expr_to_string_in(&j.expr, &j.ctx.names(), style),
        kind_to_string(j.kind, style),
        prop_to_string(&j.prop, style)
    )
}

pub fn logical_judgment_to_string(j: &LogicalJudgment, style: Style) -> String {
    let hyps: Vec<String> = j.hyps.iter().map(|p| prop_to_string(p, style)).collect();
    format!(
        "[{}] {} {} {}",
        hyps.join(", "),
        style.turnstile(),
        prop_to_string(&j.prop, style),
        j.kind
    )
}

/// Indented s-expression form, one node per line.
pub fn derivation_to_string(d: &Derivation, style: Style) -> String {
    let mut out = String::new();
    write_tree(&mut out, 0, d, &|d| (d.rule.name(), judgment_to_string(&d.conclusion, style)), &|d| &d.premises);
    out
}

pub fn logical_to_string(d: &LogicalDerivation, style: Style) -> String {
    let mut out = String::new();
    write_tree(
        &mut out,
        0,
        d,
        &|d| (d.rule.name(), logical_judgment_to_string(&d.conclusion, style)),
        &|d| &d.premises,
    );
    out
}

fn write_tree<T>(
    out: &mut String,
    indent: usize,
    d: &T,
    label: &dyn Fn(&T) -> (&'static str, String),
    premises: &dyn Fn(&T) -> &[T],
) {
    let (rule, judgment) = label(d);
    let _ = write!(out, "{:indent$}({rule} {judgment}", "");
    for p in premises(d) {
        out.push('\n');
        write_tree(out, indent + 2, p, label, premises);
    }
    out.push(')');
}
