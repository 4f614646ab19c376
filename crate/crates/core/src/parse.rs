//! Concrete syntax.
//!
//! ```text
//! prop  ::= unary (("->" | "-o") prop)?          -o desugars: A -o B = A -> Ex B
//! unary ::= "Ex" unary | atom | "(" prop ")"
//! expr  ::= "\(" x ":" prop ")." expr | "\j(" x ":" prop ")." expr
//!         | "let" "[" x "]" "=" expr "in" expr | "let" "[" x "]j" "=" expr "in" expr
//!         | app ("@j" app)*
//! app   ::= atom+
//! atom  ::= x | "(" expr ")" | "[" expr "]" | "[" expr "]j"
//! ```
//!
//! Comments run from `--` to the end of the line. The Unicode forms printed by
//! [`crate::print`] are accepted as well.

use std::collections::BTreeSet;
use std::fmt;

use crate::derived::{LaxAxiom, Witness};
use crate::lax::LaxProp;
use crate::logic::{LogicRule, LogicalDerivation, LogicalJudgment};
use crate::syntax::{Context, Expr, JudgmentKind, Name, Prop};
use crate::typing::{Derivation, Judgment, Rule};

pub const RESERVED: [&str; 13] = [
    "let", "in", "def", "check", "normalize", "trace", "translate", "derive", "assume", "proof",
    "typing", "true", "just",
];

const DECLARATION_KEYWORDS: [&str; 9] =
    ["def", "assume", "check", "normalize", "trace", "translate", "derive", "proof", "typing"];

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParseErrorKind {
    Unexpected { expected: Vec<String>, found: String },
    Invalid(String),
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Unexpected { expected, found } => {
                let list = expected.join(", ");
                if expected.len() == 1 {
                    write!(f, "{}: expected {list}, found {found}", self.pos)
                } else {
                    write!(f, "{}: expected one of {list}, found {found}", self.pos)
                }
            }
            ParseErrorKind::Invalid(msg) => write!(f, "{}: {msg}", self.pos),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DeriveRequest {
    TruncIntro(Expr),
    TruncElim(Expr),
    Lax(LaxAxiom),
    Witness(Witness, Prop, Prop),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DeclKind {
    Def(Name, Expr),
    Assume(Name, Prop),
    Check(Expr, JudgmentKind, Prop),
    Normalize(Expr),
    Trace(Expr),
    Translate(Prop),
    Derive(DeriveRequest),
    Proof(Name, LogicalDerivation),
    Typing(Name, Derivation),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decl {
    pub pos: Pos,
    pub kind: DeclKind,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok {
    Ident,
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

/// Two-character symbols first so that maximal munch works.
const SYMBOLS: [(&str, &str); 28] = [
    ("--", "--"),
    ("->", "->"),
    ("-o", "-o"),
    ("|-", "|-"),
    ("::", "::"),
    ("@j", "@j"),
    ("=>", "=>"),
    ("]j", "]j"),
    ("\\j", "\\j"),
    ("λⱼ", "\\j"),
    ("⟩ⱼ", "]j"),
    ("(", "("),
    (")", ")"),
    ("[", "["),
    ("]", "]"),
    ("\\", "\\"),
    (".", "."),
    (":", ":"),
    (",", ","),
    ("=", "="),
    ("λ", "\\"),
    ("⟨", "["),
    ("⟩", "]"),
    ("∃", "Ex"),
    ("→", "->"),
    ("⊸", "-o"),
    ("⊢", "|-"),
    ("∴", "::"),
];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    peeked: Option<Token>,
    /// Descriptions of what was tried at the current token.
    expected: BTreeSet<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> Parser {
        Parser { chars: text.chars().collect(), pos: 0, peeked: None, expected: BTreeSet::new() }
    }

    fn position(&self, idx: usize) -> Pos {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..idx.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else if c != '\r' {
                col += 1;
            }
        }
        Pos { line, col }
    }

    fn skip_trivia(&mut self) {
        loop {
            while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
                self.pos += 1;
            }
            if self.chars[self.pos..].starts_with(&['-', '-']) {
                while self.pos < self.chars.len() && self.chars[self.pos] != '\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn lex(&mut self) -> PResult<Token> {
        self.skip_trivia();
        let start = self.pos;
        let rest = &self.chars[start..];
        if rest.is_empty() {
            return Ok(Token { tok: Tok::Eof, start, end: start });
        }
        if is_ident_start(rest[0]) {
            let mut end = start;
            while end < self.chars.len() && is_ident_char(self.chars[end]) {
                end += 1;
            }
            return Ok(Token { tok: Tok::Ident, start, end });
        }
        for (text, sym) in SYMBOLS {
            let n = text.chars().count();
            if rest.len() >= n && rest[..n].iter().copied().eq(text.chars()) {
                // `]j` and `\j` only when the `j` is not the start of a name.
                if (sym == "]j" || sym == "\\j") && text.is_ascii() && rest.get(n).is_some_and(|&c| is_ident_char(c)) {
                    continue;
                }
                return Ok(Token { tok: Tok::Sym(sym), start, end: start + n });
            }
        }
        Err(ParseError {
            pos: self.position(start),
            kind: ParseErrorKind::Invalid(format!("unexpected character `{}`", rest[0])),
        })
    }

    fn peek(&mut self) -> PResult<Token> {
        if let Some(t) = &self.peeked {
            return Ok(t.clone());
        }
        let save = self.pos;
        let t = self.lex()?;
        self.pos = save;
        self.peeked = Some(t.clone());
        Ok(t)
    }

    fn bump(&mut self) -> PResult<Token> {
        let t = self.peek()?;
        self.pos = t.end;
        self.peeked = None;
        self.expected.clear();
        Ok(t)
    }

    fn text(&self, t: &Token) -> String {
        self.chars[t.start..t.end].iter().collect()
    }

    fn describe(&self, t: &Token) -> String {
        match t.tok {
            Tok::Eof => "end of input".to_string(),
            _ => format!("`{}`", self.text(t)),
        }
    }

    fn fail<T>(&mut self) -> PResult<T> {
        let t = self.peek()?;
        Err(ParseError {
            pos: self.position(t.start),
            kind: ParseErrorKind::Unexpected {
                expected: self.expected.iter().cloned().collect(),
                found: self.describe(&t),
            },
        })
    }

    fn invalid<T>(&self, at: usize, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos: self.position(at), kind: ParseErrorKind::Invalid(msg.into()) })
    }

    fn at_sym(&mut self, sym: &'static str) -> PResult<bool> {
        let t = self.peek()?;
        if t.tok == Tok::Sym(sym) {
            Ok(true)
        } else {
            self.expected.insert(format!("`{sym}`"));
            Ok(false)
        }
    }

    fn eat_sym(&mut self, sym: &'static str) -> PResult<bool> {
        if self.at_sym(sym)? {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect_sym(&mut self, sym: &'static str) -> PResult<()> {
        if self.eat_sym(sym)? {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn at_keyword(&mut self, kw: &str) -> PResult<bool> {
        let t = self.peek()?;
        if t.tok == Tok::Ident && self.text(&t) == kw {
            Ok(true)
        } else {
            self.expected.insert(format!("`{kw}`"));
            Ok(false)
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> PResult<bool> {
        if self.at_keyword(kw)? {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw)? {
            Ok(())
        } else {
            self.fail()
        }
    }

    /// The current token, if it is a name usable for a variable.
    fn at_name(&mut self) -> PResult<Option<Token>> {
        let t = self.peek()?;
        if t.tok == Tok::Ident && !RESERVED.contains(&self.text(&t).as_str()) {
            Ok(Some(t))
        } else {
            self.expected.insert("a name".into());
            Ok(None)
        }
    }

    fn expect_name(&mut self) -> PResult<Name> {
        match self.at_name()? {
            Some(t) => {
                self.bump()?;
                Ok(Name::from(self.text(&t)))
            }
            None => self.fail(),
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if self.peek()?.tok == Tok::Eof {
            Ok(())
        } else {
            self.expected.insert("end of input".into());
            self.fail()
        }
    }

    // Propositions.

    fn prop(&mut self) -> PResult<Prop> {
        let lhs = self.prop_unary()?;
        if self.eat_sym("->")? {
            Ok(Prop::arrow(lhs, self.prop()?))
        } else if self.eat_sym("-o")? {
            Ok(Prop::lolli(lhs, self.prop()?))
        } else {
            Ok(lhs)
        }
    }

    fn prop_unary(&mut self) -> PResult<Prop> {
        if self.eat_keyword("Ex")? || self.eat_sym("Ex")? {
            return Ok(Prop::exists(self.prop_unary()?));
        }
        if self.eat_sym("(")? {
            let p = self.prop()?;
            self.expect_sym(")")?;
            return Ok(p);
        }
        let t = self.peek()?;
        if t.tok == Tok::Ident {
            let text = self.text(&t);
            if text.starts_with(|c: char| c.is_ascii_lowercase()) && !RESERVED.contains(&text.as_str()) {
                self.bump()?;
                return Ok(Prop::atom(text));
            }
        }
        self.expected.insert("an atom".into());
        self.fail()
    }

    fn lax_prop(&mut self) -> PResult<LaxProp> {
        let lhs = self.lax_unary()?;
        if self.eat_sym("=>")? {
            Ok(LaxProp::implies(lhs, self.lax_prop()?))
        } else {
            Ok(lhs)
        }
    }

    fn lax_unary(&mut self) -> PResult<LaxProp> {
        if self.eat_keyword("O")? {
            return Ok(LaxProp::circle(self.lax_unary()?));
        }
        if self.eat_sym("(")? {
            let p = self.lax_prop()?;
            self.expect_sym(")")?;
            return Ok(p);
        }
        let t = self.peek()?;
        if t.tok == Tok::Ident {
            let text = self.text(&t);
            if text.starts_with(|c: char| c.is_ascii_lowercase()) {
                self.bump()?;
                return Ok(LaxProp::atom(text));
            }
        }
        self.expected.insert("an atom".into());
        self.fail()
    }

    // Expressions.

    fn expr(&mut self) -> PResult<Expr> {
        if self.eat_sym("\\")? {
            let (x, p) = self.binder()?;
            return Ok(Expr::lam(x, p, self.expr()?));
        }
        if self.eat_sym("\\j")? {
            let (x, p) = self.binder()?;
            return Ok(Expr::lam_j(x, p, self.expr()?));
        }
        if self.eat_keyword("let")? {
            self.expect_sym("[")?;
            let x = self.expect_name()?;
            let irrelevant = if self.eat_sym("]")? {
                false
            } else if self.eat_sym("]j")? {
                true
            } else {
                return self.fail();
            };
            self.expect_sym("=")?;
            let scrutinee = self.expr()?;
            self.expect_keyword("in")?;
            let body = self.expr()?;
            return Ok(if irrelevant {
                Expr::let_box_j(x, scrutinee, body)
            } else {
                Expr::let_box(x, scrutinee, body)
            });
        }
        let mut e = self.app()?;
        while self.eat_sym("@j")? {
            let arg = self.app()?;
            e = Expr::ap_j(e, arg);
        }
        Ok(e)
    }

    fn binder(&mut self) -> PResult<(Name, Prop)> {
        self.expect_sym("(")?;
        let x = self.expect_name()?;
        self.expect_sym(":")?;
        let p = self.prop()?;
        self.expect_sym(")")?;
        self.expect_sym(".")?;
        Ok((x, p))
    }

    fn app(&mut self) -> PResult<Expr> {
        let Some(mut e) = self.atom()? else {
            return self.fail();
        };
        while let Some(arg) = self.atom()? {
            e = Expr::ap(e, arg);
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Option<Expr>> {
        if let Some(t) = self.at_name()? {
            self.bump()?;
            return Ok(Some(Expr::var(self.text(&t))));
        }
        if self.eat_sym("(")? {
            let e = self.expr()?;
            self.expect_sym(")")?;
            return Ok(Some(e));
        }
        if self.eat_sym("[")? {
            let e = self.expr()?;
            if self.eat_sym("]")? {
                return Ok(Some(Expr::boxed(e)));
            }
            if self.eat_sym("]j")? {
                return Ok(Some(Expr::boxed_j(e)));
            }
            return self.fail();
        }
        Ok(None)
    }

    // Derivations.

    fn rule_name(&mut self) -> PResult<(usize, String)> {
        let t = self.peek()?;
        match t.tok {
            Tok::Ident => {
                self.bump()?;
                Ok((t.start, self.text(&t)))
            }
            Tok::Sym(s @ ("->" | "-o")) => {
                self.bump()?;
                let next = self.peek()?;
                if next.tok == Tok::Ident && next.start == t.end {
                    self.bump()?;
                    Ok((t.start, format!("{s}{}", self.text(&next))))
                } else {
                    self.expected.insert("a rule name".into());
                    self.fail()
                }
            }
            _ => {
                self.expected.insert("a rule name".into());
                self.fail()
            }
        }
    }

    fn judgment_kind_word(&mut self) -> PResult<JudgmentKind> {
        if self.eat_keyword("true")? {
            Ok(JudgmentKind::Relevant)
        } else if self.eat_keyword("just")? {
            Ok(JudgmentKind::Irrelevant)
        } else {
            self.fail()
        }
    }

    fn logical(&mut self) -> PResult<LogicalDerivation> {
        self.expect_sym("(")?;
        let (at, name) = self.rule_name()?;
        let Some(rule) = LogicRule::from_name(&name) else {
            return self.invalid(at, format!("unknown rule `{name}`"));
        };
        self.expect_sym("[")?;
        let mut hyps = Vec::new();
        if !self.eat_sym("]")? {
            loop {
                hyps.push(self.prop()?);
                if self.eat_sym("]")? {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        self.expect_sym("|-")?;
        let prop = self.prop()?;
        let kind = self.judgment_kind_word()?;
        let mut premises = Vec::new();
        while self.at_sym("(")? {
            premises.push(self.logical()?);
        }
        self.expect_sym(")")?;
        Ok(LogicalDerivation::new(LogicalJudgment::new(hyps, prop, kind), rule, premises))
    }

    fn typing(&mut self) -> PResult<Derivation> {
        self.expect_sym("(")?;
        let (at, name) = self.rule_name()?;
        let Some(rule) = Rule::from_name(&name) else {
            return self.invalid(at, format!("unknown rule `{name}`"));
        };
        let ctx_at = self.peek()?.start;
        self.expect_sym("[")?;
        let mut pairs = Vec::new();
        if !self.eat_sym("]")? {
            loop {
                let x = self.expect_name()?;
                self.expect_sym(":")?;
                pairs.push((x, self.prop()?));
                if self.eat_sym("]")? {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        let ctx = match Context::from_pairs(pairs) {
            Ok(ctx) => ctx,
            Err(e) => return self.invalid(ctx_at, e.to_string()),
        };
        self.expect_sym("|-")?;
        let expr = self.expr()?;
        let kind = self.kind_symbol()?;
        let prop = self.prop()?;
        let mut premises = Vec::new();
        while self.at_sym("(")? {
            premises.push(self.typing()?);
        }
        self.expect_sym(")")?;
        Ok(Derivation { conclusion: Judgment { ctx, expr, kind, prop }, rule, premises })
    }

    fn kind_symbol(&mut self) -> PResult<JudgmentKind> {
        if self.eat_sym(":")? {
            Ok(JudgmentKind::Relevant)
        } else if self.eat_sym("::")? {
            Ok(JudgmentKind::Irrelevant)
        } else {
            self.fail()
        }
    }

    // Declarations.

    /// A whitespace-delimited word, read verbatim.
    fn raw_word(&mut self) -> PResult<(usize, String)> {
        self.peeked = None;
        self.skip_trivia();
        let start = self.pos;
        while self.pos < self.chars.len() && !self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        self.expected.clear();
        if start == self.pos {
            self.expected.insert("a builder name".into());
            return self.fail();
        }
        Ok((start, self.chars[start..self.pos].iter().collect()))
    }

    fn derive_request(&mut self, at: usize, builder: &str) -> PResult<DeriveRequest> {
        Ok(match builder {
            "trunc-intro" => DeriveRequest::TruncIntro(self.expr()?),
            "trunc-elim" => DeriveRequest::TruncElim(self.expr()?),
            "lax-i" => DeriveRequest::Lax(LaxAxiom::Unit(self.prop_unary()?)),
            "lax-ii" => DeriveRequest::Lax(LaxAxiom::Join(self.prop_unary()?)),
            "lax-iii" => {
                let a = self.prop_unary()?;
                DeriveRequest::Lax(LaxAxiom::Map(a, self.prop_unary()?))
            }
            _ => {
                let Some(label) = builder.strip_prefix("prop-") else {
                    return self.invalid(at, format!("unknown builder `{builder}`"));
                };
                let which: Witness = match label.parse() {
                    Ok(w) => w,
                    Err(msg) => return self.invalid(at, msg),
                };
                let a = self.prop_unary()?;
                let b = if which.needs_codomain() { self.prop_unary()? } else { a.clone() };
                DeriveRequest::Witness(which, a, b)
            }
        })
    }

    fn decl(&mut self) -> PResult<Decl> {
        let t = self.peek()?;
        let pos = self.position(t.start);
        let kind = if self.eat_keyword("def")? {
            let x = self.expect_name()?;
            self.expect_sym("=")?;
            DeclKind::Def(x, self.expr()?)
        } else if self.eat_keyword("assume")? {
            let x = self.expect_name()?;
            self.expect_sym(":")?;
            DeclKind::Assume(x, self.prop()?)
        } else if self.eat_keyword("check")? {
            let e = self.expr()?;
            let kind = self.kind_symbol()?;
            DeclKind::Check(e, kind, self.prop()?)
        } else if self.eat_keyword("normalize")? {
            DeclKind::Normalize(self.expr()?)
        } else if self.eat_keyword("trace")? {
            DeclKind::Trace(self.expr()?)
        } else if self.eat_keyword("translate")? {
            DeclKind::Translate(self.prop()?)
        } else if self.eat_keyword("derive")? {
            let (at, builder) = self.raw_word()?;
            DeclKind::Derive(self.derive_request(at, &builder)?)
        } else if self.eat_keyword("proof")? {
            let x = self.expect_name()?;
            self.expect_sym("=")?;
            DeclKind::Proof(x, self.logical()?)
        } else if self.eat_keyword("typing")? {
            let x = self.expect_name()?;
            self.expect_sym("=")?;
            DeclKind::Typing(x, self.typing()?)
        } else {
            return self.fail();
        };
        Ok(Decl { pos, kind })
    }

    fn file(&mut self) -> PResult<SourceFile> {
        let mut decls = Vec::new();
        while self.peek()?.tok != Tok::Eof {
            decls.push(self.decl()?);
        }
        Ok(SourceFile { decls })
    }
}

fn whole<T>(text: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(text);
    let out = f(&mut p)?;
    p.expect_eof()?;
    Ok(out)
}

pub fn parse_prop(text: &str) -> Result<Prop, ParseError> {
    whole(text, Parser::prop)
}

pub fn parse_lax_prop(text: &str) -> Result<LaxProp, ParseError> {
    whole(text, Parser::lax_prop)
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    whole(text, Parser::expr)
}

pub fn parse_logical(text: &str) -> Result<LogicalDerivation, ParseError> {
    whole(text, Parser::logical)
}

pub fn parse_typing(text: &str) -> Result<Derivation, ParseError> {
    whole(text, Parser::typing)
}

/// `builder` is one of `trunc-intro`, `trunc-elim`, `lax-i`, `lax-ii`,
/// `lax-iii`, `prop-1L` .. `prop-6`; `args` holds its operands.
pub fn parse_derive(builder: &str, args: &str) -> Result<DeriveRequest, ParseError> {
    whole(args, |p| p.derive_request(0, builder))
}

pub fn parse_file(text: &str) -> Result<SourceFile, ParseError> {
    whole(text, Parser::file)
}

/// Whether `word` starts a declaration.
pub fn is_declaration_keyword(word: &str) -> bool {
    DECLARATION_KEYWORDS.contains(&word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Prop {
        Prop::atom("p")
    }
    fn q() -> Prop {
        Prop::atom("q")
    }

    #[test]
    fn props() {
        assert_eq!(parse_prop("p -> q -> p").unwrap(), Prop::arrow(p(), Prop::arrow(q(), p())));
        assert_eq!(parse_prop("Ex p -> q").unwrap(), Prop::arrow(Prop::exists(p()), q()));
        assert_eq!(parse_prop("p -o q").unwrap(), Prop::arrow(p(), Prop::exists(q())));
        assert_eq!(parse_prop("(p -> q) -> p").unwrap(), Prop::arrow(Prop::arrow(p(), q()), p()));
        assert_eq!(parse_prop("Ex Ex p").unwrap(), Prop::exists(Prop::exists(p())));
        assert_eq!(parse_prop("∃p → q").unwrap(), Prop::arrow(Prop::exists(p()), q()));
        assert!(parse_prop("P").is_err());
        assert!(parse_prop("p ->").is_err());
    }

    #[test]
    fn exprs() {
        assert_eq!(parse_expr("\\(x:p). x").unwrap(), Expr::lam("x", p(), Expr::var("x")));
        assert_eq!(
            parse_expr("\\(x:p). [x]").unwrap(),
            Expr::lam("x", p(), Expr::boxed(Expr::var("x")))
        );
        assert_eq!(
            parse_expr("f a b").unwrap(),
            Expr::ap(Expr::ap(Expr::var("f"), Expr::var("a")), Expr::var("b"))
        );
        assert_eq!(
            parse_expr("f @j g a @j b").unwrap(),
            Expr::ap_j(Expr::ap_j(Expr::var("f"), Expr::ap(Expr::var("g"), Expr::var("a"))), Expr::var("b"))
        );
        assert_eq!(
            parse_expr("let [x]j = y in [x]j").unwrap(),
            Expr::let_box_j("x", Expr::var("y"), Expr::boxed_j(Expr::var("x")))
        );
        assert_eq!(
            parse_expr("\\j(y:Ex p). let [x] = y in f @j x").unwrap(),
            Expr::lam_j(
                "y",
                Prop::exists(p()),
                Expr::let_box("x", Expr::var("y"), Expr::ap_j(Expr::var("f"), Expr::var("x")))
            )
        );
        assert_eq!(
            parse_expr("λⱼ(x:p). ⟨x⟩ⱼ").unwrap(),
            Expr::lam_j("x", p(), Expr::boxed_j(Expr::var("x")))
        );
        // `j` is an ordinary name when not glued to a bracket.
        assert_eq!(parse_expr("[j]").unwrap(), Expr::boxed(Expr::var("j")));
        assert_eq!(parse_expr("[x]jx").unwrap(), Expr::ap(Expr::boxed(Expr::var("x")), Expr::var("jx")));
    }

    #[test]
    fn comments_and_crlf() {
        let e = parse_expr("-- identity\r\n\\(x:p). -- body\r\n x\r\n").unwrap();
        assert_eq!(e, Expr::lam("x", p(), Expr::var("x")));
    }

    #[test]
    fn misplaced_apj_is_reported_with_position() {
        let err = parse_expr("let [x] = y in f x @j").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 22 });
        let ParseErrorKind::Unexpected { expected, found } = &err.kind else { panic!() };
        assert_eq!(found, "end of input");
        assert!(expected.contains(&"a name".to_string()));
        assert!(expected.contains(&"`(`".to_string()));
        assert_eq!(
            err.to_string(),
            "1:22: expected one of `(`, `[`, a name, found end of input"
        );
    }

    #[test]
    fn error_positions_count_lines() {
        let err = parse_file("check x : p\ncheck \\(x:p) x : p -> p").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 14 });
    }

    #[test]
    fn reserved_words_are_not_names() {
        assert!(parse_expr("let").is_err());
        assert!(parse_expr("\\(in:p). in").is_err());
    }

    #[test]
    fn files() {
        let src = "\
def id = \\(x:p). x
assume a : p
check id a : p
check a :: p
normalize id a
trace id a
translate Ex p -> q
derive lax-iii p q
derive prop-6 p
derive trunc-elim \\j(x:p). x
proof unit = (->I [] |- p -> Ex p true
  (ExI [p] |- Ex p true
    (just [p] |- p just (hyp [p] |- p true))))
typing t = (hyp [x : p] |- x : p)
";
        let f = parse_file(src).unwrap();
        assert_eq!(f.decls.len(), 12);
        assert_eq!(f.decls[2].pos, Pos { line: 3, col: 1 });
        assert!(matches!(&f.decls[3].kind, DeclKind::Check(_, JudgmentKind::Irrelevant, _)));
        assert_eq!(
            f.decls[7].kind,
            DeclKind::Derive(DeriveRequest::Lax(LaxAxiom::Map(p(), q())))
        );
        assert!(matches!(&f.decls[8].kind, DeclKind::Derive(DeriveRequest::Witness(Witness::Prop6, _, _))));
        let DeclKind::Proof(_, d) = &f.decls[10].kind else { panic!() };
        assert_eq!(d.rules(), vec![LogicRule::ArrowI, LogicRule::ExistsI, LogicRule::Just, LogicRule::Hyp]);
    }

    #[test]
    fn derivation_rule_names() {
        let d = parse_logical("(-oIj [] |- p -o q just (premise [p] |- q just))").unwrap();
        assert_eq!(d.rule, LogicRule::LolliIJ);
        assert!(parse_logical("(-> I [] |- p true)").is_err());
        let err = parse_logical("(foo [] |- p true)").unwrap_err();
        assert_eq!(err.to_string(), "1:2: unknown rule `foo`");
    }

    #[test]
    fn typing_contexts_reject_duplicates() {
        assert!(parse_typing("(hyp [x : p, x : q] |- x : q)").is_err());
    }

    #[test]
    fn lax_props() {
        assert_eq!(
            parse_lax_prop("O p => q").unwrap(),
            LaxProp::implies(LaxProp::circle(LaxProp::atom("p")), LaxProp::atom("q"))
        );
        assert_eq!(
            parse_lax_prop("(p => O q) => O p").unwrap().to_string(),
            "(p => O q) => O p"
        );
    }

    #[test]
    fn derive_requests() {
        assert_eq!(
            parse_derive("lax-i", "Ex p").unwrap(),
            DeriveRequest::Lax(LaxAxiom::Unit(Prop::exists(p())))
        );
        assert_eq!(
            parse_derive("prop-1L", "p (p -> q)").unwrap(),
            DeriveRequest::Witness(Witness::Prop1Left, p(), Prop::arrow(p(), q()))
        );
        assert!(parse_derive("prop-9", "p q").is_err());
        assert!(parse_derive("nope", "p").is_err());
    }
}
