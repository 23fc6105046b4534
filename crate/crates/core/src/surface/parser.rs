use super::lexer::{lex, Kw, Tok, Token};
use crate::kernel::{Diagnostic, Rule, Span};

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Var(String),
    MVar(String),
    Nat(Box<Expr>),
    Up(Box<Expr>),
    Dn(Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    Id(Box<Expr>, Box<Expr>, Box<Expr>),
    Refl,
    Unit,
    Tt,
    Type,
    PB,
    App(Box<Expr>, Box<Expr>),
    Lam(Binder, Box<Expr>),
    Pi(Binder, Box<Expr>),
    Sig(Binder, Box<Expr>),
    Arrow(Box<Expr>, Box<Expr>),
    /// `let up(~u) = v in c`
    LetUp { name: String, value: Box<Expr>, body: Box<Expr> },
    /// `jelim(A, a, y p => C, d, b, q)`
    J {
        ty: Box<Expr>,
        lhs: Box<Expr>,
        y: String,
        p: String,
        motive: Box<Expr>,
        base: Box<Expr>,
        rhs: Box<Expr>,
        path: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binder {
    pub name: String,
    pub marked: bool,
    pub ty: Option<Box<Expr>>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeclKind {
    Def { name: String, ty: Option<Expr>, body: Expr },
    Postulate { name: String, marked: bool, ty: Expr },
    Check { term: Expr, ty: Expr },
    Eq { lhs: Expr, rhs: Expr, ty: Expr },
    ModelEq { lhs: Expr, rhs: Expr, ty: Expr },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}

pub fn parse(src: &str) -> Result<SourceFile, Diagnostic> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(SourceFile { decls })
}

/// Parses a single term, with nothing after it.
pub fn parse_term(src: &str) -> Result<Expr, Diagnostic> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.term()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Kw(k) => format!("keyword `{}`", format!("{k:?}").to_lowercase()),
        Tok::Eof => "end of input".into(),
        other => format!("`{}`", match other {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::DColon => "::",
            Tok::ColonEq => ":=",
            Tok::Semi => ";",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::EqEq => "==",
            Tok::Eq => "=",
            Tok::Tilde => "~",
            Tok::Percent => "%",
            _ => unreachable!(),
        }),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, wanted: &str) -> Diagnostic {
        Diagnostic::new(Rule::Parse, format!("expected {wanted}, found {}", describe(self.peek()))).at(self.span())
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<(), Diagnostic> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(wanted))
        }
    }

    fn ident(&mut self) -> Result<String, Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    fn decl(&mut self) -> Result<Decl, Diagnostic> {
        let span = self.span();
        let kind = match self.bump() {
            Tok::Kw(Kw::Def) => {
                let name = self.ident()?;
                let ty = if self.eat(&Tok::Colon) { Some(self.term()?) } else { None };
                self.expect(Tok::ColonEq, "`:=`")?;
                let body = self.term()?;
                DeclKind::Def { name, ty, body }
            }
            Tok::Kw(Kw::Postulate) => {
                let tilde = self.eat(&Tok::Tilde);
                let name = self.ident()?;
                let dcolon = match self.bump() {
                    Tok::Colon => false,
                    Tok::DColon => true,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("`:` or `::`"));
                    }
                };
                let ty = self.term()?;
                DeclKind::Postulate { name, marked: tilde || dcolon, ty }
            }
            Tok::Kw(Kw::Check) => {
                let term = self.term()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.term()?;
                DeclKind::Check { term, ty }
            }
            Tok::Kw(kw @ (Kw::EqDecl | Kw::ModelEq)) => {
                let lhs = self.term()?;
                self.expect(Tok::EqEq, "`==`")?;
                let rhs = self.term()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.term()?;
                if kw == Kw::EqDecl {
                    DeclKind::Eq { lhs, rhs, ty }
                } else {
                    DeclKind::ModelEq { lhs, rhs, ty }
                }
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("a declaration (def, postulate, check, eq, modeleq)"));
            }
        };
        self.expect(Tok::Semi, "`;`")?;
        Ok(Decl { kind, span })
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.span();
        match self.peek() {
            Tok::Kw(Kw::Fun) => {
                self.bump();
                let mut binders = vec![self.fun_binder()?];
                while self.peek() != &Tok::FatArrow {
                    binders.push(self.fun_binder()?);
                }
                self.bump();
                let mut body = self.term()?;
                for b in binders.into_iter().rev() {
                    body = Expr { kind: ExprKind::Lam(b.clone(), Box::new(body)), span: b.span };
                }
                Ok(Expr { span, ..body })
            }
            Tok::Kw(kw @ (Kw::Pi | Kw::Sig)) => {
                let is_pi = *kw == Kw::Pi;
                self.bump();
                let mut binders = vec![self.binder()?];
                while self.peek() == &Tok::LParen {
                    binders.push(self.binder()?);
                }
                self.expect(Tok::Comma, "`,`")?;
                let mut body = self.term()?;
                for b in binders.into_iter().rev() {
                    let bspan = b.span;
                    let kind = if is_pi { ExprKind::Pi(b, Box::new(body)) } else { ExprKind::Sig(b, Box::new(body)) };
                    body = Expr { kind, span: bspan };
                }
                Ok(Expr { span, ..body })
            }
            Tok::Kw(Kw::Let) => {
                self.bump();
                self.expect(Tok::Kw(Kw::Up), "`up`")?;
                self.expect(Tok::LParen, "`(`")?;
                self.expect(Tok::Tilde, "`~`")?;
                let name = self.ident()?;
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::Eq, "`=`")?;
                let value = Box::new(self.term()?);
                self.expect(Tok::Kw(Kw::In), "`in`")?;
                let body = Box::new(self.term()?);
                Ok(Expr { kind: ExprKind::LetUp { name, value, body }, span })
            }
            _ => {
                let lhs = self.app()?;
                if self.eat(&Tok::Arrow) {
                    let rhs = self.term()?;
                    Ok(Expr { kind: ExprKind::Arrow(Box::new(lhs), Box::new(rhs)), span })
                } else {
                    Ok(lhs)
                }
            }
        }
    }

    /// `(x : A)`, `(~x :: A)`, or a bare `x` / `~x` taking its type from the
    /// expected function type.
    fn fun_binder(&mut self) -> Result<Binder, Diagnostic> {
        let span = self.span();
        match self.peek() {
            Tok::LParen => self.binder(),
            Tok::Tilde => {
                self.bump();
                Ok(Binder { name: self.ident()?, marked: true, ty: None, span })
            }
            Tok::Ident(_) => Ok(Binder { name: self.ident()?, marked: false, ty: None, span }),
            _ => Err(self.error("a binder")),
        }
    }

    fn binder(&mut self) -> Result<Binder, Diagnostic> {
        let span = self.span();
        self.expect(Tok::LParen, "`(`")?;
        let tilde = self.eat(&Tok::Tilde);
        let name = self.ident()?;
        let dcolon = match self.peek() {
            Tok::Colon => false,
            Tok::DColon => true,
            _ => return Err(self.error("`:` or `::`")),
        };
        self.bump();
        let ty = self.term()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(Binder { name, marked: tilde || dcolon, ty: Some(Box::new(ty)), span })
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Tilde
                | Tok::Percent
                | Tok::LParen
                | Tok::Kw(
                    Kw::Natural
                        | Kw::Up
                        | Kw::Dn
                        | Kw::Fst
                        | Kw::Snd
                        | Kw::Id
                        | Kw::Refl
                        | Kw::Unit
                        | Kw::Tt
                        | Kw::Type
                        | Kw::PB
                        | Kw::Jelim
                )
        )
    }

    fn app(&mut self) -> Result<Expr, Diagnostic> {
        let mut head = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            let span = head.span;
            head = Expr { kind: ExprKind::App(Box::new(head), Box::new(arg)), span };
        }
        Ok(head)
    }

    fn parenthesised(&mut self) -> Result<Expr, Diagnostic> {
        self.expect(Tok::LParen, "`(`")?;
        let e = self.term()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.span();
        let boxed = |e: Expr| Box::new(e);
        let kind = match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                if s == "_" {
                    return Err(Diagnostic::new(Rule::Parse, "`_` cannot be used as a variable").at(span));
                }
                ExprKind::Var(s)
            }
            Tok::Tilde => {
                self.bump();
                ExprKind::MVar(self.ident()?)
            }
            Tok::Percent | Tok::Kw(Kw::Natural) => {
                self.bump();
                ExprKind::Nat(boxed(self.parenthesised()?))
            }
            Tok::Kw(Kw::Up) => {
                self.bump();
                ExprKind::Up(boxed(self.parenthesised()?))
            }
            Tok::Kw(Kw::Dn) => {
                self.bump();
                ExprKind::Dn(boxed(self.parenthesised()?))
            }
            Tok::LParen => {
                self.bump();
                let first = self.term()?;
                if self.eat(&Tok::Comma) {
                    let second = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    ExprKind::Pair(boxed(first), boxed(second))
                } else {
                    self.expect(Tok::RParen, "`)` or `,`")?;
                    return Ok(first);
                }
            }
            Tok::Kw(Kw::Fst) => {
                self.bump();
                ExprKind::Fst(boxed(self.atom()?))
            }
            Tok::Kw(Kw::Snd) => {
                self.bump();
                ExprKind::Snd(boxed(self.atom()?))
            }
            Tok::Kw(Kw::Id) => {
                self.bump();
                let a = self.atom()?;
                let l = self.atom()?;
                let r = self.atom()?;
                ExprKind::Id(boxed(a), boxed(l), boxed(r))
            }
            Tok::Kw(Kw::Refl) => {
                self.bump();
                ExprKind::Refl
            }
            Tok::Kw(Kw::Unit) => {
                self.bump();
                ExprKind::Unit
            }
            Tok::Kw(Kw::Tt) => {
                self.bump();
                ExprKind::Tt
            }
            Tok::Kw(Kw::Type) => {
                self.bump();
                ExprKind::Type
            }
            Tok::Kw(Kw::PB) => {
                self.bump();
                ExprKind::PB
            }
            Tok::Kw(Kw::Jelim) => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let ty = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let lhs = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let y = self.ident()?;
                let p = self.ident()?;
                self.expect(Tok::FatArrow, "`=>`")?;
                let motive = self.term()?;
                let mut rest = Vec::new();
                for _ in 0..3 {
                    self.expect(Tok::Comma, "`,`")?;
                    rest.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                let path = rest.pop().expect("three terms");
                let rhs = rest.pop().expect("three terms");
                let base = rest.pop().expect("three terms");
                ExprKind::J {
                    ty: boxed(ty),
                    lhs: boxed(lhs),
                    y,
                    p,
                    motive: boxed(motive),
                    base: boxed(base),
                    rhs: boxed(rhs),
                    path: boxed(path),
                }
            }
            _ => return Err(self.error("a term")),
        };
        Ok(Expr { kind, span })
    }
}

impl Expr {
    /// Structural equality ignoring spans.
    pub fn same_shape(&self, other: &Expr) -> bool {
        strip(self) == strip(other)
    }
}

fn strip(e: &Expr) -> Expr {
    let z = Span::default();
    let b = |e: &Expr| Box::new(strip(e));
    let bind = |x: &Binder| Binder { span: z, ty: x.ty.as_ref().map(|t| b(t)), ..x.clone() };
    let kind = match &e.kind {
        ExprKind::Nat(a) => ExprKind::Nat(b(a)),
        ExprKind::Up(a) => ExprKind::Up(b(a)),
        ExprKind::Dn(a) => ExprKind::Dn(b(a)),
        ExprKind::Pair(x, y) => ExprKind::Pair(b(x), b(y)),
        ExprKind::Fst(a) => ExprKind::Fst(b(a)),
        ExprKind::Snd(a) => ExprKind::Snd(b(a)),
        ExprKind::Id(x, y, w) => ExprKind::Id(b(x), b(y), b(w)),
        ExprKind::App(x, y) => ExprKind::App(b(x), b(y)),
        ExprKind::Lam(x, y) => ExprKind::Lam(bind(x), b(y)),
        ExprKind::Pi(x, y) => ExprKind::Pi(bind(x), b(y)),
        ExprKind::Sig(x, y) => ExprKind::Sig(bind(x), b(y)),
        ExprKind::Arrow(x, y) => ExprKind::Arrow(b(x), b(y)),
        ExprKind::LetUp { name, value, body } => {
            ExprKind::LetUp { name: name.clone(), value: b(value), body: b(body) }
        }
        ExprKind::J { ty, lhs, y, p, motive, base, rhs, path } => ExprKind::J {
            ty: b(ty),
            lhs: b(lhs),
            y: y.clone(),
            p: p.clone(),
            motive: b(motive),
            base: b(base),
            rhs: b(rhs),
            path: b(path),
        },
        other => other.clone(),
    };
    Expr { kind, span: z }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn def_with_lambda() {
        let f = parse("def idA : Pi (x : A) , A := fun x => x ;").unwrap();
        let DeclKind::Def { name, ty, body } = &f.decls[0].kind else { panic!() };
        assert_eq!(name, "idA");
        assert!(matches!(ty.as_ref().unwrap().kind, ExprKind::Pi(..)));
        assert!(matches!(body.kind, ExprKind::Lam(..)));
    }

    #[test]
    fn natural_intro_and_alias() {
        let f = parse("def u : %(A) := up(~x) ;").unwrap();
        let DeclKind::Def { ty, body, .. } = &f.decls[0].kind else { panic!() };
        assert!(matches!(body.kind, ExprKind::Up(_)));
        let alias = parse_term("natural(A)").unwrap();
        assert!(alias.same_shape(ty.as_ref().unwrap()));
    }

    #[test]
    fn untyped_def_parses() {
        assert!(parse("def bad := up(x) ;").is_ok());
    }

    #[test]
    fn arrow_is_right_associative_and_looser_than_application() {
        let e = parse_term("A -> f x -> C").unwrap();
        let expected = parse_term("A -> ((f x) -> C)").unwrap();
        assert!(e.same_shape(&expected));
    }

    #[test]
    fn marked_binders() {
        let e = parse_term("Pi (~x :: A) , B").unwrap();
        let ExprKind::Pi(b, _) = e.kind else { panic!() };
        assert!(b.marked);
    }

    #[test]
    fn reserved_words_rejected() {
        let e = parse("def fun : Unit := tt ;").unwrap_err();
        assert_eq!(e.rule, Rule::Parse);
        assert!(parse("postulate x : _ ;").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("def a : Unit := tt\ndef").unwrap_err();
        assert_eq!(e.span, Some(Span { line: 2, col: 1 }));
    }

    #[test]
    fn jelim_syntax() {
        let e = parse_term("jelim(A, a, y p => Id A a y, refl, b, q)").unwrap();
        assert!(matches!(e.kind, ExprKind::J { .. }));
    }
}
