//! Bidirectional elaboration of surface terms into fully annotated kernel
//! terms. The elaborator consults the kernel for weak head normal forms and
//! conversion; its output is re-checked by the kernel in any case.
//!
//! Definitions are unfolded at their use sites: `f` elaborates to the body of
//! `f` and `~f` to its zeroing. Postulates become context entries.

use std::collections::HashMap;

use super::parser::{Binder, Expr, ExprKind};
use crate::kernel::{Checker, Diagnostic, Env, Result, Rule, Span};
use crate::syntax::{fresh_name, free_vars, name, substitute, zero_all, Entry, Mark, Name, RcTerm, Term};

#[derive(Debug, Clone)]
enum Local {
    Var(Name),
    /// A marked-only name standing for a term, introduced by dull binders and
    /// `let up(~u) = v in c`.
    Alias { term: RcTerm, ty: RcTerm },
}

#[derive(Debug, Clone)]
enum Global {
    Postulate,
    Def { body: RcTerm, ty: RcTerm },
}

pub struct Elaborator<'c> {
    checker: &'c Checker,
    env: Env,
    locals: Vec<(String, Local)>,
    globals: HashMap<String, Global>,
}

fn err(rule: Rule, span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(rule, msg).at(span)
}

impl<'c> Elaborator<'c> {
    pub fn new(checker: &'c Checker) -> Elaborator<'c> {
        Elaborator::over(checker, Env::empty())
    }

    /// Elaborates relative to an already checked context, whose entries are
    /// visible under their own names.
    pub fn over(checker: &'c Checker, env: Env) -> Elaborator<'c> {
        let globals = env.entries().iter().map(|e| (e.name.to_string(), Global::Postulate)).collect();
        Elaborator { checker, env, locals: Vec::new(), globals }
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn checker(&self) -> &Checker {
        self.checker
    }

    fn declare(&mut self, n: &str, span: Span) -> Result<()> {
        if self.globals.contains_key(n) {
            return Err(err(Rule::Decl, span, format!("`{n}` is already declared")));
        }
        Ok(())
    }

    /// `postulate x : A ;` or `postulate ~x :: A ;`
    pub fn postulate(&mut self, n: &str, marked: bool, ty: &Expr, span: Span) -> Result<RcTerm> {
        self.declare(n, span)?;
        let (t, rule) = if marked {
            (self.zeroed(|this| this.elab_type(ty)).map_err(|d| d.within(Rule::CtxExtZero))?, Rule::CtxExtZero)
        } else {
            (self.elab_type(ty)?, Rule::CtxExt)
        };
        let at = if marked { self.env.zeroed() } else { self.env.clone() };
        self.checker.check_type(&at, &t).map_err(|d| d.within(rule).at(span))?;
        let mark = if marked { Mark::Marked } else { Mark::Plain };
        self.env = self.env.extend(Entry { name: name(n), mark, ty: t.clone() });
        self.globals.insert(n.to_string(), Global::Postulate);
        Ok(t)
    }

    /// `def f : A := a ;`, with the type optional.
    pub fn define(&mut self, n: &str, ty: Option<&Expr>, body: &Expr, span: Span) -> Result<(RcTerm, RcTerm)> {
        self.declare(n, span)?;
        let (b, t) = self.typed(body, ty)?;
        self.globals.insert(n.to_string(), Global::Def { body: b.clone(), ty: t.clone() });
        Ok((b, t))
    }

    /// Elaborates and kernel-checks `a : A` (or infers `A`).
    pub fn typed(&mut self, a: &Expr, ty: Option<&Expr>) -> Result<(RcTerm, RcTerm)> {
        let (b, t) = match ty {
            Some(te) => {
                let t = self.elab_type(te)?;
                self.checker.check_type(&self.env, &t).map_err(|d| d.at(te.span))?;
                (self.check(a, &t)?, t)
            }
            None => self.infer(a)?,
        };
        self.checker.check_term(&self.env, &b, &t).map_err(|d| d.at(a.span))?;
        Ok((b, t))
    }

    fn zeroed<T>(&mut self, f: impl FnOnce(&mut Self) -> T) -> T {
        let saved = self.env.clone();
        self.env = saved.zeroed();
        let r = f(self);
        self.env = saved;
        r
    }

    fn with_local<T>(&mut self, surface: &str, ty: &RcTerm, local: impl FnOnce(&Name) -> Option<Local>, f: impl FnOnce(&mut Self, &Name) -> Result<T>) -> Result<T> {
        let k = self.env.fresh(surface);
        let saved = self.env.clone();
        self.env = self.env.extend(Entry { name: k.clone(), mark: Mark::Plain, ty: ty.clone() });
        let pushed = match (surface, local(&k)) {
            ("_", _) | (_, None) => false,
            (_, Some(l)) => {
                self.locals.push((surface.to_string(), l));
                true
            }
        };
        let r = f(self, &k);
        if pushed {
            self.locals.pop();
        }
        self.env = saved;
        r
    }

    /// Binds a plain variable.
    fn with_var<T>(&mut self, surface: &str, ty: &RcTerm, f: impl FnOnce(&mut Self, &Name) -> Result<T>) -> Result<T> {
        self.with_local(surface, ty, |k| Some(Local::Var(k.clone())), f)
    }

    /// Binds `y : ♮A` and makes the surface name stand for `(~y)_♮`, so that
    /// `λ ~x :: A. b` becomes `λ y : ♮A. b[(~y)_♮ / ~x]`.
    fn with_dull<T>(&mut self, surface: &str, a0: &RcTerm, f: impl FnOnce(&mut Self, &Name) -> Result<T>) -> Result<T> {
        let ty = Term::nat(a0.clone());
        self.with_local(
            surface,
            &ty,
            |k| Some(Local::Alias { term: Term::dn(Term::MVar(k.clone()).rc(), a0.clone()), ty: a0.clone() }),
            f,
        )
    }

    fn with_alias<T>(&mut self, surface: &str, term: RcTerm, ty: RcTerm, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.locals.push((surface.to_string(), Local::Alias { term, ty }));
        let r = f(self);
        self.locals.pop();
        r
    }

    fn whnf(&self, t: &RcTerm, span: Span) -> Result<RcTerm> {
        self.checker.whnf(t).map_err(|d| d.at(span))
    }

    fn conv_types(&self, a: &RcTerm, b: &RcTerm, span: Span) -> Result<bool> {
        self.checker.convert_types(&self.env, a, b).map_err(|d| d.at(span))
    }

    fn variable(&self, x: &str, marked: bool, span: Span) -> Result<(RcTerm, RcTerm)> {
        let local = self.locals.iter().rev().find(|(n, _)| n == x).map(|(_, l)| l.clone());
        let kname = match (local, self.globals.get(x)) {
            (Some(Local::Var(k)), _) => k,
            (Some(Local::Alias { term, ty }), _) => {
                if !marked {
                    return Err(err(Rule::VarZero, span, format!("`{x}` is marked and can only be used as `~{x}`")));
                }
                return Ok((term, ty));
            }
            (None, Some(Global::Def { body, ty })) => {
                return Ok(if marked { (zero_all(body), zero_all(ty)) } else { (body.clone(), ty.clone()) });
            }
            (None, Some(Global::Postulate)) => name(x),
            (None, None) => return Err(err(Rule::Scope, span, format!("unbound variable `{x}`"))),
        };
        let t = if marked { Term::MVar(kname).rc() } else { Term::Var(kname).rc() };
        let ty = self.checker.infer_var(&self.env, &t).map_err(|d| d.at(span))?;
        Ok((t, ty))
    }

    /// A binder name for a non-dependent Π or Σ.
    fn anon(body: &RcTerm) -> Name {
        let fv = free_vars(body);
        fresh_name("_", |n| fv.contains(n))
    }

    pub fn elab_type(&mut self, e: &Expr) -> Result<RcTerm> {
        let span = e.span;
        let r = match &e.kind {
            ExprKind::Type => Ok(Term::univ()),
            ExprKind::Unit => Ok(Term::unit()),
            ExprKind::PB => Ok(Term::bool()),
            ExprKind::Nat(a) => {
                let a = self.zeroed(|this| this.elab_type(a)).map_err(|d| d.within(Rule::NatForm))?;
                Ok(Term::nat(a))
            }
            ExprKind::Pi(b, body) => self.binder_type(b, body, true),
            ExprKind::Sig(b, body) => self.binder_type(b, body, false),
            ExprKind::Arrow(a, b) => {
                let a = self.elab_type(a)?;
                let b = self.elab_type(b)?;
                Ok(Term::Pi { x: Self::anon(&b), dom: a, cod: b }.rc())
            }
            ExprKind::Id(ty, l, r) => {
                let ty = self.elab_type(ty)?;
                let l = self.check(l, &ty)?;
                let r = self.check(r, &ty)?;
                Ok(Term::id(ty, l, r))
            }
            ExprKind::LetUp { name, value, body } => {
                let (term, ty) = self.let_up(value, span)?;
                self.with_alias(name, term, ty, |this| this.elab_type(body))
            }
            _ => {
                let (t, ty) = self.infer(e)?;
                let w = self.whnf(&ty, span)?;
                if matches!(*w, Term::Univ) {
                    Ok(t)
                } else {
                    Err(Diagnostic::mismatch(Rule::Conv, format!("`{t}` is not a type"), &Term::univ(), &ty))
                }
            }
        };
        r.map_err(|d| d.at(span))
    }

    fn binder_type(&mut self, b: &Binder, body: &Expr, pi: bool) -> Result<RcTerm> {
        let Some(ty) = &b.ty else {
            return Err(err(Rule::Elab, b.span, format!("binder `{}` needs a type", b.name)));
        };
        if b.marked {
            if !pi {
                return Err(err(Rule::Elab, b.span, "marked binders are only allowed in Pi and fun"));
            }
            let a0 = self.zeroed(|this| this.elab_type(ty)).map_err(|d| d.within(Rule::NatForm))?;
            let dom = Term::nat(a0.clone());
            return self.with_dull(&b.name, &a0, |this, k| {
                let cod = this.elab_type(body)?;
                Ok(Term::Pi { x: k.clone(), dom, cod }.rc())
            });
        }
        let dom = self.elab_type(ty)?;
        self.with_var(&b.name, &dom.clone(), |this, k| {
            let cod = this.elab_type(body)?;
            Ok(if pi {
                Term::Pi { x: k.clone(), dom, cod }.rc()
            } else {
                Term::Sig { x: k.clone(), fst_ty: dom, snd_ty: cod }.rc()
            })
        })
    }

    /// Elaborates the scrutinee of `let up(~u) = v in c`, returning the term
    /// `(zv)_♮` that `~u` stands for and its type.
    fn let_up(&mut self, value: &Expr, span: Span) -> Result<(RcTerm, RcTerm)> {
        let (v, vt) = self.infer(value)?;
        let w = self.whnf(&vt, span)?;
        let Term::Nat(a0) = &*w else {
            return Err(Diagnostic::mismatch(Rule::NatElim, format!("`{v}` does not have a ♮-type"), &Term::nat(Term::var("?")), &vt).at(span));
        };
        Ok((Term::dn(zero_all(&v), a0.clone()), a0.clone()))
    }

    pub fn infer(&mut self, e: &Expr) -> Result<(RcTerm, RcTerm)> {
        self.infer_(e).map_err(|d| d.at(e.span))
    }

    fn infer_(&mut self, e: &Expr) -> Result<(RcTerm, RcTerm)> {
        let span = e.span;
        match &e.kind {
            ExprKind::Var(x) => self.variable(x, false, span),
            ExprKind::MVar(x) => self.variable(x, true, span),
            ExprKind::Type => {
                if self.checker.config().type_in_type {
                    Ok((Term::univ(), Term::univ()))
                } else {
                    Err(err(Rule::Univ, span, "`Type` has no type without type-in-type"))
                }
            }
            ExprKind::Unit | ExprKind::PB | ExprKind::Nat(_) | ExprKind::Pi(..) | ExprKind::Sig(..) | ExprKind::Arrow(..) | ExprKind::Id(..) => {
                Ok((self.elab_type(e)?, Term::univ()))
            }
            ExprKind::Tt => Ok((Term::tt(), Term::unit())),
            ExprKind::Up(a) => {
                let (a, ty) = self.zeroed(|this| this.infer(a)).map_err(|d| d.within(Rule::NatIntro))?;
                Ok((Term::up(a, ty.clone()), Term::nat(ty)))
            }
            ExprKind::Dn(b) => {
                let (b, bt) = self.infer(b)?;
                let w = self.whnf(&bt, span)?;
                let Term::Nat(a0) = &*w else {
                    return Err(err(Rule::NatElim, span, format!("`{b}` has type `{bt}`, which is not a ♮-type")));
                };
                Ok((Term::dn(b, a0.clone()), a0.clone()))
            }
            ExprKind::Lam(b, body) => {
                let Some(ty) = &b.ty else {
                    return Err(err(Rule::Elab, b.span, format!("cannot infer the type of binder `{}`", b.name)));
                };
                if b.marked {
                    let a0 = self.zeroed(|this| this.elab_type(ty)).map_err(|d| d.within(Rule::NatForm))?;
                    let dom = Term::nat(a0.clone());
                    self.with_dull(&b.name, &a0, |this, k| {
                        let (body, cod) = this.infer(body)?;
                        Ok(lam_pi(k, &dom, body, cod))
                    })
                } else {
                    let dom = self.elab_type(ty)?;
                    self.with_var(&b.name, &dom.clone(), |this, k| {
                        let (body, cod) = this.infer(body)?;
                        Ok(lam_pi(k, &dom, body, cod))
                    })
                }
            }
            ExprKind::App(f, a) => {
                let (f, ft) = self.infer(f)?;
                let w = self.whnf(&ft, span)?;
                let Term::Pi { x, dom, cod } = &*w else {
                    return Err(err(Rule::PiElim, span, format!("`{f}` has type `{ft}` and cannot be applied")));
                };
                let a = self.check_arg(a, dom)?;
                let ty = substitute(cod, &a, x);
                Ok((Term::App { fun: f, arg: a, dom: dom.clone(), x: x.clone(), cod: cod.clone() }.rc(), ty))
            }
            ExprKind::Pair(a, b) => {
                let (a, at) = self.infer(a)?;
                let (b, bt) = self.infer(b)?;
                let x = Self::anon(&bt);
                let sig = Term::Sig { x: x.clone(), fst_ty: at.clone(), snd_ty: bt.clone() }.rc();
                Ok((Term::Pair { fst: a, snd: b, fst_ty: at, x, snd_ty: bt }.rc(), sig))
            }
            ExprKind::Fst(p) | ExprKind::Snd(p) => {
                let (p, pt) = self.infer(p)?;
                let w = self.whnf(&pt, span)?;
                let Term::Sig { x, fst_ty, snd_ty } = &*w else {
                    return Err(err(Rule::SigElim, span, format!("`{p}` has type `{pt}`, which is not a Sig-type")));
                };
                let first = Term::Fst { pair: p.clone(), fst_ty: fst_ty.clone(), x: x.clone(), snd_ty: snd_ty.clone() }.rc();
                if matches!(e.kind, ExprKind::Fst(_)) {
                    Ok((first, fst_ty.clone()))
                } else {
                    let ty = substitute(snd_ty, &first, x);
                    Ok((Term::Snd { pair: p, fst_ty: fst_ty.clone(), x: x.clone(), snd_ty: snd_ty.clone() }.rc(), ty))
                }
            }
            ExprKind::Refl => Err(err(Rule::IdIntro, span, "cannot infer the type of `refl`; use it where an identity type is expected")),
            ExprKind::LetUp { name, value, body } => {
                let (term, ty) = self.let_up(value, span)?;
                self.with_alias(name, term, ty, |this| this.infer(body))
            }
            ExprKind::J { ty, lhs, y, p, motive, base, rhs, path } => {
                let a_ty = self.elab_type(ty)?;
                let a = self.check(lhs, &a_ty)?;
                let (ky, kp, c) = self.with_var(y, &a_ty.clone(), |this, ky| {
                    let path_ty = Term::id(a_ty.clone(), a.clone(), Term::Var(ky.clone()).rc());
                    this.with_var(p, &path_ty, |this, kp| Ok((ky.clone(), kp.clone(), this.elab_type(motive)?)))
                })?;
                let refl = Term::refl(a_ty.clone(), a.clone());
                let d = self.check(base, &substitute(&substitute(&c, &a, &ky), &refl, &kp))?;
                let b = self.check(rhs, &a_ty)?;
                let q = self.check(path, &Term::id(a_ty.clone(), a.clone(), b.clone()))?;
                let result = substitute(&substitute(&c, &b, &ky), &q, &kp);
                let j = Term::J { ty: a_ty, lhs: a, y: ky, p: kp, motive: c, base: d, rhs: b, path: q }.rc();
                Ok((j, result))
            }
        }
    }

    /// Checks a function argument. For a domain `♮A` an argument that does not
    /// have type `♮A` itself is checked at `A` in the zeroed context and
    /// wrapped in `up`, so that dull Π-types are applied like ordinary ones.
    fn check_arg(&mut self, a: &Expr, dom: &RcTerm) -> Result<RcTerm> {
        let first = match self.check(a, dom) {
            Ok(t) => return Ok(t),
            Err(d) => d,
        };
        let w = self.whnf(dom, a.span)?;
        let Term::Nat(a0) = &*w else { return Err(first) };
        match self.zeroed(|this| this.check(a, a0)) {
            Ok(t) => Ok(Term::up(t, a0.clone())),
            Err(_) => Err(first),
        }
    }

    pub fn check(&mut self, e: &Expr, ty: &RcTerm) -> Result<RcTerm> {
        self.check_(e, ty).map_err(|d| d.at(e.span))
    }

    fn check_(&mut self, e: &Expr, ty: &RcTerm) -> Result<RcTerm> {
        let span = e.span;
        match &e.kind {
            ExprKind::Lam(b, body) => {
                let w = self.whnf(ty, span)?;
                let Term::Pi { x, dom, cod } = &*w else {
                    return Err(err(Rule::PiIntro, span, format!("a function was given where `{ty}` was expected")));
                };
                if b.marked {
                    let dw = self.whnf(dom, span)?;
                    let Term::Nat(expected) = &*dw else {
                        return Err(Diagnostic::mismatch(Rule::PiIntro, format!("marked binder `~{}` needs a ♮-typed domain", b.name), dom, &Term::nat(Term::var("?"))).at(b.span));
                    };
                    let a0 = match &b.ty {
                        Some(t) => {
                            let a1 = self.zeroed(|this| this.elab_type(t)).map_err(|d| d.within(Rule::NatForm))?;
                            let z = self.env.zeroed();
                            if !self.checker.convert_types(&z, &a1, expected).map_err(|d| d.at(b.span))? {
                                return Err(Diagnostic::mismatch(Rule::PiIntro, format!("binder `~{}` has the wrong type", b.name), expected, &a1).at(b.span));
                            }
                            a1
                        }
                        None => expected.clone(),
                    };
                    let dom2 = Term::nat(a0.clone());
                    self.with_dull(&b.name, &a0, |this, k| {
                        let cod = substitute(cod, &Term::Var(k.clone()).rc(), x);
                        let body = this.check(body, &cod)?;
                        Ok(Term::Lam { x: k.clone(), dom: dom2, body, cod }.rc())
                    })
                } else {
                    let dom2 = match &b.ty {
                        Some(t) => {
                            let d = self.elab_type(t)?;
                            if !self.conv_types(&d, dom, b.span)? {
                                return Err(Diagnostic::mismatch(Rule::PiIntro, format!("binder `{}` has the wrong type", b.name), dom, &d).at(b.span));
                            }
                            d
                        }
                        None => dom.clone(),
                    };
                    self.with_var(&b.name, &dom2.clone(), |this, k| {
                        let cod = substitute(cod, &Term::Var(k.clone()).rc(), x);
                        let body = this.check(body, &cod)?;
                        Ok(Term::Lam { x: k.clone(), dom: dom2, body, cod }.rc())
                    })
                }
            }
            ExprKind::Pair(a, b) => {
                let w = self.whnf(ty, span)?;
                let Term::Sig { x, fst_ty, snd_ty } = &*w else { return self.switch(e, ty) };
                let a = self.check(a, fst_ty)?;
                let b = self.check(b, &substitute(snd_ty, &a, x))?;
                Ok(Term::Pair { fst: a, snd: b, fst_ty: fst_ty.clone(), x: x.clone(), snd_ty: snd_ty.clone() }.rc())
            }
            ExprKind::Refl => {
                let w = self.whnf(ty, span)?;
                let Term::Id { ty: a_ty, lhs, rhs } = &*w else {
                    return Err(err(Rule::IdIntro, span, format!("`refl` was given where `{ty}` was expected")));
                };
                if !self.checker.convert(&self.env, lhs, rhs, a_ty).map_err(|d| d.at(span))? {
                    return Err(Diagnostic::mismatch(Rule::IdIntro, "the endpoints are not definitionally equal", lhs, rhs).at(span));
                }
                Ok(Term::refl(a_ty.clone(), lhs.clone()))
            }
            ExprKind::Up(a) => {
                let w = self.whnf(ty, span)?;
                let Term::Nat(a0) = &*w else {
                    return Err(err(Rule::NatIntro, span, format!("`up` was given where `{ty}` was expected")));
                };
                let a = self.zeroed(|this| this.check(a, a0)).map_err(|d| d.within(Rule::NatIntro))?;
                Ok(Term::up(a, a0.clone()))
            }
            ExprKind::Dn(b) => {
                let z = self.env.zeroed();
                self.checker.check_type(&z, ty).map_err(|d| d.within(Rule::NatElim).at(span))?;
                let b = self.check(b, &Term::nat(ty.clone()))?;
                Ok(Term::dn(b, ty.clone()))
            }
            ExprKind::LetUp { name, value, body } => {
                let (term, aty) = self.let_up(value, span)?;
                self.with_alias(name, term, aty, |this| this.check(body, ty))
            }
            _ => self.switch(e, ty),
        }
    }

    fn switch(&mut self, e: &Expr, ty: &RcTerm) -> Result<RcTerm> {
        let (t, actual) = self.infer(e)?;
        if self.conv_types(&actual, ty, e.span)? {
            Ok(t)
        } else {
            Err(Diagnostic::mismatch(Rule::Conv, format!("`{t}` has the wrong type"), ty, &actual).at(e.span))
        }
    }
}

fn lam_pi(k: &Name, dom: &RcTerm, body: RcTerm, cod: RcTerm) -> (RcTerm, RcTerm) {
    let lam = Term::Lam { x: k.clone(), dom: dom.clone(), body, cod: cod.clone() }.rc();
    (lam, Term::Pi { x: k.clone(), dom: dom.clone(), cod }.rc())
}
