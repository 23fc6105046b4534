use std::cell::RefCell;

use super::typing::subst2;
use super::{Checker, Diagnostic, Env, Result};
use crate::syntax::{
    alpha_eq, fresh_name, free_vars, map_children, substitute, zero_all, Entry, Mark, Name, RcTerm, Term,
};

impl Checker {
    pub(super) fn whnf_(&self, t: &RcTerm) -> Result<RcTerm> {
        match &**t {
            Term::App { fun, arg, dom, x, cod } => {
                let f = self.whnf_(fun)?;
                if let Term::Lam { x: y, body, .. } = &*f {
                    self.tick()?;
                    return self.whnf_(&substitute(body, arg, y));
                }
                Ok(rebuilt(t, fun, f, |fun| Term::App {
                    fun,
                    arg: arg.clone(),
                    dom: dom.clone(),
                    x: x.clone(),
                    cod: cod.clone(),
                }))
            }
            Term::Dn { body, ty } => {
                let b = self.whnf_(body)?;
                if let Term::Up { body: a, .. } = &*b {
                    self.tick()?;
                    return self.whnf_(a);
                }
                Ok(rebuilt(t, body, b, |body| Term::Dn { body, ty: ty.clone() }))
            }
            Term::Fst { pair, fst_ty, x, snd_ty } | Term::Snd { pair, fst_ty, x, snd_ty } => {
                let is_fst = matches!(**t, Term::Fst { .. });
                let p = self.whnf_(pair)?;
                if let Term::Pair { fst, snd, .. } = &*p {
                    self.tick()?;
                    return self.whnf_(if is_fst { fst } else { snd });
                }
                Ok(rebuilt(t, pair, p, |pair| {
                    let (fst_ty, x, snd_ty) = (fst_ty.clone(), x.clone(), snd_ty.clone());
                    if is_fst {
                        Term::Fst { pair, fst_ty, x, snd_ty }
                    } else {
                        Term::Snd { pair, fst_ty, x, snd_ty }
                    }
                }))
            }
            Term::J { ty, lhs, y, p, motive, base, rhs, path } => {
                let q = self.whnf_(path)?;
                if let Term::Refl { .. } = &*q {
                    self.tick()?;
                    return self.whnf_(base);
                }
                Ok(rebuilt(t, path, q, |path| Term::J {
                    ty: ty.clone(),
                    lhs: lhs.clone(),
                    y: y.clone(),
                    p: p.clone(),
                    motive: motive.clone(),
                    base: base.clone(),
                    rhs: rhs.clone(),
                    path,
                }))
            }
            _ => Ok(t.clone()),
        }
    }

    /// Type-directed comparison of `a` and `b` at `ty`.
    pub(super) fn conv(&self, env: &Env, a: &RcTerm, b: &RcTerm, ty: &RcTerm) -> Result<bool> {
        if alpha_eq(a, b) {
            return Ok(true);
        }
        let ty = self.whnf_(ty)?;
        match &*ty {
            Term::Pi { x, dom, cod } => {
                let z = fresh_for(env, &[a, b]);
                let env2 = env.extend(Entry { name: z.clone(), mark: Mark::Plain, ty: dom.clone() });
                let zv = Term::Var(z.clone()).rc();
                let apply = |f: &RcTerm| {
                    Term::App { fun: f.clone(), arg: zv.clone(), dom: dom.clone(), x: x.clone(), cod: cod.clone() }
                        .rc()
                };
                self.conv(&env2, &apply(a), &apply(b), &substitute(cod, &zv, x))
            }
            Term::Sig { x, fst_ty, snd_ty } => {
                let proj = |p: &RcTerm, first: bool| {
                    let (pair, fst_ty, x, snd_ty) = (p.clone(), fst_ty.clone(), x.clone(), snd_ty.clone());
                    if first {
                        Term::Fst { pair, fst_ty, x, snd_ty }.rc()
                    } else {
                        Term::Snd { pair, fst_ty, x, snd_ty }.rc()
                    }
                };
                let fa = proj(a, true);
                Ok(self.conv(env, &fa, &proj(b, true), fst_ty)?
                    && self.conv(env, &proj(a, false), &proj(b, false), &substitute(snd_ty, &fa, x))?)
            }
            Term::Unit => Ok(true),
            // ♮-η together with a ≡ za: both sides are determined by their
            // zeroed eliminations.
            Term::Nat(inner) => {
                let dn = |t: &RcTerm| Term::dn(zero_all(t), inner.clone());
                self.conv(env, &dn(a), &dn(b), inner)
            }
            Term::Univ => self.conv_types(env, a, b),
            _ => {
                let a = self.whnf_(a)?;
                let b = self.whnf_(b)?;
                match (&*a, &*b) {
                    (Term::Tt, Term::Tt) | (Term::Refl { .. }, Term::Refl { .. }) => Ok(true),
                    _ => Ok(self.neutral(env, &a, &b)?.is_some()),
                }
            }
        }
    }

    pub(super) fn conv_types(&self, env: &Env, a: &RcTerm, b: &RcTerm) -> Result<bool> {
        if alpha_eq(a, b) {
            return Ok(true);
        }
        let a = self.whnf_(a)?;
        let b = self.whnf_(b)?;
        match (&*a, &*b) {
            (Term::Univ, Term::Univ) | (Term::Unit, Term::Unit) | (Term::Bool, Term::Bool) => Ok(true),
            (Term::Nat(s), Term::Nat(t)) => self.conv_types(&env.zeroed(), s, t),
            (Term::Pi { x, dom: a1, cod: b1 }, Term::Pi { x: y, dom: a2, cod: b2 })
            | (Term::Sig { x, fst_ty: a1, snd_ty: b1 }, Term::Sig { x: y, fst_ty: a2, snd_ty: b2 }) => {
                if !self.conv_types(env, a1, a2)? {
                    return Ok(false);
                }
                let z = fresh_for(env, &[&a, &b]);
                let env2 = env.extend(Entry { name: z.clone(), mark: Mark::Plain, ty: a1.clone() });
                let zv = Term::Var(z).rc();
                self.conv_types(&env2, &substitute(b1, &zv, x), &substitute(b2, &zv, y))
            }
            (Term::Id { ty: t1, lhs: l1, rhs: r1 }, Term::Id { ty: t2, lhs: l2, rhs: r2 }) => {
                Ok(self.conv_types(env, t1, t2)? && self.conv(env, l1, l2, t1)? && self.conv(env, r1, r2, t1)?)
            }
            _ => Ok(self.neutral(env, &a, &b)?.is_some()),
        }
    }

    /// Compares two weak-head neutral terms structurally, returning their
    /// common type when they are equal.
    fn neutral(&self, env: &Env, a: &RcTerm, b: &RcTerm) -> Result<Option<RcTerm>> {
        match (&**a, &**b) {
            (Term::Var(x), Term::Var(y)) | (Term::MVar(x), Term::MVar(y)) if x == y => {
                Ok(self.var(env, a).ok())
            }
            (Term::App { fun: f1, arg: a1, .. }, Term::App { fun: f2, arg: a2, .. }) => {
                let Some(ft) = self.neutral_whnf(env, f1, f2)? else { return Ok(None) };
                let ft = self.whnf_(&ft)?;
                let Term::Pi { x, dom, cod } = &*ft else { return Ok(None) };
                if self.conv(env, a1, a2, dom)? {
                    Ok(Some(substitute(cod, a1, x)))
                } else {
                    Ok(None)
                }
            }
            (Term::Fst { pair: p1, .. }, Term::Fst { pair: p2, .. })
            | (Term::Snd { pair: p1, .. }, Term::Snd { pair: p2, .. }) => {
                let Some(pt) = self.neutral_whnf(env, p1, p2)? else { return Ok(None) };
                let pt = self.whnf_(&pt)?;
                let Term::Sig { x, fst_ty, snd_ty } = &*pt else { return Ok(None) };
                if matches!(**a, Term::Fst { .. }) {
                    Ok(Some(fst_ty.clone()))
                } else {
                    let first = Term::Fst { pair: p1.clone(), fst_ty: fst_ty.clone(), x: x.clone(), snd_ty: snd_ty.clone() }
                        .rc();
                    Ok(Some(substitute(snd_ty, &first, x)))
                }
            }
            // Eliminating a neutral of type ♮A only depends on its zeroing, so
            // compare the zeroed neutrals. Going through `conv` at ♮A here
            // would come straight back to this case.
            (Term::Dn { body: b1, ty }, Term::Dn { body: b2, .. }) => {
                let z1 = self.whnf_(&zero_all(b1))?;
                let z2 = self.whnf_(&zero_all(b2))?;
                if alpha_eq(&z1, &z2) || self.neutral(env, &z1, &z2)?.is_some() {
                    Ok(Some(ty.clone()))
                } else {
                    Ok(None)
                }
            }
            (
                Term::J { ty: t1, lhs: l1, y: y1, p: p1, motive: m1, base: d1, rhs: r1, path: q1 },
                Term::J { ty: t2, lhs: l2, y: y2, p: p2, motive: m2, base: d2, rhs: r2, path: q2 },
            ) => {
                if !(self.conv_types(env, t1, t2)? && self.conv(env, l1, l2, t1)? && self.conv(env, r1, r2, t1)?) {
                    return Ok(None);
                }
                if self.neutral_whnf(env, q1, q2)?.is_none() {
                    return Ok(None);
                }
                let yn = fresh_for(env, &[a, b]);
                let env_y = env.extend(Entry { name: yn.clone(), mark: Mark::Plain, ty: t1.clone() });
                let yv = Term::Var(yn.clone()).rc();
                let pn = fresh_name("p", |n| env_y.contains(n) || free_vars(a).contains(n) || free_vars(b).contains(n));
                let env_yp = env_y.extend(Entry {
                    name: pn.clone(),
                    mark: Mark::Plain,
                    ty: Term::id(t1.clone(), l1.clone(), yv.clone()),
                });
                let pv = Term::Var(pn.clone()).rc();
                let c1 = subst2(m1, (y1, &yv), (p1, &pv));
                let c2 = subst2(m2, (y2, &yv), (p2, &pv));
                if !self.conv_types(&env_yp, &c1, &c2)? {
                    return Ok(None);
                }
                let refl = Term::refl(t1.clone(), l1.clone());
                if !self.conv(env, d1, d2, &subst2(m1, (y1, l1), (p1, &refl)))? {
                    return Ok(None);
                }
                Ok(Some(subst2(m1, (y1, r1), (p1, q1))))
            }
            _ => Ok(None),
        }
    }

    fn neutral_whnf(&self, env: &Env, a: &RcTerm, b: &RcTerm) -> Result<Option<RcTerm>> {
        let a = self.whnf_(a)?;
        let b = self.whnf_(b)?;
        self.neutral(env, &a, &b)
    }

    /// β-normal form with ♮-η contraction `(m_♮)^♮ ~> m`.
    pub(super) fn nf(&self, t: &RcTerm) -> Result<RcTerm> {
        let t = self.whnf_(t)?;
        let err = RefCell::new(None::<Diagnostic>);
        let mapped = map_children(&t, &mut |sub| {
            if err.borrow().is_some() {
                return sub.clone();
            }
            match self.nf(sub) {
                Ok(n) => n,
                Err(d) => {
                    *err.borrow_mut() = Some(d);
                    sub.clone()
                }
            }
        });
        if let Some(d) = err.into_inner() {
            return Err(d);
        }
        if let Term::Up { body, .. } = &*mapped {
            if let Term::Dn { body: m, .. } = &**body {
                return Ok(m.clone());
            }
        }
        Ok(mapped)
    }

    /// Replaces `~x` by `x` wherever `x` is a plain variable whose type is a
    /// ♮-type (sound since `x ≡ zx` there), except inside subterms that live
    /// in a zeroed context.
    pub(super) fn unzero(&self, env: &Env, t: &RcTerm) -> Result<RcTerm> {
        let mut locals = Vec::new();
        self.unzero_in(env, &mut locals, t)
    }

    fn unzero_in(&self, env: &Env, locals: &mut Vec<(Name, Option<RcTerm>)>, t: &RcTerm) -> Result<RcTerm> {
        let bind = |x: &Name, ty: &RcTerm| (x.clone(), Some(ty.clone()));
        Ok(match &**t {
            Term::MVar(x) => {
                let ty = match locals.iter().rev().find(|(n, _)| n == x) {
                    Some((_, ty)) => ty.clone(),
                    None => env.lookup(x).filter(|(_, e)| e.mark == Mark::Plain).map(|(_, e)| e.ty.clone()),
                };
                match ty {
                    Some(ty) if matches!(*self.whnf_(&ty)?, Term::Nat(_)) => Term::Var(x.clone()).rc(),
                    _ => t.clone(),
                }
            }
            // Dull positions: left as they are.
            Term::Nat(_) | Term::Up { .. } => t.clone(),
            Term::Dn { body, ty } => Term::Dn { body: self.unzero_in(env, locals, body)?, ty: ty.clone() }.rc(),
            Term::Pi { x, dom, cod } | Term::Sig { x, fst_ty: dom, snd_ty: cod } => {
                let dom2 = self.unzero_in(env, locals, dom)?;
                locals.push(bind(x, dom));
                let cod2 = self.unzero_in(env, locals, cod);
                locals.pop();
                let (x, dom, cod) = (x.clone(), dom2, cod2?);
                if matches!(**t, Term::Pi { .. }) {
                    Term::Pi { x, dom, cod }.rc()
                } else {
                    Term::Sig { x, fst_ty: dom, snd_ty: cod }.rc()
                }
            }
            Term::Lam { x, dom, body, cod } => {
                let dom2 = self.unzero_in(env, locals, dom)?;
                locals.push(bind(x, dom));
                let body2 = self.unzero_in(env, locals, body);
                let cod2 = self.unzero_in(env, locals, cod);
                locals.pop();
                Term::Lam { x: x.clone(), dom: dom2, body: body2?, cod: cod2? }.rc()
            }
            Term::App { fun, arg, dom, x, cod } => {
                let fun2 = self.unzero_in(env, locals, fun)?;
                let arg2 = self.unzero_in(env, locals, arg)?;
                let dom2 = self.unzero_in(env, locals, dom)?;
                locals.push(bind(x, dom));
                let cod2 = self.unzero_in(env, locals, cod);
                locals.pop();
                Term::App { fun: fun2, arg: arg2, dom: dom2, x: x.clone(), cod: cod2? }.rc()
            }
            Term::Pair { fst, snd, fst_ty, x, snd_ty } => {
                let fst2 = self.unzero_in(env, locals, fst)?;
                let snd2 = self.unzero_in(env, locals, snd)?;
                let fst_ty2 = self.unzero_in(env, locals, fst_ty)?;
                locals.push(bind(x, fst_ty));
                let snd_ty2 = self.unzero_in(env, locals, snd_ty);
                locals.pop();
                Term::Pair { fst: fst2, snd: snd2, fst_ty: fst_ty2, x: x.clone(), snd_ty: snd_ty2? }.rc()
            }
            Term::Fst { pair, fst_ty, x, snd_ty } | Term::Snd { pair, fst_ty, x, snd_ty } => {
                let pair2 = self.unzero_in(env, locals, pair)?;
                let fst_ty2 = self.unzero_in(env, locals, fst_ty)?;
                locals.push(bind(x, fst_ty));
                let snd_ty2 = self.unzero_in(env, locals, snd_ty);
                locals.pop();
                let (pair, fst_ty, x, snd_ty) = (pair2, fst_ty2, x.clone(), snd_ty2?);
                if matches!(**t, Term::Fst { .. }) {
                    Term::Fst { pair, fst_ty, x, snd_ty }.rc()
                } else {
                    Term::Snd { pair, fst_ty, x, snd_ty }.rc()
                }
            }
            Term::Id { ty, lhs, rhs } => Term::Id {
                ty: self.unzero_in(env, locals, ty)?,
                lhs: self.unzero_in(env, locals, lhs)?,
                rhs: self.unzero_in(env, locals, rhs)?,
            }
            .rc(),
            Term::Refl { ty, tm } => {
                Term::Refl { ty: self.unzero_in(env, locals, ty)?, tm: self.unzero_in(env, locals, tm)? }.rc()
            }
            Term::J { ty, lhs, y, p, motive, base, rhs, path } => {
                let ty2 = self.unzero_in(env, locals, ty)?;
                let lhs2 = self.unzero_in(env, locals, lhs)?;
                locals.push(bind(y, ty));
                locals.push((p.clone(), None));
                let motive2 = self.unzero_in(env, locals, motive);
                locals.truncate(locals.len() - 2);
                Term::J {
                    ty: ty2,
                    lhs: lhs2,
                    y: y.clone(),
                    p: p.clone(),
                    motive: motive2?,
                    base: self.unzero_in(env, locals, base)?,
                    rhs: self.unzero_in(env, locals, rhs)?,
                    path: self.unzero_in(env, locals, path)?,
                }
                .rc()
            }
            Term::Var(_) | Term::Univ | Term::Unit | Term::Tt | Term::Bool => t.clone(),
        })
    }
}

/// Reuses `t` when reduction left the subterm `old` untouched.
fn rebuilt(t: &RcTerm, old: &RcTerm, new: RcTerm, f: impl FnOnce(RcTerm) -> Term) -> RcTerm {
    if std::sync::Arc::ptr_eq(old, &new) {
        t.clone()
    } else {
        f(new).rc()
    }
}

/// A variable name free in none of `terms` and not declared in `env`.
fn fresh_for(env: &Env, terms: &[&RcTerm]) -> Name {
    let fvs: Vec<_> = terms.iter().map(|t| free_vars(t)).collect();
    fresh_name("z", |n| env.contains(n) || fvs.iter().any(|s| s.contains(n)))
}
