use super::{Checker, Diagnostic, Env, Result, Rule};
use crate::syntax::{substitute, zero_term, Mark, Name, RcTerm, Term};

impl Checker {
    pub(super) fn var(&self, env: &Env, use_: &RcTerm) -> Result<RcTerm> {
        let (x, marked_use) = match &**use_ {
            Term::Var(x) => (x, false),
            Term::MVar(x) => (x, true),
            _ => return Err(Diagnostic::new(Rule::Var, format!("`{use_}` is not a variable"))),
        };
        let Some((_, entry)) = env.lookup(x) else {
            return Err(Diagnostic::new(Rule::Scope, format!("unbound variable `{x}`")));
        };
        match (entry.mark, marked_use) {
            (Mark::Plain, false) => Ok(entry.ty.clone()),
            (Mark::Marked, true) => Ok(entry.ty.clone()),
            // The declared type only mentions the prefix, so zeroing over the
            // whole scope marks all of its free variables.
            (Mark::Plain, true) => Ok(zero_term(&entry.ty, &env.scope())),
            (Mark::Marked, false) => Err(Diagnostic::new(
                Rule::VarZero,
                format!("`{x}` is declared marked and can only be used as `~{x}`"),
            )),
        }
    }

    /// `Γ ⊢ A type`. Unlike [`Checker::infer`] this accepts `Type` itself and
    /// large types when type-in-type is off.
    pub(super) fn ty(&self, env: &Env, a: &RcTerm) -> Result<()> {
        match &**a {
            Term::Univ | Term::Unit | Term::Bool => Ok(()),
            Term::Nat(inner) => self.ty(&env.zeroed(), inner).map_err(|d| d.within(Rule::NatForm)),
            Term::Pi { x, dom, cod } => {
                self.ty(env, dom)?;
                let (env2, _, b) = env.bind(x, dom, &[cod]);
                self.ty(&env2, &b[0])
            }
            Term::Sig { x, fst_ty, snd_ty } => {
                self.ty(env, fst_ty)?;
                let (env2, _, b) = env.bind(x, fst_ty, &[snd_ty]);
                self.ty(&env2, &b[0])
            }
            Term::Id { ty, lhs, rhs } => {
                self.ty(env, ty)?;
                self.check(env, lhs, ty)?;
                self.check(env, rhs, ty)
            }
            _ => {
                let t = self.infer(env, a)?;
                let t = self.whnf_(&t)?;
                if matches!(*t, Term::Univ) {
                    Ok(())
                } else {
                    Err(Diagnostic::mismatch(Rule::Conv, format!("`{a}` is not a type"), &Term::univ(), &t))
                }
            }
        }
    }

    pub(super) fn check(&self, env: &Env, a: &RcTerm, ty: &RcTerm) -> Result<()> {
        let t = self.infer(env, a)?;
        if self.conv_types(env, &t, ty)? {
            Ok(())
        } else {
            Err(Diagnostic::mismatch(Rule::Conv, format!("`{a}` has the wrong type"), ty, &t))
        }
    }

    fn check_univ(&self, env: &Env, a: &RcTerm) -> Result<()> {
        self.check(env, a, &Term::univ())
    }

    pub(super) fn infer(&self, env: &Env, a: &RcTerm) -> Result<RcTerm> {
        match &**a {
            Term::Var(_) | Term::MVar(_) => self.var(env, a),
            Term::Univ => {
                if self.config.type_in_type {
                    Ok(Term::univ())
                } else {
                    Err(Diagnostic::new(Rule::Univ, "`Type` has no type without type-in-type"))
                }
            }
            Term::Unit | Term::Bool => Ok(Term::univ()),
            Term::Tt => Ok(Term::unit()),
            Term::Nat(inner) => {
                self.check_univ(&env.zeroed(), inner).map_err(|d| d.within(Rule::NatForm))?;
                Ok(Term::univ())
            }
            Term::Pi { x, dom, cod } => {
                self.check_univ(env, dom)?;
                let (env2, _, b) = env.bind(x, dom, &[cod]);
                self.check_univ(&env2, &b[0])?;
                Ok(Term::univ())
            }
            Term::Sig { x, fst_ty, snd_ty } => {
                self.check_univ(env, fst_ty)?;
                let (env2, _, b) = env.bind(x, fst_ty, &[snd_ty]);
                self.check_univ(&env2, &b[0])?;
                Ok(Term::univ())
            }
            Term::Id { ty, lhs, rhs } => {
                self.check_univ(env, ty)?;
                self.check(env, lhs, ty)?;
                self.check(env, rhs, ty)?;
                Ok(Term::univ())
            }
            Term::Up { body, ty } => {
                let z = env.zeroed();
                self.ty(&z, ty)
                    .and_then(|_| self.check(&z, body, ty))
                    .map_err(|d| d.within(Rule::NatIntro))?;
                Ok(Term::nat(ty.clone()))
            }
            Term::Dn { body, ty } => {
                self.ty(&env.zeroed(), ty).map_err(|d| d.within(Rule::NatElim))?;
                let expected = Term::nat(ty.clone());
                let actual = self.infer(env, body)?;
                if !self.conv_types(env, &actual, &expected)? {
                    return Err(Diagnostic::mismatch(
                        Rule::NatElim,
                        format!("`{body}` is eliminated from the wrong type"),
                        &expected,
                        &actual,
                    ));
                }
                Ok(ty.clone())
            }
            Term::Lam { x, dom, body, cod } => {
                self.ty(env, dom)?;
                let (env2, _, bs) = env.bind(x, dom, &[body, cod]);
                self.ty(&env2, &bs[1])?;
                self.check(&env2, &bs[0], &bs[1])?;
                Ok(Term::Pi { x: x.clone(), dom: dom.clone(), cod: cod.clone() }.rc())
            }
            Term::App { fun, arg, dom, x, cod } => {
                self.ty(env, dom)?;
                let (env2, z, c) = env.bind(x, dom, &[cod]);
                self.ty(&env2, &c[0])?;
                let ft = self.infer(env, fun)?;
                let ft = self.whnf_(&ft)?;
                let Term::Pi { x: y, dom: dom2, cod: cod2 } = &*ft else {
                    return Err(Diagnostic::mismatch(
                        Rule::PiElim,
                        format!("`{fun}` is applied but is not a function"),
                        &Term::Pi { x: x.clone(), dom: dom.clone(), cod: cod.clone() }.rc(),
                        &ft,
                    ));
                };
                let annotated = Term::Pi { x: x.clone(), dom: dom.clone(), cod: cod.clone() }.rc();
                let mismatch = || {
                    Diagnostic::mismatch(
                        Rule::Annotation,
                        format!("application annotation does not match the type of `{fun}`"),
                        &ft,
                        &annotated,
                    )
                };
                if !self.conv_types(env, dom, dom2)? {
                    return Err(mismatch());
                }
                let cod2 = substitute(cod2, &Term::Var(z.clone()).rc(), y);
                if !self.conv_types(&env2, &c[0], &cod2)? {
                    return Err(mismatch());
                }
                self.check(env, arg, dom)?;
                Ok(substitute(cod, arg, x))
            }
            Term::Pair { fst, snd, fst_ty, x, snd_ty } => {
                let sig = Term::Sig { x: x.clone(), fst_ty: fst_ty.clone(), snd_ty: snd_ty.clone() }.rc();
                self.ty(env, &sig)?;
                self.check(env, fst, fst_ty)?;
                self.check(env, snd, &substitute(snd_ty, fst, x))?;
                Ok(sig)
            }
            Term::Fst { pair, fst_ty, x, snd_ty } | Term::Snd { pair, fst_ty, x, snd_ty } => {
                let sig = Term::Sig { x: x.clone(), fst_ty: fst_ty.clone(), snd_ty: snd_ty.clone() }.rc();
                self.ty(env, &sig)?;
                self.check(env, pair, &sig)?;
                if matches!(**a, Term::Fst { .. }) {
                    Ok(fst_ty.clone())
                } else {
                    let first = Term::Fst {
                        pair: pair.clone(),
                        fst_ty: fst_ty.clone(),
                        x: x.clone(),
                        snd_ty: snd_ty.clone(),
                    }
                    .rc();
                    Ok(substitute(snd_ty, &first, x))
                }
            }
            Term::Refl { ty, tm } => {
                self.ty(env, ty)?;
                self.check(env, tm, ty)?;
                Ok(Term::id(ty.clone(), tm.clone(), tm.clone()))
            }
            Term::J { ty, lhs, y, p, motive, base, rhs, path } => {
                self.ty(env, ty)?;
                self.check(env, lhs, ty)?;
                let (env_y, y2, m) = env.bind(y, ty, &[motive]);
                let path_ty = Term::id(ty.clone(), lhs.clone(), Term::Var(y2.clone()).rc());
                let (env_yp, p2, m) = env_y.bind(p, &path_ty, &[&m[0]]);
                self.ty(&env_yp, &m[0])?;
                let refl = Term::refl(ty.clone(), lhs.clone());
                let at_refl = subst2(&m[0], (&y2, lhs), (&p2, &refl));
                self.check(env, base, &at_refl)?;
                self.check(env, rhs, ty)?;
                self.check(env, path, &Term::id(ty.clone(), lhs.clone(), rhs.clone()))?;
                Ok(subst2(&m[0], (&y2, rhs), (&p2, path)))
            }
        }
    }
}

/// `t[a/y, b/p]` where `y` and `p` are distinct from every free variable of
/// `a` and `b`. The binders of J are freshened against the environment, which
/// contains those free variables, so sequential substitution is simultaneous.
pub(super) fn subst2(t: &RcTerm, (y, a): (&Name, &RcTerm), (p, b): (&Name, &RcTerm)) -> RcTerm {
    substitute(&substitute(t, a, y), b, p)
}
