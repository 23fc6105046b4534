//! The admissible rules as executable transformations on judgements. None of
//! them is trusted: callers re-check the output with [`Checker::recheck`].

use super::{Checker, Diagnostic, Env, Result, Rule};
use crate::syntax::{
    substitute, zero_context, zero_context_telescope, zero_telescope, zero_term, Mark, RawContext, RcTerm,
    Telescope,
};

/// `Γ ⊢ a : A` as plain data.
#[derive(Debug, Clone)]
pub struct Judgement {
    pub ctx: RawContext,
    pub term: RcTerm,
    pub ty: RcTerm,
}

impl Checker {
    /// Checks a whole judgement from scratch: context, type, then term.
    pub fn recheck(&self, j: &Judgement) -> Result<()> {
        let env = self.check_ctx(&j.ctx)?;
        self.check_type(&env, &j.ty)?;
        self.check_term(&env, &j.term, &j.ty)
    }

    /// From `Γ, Δ ⊢ a : A` produce `zc(Γ), Δ^{0Γ} ⊢ a^{0Γ} : A^{0Γ}`.
    pub fn admissible_pre_counit(&self, env: &Env, tele: &Telescope, a: &RcTerm, ty: &RcTerm) -> Judgement {
        let gamma = env.scope();
        Judgement {
            ctx: zero_context(env.ctx()).concat(&zero_telescope(tele, &gamma)),
            term: zero_term(a, &gamma),
            ty: zero_term(ty, &gamma),
        }
    }

    /// From `Ψ, zc(Γ), Δ ⊢ a : A` produce `Ψ, Γ, Δ ⊢ a : A` with the same raw
    /// syntax. The premise is checked first.
    pub fn admissible_pre_unit(
        &self,
        psi: &RawContext,
        gamma: &RawContext,
        delta: &Telescope,
        a: &RcTerm,
        ty: &RcTerm,
    ) -> Result<Judgement> {
        let premise = Judgement { ctx: zeroed_middle(psi, gamma).concat(delta), term: a.clone(), ty: ty.clone() };
        self.recheck(&premise)?;
        Ok(Judgement { ctx: psi.concat(&gamma.as_telescope()).concat(delta), term: a.clone(), ty: ty.clone() })
    }

    /// Ordinary substitution: from `Γ, x : A, Δ ⊢ c : C` and `Γ ⊢ a : A`
    /// produce `Γ, Δ[a/x] ⊢ c[a/x] : C[a/x]`. `k` is the position of `x`.
    pub fn admissible_subst(&self, j: &Judgement, k: usize, a: &RcTerm) -> Result<Judgement> {
        self.subst_at(j, k, a, Mark::Plain)
    }

    /// Dull substitution: from `Γ, ~x :: A, Δ ⊢ c : C` and `zc(Γ) ⊢ a : A`
    /// produce `Γ, Δ[a/x] ⊢ c[a/x] : C[a/x]`.
    pub fn dull_subst(&self, j: &Judgement, k: usize, a: &RcTerm) -> Result<Judgement> {
        self.subst_at(j, k, a, Mark::Marked)
    }

    fn subst_at(&self, j: &Judgement, k: usize, a: &RcTerm, mark: Mark) -> Result<Judgement> {
        let (prefix, rest) = j.ctx.split_at(k);
        let Some((entry, delta)) = rest.entries.split_first() else {
            return Err(Diagnostic::new(Rule::Scope, format!("no context entry at position {k}")));
        };
        if entry.mark != mark {
            return Err(Diagnostic::new(Rule::Scope, format!("entry `{}` has the wrong mark", entry.name)));
        }
        let env = self.check_ctx(&prefix)?;
        let at = if mark == Mark::Marked { env.zeroed() } else { env };
        self.check_term(&at, a, &entry.ty)?;
        let x = &entry.name;
        Ok(Judgement {
            ctx: prefix.concat(&Telescope::new(delta.to_vec()).substitute(a, x)),
            term: substitute(&j.term, a, x),
            ty: substitute(&j.ty, a, x),
        })
    }
}

/// `Ψ, zc(Γ)` where `Γ` is a telescope over `Ψ`.
pub fn zeroed_middle(psi: &RawContext, gamma: &RawContext) -> RawContext {
    psi.concat(&zero_context_telescope(&gamma.as_telescope()))
}
