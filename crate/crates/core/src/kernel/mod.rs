//! The type checker. Terms are fully annotated, so every term infers; checking
//! is inference followed by conversion of types.

mod admissible;
mod conv;
mod diag;
mod typing;

use std::cell::Cell;

pub use admissible::{zeroed_middle, Judgement};
pub use diag::{Diagnostic, Result, Rule, Span};

use crate::syntax::{
    fresh_name, rename, zero_context, Entry, Mark, Name, RawContext, RcTerm, Scope,
};

pub const DEFAULT_FUEL: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Whether `Type : Type` holds. Without it `Type` is a type but not a term.
    pub type_in_type: bool,
    /// Head-reduction steps allowed per top-level kernel call.
    pub fuel: u64,
}

impl Default for Config {
    fn default() -> Config {
        Config { type_in_type: true, fuel: DEFAULT_FUEL }
    }
}

/// A context that has passed [`Checker::check_ctx`], or was derived from one
/// by rules that preserve well-formedness (extension by a checked type,
/// zeroing).
#[derive(Debug, Clone, Default)]
pub struct Env {
    ctx: RawContext,
}

impl Env {
    pub fn empty() -> Env {
        Env::default()
    }

    pub fn ctx(&self) -> &RawContext {
        &self.ctx
    }

    pub fn entries(&self) -> &[Entry] {
        &self.ctx.entries
    }

    pub fn lookup(&self, x: &str) -> Option<(usize, &Entry)> {
        self.ctx.lookup(x)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.ctx.entries.iter().any(|e| &*e.name == x)
    }

    pub fn scope(&self) -> Scope {
        self.ctx.scope()
    }

    /// `zc(Γ)`. Well-formed whenever `Γ` is.
    pub fn zeroed(&self) -> Env {
        Env { ctx: zero_context(&self.ctx) }
    }

    /// Extends with an entry whose type the caller has already checked.
    pub fn extend(&self, e: Entry) -> Env {
        Env { ctx: self.ctx.extended(e) }
    }

    pub(crate) fn push(&mut self, e: Entry) {
        self.ctx.push(e);
    }

    /// Picks a name for a binder that does not clash with the environment.
    pub fn fresh(&self, base: &str) -> Name {
        fresh_name(base, |n| self.contains(n))
    }

    /// Goes under a plain binder `x : ty`, renaming it if it clashes with an
    /// existing entry. Returns the extended environment, the name actually
    /// used, and `bodies` with the binder renamed.
    pub fn bind(&self, x: &Name, ty: &RcTerm, bodies: &[&RcTerm]) -> (Env, Name, Vec<RcTerm>) {
        let used = if self.contains(x) { self.fresh(x) } else { x.clone() };
        let bodies = bodies
            .iter()
            .map(|b| if used == *x { (*b).clone() } else { rename(b, x, &used) })
            .collect();
        let env = self.extend(Entry { name: used.clone(), mark: Mark::Plain, ty: ty.clone() });
        (env, used, bodies)
    }
}

/// Kernel entry points. Each public method resets the fuel counter, so fuel
/// bounds a single top-level call.
#[derive(Debug)]
pub struct Checker {
    config: Config,
    fuel: Cell<u64>,
}

impl Default for Checker {
    fn default() -> Checker {
        Checker::new(Config::default())
    }
}

impl Checker {
    pub fn new(config: Config) -> Checker {
        Checker { config, fuel: Cell::new(config.fuel) }
    }

    pub fn config(&self) -> Config {
        self.config
    }

    fn reset(&self) {
        self.fuel.set(self.config.fuel);
    }

    fn tick(&self) -> Result<()> {
        let left = self.fuel.get();
        if left == 0 {
            return Err(Diagnostic::new(Rule::Fuel, "conversion fuel exhausted"));
        }
        self.fuel.set(left - 1);
        Ok(())
    }

    /// `Γ ctx`: checks each entry in its prefix (plain) or in the zeroed
    /// prefix (marked).
    pub fn check_ctx(&self, ctx: &RawContext) -> Result<Env> {
        self.reset();
        let mut env = Env::empty();
        for e in &ctx.entries {
            if env.contains(&e.name) {
                return Err(Diagnostic::new(
                    Rule::CtxExt,
                    format!("duplicate declaration of `{}`", e.name),
                ));
            }
            match e.mark {
                Mark::Plain => self.ty(&env, &e.ty).map_err(|d| d.within(Rule::CtxExt))?,
                Mark::Marked => {
                    self.ty(&env.zeroed(), &e.ty).map_err(|d| d.within(Rule::CtxExtZero))?
                }
            }
            env.push(e.clone());
        }
        Ok(env)
    }

    /// Type of a plain or marked variable use.
    pub fn infer_var(&self, env: &Env, use_: &RcTerm) -> Result<RcTerm> {
        self.reset();
        self.var(env, use_)
    }

    pub fn check_type(&self, env: &Env, ty: &RcTerm) -> Result<()> {
        self.reset();
        self.ty(env, ty)
    }

    pub fn check_term(&self, env: &Env, a: &RcTerm, ty: &RcTerm) -> Result<()> {
        self.reset();
        self.check(env, a, ty)
    }

    pub fn infer_term(&self, env: &Env, a: &RcTerm) -> Result<RcTerm> {
        self.reset();
        self.infer(env, a)
    }

    pub fn whnf(&self, a: &RcTerm) -> Result<RcTerm> {
        self.reset();
        self.whnf_(a)
    }

    /// Definitional equality of two terms at a type.
    pub fn convert(&self, env: &Env, a: &RcTerm, b: &RcTerm, ty: &RcTerm) -> Result<bool> {
        self.reset();
        self.conv(env, a, b, ty)
    }

    /// Definitional equality of two types.
    pub fn convert_types(&self, env: &Env, a: &RcTerm, b: &RcTerm) -> Result<bool> {
        self.reset();
        self.conv_types(env, a, b)
    }

    /// Full normal form for display. β and ♮-β everywhere, ♮-η contraction,
    /// and marked uses of variables of ♮-type written plain.
    pub fn normalize(&self, env: &Env, a: &RcTerm) -> Result<RcTerm> {
        self.reset();
        let n = self.nf(a)?;
        self.unzero(env, &n)
    }
}

#[cfg(test)]
mod tests;
