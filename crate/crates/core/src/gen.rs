//! Random syntax for the property suites.
//!
//! [`RawGen`] produces arbitrary raw terms and contexts with no typing
//! discipline. [`TypedGen`] builds well-typed judgements forward from the
//! typing rules. Its terms are exactly what elaboration would produce from
//! their printed form: inferred subterms carry the annotations inference
//! gives them, and checked subterms take theirs from the expected type.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::{Checker, Env, Judgement};
use crate::syntax::{
    alpha_eq, free_vars, fresh_name, name, substitute, Entry, Mark, Name, RawContext, RcTerm, Telescope, Term,
};

/// A deterministic generator stream for instance `index` of a suite.
pub fn rng_for(seed: u64, suite: &str, index: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(index);
    rng
}

const RAW_NAMES: &[&str] = &["x", "y", "z", "f", "g", "A", "B"];

pub struct RawGen<'r> {
    pub rng: &'r mut ChaCha8Rng,
    /// Draw free variables from the scope only.
    pub scoped: bool,
}

impl RawGen<'_> {
    fn pick_name(&mut self, scope: &[Name]) -> Name {
        if !scope.is_empty() && (self.scoped || self.rng.gen_bool(0.8)) {
            scope.choose(self.rng).expect("nonempty").clone()
        } else {
            name(RAW_NAMES.choose(self.rng).expect("nonempty"))
        }
    }

    /// A raw term whose free variables mostly come from `scope` (only from it
    /// when `scoped`). Binders draw
    /// from a small pool, so shadowing is common.
    pub fn term(&mut self, scope: &[Name], depth: u32) -> RcTerm {
        let leaf = depth == 0 || self.rng.gen_bool(0.25);
        if leaf {
            let no_vars = self.scoped && scope.is_empty();
            return match self.rng.gen_range(if no_vars { 6 } else { 0 }..8) {
                0..=2 => Term::Var(self.pick_name(scope)).rc(),
                3..=5 => Term::MVar(self.pick_name(scope)).rc(),
                6 => [Term::univ(), Term::unit(), Term::tt()].choose(self.rng).expect("nonempty").clone(),
                _ => Term::bool(),
            };
        }
        let d = depth - 1;
        let bind = |g: &mut Self| name(RAW_NAMES.choose(g.rng).expect("nonempty"));
        match self.rng.gen_range(0..14) {
            0 => Term::nat(self.term(scope, d)),
            1 => Term::up(self.term(scope, d), self.term(scope, d)),
            2 => Term::dn(self.term(scope, d), self.term(scope, d)),
            3 => {
                let x = bind(self);
                let inner = extended(scope, &x);
                Term::Pi { x, dom: self.term(scope, d), cod: self.term(&inner, d) }.rc()
            }
            4 => {
                let x = bind(self);
                let inner = extended(scope, &x);
                Term::Lam { x, dom: self.term(scope, d), body: self.term(&inner, d), cod: self.term(&inner, d) }.rc()
            }
            5 | 6 => {
                let x = bind(self);
                let inner = extended(scope, &x);
                Term::App { fun: self.term(scope, d), arg: self.term(scope, d), dom: self.term(scope, d), x, cod: self.term(&inner, d) }.rc()
            }
            7 => {
                let x = bind(self);
                let inner = extended(scope, &x);
                Term::Sig { x, fst_ty: self.term(scope, d), snd_ty: self.term(&inner, d) }.rc()
            }
            8 => {
                let x = bind(self);
                let inner = extended(scope, &x);
                Term::Pair { fst: self.term(scope, d), snd: self.term(scope, d), fst_ty: self.term(scope, d), x, snd_ty: self.term(&inner, d) }.rc()
            }
            9 | 10 => {
                let x = bind(self);
                let inner = extended(scope, &x);
                let (pair, fst_ty, snd_ty) = (self.term(scope, d), self.term(scope, d), self.term(&inner, d));
                if self.rng.gen_bool(0.5) {
                    Term::Fst { pair, fst_ty, x, snd_ty }.rc()
                } else {
                    Term::Snd { pair, fst_ty, x, snd_ty }.rc()
                }
            }
            11 => Term::id(self.term(scope, d), self.term(scope, d), self.term(scope, d)),
            12 => Term::refl(self.term(scope, d), self.term(scope, d)),
            _ => {
                let (y, p) = (bind(self), bind(self));
                let inner = extended(&extended(scope, &y), &p);
                Term::J {
                    ty: self.term(scope, d),
                    lhs: self.term(scope, d),
                    y,
                    p,
                    motive: self.term(&inner, d),
                    base: self.term(scope, d),
                    rhs: self.term(scope, d),
                    path: self.term(scope, d),
                }
                .rc()
            }
        }
    }

    /// `n` distinct names not in `avoid`.
    pub fn names(&mut self, n: usize, avoid: &[Name]) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        while out.len() < n {
            let base = ["a", "b", "c", "u", "v", "w", "x", "y", "z"].choose(self.rng).expect("nonempty");
            let taken = |s: &str| out.iter().chain(avoid).any(|m| &**m == s);
            let candidate = if self.rng.gen_bool(0.5) { name(base) } else { name(&format!("{base}{}", self.rng.gen_range(1..4))) };
            let nm = if taken(&candidate) { fresh_name(&candidate, taken) } else { candidate };
            out.push(nm);
        }
        out
    }

    /// A telescope over `outer` with `n` entries, each type over the scope so
    /// far.
    pub fn telescope(&mut self, outer: &[Name], n: usize, depth: u32) -> Telescope {
        let names = self.names(n, outer);
        let mut scope = outer.to_vec();
        let mut entries = Vec::new();
        for x in names {
            let ty = self.term(&scope, depth);
            let mark = if self.rng.gen_bool(0.4) { Mark::Marked } else { Mark::Plain };
            entries.push(Entry { name: x.clone(), mark, ty });
            scope.push(x);
        }
        Telescope::new(entries)
    }

    pub fn context(&mut self, n: usize, depth: u32) -> RawContext {
        RawContext::new(self.telescope(&[], n, depth).entries)
    }
}

fn extended(scope: &[Name], x: &Name) -> Vec<Name> {
    let mut v = scope.to_vec();
    v.push(x.clone());
    v
}

const TERM_NAMES: &[&str] = &["x", "y", "z", "w", "k", "h"];
const ENTRY_NAMES: &[&str] = &["a", "b", "c", "m", "n", "s", "t", "u", "v"];

/// Generator of well-typed judgements. Every term it returns is accepted by
/// the kernel in the environment it was generated for; the property suites
/// re-check this rather than trusting it.
pub struct TypedGen<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub checker: &'a Checker,
    /// Restrict to the fragment the finite model interprets: no universe, no
    /// type variables, no type families.
    pub fragment: bool,
}

impl TypedGen<'_> {
    fn fresh(&mut self, env: &Env, pool: &[&str]) -> Name {
        env.fresh(pool.choose(self.rng).expect("nonempty"))
    }

    fn whnf(&self, t: &RcTerm) -> Option<RcTerm> {
        self.checker.whnf(t).ok()
    }

    fn var_type(&self, env: &Env, t: &RcTerm) -> Option<RcTerm> {
        self.checker.infer_var(env, t).ok()
    }

    /// Uses of context entries, plain and marked, with their types.
    fn uses(&self, env: &Env) -> Vec<(RcTerm, RcTerm)> {
        let mut out = Vec::new();
        for e in env.entries() {
            let mut cands = vec![Term::MVar(e.name.clone()).rc()];
            if e.mark == Mark::Plain {
                cands.push(Term::Var(e.name.clone()).rc());
            }
            for c in cands {
                if let Some(ty) = self.var_type(env, &c) {
                    out.push((c, ty));
                }
            }
        }
        out
    }

    /// A type, well formed in `env` and with a constructor or neutral head.
    pub fn ty(&mut self, env: &Env, depth: u32) -> RcTerm {
        let mut leaves = vec![Term::unit(), Term::bool(), Term::bool()];
        let mut families = Vec::new();
        if !self.fragment {
            for (u, ty) in self.uses(env) {
                match &*ty {
                    Term::Univ => leaves.extend([u.clone(), u]),
                    Term::Pi { cod, .. } if matches!(**cod, Term::Univ) => families.push((u, ty.clone())),
                    _ => {}
                }
            }
        }
        if depth == 0 || self.rng.gen_bool(0.35) {
            return leaves.choose(self.rng).expect("nonempty").clone();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 | 1 => Term::nat(self.ty(&env.zeroed(), d)),
            2 | 3 => {
                let x = self.fresh(env, TERM_NAMES);
                let dom = self.ty(env, d);
                let cod = self.ty(&env.extend(Entry { name: x.clone(), mark: Mark::Plain, ty: dom.clone() }), d);
                Term::Pi { x, dom, cod }.rc()
            }
            4 | 5 => {
                let x = self.fresh(env, TERM_NAMES);
                let dom = self.ty(env, d);
                let snd = self.ty(&env.extend(Entry { name: x.clone(), mark: Mark::Plain, ty: dom.clone() }), d);
                Term::Sig { x, fst_ty: dom, snd_ty: snd }.rc()
            }
            6 => {
                let a = self.ty(env, d.min(1));
                let fallback = leaves.choose(self.rng).expect("nonempty").clone();
                let Some(l) = self.check(env, &a, d) else { return fallback };
                let r = if self.rng.gen_bool(0.5) { Some(l.clone()) } else { self.check(env, &a, d) };
                match r {
                    Some(r) => Term::id(a, l, r),
                    None => fallback,
                }
            }
            7 if !families.is_empty() => {
                let (f, fty) = families.choose(self.rng).expect("nonempty").clone();
                let Term::Pi { x, dom, cod } = &*fty else { unreachable!("families are Π-typed") };
                match self.check(env, dom, d) {
                    Some(arg) => Term::App { fun: f, arg, dom: dom.clone(), x: x.clone(), cod: cod.clone() }.rc(),
                    None => leaves.choose(self.rng).expect("nonempty").clone(),
                }
            }
            _ => leaves.choose(self.rng).expect("nonempty").clone(),
        }
    }

    /// A term that elaborates back to itself when checked against `ty`.
    pub fn check(&mut self, env: &Env, ty: &RcTerm, depth: u32) -> Option<RcTerm> {
        let vars: Vec<RcTerm> = self
            .uses(env)
            .into_iter()
            .filter(|(_, t)| alpha_eq(t, ty))
            .map(|(u, _)| u)
            .collect();
        let leaf = depth == 0 || self.rng.gen_bool(0.15);
        if leaf && !vars.is_empty() {
            return vars.choose(self.rng).cloned();
        }
        let d = depth.saturating_sub(1);
        for _ in 0..3 {
            let r = match self.rng.gen_range(0..6) {
                0..=2 => self.intro(env, ty, d),
                3 if depth > 0 => self.dn_at(env, ty, d),
                4 if depth > 0 => self.infer_at(env, ty, d),
                _ => vars.choose(self.rng).cloned(),
            };
            if r.is_some() {
                return r;
            }
        }
        self.intro(env, ty, 0).or_else(|| vars.choose(self.rng).cloned())
    }

    fn intro(&mut self, env: &Env, ty: &RcTerm, depth: u32) -> Option<RcTerm> {
        match &**ty {
            Term::Unit => Some(Term::tt()),
            Term::Nat(a) => {
                let body = self.check(&env.zeroed(), a, depth)?;
                Some(Term::up(body, a.clone()))
            }
            Term::Pi { x, dom, cod } => {
                let k = self.fresh(env, TERM_NAMES);
                let cod = substitute(cod, &Term::Var(k.clone()).rc(), x);
                let inner = env.extend(Entry { name: k.clone(), mark: Mark::Plain, ty: dom.clone() });
                let body = self.check(&inner, &cod, depth)?;
                Some(Term::Lam { x: k, dom: dom.clone(), body, cod }.rc())
            }
            Term::Sig { x, fst_ty, snd_ty } => {
                let a = self.check(env, fst_ty, depth)?;
                let b = self.check(env, &substitute(snd_ty, &a, x), depth)?;
                Some(Term::Pair { fst: a, snd: b, fst_ty: fst_ty.clone(), x: x.clone(), snd_ty: snd_ty.clone() }.rc())
            }
            Term::Id { ty: a, lhs, rhs } => {
                if self.checker.convert(env, lhs, rhs, a).ok()? {
                    Some(Term::refl(a.clone(), lhs.clone()))
                } else {
                    None
                }
            }
            Term::Univ if !self.fragment => Some(self.ty(env, depth)),
            _ => None,
        }
    }

    /// `dn(b)` checked at a dull `ty`.
    fn dn_at(&mut self, env: &Env, ty: &RcTerm, depth: u32) -> Option<RcTerm> {
        if matches!(**ty, Term::Univ) || self.checker.check_type(&env.zeroed(), ty).is_err() {
            return None;
        }
        let b = self.check(env, &Term::nat(ty.clone()), depth)?;
        Some(Term::dn(b, ty.clone()))
    }

    fn infer_at(&mut self, env: &Env, ty: &RcTerm, depth: u32) -> Option<RcTerm> {
        let (t, actual) = self.infer(env, depth)?;
        if self.checker.convert_types(env, &actual, ty).ok()? {
            Some(t)
        } else {
            None
        }
    }

    /// A term and the type inference gives it.
    pub fn infer(&mut self, env: &Env, depth: u32) -> Option<(RcTerm, RcTerm)> {
        let uses = self.uses(env);
        if depth > 0 && !self.rng.gen_bool(0.15) {
            for _ in 0..3 {
                if let Some(r) = self.infer_node(env, &uses, depth - 1) {
                    return Some(r);
                }
            }
        }
        if uses.is_empty() || self.rng.gen_bool(0.1) {
            Some((Term::tt(), Term::unit()))
        } else {
            uses.choose(self.rng).cloned()
        }
    }

    fn infer_node(&mut self, env: &Env, uses: &[(RcTerm, RcTerm)], d: u32) -> Option<(RcTerm, RcTerm)> {
        match self.rng.gen_range(0..12) {
            0 => {
                let (a, ty) = self.infer(&env.zeroed(), d)?;
                Some((Term::up(a, ty.clone()), Term::nat(ty)))
            }
            1 => {
                let (b, bt) = self.infer(env, d)?;
                let Term::Nat(a0) = &*self.whnf(&bt)? else { return None };
                Some((Term::dn(b, a0.clone()), a0.clone()))
            }
            2 | 3 => {
                let k = self.fresh(env, TERM_NAMES);
                let dom = self.ty(env, d.min(2));
                let inner = env.extend(Entry { name: k.clone(), mark: Mark::Plain, ty: dom.clone() });
                let (body, cod) = self.infer(&inner, d)?;
                let lam = Term::Lam { x: k.clone(), dom: dom.clone(), body, cod: cod.clone() }.rc();
                Some((lam, Term::Pi { x: k, dom, cod }.rc()))
            }
            4..=6 => {
                let (f, ft) = self.infer(env, d)?;
                let Term::Pi { x, dom, cod } = &*self.whnf(&ft)? else { return None };
                let a = self.check(env, dom, d)?;
                let ty = substitute(cod, &a, x);
                Some((Term::App { fun: f, arg: a, dom: dom.clone(), x: x.clone(), cod: cod.clone() }.rc(), ty))
            }
            7 => {
                let (a, at) = self.infer(env, d)?;
                let (b, bt) = self.infer(env, d)?;
                let fv = free_vars(&bt);
                let x = fresh_name("_", |n| fv.contains(n));
                let sig = Term::Sig { x: x.clone(), fst_ty: at.clone(), snd_ty: bt.clone() }.rc();
                Some((Term::Pair { fst: a, snd: b, fst_ty: at, x, snd_ty: bt }.rc(), sig))
            }
            8 | 9 => {
                let (p, pt) = self.infer(env, d)?;
                let Term::Sig { x, fst_ty, snd_ty } = &*self.whnf(&pt)? else { return None };
                let first = Term::Fst { pair: p.clone(), fst_ty: fst_ty.clone(), x: x.clone(), snd_ty: snd_ty.clone() }.rc();
                if self.rng.gen_bool(0.5) {
                    Some((first, fst_ty.clone()))
                } else {
                    let ty = substitute(snd_ty, &first, x);
                    Some((Term::Snd { pair: p, fst_ty: fst_ty.clone(), x: x.clone(), snd_ty: snd_ty.clone() }.rc(), ty))
                }
            }
            10 => self.jelim(env, d),
            _ => uses.choose(self.rng).cloned(),
        }
    }

    fn jelim(&mut self, env: &Env, depth: u32) -> Option<(RcTerm, RcTerm)> {
        let a_ty = self.ty(env, 1);
        let a = self.check(env, &a_ty, depth)?;
        let y = self.fresh(env, &["y"]);
        let env_y = env.extend(Entry { name: y.clone(), mark: Mark::Plain, ty: a_ty.clone() });
        let p = self.fresh(&env_y, &["p", "q"]);
        let path_ty = Term::id(a_ty.clone(), a.clone(), Term::Var(y.clone()).rc());
        let env_yp = env_y.extend(Entry { name: p.clone(), mark: Mark::Plain, ty: path_ty });
        let motive = self.ty(&env_yp, 1);
        let refl = Term::refl(a_ty.clone(), a.clone());
        let base_ty = substitute(&substitute(&motive, &a, &y), &refl, &p);
        let base = self.check(env, &base_ty, depth)?;
        let b = if self.rng.gen_bool(0.7) { a.clone() } else { self.check(env, &a_ty, depth)? };
        let q = self.check(env, &Term::id(a_ty.clone(), a.clone(), b.clone()), depth)?;
        let result = substitute(&substitute(&motive, &b, &y), &q, &p);
        let j = Term::J { ty: a_ty, lhs: a, y, p, motive, base, rhs: b, path: q }.rc();
        Some((j, result))
    }

    /// Extends `env` by `n` entries, a third of them marked.
    pub fn extend_env(&mut self, env: &Env, n: usize, depth: u32) -> Env {
        let mut env = env.clone();
        for _ in 0..n {
            let x = self.fresh(&env, ENTRY_NAMES);
            let marked = self.rng.gen_bool(0.33);
            let ty = if marked { self.ty(&env.zeroed(), depth) } else { self.ty(&env, depth) };
            env = env.extend(Entry { name: x, mark: if marked { Mark::Marked } else { Mark::Plain }, ty });
        }
        env
    }

    /// A context with some type variables (outside the fragment) followed by
    /// `n` term entries.
    pub fn env(&mut self, n: usize, depth: u32) -> Env {
        let mut env = Env::empty();
        if !self.fragment {
            env = env.extend(Entry::plain("A", Term::univ()));
            if self.rng.gen_bool(0.5) {
                env = env.extend(Entry::marked("B", Term::univ()));
            }
            if self.rng.gen_bool(0.5) {
                let dom = if self.rng.gen_bool(0.5) { Term::var("A") } else { Term::bool() };
                env = env.extend(Entry::plain("F", Term::pi("_", dom, Term::univ())));
            }
        }
        self.extend_env(&env, n, depth)
    }

    /// A judgement `Γ ⊢ a : A` with `Γ = env`.
    pub fn judgement_in(&mut self, env: &Env, depth: u32) -> Option<Judgement> {
        let (term, ty) = if self.rng.gen_bool(0.5) {
            self.infer(env, depth)?
        } else {
            let ty = self.ty(env, 2);
            (self.check(env, &ty, depth)?, ty)
        };
        Some(Judgement { ctx: env.ctx().clone(), term, ty })
    }
}
