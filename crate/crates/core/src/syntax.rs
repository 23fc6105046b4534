//! Raw syntax and the operations defined on it prior to typing.
//!
//! Terms are fully annotated and use named variables. A marked use `~x` is a
//! separate constructor ([`Term::MVar`]) rather than a decoration on the
//! name. Zeroing `a^{0γ}` turns plain uses of variables in `γ` into marked
//! uses; substitution replaces a marked use `~x` by the zeroing of the
//! substituted term.

use std::collections::HashSet;
use std::sync::Arc;

pub type Name = Arc<str>;
pub type RcTerm = Arc<Term>;

/// A set of variable names, with no types or marks attached.
pub type Scope = HashSet<Name>;

/// Raw, fully annotated terms and types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    /// Marked use `~x` of a variable.
    MVar(Name),
    Univ,
    Unit,
    Tt,
    /// The built-in pointed booleans `PB`.
    Bool,
    /// `♮A`
    Nat(RcTerm),
    /// `a^♮_A`
    Up { body: RcTerm, ty: RcTerm },
    /// `b_♮^A`
    Dn { body: RcTerm, ty: RcTerm },
    Pi { x: Name, dom: RcTerm, cod: RcTerm },
    Lam { x: Name, dom: RcTerm, body: RcTerm, cod: RcTerm },
    /// `f(a)_{A, x.B}`
    App { fun: RcTerm, arg: RcTerm, dom: RcTerm, x: Name, cod: RcTerm },
    Sig { x: Name, fst_ty: RcTerm, snd_ty: RcTerm },
    Pair { fst: RcTerm, snd: RcTerm, fst_ty: RcTerm, x: Name, snd_ty: RcTerm },
    Fst { pair: RcTerm, fst_ty: RcTerm, x: Name, snd_ty: RcTerm },
    Snd { pair: RcTerm, fst_ty: RcTerm, x: Name, snd_ty: RcTerm },
    Id { ty: RcTerm, lhs: RcTerm, rhs: RcTerm },
    Refl { ty: RcTerm, tm: RcTerm },
    /// Based path induction. `y` and `p` are bound in `motive`, with
    /// `p : Id ty lhs y`.
    J {
        ty: RcTerm,
        lhs: RcTerm,
        y: Name,
        p: Name,
        motive: RcTerm,
        base: RcTerm,
        rhs: RcTerm,
        path: RcTerm,
    },
}

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

impl Term {
    pub fn rc(self) -> RcTerm {
        Arc::new(self)
    }

    pub fn var(x: &str) -> RcTerm {
        Term::Var(name(x)).rc()
    }

    pub fn mvar(x: &str) -> RcTerm {
        Term::MVar(name(x)).rc()
    }

    pub fn nat(ty: RcTerm) -> RcTerm {
        Term::Nat(ty).rc()
    }

    pub fn up(body: RcTerm, ty: RcTerm) -> RcTerm {
        Term::Up { body, ty }.rc()
    }

    pub fn dn(body: RcTerm, ty: RcTerm) -> RcTerm {
        Term::Dn { body, ty }.rc()
    }

    pub fn pi(x: &str, dom: RcTerm, cod: RcTerm) -> RcTerm {
        Term::Pi { x: name(x), dom, cod }.rc()
    }

    pub fn lam(x: &str, dom: RcTerm, body: RcTerm, cod: RcTerm) -> RcTerm {
        Term::Lam { x: name(x), dom, body, cod }.rc()
    }

    pub fn app(fun: RcTerm, arg: RcTerm, dom: RcTerm, x: &str, cod: RcTerm) -> RcTerm {
        Term::App { fun, arg, dom, x: name(x), cod }.rc()
    }

    pub fn sig(x: &str, fst_ty: RcTerm, snd_ty: RcTerm) -> RcTerm {
        Term::Sig { x: name(x), fst_ty, snd_ty }.rc()
    }

    pub fn id(ty: RcTerm, lhs: RcTerm, rhs: RcTerm) -> RcTerm {
        Term::Id { ty, lhs, rhs }.rc()
    }

    pub fn refl(ty: RcTerm, tm: RcTerm) -> RcTerm {
        Term::Refl { ty, tm }.rc()
    }

    pub fn univ() -> RcTerm {
        Term::Univ.rc()
    }

    pub fn unit() -> RcTerm {
        Term::Unit.rc()
    }

    pub fn tt() -> RcTerm {
        Term::Tt.rc()
    }

    pub fn bool() -> RcTerm {
        Term::Bool.rc()
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        let mut n = 1;
        for_each_subterm(self, &mut |_, t| n += t.size());
        n
    }
}

/// Calls `f` on every immediate subterm, together with the names bound over
/// that subterm.
fn for_each_subterm(t: &Term, f: &mut impl FnMut(&[Name], &RcTerm)) {
    match t {
        Term::Var(_) | Term::MVar(_) | Term::Univ | Term::Unit | Term::Tt | Term::Bool => {}
        Term::Nat(a) => f(&[], a),
        Term::Up { body, ty } | Term::Dn { body, ty } => {
            f(&[], body);
            f(&[], ty);
        }
        Term::Pi { x, dom, cod } => {
            f(&[], dom);
            f(std::slice::from_ref(x), cod);
        }
        Term::Lam { x, dom, body, cod } => {
            f(&[], dom);
            f(std::slice::from_ref(x), body);
            f(std::slice::from_ref(x), cod);
        }
        Term::App { fun, arg, dom, x, cod } => {
            f(&[], fun);
            f(&[], arg);
            f(&[], dom);
            f(std::slice::from_ref(x), cod);
        }
        Term::Sig { x, fst_ty, snd_ty } => {
            f(&[], fst_ty);
            f(std::slice::from_ref(x), snd_ty);
        }
        Term::Pair { fst, snd, fst_ty, x, snd_ty } => {
            f(&[], fst);
            f(&[], snd);
            f(&[], fst_ty);
            f(std::slice::from_ref(x), snd_ty);
        }
        Term::Fst { pair, fst_ty, x, snd_ty } | Term::Snd { pair, fst_ty, x, snd_ty } => {
            f(&[], pair);
            f(&[], fst_ty);
            f(std::slice::from_ref(x), snd_ty);
        }
        Term::Id { ty, lhs, rhs } => {
            f(&[], ty);
            f(&[], lhs);
            f(&[], rhs);
        }
        Term::Refl { ty, tm } => {
            f(&[], ty);
            f(&[], tm);
        }
        Term::J { ty, lhs, y, p, motive, base, rhs, path } => {
            f(&[], ty);
            f(&[], lhs);
            f(&[y.clone(), p.clone()], motive);
            f(&[], base);
            f(&[], rhs);
            f(&[], path);
        }
    }
}

/// Rebuilds `t` with every immediate subterm replaced by `f(bound, sub)`.
/// Binder names are kept as they are.
fn map_subterms(t: &Term, f: &mut impl FnMut(&[Name], &RcTerm) -> RcTerm) -> Term {
    match t {
        Term::Var(_) | Term::MVar(_) | Term::Univ | Term::Unit | Term::Tt | Term::Bool => t.clone(),
        Term::Nat(a) => Term::Nat(f(&[], a)),
        Term::Up { body, ty } => Term::Up { body: f(&[], body), ty: f(&[], ty) },
        Term::Dn { body, ty } => Term::Dn { body: f(&[], body), ty: f(&[], ty) },
        Term::Pi { x, dom, cod } => Term::Pi {
            x: x.clone(),
            dom: f(&[], dom),
            cod: f(std::slice::from_ref(x), cod),
        },
        Term::Lam { x, dom, body, cod } => Term::Lam {
            x: x.clone(),
            dom: f(&[], dom),
            body: f(std::slice::from_ref(x), body),
            cod: f(std::slice::from_ref(x), cod),
        },
        Term::App { fun, arg, dom, x, cod } => Term::App {
            fun: f(&[], fun),
            arg: f(&[], arg),
            dom: f(&[], dom),
            x: x.clone(),
            cod: f(std::slice::from_ref(x), cod),
        },
        Term::Sig { x, fst_ty, snd_ty } => Term::Sig {
            x: x.clone(),
            fst_ty: f(&[], fst_ty),
            snd_ty: f(std::slice::from_ref(x), snd_ty),
        },
        Term::Pair { fst, snd, fst_ty, x, snd_ty } => Term::Pair {
            fst: f(&[], fst),
            snd: f(&[], snd),
            fst_ty: f(&[], fst_ty),
            x: x.clone(),
            snd_ty: f(std::slice::from_ref(x), snd_ty),
        },
        Term::Fst { pair, fst_ty, x, snd_ty } => Term::Fst {
            pair: f(&[], pair),
            fst_ty: f(&[], fst_ty),
            x: x.clone(),
            snd_ty: f(std::slice::from_ref(x), snd_ty),
        },
        Term::Snd { pair, fst_ty, x, snd_ty } => Term::Snd {
            pair: f(&[], pair),
            fst_ty: f(&[], fst_ty),
            x: x.clone(),
            snd_ty: f(std::slice::from_ref(x), snd_ty),
        },
        Term::Id { ty, lhs, rhs } => Term::Id { ty: f(&[], ty), lhs: f(&[], lhs), rhs: f(&[], rhs) },
        Term::Refl { ty, tm } => Term::Refl { ty: f(&[], ty), tm: f(&[], tm) },
        Term::J { ty, lhs, y, p, motive, base, rhs, path } => Term::J {
            ty: f(&[], ty),
            lhs: f(&[], lhs),
            y: y.clone(),
            p: p.clone(),
            motive: f(&[y.clone(), p.clone()], motive),
            base: f(&[], base),
            rhs: f(&[], rhs),
            path: f(&[], path),
        },
    }
}

/// Rebuilds `t` with `f` applied to each immediate subterm, binders included
/// as they are.
pub fn map_children(t: &RcTerm, f: &mut impl FnMut(&RcTerm) -> RcTerm) -> RcTerm {
    match &**t {
        Term::Var(_) | Term::MVar(_) | Term::Univ | Term::Unit | Term::Tt | Term::Bool => t.clone(),
        _ => map_subterms(t, &mut |_, sub| f(sub)).rc(),
    }
}

/// Free variable names of `t`, counting both plain and marked uses.
pub fn free_vars(t: &Term) -> Scope {
    fn go(t: &Term, bound: &mut Vec<Name>, out: &mut Scope) {
        match t {
            Term::Var(x) | Term::MVar(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            _ => for_each_subterm(t, &mut |bs, sub| {
                let n = bound.len();
                bound.extend(bs.iter().cloned());
                go(sub, bound, out);
                bound.truncate(n);
            }),
        }
    }
    let mut out = Scope::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Free variables used plain (unmarked).
pub fn plain_free_vars(t: &Term) -> Scope {
    fn go(t: &Term, bound: &mut Vec<Name>, out: &mut Scope) {
        match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::MVar(_) => {}
            _ => for_each_subterm(t, &mut |bs, sub| {
                let n = bound.len();
                bound.extend(bs.iter().cloned());
                go(sub, bound, out);
                bound.truncate(n);
            }),
        }
    }
    let mut out = Scope::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn occurs_free(x: &str, t: &Term) -> bool {
    fn go(x: &str, t: &Term, bound: &mut Vec<Name>) -> bool {
        match t {
            Term::Var(y) | Term::MVar(y) => &**y == x && !bound.iter().any(|b| &**b == x),
            _ => {
                let mut hit = false;
                for_each_subterm(t, &mut |bs, sub| {
                    if hit {
                        return;
                    }
                    let n = bound.len();
                    bound.extend(bs.iter().cloned());
                    hit = go(x, sub, bound);
                    bound.truncate(n);
                });
                hit
            }
        }
    }
    go(x, t, &mut Vec::new())
}

fn zero_where(t: &RcTerm, pred: &dyn Fn(&Name) -> bool) -> RcTerm {
    fn go(t: &RcTerm, pred: &dyn Fn(&Name) -> bool, bound: &mut Vec<Name>) -> RcTerm {
        match &**t {
            Term::Var(x) => {
                if !bound.contains(x) && pred(x) {
                    Term::MVar(x.clone()).rc()
                } else {
                    t.clone()
                }
            }
            Term::MVar(_) | Term::Univ | Term::Unit | Term::Tt | Term::Bool => t.clone(),
            _ => map_subterms(t, &mut |bs, sub| {
                let n = bound.len();
                bound.extend(bs.iter().cloned());
                let r = go(sub, pred, bound);
                bound.truncate(n);
                r
            })
            .rc(),
        }
    }
    go(t, pred, &mut Vec::new())
}

/// `a^{0γ}`: marks every plain free use of a variable in `gamma`. Bound
/// variables are never affected, even when they share a name with a member of
/// `gamma`.
pub fn zero_term(a: &RcTerm, gamma: &Scope) -> RcTerm {
    if gamma.is_empty() {
        return a.clone();
    }
    zero_where(a, &|x| gamma.contains(x))
}

/// `za`: marks every free variable of `a`.
pub fn zero_all(a: &RcTerm) -> RcTerm {
    zero_where(a, &|_| true)
}

/// `b[a/x]`, capture-avoiding. Plain uses of `x` become `a`; marked uses
/// `~x` become `za`.
pub fn substitute(b: &RcTerm, a: &RcTerm, x: &str) -> RcTerm {
    let s = Subst { x, a, za: zero_all(a), fv_a: free_vars(a) };
    s.go(b)
}

/// Renames free occurrences of `from` (plain and marked) to `to`.
pub fn rename(t: &RcTerm, from: &str, to: &Name) -> RcTerm {
    substitute(t, &Term::Var(to.clone()).rc(), from)
}

struct Subst<'a> {
    x: &'a str,
    a: &'a RcTerm,
    za: RcTerm,
    fv_a: Scope,
}

impl Subst<'_> {
    fn go(&self, t: &RcTerm) -> RcTerm {
        match &**t {
            Term::Var(y) if &**y == self.x => self.a.clone(),
            Term::MVar(y) if &**y == self.x => self.za.clone(),
            Term::Var(_) | Term::MVar(_) | Term::Univ | Term::Unit | Term::Tt | Term::Bool => {
                t.clone()
            }
            _ => {
                if !occurs_free(self.x, t) {
                    return t.clone();
                }
                self.go_binders(t)
            }
        }
    }

    fn go_binders(&self, t: &RcTerm) -> RcTerm {
        // Rename binders that would capture a free variable of `a`.
        let t = self.freshen(t);
        map_subterms(&t, &mut |bs, sub| {
            if bs.iter().any(|b| &**b == self.x) {
                sub.clone()
            } else {
                self.go(sub)
            }
        })
        .rc()
    }

    fn freshen(&self, t: &RcTerm) -> RcTerm {
        let binders: Vec<Name> = match &**t {
            Term::Pi { x, .. }
            | Term::Lam { x, .. }
            | Term::App { x, .. }
            | Term::Sig { x, .. }
            | Term::Pair { x, .. }
            | Term::Fst { x, .. }
            | Term::Snd { x, .. } => vec![x.clone()],
            Term::J { y, p, .. } => vec![y.clone(), p.clone()],
            _ => return t.clone(),
        };
        if binders.iter().any(|b| &**b == self.x) || !binders.iter().any(|b| self.fv_a.contains(b))
        {
            return t.clone();
        }
        let mut avoid = free_vars(t);
        avoid.extend(self.fv_a.iter().cloned());
        avoid.insert(name(self.x));
        avoid.extend(binders.iter().cloned());
        let mut t = t.clone();
        for b in binders.iter().filter(|b| self.fv_a.contains(*b)) {
            let fresh = fresh_name(b, |n| avoid.contains(n));
            avoid.insert(fresh.clone());
            t = rename_binder(&t, b, &fresh);
        }
        t
    }
}

/// Renames the binder `old` of the outermost node of `t` to `new`, adjusting
/// the subterms it scopes over.
fn rename_binder(t: &RcTerm, old: &Name, new: &Name) -> RcTerm {
    let swap = |n: &Name| if n == old { new.clone() } else { n.clone() };
    let rebound = map_subterms(t, &mut |bs, sub| {
        if bs.contains(old) {
            rename(sub, old, new)
        } else {
            sub.clone()
        }
    });
    match rebound {
        Term::Pi { x, dom, cod } => Term::Pi { x: swap(&x), dom, cod },
        Term::Lam { x, dom, body, cod } => Term::Lam { x: swap(&x), dom, body, cod },
        Term::App { fun, arg, dom, x, cod } => Term::App { fun, arg, dom, x: swap(&x), cod },
        Term::Sig { x, fst_ty, snd_ty } => Term::Sig { x: swap(&x), fst_ty, snd_ty },
        Term::Pair { fst, snd, fst_ty, x, snd_ty } => {
            Term::Pair { fst, snd, fst_ty, x: swap(&x), snd_ty }
        }
        Term::Fst { pair, fst_ty, x, snd_ty } => Term::Fst { pair, fst_ty, x: swap(&x), snd_ty },
        Term::Snd { pair, fst_ty, x, snd_ty } => Term::Snd { pair, fst_ty, x: swap(&x), snd_ty },
        Term::J { ty, lhs, y, p, motive, base, rhs, path } => {
            Term::J { ty, lhs, y: swap(&y), p: swap(&p), motive, base, rhs, path }
        }
        other => other,
    }
    .rc()
}

/// Picks a variant of `base` for which `taken` is false. Trailing digits of
/// `base` are replaced by a counter.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Name {
    if !taken(base) {
        return name(base);
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !taken(n))
        .map(|n| name(&n))
        .expect("unbounded counter")
}

/// Alpha-equivalence: equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    AlphaEq::default().eq(a, b)
}

#[derive(Default)]
struct AlphaEq {
    left: Vec<Name>,
    right: Vec<Name>,
}

impl AlphaEq {
    fn var(&self, x: &Name, y: &Name) -> bool {
        match (self.left.iter().rposition(|n| n == x), self.right.iter().rposition(|n| n == y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        }
    }

    fn under(&mut self, lx: &[&Name], rx: &[&Name], a: &Term, b: &Term) -> bool {
        let n = self.left.len();
        self.left.extend(lx.iter().map(|x| (*x).clone()));
        self.right.extend(rx.iter().map(|x| (*x).clone()));
        let r = self.eq(a, b);
        self.left.truncate(n);
        self.right.truncate(n);
        r
    }

    fn eq(&mut self, a: &Term, b: &Term) -> bool {
        use Term::*;
        match (a, b) {
            (Var(x), Var(y)) | (MVar(x), MVar(y)) => self.var(x, y),
            (Univ, Univ) | (Unit, Unit) | (Tt, Tt) | (Bool, Bool) => true,
            (Nat(a), Nat(b)) => self.eq(a, b),
            (Up { body: a, ty: s }, Up { body: b, ty: t })
            | (Dn { body: a, ty: s }, Dn { body: b, ty: t }) => self.eq(a, b) && self.eq(s, t),
            (Pi { x, dom: a1, cod: b1 }, Pi { x: y, dom: a2, cod: b2 })
            | (Sig { x, fst_ty: a1, snd_ty: b1 }, Sig { x: y, fst_ty: a2, snd_ty: b2 }) => {
                self.eq(a1, a2) && self.under(&[x], &[y], b1, b2)
            }
            (
                Lam { x, dom: a1, body: t1, cod: b1 },
                Lam { x: y, dom: a2, body: t2, cod: b2 },
            ) => {
                self.eq(a1, a2) && self.under(&[x], &[y], t1, t2) && self.under(&[x], &[y], b1, b2)
            }
            (
                App { fun: f1, arg: a1, dom: d1, x, cod: c1 },
                App { fun: f2, arg: a2, dom: d2, x: y, cod: c2 },
            ) => {
                self.eq(f1, f2)
                    && self.eq(a1, a2)
                    && self.eq(d1, d2)
                    && self.under(&[x], &[y], c1, c2)
            }
            (
                Pair { fst: a1, snd: b1, fst_ty: s1, x, snd_ty: t1 },
                Pair { fst: a2, snd: b2, fst_ty: s2, x: y, snd_ty: t2 },
            ) => {
                self.eq(a1, a2)
                    && self.eq(b1, b2)
                    && self.eq(s1, s2)
                    && self.under(&[x], &[y], t1, t2)
            }
            (
                Fst { pair: p1, fst_ty: s1, x, snd_ty: t1 },
                Fst { pair: p2, fst_ty: s2, x: y, snd_ty: t2 },
            )
            | (
                Snd { pair: p1, fst_ty: s1, x, snd_ty: t1 },
                Snd { pair: p2, fst_ty: s2, x: y, snd_ty: t2 },
            ) => self.eq(p1, p2) && self.eq(s1, s2) && self.under(&[x], &[y], t1, t2),
            (Id { ty: t1, lhs: a1, rhs: b1 }, Id { ty: t2, lhs: a2, rhs: b2 }) => {
                self.eq(t1, t2) && self.eq(a1, a2) && self.eq(b1, b2)
            }
            (Refl { ty: t1, tm: a1 }, Refl { ty: t2, tm: a2 }) => {
                self.eq(t1, t2) && self.eq(a1, a2)
            }
            (
                J { ty: t1, lhs: a1, y: y1, p: p1, motive: m1, base: d1, rhs: b1, path: q1 },
                J { ty: t2, lhs: a2, y: y2, p: p2, motive: m2, base: d2, rhs: b2, path: q2 },
            ) => {
                self.eq(t1, t2)
                    && self.eq(a1, a2)
                    && self.under(&[y1, p1], &[y2, p2], m1, m2)
                    && self.eq(d1, d2)
                    && self.eq(b1, b2)
                    && self.eq(q1, q2)
            }
            _ => false,
        }
    }
}

/// Whether a context entry is an ordinary `x : A` or a marked `~x :: A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Plain,
    Marked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: Name,
    pub mark: Mark,
    pub ty: RcTerm,
}

impl Entry {
    pub fn plain(x: &str, ty: RcTerm) -> Entry {
        Entry { name: name(x), mark: Mark::Plain, ty }
    }

    pub fn marked(x: &str, ty: RcTerm) -> Entry {
        Entry { name: name(x), mark: Mark::Marked, ty }
    }

    pub fn is_marked(&self) -> bool {
        self.mark == Mark::Marked
    }
}

fn entries_alpha_eq(a: &[Entry], b: &[Entry]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(e, f)| e.name == f.name && e.mark == f.mark && alpha_eq(&e.ty, &f.ty))
}

/// A raw context: a list of (possibly marked) declarations whose types are
/// not yet known to be well formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawContext {
    pub entries: Vec<Entry>,
}

/// A raw telescope, judged relative to an outer scope.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Telescope {
    pub entries: Vec<Entry>,
}

impl RawContext {
    pub fn new(entries: Vec<Entry>) -> RawContext {
        RawContext { entries }
    }

    /// `dom(Γ)`: the names, forgetting marks and types.
    pub fn dom(&self) -> Vec<Name> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn scope(&self) -> Scope {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn extended(&self, e: Entry) -> RawContext {
        let mut c = self.clone();
        c.push(e);
        c
    }

    /// `Γ, Δ`
    pub fn concat(&self, tele: &Telescope) -> RawContext {
        let mut c = self.clone();
        c.entries.extend(tele.entries.iter().cloned());
        c
    }

    /// Splits into a prefix of `k` entries and the remaining telescope.
    pub fn split_at(&self, k: usize) -> (RawContext, Telescope) {
        let (a, b) = self.entries.split_at(k);
        (RawContext::new(a.to_vec()), Telescope::new(b.to_vec()))
    }

    pub fn lookup(&self, x: &str) -> Option<(usize, &Entry)> {
        self.entries.iter().enumerate().rev().find(|(_, e)| &*e.name == x)
    }

    pub fn as_telescope(&self) -> Telescope {
        Telescope::new(self.entries.clone())
    }

    pub fn alpha_eq(&self, other: &RawContext) -> bool {
        entries_alpha_eq(&self.entries, &other.entries)
    }
}

impl Telescope {
    pub fn new(entries: Vec<Entry>) -> Telescope {
        Telescope { entries }
    }

    pub fn dom(&self) -> Vec<Name> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn scope(&self) -> Scope {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn alpha_eq(&self, other: &Telescope) -> bool {
        entries_alpha_eq(&self.entries, &other.entries)
    }

    /// `Δ[a/x]` on every type of the telescope.
    pub fn substitute(&self, a: &RcTerm, x: &str) -> Telescope {
        Telescope::new(
            self.entries
                .iter()
                .map(|e| Entry { name: e.name.clone(), mark: e.mark, ty: substitute(&e.ty, a, x) })
                .collect(),
        )
    }
}

/// `zc(Γ)`: marks every declaration. Types of plain declarations are zeroed
/// over the preceding scope; marked declarations are kept as they are.
pub fn zero_context(ctx: &RawContext) -> RawContext {
    let mut scope = Scope::new();
    let mut out = Vec::with_capacity(ctx.entries.len());
    for e in &ctx.entries {
        let ty = match e.mark {
            Mark::Plain => zero_term(&e.ty, &scope),
            Mark::Marked => e.ty.clone(),
        };
        out.push(Entry { name: e.name.clone(), mark: Mark::Marked, ty });
        scope.insert(e.name.clone());
    }
    RawContext::new(out)
}

/// `Δ^{0γ}`: zeroes the types of a telescope over `gamma`, keeping the marks
/// of its entries. Marked entries are left untouched.
pub fn zero_telescope(tele: &Telescope, gamma: &Scope) -> Telescope {
    let mut gamma = gamma.clone();
    let mut out = Vec::with_capacity(tele.entries.len());
    for e in &tele.entries {
        let ty = match e.mark {
            Mark::Plain => zero_term(&e.ty, &gamma),
            Mark::Marked => e.ty.clone(),
        };
        out.push(Entry { name: e.name.clone(), mark: e.mark, ty });
        // A telescope entry shadows an outer name of the same spelling.
        gamma.remove(&e.name);
    }
    Telescope::new(out)
}

/// `zc(Δ)` on a telescope: marks every declaration, zeroing the types of
/// plain declarations in all of their free variables (outer scope included).
pub fn zero_context_telescope(tele: &Telescope) -> Telescope {
    Telescope::new(
        tele.entries
            .iter()
            .map(|e| Entry {
                name: e.name.clone(),
                mark: Mark::Marked,
                ty: match e.mark {
                    Mark::Plain => zero_all(&e.ty),
                    Mark::Marked => e.ty.clone(),
                },
            })
            .collect(),
    )
}

pub fn scope_of(names: &[Name]) -> Scope {
    names.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_ty() -> RcTerm {
        Term::var("A")
    }

    fn sc(names: &[&str]) -> Scope {
        names.iter().map(|n| name(n)).collect()
    }

    fn app(f: RcTerm, a: RcTerm) -> RcTerm {
        Term::app(f, a, a_ty(), "_", a_ty())
    }

    #[test]
    fn zero_context_examples() {
        assert!(zero_context(&RawContext::default()).is_empty());

        let ctx = RawContext::new(vec![Entry::plain("x", a_ty())]);
        let z = zero_context(&ctx);
        assert_eq!(z.entries, vec![Entry::marked("x", zero_term(&a_ty(), &Scope::new()))]);

        let ctx = RawContext::new(vec![
            Entry::plain("A", Term::univ()),
            Entry::plain("x", a_ty()),
            Entry::marked("y", Term::mvar("A")),
        ]);
        let z = zero_context(&ctx);
        assert_eq!(z.entries[1], Entry::marked("x", Term::mvar("A")));
        assert!(z.alpha_eq(&zero_context(&z)));
    }

    #[test]
    fn zero_term_examples() {
        // (f x)^{0{f}} = (~f) x
        let t = app(Term::var("f"), Term::var("x"));
        let z = zero_term(&t, &sc(&["f"]));
        assert_eq!(z, app(Term::mvar("f"), Term::var("x")));

        // (λx:A. f x)^{0{f}} = λx:A. (~f) x
        let lam = Term::lam("x", a_ty(), t.clone(), a_ty());
        let expected = Term::lam("x", a_ty(), z, a_ty());
        assert_eq!(zero_term(&lam, &sc(&["f"])), expected);

        // ~x^{0{x}} = ~x
        assert_eq!(zero_term(&Term::mvar("x"), &sc(&["x"])), Term::mvar("x"));

        // Zeroing over the empty scope is the identity.
        assert_eq!(zero_term(&lam, &Scope::new()), lam);
    }

    #[test]
    fn bound_names_do_not_leak_into_zeroing() {
        // λx:A. x zeroed over {x} keeps its bound x.
        let lam = Term::lam("x", a_ty(), Term::var("x"), a_ty());
        assert_eq!(zero_term(&lam, &sc(&["x", "A"])), Term::lam("x", Term::mvar("A"), Term::var("x"), Term::mvar("A")));
    }

    #[test]
    fn zero_telescope_examples() {
        let f_of_g = app(Term::var("F"), Term::var("g"));
        let tele = Telescope::new(vec![Entry::plain("x", f_of_g)]);
        let z = zero_telescope(&tele, &sc(&["g"]));
        assert_eq!(z.entries, vec![Entry::plain("x", app(Term::var("F"), Term::mvar("g")))]);

        let marked = Telescope::new(vec![Entry::marked("x", a_ty())]);
        assert_eq!(zero_telescope(&marked, &sc(&["A"])), marked);
        assert!(zero_telescope(&Telescope::default(), &sc(&["A"])).is_empty());
    }

    #[test]
    fn substitution_examples() {
        let a = app(Term::var("f"), Term::var("y"));
        // ~x[a/x] = za
        assert_eq!(substitute(&Term::mvar("x"), &a, "x"), zero_all(&a));
        assert!(matches!(&*zero_all(&a), Term::App { fun, arg, .. } if **fun == *Term::mvar("f") && **arg == *Term::mvar("y")));
        // x[a/x] = a
        assert_eq!(substitute(&Term::var("x"), &a, "x"), a);
        // ~y[a/x] = ~y
        assert_eq!(substitute(&Term::mvar("y"), &a, "x"), Term::mvar("y"));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (λy:A. x)[y/x] must not become λy. y
        let lam = Term::lam("y", a_ty(), Term::var("x"), a_ty());
        let r = substitute(&lam, &Term::var("y"), "x");
        match &*r {
            Term::Lam { x, body, .. } => {
                assert_ne!(&**x, "y");
                assert_eq!(**body, Term::Var(name("y")));
            }
            _ => panic!("expected a lambda"),
        }
        // Marked occurrence under a capturing binder.
        let lam = Term::lam("y", a_ty(), Term::mvar("x"), a_ty());
        let r = substitute(&lam, &Term::var("y"), "x");
        assert!(alpha_eq(&r, &Term::lam("z", a_ty(), Term::mvar("y"), a_ty())));
    }

    #[test]
    fn substitution_respects_shadowing() {
        let lam = Term::lam("x", a_ty(), Term::var("x"), a_ty());
        assert_eq!(substitute(&lam, &Term::tt(), "x"), lam);
    }

    #[test]
    fn alpha_eq_examples() {
        let l = Term::lam("x", a_ty(), Term::var("x"), a_ty());
        let r = Term::lam("y", a_ty(), Term::var("y"), a_ty());
        assert!(alpha_eq(&l, &r));
        assert!(!alpha_eq(&Term::mvar("x"), &Term::var("x")));
        assert!(alpha_eq(&Term::nat(a_ty()), &Term::nat(a_ty())));
        // A bound name is not equal to a free one of the same spelling.
        let free = Term::lam("y", a_ty(), Term::var("x"), a_ty());
        let bound = Term::lam("x", a_ty(), Term::var("x"), a_ty());
        assert!(!alpha_eq(&free, &bound));
    }

    #[test]
    fn fresh_names() {
        let taken = sc(&["x", "x1"]);
        assert_eq!(&*fresh_name("x", |n| taken.contains(n)), "x2");
        assert_eq!(&*fresh_name("y", |n| taken.contains(n)), "y");
    }
}
