//! A finite, discrete instance of the parametrised pointed types model.
//!
//! A context denotes a finite base, a finite fibre over each base element
//! and a chosen point in each fibre. Terms are evaluated pointwise: the base
//! component of a term reads only base components of the environment, the
//! fibre component reads both. A marked use of a variable reads the point of
//! its type instead of its fibre value, which is the counit.
//!
//! All sets are finite and discrete, so paths are equalities and the
//! identity type has at most one element in each base and fibre.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Entry, Mark, Name, RcTerm, Term};

/// Largest set the model is willing to enumerate.
pub const MAX_SET: usize = 1 << 16;

thread_local! {
    static LIMIT: std::cell::Cell<usize> = const { std::cell::Cell::new(MAX_SET) };
}

fn limit() -> usize {
    LIMIT.with(|l| l.get())
}

/// Runs `f` with a smaller set-size limit on this thread.
pub fn with_limit<T>(max: usize, f: impl FnOnce() -> T) -> T {
    let old = LIMIT.with(|l| l.replace(max.min(MAX_SET)));
    let out = f();
    LIMIT.with(|l| l.set(old));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Star,
    Bool(bool),
    Pair(Box<Val>, Box<Val>),
    /// The graph of a finite function, sorted by argument.
    Map(Vec<(Val, Val)>),
}

impl Val {
    pub fn pair(a: Val, b: Val) -> Val {
        Val::Pair(Box::new(a), Box::new(b))
    }

    fn split(&self) -> Result<(&Val, &Val), ModelError> {
        match self {
            Val::Pair(a, b) => Ok((a, b)),
            v => Err(ModelError::Invalid(format!("expected a pair, found {v}"))),
        }
    }

    fn apply(&self, arg: &Val) -> Result<Val, ModelError> {
        match self {
            Val::Map(graph) => graph
                .binary_search_by(|(k, _)| k.cmp(arg))
                .map(|i| graph[i].1.clone())
                .map_err(|_| ModelError::Invalid(format!("{arg} is outside the domain of {self}"))),
            v => Err(ModelError::Invalid(format!("expected a function, found {v}"))),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Star => write!(f, "*"),
            Val::Bool(b) => write!(f, "{b}"),
            Val::Pair(a, b) => write!(f, "({a}, {b})"),
            Val::Map(graph) => {
                write!(f, "{{")?;
                for (i, (k, v)) in graph.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k} -> {v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    /// The declaration uses something the model does not interpret.
    #[error("outside the finite fragment: {0}")]
    Fragment(String),
    #[error("a set is too large to enumerate")]
    TooLarge,
    /// A value failed a check the typing rules should guarantee.
    #[error("invalid value: {0}")]
    Invalid(String),
}

type R<T> = Result<T, ModelError>;

fn fragment<T>(what: &str) -> R<T> {
    Err(ModelError::Fragment(what.to_string()))
}

/// One variable of the semantic environment: its base value `d`, its fibre
/// value `u`, and the point `p` of its type over `d`.
#[derive(Debug, Clone)]
struct Bind {
    name: Name,
    d: Val,
    u: Val,
    p: Val,
}

#[derive(Debug, Clone, Default)]
struct Rho(Vec<Bind>);

impl Rho {
    fn get(&self, x: &str) -> R<&Bind> {
        self.0
            .iter()
            .rev()
            .find(|b| &*b.name == x)
            .ok_or_else(|| ModelError::Invalid(format!("unbound variable `{x}`")))
    }

    fn with(&self, name: &Name, d: Val, u: Val, p: Val) -> Rho {
        let mut v = self.0.clone();
        v.push(Bind { name: name.clone(), d, u, p });
        Rho(v)
    }

    /// The same base point, with every fibre value replaced by the point.
    fn hat(&self) -> Rho {
        Rho(self.0.iter().map(|b| Bind { u: b.p.clone(), ..b.clone() }).collect())
    }
}

/// All functions with the given finite domain and per-argument codomains.
fn functions(choices: Vec<(Val, Vec<Val>)>) -> R<Vec<Val>> {
    let mut total: usize = 1;
    for (_, cod) in &choices {
        total = total.checked_mul(cod.len()).filter(|n| *n <= limit()).ok_or(ModelError::TooLarge)?;
    }
    let mut out = vec![Vec::new()];
    for (arg, cod) in choices {
        let mut next = Vec::with_capacity(out.len() * cod.len());
        for graph in &out {
            for v in &cod {
                let mut g: Vec<(Val, Val)> = graph.clone();
                g.push((arg.clone(), v.clone()));
                next.push(g);
            }
        }
        out = next;
    }
    Ok(out
        .into_iter()
        .map(|mut g| {
            g.sort();
            Val::Map(g)
        })
        .collect())
}

fn base(ty: &Term, rho: &Rho) -> R<Vec<Val>> {
    match ty {
        Term::Unit | Term::Bool => Ok(vec![Val::Star]),
        Term::Nat(a) => base(a, rho),
        Term::Sig { x, fst_ty, snd_ty } => {
            let mut out = Vec::new();
            for a in base(fst_ty, rho)? {
                let pa = point(fst_ty, rho, &a)?;
                for b in base(snd_ty, &rho.with(x, a.clone(), pa.clone(), pa.clone()))? {
                    out.push(Val::pair(a.clone(), b));
                    if out.len() > limit() {
                        return Err(ModelError::TooLarge);
                    }
                }
            }
            Ok(out)
        }
        Term::Pi { x, dom, cod } => homs(x, dom, cod, rho),
        Term::Id { lhs, rhs, .. } => Ok(if down(lhs, rho)? == down(rhs, rho)? { vec![Val::Star] } else { vec![] }),
        Term::Univ => fragment("the universe"),
        other => fragment(&format!("`{other}` is not a type constructor")),
    }
}

/// The base of a function type: a map of bases, and a map of fibres over the
/// point of the context that preserves the point.
fn homs(x: &Name, dom: &Term, cod: &Term, rho: &Rho) -> R<Vec<Val>> {
    let hat = rho.hat();
    let mut dn_choices = Vec::new();
    for a in base(dom, rho)? {
        let pa = point(dom, rho, &a)?;
        dn_choices.push((a.clone(), base(cod, &rho.with(x, a, pa.clone(), pa))?));
    }
    let mut out = Vec::new();
    for dn in functions(dn_choices.clone())? {
        let mut up_choices = Vec::new();
        for (a, _) in &dn_choices {
            let pa = point(dom, rho, a)?;
            let b = dn.apply(a)?;
            for ea in fibre(dom, &hat, a)? {
                let inner = hat.with(x, a.clone(), ea.clone(), pa.clone());
                let cod_fibre = if ea == pa { vec![point(cod, &inner, &b)?] } else { fibre(cod, &inner, &b)? };
                up_choices.push((Val::pair(a.clone(), ea), cod_fibre));
            }
        }
        for up in functions(up_choices)? {
            out.push(Val::pair(dn.clone(), up));
            if out.len() > limit() {
                return Err(ModelError::TooLarge);
            }
        }
    }
    Ok(out)
}

fn fibre(ty: &Term, rho: &Rho, a: &Val) -> R<Vec<Val>> {
    match ty {
        Term::Unit | Term::Nat(_) => Ok(vec![Val::Star]),
        Term::Bool => Ok(vec![Val::Bool(true), Val::Bool(false)]),
        Term::Sig { x, fst_ty, snd_ty } => {
            let (a1, a2) = a.split()?;
            let pa1 = point(fst_ty, rho, a1)?;
            let mut out = Vec::new();
            for e1 in fibre(fst_ty, rho, a1)? {
                for e2 in fibre(snd_ty, &rho.with(x, a1.clone(), e1.clone(), pa1.clone()), a2)? {
                    out.push(Val::pair(e1.clone(), e2));
                }
            }
            Ok(out)
        }
        Term::Pi { x, dom, cod } => {
            let (dn, _) = a.split()?;
            let mut choices = Vec::new();
            for a in base(dom, rho)? {
                let pa = point(dom, rho, &a)?;
                let b = dn.apply(&a)?;
                for ea in fibre(dom, rho, &a)? {
                    let inner = rho.with(x, a.clone(), ea.clone(), pa.clone());
                    choices.push((Val::pair(a.clone(), ea), fibre(cod, &inner, &b)?));
                }
            }
            functions(choices)
        }
        Term::Id { lhs, rhs, .. } => Ok(if up(lhs, rho)? == up(rhs, rho)? { vec![Val::Star] } else { vec![] }),
        Term::Univ => fragment("the universe"),
        other => fragment(&format!("`{other}` is not a type constructor")),
    }
}

/// The chosen point over `a`. It lies in the fibre over the point of the
/// context, so only the base of `rho` matters.
fn point(ty: &Term, rho: &Rho, a: &Val) -> R<Val> {
    match ty {
        Term::Unit | Term::Nat(_) | Term::Id { .. } => Ok(Val::Star),
        Term::Bool => Ok(Val::Bool(true)),
        Term::Sig { x, fst_ty, snd_ty } => {
            let (a1, a2) = a.split()?;
            let p1 = point(fst_ty, rho, a1)?;
            let p2 = point(snd_ty, &rho.hat().with(x, a1.clone(), p1.clone(), p1.clone()), a2)?;
            Ok(Val::pair(p1, p2))
        }
        Term::Pi { .. } => Ok(a.split()?.1.clone()),
        Term::Univ => fragment("the universe"),
        other => fragment(&format!("`{other}` is not a type constructor")),
    }
}

fn first(v: Val) -> R<Val> {
    Ok(v.split()?.0.clone())
}

fn second(v: Val) -> R<Val> {
    Ok(v.split()?.1.clone())
}

fn down(t: &Term, rho: &Rho) -> R<Val> {
    match t {
        Term::Var(x) | Term::MVar(x) => Ok(rho.get(x)?.d.clone()),
        Term::Tt | Term::Refl { .. } => Ok(Val::Star),
        Term::Up { body, .. } | Term::Dn { body, .. } => down(body, rho),
        Term::Lam { x, dom, body, .. } => {
            let hat = rho.hat();
            let mut dn = Vec::new();
            let mut upm = Vec::new();
            for a in base(dom, rho)? {
                let pa = point(dom, rho, &a)?;
                dn.push((a.clone(), down(body, &rho.with(x, a.clone(), pa.clone(), pa.clone()))?));
                for ea in fibre(dom, &hat, &a)? {
                    let v = up(body, &hat.with(x, a.clone(), ea.clone(), pa.clone()))?;
                    upm.push((Val::pair(a.clone(), ea), v));
                }
            }
            dn.sort();
            upm.sort();
            Ok(Val::pair(Val::Map(dn), Val::Map(upm)))
        }
        Term::App { fun, arg, .. } => first(down(fun, rho)?)?.apply(&down(arg, rho)?),
        Term::Pair { fst, snd, .. } => Ok(Val::pair(down(fst, rho)?, down(snd, rho)?)),
        Term::Fst { pair, .. } => first(down(pair, rho)?),
        Term::Snd { pair, .. } => second(down(pair, rho)?),
        Term::J { base, .. } => down(base, rho),
        Term::Univ => fragment("the universe"),
        other => fragment(&format!("the type `{other}` used as a term")),
    }
}

fn up(t: &Term, rho: &Rho) -> R<Val> {
    match t {
        Term::Var(x) => Ok(rho.get(x)?.u.clone()),
        Term::MVar(x) => Ok(rho.get(x)?.p.clone()),
        Term::Tt | Term::Refl { .. } | Term::Up { .. } => Ok(Val::Star),
        Term::Dn { body, ty } => point(ty, rho, &down(body, rho)?),
        Term::Lam { x, dom, body, .. } => {
            let mut graph = Vec::new();
            for a in base(dom, rho)? {
                let pa = point(dom, rho, &a)?;
                for ea in fibre(dom, rho, &a)? {
                    let v = up(body, &rho.with(x, a.clone(), ea.clone(), pa.clone()))?;
                    graph.push((Val::pair(a.clone(), ea), v));
                }
            }
            graph.sort();
            Ok(Val::Map(graph))
        }
        Term::App { fun, arg, .. } => up(fun, rho)?.apply(&Val::pair(down(arg, rho)?, up(arg, rho)?)),
        Term::Pair { fst, snd, .. } => Ok(Val::pair(up(fst, rho)?, up(snd, rho)?)),
        Term::Fst { pair, .. } => first(up(pair, rho)?),
        Term::Snd { pair, .. } => second(up(pair, rho)?),
        Term::J { base, .. } => up(base, rho),
        Term::Univ => fragment("the universe"),
        other => fragment(&format!("the type `{other}` used as a term")),
    }
}

/// One base point of a context with all the fibre points over it.
#[derive(Debug, Clone)]
struct Sheet {
    g: Val,
    point: Val,
    /// Fibre elements, each with the environment it determines.
    fibre: Vec<(Val, Rho)>,
}

impl Sheet {
    fn pointed(&self) -> &Rho {
        &self.fibre.iter().find(|(e, _)| *e == self.point).expect("the point lies in the fibre").1
    }
}

/// A finite pointed family: a base, a fibre over each base element and a
/// point in each fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPointedFam {
    pub base: Vec<Val>,
    pub fibre: BTreeMap<Val, Vec<Val>>,
    pub point: BTreeMap<Val, Val>,
}

impl FinPointedFam {
    /// The same base with every fibre collapsed to its point.
    pub fn natural(&self) -> FinPointedFam {
        FinPointedFam {
            base: self.base.clone(),
            fibre: self.base.iter().map(|g| (g.clone(), vec![Val::Star])).collect(),
            point: self.base.iter().map(|g| (g.clone(), Val::Star)).collect(),
        }
    }

    pub fn total_size(&self) -> usize {
        self.fibre.values().map(Vec::len).sum()
    }
}

/// The interpretation of a context.
#[derive(Debug, Clone)]
pub struct SemCtx {
    sheets: Vec<Sheet>,
}

pub fn eval_ctx(entries: &[Entry]) -> Result<SemCtx, ModelError> {
    let mut sheets =
        vec![Sheet { g: Val::Star, point: Val::Star, fibre: vec![(Val::Star, Rho::default())] }];
    for entry in entries {
        let mut next = Vec::new();
        let mut size = 0usize;
        for sheet in &sheets {
            let hat = sheet.pointed().clone();
            for a in base(&entry.ty, &hat)? {
                let pa = point(&entry.ty, &hat, &a)?;
                let mut over = Vec::new();
                for (e, rho) in &sheet.fibre {
                    match entry.mark {
                        Mark::Plain => {
                            for ea in fibre(&entry.ty, rho, &a)? {
                                let r = rho.with(&entry.name, a.clone(), ea.clone(), pa.clone());
                                over.push((Val::pair(e.clone(), ea), r));
                            }
                        }
                        Mark::Marked => {
                            let r = rho.with(&entry.name, a.clone(), Val::Star, pa.clone());
                            over.push((Val::pair(e.clone(), Val::Star), r));
                        }
                    }
                }
                let pe = match entry.mark {
                    Mark::Plain => pa.clone(),
                    Mark::Marked => Val::Star,
                };
                size += over.len();
                if size > limit() {
                    return Err(ModelError::TooLarge);
                }
                next.push(Sheet {
                    g: Val::pair(sheet.g.clone(), a.clone()),
                    point: Val::pair(sheet.point.clone(), pe),
                    fibre: over,
                });
            }
        }
        sheets = next;
    }
    Ok(SemCtx { sheets })
}

impl SemCtx {
    pub fn family(&self) -> FinPointedFam {
        FinPointedFam {
            base: self.sheets.iter().map(|s| s.g.clone()).collect(),
            fibre: self.sheets.iter().map(|s| (s.g.clone(), s.fibre.iter().map(|(e, _)| e.clone()).collect())).collect(),
            point: self.sheets.iter().map(|s| (s.g.clone(), s.point.clone())).collect(),
        }
    }
}

/// A type over a context, tabulated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemType {
    /// `g ↦ base`
    pub base: BTreeMap<Val, Vec<Val>>,
    /// `(g, a, e) ↦ fibre`
    pub fibre: BTreeMap<(Val, Val, Val), Vec<Val>>,
    /// `(g, a) ↦ point`, in the fibre over the point of the context.
    pub point: BTreeMap<(Val, Val), Val>,
}

pub fn eval_type(ctx: &SemCtx, ty: &Term) -> Result<SemType, ModelError> {
    let mut out = SemType { base: BTreeMap::new(), fibre: BTreeMap::new(), point: BTreeMap::new() };
    for sheet in &ctx.sheets {
        let hat = sheet.pointed();
        let bs = base(ty, hat)?;
        for (e, rho) in &sheet.fibre {
            if base(ty, rho)? != bs {
                return Err(ModelError::Invalid(format!("the base of `{ty}` depends on the fibre at {e}")));
            }
            for a in &bs {
                out.fibre.insert((sheet.g.clone(), a.clone(), e.clone()), fibre(ty, rho, a)?);
            }
        }
        for a in &bs {
            let p = point(ty, hat, a)?;
            if !out.fibre[&(sheet.g.clone(), a.clone(), sheet.point.clone())].contains(&p) {
                return Err(ModelError::Invalid(format!("the point {p} of `{ty}` is not in its fibre")));
            }
            out.point.insert((sheet.g.clone(), a.clone()), p);
        }
        out.base.insert(sheet.g.clone(), bs);
    }
    Ok(out)
}

/// A term over a context: its base map and fibre map. The pointedness
/// equation is checked when the term is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemTerm {
    pub dn: BTreeMap<Val, Val>,
    pub up: BTreeMap<(Val, Val), Val>,
}

pub fn eval_term(ctx: &SemCtx, t: &Term, ty: &Term) -> Result<SemTerm, ModelError> {
    let mut out = SemTerm { dn: BTreeMap::new(), up: BTreeMap::new() };
    for sheet in &ctx.sheets {
        let hat = sheet.pointed();
        let d = down(t, hat)?;
        if !base(ty, hat)?.contains(&d) {
            return Err(ModelError::Invalid(format!("{d} is not in the base of `{ty}`")));
        }
        for (e, rho) in &sheet.fibre {
            if down(t, rho)? != d {
                return Err(ModelError::Invalid(format!("the base of `{t}` depends on the fibre at {e}")));
            }
            let u = up(t, rho)?;
            if !fibre(ty, rho, &d)?.contains(&u) {
                return Err(ModelError::Invalid(format!("{u} is not in the fibre of `{ty}` over {d}")));
            }
            out.up.insert((sheet.g.clone(), e.clone()), u);
        }
        let at_point = &out.up[&(sheet.g.clone(), sheet.point.clone())];
        if *at_point != point(ty, hat, &d)? {
            return Err(ModelError::Invalid(format!("`{t}` does not preserve the point over {}", sheet.g)));
        }
        out.dn.insert(sheet.g.clone(), d);
    }
    Ok(out)
}

/// Pointwise equality of the base and fibre maps.
pub fn sem_equal(x: &SemTerm, y: &SemTerm) -> bool {
    x.dn == y.dn && x.up == y.up
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unequal,
    Skipped(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => write!(f, "equal"),
            Verdict::Unequal => write!(f, "unequal"),
            Verdict::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}

/// Evaluates both sides over the context and compares them. Anything outside
/// the fragment is skipped. Values that break an invariant are errors.
pub fn oracle_check(entries: &[Entry], a: &RcTerm, b: &RcTerm, ty: &RcTerm) -> Result<Verdict, ModelError> {
    let run = || -> R<bool> {
        let ctx = eval_ctx(entries)?;
        Ok(sem_equal(&eval_term(&ctx, a, ty)?, &eval_term(&ctx, b, ty)?))
    };
    match run() {
        Ok(true) => Ok(Verdict::Equal),
        Ok(false) => Ok(Verdict::Unequal),
        Err(ModelError::Fragment(why)) => Ok(Verdict::Skipped(why)),
        Err(ModelError::TooLarge) => Ok(Verdict::Skipped(ModelError::TooLarge.to_string())),
        Err(e) => Err(e),
    }
}

/// A map of pointed families: base map, fibre map, and the requirement that
/// the point goes to the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemMorphism {
    pub dn: BTreeMap<Val, Val>,
    pub up: BTreeMap<(Val, Val), Val>,
}

impl SemMorphism {
    pub fn identity(fam: &FinPointedFam) -> SemMorphism {
        SemMorphism {
            dn: fam.base.iter().map(|g| (g.clone(), g.clone())).collect(),
            up: fam.fibre.iter().flat_map(|(g, es)| es.iter().map(move |e| ((g.clone(), e.clone()), e.clone()))).collect(),
        }
    }

    /// `Γ → ♮Γ`: the identity on the base, everything to the point.
    pub fn unit(fam: &FinPointedFam) -> SemMorphism {
        SemMorphism {
            dn: fam.base.iter().map(|g| (g.clone(), g.clone())).collect(),
            up: fam.fibre.iter().flat_map(|(g, es)| es.iter().map(move |e| ((g.clone(), e.clone()), Val::Star))).collect(),
        }
    }

    /// `♮Γ → Γ`: the identity on the base, the point to the chosen point.
    pub fn counit(fam: &FinPointedFam) -> SemMorphism {
        SemMorphism {
            dn: fam.base.iter().map(|g| (g.clone(), g.clone())).collect(),
            up: fam.point.iter().map(|(g, p)| ((g.clone(), Val::Star), p.clone())).collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SemMorphism) -> SemMorphism {
        SemMorphism {
            dn: self.dn.iter().map(|(g, h)| (g.clone(), next.dn[h].clone())).collect(),
            up: self.up.iter().map(|((g, e), e2)| ((g.clone(), e.clone()), next.up[&(self.dn[g].clone(), e2.clone())].clone())).collect(),
        }
    }

    /// Whether this is a map `from → to` that sends points to points.
    pub fn is_pointed_map(&self, from: &FinPointedFam, to: &FinPointedFam) -> bool {
        from.base.iter().all(|g| {
            let Some(h) = self.dn.get(g) else { return false };
            from.fibre[g].iter().all(|e| self.up.get(&(g.clone(), e.clone())).is_some_and(|v| to.fibre[h].contains(v)))
                && self.up.get(&(g.clone(), from.point[g].clone())) == Some(&to.point[h])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;

    fn pb_pb() -> RcTerm {
        Term::pi("_", Term::bool(), Term::bool())
    }

    #[test]
    fn empty_context() {
        let fam = eval_ctx(&[]).unwrap().family();
        assert_eq!(fam.base, vec![Val::Star]);
        assert_eq!(fam.fibre[&Val::Star], vec![Val::Star]);
        assert_eq!(fam.point[&Val::Star], Val::Star);
    }

    #[test]
    fn one_boolean() {
        let fam = eval_ctx(&[Entry::plain("x", Term::bool())]).unwrap().family();
        let g = Val::pair(Val::Star, Val::Star);
        assert_eq!(fam.base, vec![g.clone()]);
        assert_eq!(fam.fibre[&g].len(), 2);
        assert_eq!(fam.point[&g], Val::pair(Val::Star, Val::Bool(true)));

        let marked = eval_ctx(&[Entry::marked("x", Term::bool())]).unwrap().family();
        assert_eq!(marked.fibre[&g], vec![Val::pair(Val::Star, Val::Star)]);
    }

    #[test]
    fn natural_type_has_trivial_fibres() {
        let ctx = eval_ctx(&[]).unwrap();
        let t = eval_type(&ctx, &Term::nat(Term::bool())).unwrap();
        assert_eq!(t.base[&Val::Star], vec![Val::Star]);
        assert!(t.fibre.values().all(|f| f == &vec![Val::Star]));
        let t = eval_type(&ctx, &Term::nat(pb_pb())).unwrap();
        assert_eq!(t.base[&Val::Star].len(), 2);
        assert!(t.fibre.values().all(|f| f.len() == 1));
    }

    #[test]
    fn products_of_booleans() {
        let ctx = eval_ctx(&[]).unwrap();
        let t = eval_type(&ctx, &Term::sig("_", Term::bool(), Term::bool())).unwrap();
        let ab = Val::pair(Val::Star, Val::Star);
        assert_eq!(t.base[&Val::Star], vec![ab.clone()]);
        assert_eq!(t.fibre[&(Val::Star, ab.clone(), Val::Star)].len(), 4);
        assert_eq!(t.point[&(Val::Star, ab)], Val::pair(Val::Bool(true), Val::Bool(true)));
    }

    #[test]
    fn universe_is_outside_the_fragment() {
        let ctx = eval_ctx(&[]).unwrap();
        assert!(matches!(eval_type(&ctx, &Term::univ()), Err(ModelError::Fragment(_))));
        assert!(matches!(eval_ctx(&[Entry::plain("A", Term::univ())]), Err(ModelError::Fragment(_))));
    }

    #[test]
    fn zeroing_reads_the_point() {
        let es = [Entry::plain("x", Term::bool())];
        let (x, zx) = (Term::var("x"), Term::mvar("x"));
        assert_eq!(oracle_check(&es, &x, &zx, &Term::bool()).unwrap(), Verdict::Unequal);
        let nat = Term::nat(Term::bool());
        let ux = Term::up(zx.clone(), Term::bool());
        assert_eq!(oracle_check(&es, &ux, &ux, &nat).unwrap(), Verdict::Equal);
        let beta = Term::dn(ux, Term::bool());
        assert_eq!(oracle_check(&es, &beta, &zx, &Term::bool()).unwrap(), Verdict::Equal);
    }

    #[test]
    fn unit_then_counit_on_natural_context_is_identity() {
        let fam = eval_ctx(&[Entry::plain("x", Term::bool()), Entry::plain("f", pb_pb())]).unwrap().family();
        let nat = fam.natural();
        let round = SemMorphism::counit(&fam).then(&SemMorphism::unit(&fam));
        assert_eq!(round, SemMorphism::identity(&nat));
        assert!(SemMorphism::unit(&fam).is_pointed_map(&fam, &nat));
        assert!(SemMorphism::counit(&fam).is_pointed_map(&nat, &fam));
    }
}
