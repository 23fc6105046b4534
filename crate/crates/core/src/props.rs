//! Generative property suites for the zeroing lemmas, the admissible rules,
//! printing round-trips and the finite model.
//!
//! Instance `i` of a suite draws from its own stream (see [`rng_for`]) at
//! size `i % (MAX_SIZE + 1)`, so a run is reproducible from the seed alone
//! and does not depend on scheduling. Instances are evaluated in batches,
//! in parallel when the `parallel` feature is on, and their outcomes are
//! consumed in index order. A failure is shrunk by searching for another
//! failing instance at smaller sizes.

use std::ops::Range;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::finmodel::{oracle_check, with_limit, ModelError, Verdict};
use crate::gen::{rng_for, RawGen, TypedGen};
use crate::kernel::{zeroed_middle, Checker, Config, Env, Judgement};
use crate::surface::{parse_term, pretty, Elaborator};
use crate::syntax::{
    alpha_eq, scope_of, substitute, zero_all, zero_context, zero_context_telescope, zero_telescope, zero_term,
    Entry, Mark, Name, RawContext, RcTerm, Term,
};

pub const MAX_SIZE: u32 = 4;
const SHRINK_TRIES: u64 = 200;
/// Set-size limit for generated model checks; bigger instances are discarded.
const MODEL_LIMIT: usize = 1 << 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The generator gave up; the instance does not count.
    Discard,
    Fail(String),
}

type Body = fn(&mut ChaCha8Rng, u32, Config) -> Outcome;

#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub default_count: usize,
    body: Body,
}

impl Suite {
    pub fn run_one(&self, seed: u64, index: u64, size: u32, config: Config) -> Outcome {
        let mut rng = rng_for(seed, self.name, index);
        match catch_unwind(AssertUnwindSafe(|| (self.body)(&mut rng, size, config))) {
            Ok(o) => o,
            Err(p) => {
                let msg = p
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| p.downcast_ref::<String>().cloned())
                    .unwrap_or_default();
                Outcome::Fail(format!("panicked: {msg}"))
            }
        }
    }
}

const SYNTAX: usize = 10_000;
const TYPED: usize = 500;

pub fn suites() -> Vec<Suite> {
    let s = |name, default_count, body| Suite { name, default_count, body };
    vec![
        s("zc-idempotent", SYNTAX, zc_idempotent as Body),
        s("zc-split", SYNTAX, zc_split),
        s("zero-prefix", SYNTAX, zero_prefix),
        s("zero-weaken", SYNTAX, zero_weaken),
        s("zero-subst", SYNTAX, zero_subst),
        s("dull-fixpoint", SYNTAX, dull_fixpoint),
        s("pre-counit", TYPED, pre_counit),
        s("pre-unit", TYPED, pre_unit),
        s("dull-subst", TYPED, dull_subst),
        s("subst", TYPED, subst),
        s("presupposition", TYPED, presupposition),
        s("natural-laws", TYPED, natural_laws),
        s("roundtrip", SYNTAX, roundtrip),
        s("model-soundness", TYPED, model_soundness),
    ]
}

pub fn suite(name: &str) -> Option<Suite> {
    suites().into_iter().find(|s| s.name == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Parallel,
    Sequential,
}

impl Default for Mode {
    fn default() -> Mode {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Overrides every suite's default instance count.
    pub count: Option<usize>,
    pub mode: Mode,
    pub config: Config,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub index: u64,
    pub size: u32,
    /// Size of the instance that first failed, before shrinking.
    pub original_size: u32,
    pub dump: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub target: usize,
    pub passed: usize,
    pub discarded: usize,
    pub failure: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none() && self.passed >= self.target
    }
}

fn size_of(index: u64) -> u32 {
    (index % u64::from(MAX_SIZE + 1)) as u32
}

fn map_range<T: Send>(mode: Mode, range: Range<u64>, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(f).collect()
        }
        _ => range.map(f).collect(),
    }
}

pub fn run_suite(suite: &Suite, opts: &RunOptions) -> SuiteReport {
    let target = opts.count.unwrap_or(suite.default_count);
    let cap = target as u64 * 20 + 100;
    let mut report = SuiteReport { name: suite.name, target, passed: 0, discarded: 0, failure: None };
    let mut next = 0u64;
    while report.passed < target && next < cap {
        let need = (target - report.passed) as u64;
        let end = (next + need + need / 4 + 8).min(cap);
        let outcomes = map_range(opts.mode, next..end, |i| suite.run_one(opts.seed, i, size_of(i), opts.config));
        for (i, outcome) in (next..end).zip(outcomes) {
            match outcome {
                Outcome::Pass => report.passed += 1,
                Outcome::Discard => report.discarded += 1,
                Outcome::Fail(dump) => {
                    report.failure = Some(shrink(suite, opts, i, dump));
                    return report;
                }
            }
            if report.passed == target {
                return report;
            }
        }
        next = end;
    }
    report
}

/// Looks for a failing instance at each smaller size in turn, keeping the
/// original when none turns up.
fn shrink(suite: &Suite, opts: &RunOptions, index: u64, dump: String) -> Counterexample {
    let size = size_of(index);
    let seed = opts.seed ^ 0x5348_5249_4e4b;
    for s in 0..size {
        let found = map_range(opts.mode, 0..SHRINK_TRIES, |j| {
            let i = u64::from(s) << 32 | j;
            match suite.run_one(seed, i, s, opts.config) {
                Outcome::Fail(d) => Some((i, d)),
                _ => None,
            }
        });
        if let Some((i, d)) = found.into_iter().flatten().next() {
            return Counterexample { index: i, size: s, original_size: size, dump: d };
        }
    }
    Counterexample { index, size, original_size: size, dump }
}

pub fn run_all(opts: &RunOptions) -> Vec<SuiteReport> {
    suites().iter().map(|s| run_suite(s, opts)).collect()
}

// Dumps.

fn show_entries(entries: &[Entry]) -> String {
    if entries.is_empty() {
        return ".".into();
    }
    entries
        .iter()
        .map(|e| match e.mark {
            Mark::Plain => format!("{} : {}", e.name, e.ty),
            Mark::Marked => format!("~{} :: {}", e.name, e.ty),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn show(j: &Judgement) -> String {
    format!("{} |- {} : {}", show_entries(&j.ctx.entries), j.term, j.ty)
}

fn names(ns: &[Name]) -> String {
    format!("{{{}}}", ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", "))
}

fn expect(ok: bool, dump: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(dump())
    }
}

fn cat(parts: &[&[Name]]) -> Vec<Name> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

// Syntactic suites. Raw syntax is generated without any typing discipline.

fn zc_idempotent(rng: &mut ChaCha8Rng, size: u32, _: Config) -> Outcome {
    let scoped = rng.gen_bool(0.5);
    let mut g = RawGen { rng, scoped };
    let n = g.rng.gen_range(0..=size as usize + 1);
    let ctx = g.context(n, size);
    let once = zero_context(&ctx);
    let twice = zero_context(&once);
    let tele = zero_context_telescope(&ctx.as_telescope());
    expect(
        twice.alpha_eq(&once)
            && once.entries.iter().all(Entry::is_marked)
            && zero_context_telescope(&tele).alpha_eq(&tele),
        || format!("context {}\nzc once  {}\nzc twice {}", show_entries(&ctx.entries), show_entries(&once.entries), show_entries(&twice.entries)),
    )
}

fn zc_split(rng: &mut ChaCha8Rng, size: u32, _: Config) -> Outcome {
    let mut g = RawGen { rng, scoped: true };
    let lens: Vec<usize> = (0..3).map(|_| g.rng.gen_range(0..=size as usize)).collect();
    let psi = g.context(lens[0], size);
    let gamma = g.telescope(&psi.dom(), lens[1], size);
    let delta = g.telescope(&cat(&[&psi.dom(), &gamma.dom()]), lens[2], size);
    let lhs = zero_context(&psi.concat(&gamma).concat(&delta));
    let rhs = zero_context(&psi.concat(&zero_context_telescope(&gamma)).concat(&zero_telescope(&delta, &gamma.scope())));
    expect(lhs.alpha_eq(&rhs), || {
        format!(
            "psi   {}\ngamma {}\ndelta {}\nlhs   {}\nrhs   {}",
            show_entries(&psi.entries),
            show_entries(&gamma.entries),
            show_entries(&delta.entries),
            show_entries(&lhs.entries),
            show_entries(&rhs.entries)
        )
    })
}

fn zero_prefix(rng: &mut ChaCha8Rng, size: u32, _: Config) -> Outcome {
    let scoped = rng.gen_bool(0.5);
    let mut g = RawGen { rng, scoped };
    let k: Vec<usize> = (0..3).map(|_| g.rng.gen_range(0..=size as usize + 1)).collect();
    let gamma = g.names(k[0], &[]);
    let delta = g.names(k[1], &gamma);
    let rest = g.names(k[2], &cat(&[&gamma, &delta]));
    let a = g.term(&cat(&[&gamma, &delta, &rest]), size);
    let tele = g.telescope(&cat(&[&gamma, &delta]), k[2], size);

    let (small, big) = (scope_of(&gamma), scope_of(&cat(&[&gamma, &delta])));
    let whole = zero_term(&a, &big);
    let terms_ok = alpha_eq(&zero_term(&zero_term(&a, &small), &big), &whole)
        && alpha_eq(&zero_term(&whole, &small), &whole);
    let twhole = zero_telescope(&tele, &big);
    let teles_ok = zero_telescope(&zero_telescope(&tele, &small), &big).alpha_eq(&twhole)
        && zero_telescope(&twhole, &small).alpha_eq(&twhole);
    expect(terms_ok && teles_ok, || {
        format!(
            "gamma {} delta {}\nterm {a}\ntelescope {}",
            names(&gamma),
            names(&delta),
            show_entries(&tele.entries)
        )
    })
}

fn zero_weaken(rng: &mut ChaCha8Rng, size: u32, _: Config) -> Outcome {
    let mut g = RawGen { rng, scoped: true };
    let k: Vec<usize> = (0..2).map(|_| g.rng.gen_range(0..=size as usize + 1)).collect();
    let gamma = g.names(k[0], &[]);
    let delta = g.names(k[1], &gamma);
    let a = g.term(&gamma, size);
    let lhs = zero_term(&a, &scope_of(&gamma));
    let rhs = zero_term(&a, &scope_of(&cat(&[&gamma, &delta])));
    expect(alpha_eq(&lhs, &rhs), || format!("gamma {} delta {}\nterm {a}\n{lhs}\n{rhs}", names(&gamma), names(&delta)))
}

fn zero_subst(rng: &mut ChaCha8Rng, size: u32, _: Config) -> Outcome {
    let mut g = RawGen { rng, scoped: true };
    let k: Vec<usize> = (0..3).map(|_| g.rng.gen_range(0..=size as usize + 1)).collect();
    let gamma = g.names(k[0], &[]);
    let gamma2 = g.names(k[1], &gamma);
    let xs = g.names(1, &cat(&[&gamma, &gamma2]));
    let delta = g.names(k[2], &cat(&[&gamma, &gamma2, &xs]));
    let x = xs[0].clone();
    let sg = scope_of(&gamma);

    // (b[a/x])^{0γ} = b^{0γ}[a^{0γ}/x], with a over γ,γ' and b over γ,γ',x,δ.
    let a = g.term(&cat(&[&gamma, &gamma2]), size);
    let b = g.term(&cat(&[&gamma, &gamma2, &xs, &delta]), size);
    let first = alpha_eq(&zero_term(&substitute(&b, &a, &x), &sg), &substitute(&zero_term(&b, &sg), &zero_term(&a, &sg), &x));

    // (b[a/x])^{0(γ,δ)} = b^{0(γ,x,δ)}[a^{0γ}/x] = b^{0(γ,x,δ)}[a/x], with a
    // over γ and b over γ,x,δ,δ'; here γ' plays δ'.
    let a = g.term(&gamma, size);
    let b = g.term(&cat(&[&gamma, &xs, &delta, &gamma2]), size);
    let lhs = zero_term(&substitute(&b, &a, &x), &scope_of(&cat(&[&gamma, &delta])));
    let bz = zero_term(&b, &scope_of(&cat(&[&gamma, &xs, &delta])));
    let mid = substitute(&bz, &zero_term(&a, &sg), &x);
    let right = substitute(&bz, &a, &x);
    let second = alpha_eq(&lhs, &mid) && alpha_eq(&mid, &right);

    expect(first && second, || {
        format!(
            "gamma {} gamma' {} x {x} delta {}\na {a}\nb {b}\nfirst law {first}, second law {second}",
            names(&gamma),
            names(&gamma2),
            names(&delta)
        )
    })
}

// Typed suites. Judgements come from forward construction and are re-checked
// before the property is tested, so a generator bug shows up as a failure
// rather than a vacuous pass.

fn typed<'a>(rng: &'a mut ChaCha8Rng, checker: &'a Checker) -> TypedGen<'a> {
    TypedGen { rng, checker, fragment: false }
}

fn premise(checker: &Checker, j: &Judgement) -> Result<(), Outcome> {
    checker
        .recheck(j)
        .map_err(|d| Outcome::Fail(format!("generated premise does not check: {}\n{}", d.render(), show(j))))
}

macro_rules! some {
    ($e:expr) => {
        match $e {
            Some(v) => v,
            None => return Outcome::Discard,
        }
    };
}

macro_rules! pass {
    ($e:expr) => {
        if let Err(o) = $e {
            return o;
        }
    };
}

fn dull_fixpoint(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    let checker = Checker::new(config);
    let mut g = typed(rng, &checker);
    let n = g.rng.gen_range(0..=size as usize);
    let m = g.rng.gen_range(0..=2);
    let gamma = g.env(n, 2);
    let inner = g.extend_env(&gamma.zeroed(), m, 1);
    let j = some!(g.judgement_in(&inner, size));
    pass!(premise(&checker, &j));
    let sg = gamma.scope();
    expect(alpha_eq(&zero_term(&j.term, &sg), &j.term) && alpha_eq(&zero_term(&j.ty, &sg), &j.ty), || {
        format!("prefix {}\n{}", names(&gamma.ctx().dom()), show(&j))
    })
}

fn pre_counit(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    let checker = Checker::new(config);
    let mut g = typed(rng, &checker);
    let (n, m) = (g.rng.gen_range(0..=size as usize), g.rng.gen_range(0..=2));
    let gamma = g.env(n, 2);
    let whole = g.extend_env(&gamma, m, 1);
    let j = some!(g.judgement_in(&whole, size));
    pass!(premise(&checker, &j));
    let (_, delta) = j.ctx.split_at(gamma.ctx().len());
    let out = checker.admissible_pre_counit(&gamma, &delta, &j.term, &j.ty);
    let res = checker.recheck(&out);
    expect(res.is_ok(), || format!("premise    {}\nconclusion {}\n{}", show(&j), show(&out), res.unwrap_err().render()))
}

fn pre_unit(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    let checker = Checker::new(config);
    let mut g = typed(rng, &checker);
    let lens: Vec<usize> = (0..3).map(|_| g.rng.gen_range(0..=size as usize / 2 + 1)).collect();
    let psi = g.env(lens[0], 2);
    let psi_gamma = g.extend_env(&psi, lens[1], 1);
    let (psi_ctx, gamma) = psi_gamma.ctx().split_at(psi.ctx().len());
    let gamma = RawContext::new(gamma.entries);
    let middle = zeroed_middle(&psi_ctx, &gamma);
    let middle_env = match checker.check_ctx(&middle) {
        Ok(e) => e,
        Err(d) => return Outcome::Fail(format!("zeroed middle is ill formed: {}\n{}", d.render(), show_entries(&middle.entries))),
    };
    let whole = g.extend_env(&middle_env, lens[2], 1);
    let j = some!(g.judgement_in(&whole, size));
    pass!(premise(&checker, &j));
    let (_, delta) = j.ctx.split_at(middle.len());
    let out = match checker.admissible_pre_unit(&psi_ctx, &gamma, &delta, &j.term, &j.ty) {
        Ok(out) => out,
        Err(d) => return Outcome::Fail(format!("pre-unit refused its premise: {}\n{}", d.render(), show(&j))),
    };
    let res = checker.recheck(&out);
    let same = alpha_eq(&out.term, &j.term) && alpha_eq(&out.ty, &j.ty);
    expect(res.is_ok() && same, || {
        format!(
            "premise    {}\nconclusion {}\nterm unchanged: {same}\n{}",
            show(&j),
            show(&out),
            res.err().map(|d| d.render()).unwrap_or_default()
        )
    })
}

fn subst_case(rng: &mut ChaCha8Rng, size: u32, config: Config, mark: Mark) -> Outcome {
    let checker = Checker::new(config);
    let mut g = typed(rng, &checker);
    let (n, m) = (g.rng.gen_range(0..=size as usize), g.rng.gen_range(0..=2));
    let gamma = g.env(n, 2);
    let at = if mark == Mark::Marked { gamma.zeroed() } else { gamma.clone() };
    let a_ty = g.ty(&at, 2);
    let x = gamma.fresh("x");
    let whole = g.extend_env(&gamma.extend(Entry { name: x.clone(), mark, ty: a_ty.clone() }), m, 1);
    let j = some!(g.judgement_in(&whole, size));
    pass!(premise(&checker, &j));
    let a = some!(g.check(&at, &a_ty, size));
    let k = gamma.ctx().len();
    let out = match mark {
        Mark::Plain => checker.admissible_subst(&j, k, &a),
        Mark::Marked => checker.dull_subst(&j, k, &a),
    };
    let out = match out {
        Ok(out) => out,
        Err(d) => return Outcome::Fail(format!("substituend rejected: {}\n{}\na = {a}", d.render(), show(&j))),
    };
    let res = checker.recheck(&out);
    // Only marked uses of a marked variable can occur, so substituting the
    // zeroed substituend changes nothing.
    let insensitive = mark == Mark::Plain || alpha_eq(&substitute(&j.term, &zero_all(&a), &x), &out.term);
    expect(res.is_ok() && insensitive, || {
        format!(
            "premise    {}\nsubstituend {x} := {a}\nconclusion {}\nzeroing-insensitive: {insensitive}\n{}",
            show(&j),
            show(&out),
            res.err().map(|d| d.render()).unwrap_or_default()
        )
    })
}

fn dull_subst(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    subst_case(rng, size, config, Mark::Marked)
}

fn subst(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    subst_case(rng, size, config, Mark::Plain)
}

fn presupposition(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    let checker = Checker::new(config);
    let mut g = typed(rng, &checker);
    let n = g.rng.gen_range(0..=size as usize + 1);
    let env = g.env(n, 2);
    let j = some!(g.judgement_in(&env, size));
    let inferred = match checker.infer_term(&env, &j.term) {
        Ok(t) => t,
        Err(d) => return Outcome::Fail(format!("{}\n{}", d.render(), show(&j))),
    };
    let well_formed = checker.check_type(&env, &inferred);
    let agrees = checker.convert_types(&env, &inferred, &j.ty);
    expect(well_formed.is_ok() && matches!(agrees, Ok(true)), || {
        format!("{}\ninferred {inferred}\nwell formed: {:?}\nagrees: {:?}", show(&j), well_formed.err().map(|d| d.render()), agrees.map_err(|d| d.render()))
    })
}

fn natural_laws(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    let checker = Checker::new(config);
    let mut g = typed(rng, &checker);
    let n = g.rng.gen_range(0..=size as usize + 1);
    let env = g.env(n, 2);
    let dull = env.zeroed();
    let a0 = g.ty(&dull, 2);
    let nat = Term::nat(a0.clone());
    let a = some!(g.check(&dull, &a0, size));
    let v = some!(g.check(&env, &nat, size));
    let beta = (Term::dn(Term::up(a.clone(), a0.clone()), a0.clone()), a.clone(), a0.clone());
    let zv = zero_term(&v, &env.scope());
    let eta = (v.clone(), Term::up(Term::dn(zv.clone(), a0.clone()), a0.clone()), nat.clone());
    let zero = (v.clone(), zv, nat.clone());
    for (label, (l, r, ty)) in [("beta", beta), ("eta", eta), ("zero-in-natural", zero)] {
        let typed = checker.check_term(&env, &l, &ty).and_then(|_| checker.check_term(&env, &r, &ty));
        let conv = typed.and_then(|_| checker.convert(&env, &l, &r, &ty));
        if !matches!(conv, Ok(true)) {
            return Outcome::Fail(format!(
                "{label}: {} |- {l} == {r} : {ty}\n{:?}",
                show_entries(env.entries()),
                conv.map_err(|d| d.render())
            ));
        }
    }
    Outcome::Pass
}

fn roundtrip(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    let checker = Checker::new(config);
    let mut g = typed(rng, &checker);
    let n = g.rng.gen_range(0..=size as usize);
    let env = g.env(n, 1);
    let j = some!(g.judgement_in(&env, size));
    roundtrip_at(&checker, &env, &j.term, &j.ty)
}

/// Prints `t`, parses it back and elaborates it against `ty` in `env`.
pub fn roundtrip_at(checker: &Checker, env: &Env, t: &RcTerm, ty: &RcTerm) -> Outcome {
    let src = pretty(t);
    let back = parse_term(&src).and_then(|e| Elaborator::over(checker, env.clone()).check(&e, ty));
    match back {
        Ok(back) => expect(alpha_eq(&back, t), || {
            format!("{}\nprinted  {src}\nparsed   {back}\nat type  {ty}\noriginal {t:?}\nback     {back:?}", show_entries(env.entries()))
        }),
        Err(d) => Outcome::Fail(format!("{}\nprinted {src}\n{}", show_entries(env.entries()), d.render())),
    }
}

fn model_soundness(rng: &mut ChaCha8Rng, size: u32, config: Config) -> Outcome {
    let checker = Checker::new(config);
    let mut g = TypedGen { rng, checker: &checker, fragment: true };
    let n = g.rng.gen_range(0..=size.min(2) as usize);
    let env = g.env(n, 1);
    let j = some!(g.judgement_in(&env, size.min(3)));
    pass!(premise(&checker, &j));
    let nf = match checker.normalize(&env, &j.term) {
        Ok(nf) => nf,
        Err(_) => return Outcome::Discard,
    };
    match with_limit(MODEL_LIMIT, || oracle_check(env.entries(), &j.term, &nf, &j.ty)) {
        Ok(Verdict::Equal) => Outcome::Pass,
        Ok(Verdict::Skipped(_)) | Err(ModelError::TooLarge) | Err(ModelError::Fragment(_)) => Outcome::Discard,
        Ok(Verdict::Unequal) => Outcome::Fail(format!("the model separates a term from its normal form {nf}\n{}", show(&j))),
        Err(e) => Outcome::Fail(format!("{e}\n{}", show(&j))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Telescope;

    fn quick(name: &str, count: usize) -> SuiteReport {
        let opts = RunOptions { count: Some(count), ..RunOptions::default() };
        run_suite(&suite(name).unwrap(), &opts)
    }

    #[test]
    fn every_suite_passes_a_small_run() {
        for s in suites() {
            let r = quick(s.name, 40);
            assert!(r.ok(), "{}: {:?}", s.name, r);
        }
    }

    #[test]
    fn modes_agree() {
        for name in ["zc-split", "pre-unit"] {
            let s = suite(name).unwrap();
            let base = RunOptions { seed: 7, count: Some(60), ..RunOptions::default() };
            let par = run_suite(&s, &RunOptions { mode: Mode::Parallel, ..base });
            let seq = run_suite(&s, &RunOptions { mode: Mode::Sequential, ..base });
            assert_eq!(par, seq);
        }
    }

    fn always_fails(rng: &mut ChaCha8Rng, size: u32, _: Config) -> Outcome {
        let x: u8 = rng.gen();
        Outcome::Fail(format!("size {size} draw {x}"))
    }

    fn panics(_: &mut ChaCha8Rng, _: u32, _: Config) -> Outcome {
        panic!("boom")
    }

    #[test]
    fn failures_shrink_to_size_zero() {
        let s = Suite { name: "fails", default_count: 10, body: always_fails };
        let opts = RunOptions { seed: 1, ..RunOptions::default() };
        // Index 0 has size 0 already; start the search from a bigger one.
        let c = shrink(&s, &opts, 3, "original".into());
        assert_eq!((c.size, c.original_size), (0, 3));
        assert!(c.dump.starts_with("size 0"));
        let r = run_suite(&s, &opts);
        assert!(!r.ok());
        assert_eq!(r.passed, 0);
    }

    #[test]
    fn panics_become_failures() {
        let s = Suite { name: "panics", default_count: 1, body: panics };
        let r = run_suite(&s, &RunOptions::default());
        assert!(r.failure.unwrap().dump.contains("boom"));
    }

    #[test]
    fn split_lemma_on_a_fixed_instance() {
        // Ψ = (A : Type), Γ = (x : A), Δ = (y : Id A x x)
        let psi = RawContext::new(vec![Entry::plain("A", Term::univ())]);
        let gamma = Telescope::new(vec![Entry::plain("x", Term::var("A"))]);
        let delta = Telescope::new(vec![Entry::plain("y", Term::id(Term::var("A"), Term::var("x"), Term::var("x")))]);
        let lhs = zero_context(&psi.concat(&gamma).concat(&delta));
        let rhs = zero_context(&psi.concat(&zero_context_telescope(&gamma)).concat(&zero_telescope(&delta, &gamma.scope())));
        assert!(lhs.alpha_eq(&rhs));
        let expected = RawContext::new(vec![
            Entry::marked("A", Term::univ()),
            Entry::marked("x", Term::mvar("A")),
            Entry::marked("y", Term::id(Term::mvar("A"), Term::mvar("x"), Term::mvar("x"))),
        ]);
        assert!(lhs.alpha_eq(&expected));
    }
}
