use super::*;
use crate::syntax::{name, zero_term, Entry, RawContext, Telescope, Term};

fn ctx(entries: Vec<Entry>) -> RawContext {
    RawContext::new(entries)
}

fn a_ctx() -> Vec<Entry> {
    vec![Entry::plain("A", Term::univ())]
}

fn env_of(entries: Vec<Entry>) -> Env {
    Checker::default().check_ctx(&ctx(entries)).expect("context checks")
}

#[test]
fn empty_context_checks() {
    assert!(Checker::default().check_ctx(&RawContext::default()).is_ok());
}

#[test]
fn marked_entry_type_lives_in_zeroed_prefix() {
    let mut es = a_ctx();
    es.push(Entry::marked("x", Term::mvar("A")));
    assert!(Checker::default().check_ctx(&ctx(es)).is_ok());

    let mut bad = a_ctx();
    bad.push(Entry::marked("x", Term::var("A")));
    let d = Checker::default().check_ctx(&ctx(bad)).unwrap_err();
    assert_eq!(d.rule, Rule::CtxExtZero);
}

#[test]
fn unbound_type_in_context_is_rejected() {
    let es = vec![Entry::plain("x", Term::var("A")), Entry::plain("y", Term::var("A"))];
    let d = Checker::default().check_ctx(&ctx(es)).unwrap_err();
    assert!(d.message.contains("scope"), "{}", d.render());
}

#[test]
fn duplicate_names_are_rejected() {
    let es = vec![Entry::plain("A", Term::univ()), Entry::plain("A", Term::univ())];
    assert_eq!(Checker::default().check_ctx(&ctx(es)).unwrap_err().rule, Rule::CtxExt);
}

#[test]
fn variable_rules() {
    let c = Checker::default();
    let mut es = a_ctx();
    es.push(Entry::plain("x", Term::var("A")));
    es.push(Entry::marked("m", Term::mvar("A")));
    let env = env_of(es);
    assert_eq!(c.infer_var(&env, &Term::var("x")).unwrap(), Term::var("A"));
    assert_eq!(c.infer_var(&env, &Term::mvar("m")).unwrap(), Term::mvar("A"));
    // var-roundtrip zeroes the type over the whole scope.
    assert_eq!(c.infer_var(&env, &Term::mvar("x")).unwrap(), Term::mvar("A"));
    assert_eq!(c.infer_var(&env, &Term::var("m")).unwrap_err().rule, Rule::VarZero);
    assert_eq!(c.infer_var(&env, &Term::var("q")).unwrap_err().rule, Rule::Scope);
}

#[test]
fn var_roundtrip_on_dependent_type() {
    // f : F, x : G(f) ⊢ ~x : G(~f)
    let c = Checker::default();
    let es = vec![
        Entry::plain("F", Term::univ()),
        Entry::plain("G", Term::pi("_", Term::var("F"), Term::univ())),
        Entry::plain("f", Term::var("F")),
        Entry::plain("x", Term::app(Term::var("G"), Term::var("f"), Term::var("F"), "_", Term::univ())),
    ];
    let env = env_of(es);
    let expected = Term::app(Term::mvar("G"), Term::mvar("f"), Term::mvar("F"), "_", Term::univ());
    let got = c.infer_var(&env, &Term::mvar("x")).unwrap();
    assert_eq!(got, expected);
    let scope = env.scope();
    let g_f = Term::app(Term::var("G"), Term::var("f"), Term::var("F"), "_", Term::univ());
    assert_eq!(got, zero_term(&g_f, &scope));
}

#[test]
fn natural_formation() {
    let c = Checker::default();
    let mut es = a_ctx();
    es.push(Entry::plain("x", Term::var("A")));
    let env = env_of(es);
    assert!(c.check_type(&env, &Term::nat(Term::mvar("A"))).is_ok());
    let d = c.check_type(&env, &Term::nat(Term::var("A"))).unwrap_err();
    assert_eq!(d.rule, Rule::NatForm);
    assert!(c.check_type(&Env::empty(), &Term::pi("x", Term::unit(), Term::unit())).is_ok());
}

#[test]
fn natural_intro_and_elim() {
    let c = Checker::default();
    let mut es = a_ctx();
    es.push(Entry::marked("m", Term::mvar("A")));
    es.push(Entry::plain("x", Term::var("A")));
    let env = env_of(es);
    let za = Term::mvar("A");

    let intro = Term::up(Term::mvar("m"), za.clone());
    assert!(c.check_term(&env, &intro, &Term::nat(za.clone())).is_ok());

    let roundtrip = Term::dn(Term::up(Term::mvar("x"), za.clone()), za.clone());
    assert!(c.check_term(&env, &roundtrip, &za).is_ok());

    let bad = Term::up(Term::var("x"), za.clone());
    assert_eq!(c.infer_term(&env, &bad).unwrap_err().rule, Rule::NatIntro);

    let bad_annotation = Term::dn(Term::up(Term::mvar("x"), za.clone()), Term::var("A"));
    assert_eq!(c.infer_term(&env, &bad_annotation).unwrap_err().rule, Rule::NatElim);
}

#[test]
fn whnf_examples() {
    let c = Checker::default();
    let za = Term::mvar("A");
    let beta = Term::dn(Term::up(Term::mvar("x"), za.clone()), za.clone());
    assert_eq!(c.whnf(&beta).unwrap(), Term::mvar("x"));

    let id = Term::lam("x", Term::var("A"), Term::var("x"), Term::var("A"));
    let app = Term::app(id, Term::var("t"), Term::var("A"), "x", Term::var("A"));
    assert_eq!(c.whnf(&app).unwrap(), Term::var("t"));

    let stuck = Term::app(Term::mvar("f"), Term::var("t"), Term::var("A"), "x", Term::var("A"));
    assert_eq!(c.whnf(&stuck).unwrap(), stuck);
}

#[test]
fn conversion_natural_eta_and_zero() {
    let c = Checker::default();
    let za = Term::mvar("A");
    let nat = Term::nat(za.clone());
    let mut es = a_ctx();
    es.push(Entry::plain("n", nat.clone()));
    let env = env_of(es);
    let n = Term::var("n");
    let eta = Term::up(Term::dn(Term::mvar("n"), za.clone()), za.clone());
    assert!(c.convert(&env, &n, &eta, &nat).unwrap());
    assert!(c.convert(&env, &n, &Term::mvar("n"), &nat).unwrap());
}

#[test]
fn conversion_alpha_at_pi() {
    let c = Checker::default();
    let env = env_of(a_ctx());
    let a = Term::var("A");
    let l = Term::lam("x", a.clone(), Term::var("x"), a.clone());
    let r = Term::lam("y", a.clone(), Term::var("y"), a.clone());
    assert!(c.convert(&env, &l, &r, &Term::pi("_", a.clone(), a)).unwrap());
}

#[test]
fn distinct_variables_are_not_convertible() {
    let c = Checker::default();
    let mut es = a_ctx();
    es.push(Entry::plain("x", Term::var("A")));
    es.push(Entry::plain("y", Term::var("A")));
    let env = env_of(es);
    assert!(!c.convert(&env, &Term::var("x"), &Term::var("y"), &Term::var("A")).unwrap());
    // x and ~x differ at a type that is not a ♮-type.
    assert!(!c.convert(&env, &Term::var("x"), &Term::mvar("x"), &Term::var("A")).unwrap());
}

#[test]
fn fuel_bounds_reduction() {
    // (λx. x x)(λx. x x) with nonsense annotations; whnf must stop.
    let u = Term::univ();
    let xx = Term::app(Term::var("x"), Term::var("x"), u.clone(), "_", u.clone());
    let w = Term::lam("x", u.clone(), xx, u.clone());
    let omega = Term::app(w.clone(), w, u.clone(), "_", u);
    let c = Checker::new(Config { fuel: 50, ..Config::default() });
    let d = c.whnf(&omega).unwrap_err();
    assert_eq!(d.rule, Rule::Fuel);
    assert_eq!(d.message, "conversion fuel exhausted");
}

#[test]
fn type_in_type_flag() {
    let on = Checker::default();
    assert!(on.infer_term(&Env::empty(), &Term::univ()).is_ok());
    let off = Checker::new(Config { type_in_type: false, ..Config::default() });
    assert_eq!(off.infer_term(&Env::empty(), &Term::univ()).unwrap_err().rule, Rule::Univ);
    assert!(off.check_type(&Env::empty(), &Term::univ()).is_ok());
    let poly = Term::pi("X", Term::univ(), Term::var("X"));
    assert!(off.infer_term(&Env::empty(), &poly).is_err());
}

#[test]
fn pre_counit_examples() {
    let c = Checker::default();
    // x : A ⊢ x : A  ~>  ~x :: zA ⊢ ~x : zA
    let env = env_of(vec![Entry::plain("A", Term::univ()), Entry::plain("x", Term::var("A"))]);
    let j = c.admissible_pre_counit(&env, &Telescope::default(), &Term::var("x"), &Term::var("A"));
    assert_eq!(j.term, Term::mvar("x"));
    assert_eq!(j.ty, Term::mvar("A"));
    assert!(j.ctx.entries.iter().all(|e| e.is_marked()));
    c.recheck(&j).unwrap();

    // Already dull input is a fixpoint.
    let zenv = env.zeroed();
    let j2 = c.admissible_pre_counit(&zenv, &Telescope::default(), &j.term, &j.ty);
    assert!(j2.ctx.alpha_eq(zenv.ctx()));
    assert_eq!(j2.term, j.term);
}

#[test]
fn pre_counit_with_telescope() {
    // F, G, H types; f : F → H ... here f : Π(_:G).H, x : G ⊢ f x : H with Δ = (x : G).
    let c = Checker::default();
    let u = Term::univ();
    let (g, h) = (Term::var("G"), Term::var("H"));
    let env = env_of(vec![
        Entry::plain("G", u.clone()),
        Entry::plain("H", u.clone()),
        Entry::plain("f", Term::pi("_", g.clone(), h.clone())),
    ]);
    let tele = Telescope::new(vec![Entry::plain("x", g.clone())]);
    let app = Term::app(Term::var("f"), Term::var("x"), g.clone(), "_", h.clone());
    let j = c.admissible_pre_counit(&env, &tele, &app, &h);
    let expected = Term::app(Term::mvar("f"), Term::var("x"), Term::mvar("G"), "_", Term::mvar("H"));
    assert_eq!(j.term, expected);
    assert_eq!(j.ctx.entries.last().unwrap(), &Entry::plain("x", Term::mvar("G")));
    c.recheck(&j).unwrap();
}

#[test]
fn pre_unit_keeps_raw_syntax() {
    let c = Checker::default();
    let psi = RawContext::new(vec![Entry::plain("A", Term::univ())]);
    let gamma = RawContext::new(vec![Entry::plain("x", Term::var("A"))]);
    let j = c
        .admissible_pre_unit(&psi, &gamma, &Telescope::default(), &Term::mvar("x"), &Term::mvar("A"))
        .unwrap();
    assert_eq!(j.term, Term::mvar("x"));
    c.recheck(&j).unwrap();

    // Unzeroing a variable in the middle of the context.
    let psi = RawContext::new(vec![Entry::plain("A", Term::univ())]);
    let gamma = RawContext::new(vec![Entry::plain("x", Term::var("A"))]);
    let delta = Telescope::new(vec![Entry::plain("y", Term::var("A"))]);
    let pair_ty = Term::sig("_", Term::mvar("A"), Term::var("A"));
    let pair = Term::Pair {
        fst: Term::mvar("x"),
        snd: Term::var("y"),
        fst_ty: Term::mvar("A"),
        x: name("_"),
        snd_ty: Term::var("A"),
    }
    .rc();
    let j = c.admissible_pre_unit(&psi, &gamma, &delta, &pair, &pair_ty).unwrap();
    c.recheck(&j).unwrap();
}

#[test]
fn dull_substitution_example() {
    let c = Checker::default();
    let za = Term::mvar("A");
    let j = Judgement {
        ctx: RawContext::new(vec![Entry::plain("A", Term::univ()), Entry::plain("a", Term::var("A")), Entry::marked("x", za.clone())]),
        term: Term::up(Term::mvar("x"), za.clone()),
        ty: Term::nat(za.clone()),
    };
    c.recheck(&j).unwrap();
    let out = c.dull_subst(&j, 2, &Term::mvar("a")).unwrap();
    assert_eq!(out.term, Term::up(Term::mvar("a"), za.clone()));
    c.recheck(&out).unwrap();

    // c without x is unchanged.
    let j = Judgement { term: Term::mvar("a"), ty: za.clone(), ..j };
    let out = c.dull_subst(&j, 2, &Term::mvar("a")).unwrap();
    assert_eq!(out.term, Term::mvar("a"));
}

#[test]
fn normalize_natural_beta_and_eta() {
    let c = Checker::default();
    let za = Term::mvar("A");
    let env = env_of(vec![Entry::plain("A", Term::univ()), Entry::plain("x", Term::var("A")), Entry::plain("n", Term::nat(za.clone()))]);
    let beta = Term::dn(Term::up(Term::mvar("x"), za.clone()), za.clone());
    assert_eq!(c.normalize(&env, &beta).unwrap(), Term::mvar("x"));
    let eta = Term::up(Term::dn(Term::mvar("n"), za.clone()), za.clone());
    assert_eq!(c.normalize(&env, &eta).unwrap(), Term::var("n"));
    let lam = Term::lam("y", Term::var("A"), Term::var("y"), Term::var("A"));
    assert_eq!(c.normalize(&env, &lam).unwrap(), lam);
}
