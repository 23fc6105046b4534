use natural_core::finmodel::{
    eval_ctx, eval_term, eval_type, oracle_check, sem_equal, with_limit, ModelError, SemMorphism, Val, Verdict,
};
use natural_core::gen::{rng_for, TypedGen};
use natural_core::kernel::Checker;
use natural_core::syntax::{zero_all, zero_context, Entry, Mark, RawContext, RcTerm, Term};
use proptest::prelude::*;

fn pb_to(cod: RcTerm) -> RcTerm {
    Term::pi("_", Term::bool(), cod)
}

/// Every function from `dom` to `cod`, as lookup tables.
fn tables<T: Clone>(dom: usize, cod: &[T]) -> Vec<Vec<T>> {
    (0..dom).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| cod.iter().map(move |c| [t.clone(), vec![c.clone()]].concat()))
            .collect()
    })
}

// Brute-force enumeration of the function-type clause for booleans, written
// directly from the definition rather than through the evaluator. Booleans
// over the one-point base have fibre {true, false} with point true. A base
// element of A -> B is a base map (forced, both bases are one point) with a
// fibre map sending the point of A to the point of B. A fibre element is any
// map of fibres.
#[test]
fn cardinalities_of_boolean_functions() {
    let bools = [true, false];
    let up_maps = tables(2, &bools);
    let pointed: Vec<_> = up_maps.iter().filter(|m| m[0]).collect();
    assert_eq!((pointed.len(), up_maps.len()), (2, 4));

    let ctx = eval_ctx(&[]).unwrap();
    let t = eval_type(&ctx, &pb_to(Term::bool())).unwrap();
    assert_eq!(t.base[&Val::Star].len(), pointed.len());
    assert!(t.fibre.values().all(|f| f.len() == up_maps.len()));
    assert_eq!(t.fibre.len(), pointed.len());

    // PB -> (PB -> PB): the base map picks one of the two base elements h of
    // PB -> PB. The fibre map goes into the four-element fibre of PB -> PB
    // and must send the point to the point over h, which is h's own fibre
    // map.
    let curried = tables(2, &up_maps);
    let homs = pointed.iter().flat_map(|h| curried.iter().filter(move |m| m[0] == **h)).count();
    let t = eval_type(&ctx, &pb_to(pb_to(Term::bool()))).unwrap();
    assert_eq!(t.base[&Val::Star].len(), homs);
    assert_eq!(homs, 8);
    assert!(t.fibre.values().all(|f| f.len() == curried.len()));
    assert_eq!(curried.len(), 16);
}

#[test]
fn the_two_base_points_of_boolean_functions_differ() {
    let id = Term::lam("a", Term::bool(), Term::var("a"), Term::bool());
    let constant = Term::lam("a", Term::bool(), Term::mvar("a"), Term::bool());
    let ty = pb_to(Term::bool());
    assert_eq!(oracle_check(&[], &id, &constant, &ty).unwrap(), Verdict::Unequal);
    assert_eq!(oracle_check(&[], &id, &id, &ty).unwrap(), Verdict::Equal);

    let ctx = eval_ctx(&[]).unwrap();
    let (x, y) = (eval_term(&ctx, &id, &ty).unwrap(), eval_term(&ctx, &constant, &ty).unwrap());
    assert!(!sem_equal(&x, &y));
    let t = eval_type(&ctx, &ty).unwrap();
    let mut got = vec![x.dn[&Val::Star].clone(), y.dn[&Val::Star].clone()];
    got.sort();
    let mut base = t.base[&Val::Star].clone();
    base.sort();
    assert_eq!(got, base);
}

#[test]
fn natural_eta_holds_in_the_model() {
    let es = [Entry::plain("n", Term::nat(Term::bool()))];
    let n = Term::var("n");
    let eta = Term::up(Term::dn(Term::mvar("n"), Term::bool()), Term::bool());
    assert_eq!(oracle_check(&es, &n, &eta, &Term::nat(Term::bool())).unwrap(), Verdict::Equal);
}

fn fragment_case(seed: u64) -> (Vec<Entry>, RcTerm, Option<(RcTerm, RcTerm)>) {
    let checker = Checker::default();
    let mut rng = rng_for(seed, "finmodel-props", 0);
    let mut g = TypedGen { rng: &mut rng, checker: &checker, fragment: true };
    let env = g.env((seed % 3) as usize, 1);
    let ty = g.ty(&env, 2);
    let tm = g.judgement_in(&env, 2).map(|j| (j.term, j.ty));
    (env.entries().to_vec(), ty, tm)
}

fn small<T>(r: Result<T, ModelError>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(ModelError::TooLarge) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn natural_types_have_singleton_fibres(seed in any::<u64>()) {
        let (es, ty, _) = fragment_case(seed);
        with_limit(1 << 10, || {
            let Some(ctx) = small(eval_ctx(&es)) else { return };
            let Some(plain) = small(eval_type(&ctx, &ty)) else { return };
            let nat = Term::nat(zero_all(&ty));
            let Some(t) = small(eval_type(&ctx, &nat)) else { return };
            assert!(t.fibre.values().all(|f| f.len() == 1), "{ty}");
            assert_eq!(t.base.len(), plain.base.len());
        });
    }

    #[test]
    fn counit_then_unit_is_the_identity(seed in any::<u64>()) {
        let (es, _, _) = fragment_case(seed);
        with_limit(1 << 10, || {
            let Some(ctx) = small(eval_ctx(&es)) else { return };
            let fam = ctx.family();
            let nat = fam.natural();
            assert_eq!(SemMorphism::counit(&fam).then(&SemMorphism::unit(&fam)), SemMorphism::identity(&nat));
            assert!(SemMorphism::unit(&fam).is_pointed_map(&fam, &nat));
            assert!(SemMorphism::counit(&fam).is_pointed_map(&nat, &fam));
            assert!(SemMorphism::identity(&fam).is_pointed_map(&fam, &fam));
        });
    }

    #[test]
    fn marked_entries_have_trivial_fibres(seed in any::<u64>()) {
        let (es, ty, _) = fragment_case(seed);
        let zty = zero_all(&ty);
        let mut marked = zero_context(&RawContext::new(es)).entries;
        marked.push(Entry { name: "fresh".into(), mark: Mark::Marked, ty: zty });
        with_limit(1 << 10, || {
            let Some(ctx) = small(eval_ctx(&marked)) else { return };
            let fam = ctx.family();
            assert!(fam.fibre.values().all(|f| f.len() == 1));
        });
    }

    #[test]
    fn generated_terms_evaluate_and_equal_themselves(seed in any::<u64>()) {
        let (es, _, tm) = fragment_case(seed);
        let Some((a, ty)) = tm else { return Ok(()) };
        with_limit(1 << 10, || {
            let Some(ctx) = small(eval_ctx(&es)) else { return };
            let Some(x) = small(eval_term(&ctx, &a, &ty)) else { return };
            assert!(sem_equal(&x, &x));
            let t = eval_type(&ctx, &ty).unwrap();
            for (g, d) in &x.dn {
                assert!(t.base[g].contains(d));
            }
        });
    }
}

#[test]
fn most_generated_cases_fit_in_the_model() {
    let mut fits = 0;
    for seed in 0..200 {
        let (es, _, tm) = fragment_case(seed);
        let Some((a, ty)) = tm else { continue };
        let ok = with_limit(1 << 10, || eval_ctx(&es).and_then(|ctx| eval_term(&ctx, &a, &ty)).is_ok());
        fits += usize::from(ok);
    }
    assert!(fits >= 100, "only {fits} of 200");
}
