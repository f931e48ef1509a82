use fricke::fp::{parse_presentation, Endomorphism, Letter, Presentation, Word};
use fricke::poly::{gcd, SparsePoly};
use fricke::trace::{basic_traces, numeric_trace_oracle, IntSl2, TraceEngine};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn word_strategy(rank: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::new(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()))
}

fn endo_strategy(rank: u8) -> impl Strategy<Value = Endomorphism> {
    prop::collection::vec(word_strategy(rank, 4), rank as usize).prop_map(Endomorphism::new)
}

/// Random SL₂(ℤ) element as a short product of elementary matrices.
fn sl2_strategy() -> impl Strategy<Value = IntSl2> {
    prop::collection::vec((any::<bool>(), -3i64..=3), 1..=4).prop_map(|steps| {
        steps.into_iter().fold(IntSl2::identity(), |m, (upper, k)| {
            let e = if upper {
                IntSl2::new(1, k, 0, 1)
            } else {
                IntSl2::new(1, 0, k, 1)
            };
            m.mul(&e.unwrap())
        })
    })
}

fn poly_strategy(nvars: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=3, nvars), -100i64..=100),
        0..=5,
    )
    .prop_map(move |terms| {
        SparsePoly::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn free_reduction_laws(u in word_strategy(3, 30), v in word_strategy(3, 30)) {
        let r = u.free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(u.concat(&u.inverse()).free_reduce().is_empty());
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert!(u.mul(&v).len() <= u.len() + v.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn endomorphism_composition(
        e1 in endo_strategy(3), e2 in endo_strategy(3), e3 in endo_strategy(3),
        w in word_strategy(3, 10),
    ) {
        let lhs = e1.compose(&e2).unwrap().compose(&e3).unwrap();
        let rhs = e1.compose(&e2.compose(&e3).unwrap()).unwrap();
        prop_assert_eq!(lhs.apply(&w).unwrap(), rhs.apply(&w).unwrap());
        let step = e1.apply(&e2.apply(&w).unwrap()).unwrap();
        prop_assert_eq!(step.clone(), e1.compose(&e2).unwrap().apply(&w).unwrap());
        prop_assert_eq!(step.free_reduce(), step);
    }

    #[test]
    fn presentation_round_trip(rels in prop::collection::vec(word_strategy(3, 12), 0..4)) {
        let p = Presentation::new(3, rels.into_iter().map(|w| w.cyclic_reduce()).filter(|w| !w.is_empty()).collect());
        let text = p.to_string();
        let (q, _) = parse_presentation(&text).unwrap();
        prop_assert_eq!(q.to_string(), text);
        prop_assert_eq!(q, p);
    }

    #[test]
    fn ring_laws(f in poly_strategy(4), g in poly_strategy(4), h in poly_strategy(4)) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn exact_division_and_evaluation(
        f in poly_strategy(4), g in poly_strategy(4),
        pt in prop::collection::vec(-5i64..=5, 4),
    ) {
        let fg = &f * &g;
        if !g.is_zero() {
            prop_assert_eq!(fg.exact_divide(&g).unwrap(), f.clone());
        }
        let pt: Vec<BigRational> = pt.into_iter().map(|v| BigRational::from_integer(v.into())).collect();
        prop_assert_eq!(
            fg.evaluate(&pt).unwrap(),
            f.evaluate(&pt).unwrap() * g.evaluate(&pt).unwrap()
        );
        let mut hp = pt.clone();
        hp.push(BigRational::from_integer(1.into()));
        prop_assert_eq!(f.homogenize().evaluate(&hp).unwrap(), f.evaluate(&pt).unwrap());
        prop_assert!(f.homogenize().is_homogeneous());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gcd_laws(f in poly_strategy(3), g in poly_strategy(3), h in poly_strategy(3)) {
        prop_assume!(!h.is_zero());
        let lhs = gcd(&(&f * &h), &(&g * &h));
        let rhs = (&h * &gcd(&f, &g)).canonical();
        prop_assert_eq!(lhs.clone(), rhs);
        if !lhs.is_zero() {
            prop_assert!(lhs.divides(&(&f * &h)));
            prop_assert!(lhs.divides(&(&g * &h)));
        }
    }
}

fn check_trace(rank: usize, w: &Word, mats: &[IntSl2]) -> Result<(), TestCaseError> {
    let mut engine = TraceEngine::new(rank).unwrap();
    let p = engine.trace_poly(w).unwrap();
    let basics = basic_traces(engine.coordinates(), mats).unwrap();
    prop_assert_eq!(
        p.evaluate_int(&basics).unwrap(),
        numeric_trace_oracle(w, mats).unwrap()
    );
    prop_assert_eq!(engine.trace_poly(&w.inverse()).unwrap(), p.clone());
    if !w.is_empty() {
        prop_assert_eq!(
            engine.trace_poly(&w.rotate(w.len() / 2)).unwrap(),
            p.clone()
        );
    }
    prop_assert!(p.total_degree().unwrap_or(0) as usize <= w.len().max(1));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn trace_oracle_rank_two(w in word_strategy(2, 12), m in prop::collection::vec(sl2_strategy(), 2)) {
        check_trace(2, &w, &m)?;
    }

    #[test]
    fn trace_oracle_rank_three(w in word_strategy(3, 12), m in prop::collection::vec(sl2_strategy(), 3)) {
        check_trace(3, &w, &m)?;
    }
}
