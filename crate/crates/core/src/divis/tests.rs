use super::*;
use crate::catalog;
use crate::morphisms::{chain_inclusion, HomOrigin};
use crate::rational::{int, rat};
use proptest::prelude::*;

fn l(n: u32) -> Algebra {
    Algebra::chain(n).unwrap()
}

fn q(a: &Algebra, s: &str) -> Element {
    a.parse_element(s).unwrap()
}

/// All `x` solving both equations, by direct rational evaluation on a chain.
fn chain_solutions(n_chain: u32, target: &Rational, n: u64) -> Vec<Rational> {
    let trunc = |v: Rational| if v > int(1) { int(1) } else { v };
    (0..=n_chain)
        .map(|i| rat(i as i64, n_chain as i64))
        .filter(|x| {
            let nx = trunc(x * Rational::from_integer(n.into()));
            let rest = trunc(x * Rational::from_integer((n - 1).into()));
            nx == *target && trunc(int(1) - target + rest) == int(1) - x
        })
        .collect()
}

#[test]
fn first_failures() {
    match is_divisible(&l(2)).unwrap() {
        Divisibility::NotDivisible { a, n } => {
            assert_eq!(l(2).format(&a), "1/2");
            assert_eq!(n, 2);
        }
        other => panic!("{other:?}"),
    }
    let b = Algebra::boolean(1).unwrap();
    match is_divisible(&b).unwrap() {
        Divisibility::NotDivisible { a, n } => {
            assert_eq!(a, b.one());
            assert_eq!(n, 2);
        }
        other => panic!("{other:?}"),
    }
    assert!(is_divisible(&Algebra::trivial()).unwrap().is_divisible());
    assert!(is_divisible(&Algebra::rational_chain())
        .unwrap()
        .is_divisible());
}

#[test]
fn solver_examples() {
    let qc = Algebra::rational_chain();
    let w = div_solve(&qc, &qc.one(), 3).unwrap();
    assert_eq!(qc.format(&w.witness().unwrap().x), "1/3");
    let l4 = l(3);
    assert_eq!(
        div_solve(&l4, &q(&l4, "1/3"), 2).unwrap(),
        DivOutcome::NoSolution
    );
    for a in catalog::default_catalog() {
        for n in 1..5 {
            let w = div_solve(a, &a.zero(), n).unwrap();
            assert_eq!(w.witness().unwrap().x, a.zero());
        }
    }
    assert!(matches!(
        div_solve(&l4, &l4.one(), 0),
        Err(MvError::InvalidParameter(_))
    ));
}

#[test]
fn chain_division_matches_rational_evaluation() {
    for m in 1..=8u32 {
        let a = l(m);
        for t in a.elements().unwrap() {
            let tq = a.rational_value(&t).unwrap();
            for n in 1..=10u64 {
                let expected = chain_solutions(m, &tq, n);
                assert!(expected.len() <= 1);
                let got = div_solve(&a, &t, n).unwrap();
                let got = got.witness().map(|w| a.rational_value(&w.x).unwrap());
                assert_eq!(got, expected.first().cloned(), "L{} {tq}/{n}", m + 1);
            }
        }
    }
}

#[test]
fn product_failure_is_lifted() {
    let p = Algebra::product(vec![Algebra::rational_chain(), l(1)]).unwrap();
    match is_divisible(&p).unwrap() {
        Divisibility::NotDivisible { a, n } => {
            assert_eq!(p.format(&a), "(0, 1)");
            assert_eq!(div_solve(&p, &a, n).unwrap(), DivOutcome::NoSolution);
        }
        other => panic!("{other:?}"),
    }
    let qq = Algebra::product(vec![Algebra::rational_chain(), Algebra::rational_chain()]).unwrap();
    assert!(is_divisible(&qq).unwrap().is_divisible());
    let w = div_solve(&qq, &q(&qq, "(1, 1/2)"), 4).unwrap();
    assert_eq!(qq.format(&w.witness().unwrap().x), "(1/4, 1/8)");
}

#[test]
fn catalog_is_never_divisible() {
    for a in catalog::default_catalog()
        .iter()
        .filter(|a| a.size().unwrap() >= 2)
    {
        match is_divisible(a).unwrap() {
            Divisibility::NotDivisible { a: t, n } => {
                assert_eq!(div_solve(a, &t, n).unwrap(), DivOutcome::NoSolution)
            }
            other => panic!("{} reported {other:?}", a.name()),
        }
    }
}

#[test]
fn a_extension_examples() {
    let inc = chain_inclusion(2, 4).unwrap();
    let r = a_extension_check(&inc, 8).unwrap();
    assert!(r.holds());
    let l5 = inc.target();
    let w = r.witnesses.iter().find(|w| w.y == q(l5, "1/4")).unwrap();
    assert_eq!((w.n, l5.format(&w.x)), (3, "1/2".to_string()));
    assert!(w.strict);
    assert!(r.replay(l5).unwrap());

    let sq = Algebra::boolean(2).unwrap();
    let diag = Hom::new(
        l(1),
        sq.clone(),
        vec![Value::Index(0), Value::Index(3)],
        HomOrigin::Inclusion,
    )
    .unwrap();
    let r = a_extension_check(&diag, 8).unwrap();
    assert!(matches!(r.verdict, AExtVerdict::Fails { .. }));
    let lat = r.lattice.unwrap();
    assert_eq!((lat.larger_ideals, lat.smaller_ideals), (4, 2));

    let r = a_extension_check(&Hom::identity(&l(2)).unwrap(), 2).unwrap();
    assert!(r.holds());
}

#[test]
fn lattice_and_elementwise_verdicts_agree_on_catalog_subalgebras() {
    for m2 in catalog::default_catalog()
        .iter()
        .filter(|a| a.size().unwrap() <= 9)
    {
        for x in m2.elements().unwrap() {
            let (_, inc) = crate::algebra::generate_subalgebra(m2, &[x]).unwrap();
            a_extension_check(&inc, 1).unwrap();
        }
    }
}

#[test]
fn a_closed_examples() {
    match a_closed_check(&l(2)).unwrap() {
        AClosedVerdict::NotAClosed {
            extension: Some((f, r)),
            ..
        } => {
            assert_eq!(f.target().size(), Some(5));
            assert!(r.holds() && !f.is_surjective().unwrap());
        }
        other => panic!("{}", other.label()),
    }
    assert_eq!(
        a_closed_check(&Algebra::rational_chain())
            .unwrap()
            .decided(),
        Some(false)
    );
    assert_eq!(
        a_closed_check(&Algebra::boolean(2).unwrap())
            .unwrap()
            .decided(),
        None
    );
    assert_eq!(
        a_closed_check(&Algebra::trivial()).unwrap().decided(),
        Some(true)
    );
    let table = l(3).materialize().unwrap();
    assert_eq!(a_closed_check(&table).unwrap().decided(), Some(false));
}

#[test]
fn hull_routes() {
    let l3 = l(2);
    let h = divisible_hull(&l3).unwrap();
    assert_eq!(h.route(), HullRoute::RationalChain);
    assert_eq!(h.hull().format(&h.embed(&q(&l3, "1/2")).unwrap()), "1/2");
    let t = divisible_hull(&Algebra::trivial()).unwrap();
    assert_eq!(t.route(), HullRoute::Identity);
    let p = Algebra::product(vec![l(2), l(1)]).unwrap();
    let h = divisible_hull(&p).unwrap();
    assert_eq!(h.route(), HullRoute::Product);
    assert_eq!(
        h.hull().format(&h.embed(&q(&p, "(1/2, 1)")).unwrap()),
        "(1/2, 1)"
    );
    assert!(h.embedding().unwrap().verify());
}

#[test]
fn hull_property_on_probes() {
    for a in [
        l(1),
        l(3),
        l(5),
        Algebra::product(vec![l(2), l(1)]).unwrap(),
    ] {
        let h = divisible_hull(&a).unwrap();
        let probe = h.probe_set(12).unwrap();
        let ns = h.hull_property(&probe).unwrap();
        for (y, n) in probe.iter().zip(ns) {
            let den = crate::rational::common_denominator(&h.unit_coords(y).unwrap());
            assert!(
                n >= 1 && BigInt::from(n) <= den.max(BigInt::from(1)),
                "{} n={n}",
                h.hull().format(y)
            );
        }
    }
}

#[test]
fn chang_route_agrees_with_direct_route() {
    for a in [
        l(3),
        l(4),
        Algebra::product(vec![l(2), l(1)]).unwrap(),
        Algebra::boolean(2).unwrap(),
    ] {
        let direct = divisible_hull(&a).unwrap();
        let chang = via_chang(&a).unwrap();
        assert_eq!(chang.route(), HullRoute::Chang);
        let iso = match_hulls(&chang, &direct).unwrap();
        assert!(iso.is_some(), "{}", a.name());
    }
    let t = l(3).materialize().unwrap();
    let h = divisible_hull(&t).unwrap();
    assert_eq!(h.route(), HullRoute::Chang);
    assert_eq!(h.rank(), 1);
}

#[test]
fn epicompletion_of_chains() {
    for n in 1..=4 {
        let e = epicompletion(&l(n)).unwrap();
        assert!(e.all_certified(), "L{}", n + 1);
        assert!(matches!(e.hull.hull().kind(), Kind::RationalChain));
    }
    let qc = Algebra::rational_chain();
    let e = epicompletion(&qc).unwrap();
    assert_eq!(e.hull.route(), HullRoute::Identity);
    assert!(e.all_certified());
    let p = Algebra::product(vec![l(2), l(1)]).unwrap();
    assert!(epicompletion_with_probe(&p, 6).unwrap().all_certified());
}

#[test]
fn farey_sequence() {
    assert_eq!(
        farey(3),
        vec![int(0), rat(1, 3), rat(1, 2), rat(2, 3), int(1)]
    );
}

proptest! {
    #[test]
    fn rational_division_replays(p in 0i64..=1000, qd in 1i64..=1000, n in 1u64..=1000) {
        let qc = Algebra::rational_chain();
        let p = p.min(qd);
        let t = qc.rational(&rat(p, qd)).unwrap();
        let w = div_solve(&qc, &t, n).unwrap();
        let w = w.witness().unwrap();
        prop_assert_eq!(qc.rational_value(&w.x).unwrap(), rat(p, qd) / Rational::from_integer(n.into()));
        prop_assert!(w.replay(&qc).unwrap());
    }
}

mod harness_runs {
    use super::super::harness::*;
    use crate::catalog;

    #[test]
    fn every_selector_is_free_of_counterexamples() {
        let cat = catalog::default_catalog();
        let mut consistent = 0;
        for s in Selector::ALL {
            let r = run(s, cat).unwrap();
            for i in &r.instances {
                assert_ne!(
                    i.verdict,
                    Verdict::Counterexample,
                    "{} {}: {:?}",
                    s.label(),
                    i.instance,
                    i
                );
            }
            consistent += r.tally.consistent;
        }
        assert!(consistent >= 10);
    }

    #[test]
    fn selector_round_trip() {
        for s in Selector::ALL {
            assert_eq!(Selector::parse(s.label()).unwrap(), s);
        }
        assert!(Selector::parse("9.9").is_err());
    }

    #[test]
    fn labelled_examples() {
        let l2 = crate::algebra::Algebra::chain(2).unwrap();
        let r = run(Selector::SubalgebraCollapse, std::slice::from_ref(&l2)).unwrap();
        let two = r
            .instances
            .iter()
            .find(|i| i.instance == "L3 over {0, 1}")
            .unwrap();
        assert_eq!(two.verdict, Verdict::Vacuous);
        assert_eq!(two.hypotheses[0].value, Some(true));
        assert_eq!(two.hypotheses[1].value, Some(false));

        let sq = crate::algebra::Algebra::product(vec![l2.clone(), l2]).unwrap();
        let r = run(Selector::DivisibleViaMinimalPrimes, &[sq]).unwrap();
        assert_eq!(r.instances[0].verdict, Verdict::Consistent);
        assert_eq!(r.instances[0].hypotheses[0].value, Some(false));
    }
}
