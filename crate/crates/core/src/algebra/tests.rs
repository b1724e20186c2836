use super::*;
use crate::error::Axiom;
use crate::rational::{int, rat};
use proptest::prelude::*;

fn l(n: u32) -> Algebra {
    Algebra::chain(n).unwrap()
}

fn q(a: &Algebra, p: i64, d: i64) -> Element {
    a.rational(&rat(p, d)).unwrap()
}

/// Ł_{n+1} written out by hand: index k stands for k/n.
fn chain_table(n: usize) -> TableSpec {
    let size = n + 1;
    TableSpec {
        size,
        oplus: (0..size * size)
            .map(|k| (k / size + k % size).min(n))
            .collect(),
        neg: (0..size).map(|k| n - k).collect(),
        zero: 0,
        one: n,
    }
}

#[test]
fn chain_carrier_and_constants() {
    let l3 = l(2);
    assert_eq!(l3.size(), Some(3));
    assert_eq!(l3.name(), "L3");
    let values: Vec<String> = l3
        .elements()
        .unwrap()
        .iter()
        .map(|x| l3.format(x))
        .collect();
    assert_eq!(values, ["0", "1/2", "1"]);
    assert!(matches!(
        Algebra::chain(0),
        Err(MvError::InvalidParameter(_))
    ));
}

#[test]
fn product_of_two_three_chains() {
    let p = Algebra::product(vec![l(2), l(2)]).unwrap();
    assert_eq!(p.size(), Some(9));
    let (a, b) = (l(2), l(2));
    let p = Algebra::product(vec![a.clone(), b.clone()]).unwrap();
    let x = p.tuple(&[q(&a, 1, 2), b.one()]).unwrap();
    let y = p.tuple(&[q(&a, 1, 2), b.zero()]).unwrap();
    let s = p.oplus(&x, &y).unwrap();
    assert_eq!(p.components(&s).unwrap(), vec![a.one(), b.one()]);
    assert_eq!(p.format(&y), "(1/2, 0)");
}

#[test]
fn altered_four_chain_violates_an_axiom() {
    let mut t = chain_table(3);
    t.oplus[4 + 1] = 3;
    match Algebra::from_table(t) {
        Err(MvError::AxiomViolation { axiom, .. }) => assert_eq!(axiom, Axiom::Lukasiewicz),
        other => panic!("expected a violation, got {other:?}"),
    }
}

#[test]
fn broken_negation_reports_involution_at_top() {
    let mut t = chain_table(2);
    t.neg[0] = 0;
    assert_eq!(first_violation(&t), Some((Axiom::Involution, vec![2])));
}

#[test]
fn verification_certificates() {
    assert!(verify_axioms(&l(4)).unwrap().passed());
    let b2 = Algebra::boolean(2).unwrap().materialize().unwrap();
    let r = verify_axioms(&b2).unwrap();
    assert!(r.passed());
    assert_eq!(r.certificate, Some(Certificate::Exhaustive { elements: 4 }));
    assert!(matches!(
        verify_axioms(&Algebra::rational_chain())
            .unwrap()
            .certificate,
        Some(Certificate::Structural(_))
    ));
}

#[test]
fn derived_operations_in_the_four_chain() {
    let l4 = l(3);
    assert_eq!(l4.oplus(&q(&l4, 1, 3), &q(&l4, 2, 3)).unwrap(), l4.one());
    assert_eq!(
        l4.ominus(&q(&l4, 2, 3), &q(&l4, 1, 3)).unwrap(),
        q(&l4, 1, 3)
    );
    for x in l4.elements().unwrap() {
        assert_eq!(l4.join(&x, &x).unwrap(), x);
    }
    assert_eq!(
        l4.op_eval(Op::Leq, &q(&l4, 1, 3), Some(&q(&l4, 2, 3)))
            .unwrap(),
        OpResult::Bool(true)
    );
}

#[test]
fn scalar_multiples_and_powers() {
    let l4 = l(3);
    let third = q(&l4, 1, 3);
    assert_eq!(l4.nat_scalar(3, &third, ScalarMode::Sum).unwrap(), l4.one());
    assert_eq!(
        l4.nat_scalar(0, &third, ScalarMode::Sum).unwrap(),
        l4.zero()
    );
    assert_eq!(
        l4.nat_scalar(0, &third, ScalarMode::Power).unwrap(),
        l4.one()
    );
    assert_eq!(l4.nat_scalar(1, &third, ScalarMode::Power).unwrap(), third);
    let l3 = l(2);
    assert_eq!(
        l3.nat_scalar(2, &q(&l3, 1, 2), ScalarMode::Power).unwrap(),
        l3.zero()
    );
}

#[test]
fn foreign_elements_are_rejected() {
    let (a, b) = (l(2), l(2));
    assert_eq!(a.oplus(&a.one(), &b.one()), Err(MvError::ForeignElement));
}

#[test]
fn subalgebra_generation() {
    let l5 = l(4);
    let (sub, incl) = generate_subalgebra(&l5, &[q(&l5, 1, 2)]).unwrap();
    assert_eq!(sub.size(), Some(3));
    assert_eq!(incl.image_indices(), vec![0, 2, 4]);
    let (sub, _) = generate_subalgebra(&l5, &[]).unwrap();
    assert_eq!(sub.size(), Some(2));
    let qc = Algebra::rational_chain();
    let third = qc.rational(&rat(1, 3)).unwrap();
    let (sub, incl) = generate_subalgebra(&qc, &[third]).unwrap();
    assert_eq!(sub.size(), Some(4));
    let images: Vec<String> = sub
        .elements()
        .unwrap()
        .iter()
        .map(|x| qc.format(&incl.apply(x).unwrap()))
        .collect();
    assert_eq!(images, ["0", "1/3", "2/3", "1"]);
}

#[test]
fn subalgebra_inclusion_is_a_hom_even_after_relabelling() {
    let p = Algebra::product(vec![l(2), l(3)]).unwrap();
    for x in p.elements().unwrap() {
        let (_, incl) = generate_subalgebra(&p, &[x]).unwrap();
        assert!(incl.verify());
        assert!(incl.is_injective());
    }
}

#[test]
fn classification_flags() {
    let c = classify(&l(5)).unwrap();
    assert_eq!(
        (c.is_linear, c.is_simple, c.is_boolean),
        (true, true, false)
    );
    let p = Algebra::product(vec![l(2), l(2)]).unwrap();
    let c = classify(&p).unwrap();
    assert_eq!(
        (c.is_linear, c.is_simple, c.is_boolean),
        (false, false, false)
    );
    let c = classify(&Algebra::boolean(1).unwrap()).unwrap();
    assert_eq!((c.is_linear, c.is_simple, c.is_boolean), (true, true, true));
    assert!(classify(&Algebra::rational_chain()).unwrap().is_simple);
}

#[test]
fn rational_chain_arithmetic() {
    let qc = Algebra::rational_chain();
    let x = qc.rational(&rat(2, 3)).unwrap();
    let y = qc.rational(&rat(3, 4)).unwrap();
    assert_eq!(qc.oplus(&x, &y).unwrap(), qc.one());
    assert_eq!(
        qc.rational_value(&qc.odot(&x, &y).unwrap()),
        Some(rat(5, 12))
    );
    assert!(qc.rational(&rat(5, 4)).is_err());
    assert_eq!(
        qc.rational_value(&qc.parse_element("7/9").unwrap()),
        Some(rat(7, 9))
    );
}

#[test]
fn parse_and_format_round_trip() {
    let p = Algebra::product(vec![l(2), l(4)]).unwrap();
    for x in p.elements().unwrap() {
        assert_eq!(p.parse_element(&p.format(&x)).unwrap(), x);
    }
    let t = Algebra::from_table(chain_table(3)).unwrap();
    for x in t.elements().unwrap() {
        assert_eq!(t.parse_element(&t.format(&x)).unwrap(), x);
    }
}

#[test]
fn materialized_tables_are_canonical() {
    let p = Algebra::product(vec![l(2), l(1), l(1)]).unwrap();
    let m = p.materialize().unwrap();
    let n = m.size().unwrap();
    assert_eq!(m.zero_idx(), 0);
    assert_eq!(m.one_idx(), n - 1);
    for x in 0..n {
        for y in 0..n {
            if m.leq_idx(x, y) {
                assert!(x <= y, "order is not extended by the index order");
            }
        }
    }
}

#[test]
fn user_tables_are_relabelled_into_canonical_order() {
    // Ł₃ with the carrier listed as [1, 0, 1/2]
    let spec = TableSpec {
        size: 3,
        oplus: vec![0, 0, 0, 0, 1, 2, 0, 2, 0],
        neg: vec![1, 0, 2],
        zero: 1,
        one: 0,
    };
    let a = Algebra::from_table(spec).unwrap();
    assert!(matches!(a.kind(), Kind::Table(_)));
    let Kind::Table(t) = a.kind() else {
        unreachable!()
    };
    assert_eq!(
        (0..3).map(|i| t.original_index(i)).collect::<Vec<_>>(),
        vec![1, 2, 0]
    );
}

fn chain_and_pair() -> impl Strategy<Value = (u32, usize, usize)> {
    (1u32..12).prop_flat_map(|n| (Just(n), 0..=n as usize, 0..=n as usize))
}

proptest! {
    #[test]
    fn chain_ops_match_rational_formulas((n, i, j) in chain_and_pair()) {
        let a = l(n);
        let (x, y) = (a.element(i).unwrap(), a.element(j).unwrap());
        let (xq, yq) = (a.rational_value(&x).unwrap(), a.rational_value(&y).unwrap());
        let sum = a.rational_value(&a.oplus(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(sum, (&xq + &yq).min(int(1)));
        let neg = a.rational_value(&a.neg(&x).unwrap()).unwrap();
        prop_assert_eq!(neg, int(1) - &xq);
        let prod = a.rational_value(&a.odot(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(prod, (&xq + &yq - int(1)).max(int(0)));
    }

    #[test]
    fn join_is_symmetric_and_lub(n in 1u32..6, m in 1u32..5, i in 0usize..64, j in 0usize..64) {
        let p = Algebra::product(vec![l(n), l(m)]).unwrap();
        let size = p.size().unwrap();
        let (x, y) = (i % size, j % size);
        let j1 = p.add_idx(p.ominus_idx(x, y), y);
        let j2 = p.add_idx(p.ominus_idx(y, x), x);
        prop_assert_eq!(j1, j2);
        prop_assert!(p.leq_idx(x, j1) && p.leq_idx(y, j1));
        for z in 0..size {
            if p.leq_idx(x, z) && p.leq_idx(y, z) {
                prop_assert!(p.leq_idx(j1, z));
            }
            if p.leq_idx(z, x) && p.leq_idx(z, y) {
                prop_assert!(p.leq_idx(z, p.meet_idx(x, y)));
            }
        }
        // De Morgan, recomputed from ⊕ and ′ directly
        let dm = p.neg_idx(p.add_idx(p.neg_idx(x), p.neg_idx(y)));
        prop_assert_eq!(p.odot_idx(x, y), dm);
    }

    #[test]
    fn order_is_partial_and_total_on_chains(n in 1u32..10) {
        let a = l(n);
        let size = a.size().unwrap();
        for x in 0..size {
            prop_assert!(a.leq_idx(x, x));
            for y in 0..size {
                prop_assert!(a.leq_idx(x, y) || a.leq_idx(y, x));
                if a.leq_idx(x, y) && a.leq_idx(y, x) {
                    prop_assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn foreign_mixing_always_fails(n in 1u32..6, i in 0usize..6) {
        let (a, b) = (l(n), l(n));
        let i = i % (n as usize + 1);
        let x = a.element(i).unwrap();
        let y = b.element(i).unwrap();
        prop_assert_eq!(a.oplus(&x, &y), Err(MvError::ForeignElement));
        prop_assert_eq!(b.neg(&x), Err(MvError::ForeignElement));
    }
}
