use super::*;
use crate::catalog;
use crate::morphisms::{enumerate_homs, is_isomorphic};
use crate::rational::{int, rat};

fn l(n: u32) -> Algebra {
    Algebra::chain(n).unwrap()
}

fn vec_el(xs: &[Rational]) -> GroupElement {
    GroupElement::Vector(xs.to_vec())
}

fn seq(base: &Algebra, xs: &[usize]) -> GoodSequence {
    GoodSequence::from_indices(base, xs.to_vec()).unwrap()
}

/// Sum of the entries of a good sequence over a chain, as a rational.
fn chain_value(base: &Algebra, s: &GoodSequence) -> Rational {
    s.entries()
        .iter()
        .map(|&i| base.rational_value(&base.element(i).unwrap()).unwrap())
        .fold(int(0), |a, b| a + b)
}

#[test]
fn coordinatewise_join() {
    let g = Group::dense(2);
    let j = g
        .join(&vec_el(&[rat(1, 2), int(3)]), &vec_el(&[int(1), rat(1, 3)]))
        .unwrap();
    assert_eq!(j, vec_el(&[int(1), int(3)]));
}

#[test]
fn lexicographic_order() {
    let g = Group::lex(Group::integers(), Group::integers());
    let x = GroupElement::Pair(Box::new(vec_el(&[int(0)])), Box::new(vec_el(&[int(5)])));
    let y = GroupElement::Pair(Box::new(vec_el(&[int(1)])), Box::new(vec_el(&[int(-100)])));
    assert!(g.leq(&x, &y).unwrap());
    assert!(!g.leq(&y, &x).unwrap());
    assert_eq!(g.join(&x, &y).unwrap(), y);
}

#[test]
fn lex_with_non_linear_first_factor_has_no_joins() {
    let g = Group::lex(Group::dense(2), Group::integers());
    let x = g.zero();
    assert!(matches!(g.join(&x, &x), Err(MvError::NotALattice(_))));
}

#[test]
fn lex_strong_unit_bounds() {
    let g = Group::lex(Group::integers(), Group::integers());
    let unit = GroupElement::Pair(Box::new(vec_el(&[int(1)])), Box::new(vec_el(&[int(0)])));
    let ug = UnitalGroup::new(g.clone(), unit.clone()).unwrap();
    for a in -3..4 {
        for b in [-1000, 0, 1000] {
            let x = GroupElement::Pair(Box::new(vec_el(&[int(a)])), Box::new(vec_el(&[int(b)])));
            let n = ug.unit_bound(&x).unwrap();
            let nu = g.times(n as i64, &unit).unwrap();
            assert!(g.leq(&x, &nu).unwrap() && x != nu);
        }
    }
}

#[test]
fn chang_algebra_is_an_infinite_gamma() {
    let g = Group::lex(Group::integers(), Group::integers());
    let unit = GroupElement::Pair(Box::new(vec_el(&[int(1)])), Box::new(vec_el(&[int(0)])));
    let c = gamma(UnitalGroup::new(g, unit).unwrap()).unwrap();
    assert!(!c.is_finite());
    let eps = c.parse_element("<0, 1>").unwrap();
    let two = c
        .nat_scalar(2, &eps, crate::algebra::ScalarMode::Sum)
        .unwrap();
    assert_eq!(c.format(&two), "<0, 2>");
    assert_eq!(c.format(&c.neg(&eps).unwrap()), "<1, -1>");
    assert!(crate::algebra::verify_axioms(&c).unwrap().passed());
}

#[test]
fn gamma_examples() {
    let g = gamma(UnitalGroup::chain_group(3).unwrap()).unwrap();
    assert!(is_isomorphic(&g, &l(3)).unwrap());
    assert!(crate::algebra::verify_axioms(&g).unwrap().passed());
    let z = gamma(UnitalGroup::integers()).unwrap();
    assert_eq!(z.size(), Some(2));
    let q = gamma(UnitalGroup::dense(vec![int(1)]).unwrap()).unwrap();
    assert!(!q.is_finite());
    let x = q.parse_element("2/3").unwrap();
    let y = q.parse_element("1/2").unwrap();
    assert_eq!(q.format(&q.oplus(&x, &y).unwrap()), "1");
    assert_eq!(q.format(&q.odot(&x, &y).unwrap()), "1/6");
}

#[test]
fn spans_are_checked() {
    let g = Group::span(vec![vec![rat(1, 2), int(0)], vec![int(0), rat(1, 3)]]).unwrap();
    let Group::Rational(r) = &g else {
        unreachable!()
    };
    assert_eq!(
        r.coords(),
        &[Coord::Cyclic(rat(1, 2)), Coord::Cyclic(rat(1, 3))]
    );
    let g = Group::span(vec![
        vec![int(1), int(1)],
        vec![int(1), int(-1)],
        vec![int(2), int(0)],
        vec![int(0), int(2)],
    ]);
    // (1,-1) ∨ 0 = (1,0) is not in the span
    assert!(matches!(g, Err(MvError::NotALattice(_))));
    let diag = Group::span(vec![vec![int(1), int(1)]]);
    assert!(matches!(diag, Err(MvError::UnsupportedInstance(_))));
}

#[test]
fn unit_certificates() {
    let g = Group::span(vec![
        vec![int(3), int(0)],
        vec![int(0), rat(1, 2)],
        vec![int(6), int(1)],
    ])
    .unwrap();
    let ug = UnitalGroup::new(g, vec_el(&[int(3), rat(1, 2)])).unwrap();
    assert_eq!(ug.certificates(), &[(0, 1), (1, 1), (2, 2)]);
    assert!(ug.recheck_certificates());
    assert!(UnitalGroup::new(Group::dense(2), vec_el(&[int(1), int(0)])).is_err());
}

#[test]
fn good_sequence_sums() {
    let l3 = l(2);
    let half = seq(&l3, &[1]);
    assert_eq!(half.add(&l3, &half), seq(&l3, &[2]));
    assert_eq!(half.add(&l3, &GoodSequence::empty()), half);
    let one = seq(&l3, &[2]);
    assert_eq!(one.add(&l3, &one), seq(&l3, &[2, 2]));
    assert!(matches!(
        GoodSequence::from_indices(&l3, vec![1, 1]),
        Err(MvError::NotGoodSequence(_))
    ));
    assert_eq!(
        good_seq_arith(&l3, SeqOp::Compare, &half, &one).unwrap(),
        SeqResult::Ordering(Some(Ordering::Less))
    );
}

#[test]
fn good_sequences_add_like_their_values_on_chains() {
    for n in 1..=5 {
        let base = l(n);
        let all = all_good_sequences(&base, 3).unwrap();
        for a in &all {
            for b in &all {
                let s = a.add(&base, b);
                assert_eq!(
                    chain_value(&base, &s),
                    chain_value(&base, a) + chain_value(&base, b)
                );
            }
        }
    }
}

#[test]
fn addition_is_commutative_associative_and_cancellative() {
    for base in catalog::default_catalog()
        .iter()
        .filter(|a| a.size().unwrap() <= 6)
    {
        let short = all_good_sequences(base, 2).unwrap();
        for a in &short {
            for b in &short {
                assert_eq!(a.add(base, b), b.add(base, a));
                for c in &short {
                    assert_eq!(a.add(base, b).add(base, c), a.add(base, &b.add(base, c)));
                }
            }
        }
        let all = all_good_sequences(base, 4).unwrap();
        let cs = all_good_sequences(base, 2).unwrap();
        for c in &cs {
            let mut seen = std::collections::HashMap::new();
            for a in &all {
                let s = a.add(base, c);
                if let Some(prev) = seen.insert(s, a.clone()) {
                    panic!("{}: {:?} + c = {:?} + c", base.name(), prev, a);
                }
            }
        }
    }
}

#[test]
fn subtraction_inverts_addition() {
    for base in catalog::default_catalog()
        .iter()
        .filter(|a| a.size().unwrap() <= 6)
    {
        let all = all_good_sequences(base, 2).unwrap();
        for a in &all {
            for b in &all {
                let s = a.add(base, b);
                assert_eq!(&s.subtract(base, b).unwrap(), a);
            }
        }
    }
}

#[test]
fn chang_group_of_the_three_chain_is_half_integers() {
    let l3 = l(2);
    let xi3 = xi(&l3).unwrap();
    let g = xi3.group();
    let u = xi3.unit().clone();
    let uu = g.add(&u, &u).unwrap();
    let GroupElement::Chang(c) = &uu else {
        unreachable!()
    };
    assert_eq!(c.positive(), &seq(&l3, &[2, 2]));
    // evaluating sums of entries is an order isomorphism onto (1/2)Z
    let value = |x: &GroupElement| {
        let GroupElement::Chang(c) = x else {
            unreachable!()
        };
        chain_value(&l3, c.positive()) - chain_value(&l3, c.negative())
    };
    let h = chang_embed(&l3, 1);
    let elems = [
        g.zero(),
        h.clone(),
        u.clone(),
        g.neg(&h).unwrap(),
        g.add(&u, &h).unwrap(),
    ];
    for x in &elems {
        for y in &elems {
            assert_eq!(value(&g.add(x, y).unwrap()), value(x) + value(y));
            assert_eq!(g.leq(x, y).unwrap(), value(x) <= value(y));
        }
    }
    assert_eq!(value(&h), rat(1, 2));
}

#[test]
fn chang_group_of_two_is_the_integers() {
    let b = l(1);
    let xi2 = xi(&b).unwrap();
    let u = xi2.unit().clone();
    let three = xi2.group().times(3, &u).unwrap();
    let GroupElement::Chang(c) = &three else {
        unreachable!()
    };
    assert_eq!(c.positive(), &seq(&b, &[1, 1, 1]));
    assert_eq!(xi2.unit_bound(&three).unwrap(), 3);
}

#[test]
fn chang_lattice_operations() {
    let sq = Algebra::product(vec![l(2), l(2)]).unwrap();
    let g = xi(&sq).unwrap();
    let gr = g.group();
    let a = chang_embed(&sq, sq.parse_element("(1, 0)").unwrap().index().unwrap());
    let b = chang_embed(&sq, sq.parse_element("(0, 1/2)").unwrap().index().unwrap());
    let j = gr.join(&a, &b).unwrap();
    assert_eq!(j, gr.add(&a, &b).unwrap());
    assert_eq!(gr.meet(&a, &b).unwrap(), gr.zero());
    let d = gr.sub(&a, &b).unwrap();
    let pos = gr.join(&d, &gr.zero()).unwrap();
    assert_eq!(pos, a);
}

#[test]
fn round_trip_examples() {
    for a in [l(3), Algebra::boolean(2).unwrap(), Algebra::trivial()] {
        let (g, h) = mundici_roundtrip(&a).unwrap();
        assert_eq!(g.size(), a.size());
        assert!(h.is_injective() && h.is_surjective().unwrap());
    }
}

#[test]
fn xi_is_functorial_on_small_catalog() {
    let small: Vec<&Algebra> = catalog::default_catalog()
        .iter()
        .filter(|a| a.size().unwrap() <= 6)
        .collect();
    for a in &small {
        let (ga, ra) = mundici_roundtrip(a).unwrap();
        let xa = xi(a).unwrap();
        let probe: Vec<GroupElement> = all_good_sequences(a, 2)
            .unwrap()
            .into_iter()
            .map(|s| chang_normalize(a, s, GoodSequence::empty()))
            .collect();
        for b in &small {
            let (gb, rb) = mundici_roundtrip(b).unwrap();
            let xb = xi(b).unwrap();
            for f in enumerate_homs(a, b).unwrap() {
                assert_eq!(&xi_map(&f, xa.unit()).unwrap(), xb.unit());
                for x in &probe {
                    for y in &probe {
                        let lhs = xi_map(&f, &xa.group().sub(x, y).unwrap()).unwrap();
                        let rhs = xb
                            .group()
                            .sub(&xi_map(&f, x).unwrap(), &xi_map(&f, y).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
                // Γ(Ξ(f)) ∘ round trip = round trip ∘ f
                for x in 0..a.size().unwrap() {
                    let gx = ga.gamma_element(ra.image_idx(x).unwrap());
                    let via_gamma = gb.gamma_index(&xi_map(&f, &gx).unwrap()).unwrap();
                    let via_f = rb.image_idx(f.image_idx(x).unwrap()).unwrap();
                    assert_eq!(via_gamma, via_f);
                }
            }
        }
    }
}
