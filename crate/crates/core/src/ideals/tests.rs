use super::*;
use crate::catalog;
use crate::morphisms::is_isomorphic;
use crate::rational::rat;

fn l(n: u32) -> Algebra {
    Algebra::chain(n).unwrap()
}

fn l3_squared() -> (Algebra, Algebra, Algebra) {
    let (a, b) = (l(2), l(2));
    let p = Algebra::product(vec![a.clone(), b.clone()]).unwrap();
    (p, a, b)
}

/// Independent ideal test written from the definition.
fn oracle_is_ideal(a: &Algebra, set: &[usize]) -> bool {
    let has = |x: usize| set.contains(&x);
    has(0)
        && set.iter().all(|&x| {
            (0..a.size().unwrap()).all(|y| !a.leq_idx(y, x) || has(y))
                && set.iter().all(|&y| has(a.add_idx(x, y)))
        })
}

fn oracle_ideals(a: &Algebra) -> Vec<Vec<usize>> {
    let n = a.size().unwrap();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| oracle_is_ideal(a, s))
        .collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out
}

#[test]
fn generation_examples() {
    let l4 = l(3);
    assert!(generate_ideal(&l4, &[l4.zero()]).unwrap().is_zero());
    let third = l4.rational(&rat(1, 3)).unwrap();
    assert!(generate_ideal(&l4, &[third]).unwrap().is_whole(&l4));

    let (p, a, b) = l3_squared();
    let x = p
        .tuple(&[a.rational(&rat(1, 2)).unwrap(), b.zero()])
        .unwrap();
    let i = generate_ideal(&p, &[x]).unwrap();
    let expected: Vec<usize> = p
        .elements()
        .unwrap()
        .iter()
        .filter(|e| p.components(e).unwrap()[1] == b.zero())
        .map(|e| e.index().unwrap())
        .collect();
    assert_eq!(i.members(), expected);
}

#[test]
fn generation_on_the_rational_chain() {
    let q = Algebra::rational_chain();
    assert!(generate_ideal(&q, &[q.zero()]).unwrap().is_zero());
    let x = q.rational(&rat(1, 1000)).unwrap();
    assert!(generate_ideal(&q, &[x]).unwrap().is_whole(&q));
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_ideals(&l(6)).unwrap().ideals.len(), 2);
    let (p, _, _) = l3_squared();
    let lat = enumerate_ideals(&p).unwrap();
    assert_eq!(lat.ideals.len(), 4);
    assert_eq!(lat.covers.len(), 4);
    let b3 = Algebra::boolean(3).unwrap();
    assert_eq!(enumerate_ideals(&b3).unwrap().ideals.len(), 8);
}

#[test]
fn enumeration_matches_powerset_oracle_on_catalog() {
    for a in catalog::default_catalog() {
        let lat = enumerate_ideals(a).unwrap();
        let got: Vec<Vec<usize>> = lat.ideals.iter().map(Ideal::members).collect();
        assert_eq!(got, oracle_ideals(a), "{}", a.name());
        for i in &lat.ideals {
            let flags: Vec<bool> = (0..a.size().unwrap()).map(|x| i.contains_idx(x)).collect();
            assert!(is_ideal_set(a, &flags));
        }
    }
}

#[test]
fn covers_are_exactly_the_hasse_edges() {
    for a in catalog::default_catalog() {
        let lat = enumerate_ideals(a).unwrap();
        let m = lat.ideals.len();
        let lt = |i: usize, j: usize| i != j && lat.ideals[i].is_subset(&lat.ideals[j]);
        for i in 0..m {
            for j in 0..m {
                let covers = lt(i, j) && (0..m).all(|k| !(lt(i, k) && lt(k, j)));
                assert_eq!(covers, lat.covers.contains(&(i, j)), "{}", a.name());
            }
        }
        for i in 0..m {
            for j in 0..m {
                let meet = lat.meet(i, j);
                let join = lat.join(i, j);
                assert!(lat.ideals[meet].is_subset(&lat.ideals[i]));
                assert!(lat.ideals[i].is_subset(&lat.ideals[join]));
                assert!(lat.ideals[j].is_subset(&lat.ideals[join]));
            }
        }
    }
}

#[test]
fn minimal_primes() {
    let p = primes_and_minimal_primes(&l(4)).unwrap();
    assert_eq!(p.minimal.len(), 1);
    assert!(p.minimal[0].is_zero());

    let (sq, _, _) = l3_squared();
    let p = primes_and_minimal_primes(&sq).unwrap();
    assert_eq!(p.minimal.len(), 2);
    for m in &p.minimal {
        assert_eq!(m.len(), Some(3));
        let (q, _) = quotient(&sq, m).unwrap();
        assert!(is_isomorphic(&q, &l(2)).unwrap());
    }

    let b2 = Algebra::boolean(2).unwrap();
    let p = primes_and_minimal_primes(&b2).unwrap();
    assert_eq!(p.primes.len(), 2);
    assert_eq!(p.minimal.len(), 2);
}

#[test]
fn prime_cross_check_runs_on_the_whole_catalog() {
    for a in catalog::default_catalog() {
        primes_and_minimal_primes(a).unwrap();
    }
}

#[test]
fn quotients() {
    let (sq, _, _) = l3_squared();
    let lat = enumerate_ideals(&sq).unwrap();
    let zero = &lat.ideals[0];
    let whole = lat.ideals.last().unwrap();
    let (q0, p0) = quotient(&sq, zero).unwrap();
    assert_eq!(q0.size(), Some(9));
    assert!(p0.verify() && p0.is_injective());
    let (qw, pw) = quotient(&sq, whole).unwrap();
    assert_eq!(qw.size(), Some(1));
    assert!(pw.verify());
}

#[test]
fn congruence_is_independent_of_representatives() {
    for a in catalog::default_catalog() {
        for i in enumerate_ideals(a).unwrap().ideals {
            let (q, proj) = quotient(a, &i).unwrap();
            assert!(proj.verify(), "{} / {}", a.name(), i.describe(a));
            assert!(proj.is_surjective().unwrap());
            let n = a.size().unwrap();
            for x in 0..n {
                for y in 0..n {
                    let (cx, cy) = (proj.image_idx(x).unwrap(), proj.image_idx(y).unwrap());
                    assert_eq!(proj.image_idx(a.add_idx(x, y)).unwrap(), q.add_idx(cx, cy));
                }
            }
        }
    }
}

#[test]
fn coset_sums() {
    let b = Algebra::boolean(2).unwrap();
    let two = Algebra::chain(1).unwrap();
    let diag = Hom::new(
        two.clone(),
        b.clone(),
        vec![Value::Index(0), Value::Index(3)],
        HomOrigin::Inclusion,
    )
    .unwrap();
    let lat = enumerate_ideals(&b).unwrap();
    assert_eq!(
        coset_sum_members(&diag, &lat.ideals[0]).unwrap(),
        vec![0, 3]
    );
    for i in &lat.ideals[1..3] {
        assert_eq!(coset_sum_members(&diag, i).unwrap(), vec![0, 1, 2, 3]);
        let (sub, incl) = coset_sum_subalgebra(&diag, i).unwrap();
        assert_eq!(sub.size(), Some(4));
        assert!(incl.verify());
    }
}

#[test]
fn boolean_skeleton_and_stonean_ideals() {
    assert_eq!(boolean_elements(&l(4)).unwrap(), vec![0, 4]);
    let (sq, a, b) = l3_squared();
    assert_eq!(boolean_elements(&sq).unwrap().len(), 4);
    let e = sq.tuple(&[a.one(), b.zero()]).unwrap();
    let i = generate_ideal(&sq, &[e]).unwrap();
    assert!(is_stonean(&sq, &i).unwrap());
}

#[test]
fn summands() {
    let (sq, a, b) = l3_squared();
    let e = sq.tuple(&[a.one(), b.zero()]).unwrap();
    let i = generate_ideal(&sq, std::slice::from_ref(&e)).unwrap();
    let d = summand_decomposition(&sq, &i).unwrap().unwrap();
    assert_eq!(d.witness, e.index().unwrap());
    let f = sq.tuple(&[a.zero(), b.one()]).unwrap();
    assert_eq!(d.complement, generate_ideal(&sq, &[f]).unwrap());
    assert!(d.splitting.verify() && d.splitting.is_injective());

    let z = zero_ideal(&l(2));
    let d = summand_decomposition(&l(2), &z);
    assert!(d.unwrap().is_some());
}

#[test]
fn principal_ideals_of_finite_algebras_are_stonean_summands() {
    for a in catalog::default_catalog() {
        assert!(archimedean_profile(a).unwrap().is_hyperarchimedean());
        for x in a.elements().unwrap() {
            let i = generate_ideal(a, &[x]).unwrap();
            assert!(is_stonean(a, &i).unwrap(), "{}", a.name());
            assert!(
                summand_decomposition(a, &i).unwrap().is_some(),
                "{}",
                a.name()
            );
        }
    }
}

#[test]
fn archimedean_witnesses() {
    let l4 = l(3);
    let p = archimedean_profile(&l4).unwrap();
    assert_eq!(p.witness(&l4, &l4.rational(&rat(1, 3)).unwrap()), Some(3));
    assert_eq!(p.witness(&l4, &l4.zero()), Some(0));
    let q = Algebra::rational_chain();
    let p = archimedean_profile(&q).unwrap();
    assert!(p.is_hyperarchimedean());
    assert_eq!(p.witness(&q, &q.rational(&rat(2, 7)).unwrap()), Some(4));
}

#[test]
fn non_ideals_are_rejected() {
    let l4 = l(3);
    assert!(matches!(
        ideal_from_members(&l4, &[0, 1]),
        Err(MvError::NotAnIdeal(_))
    ));
    assert!(matches!(
        ideal_from_members(&l4, &[1]),
        Err(MvError::NotAnIdeal(_))
    ));
}
