use super::*;
use proptest::prelude::*;

fn l(n: u32) -> Algebra {
    Algebra::chain(n).unwrap()
}

/// Filters all |b|^|a| maps by the homomorphism laws.
fn brute_force_homs(a: &Algebra, b: &Algebra) -> Vec<Vec<usize>> {
    let (n, m) = (a.size().unwrap(), b.size().unwrap());
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    loop {
        let ok = map[a.zero_idx()] == b.zero_idx()
            && (0..n).all(|x| {
                map[a.neg_idx(x)] == b.neg_idx(map[x])
                    && (0..n).all(|y| map[a.add_idx(x, y)] == b.add_idx(map[x], map[y]))
            });
        if ok {
            out.push(map.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                out.sort();
                return out;
            }
            map[k] += 1;
            if map[k] < m {
                break;
            }
            map[k] = 0;
            k += 1;
        }
    }
}

fn indices(h: &Hom) -> Vec<usize> {
    h.images().iter().map(|v| v.index().unwrap()).collect()
}

#[test]
fn chain_hom_counts() {
    assert_eq!(enumerate_homs(&l(2), &l(4)).unwrap().len(), 1);
    assert_eq!(enumerate_homs(&l(2), &l(3)).unwrap().len(), 0);
    for m in 1..=8u32 {
        for n in 1..=8u32 {
            let count = enumerate_homs(&l(m), &l(n)).unwrap().len();
            assert_eq!(
                count,
                usize::from(n % m == 0),
                "Hom(L{}, L{})",
                m + 1,
                n + 1
            );
        }
    }
}

#[test]
fn enumeration_matches_brute_force_on_small_catalog() {
    let small: Vec<&Algebra> = crate::catalog::default_catalog()
        .iter()
        .filter(|a| a.size().unwrap() <= 5)
        .collect();
    for a in &small {
        for b in &small {
            let got: Vec<Vec<usize>> = enumerate_homs(a, b).unwrap().iter().map(indices).collect();
            assert_eq!(got, brute_force_homs(a, b), "{} -> {}", a.name(), b.name());
        }
    }
}

#[test]
fn caps_are_enforced() {
    let big = Algebra::chain(64).unwrap();
    assert!(matches!(
        enumerate_homs(&big, &l(1)),
        Err(MvError::TooLarge { .. })
    ));
}

#[test]
fn classification_examples() {
    let sq = Algebra::product(vec![l(2), l(2)]).unwrap();
    let l3 = l(2);
    let images = sq
        .elements()
        .unwrap()
        .iter()
        .map(|x| sq.components(x).unwrap()[0].value().clone())
        .collect();
    let pi = Hom::new(sq.clone(), l3.clone(), images, HomOrigin::Projection).unwrap();
    let c = classify_hom(&pi).unwrap();
    assert!(c.surjective && !c.injective);
    assert_eq!(c.kernel.len(), Some(3));

    let id = Hom::identity(&l(3)).unwrap();
    let c = classify_hom(&id).unwrap();
    assert!(c.surjective && c.injective && c.kernel.is_zero());

    let incl = chain_inclusion(2, 4).unwrap();
    let c = classify_hom(&incl).unwrap();
    assert!(c.injective && !c.surjective);
}

#[test]
fn composition_widens_kernels() {
    let cat = crate::catalog::default_catalog();
    let small: Vec<&Algebra> = cat.iter().filter(|a| a.size().unwrap() <= 6).collect();
    for a in &small {
        for b in &small {
            for f in enumerate_homs(a, b).unwrap() {
                for c in &small {
                    for g in enumerate_homs(b, c).unwrap() {
                        let gf = f.then(&g).unwrap();
                        assert!(gf.verify());
                        let k1 = classify_hom(&f).unwrap().kernel;
                        let k2 = classify_hom(&gf).unwrap().kernel;
                        assert!(k1.is_subset(&k2));
                    }
                }
            }
        }
    }
}

#[test]
fn diagonal_is_not_epi() {
    let b = Algebra::boolean(2).unwrap();
    let diag = Hom::new(
        l(1),
        b,
        vec![Value::Index(0), Value::Index(3)],
        HomOrigin::Inclusion,
    )
    .unwrap();
    match bounded_epi_oracle(&diag, 4).unwrap() {
        EpiEvidence::NotEpi {
            cotarget,
            alpha,
            beta,
        } => {
            assert_eq!(cotarget.size(), Some(2));
            assert!(replay_not_epi(&diag, &alpha, &beta).unwrap());
        }
        other => panic!("expected a separating pair, got {}", other.label()),
    }
}

#[test]
fn surjections_are_certified() {
    let sq = Algebra::product(vec![l(2), l(2)]).unwrap();
    let lat = crate::ideals::enumerate_ideals(&sq).unwrap();
    let (_, proj) = crate::ideals::quotient(&sq, &lat.ideals[1]).unwrap();
    assert!(matches!(
        bounded_epi_oracle(&proj, 8).unwrap(),
        EpiEvidence::EpiCertified(_)
    ));
}

#[test]
fn chain_inclusions() {
    let f = chain_inclusion(1, 2).unwrap();
    assert!(matches!(
        bounded_epi_oracle(&f, 6).unwrap(),
        EpiEvidence::UnknownUpTo(6)
    ));
    assert!(matches!(
        chain_inclusion_epi(1, 2, 8).unwrap(),
        EpiEvidence::EpiCertified(_)
    ));
    assert!(matches!(
        chain_inclusion_epi(2, 4, 8).unwrap(),
        EpiEvidence::EpiCertified(_)
    ));
    assert_eq!(
        chain_inclusion_epi(2, 3, 8).unwrap_err(),
        MvError::NotASubchain { m: 2, n: 3 }
    );
}

#[test]
fn isomorphism_detection() {
    let b2 = Algebra::boolean(2).unwrap();
    let t = b2.materialize().unwrap();
    assert!(is_isomorphic(&b2, &t).unwrap());
    assert!(!is_isomorphic(&b2, &l(3)).unwrap());
}

proptest! {
    #[test]
    fn every_enumerated_hom_verifies(i in 0usize..21, j in 0usize..21) {
        let cat = crate::catalog::default_catalog();
        let (a, b) = (&cat[i % cat.len()], &cat[j % cat.len()]);
        for h in enumerate_homs(a, b).unwrap() {
            prop_assert!(h.verify());
        }
    }
}
