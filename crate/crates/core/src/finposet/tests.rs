use std::sync::Arc;

use proptest::prelude::*;

use super::*;

fn arc(p: FinPoset) -> Arc<FinPoset> {
    Arc::new(p)
}

fn raw(elems: &[&str], leq: &[&[bool]], bottom: Option<&str>) -> PosetData {
    PosetData {
        elems: elems.iter().map(|s| s.to_string()).collect(),
        leq: leq.iter().map(|r| r.to_vec()).collect(),
        bottom: bottom.map(str::to_string),
    }
}

/// Every function `p -> q`, monotone or not, in lexicographic order.
fn all_functions(p: &FinPoset, q: &FinPoset) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..p.len() {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..q.len()).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_force_iso(p: &FinPoset, q: &FinPoset) -> bool {
    p.len() == q.len()
        && permutations(p.len()).into_iter().any(|pi| {
            (0..p.len()).all(|i| (0..p.len()).all(|j| p.leq(i, j) == q.leq(pi[i], pi[j])))
        })
}

#[test]
fn validate_examples() {
    let ok = raw(&["b", "t"], &[&[true, true], &[false, true]], Some("b"));
    assert!(validate_poset(&ok).is_ok());

    let no_refl = raw(&["a", "b"], &[&[false, true], &[false, true]], None);
    assert_eq!(
        validate_poset(&no_refl),
        Err(Error::Violation {
            axiom: Axiom::Reflexivity,
            witness: vec!["a".into()]
        })
    );

    let cycle = raw(&["a", "b"], &[&[true, true], &[true, true]], None);
    assert_eq!(
        validate_poset(&cycle),
        Err(Error::Violation {
            axiom: Axiom::Antisymmetry,
            witness: vec!["a".into(), "b".into()]
        })
    );

    let not_trans = raw(
        &["a", "b", "c"],
        &[&[true, true, false], &[false, true, true], &[false, false, true]],
        None,
    );
    assert!(matches!(
        validate_poset(&not_trans),
        Err(Error::Violation { axiom: Axiom::Transitivity, .. })
    ));

    let dup = raw(&["a", "a"], &[&[true, false], &[false, true]], None);
    assert!(matches!(
        validate_poset(&dup),
        Err(Error::Violation { axiom: Axiom::Distinctness, .. })
    ));

    let bad_bottom = raw(&["a", "b"], &[&[true, false], &[false, true]], Some("a"));
    assert!(matches!(
        validate_poset(&bad_bottom),
        Err(Error::Violation { axiom: Axiom::Bottom, .. })
    ));
}

#[test]
fn monotonicity_examples() {
    let two = arc(FinPoset::chain(2));
    assert!(is_monotone(&two, &two, MonotoneMap::identity(&two).table()));
    assert!(!is_monotone(&two, &two, &[1, 0]));
    assert!(is_monotone(&two, &two, &[0, 0]));
    assert!(matches!(
        MonotoneMap::new(two.clone(), two.clone(), vec![1, 0]),
        Err(Error::NotMonotone { .. })
    ));
}

#[test]
fn compose_examples() {
    let one = arc(FinPoset::one());
    let two = arc(FinPoset::chain(2));
    let three = arc(FinPoset::chain(3));
    let f = MonotoneMap::from_names(two.clone(), three.clone(), &[("0", "0"), ("1", "2")]).unwrap();
    assert_eq!(compose(&MonotoneMap::identity(&three), &f).unwrap(), f);

    let bot = MonotoneMap::constant(&three, &three, 0).unwrap();
    assert_eq!(
        compose(&bot, &f).unwrap(),
        MonotoneMap::constant(&two, &three, 0).unwrap()
    );

    let i12 = MonotoneMap::from_names(one.clone(), two.clone(), &[("*", "0")]).unwrap();
    let i23 = MonotoneMap::from_names(two.clone(), three.clone(), &[("0", "0"), ("1", "1")]).unwrap();
    let i13 = MonotoneMap::from_names(one.clone(), three.clone(), &[("*", "0")]).unwrap();
    assert_eq!(compose(&i23, &i12).unwrap(), i13);

    assert!(matches!(compose(&i12, &i23), Err(Error::DomainMismatch(_))));
}

#[test]
fn composability_is_structural_not_up_to_iso() {
    let two = arc(FinPoset::chain(2));
    let relabeled = arc(two.renamed(|e| format!("x{e}")).unwrap());
    let f = MonotoneMap::identity(&two);
    let g = MonotoneMap::identity(&relabeled);
    assert!(compose(&g, &f).is_err());
}

#[test]
fn leq_map_examples() {
    let two = arc(FinPoset::chain(2));
    let bot = MonotoneMap::constant(&two, &two, 0).unwrap();
    let top = MonotoneMap::constant(&two, &two, 1).unwrap();
    let id = MonotoneMap::identity(&two);
    assert!(leq_map(&bot, &id).unwrap());
    assert!(!leq_map(&id, &bot).unwrap());
    assert!(leq_map(&id, &top).unwrap());
    assert!(!leq_map(&top, &id).unwrap());
    let three = arc(FinPoset::chain(3));
    let other = MonotoneMap::identity(&three);
    assert!(matches!(leq_map(&id, &other), Err(Error::ShapeMismatch(_))));
}

#[test]
fn lub_map_chain_examples() {
    let two = arc(FinPoset::chain(2));
    let bot = MonotoneMap::constant(&two, &two, 0).unwrap();
    let id = MonotoneMap::identity(&two);
    let c = MapChain::new(vec![bot.clone(), id.clone()], 1).unwrap();
    assert_eq!(lub_map_chain(&c).unwrap(), id);

    let c = MapChain::new(vec![bot.clone()], 0).unwrap();
    assert_eq!(lub_map_chain(&c).unwrap(), bot);

    let three = arc(FinPoset::chain(3));
    let bot3 = MonotoneMap::constant(&three, &three, 0).unwrap();
    // collapses the top two elements onto the middle one
    let e = MonotoneMap::new(three.clone(), three.clone(), vec![0, 1, 1]).unwrap();
    let id3 = MonotoneMap::identity(&three);
    assert!(leq_map(&bot3, &e).unwrap() && leq_map(&e, &id3).unwrap());
    let c = MapChain::new(vec![bot3, e, id3.clone()], 2).unwrap();
    assert_eq!(lub_map_chain(&c).unwrap(), id3);
}

#[test]
fn lub_map_chain_errors() {
    let two = arc(FinPoset::chain(2));
    let bot = MonotoneMap::constant(&two, &two, 0).unwrap();
    let id = MonotoneMap::identity(&two);
    let c = MapChain::new(vec![id.clone(), bot.clone()], 1).unwrap();
    assert_eq!(lub_map_chain(&c), Err(Error::NotIncreasing { stage: 0 }));

    let c = MapChain::new(vec![bot.clone(), id.clone()], 0).unwrap();
    assert_eq!(
        lub_map_chain(&c),
        Err(Error::BadWitness { index: 0, failing: 1 })
    );
    assert!(MapChain::new(vec![bot], 3).is_err());
}

#[test]
fn constructions() {
    let two = FinPoset::chain(2);
    let sq = product(&two, &two).unwrap();
    assert_eq!(sq.len(), 4);
    assert_eq!(sq.bottom(), Some(sq.index_of("(0,0)").unwrap()));
    let tops: Vec<_> = (0..4).filter(|&t| (0..4).all(|x| sq.leq(x, t))).collect();
    assert_eq!(tops, vec![sq.index_of("(1,1)").unwrap()]);
    assert!(iso_check(&arc(FinPoset::diamond()), &arc(sq)).unwrap().is_some());

    let l = lift(&two).unwrap();
    assert!(iso_check(&arc(l), &arc(FinPoset::chain(3))).unwrap().is_some());

    let s = coproduct(&FinPoset::one(), &FinPoset::one()).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(s.elems(), &["bot", "inl(*)", "inr(*)"]);
    assert!(!s.leq(1, 2) && !s.leq(2, 1));
    assert!(iso_check(&arc(s), &arc(FinPoset::vee())).unwrap().is_some());

    assert_eq!(
        coproduct(&FinPoset::antichain(2), &FinPoset::one()).unwrap_err(),
        Error::NotPointed
    );
}

#[test]
fn function_space_examples() {
    let two = FinPoset::chain(2);
    let fs = function_space(&two, &two, 512).unwrap();
    assert_eq!(fs.len(), 3);
    assert!(iso_check(&arc(fs.clone()), &arc(FinPoset::chain(3))).unwrap().is_some());
    assert_eq!(fs.name(fs.bottom().unwrap()), "[0->0,1->0]");

    // brute force: all 27 functions, filtered by monotonicity
    let three = FinPoset::chain(3);
    let oracle = all_functions(&three, &three)
        .into_iter()
        .filter(|t| is_monotone(&three, &three, t))
        .count();
    assert_eq!(oracle, 10);
    assert_eq!(function_space(&three, &three, 512).unwrap().len(), 10);

    for q in [FinPoset::vee(), FinPoset::diamond(), FinPoset::antichain(3)] {
        let fs = function_space(&FinPoset::one(), &q, 512).unwrap();
        assert!(iso_check(&arc(fs), &arc(q)).unwrap().is_some());
    }

    assert!(matches!(
        function_space(&three, &three, 9),
        Err(Error::CapExceeded { cap: 9, .. })
    ));
}

#[test]
fn lift_and_sum_maps() {
    let two = arc(FinPoset::chain(2));
    let bot = MonotoneMap::constant(&two, &two, 0).unwrap();
    let lifted = lift_map(&bot).unwrap();
    assert_eq!(
        lifted.named_table(),
        vec![
            ("bot".to_string(), "bot".to_string()),
            ("up(0)".into(), "up(0)".into()),
            ("up(1)".into(), "up(0)".into()),
        ]
    );
    let id = MonotoneMap::identity(&two);
    let s = sum_map(&bot, &id).unwrap();
    assert_eq!(s.table(), &[0, 1, 1, 3, 4]);
    let p = product_map(&bot, &id).unwrap();
    assert_eq!(p.apply_name("(1,1)").unwrap(), "(0,1)");
}

#[test]
fn canonical_form_examples() {
    let two = arc(FinPoset::chain(2));
    let relabeled = arc(two.renamed(|e| format!("z{e}")).unwrap());
    assert_eq!(canonical_form(&two).unwrap(), canonical_form(&relabeled).unwrap());
    assert!(iso_check(&two, &arc(FinPoset::antichain(2))).unwrap().is_none());
    let w = iso_check(&arc(FinPoset::diamond()), &arc(product(&two, &two).unwrap()))
        .unwrap()
        .unwrap();
    assert!(w.inverse().is_some());
}

#[test]
fn canonical_form_handles_wide_posets() {
    let wide = FinPoset::antichain(40);
    let form = canonical_form(&wide).unwrap();
    assert!(form.starts_with("40:"));
    let big = function_space(&FinPoset::chain(4), &FinPoset::chain(4), 512).unwrap();
    assert_eq!(big.len(), 35);
    canonical_form(&big).unwrap();
}

fn poset_strategy(max: usize) -> impl Strategy<Value = FinPoset> {
    (0..=max)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, bits, perm)| {
            let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let mut rel = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if bits[k] {
                        rel.push((names[perm[i]].clone(), names[perm[j]].clone()));
                    }
                    k += 1;
                }
            }
            let p = FinPoset::from_relation(&names, &rel, None).unwrap();
            let least = p.least().map(|b| p.name(b).to_string());
            FinPoset::from_relation(&names, &rel, least.as_deref()).unwrap()
        })
}

fn maps_between(p: &Arc<FinPoset>, q: &Arc<FinPoset>) -> Vec<MonotoneMap> {
    monotone_maps(p, q, usize::MAX)
        .unwrap()
        .into_iter()
        .map(|t| MonotoneMap::new(p.clone(), q.clone(), t).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_enumeration_matches_brute_force(p in poset_strategy(4), q in poset_strategy(3)) {
        let fast = monotone_maps(&p, &q, usize::MAX).unwrap();
        let slow: Vec<_> = all_functions(&p, &q)
            .into_iter()
            .filter(|t| is_monotone(&p, &q, t))
            .collect();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn category_laws(p in poset_strategy(3), q in poset_strategy(3), r in poset_strategy(3), seed in any::<u64>()) {
        let (p, q, r) = (arc(p), arc(q), arc(r));
        let fs = maps_between(&p, &q);
        let gs = maps_between(&q, &r);
        let hs = maps_between(&r, &p);
        prop_assume!(!fs.is_empty() && !gs.is_empty() && !hs.is_empty());
        let pick = |v: &Vec<MonotoneMap>, k: u64| v[(k as usize) % v.len()].clone();
        let (f, g, h) = (pick(&fs, seed), pick(&gs, seed >> 16), pick(&hs, seed >> 32));
        prop_assert_eq!(
            compose(&h, &compose(&g, &f).unwrap()).unwrap(),
            compose(&compose(&h, &g).unwrap(), &f).unwrap()
        );
        prop_assert_eq!(compose(&MonotoneMap::identity(&q), &f).unwrap(), f.clone());
        prop_assert_eq!(compose(&f, &MonotoneMap::identity(&p)).unwrap(), f);
    }

    #[test]
    fn hom_order_is_partial_order(p in poset_strategy(3), q in poset_strategy(3)) {
        let (p, q) = (arc(p), arc(q));
        let fs = maps_between(&p, &q);
        for f in &fs {
            prop_assert!(leq_map(f, f).unwrap());
            for g in &fs {
                if leq_map(f, g).unwrap() && leq_map(g, f).unwrap() {
                    prop_assert_eq!(f, g);
                }
                for h in &fs {
                    if leq_map(f, g).unwrap() && leq_map(g, h).unwrap() {
                        prop_assert!(leq_map(f, h).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn lub_is_least_upper_bound(p in poset_strategy(3), q in poset_strategy(3), picks in proptest::collection::vec(any::<usize>(), 1..5)) {
        let (p, q) = (arc(p), arc(q));
        let fs = maps_between(&p, &q);
        prop_assume!(!fs.is_empty());
        // grow an increasing chain by stepping to random upper bounds
        let mut terms = vec![fs[picks[0] % fs.len()].clone()];
        for k in &picks[1..] {
            let last = terms.last().unwrap().clone();
            let ups: Vec<_> = fs.iter().filter(|g| leq_map(&last, g).unwrap()).cloned().collect();
            terms.push(ups[k % ups.len()].clone());
        }
        let stab = terms.len() - 1;
        let lub = lub_map_chain(&MapChain::new(terms.clone(), stab).unwrap()).unwrap();
        for t in &terms {
            prop_assert!(leq_map(t, &lub).unwrap());
        }
        for u in &fs {
            if terms.iter().all(|t| leq_map(t, u).unwrap()) {
                prop_assert!(leq_map(&lub, u).unwrap());
            }
        }
    }

    #[test]
    fn monotone_maps_preserve_chain_lubs(p in poset_strategy(4), q in poset_strategy(3), picks in proptest::collection::vec(any::<usize>(), 1..5), which in any::<usize>()) {
        let (p, q) = (arc(p), arc(q));
        prop_assume!(!p.is_empty());
        let fs = maps_between(&p, &q);
        prop_assume!(!fs.is_empty());
        let f = &fs[which % fs.len()];
        let mut terms = vec![picks[0] % p.len()];
        for k in &picks[1..] {
            let last = *terms.last().unwrap();
            let ups: Vec<usize> = (0..p.len()).filter(|&y| p.leq(last, y)).collect();
            terms.push(ups[k % ups.len()]);
        }
        let stab = terms.len() - 1;
        let lub = lub_elem_chain(&p, &terms, stab).unwrap();
        let images: Vec<usize> = terms.iter().map(|&x| f.apply(x)).collect();
        prop_assert_eq!(lub_elem_chain(&q, &images, stab).unwrap(), f.apply(lub));
    }

    #[test]
    fn canonical_form_decides_isomorphism(p in poset_strategy(6), q in poset_strategy(6)) {
        let same = canonical_form(&p).unwrap() == canonical_form(&q).unwrap();
        prop_assert_eq!(same, brute_force_iso(&p, &q));
        let (pa, qa) = (arc(p.clone()), arc(q.clone()));
        prop_assert_eq!(iso_check(&pa, &qa).unwrap().is_some(), same);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant(p in poset_strategy(6), perm_seed in any::<u64>()) {
        let n = p.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let elems: Vec<String> = perm.iter().map(|&i| format!("r{}", p.name(i))).collect();
        let leq: Vec<Vec<bool>> = perm.iter().map(|&i| perm.iter().map(|&j| p.leq(i, j)).collect()).collect();
        let q = FinPoset::new(elems, leq, None).unwrap();
        prop_assert_eq!(canonical_form(&p).unwrap(), canonical_form(&q).unwrap());
        let w = iso_check(&arc(p), &arc(q)).unwrap();
        prop_assert!(w.is_some_and(|w| w.inverse().is_some()));
    }
}
