use proptest::prelude::*;
use sppq::imjm::{canonicalize, is_s_prime, join_first_block, s_prime, split_first_block, TeleElem, Telescope};
use sppq::paths::{mirror_reflect, reverse_complement, Graph, LatticePath, Step};
use sppq::pipeline::{f_espp_stair, g_refine, s_set, Direction, SppQtcpp};
use sppq::pp::{enumerate, validate, Class, ClassTag, PlanePartition};
use sppq::signed::{perm_sign, Side, Sijection};

fn member(class: Class, n: usize, bound: u32, pick: usize) -> PlanePartition {
    let all = enumerate(&ClassTag::new(class, n, bound)).unwrap();
    all[pick % all.len()].clone()
}

fn word() -> impl Strategy<Value = Vec<Step>> {
    prop::collection::vec(prop_oneof![Just(Step::H), Just(Step::V)], 0..24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn spp_round_trips(n in 1usize..=4, big_m in 0u32..=5, pick in any::<usize>()) {
        let pi = member(Class::Spp, n, big_m, pick);
        let b = SppQtcpp::lazy(n, big_m);
        let q = b.forward(&pi).unwrap();
        prop_assert_eq!(validate(&ClassTag::new(Class::Qtcpp, n, big_m), &q), Ok(true));
        prop_assert_eq!(b.backward(&q).unwrap(), pi);
    }

    #[test]
    fn qtcpp_round_trips(n in 1usize..=4, big_m in 0u32..=5, pick in any::<usize>()) {
        let q = member(Class::Qtcpp, n, big_m, pick);
        let b = SppQtcpp::lazy(n, big_m);
        let pi = b.backward(&q).unwrap();
        prop_assert_eq!(validate(&ClassTag::new(Class::Spp, n, big_m), &pi), Ok(true));
        prop_assert_eq!(b.forward(&pi).unwrap(), q);
    }

    #[test]
    fn f_keeps_the_size_of_s(n in 1usize..=4, m in 1usize..=2, pick in any::<usize>()) {
        let pi = member(Class::Espp, n, m as u32, pick);
        let img = f_espp_stair(&pi, m, Direction::Forward).unwrap();
        prop_assert_eq!(s_set(&pi, m).unwrap().len(), s_set(&img, m).unwrap().len());
        prop_assert_eq!(f_espp_stair(&img, m, Direction::Backward).unwrap(), pi);
    }

    #[test]
    fn reverse_complement_is_an_involution(w in word()) {
        let r = reverse_complement(&w);
        prop_assert_eq!(r.len(), w.len());
        prop_assert_eq!(reverse_complement(&r), w);
    }

    #[test]
    fn reflection_is_an_involution(w in word(), x in -6i64..6, y in -6i64..6, m in 0i64..3) {
        let p = LatticePath::new(Graph::Up, (x, y), w);
        if let Ok(q) = mirror_reflect(&p, m) {
            prop_assert_eq!(q.end(), p.end());
            prop_assert_eq!(mirror_reflect(&q, m).unwrap(), p);
        }
    }

    #[test]
    fn block_split_inverts(m in 2usize..=3, pick in any::<usize>()) {
        let all = s_prime(m);
        let s = &all[pick % all.len()];
        let sp = split_first_block(s);
        prop_assert!(is_s_prime(&sp.rest));
        prop_assert_eq!(&join_first_block(&sp), s);
    }

    #[test]
    fn canonical_form_keeps_sign(perm in Just((1..=6).collect::<Vec<usize>>()).prop_shuffle()) {
        let (c, slots) = canonicalize(&perm);
        prop_assert!(is_s_prime(&c));
        prop_assert_eq!(perm_sign(&c), perm_sign(&perm));
        for b in 0..3 {
            let k = slots.image(b);
            prop_assert_eq!(&c[2 * k..2 * k + 2], &perm[2 * b..2 * b + 2]);
        }
    }

    #[test]
    fn telescope_hops_are_involutive(x in -5i64..5, b in -4i64..5, pick in any::<usize>(), swapped in any::<bool>()) {
        let t = Telescope { x, b };
        let sup = t.support();
        prop_assume!(!sup.is_empty());
        let u = sup[pick % sup.len()].u;
        let e = Side::Dom(TeleElem { u, swapped });
        let y = t.apply(e.clone()).unwrap();
        prop_assert_eq!(t.apply(y).unwrap(), e);
    }

    #[test]
    fn refinement_preserves_order(a in prop::collection::btree_set(1usize..10, 0..6), b in prop::collection::btree_set(1usize..10, 0..6)) {
        match g_refine(&a, &b) {
            Ok(g) => {
                let images: Vec<usize> = g.values().copied().collect();
                prop_assert!(images.windows(2).all(|w| w[0] < w[1]));
                prop_assert_eq!(g.len(), a.len());
            }
            Err(_) => prop_assert_ne!(a.len(), b.len()),
        }
    }
}
