use std::collections::BTreeSet;

use sppq::espp_chain::{espp_chain, EsppFactored};
use sppq::imjm::{lift, IElem, JElem};
use sppq::paths::Word;
use sppq::pipeline::{f_espp_stair, f_traced, s_set, Direction, FTable, SppQtcpp};
use sppq::pp::{enumerate, Class, ClassTag, PlanePartition};
use sppq::signed::{Indexed, Side, Sijection};
use sppq::stair_chain::{factored_stat, stair_chain, StairFactored};

fn class(c: Class, n: usize, bound: u32) -> Vec<PlanePartition> {
    enumerate(&ClassTag::new(c, n, bound)).unwrap()
}

#[test]
fn f_at_the_largest_grid_point() {
    let (n, m) = (4, 2);
    let t = FTable::build(n, m).unwrap();
    let stair: BTreeSet<PlanePartition> = class(Class::Stair, n, m as u32).into_iter().collect();
    let images: BTreeSet<PlanePartition> = t.forward.values().cloned().collect();
    assert_eq!(images, stair);
    for (pi, img) in &t.forward {
        assert_eq!(s_set(pi, m).unwrap().len(), s_set(img, m).unwrap().len());
    }
}

#[test]
fn f_is_deterministic() {
    let pi = PlanePartition::shifted(vec![vec![4, 2, 2], vec![2, 0], vec![0]]);
    let a = f_espp_stair(&pi, 2, Direction::Forward).unwrap();
    let b = f_espp_stair(&pi, 2, Direction::Forward).unwrap();
    assert_eq!(a, b);
}

#[test]
fn trace_names_intermediate_stages() {
    let pi = PlanePartition::shifted(vec![vec![4, 2], vec![2]]);
    let (img, trace) = f_traced(&pi, 2, Direction::Forward).unwrap();
    assert_eq!(img, f_espp_stair(&pi, 2, Direction::Forward).unwrap());
    assert!(!trace.is_empty());
    let stages: BTreeSet<&str> = trace.iter().map(|h| h.stage).collect();
    assert!(stages.contains("J-factored"));
    assert!(stages.contains("stairPP"));
}

#[test]
fn size_one_is_a_permutation_of_the_bound() {
    for big_m in 0..=6u32 {
        let b = SppQtcpp::lazy(1, big_m);
        let images: BTreeSet<u32> = (0..=big_m)
            .map(|v| b.forward(&PlanePartition::shifted(vec![vec![v]])).unwrap().rows[0][0])
            .collect();
        assert_eq!(images, (0..=big_m).collect());
    }
}

#[test]
fn both_chains_meet_through_the_lift() {
    // The J-side image of an eSPP lifts back to an I-indexed element of the
    // same statistic, which the staircase chain decodes.
    let (n, m) = (3, 2);
    let down = espp_chain(n, m);
    let lifted = lift::<Word>(m);
    let up = stair_chain(n, m);
    let mut landed = 0;
    for pi in class(Class::Espp, n, m as u32) {
        let f: EsppFactored = down.apply(Side::Dom(pi.clone())).unwrap().cod().unwrap();
        let stat = factored_stat(&f);
        let back: Side<Indexed<_, IElem>, Indexed<_, JElem>> = lifted.apply(Side::Cod(f)).unwrap();
        if let Side::Dom(g) = back {
            let g: StairFactored = g;
            assert_eq!(factored_stat(&g), stat);
            if let Side::Dom(stair) = up.apply(Side::Cod(g)).unwrap() {
                assert_eq!(stair.n(), n);
                landed += 1;
            }
        }
    }
    assert!(landed > 0);
}

#[test]
fn factored_elements_serialize() {
    let pi = PlanePartition::shifted(vec![vec![2, 2], vec![0]]);
    let f = espp_chain(2, 1).apply(Side::Dom(pi)).unwrap().cod().unwrap();
    let json = serde_json::to_string(&f).unwrap();
    let back: EsppFactored = serde_json::from_str(&json).unwrap();
    assert_eq!(back, f);
}
