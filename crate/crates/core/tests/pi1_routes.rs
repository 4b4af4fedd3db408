mod common;

use std::collections::BTreeMap;

use common::fact;
use proetale_core::pi1::RULE_FREE;
use proetale_core::scheme::all_valid_orders;
use proetale_core::{
    class_witness, count_homs, free_rank, pi1_closed_form, pi1_connected_singular, pi1_devissage,
    Pi1Options, Pi1Result, SchemeConfig, VkForm,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn counts(r: &Pi1Result, degrees: &[usize]) -> Vec<u64> {
    degrees
        .iter()
        .map(|&d| count_homs(&r.presentation, d).unwrap())
        .collect()
}

fn corpus() -> BTreeMap<String, SchemeConfig> {
    common::corpus().into_iter().collect()
}

#[test]
fn routes_agree_with_the_rank_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let o = Pi1Options::default();
    for _ in 0..30 {
        let cfg = common::random_trivial_config(&mut rng, 4, 4, 7);
        let rank = free_rank(&cfg).unwrap() as u32;
        let dev = pi1_devissage(&cfg, &o).unwrap();
        let closed = pi1_closed_form(&cfg, true, &o).unwrap();
        for d in [2, 3] {
            let vertex: u64 = cfg
                .components
                .iter()
                .map(|c| count_homs(c.group.presentation(), d).unwrap())
                .product();
            let expect = vertex * fact(d).pow(rank);
            assert_eq!(
                count_homs(&dev.presentation, d).unwrap(),
                expect,
                "{}",
                cfg.to_json_pretty()
            );
            assert_eq!(count_homs(&closed.presentation, d).unwrap(), expect);
        }
    }
}

#[test]
fn connected_route_matches_recursive_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let o = Pi1Options::default();
    let mut seen = 0;
    while seen < 12 {
        let cfg = common::random_general_config(&mut rng, 3, 1, 5);
        if cfg.m() != 1 {
            continue;
        }
        seen += 1;
        let a = pi1_connected_singular(&cfg, &o).unwrap();
        let b = pi1_devissage(&cfg, &o).unwrap();
        assert_eq!(counts(&a, &[1, 2, 3]), counts(&b, &[1, 2, 3]));
    }
}

#[test]
fn splitting_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut checked = 0;
    for _ in 0..40 {
        let cfg = common::random_general_config(&mut rng, 3, 3, 6);
        let orders = all_valid_orders(&cfg);
        if orders.len() < 2 {
            continue;
        }
        checked += 1;
        let base = pi1_devissage(&cfg, &Pi1Options::default()).unwrap();
        for order in orders.into_iter().take(4) {
            let o = Pi1Options {
                order: Some(order.clone()),
                ..Pi1Options::default()
            };
            let r = pi1_devissage(&cfg, &o).unwrap();
            assert_eq!(
                counts(&r, &[2, 3]),
                counts(&base, &[2, 3]),
                "order {order:?}"
            );
        }
    }
    assert!(checked >= 5);
}

#[test]
fn simplification_keeps_raw_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..20 {
        let cfg = common::random_general_config(&mut rng, 3, 3, 6);
        for form in VkForm::ALL {
            let o = Pi1Options {
                form,
                ..Pi1Options::default()
            };
            let r = pi1_devissage(&cfg, &o).unwrap();
            let raw = r.raw_presentation(&cfg).unwrap();
            for d in [2, 3] {
                assert_eq!(
                    count_homs(&raw, d).unwrap(),
                    count_homs(&r.presentation, d).unwrap()
                );
            }
        }
    }
}

#[test]
fn corpus_examples() {
    let c = corpus();
    let o = Pi1Options::default();
    let nodal = pi1_closed_form(&c["nodal"], true, &o).unwrap();
    assert_eq!(
        serde_json::to_value(&nodal.expression).unwrap()["node"],
        "free_group"
    );
    for d in 2..=4 {
        assert_eq!(count_homs(&nodal.presentation, d).unwrap(), fact(d));
    }
    let theta = pi1_devissage(&c["theta"], &o).unwrap();
    assert_eq!(counts(&theta, &[2, 3]), vec![2, 6]);
    let semi = pi1_closed_form(&c["semistable-C2"], true, &o).unwrap();
    assert_eq!(
        counts(&semi, &[2, 3]),
        counts(&pi1_devissage(&c["semistable-C2"], &o).unwrap(), &[2, 3])
    );
    assert!(pi1_closed_form(&c["nontrivial-Z"], true, &o).is_err());
}

#[test]
fn witness_traces() {
    let c = corpus();
    let o = Pi1Options::default();
    let w = class_witness(
        &pi1_closed_form(&c["nodal"], true, &o).unwrap(),
        &c["nodal"],
    )
    .unwrap();
    assert_eq!(
        w.iter().map(|s| s.rule.as_str()).collect::<Vec<_>>(),
        vec![RULE_FREE]
    );
    for name in ["theta", "chain", "nontrivial-devissage", "star"] {
        let r = pi1_devissage(&c[name], &o).unwrap();
        let w = class_witness(&r, &c[name]).unwrap();
        assert!(
            w.iter()
                .filter(|s| s.rule.starts_with("closed under"))
                .count()
                >= 2,
            "{name}"
        );
    }
}

#[test]
fn derivation_records_recursion() {
    let c = corpus();
    let r = pi1_devissage(&c["star"], &Pi1Options::default()).unwrap();
    let splits: Vec<_> = r
        .derivation
        .iter()
        .filter(|s| s.theorem == "devissage-split")
        .collect();
    assert_eq!(splits.len(), 2);
    assert_eq!(r.derivation.last().unwrap().node, "pi1[Z1,Z2,Z3]");
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<Pi1Result>(&text).unwrap(), r);
}
