mod common;

use common::{fact, naive_count};
use proetale_core::{
    count_homs, count_transitive_homs, free_product, quotient_by_relations, tietze_simplify,
    tietze_simplify_tracked, GeneratorSymbol, GroupSpec, Presentation, Word,
};
use proptest::prelude::*;

fn sym(i: usize) -> GeneratorSymbol {
    GeneratorSymbol::bare(&format!("a{i}"))
}

fn word_strategy(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(
        (0..gens, prop_oneof![Just(1i32), Just(-1i32), Just(2i32)]),
        0..=max_len,
    )
    .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, e)| (sym(g), e))))
}

fn presentation_strategy(
    max_gens: usize,
    max_rels: usize,
    max_len: usize,
) -> impl Strategy<Value = Presentation> {
    (1..=max_gens).prop_flat_map(move |g| {
        prop::collection::vec(word_strategy(g, max_len), 0..=max_rels)
            .prop_map(move |rels| Presentation::new((0..g).map(sym).collect(), rels).unwrap())
    })
}

#[test]
fn brute_force_agrees_on_named_groups() {
    for g in ["1", "C2", "C3", "C4", "S3"] {
        let p = common::group(g).presentation().clone();
        for d in 1..=4 {
            assert_eq!(count_homs(&p, d).unwrap(), naive_count(&p, d), "{g} at {d}");
        }
    }
}

#[test]
fn free_group_counts() {
    for r in 0..=3 {
        let f = Presentation::free("", r).unwrap();
        for d in 1..=4 {
            assert_eq!(count_homs(&f, d).unwrap(), fact(d).pow(r as u32));
        }
    }
}

#[test]
fn transitive_counts_of_small_groups() {
    // Transitive actions of C2 on two points: the swap only.
    let c2 = GroupSpec::cyclic(2).unwrap();
    assert_eq!(count_transitive_homs(c2.presentation(), 2).unwrap(), 1);
    assert_eq!(count_transitive_homs(c2.presentation(), 3).unwrap(), 0);
    // Z on d points: the d-cycles, (d-1)! of them.
    let z = Presentation::free("", 1).unwrap();
    for d in 1..=5 {
        assert_eq!(count_transitive_homs(&z, d).unwrap(), fact(d - 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_matches_brute_force(p in presentation_strategy(3, 3, 5)) {
        for d in 1..=3 {
            prop_assert_eq!(count_homs(&p, d).unwrap(), naive_count(&p, d));
        }
    }

    #[test]
    fn free_product_multiplies_counts(p in presentation_strategy(2, 2, 4), q in presentation_strategy(2, 2, 4)) {
        let pq = free_product(&p, &q).unwrap();
        for d in 1..=3 {
            prop_assert_eq!(count_homs(&pq, d).unwrap(), count_homs(&p, d).unwrap() * count_homs(&q, d).unwrap());
        }
    }

    #[test]
    fn simplification_preserves_counts(p in presentation_strategy(4, 4, 6)) {
        let s = tietze_simplify(&p);
        prop_assert!(s.num_generators() <= p.num_generators());
        for d in 1..=3 {
            prop_assert_eq!(count_homs(&s, d).unwrap(), count_homs(&p, d).unwrap());
        }
    }

    #[test]
    fn simplification_substitution_is_a_bijection_witness(p in presentation_strategy(3, 3, 5)) {
        // Every homomorphism of the simplified group extends uniquely; the
        // substitution tells us how, and the extension satisfies the old relators.
        let s = tietze_simplify_tracked(&p);
        for at in common::naive_homs(&s.presentation, 3) {
            let full: std::collections::BTreeMap<_, _> = p
                .generators()
                .iter()
                .map(|g| (g.clone(), common::eval(&s.substitution[g], &at, 3)))
                .collect();
            for r in p.relators() {
                prop_assert!(common::eval(r, &full, 3).is_identity());
            }
        }
    }

    #[test]
    fn quotients_never_add_homomorphisms(p in presentation_strategy(3, 2, 4), a in word_strategy(3, 4), b in word_strategy(3, 4)) {
        let keep = |w: &Word| Word::from_letters(w.letters().iter().filter(|(s, _)| p.has_generator(s)).cloned());
        let q = quotient_by_relations(&p, &[(keep(&a), keep(&b))]).unwrap();
        for d in 1..=3 {
            prop_assert!(count_homs(&q, d).unwrap() <= count_homs(&p, d).unwrap());
        }
    }

    #[test]
    fn word_group_laws(a in word_strategy(3, 6), b in word_strategy(3, 6), c in word_strategy(3, 6)) {
        prop_assert!(a.concat(&a.inverse()).is_empty());
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert_eq!(a.concat(&b).inverse(), b.inverse().concat(&a.inverse()));
        prop_assert_eq!(a.cyclically_reduced().cyclic_key(), b.concat(&a).concat(&b.inverse()).cyclically_reduced().cyclic_key());
    }

    #[test]
    fn json_round_trip(p in presentation_strategy(3, 3, 5)) {
        let text = serde_json::to_string(&p).unwrap();
        let back: Presentation = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }
}
