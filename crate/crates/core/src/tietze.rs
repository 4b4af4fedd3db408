//! Hom-count-preserving simplification of presentations.
//!
//! Moves used: free and cyclic reduction, dropping empty and duplicate
//! relators (duplicates up to rotation and inversion), and eliminating a
//! generator `g` through a relator `g^±1 W` in which `g` occurs once. Each move
//! induces a bijection on `Hom(-, Sym(d))`.

use std::collections::{BTreeMap, BTreeSet};

use crate::presentation::Presentation;
use crate::word::{GeneratorSymbol, Word};

/// Simplified presentation together with the image of every original
/// generator as a word in the surviving ones.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub presentation: Presentation,
    pub substitution: BTreeMap<GeneratorSymbol, Word>,
}

pub fn tietze_simplify(p: &Presentation) -> Presentation {
    tietze_simplify_tracked(p).presentation
}

fn dedup(relators: Vec<Word>) -> Vec<Word> {
    let mut seen = BTreeSet::new();
    relators
        .into_iter()
        .map(|r| r.cyclically_reduced())
        .filter(|r| !r.is_empty() && seen.insert(r.cyclic_key()))
        .collect()
}

/// Finds a relator and a generator occurring in it exactly once with
/// exponent `±1`, preferring short relators.
fn find_elimination(relators: &[Word]) -> Option<(usize, GeneratorSymbol)> {
    let mut order: Vec<usize> = (0..relators.len()).collect();
    order.sort_by_key(|&i| relators[i].length());
    for i in order {
        for (s, _) in relators[i].letters() {
            if relators[i].occurrences(s) == (1, 1) {
                return Some((i, s.clone()));
            }
        }
    }
    None
}

pub fn tietze_simplify_tracked(p: &Presentation) -> Simplified {
    let mut generators: Vec<GeneratorSymbol> = p.generators().to_vec();
    let mut relators = dedup(p.relators().to_vec());
    let mut substitution: BTreeMap<GeneratorSymbol, Word> = generators
        .iter()
        .map(|g| (g.clone(), Word::gen(g)))
        .collect();

    while let Some((ri, g)) = find_elimination(&relators) {
        let r = relators.remove(ri);
        let letters = r.letters();
        let pos = letters.iter().position(|(s, _)| *s == g).unwrap();
        let sign = letters[pos].1;
        let rest = Word::from_letters(
            letters[pos + 1..]
                .iter()
                .chain(letters[..pos].iter())
                .cloned(),
        );
        // g^sign * rest = e
        let value = if sign > 0 { rest.inverse() } else { rest };
        let step: BTreeMap<GeneratorSymbol, Word> = [(g.clone(), value)].into_iter().collect();
        relators = dedup(relators.iter().map(|w| w.substitute(&step)).collect());
        for w in substitution.values_mut() {
            *w = w.substitute(&step);
        }
        generators.retain(|x| *x != g);
    }

    Simplified {
        presentation: Presentation::new(generators, relators)
            .expect("elimination keeps relators inside the surviving alphabet"),
        substitution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcount::count_homs;

    fn sym(n: &str) -> GeneratorSymbol {
        GeneratorSymbol::bare(n)
    }

    fn w(letters: &[(&str, i32)]) -> Word {
        Word::from_letters(letters.iter().map(|(n, e)| (sym(n), *e)))
    }

    #[test]
    fn substitution_case() {
        // < a, b | b a^-1, b^3 > becomes < a | a^3 >.
        let p = Presentation::new(
            vec![sym("a"), sym("b")],
            vec![w(&[("b", 1), ("a", -1)]), w(&[("b", 3)])],
        )
        .unwrap();
        let s = tietze_simplify_tracked(&p);
        assert_eq!(s.presentation.num_generators(), 1);
        assert_eq!(s.presentation.relators().len(), 1);
        assert_eq!(s.presentation.relators()[0].length(), 3);
        for d in 1..=4 {
            assert_eq!(
                count_homs(&s.presentation, d).unwrap(),
                count_homs(&p, d).unwrap()
            );
        }
        let b_image = &s.substitution[&sym("b")];
        assert_eq!(b_image.length(), 1);
    }

    #[test]
    fn free_group_is_a_fixed_point() {
        let f3 = Presentation::free("", 3).unwrap();
        assert_eq!(tietze_simplify(&f3), f3);
    }

    #[test]
    fn duplicate_relators_collapse() {
        let p = Presentation::new(
            vec![sym("a"), sym("b")],
            vec![
                w(&[("a", 2), ("b", 2)]),
                w(&[("b", -2), ("a", -2)]),
                w(&[("b", 2), ("a", 2)]),
            ],
        )
        .unwrap();
        assert_eq!(tietze_simplify(&p).relators().len(), 1);
    }

    #[test]
    fn conjugation_relator_leaves_a_single_generator() {
        // < v, x, y | x^-1 y, v^-1 x v y^-1 > is Z x Z modulo nothing else.
        let p = Presentation::new(
            vec![sym("v"), sym("x"), sym("y")],
            vec![
                w(&[("x", -1), ("y", 1)]),
                w(&[("v", -1), ("x", 1), ("v", 1), ("y", -1)]),
            ],
        )
        .unwrap();
        let q = tietze_simplify(&p);
        for d in 1..=4 {
            assert_eq!(count_homs(&q, d).unwrap(), count_homs(&p, d).unwrap());
        }
    }
}
