use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::group_spec::GroupSpec;
use crate::homcount::word_vanishes;
use crate::presentation::Presentation;
use crate::word::{GeneratorSymbol, Word};

/// How a homomorphism's well-definedness was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    /// Every source relator evaluated to the identity in a concrete target.
    Evaluated,
    /// Every source relator maps to the empty word or to a cyclic conjugate
    /// of a target relator or its inverse.
    Syntactic,
    /// Every source relator image dies under all homomorphisms of the target
    /// into `Sym(d)` for the listed degrees.
    Semantic { degrees: Vec<usize> },
    /// Nothing could be checked; carried as a proof obligation.
    Obligation,
}

/// Why a word is trivial in a presented group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    FreelyTrivial,
    Relator,
    Semantic { degrees: Vec<usize> },
}

/// Decides whether `w` is trivial in `p`: syntactically when possible,
/// otherwise by hom-count evaluation at `degrees`. `Ok(None)` means some
/// homomorphism into `Sym(d)` sends `w` to a non-identity element, which
/// refutes triviality.
pub fn relation_evidence(
    p: &Presentation,
    w: &Word,
    degrees: &[usize],
    bounds: &Bounds,
) -> Result<Option<Evidence>> {
    let reduced = w.cyclically_reduced();
    if reduced.is_empty() {
        return Ok(Some(Evidence::FreelyTrivial));
    }
    let key = reduced.cyclic_key();
    if p.relators().iter().any(|r| r.cyclic_key() == key) {
        return Ok(Some(Evidence::Relator));
    }
    for &d in degrees {
        if !word_vanishes(p, w, d, bounds)? {
            return Ok(None);
        }
    }
    Ok(Some(Evidence::Semantic {
        degrees: degrees.to_vec(),
    }))
}

/// A homomorphism given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homo {
    source: Presentation,
    target: Presentation,
    images: BTreeMap<GeneratorSymbol, Word>,
    validity: Validity,
}

fn complete_images(
    name: &str,
    source: &Presentation,
    target: &Presentation,
    images: BTreeMap<GeneratorSymbol, Word>,
) -> Result<BTreeMap<GeneratorSymbol, Word>> {
    for k in images.keys() {
        if !source.has_generator(k) {
            return Err(Error::InvalidHomo {
                name: name.into(),
                reason: format!("`{k}` is not a generator of the source"),
            });
        }
    }
    for g in source.generators() {
        match images.get(g) {
            Some(w) => target.check_word(w, &format!("image of `{g}` under {name}"))?,
            None => {
                return Err(Error::InvalidHomo {
                    name: name.into(),
                    reason: format!("no image given for `{g}`"),
                })
            }
        }
    }
    Ok(images)
}

impl Homo {
    /// Homomorphism between concrete groups; checked by evaluating every
    /// source relator in the target's permutation realisation.
    pub fn between(
        name: &str,
        source: &GroupSpec,
        target: &GroupSpec,
        images: BTreeMap<GeneratorSymbol, Word>,
    ) -> Result<Self> {
        let images = complete_images(name, source.presentation(), target.presentation(), images)?;
        for r in source.presentation().relators() {
            let img = r.substitute(&images);
            if !target.evaluate(&img)?.is_identity() {
                return Err(Error::InvalidHomo {
                    name: name.into(),
                    reason: format!(
                        "relator {r} maps to {img}, which is not the identity in {}",
                        target.label()
                    ),
                });
            }
        }
        Ok(Homo {
            source: source.presentation().clone(),
            target: target.presentation().clone(),
            images,
            validity: Validity::Evaluated,
        })
    }

    /// Homomorphism into a presented group. Accepted when every relator
    /// image is syntactically a consequence; otherwise recorded as an
    /// obligation.
    pub fn into_presentation(
        name: &str,
        source: &Presentation,
        target: &Presentation,
        images: BTreeMap<GeneratorSymbol, Word>,
    ) -> Result<Self> {
        let images = complete_images(name, source, target, images)?;
        let syntactic = source.relators().iter().all(|r| {
            let img = r.substitute(&images).cyclically_reduced();
            img.is_empty()
                || target
                    .relators()
                    .iter()
                    .any(|t| t.cyclic_key() == img.cyclic_key())
        });
        Ok(Homo {
            source: source.clone(),
            target: target.clone(),
            images,
            validity: if syntactic {
                Validity::Syntactic
            } else {
                Validity::Obligation
            },
        })
    }

    /// Like [`Homo::into_presentation`], but discharges what syntax cannot by
    /// evaluation at `degrees`; a relator image that survives some
    /// homomorphism into `Sym(d)` makes construction fail.
    pub fn checked(
        name: &str,
        source: &Presentation,
        target: &Presentation,
        images: BTreeMap<GeneratorSymbol, Word>,
        degrees: &[usize],
        bounds: &Bounds,
    ) -> Result<Self> {
        let images = complete_images(name, source, target, images)?;
        let mut validity = Validity::Syntactic;
        for r in source.relators() {
            let img = r.substitute(&images);
            match relation_evidence(target, &img, degrees, bounds)? {
                None => {
                    return Err(Error::InvalidHomo {
                        name: name.into(),
                        reason: format!(
                            "relator {r} maps to {img}, which is non-trivial in the target"
                        ),
                    })
                }
                Some(Evidence::Semantic { degrees }) => validity = Validity::Semantic { degrees },
                Some(_) => {}
            }
        }
        Ok(Homo {
            source: source.clone(),
            target: target.clone(),
            images,
            validity,
        })
    }

    pub fn identity(p: &Presentation) -> Self {
        Homo {
            source: p.clone(),
            target: p.clone(),
            images: p
                .generators()
                .iter()
                .map(|g| (g.clone(), Word::gen(g)))
                .collect(),
            validity: Validity::Syntactic,
        }
    }

    /// The map sending every generator to the identity.
    pub fn trivial(source: &Presentation, target: &Presentation) -> Self {
        Homo {
            source: source.clone(),
            target: target.clone(),
            images: source
                .generators()
                .iter()
                .map(|g| (g.clone(), Word::empty()))
                .collect(),
            validity: Validity::Syntactic,
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &BTreeMap<GeneratorSymbol, Word> {
        &self.images
    }

    pub fn validity(&self) -> &Validity {
        &self.validity
    }

    pub fn image_of(&self, g: &GeneratorSymbol) -> Word {
        self.images.get(g).cloned().unwrap_or_default()
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homo) -> Result<Homo> {
        if self.target != other.source {
            return Err(Error::InvalidHomo {
                name: "composite".into(),
                reason: "target of the first map is not the source of the second".into(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|(g, w)| (g.clone(), other.apply(w)))
            .collect();
        let validity = match (&self.validity, &other.validity) {
            (Validity::Obligation, _) | (_, Validity::Obligation) => Validity::Obligation,
            (Validity::Semantic { degrees }, _) | (_, Validity::Semantic { degrees }) => {
                Validity::Semantic {
                    degrees: degrees.clone(),
                }
            }
            (Validity::Evaluated, Validity::Evaluated) => Validity::Evaluated,
            _ => Validity::Syntactic,
        };
        Ok(Homo {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
            validity,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, Word)]) -> BTreeMap<GeneratorSymbol, Word> {
        pairs
            .iter()
            .map(|(g, w)| (GeneratorSymbol::bare(g), w.clone()))
            .collect()
    }

    fn g0() -> GeneratorSymbol {
        GeneratorSymbol::bare("g0")
    }

    #[test]
    fn c2_into_c4_must_hit_the_square() {
        let c2 = GroupSpec::cyclic(2).unwrap();
        let c4 = GroupSpec::cyclic(4).unwrap();
        assert!(Homo::between("ok", &c2, &c4, map(&[("g0", Word::letter(g0(), 2))])).is_ok());
        let err = Homo::between("bad", &c2, &c4, map(&[("g0", Word::gen(&g0()))])).unwrap_err();
        assert!(matches!(err, Error::InvalidHomo { .. }));
    }

    #[test]
    fn missing_and_foreign_images_are_rejected() {
        let c2 = GroupSpec::cyclic(2).unwrap();
        assert!(Homo::between("m", &c2, &c2, BTreeMap::new()).is_err());
        let stray = map(&[("g0", Word::empty()), ("h", Word::empty())]);
        assert!(Homo::between("f", &c2, &c2, stray).is_err());
        let foreign = map(&[("g0", Word::gen(&GeneratorSymbol::bare("zz")))]);
        assert!(Homo::between("f", &c2, &c2, foreign).is_err());
    }

    #[test]
    fn s3_onto_c2_sign_map() {
        let s3 = GroupSpec::symmetric(3).unwrap();
        let c2 = GroupSpec::cyclic(2).unwrap();
        let sign = map(&[("s1", Word::gen(&g0())), ("s2", Word::gen(&g0()))]);
        assert!(Homo::between("sign", &s3, &c2, sign).is_ok());
        let bad = map(&[("s1", Word::gen(&g0())), ("s2", Word::empty())]);
        assert!(Homo::between("bad", &s3, &c2, bad).is_err());
    }

    #[test]
    fn presentation_targets() {
        let c2 = GroupSpec::cyclic(2).unwrap().presentation().clone();
        let c4 = GroupSpec::cyclic(4).unwrap().presentation().clone();
        let h =
            Homo::into_presentation("sq", &c2, &c4, map(&[("g0", Word::letter(g0(), 2))])).unwrap();
        assert_eq!(h.validity(), &Validity::Syntactic);
        let h = Homo::into_presentation("id", &c2, &c4, map(&[("g0", Word::gen(&g0()))])).unwrap();
        assert_eq!(h.validity(), &Validity::Obligation);
        let err = Homo::checked(
            "id",
            &c2,
            &c4,
            map(&[("g0", Word::gen(&g0()))]),
            &[4],
            &Bounds::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn composition() {
        let c2 = GroupSpec::cyclic(2).unwrap();
        let c4 = GroupSpec::cyclic(4).unwrap();
        let a = Homo::between("a", &c2, &c4, map(&[("g0", Word::letter(g0(), 2))])).unwrap();
        let b = Homo::between("b", &c4, &c4, map(&[("g0", Word::letter(g0(), 3))])).unwrap();
        let ab = a.then(&b).unwrap();
        assert_eq!(ab.image_of(&g0()), Word::letter(g0(), 6));
        assert!(b.then(&a).is_err());
    }
}
