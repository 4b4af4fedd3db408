//! Finite presentations and the constructions the van Kampen machinery is
//! built from: coproducts, quotients by relations and fibred coproducts.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homo::Homo;
use crate::word::{GeneratorSymbol, Word};

/// Generators plus relators. An empty relator list is the free group on the
/// generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct Presentation {
    generators: Vec<GeneratorSymbol>,
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    generators: Vec<GeneratorSymbol>,
    relators: Vec<Word>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = Error;

    fn try_from(raw: RawPresentation) -> Result<Self> {
        Presentation::new(raw.generators, raw.relators)
    }
}

impl From<Presentation> for RawPresentation {
    fn from(p: Presentation) -> Self {
        RawPresentation {
            generators: p.generators,
            relators: p.relators,
        }
    }
}

impl Presentation {
    /// Checks generator uniqueness and relator alphabets, and stores relators
    /// cyclically reduced (dropping the ones that reduce to the empty word).
    pub fn new(generators: Vec<GeneratorSymbol>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g) {
                return Err(Error::input(format!("duplicate generator `{g}`")));
            }
        }
        let mut stored = Vec::with_capacity(relators.len());
        for r in relators {
            for s in r.generators() {
                if !seen.contains(&s) {
                    return Err(Error::UndeclaredGenerator {
                        symbol: s.to_string(),
                        context: format!("relator {r}"),
                    });
                }
            }
            let r = r.cyclically_reduced();
            if !r.is_empty() {
                stored.push(r);
            }
        }
        Ok(Presentation {
            generators,
            relators: stored,
        })
    }

    pub fn trivial() -> Self {
        Presentation {
            generators: Vec::new(),
            relators: Vec::new(),
        }
    }

    /// Free group on `x1, ..., x_rank` in the given namespace.
    pub fn free(namespace: &str, rank: usize) -> Result<Self> {
        let generators = (1..=rank)
            .map(|i| GeneratorSymbol::new(namespace, format!("x{i}")))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(generators, Vec::new())
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn has_generator(&self, sym: &GeneratorSymbol) -> bool {
        self.generators.contains(sym)
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    /// Fails with an input error if `w` uses a symbol outside this alphabet.
    pub fn check_word(&self, w: &Word, context: &str) -> Result<()> {
        for s in w.generators() {
            if !self.has_generator(&s) {
                return Err(Error::UndeclaredGenerator {
                    symbol: s.to_string(),
                    context: context.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Re-tags every generator under `tag`.
    pub fn under(&self, tag: &str) -> Presentation {
        Presentation {
            generators: self.generators.iter().map(|g| g.under(tag)).collect(),
            relators: self.relators.iter().map(|r| r.under(tag)).collect(),
        }
    }

    /// Appends relators without re-checking uniqueness of generators.
    pub(crate) fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.extend(extra);
        Presentation::new(self.generators.clone(), relators)
    }

    pub(crate) fn from_parts_unchecked(
        generators: Vec<GeneratorSymbol>,
        relators: Vec<Word>,
    ) -> Self {
        Presentation {
            generators,
            relators,
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< ")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, " | ")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, " >")
    }
}

/// Coproduct of tagged pieces: the generators of each piece are re-tagged
/// under its tag, so the alphabets are disjoint as long as the tags are.
pub fn coproduct(parts: &[(&str, &Presentation)]) -> Result<Presentation> {
    let mut tags = BTreeSet::new();
    let mut generators = Vec::new();
    let mut relators = Vec::new();
    for (tag, p) in parts {
        if !tags.insert(*tag) {
            return Err(Error::Internal(format!(
                "tag `{tag}` used twice in one coproduct"
            )));
        }
        let q = p.under(tag);
        generators.extend(q.generators);
        relators.extend(q.relators);
    }
    let mut seen = BTreeSet::new();
    for g in &generators {
        if !seen.insert(g) {
            return Err(Error::Internal(format!("namespace collision on `{g}`")));
        }
    }
    Ok(Presentation::from_parts_unchecked(generators, relators))
}

/// Free product of two presentations. The factors land under the tags `l`
/// and `r`.
pub fn free_product(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    coproduct(&[("l", p1), ("r", p2)])
}

/// Adds the relators `f * g^-1` for every pair `(f, g)`.
pub fn quotient_by_relations(p: &Presentation, pairs: &[(Word, Word)]) -> Result<Presentation> {
    for (i, (f, g)) in pairs.iter().enumerate() {
        p.check_word(f, &format!("left side of relation {i}"))?;
        p.check_word(g, &format!("right side of relation {i}"))?;
    }
    p.with_relators(pairs.iter().map(|(f, g)| f.concat(&g.inverse())))
}

/// Pushout of `p1 <- a -> p2`: the free product (tags `l`, `r`) quotiented by
/// `psi(x) = phi(x)` for each generator `x` of the common source.
pub fn fibered_coproduct(
    p1: &Presentation,
    p2: &Presentation,
    psi: &Homo,
    phi: &Homo,
) -> Result<Presentation> {
    if psi.source() != phi.source() {
        return Err(Error::InvalidHomo {
            name: "fibred coproduct legs".into(),
            reason: "the two legs have different sources".into(),
        });
    }
    if psi.target() != p1 || phi.target() != p2 {
        return Err(Error::InvalidHomo {
            name: "fibred coproduct legs".into(),
            reason: "leg targets do not match the factors".into(),
        });
    }
    let base = free_product(p1, p2)?;
    let pairs: Vec<(Word, Word)> = psi
        .source()
        .generators()
        .iter()
        .map(|x| (psi.image_of(x).under("l"), phi.image_of(x).under("r")))
        .collect();
    quotient_by_relations(&base, &pairs)
}
