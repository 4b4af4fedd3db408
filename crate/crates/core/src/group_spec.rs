//! Finite concrete groups: the desk-scale stand-ins for vertex, singular and
//! branch groups.
//!
//! Every kind carries two views of the same group: a canonical
//! [`Presentation`] (what the hom counter sees) and a faithful permutation
//! realisation (used to evaluate words, e.g. to check that a proposed
//! homomorphism kills the relators of its source).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{closure, Perm};
use crate::presentation::Presentation;
use crate::word::{GeneratorSymbol, Word};

/// Serialised form, `{"kind": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupKind {
    Trivial,
    Cyclic {
        order: usize,
    },
    Symmetric {
        degree: usize,
    },
    Permutation {
        degree: usize,
        /// Generators as image lists on `0..degree`.
        generators: Vec<Vec<u32>>,
    },
    Presented {
        presentation: Presentation,
        /// Image of each generator, in order, under a faithful permutation
        /// representation.
        realization: Vec<Vec<u32>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupKind", into = "GroupKind")]
pub struct GroupSpec {
    kind: GroupKind,
    order: usize,
    presentation: Presentation,
    degree: usize,
    realization: Vec<Perm>,
}

impl TryFrom<GroupKind> for GroupSpec {
    type Error = Error;

    fn try_from(kind: GroupKind) -> Result<Self> {
        GroupSpec::from_kind(kind, DEFAULT_MAX_ORDER)
    }
}

impl From<GroupSpec> for GroupKind {
    fn from(g: GroupSpec) -> Self {
        g.kind
    }
}

const DEFAULT_MAX_ORDER: usize = 5040;

fn gsym(name: String) -> GeneratorSymbol {
    GeneratorSymbol::new("", name).expect("generated names are valid")
}

/// Coxeter presentation of `Sym(k)` on `s1, ..., s{k-1}`.
fn coxeter_presentation(k: usize) -> Presentation {
    let gens: Vec<GeneratorSymbol> = (1..k).map(|i| gsym(format!("s{i}"))).collect();
    let mut rels = Vec::new();
    for i in 0..gens.len() {
        rels.push(Word::letter(gens[i].clone(), 2));
        for j in i + 1..gens.len() {
            let exp = if j == i + 1 { 3 } else { 2 };
            rels.push(Word::from_letters([(gens[i].clone(), 1), (gens[j].clone(), 1)]).power(exp));
        }
    }
    Presentation::new(gens, rels).expect("coxeter presentation is well formed")
}

/// Presentation read off the Cayley graph: one relator per edge outside a
/// breadth-first spanning tree. The relators generate the kernel of the free
/// group onto the group, so this presents it exactly.
fn cayley_presentation(gens: &[Perm], elements: &[Perm]) -> Presentation {
    let symbols: Vec<GeneratorSymbol> = (0..gens.len()).map(|i| gsym(format!("g{i}"))).collect();
    let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // Tree words: elements[0] is the identity and closure() returns them in
    // breadth-first order, each reached by left multiplication.
    let mut tree: Vec<Option<Word>> = vec![None; elements.len()];
    let mut tree_edge = std::collections::HashSet::new();
    tree[0] = Some(Word::empty());
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            let y = index[&g.compose(&elements[x])];
            if tree[y].is_none() {
                tree[y] = Some(Word::gen(&symbols[gi]).concat(tree[x].as_ref().unwrap()));
                tree_edge.insert((x, gi));
                queue.push_back(y);
            }
        }
    }
    let mut rels = Vec::new();
    for x in 0..elements.len() {
        for (gi, g) in gens.iter().enumerate() {
            if tree_edge.contains(&(x, gi)) {
                continue;
            }
            let y = index[&g.compose(&elements[x])];
            let wx = tree[x].as_ref().unwrap();
            let wy = tree[y].as_ref().unwrap();
            rels.push(wy.inverse().concat(&Word::gen(&symbols[gi])).concat(wx));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    rels.retain(|r: &Word| !r.is_empty() && seen.insert(r.cyclic_key()));
    Presentation::new(symbols, rels).expect("cayley presentation is well formed")
}

impl GroupSpec {
    pub fn from_kind(kind: GroupKind, max_order: usize) -> Result<Self> {
        match &kind {
            GroupKind::Trivial => Ok(GroupSpec {
                order: 1,
                presentation: Presentation::trivial(),
                degree: 1,
                realization: Vec::new(),
                kind,
            }),
            GroupKind::Cyclic { order } => {
                let k = *order;
                if k == 0 {
                    return Err(Error::input("cyclic group of order 0"));
                }
                if k > max_order {
                    return Err(order_error(k as u128, max_order));
                }
                let g = gsym("g0".into());
                Ok(GroupSpec {
                    order: k,
                    presentation: Presentation::new(
                        vec![g.clone()],
                        vec![Word::letter(g, k as i32)],
                    )?,
                    degree: k,
                    realization: vec![Perm::cycle(k, k)],
                    kind,
                })
            }
            GroupKind::Symmetric { degree } => {
                let k = *degree;
                if k == 0 {
                    return Err(Error::input("symmetric group of degree 0"));
                }
                let order: u128 = (1..=k as u128).product();
                if order > max_order as u128 {
                    return Err(order_error(order, max_order));
                }
                Ok(GroupSpec {
                    order: order as usize,
                    presentation: coxeter_presentation(k),
                    degree: k,
                    realization: (0..k.saturating_sub(1))
                        .map(|i| Perm::transposition(k, i, i + 1))
                        .collect(),
                    kind,
                })
            }
            GroupKind::Permutation { degree, generators } => {
                let perms = perms_of(*degree, generators)?;
                let elements = closure(*degree, &perms, max_order)?;
                Ok(GroupSpec {
                    order: elements.len(),
                    presentation: cayley_presentation(&perms, &elements),
                    degree: *degree,
                    realization: perms,
                    kind,
                })
            }
            GroupKind::Presented {
                presentation,
                realization,
            } => {
                if realization.len() != presentation.num_generators() {
                    return Err(Error::input(format!(
                        "realization has {} permutations for {} generators",
                        realization.len(),
                        presentation.num_generators()
                    )));
                }
                let degree = realization.first().map_or(1, |p| p.len().max(1));
                let perms = perms_of(degree, realization)?;
                let elements = closure(degree, &perms, max_order)?;
                let spec = GroupSpec {
                    order: elements.len(),
                    presentation: presentation.clone(),
                    degree,
                    realization: perms,
                    kind: kind.clone(),
                };
                for r in presentation.relators() {
                    if !spec.evaluate(r)?.is_identity() {
                        return Err(Error::input(format!(
                            "realization does not satisfy relator {r}"
                        )));
                    }
                }
                Ok(spec)
            }
        }
    }

    pub fn trivial() -> Self {
        GroupSpec::from_kind(GroupKind::Trivial, DEFAULT_MAX_ORDER).unwrap()
    }

    pub fn cyclic(k: usize) -> Result<Self> {
        GroupSpec::from_kind(GroupKind::Cyclic { order: k }, DEFAULT_MAX_ORDER)
    }

    pub fn symmetric(k: usize) -> Result<Self> {
        GroupSpec::from_kind(GroupKind::Symmetric { degree: k }, DEFAULT_MAX_ORDER)
    }

    pub fn permutation(degree: usize, generators: Vec<Vec<u32>>) -> Result<Self> {
        GroupSpec::from_kind(
            GroupKind::Permutation { degree, generators },
            DEFAULT_MAX_ORDER,
        )
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        self.presentation.generators()
    }

    /// Short human-readable label such as `C2` or `S3`.
    pub fn label(&self) -> String {
        match &self.kind {
            GroupKind::Trivial => "1".into(),
            GroupKind::Cyclic { order } => format!("C{order}"),
            GroupKind::Symmetric { degree } => format!("S{degree}"),
            GroupKind::Permutation { .. } => format!("perm[{}]", self.order),
            GroupKind::Presented { .. } => format!("presented[{}]", self.order),
        }
    }

    /// Value of a word over the canonical generators in the permutation
    /// realisation.
    pub fn evaluate(&self, w: &Word) -> Result<Perm> {
        let mut acc = Perm::identity(self.degree);
        for (s, e) in w.letters() {
            let i = self
                .presentation
                .generators()
                .iter()
                .position(|g| g == s)
                .ok_or_else(|| Error::UndeclaredGenerator {
                    symbol: s.to_string(),
                    context: format!("group {}", self.label()),
                })?;
            acc = acc.compose(&self.realization[i].pow(*e as i64));
        }
        Ok(acc)
    }
}

fn order_error(order: u128, max: usize) -> Error {
    Error::Resource {
        what: "group order".into(),
        estimate: order,
        limit: max as u128,
    }
}

fn perms_of(degree: usize, images: &[Vec<u32>]) -> Result<Vec<Perm>> {
    images
        .iter()
        .map(|img| {
            if img.len() != degree {
                return Err(Error::input(format!(
                    "permutation {img:?} does not have degree {degree}"
                )));
            }
            Perm::from_images(img.clone())
        })
        .collect()
}
